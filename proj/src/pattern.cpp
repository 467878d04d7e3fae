#include "shfront/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace shfront {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("interpolant needs >= 2 nodes");
    std::vector<double> d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        double h = x_[i + 1] - x_[i];
        if (h <= 0.0) throw std::invalid_argument("interpolation grid must increase");
        d[i] = (y_[i + 1] - y_[i]) / h;
    }
    m_.resize(n);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
            m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    // Fritsch-Carlson limiter
    for (size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
        } else {
            double a = m_[i] / d[i], b = m_[i + 1] / d[i];
            double s = a * a + b * b;
            if (s > 9.0) {
                double t = 3.0 / std::sqrt(s);
                m_[i] = t * a * d[i];
                m_[i + 1] = t * b * d[i];
            }
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = size_t(it - x_.begin()) - 1;
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * m_[i + 1];
}

Field2D sample_equilibrium_pattern(std::span<const double> A, double eps, LatticeKind kind,
                                   const GridSpec& grid) {
    if (grid.Lx <= 0.0 || grid.Ly <= 0.0 || grid.nx <= 0 || grid.ny <= 0)
        throw std::invalid_argument("grid extents must be positive");
    int m = generator_count(kind);
    if (int(A.size()) != m) throw std::invalid_argument("amplitude count mismatch");
    Field2D f;
    f.nx = grid.nx;
    f.ny = grid.ny;
    f.Lx = grid.Lx;
    f.Ly = grid.Ly;
    f.x0 = grid.x0;
    f.y0 = grid.y0;
    f.values.assign(size_t(grid.nx) * grid.ny, 0.0);
    for (int i = 0; i < grid.nx; ++i) {
        double x = f.cell_x(i);
        for (int j = 0; j < grid.ny; ++j) {
            double y = f.cell_y(j);
            double u = 0.0;
            for (int k = 0; k < m; ++k) {
                Vec2 kv = generator(kind, k + 1);
                u += A[k] * std::cos(kv.x * x + kv.y * y);
            }
            f.at(i, j) = 2.0 * eps * u;
        }
    }
    return f;
}

Field2D sample_interface(const OrbitTrace& orbit, const AmplitudeSystem& sys, double eps,
                         double t, const GridSpec& grid, double amplification) {
    if (orbit.source_branch.empty() || orbit.target_branch.empty())
        throw std::invalid_argument("sample_interface needs endpoint labels on the orbit");
    int m = sys.mode_count();

    std::vector<MonotoneCubic> interp;
    for (int j = 0; j < m; ++j) {
        std::vector<double> ys(orbit.xi.size());
        for (size_t i = 0; i < orbit.xi.size(); ++i) ys[i] = orbit.states[i][sys.a_index(j)];
        interp.emplace_back(orbit.xi, std::move(ys));
    }
    // MonotoneCubic clamps to the end values; pin those to the labelled
    // equilibria (the trace ends within converge_radius of them anyway).
    double xi_lo = orbit.xi.front(), xi_hi = orbit.xi.back();

    Field2D f;
    f.nx = grid.nx;
    f.ny = grid.ny;
    f.Lx = grid.Lx;
    f.Ly = grid.Ly;
    f.x0 = grid.x0;
    f.y0 = grid.y0;
    f.values.assign(size_t(grid.nx) * grid.ny, 0.0);
    const Direction& dir = sys.dir();
    double c0 = sys.params().c0;
    LatticeKind kind = sys.params().kind;
    for (int i = 0; i < grid.nx; ++i) {
        double x = f.cell_x(i);
        for (int j = 0; j < grid.ny; ++j) {
            double y = f.cell_y(j);
            double xi = eps * (dir.d.x * x + dir.d.y * y - eps * c0 * t);
            double u = 0.0;
            for (int k = 0; k < m; ++k) {
                double A;
                if (xi <= xi_lo) A = orbit.source_amplitudes[k];
                else if (xi >= xi_hi) A = orbit.target_amplitudes[k];
                else A = interp[k](xi);
                Vec2 kv = generator(kind, k + 1);
                u += A * std::cos(kv.x * x + kv.y * y);
            }
            f.at(i, j) = amplification * 2.0 * eps * u;
        }
    }
    return f;
}

void write_field_csv(std::ostream& os, const Field2D& f) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g\n", f.nx, f.ny, f.Lx, f.Ly,
                  f.x0, f.y0);
    os << buf;
    for (size_t i = 0; i < f.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", f.values[i]);
        os << buf;
    }
}

void write_field_pgm(std::ostream& os, const Field2D& f) {
    double lo = f.values.empty() ? 0.0 : f.values[0], hi = lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi > lo ? hi - lo : 1.0;
    char buf[160];
    os << "P2\n";
    std::snprintf(buf, sizeof(buf), "# min %.17g max %.17g\n", lo, hi);
    os << buf;
    os << f.nx << " " << f.ny << "\n255\n";
    // PGM rows run top to bottom; emit j descending so y points up.
    for (int j = f.ny - 1; j >= 0; --j) {
        for (int i = 0; i < f.nx; ++i) {
            int g = int(std::lround((f.at(i, j) - lo) / span * 255.0));
            os << g << (i + 1 == f.nx ? '\n' : ' ');
        }
    }
}

}  // namespace shfront
