#include "shfront/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace shfront {

namespace {
constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kStripTol = 1e-12;
}  // namespace

std::string to_string(LatticeKind kind) {
    return kind == LatticeKind::Hex ? "hex" : "square";
}

LatticeKind lattice_kind_from_string(const std::string& s) {
    if (s == "hex") return LatticeKind::Hex;
    if (s == "square") return LatticeKind::Square;
    throw std::invalid_argument("unknown lattice kind: " + s);
}

double Vec2::norm() const { return std::hypot(x, y); }

int generator_count(LatticeKind kind) {
    return kind == LatticeKind::Hex ? 3 : 2;
}

Vec2 generator(LatticeKind kind, int j) {
    if (kind == LatticeKind::Hex) {
        switch (j) {
            case 1: return {1.0, 0.0};
            case 2: return {-0.5, kSqrt3 / 2.0};
            case 3: return {-0.5, -kSqrt3 / 2.0};
        }
    } else {
        switch (j) {
            case 1: return {1.0, 0.0};
            case 2: return {0.0, 1.0};
        }
    }
    throw std::invalid_argument("generator index out of range");
}

double LatticeVector::norm() const { return std::sqrt(double(norm_sq_int())); }

LatticeVector make_lattice_vector(LatticeKind kind, int n1, int n2) {
    LatticeVector g;
    g.kind = kind;
    g.n1 = n1;
    g.n2 = n2;
    Vec2 v = generator(kind, 1) * double(n1) + generator(kind, 2) * double(n2);
    g.kx = v.x;
    g.ky = v.y;
    return g;
}

AngleSpec AngleSpec::axis() { return AngleSpec{}; }

AngleSpec AngleSpec::rational(long p, long q) {
    if (p <= 0 || q <= 0) throw std::invalid_argument("angle spec p/q must be positive");
    long g = std::gcd(p, q);
    AngleSpec s;
    s.axis_x = false;
    s.p = p / g;
    s.q = q / g;
    return s;
}

AngleSpec AngleSpec::parse(const std::string& text) {
    if (text == "axis" || text == "0" || text == "AXIS_X") return axis();
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            long p = std::stol(text);
            if (p == 0) return axis();
            return rational(p, 1);
        }
        long p = std::stol(text.substr(0, slash));
        long q = std::stol(text.substr(slash + 1));
        return rational(p, q);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse angle spec '" + text +
                                    "' (expected 'axis', '0' or 'p/q')");
    }
}

std::string AngleSpec::str() const {
    if (axis_x) return "axis";
    return std::to_string(p) + "/" + std::to_string(q);
}

bool AngleSpec::operator==(const AngleSpec& o) const {
    return axis_x == o.axis_x && (axis_x || (p == o.p && q == o.q));
}

double Direction::theta() const { return std::atan2(d.y, d.x); }

double Direction::axial(const LatticeVector& g) const {
    return g.n1 * proj[0] + g.n2 * proj[1];
}

double Direction::transverse(const LatticeVector& g) const {
    return g.n1 * proj_perp[0] + g.n2 * proj_perp[1];
}

Direction make_direction(LatticeKind kind, const AngleSpec& spec) {
    Direction dir;
    dir.kind = kind;
    dir.angle = spec;
    int m = generator_count(kind);
    dir.proj.resize(m);
    dir.proj_perp.resize(m);

    if (spec.axis_x) {
        dir.d = {1.0, 0.0};
        dir.d_perp = {0.0, 1.0};
        if (kind == LatticeKind::Hex) {
            dir.proj = {1.0, -0.5, -0.5};
            dir.proj_perp = {0.0, kSqrt3 / 2.0, -kSqrt3 / 2.0};
        } else {
            dir.proj = {1.0, 0.0};
            dir.proj_perp = {0.0, 1.0};
            dir.degenerate_mode = 1;  // k2
        }
        return dir;
    }

    double p = double(spec.p), q = double(spec.q);
    if (kind == LatticeKind::Hex) {
        // cot(theta) = sqrt(3) p/q; fundamental sector theta in (0, pi/6]
        // corresponds to p/q >= 1.
        if (spec.p < spec.q)
            throw std::invalid_argument("hex angle spec " + spec.str() +
                                        " lies outside the fundamental sector [0, pi/6]");
        double n = std::sqrt(q * q + 3.0 * p * p);
        dir.d = {kSqrt3 * p / n, q / n};
        dir.d_perp = {-q / n, kSqrt3 * p / n};
        // Exact-rational combinations keep d.k2 = 0 exact at p = q.
        dir.proj = {kSqrt3 * p / n, kSqrt3 * (q - p) / (2.0 * n), -kSqrt3 * (p + q) / (2.0 * n)};
        dir.proj_perp = {-q / n, (q + 3.0 * p) / (2.0 * n), (q - 3.0 * p) / (2.0 * n)};
        if (spec.p == spec.q) dir.degenerate_mode = 1;  // theta = pi/6, k2
    } else {
        // cot(theta) = p/q; fundamental sector theta in (0, pi/4), i.e. p/q > 1
        // (theta = pi/4 itself excluded).
        if (spec.p <= spec.q)
            throw std::invalid_argument("square angle spec " + spec.str() +
                                        " lies outside the fundamental sector [0, pi/4)");
        double n = std::hypot(p, q);
        dir.d = {p / n, q / n};
        dir.d_perp = {-q / n, p / n};
        dir.proj = {p / n, q / n};
        dir.proj_perp = {-q / n, p / n};
    }
    return dir;
}

std::vector<LatticeVector> enumerate_lattice(LatticeKind kind, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    // |gamma|^2 is an integer; include ties at |gamma| = radius.
    double rsq = radius * radius;
    long max_nsq = long(std::floor(rsq + 1e-9));
    int bound = int(std::ceil(radius * (kind == LatticeKind::Hex ? 2.0 / kSqrt3 : 1.0))) + 1;
    std::vector<LatticeVector> pts;
    for (int n1 = -bound; n1 <= bound; ++n1) {
        for (int n2 = -bound; n2 <= bound; ++n2) {
            LatticeVector g = make_lattice_vector(kind, n1, n2);
            if (g.norm_sq_int() <= max_nsq) pts.push_back(g);
        }
    }
    std::sort(pts.begin(), pts.end(), [](const LatticeVector& a, const LatticeVector& b) {
        long na = a.norm_sq_int(), nb = b.norm_sq_int();
        if (na != nb) return na < nb;
        if (a.n1 != b.n1) return a.n1 < b.n1;
        return a.n2 < b.n2;
    });
    return pts;
}

StripInfo strip_membership(const LatticeVector& g, const Direction& dir) {
    if (g.kind != dir.kind) throw std::invalid_argument("lattice kind mismatch");
    StripInfo info;
    info.axial = dir.axial(g);
    info.transverse = dir.transverse(g);
    info.in_critical_strip = std::abs(info.transverse) <= 1.0 + kStripTol;
    return info;
}

void write_lattice_csv(std::ostream& os, const std::vector<LatticeVector>& pts,
                       const Direction& dir) {
    os << "n1,n2,kx,ky,axial,transverse,in_strip\n";
    char buf[160];
    for (const auto& g : pts) {
        StripInfo s = strip_membership(g, dir);
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g,%d\n", g.n1, g.n2,
                      g.kx, g.ky, s.axial, s.transverse, s.in_critical_strip ? 1 : 0);
        os << buf;
    }
}

}  // namespace shfront
