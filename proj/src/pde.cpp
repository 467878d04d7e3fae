#include "shfront/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "shfront/amplitude.hpp"
#include "shfront/frontspeed.hpp"

namespace shfront {

namespace {

double phi1(double z) {
    if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-4) return 0.5 + z / 6.0 + z * z / 24.0;
    return (std::expm1(z) - z) / (z * z);
}

}  // namespace

PdeConfig preset_theta0() {
    PdeConfig cfg;
    cfg.angle = AngleSpec::axis();
    cfg.Lx = 40.0 * M_PI;
    cfg.Ly = 4.0 * std::sqrt(3.0) * M_PI;  // three transverse hexagon periods
    cfg.nx = 1024;
    cfg.ny = 96;
    cfg.track.t0 = 20.0;
    cfg.track.t1 = 80.0;
    return cfg;
}

PdeConfig preset_theta30() {
    PdeConfig cfg;
    cfg.angle = AngleSpec::rational(1, 1);
    // Front-aligned frame: the rotated lattice has x-period 4*pi/sqrt(3) and
    // y-period 4*pi.
    cfg.Lx = 32.0 * std::sqrt(3.0) * M_PI;
    cfg.Ly = 4.0 * M_PI;
    cfg.nx = 1536;
    cfg.ny = 64;
    cfg.track.t0 = 30.0;
    cfg.track.t1 = 80.0;
    return cfg;
}

void apply_config_entry(PdeConfig& cfg, const std::string& key, const std::string& value) {
    auto num = [&] { return std::stod(value); };
    if (key == "eps") cfg.eps = num();
    else if (key == "mu0") cfg.mu0 = num();
    else if (key == "beta2") cfg.beta2 = num();
    else if (key == "K0") { cfg.K0 = num(); cfg.coeff_override = true; }
    else if (key == "K2") { cfg.K2 = num(); cfg.coeff_override = true; }
    else if (key == "coeffs") cfg.coeff_override = (value == "override");
    else if (key == "Lx") cfg.Lx = num();
    else if (key == "Ly") cfg.Ly = num();
    else if (key == "nx") cfg.nx = int(num());
    else if (key == "ny") cfg.ny = int(num());
    else if (key == "dt") cfg.dt = num();
    else if (key == "T") cfg.T = num();
    else if (key == "angle") cfg.angle = AngleSpec::parse(value);
    else if (key == "ell") cfg.ell = num();
    else if (key == "phi") cfg.phi = num();
    else if (key == "phi_wrap") cfg.phi_wrap = num();
    else if (key == "snapshot_dt") cfg.snapshot_dt = num();
    else if (key == "stop_fraction") cfg.stop_fraction = num();
    else if (key == "t0") cfg.track.t0 = num();
    else if (key == "t1") cfg.track.t1 = num();
    else if (key == "delta") cfg.track.threshold = num();
    else if (key == "strip_width") cfg.track.strip_width = num();
    else if (key == "strip_norm") {
        if (value == "normalized") cfg.track.normalized = true;
        else if (value == "raw") cfg.track.normalized = false;
        else throw std::invalid_argument("strip_norm must be 'normalized' or 'raw'");
    } else {
        throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
}

std::vector<std::pair<std::string, std::string>> parse_config_file(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line without '=': " + line);
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

struct SpectralSolver::Impl {
    PdeConfig cfg;
    Direction dir;
    std::vector<Vec2> kvec;  // rotated lattice vectors in the computational frame
    double a_hex = 0.0;

    int nx = 0, ny = 0, nyh = 0;
    size_t nreal = 0, ncplx = 0;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    std::vector<std::complex<double>> uh;
    std::vector<double> lin, expo, p1, p2;  // per-mode symbol and ETDRK2 factors
    std::vector<double> kx, ky;
    std::vector<char> keep;  // dealias mask
    std::vector<double> u_phys, ux, uy;
    std::vector<std::complex<double>> n1, n2, stage;
    int step_count = 0;

    explicit Impl(const PdeConfig& c) : cfg(c) {
        nx = cfg.nx;
        ny = cfg.ny;
        nyh = ny / 2 + 1;
        nreal = size_t(nx) * ny;
        ncplx = size_t(nx) * nyh;

        dir = make_direction(LatticeKind::Hex, cfg.angle);
        double ct = dir.d.x, st = dir.d.y;
        for (int j = 1; j <= 3; ++j) {
            Vec2 k = generator(LatticeKind::Hex, j);
            kvec.push_back({ct * k.x + st * k.y, -st * k.x + ct * k.y});
        }
        for (const auto& k : kvec) {
            double mxf = k.x * cfg.Lx / (2.0 * M_PI), myf = k.y * cfg.Ly / (2.0 * M_PI);
            if (std::abs(mxf - std::round(mxf)) > 1e-9 || std::abs(myf - std::round(myf)) > 1e-9)
                throw std::invalid_argument(
                    "domain incompatible with the pattern periods for this angle");
        }

        double K0 = cfg.K0, K2 = cfg.K2;
        if (!cfg.coeff_override) {
            CoefficientSet cs = coefficients_qcsh(cfg.beta(), LatticeKind::Hex);
            K0 = cs.K0;
            K2 = cs.Kcross;
        }
        double s = K0 + 2.0 * K2;
        double disc = cfg.beta2 * cfg.beta2 - 4.0 * cfg.mu0 * s;
        if (disc <= 0.0 || s == 0.0)
            throw std::invalid_argument("hexagon amplitude undefined for these coefficients");
        a_hex = (-cfg.beta2 - std::sqrt(disc)) / (2.0 * s);

        real_buf = fftw_alloc_real(nreal);
        cplx_buf = fftw_alloc_complex(ncplx);
        fwd = fftw_plan_dft_r2c_2d(nx, ny, real_buf, cplx_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(nx, ny, cplx_buf, real_buf, FFTW_ESTIMATE);

        uh.assign(ncplx, {0.0, 0.0});
        n1.assign(ncplx, {0.0, 0.0});
        n2.assign(ncplx, {0.0, 0.0});
        stage.assign(ncplx, {0.0, 0.0});
        u_phys.assign(nreal, 0.0);
        ux.assign(nreal, 0.0);
        uy.assign(nreal, 0.0);

        kx.resize(nx);
        for (int i = 0; i < nx; ++i) {
            int ii = i <= nx / 2 ? i : i - nx;
            kx[i] = 2.0 * M_PI * ii / cfg.Lx;
        }
        ky.resize(nyh);
        for (int j = 0; j < nyh; ++j) ky[j] = 2.0 * M_PI * j / cfg.Ly;

        lin.resize(ncplx);
        expo.resize(ncplx);
        p1.resize(ncplx);
        p2.resize(ncplx);
        keep.resize(ncplx);
        double mu = cfg.mu();
        for (int i = 0; i < nx; ++i) {
            int ii = i <= nx / 2 ? i : i - nx;
            for (int j = 0; j < nyh; ++j) {
                size_t idx = size_t(i) * nyh + j;
                double k2 = kx[i] * kx[i] + ky[j] * ky[j];
                double L = -(1.0 - k2) * (1.0 - k2) + mu;
                lin[idx] = L;
                double z = L * cfg.dt;
                expo[idx] = std::exp(z);
                p1[idx] = cfg.dt * phi1(z);
                p2[idx] = cfg.dt * phi2(z);
                keep[idx] = (std::abs(ii) <= nx / 3 && j <= ny / 3) ? 1 : 0;
            }
        }
    }

    ~Impl() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }

    void to_physical(const std::vector<std::complex<double>>& src, std::vector<double>& dst,
                     bool derivative_x, bool derivative_y) {
        for (size_t i = 0; i < ncplx; ++i) {
            std::complex<double> v = src[i];
            if (derivative_x) v *= std::complex<double>(0.0, kx[i / nyh]);
            if (derivative_y) v *= std::complex<double>(0.0, ky[i % nyh]);
            cplx_buf[i][0] = v.real();
            cplx_buf[i][1] = v.imag();
        }
        fftw_execute(bwd);
        std::memcpy(dst.data(), real_buf, nreal * sizeof(double));
    }

    void nonlinearity(const std::vector<std::complex<double>>& in,
                      std::vector<std::complex<double>>& out) {
        to_physical(in, u_phys, false, false);
        to_physical(in, ux, true, false);
        to_physical(in, uy, false, true);
        double beta = cfg.beta();
        bool cubic = cfg.cubic_term;
        for (size_t i = 0; i < nreal; ++i) {
            double u = u_phys[i];
            double n = -beta * (ux[i] * ux[i] + uy[i] * uy[i]);
            if (cubic) n -= u * u * u;
            real_buf[i] = n;
        }
        fftw_execute(fwd);
        double scale = 1.0 / double(nreal);
        for (size_t i = 0; i < ncplx; ++i)
            out[i] = keep[i] ? std::complex<double>(cplx_buf[i][0], cplx_buf[i][1]) * scale
                             : std::complex<double>(0.0, 0.0);
    }

    void step() {
        nonlinearity(uh, n1);
        for (size_t i = 0; i < ncplx; ++i) stage[i] = expo[i] * uh[i] + p1[i] * n1[i];
        nonlinearity(stage, n2);
        for (size_t i = 0; i < ncplx; ++i) uh[i] = stage[i] + p2[i] * (n2[i] - n1[i]);
        ++step_count;
        for (size_t i = 0; i < ncplx; i += 97)
            if (!std::isfinite(uh[i].real()) || !std::isfinite(uh[i].imag()))
                throw BlowUpError(step_count);
    }

    void from_field(const std::vector<double>& vals) {
        std::memcpy(real_buf, vals.data(), nreal * sizeof(double));
        fftw_execute(fwd);
        double scale = 1.0 / double(nreal);
        for (size_t i = 0; i < ncplx; ++i)
            uh[i] = keep[i] ? std::complex<double>(cplx_buf[i][0], cplx_buf[i][1]) * scale
                            : std::complex<double>(0.0, 0.0);
    }
};

SpectralSolver::SpectralSolver(const PdeConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
SpectralSolver::~SpectralSolver() = default;

void SpectralSolver::init_front() {
    const PdeConfig& cfg = impl_->cfg;
    std::vector<double> vals(impl_->nreal);
    double Lx = cfg.Lx;
    for (int i = 0; i < impl_->nx; ++i) {
        double x = double(i) * Lx / impl_->nx;
        double env = 0.5 * (1.0 - std::tanh((x - cfg.phi) / cfg.ell)) +
                     0.5 * (1.0 + std::tanh((x - (Lx - cfg.phi_wrap)) / cfg.ell));
        for (int j = 0; j < impl_->ny; ++j) {
            double y = double(j) * cfg.Ly / impl_->ny;
            double pat = 0.0;
            for (const auto& k : impl_->kvec) pat += std::cos(k.x * x + k.y * y);
            vals[size_t(i) * impl_->ny + j] = cfg.eps * impl_->a_hex * pat * env;
        }
    }
    impl_->from_field(vals);
    impl_->step_count = 0;
}

void SpectralSolver::set_field(const Field2D& f) {
    if (f.nx != impl_->nx || f.ny != impl_->ny)
        throw std::invalid_argument("field resolution mismatch");
    impl_->from_field(f.values);
}

Field2D SpectralSolver::field() const {
    Field2D f;
    f.nx = impl_->nx;
    f.ny = impl_->ny;
    f.Lx = impl_->cfg.Lx;
    f.Ly = impl_->cfg.Ly;
    // spectral collocation points sit at i*dx, so shift cell centers back
    f.x0 = -0.5 * impl_->cfg.Lx / impl_->nx;
    f.y0 = -0.5 * impl_->cfg.Ly / impl_->ny;
    f.values.resize(impl_->nreal);
    const_cast<Impl*>(impl_.get())->to_physical(impl_->uh, f.values, false, false);
    return f;
}

void SpectralSolver::step() { impl_->step(); }
int SpectralSolver::step_index() const { return impl_->step_count; }
double SpectralSolver::time() const { return impl_->step_count * impl_->cfg.dt; }

std::complex<double> SpectralSolver::mode(int ix, int iy) const {
    int i = ix >= 0 ? ix : ix + impl_->nx;
    return impl_->uh[size_t(i) * impl_->nyh + iy];
}

void SpectralSolver::set_mode(int ix, int iy, std::complex<double> v) {
    int i = ix >= 0 ? ix : ix + impl_->nx;
    impl_->uh[size_t(i) * impl_->nyh + iy] = v;
}

double SpectralSolver::high_mode_energy_fraction() const {
    double low = 0.0, high = 0.0;
    for (size_t i = 0; i < impl_->ncplx; ++i) {
        double e = std::norm(impl_->uh[i]);
        int j = int(i % impl_->nyh);
        double w = (j == 0 || j == impl_->ny / 2) ? 1.0 : 2.0;  // half-spectrum weight
        (impl_->keep[i] ? low : high) += w * e;
    }
    double total = low + high;
    return total > 0.0 ? high / total : 0.0;
}

FrontFrame SpectralSolver::frame() const {
    FrontFrame fr;
    fr.t = time();
    fr.column_ms.assign(impl_->nx, 0.0);
    const_cast<Impl*>(impl_.get())->to_physical(impl_->uh, impl_->u_phys, false, false);
    for (int i = 0; i < impl_->nx; ++i) {
        double s = 0.0;
        for (int j = 0; j < impl_->ny; ++j) {
            double v = impl_->u_phys[size_t(i) * impl_->ny + j];
            s += v * v;
        }
        fr.column_ms[i] = s / impl_->ny;
    }
    return fr;
}

const PdeConfig& SpectralSolver::config() const { return impl_->cfg; }
double SpectralSolver::hex_amplitude() const { return impl_->a_hex; }
const std::vector<Vec2>& SpectralSolver::lattice_vectors() const { return impl_->kvec; }

FrontSpeedReport track_front(const std::vector<FrontFrame>& frames, const PdeConfig& cfg) {
    if (frames.empty()) throw std::invalid_argument("no frames to track");
    int nx = int(frames.front().column_ms.size());
    double dx = cfg.Lx / nx;
    int w = std::max(1, int(std::lround(cfg.track.strip_width / dx)));
    double area_factor = cfg.track.normalized ? 1.0 : cfg.track.strip_width * cfg.Ly;

    FrontSpeedReport rep;
    Direction dir = make_direction(LatticeKind::Hex, cfg.angle);
    double kperp = std::numeric_limits<double>::infinity();
    for (double pp : dir.proj_perp) kperp = std::abs(pp) < std::abs(kperp) ? pp : kperp;
    rep.c_pred = marginal_leading(kperp, cfg.mu0, cfg.eps).c;

    bool any_above = false;
    for (const auto& fr : frames) {
        // circular strip sums of the column mean-squares
        std::vector<double> strip(nx);
        double acc = 0.0;
        for (int i = 0; i < w; ++i) acc += fr.column_ms[i % nx];
        for (int i = 0; i < nx; ++i) {
            strip[i] = std::sqrt(acc / w * area_factor);
            acc -= fr.column_ms[i];
            acc += fr.column_ms[(i + w) % nx];
        }
        double xf = std::numeric_limits<double>::quiet_NaN();
        for (int i = nx - 1; i >= 0; --i) {
            bool above = strip[i] > cfg.track.threshold;
            bool next_above = strip[(i + w) % nx] > cfg.track.threshold;
            if (above && !next_above) {
                xf = i * dx;
                break;
            }
        }
        if (*std::max_element(strip.begin(), strip.end()) > cfg.track.threshold) any_above = true;
        rep.times.push_back(fr.t);
        rep.x_f.push_back(xf);
    }
    if (!any_above) throw std::runtime_error("no frame exceeds the front threshold");

    // Fit window: consecutive valid frames in [t0, t1]; tracking ends at the
    // first frame past t0 with no front edge or x_f beyond the stop fraction
    // (wrap interface approaching).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    rep.fit_t0 = cfg.track.t0;
    rep.fit_t1 = cfg.track.t1;
    for (size_t i = 0; i < rep.times.size(); ++i) {
        double t = rep.times[i];
        if (t < cfg.track.t0) continue;
        if (t > cfg.track.t1) break;
        double xf = rep.x_f[i];
        if (!std::isfinite(xf) || xf > cfg.stop_fraction * cfg.Lx) {
            rep.fit_t1 = t;
            break;
        }
        sx += t;
        sy += xf;
        sxx += t * t;
        sxy += t * xf;
        ++n;
    }
    if (n < 2) throw std::runtime_error("fewer than two valid frames in the fit window");
    rep.frames_used = n;
    rep.fitted_speed = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.relative_error = std::abs(rep.fitted_speed - rep.c_pred) / rep.c_pred;
    return rep;
}

FrontSpeedReport run_experiment(const PdeConfig& cfg, std::vector<Field2D>* snapshots) {
    SpectralSolver solver(cfg);
    solver.init_front();
    int nsteps = int(std::lround(cfg.T / cfg.dt));
    int per_frame = std::max(1, int(std::lround(cfg.snapshot_dt / cfg.dt)));
    std::vector<FrontFrame> frames;
    auto maybe_dump = [&](double t) {
        if (!snapshots) return;
        for (double td : cfg.field_dump_times)
            if (std::abs(td - t) < 0.5 * cfg.dt) snapshots->push_back(solver.field());
    };
    frames.push_back(solver.frame());
    maybe_dump(0.0);
    for (int s = 1; s <= nsteps; ++s) {
        solver.step();
        if (s % per_frame == 0) frames.push_back(solver.frame());
        maybe_dump(solver.time());
    }
    return track_front(frames, cfg);
}

void write_front_report_csv(std::ostream& os, const FrontSpeedReport& rep) {
    os << "t,x_f\n";
    char buf[128];
    for (size_t i = 0; i < rep.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", rep.times[i], rep.x_f[i]);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "fitted,%.17g,c_pred,%.17g,rel_err,%.17g\n", rep.fitted_speed,
                  rep.c_pred, rep.relative_error);
    os << buf;
}

}  // namespace shfront
