#include "shfront/connect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace shfront {

namespace {

// Dormand-Prince 5(4) tableau with the Hairer dense-output coefficients.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

using Vec = Eigen::VectorXd;

struct DenseSegment {
    double t0 = 0.0, h = 0.0;
    Vec c1, c2, c3, c4, c5;

    Vec eval(double t) const {
        double th = (t - t0) / h, th1 = 1.0 - th;
        return c1 + th * (c2 + th1 * (c3 + th * (c4 + th1 * c5)));
    }
};

class Stepper {
public:
    Stepper(const AmplitudeSystem& sys, const IntegrateOptions& opt)
        : sys_(sys), opt_(opt), n_(sys.dim()) {}

    void start(const Vec& y0) {
        y_ = y0;
        t_ = 0.0;
        k1_ = sys_.rhs(y_);
        h_ = opt_.initial_step;
        facold_ = 1e-4;
    }

    /// One accepted step; returns false on step-size underflow.
    bool step() {
        const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
        const double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
        for (int attempt = 0; attempt < 64; ++attempt) {
            if (!(h_ > 1e-14 * (1.0 + std::abs(t_)))) return false;
            using T = Dopri5;
            Vec k2 = sys_.rhs(y_ + h_ * (T::a21 * k1_));
            Vec k3 = sys_.rhs(y_ + h_ * (T::a31 * k1_ + T::a32 * k2));
            Vec k4 = sys_.rhs(y_ + h_ * (T::a41 * k1_ + T::a42 * k2 + T::a43 * k3));
            Vec k5 = sys_.rhs(y_ + h_ * (T::a51 * k1_ + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
            Vec k6 = sys_.rhs(y_ +
                              h_ * (T::a61 * k1_ + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 +
                                    T::a65 * k5));
            Vec ynew = y_ + h_ * (T::b1 * k1_ + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
            Vec k7 = sys_.rhs(ynew);
            Vec err_v = h_ * (T::e1 * k1_ + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 +
                              T::e7 * k7);
            double err = 0.0;
            for (int i = 0; i < n_; ++i) {
                double sc = opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                double q = err_v[i] / sc;
                err += q * q;
            }
            err = std::sqrt(err / n_);
            if (!std::isfinite(err)) {
                h_ *= 0.25;
                continue;
            }
            double fac11 = std::pow(std::max(err, 1e-16), expo1);
            if (err <= 1.0) {
                // accept; build the dense segment
                seg_.t0 = t_;
                seg_.h = h_;
                Vec ydiff = ynew - y_;
                Vec bspl = h_ * k1_ - ydiff;
                seg_.c1 = y_;
                seg_.c2 = ydiff;
                seg_.c3 = bspl;
                seg_.c4 = ydiff - h_ * k7 - bspl;
                seg_.c5 = h_ * (T::d1 * k1_ + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 +
                                T::d7 * k7);
                t_ += h_;
                y_ = ynew;
                k1_ = k7;  // FSAL
                double fac = fac11 / std::pow(facold_, beta);
                fac = std::max(facc2, std::min(facc1, fac / safe));
                h_ = h_ / fac;
                facold_ = std::max(err, 1e-4);
                return true;
            }
            h_ = h_ / std::min(facc1, fac11 / safe);
        }
        return false;
    }

    double t() const { return t_; }
    const Vec& y() const { return y_; }
    const DenseSegment& segment() const { return seg_; }
    void clamp_step(double hmax) { h_ = std::min(h_, hmax); }

private:
    const AmplitudeSystem& sys_;
    IntegrateOptions opt_;
    int n_;
    Vec y_, k1_;
    double t_ = 0.0, h_ = 0.0, facold_ = 1e-4;
    DenseSegment seg_;
};

double state_energy(const AmplitudeSystem& sys, const Vec& y) {
    return sys.lyapunov(std::span<const double>(y.data(), y.size()));
}

}  // namespace

std::string to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::Completed: return "completed";
        case TraceStatus::Converged: return "converged";
        case TraceStatus::Escaped: return "escaped";
        case TraceStatus::Diverged: return "diverged";
        case TraceStatus::Timeout: return "timeout";
    }
    return "?";
}

OrbitTrace integrate(const AmplitudeSystem& sys, const Eigen::VectorXd& y0, double xi_end,
                     const IntegrateOptions& opt, const StopSpec* stop) {
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
        throw std::invalid_argument("integrate needs positive tolerances");
    if (!std::isfinite(xi_end) || xi_end <= 0.0)
        throw std::invalid_argument("integrate needs a finite positive span");

    OrbitTrace trace;
    trace.variant = sys.variant();
    Stepper st(sys, opt);
    st.start(y0);

    auto emit = [&](double t, const Vec& y) {
        trace.xi.push_back(t);
        trace.states.push_back(y);
        trace.energies.push_back(state_energy(sys, y));
    };
    emit(0.0, y0);

    trace.status = TraceStatus::Completed;
    while (st.t() < xi_end) {
        st.clamp_step(xi_end - st.t());
        if (!st.step()) {
            trace.status = TraceStatus::Diverged;
            emit(st.t(), st.y());
            return trace;
        }
        const DenseSegment& seg = st.segment();
        double h_prev = trace.energies.back();
        double h_new = state_energy(sys, st.y());
        double want = std::ceil(std::abs(h_prev - h_new) / opt.max_dh_per_node);
        // node-density contract applies to bounded orbits; cap the
        // subdivision so escaping solutions cannot flood the trace
        int pieces = int(std::clamp(want, 1.0, 1024.0));
        for (int p = 1; p <= pieces; ++p) {
            double tq = seg.t0 + seg.h * double(p) / double(pieces);
            Vec yq = p == pieces ? st.y() : seg.eval(tq);
            emit(tq, yq);
        }
        if (stop) {
            double dist = (st.y() - stop->target).norm();
            if (dist < stop->converge_radius) {
                trace.status = TraceStatus::Converged;
                return trace;
            }
            if (st.y().norm() > stop->escape_radius) {
                trace.status = TraceStatus::Escaped;
                return trace;
            }
        }
    }
    if (stop) trace.status = TraceStatus::Timeout;
    return trace;
}

Eigen::MatrixXd unstable_frame(std::span<const double> amplitudes, const AmplitudeSystem& sys) {
    Vec x = sys.embed_amplitudes(amplitudes);
    Eigen::MatrixXd J = sys.jacobian(std::span<const double>(x.data(), x.size()));
    Eigen::EigenSolver<Eigen::MatrixXd> es(J);

    struct Entry {
        std::complex<double> lambda;
        Eigen::VectorXcd vec;
    };
    std::vector<Entry> unstable;
    for (int i = 0; i < sys.dim(); ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        if (std::abs(z.real()) < 1e-8)
            throw MarginalSpectrumError("marginal spatial eigenvalue; unstable frame undefined");
        if (z.real() > 0.0 && z.imag() >= 0.0)
            unstable.push_back({z, es.eigenvectors().col(i)});
    }
    std::sort(unstable.begin(), unstable.end(), [](const Entry& a, const Entry& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });

    std::vector<Vec> cols;
    for (const auto& e : unstable) {
        Vec re = e.vec.real(), im = e.vec.imag();
        if (re.norm() > 1e-12) cols.push_back(re / re.norm());
        if (std::abs(e.lambda.imag()) > 1e-12 && im.norm() > 1e-12) cols.push_back(im / im.norm());
    }
    if (cols.empty()) return Eigen::MatrixXd(sys.dim(), 0);
    Eigen::MatrixXd M(sys.dim(), int(cols.size()));
    for (int c = 0; c < int(cols.size()); ++c) M.col(c) = cols[c];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(sys.dim(), M.cols());
    // Fix the sign convention: largest-magnitude entry of each column positive.
    for (int c = 0; c < Q.cols(); ++c) {
        int imax = 0;
        for (int r = 1; r < Q.rows(); ++r)
            if (std::abs(Q(r, c)) > std::abs(Q(imax, c))) imax = r;
        if (Q(imax, c) < 0.0) Q.col(c) = -Q.col(c);
    }
    return Q;
}

namespace {

std::vector<Vec> sphere_seeds(const Eigen::MatrixXd& frame, int density,
                              const std::vector<Vec>& extra) {
    int k = int(frame.cols());
    std::vector<Vec> seeds;
    if (k == 1) {
        seeds.push_back(frame.col(0));
        seeds.push_back(-frame.col(0));
    } else if (k == 2) {
        for (int i = 0; i < density; ++i) {
            double th = 2.0 * M_PI * double(i) / double(density);
            seeds.push_back(std::cos(th) * frame.col(0) + std::sin(th) * frame.col(1));
        }
    } else if (k == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < density; ++i) {
            double z = 1.0 - 2.0 * (double(i) + 0.5) / double(density);
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = golden * double(i);
            seeds.push_back(r * std::cos(th) * frame.col(0) + r * std::sin(th) * frame.col(1) +
                            z * frame.col(2));
        }
    } else if (k > 3) {
        throw std::runtime_error("unstable frames of dimension > 3 do not occur in these systems");
    }
    for (const auto& v : extra)
        if (v.norm() > 0.0) seeds.push_back(v / v.norm());
    return seeds;
}

}  // namespace

ShootResult shoot(const EquilibriumRecord& source, const EquilibriumRecord& target,
                  const AmplitudeSystem& sys, const ShootConfig& cfg) {
    ShootResult res;
    if (!source.exists || !target.exists)
        throw std::invalid_argument("shoot needs existing source and target equilibria");

    Vec x_src = sys.embed_amplitudes(source.amplitudes);
    Vec x_tgt = sys.embed_amplitudes(target.amplitudes);

    Eigen::MatrixXd frame = unstable_frame(source.amplitudes, sys);
    if (frame.cols() == 0) {
        res.message = "source has no unstable directions";
        return res;
    }

    StopSpec stop;
    stop.target = x_tgt;
    stop.converge_radius = cfg.converge_radius;
    stop.escape_radius = cfg.escape_radius > 0.0 ? cfg.escape_radius : 10.0 * x_src.norm() + 10.0;
    double xi_max = cfg.xi_max > 0.0 ? cfg.xi_max : 500.0 / sys.params().c0;

    IntegrateOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;

    auto run_seed = [&](const Vec& v) {
        Vec y0 = x_src + cfg.eps_shoot * v;
        return integrate(sys, y0, xi_max, opt, &stop);
    };

    std::vector<Vec> seeds = sphere_seeds(frame, cfg.seed_density, cfg.extra_seeds);
    double best_metric = std::numeric_limits<double>::infinity();
    int best = -1;
    bool best_converged = false;
    for (int i = 0; i < int(seeds.size()); ++i) {
        OrbitTrace tr = run_seed(seeds[i]);
        bool conv = tr.status == TraceStatus::Converged;
        double metric;
        if (conv) {
            metric = (tr.back() - x_tgt).norm();
        } else {
            metric = std::numeric_limits<double>::infinity();
            for (const auto& s : tr.states) metric = std::min(metric, (s - x_tgt).norm());
        }
        // converged orbits always beat misses; ties by seed index
        if ((conv && !best_converged) ||
            (conv == best_converged && metric < best_metric)) {
            best = i;
            best_metric = metric;
            best_converged = conv;
        }
    }

    Vec v_best = seeds[best];
    if (best_converged && frame.cols() >= 2 && cfg.refine_iters > 0 &&
        best < cfg.seed_density) {  // grid seeds only; explicit extras stay as given
        // Reference horizon: where the winning seed converged.
        OrbitTrace ref = run_seed(v_best);
        double xi_ref = ref.xi.back();
        StopSpec noconv = stop;
        noconv.converge_radius = 0.0;
        auto objective = [&](const Vec& v) {
            Vec y0 = x_src + cfg.eps_shoot * (v / v.norm());
            OrbitTrace tr = integrate(sys, y0, xi_ref, opt, &noconv);
            return (tr.back() - x_tgt).norm();
        };
        if (frame.cols() == 2) {
            // golden-section on the seed angle around the winning grid node
            double th0 = 2.0 * M_PI * double(best) / double(cfg.seed_density);
            double span = 2.0 * M_PI / double(cfg.seed_density);
            double a = th0 - span, b = th0 + span;
            const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
            auto at = [&](double th) {
                return Vec(std::cos(th) * frame.col(0) + std::sin(th) * frame.col(1));
            };
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = objective(at(x1)), f2 = objective(at(x2));
            for (int it = 0; it < cfg.refine_iters; ++it) {
                if (f1 < f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = objective(at(x1));
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = objective(at(x2));
                }
            }
            Vec cand = at(0.5 * (a + b));
            if (objective(cand) <= best_metric) v_best = cand;
        } else {
            // Nelder-Mead on spherical coordinates
            auto at = [&](double th, double ph) {
                return Vec(std::sin(ph) * std::cos(th) * frame.col(0) +
                           std::sin(ph) * std::sin(th) * frame.col(1) + std::cos(ph) * frame.col(2));
            };
            double z = v_best.dot(frame.col(2));
            double th0 = std::atan2(v_best.dot(frame.col(1)), v_best.dot(frame.col(0)));
            double ph0 = std::acos(std::clamp(z, -1.0, 1.0));
            double step = M_PI / std::sqrt(double(cfg.seed_density));
            std::array<Eigen::Vector2d, 3> simplex = {Eigen::Vector2d(th0, ph0),
                                                      Eigen::Vector2d(th0 + step, ph0),
                                                      Eigen::Vector2d(th0, ph0 + step)};
            std::array<double, 3> fv;
            for (int i = 0; i < 3; ++i) fv[i] = objective(at(simplex[i][0], simplex[i][1]));
            for (int it = 0; it < cfg.refine_iters; ++it) {
                std::array<int, 3> ord = {0, 1, 2};
                std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
                Eigen::Vector2d centroid = 0.5 * (simplex[ord[0]] + simplex[ord[1]]);
                Eigen::Vector2d refl = centroid + (centroid - simplex[ord[2]]);
                double fr = objective(at(refl[0], refl[1]));
                if (fr < fv[ord[0]]) {
                    Eigen::Vector2d exp_ = centroid + 2.0 * (centroid - simplex[ord[2]]);
                    double fe = objective(at(exp_[0], exp_[1]));
                    if (fe < fr) { simplex[ord[2]] = exp_; fv[ord[2]] = fe; }
                    else { simplex[ord[2]] = refl; fv[ord[2]] = fr; }
                } else if (fr < fv[ord[1]]) {
                    simplex[ord[2]] = refl; fv[ord[2]] = fr;
                } else {
                    Eigen::Vector2d con = centroid + 0.5 * (simplex[ord[2]] - centroid);
                    double fc = objective(at(con[0], con[1]));
                    if (fc < fv[ord[2]]) { simplex[ord[2]] = con; fv[ord[2]] = fc; }
                    else {
                        for (int i : {1, 2}) {
                            simplex[ord[i]] = simplex[ord[0]] + 0.5 * (simplex[ord[i]] - simplex[ord[0]]);
                            fv[ord[i]] = objective(at(simplex[ord[i]][0], simplex[ord[i]][1]));
                        }
                    }
                }
            }
            int ibest = 0;
            for (int i = 1; i < 3; ++i)
                if (fv[i] < fv[ibest]) ibest = i;
            Vec cand = at(simplex[ibest][0], simplex[ibest][1]);
            if (fv[ibest] <= best_metric) v_best = cand;
        }
    }

    OrbitTrace orbit = run_seed(v_best);
    res.best_seed = best;
    res.seed_direction = v_best;
    res.best_miss = (orbit.back() - x_tgt).norm();
    res.success = orbit.status == TraceStatus::Converged;
    Vec f_end = sys.rhs(orbit.back());
    res.endpoint_residual = f_end.norm();
    if (!res.success) {
        res.message = "no seed converged; best seed " + std::to_string(res.best_seed) +
                      " with final distance " + std::to_string(res.best_miss) + " (" +
                      to_string(orbit.status) + ")";
        res.orbit = std::move(orbit);
        return res;
    }

    orbit.source_branch = to_string(source.branch);
    orbit.target_branch = to_string(target.branch);
    orbit.source_amplitudes = source.amplitudes;
    orbit.target_amplitudes = target.amplitudes;

    // Closest approach to every catalogued equilibrium; plateau passes at
    // intermediate equilibria flag two-stage invasions.
    for (const auto& rec : catalogue(sys.params(), sys.dir())) {
        if (!rec.exists) continue;
        std::string label = to_string(rec.branch);
        if (rec.branch == Branch::MixedOrFalseHex && !rec.sublabel.empty())
            label += ":" + rec.sublabel;
        Vec xe = sys.embed_amplitudes(rec.amplitudes);
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& s : orbit.states) dmin = std::min(dmin, (s - xe).norm());
        auto it = orbit.min_distances.find(label);
        if (it == orbit.min_distances.end() || dmin < it->second)
            orbit.min_distances[label] = dmin;
        if (rec.branch != source.branch && rec.branch != target.branch &&
            dmin < cfg.plateau_radius)
            orbit.plateau_visits.push_back(label);
    }

    // Transversality proxy: orbits into the trivial state with mu0 > 0 hit a
    // full-dimensional stable manifold.
    if (target.branch == Branch::Trivial && sys.params().mu0 > 0.0)
        orbit.persistent = target.n_stable_spatial == sys.dim();

    res.orbit = std::move(orbit);
    return res;
}

namespace {

/// Xi at which the (monotone) energy crosses `level`, by linear interpolation.
double energy_crossing(const OrbitTrace& tr, double level) {
    for (size_t i = 1; i < tr.energies.size(); ++i) {
        double a = tr.energies[i - 1], b = tr.energies[i];
        if ((a - level) * (b - level) <= 0.0 && a != b) {
            double w = (a - level) / (a - b);
            return tr.xi[i - 1] + w * (tr.xi[i] - tr.xi[i - 1]);
        }
    }
    return tr.xi.back();
}

Vec interp_state(const OrbitTrace& tr, double xi) {
    if (xi <= tr.xi.front()) return tr.states.front();
    if (xi >= tr.xi.back()) return tr.states.back();
    auto it = std::upper_bound(tr.xi.begin(), tr.xi.end(), xi);
    size_t i = size_t(it - tr.xi.begin());
    double w = (xi - tr.xi[i - 1]) / (tr.xi[i] - tr.xi[i - 1]);
    return (1.0 - w) * tr.states[i - 1] + w * tr.states[i];
}

}  // namespace

SlowComparison slow_subsystem_check(const ModelParams& params, std::span<const AngleSpec> angles,
                                    Branch source, const ShootConfig& cfg) {
    SlowComparison cmp;
    SystemVariant full_variant = params.kind == LatticeKind::Hex ? SystemVariant::HexGeneric
                                                                 : SystemVariant::SquareGeneric;
    SystemVariant slow_variant = params.kind == LatticeKind::Hex ? SystemVariant::HexDegenerate
                                                                 : SystemVariant::SquareDegenerate;
    for (const auto& spec : angles) {
        Direction dir = make_direction(params.kind, spec);
        if (dir.degenerate())
            throw std::invalid_argument("slow_subsystem_check needs non-degenerate family members");
        AmplitudeSystem full(full_variant, params, dir);
        AmplitudeSystem slow(slow_variant, params, dir);

        auto recs = catalogue(params, dir);
        const EquilibriumRecord* src = nullptr;
        const EquilibriumRecord* tgt = nullptr;
        for (const auto& r : recs) {
            if (r.branch == source && r.exists) src = &r;
            if (r.branch == Branch::Trivial) tgt = &r;
        }
        if (!src || !tgt) throw std::runtime_error("source equilibrium does not exist");

        ShootResult rf = shoot(*src, *tgt, full, cfg);
        ShootResult rs = shoot(*src, *tgt, slow, cfg);
        if (!rf.success || !rs.success)
            throw std::runtime_error("slow_subsystem_check: shooting failed at angle " + spec.str());

        // Align the translation-invariant orbits at the half-energy crossing,
        // then take the sup over the common window of the slow projection.
        double h_src = full.lyapunov(std::span<const double>(
            full.embed_amplitudes(src->amplitudes).data(), full.dim()));
        double level = 0.5 * h_src;
        double s_full = energy_crossing(rf.orbit, level);
        double s_slow = energy_crossing(rs.orbit, level);

        double lo = std::max(rf.orbit.xi.front() - s_full, rs.orbit.xi.front() - s_slow);
        double hi = std::min(rf.orbit.xi.back() - s_full, rs.orbit.xi.back() - s_slow);
        int nsteps = 800;
        double sup = 0.0;
        for (int i = 0; i <= nsteps; ++i) {
            double s = lo + (hi - lo) * double(i) / double(nsteps);
            Vec xf = interp_state(rf.orbit, s + s_full);
            Vec xs = interp_state(rs.orbit, s + s_slow);
            // project the full state onto the slow component layout
            Eigen::VectorXd proj(slow.dim());
            for (int j = 0; j < slow.mode_count(); ++j) {
                proj[slow.a_index(j)] = xf[full.a_index(j)];
                if (slow.b_index(j) >= 0) proj[slow.b_index(j)] = xf[full.b_index(j)];
            }
            sup = std::max(sup, (proj - xs).norm());
        }
        double dk2 = dir.proj[1];
        cmp.rows.push_back({spec, 4.0 * dk2 * dk2, sup});
    }
    cmp.monotone_decreasing = true;
    for (size_t i = 1; i < cmp.rows.size(); ++i)
        if (cmp.rows[i].sup_deviation >= cmp.rows[i - 1].sup_deviation)
            cmp.monotone_decreasing = false;
    return cmp;
}

FastLimitComparison infinite_speed_check(const ModelParams& params, std::span<const double> c0s,
                                         Branch source, const ShootConfig& cfg) {
    if (params.kind != LatticeKind::Hex)
        throw std::invalid_argument("infinite_speed_check is implemented for the hex system");
    FastLimitComparison cmp;
    Direction dir = canonical_direction(params.kind);
    for (double c0 : c0s) {
        ModelParams p = params;
        p.c0 = c0;
        AmplitudeSystem full(SystemVariant::HexGeneric, p, dir);
        ModelParams pslow = params;
        pslow.c0 = 1.0;  // the gradient flow does not involve c0
        AmplitudeSystem slow(SystemVariant::InfiniteSpeed, pslow, dir);

        auto recs = catalogue(p, dir);
        const EquilibriumRecord* src = nullptr;
        const EquilibriumRecord* tgt = nullptr;
        for (const auto& r : recs) {
            if (r.branch == source && r.exists) src = &r;
            if (r.branch == Branch::Trivial) tgt = &r;
        }
        if (!src || !tgt) throw std::runtime_error("source equilibrium does not exist");

        // the trivial state's slow rate is ~ mu0/c0, so the horizon grows with c0
        ShootConfig cf = cfg;
        cf.xi_max = cfg.xi_max > 0.0 ? cfg.xi_max : 50.0 * c0;
        ShootResult rf = shoot(*src, *tgt, full, cf);
        ShootConfig cs = cfg;
        cs.xi_max = 500.0;
        ShootResult rs = shoot(*src, *tgt, slow, cs);
        if (!rf.success || !rs.success)
            throw std::runtime_error("infinite_speed_check: shooting failed at c0 = " +
                                     std::to_string(c0));

        double h_src = slow.lyapunov(std::span<const double>(
            slow.embed_amplitudes(src->amplitudes).data(), slow.dim()));
        double level = 0.5 * h_src;
        double s_full = energy_crossing(rf.orbit, level) / c0;
        double s_slow = energy_crossing(rs.orbit, level);

        double lo = std::max(rf.orbit.xi.front() / c0 - s_full, rs.orbit.xi.front() - s_slow);
        double hi = std::min(rf.orbit.xi.back() / c0 - s_full, rs.orbit.xi.back() - s_slow);
        double sup = 0.0;
        int nsteps = 800;
        for (int i = 0; i <= nsteps; ++i) {
            double s = lo + (hi - lo) * double(i) / double(nsteps);
            Vec xf = interp_state(rf.orbit, (s + s_full) * c0);
            Vec xs = interp_state(rs.orbit, s + s_slow);
            double d2 = 0.0;
            for (int j = 0; j < 3; ++j) {
                double diff = xf[full.a_index(j)] - xs[slow.a_index(j)];
                d2 += diff * diff;
            }
            sup = std::max(sup, std::sqrt(d2));
        }
        cmp.rows.push_back({c0, sup});
    }
    cmp.monotone_decreasing = true;
    for (size_t i = 1; i < cmp.rows.size(); ++i)
        if (cmp.rows[i].sup_deviation >= cmp.rows[i - 1].sup_deviation)
            cmp.monotone_decreasing = false;
    return cmp;
}

void write_orbit_csv(std::ostream& os, const OrbitTrace& trace, const AmplitudeSystem& sys) {
    os << "xi";
    for (const auto& name : sys.component_names()) os << "," << name;
    os << ",H\n";
    char buf[64];
    for (size_t i = 0; i < trace.xi.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", trace.xi[i]);
        os << buf;
        for (int c = 0; c < sys.dim(); ++c) {
            std::snprintf(buf, sizeof(buf), ",%.17g", trace.states[i][c]);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g\n", trace.energies[i]);
        os << buf;
    }
}

}  // namespace shfront
