#include "shfront/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "shfront/spectrum.hpp"

namespace shfront {

namespace {

constexpr double kMarginalTol = 1e-8;

int expected_stable(SystemVariant v, int n_unstable_landau) {
    switch (v) {
        case SystemVariant::HexGeneric: return 3 + n_unstable_landau;
        case SystemVariant::HexDegenerate: return 2 + n_unstable_landau;
        case SystemVariant::SquareGeneric: return 2 + n_unstable_landau;
        case SystemVariant::SquareDegenerate: return 1 + n_unstable_landau;
        default: return -1;
    }
}

}  // namespace

std::string to_string(Branch b) {
    switch (b) {
        case Branch::Trivial: return "trivial";
        case Branch::Rolls: return "rolls";
        case Branch::HexUp: return "hex_up";
        case Branch::HexDown: return "hex_down";
        case Branch::MixedOrFalseHex: return "mixed_or_false_hex";
        case Branch::Squares: return "squares";
    }
    return "?";
}

Direction canonical_direction(LatticeKind kind) {
    if (kind == LatticeKind::Hex) return make_direction(kind, AngleSpec::axis());
    return make_direction(kind, AngleSpec::rational(2, 1));
}

Eigen::MatrixXd landau_jacobian(std::span<const double> A, const ModelParams& params) {
    const double mu0 = params.mu0, b2 = params.beta2, K0 = params.K0, Kc = params.Kcross;
    int m = generator_count(params.kind);
    Eigen::MatrixXd L(m, m);
    if (m == 3) {
        double ss = A[0] * A[0] + A[1] * A[1] + A[2] * A[2];
        for (int i = 0; i < 3; ++i)
            L(i, i) = mu0 + 3.0 * K0 * A[i] * A[i] + Kc * (ss - A[i] * A[i]);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                int k = 3 - i - j;
                L(i, j) = L(j, i) = b2 * A[k] + 2.0 * Kc * A[i] * A[j];
            }
    } else {
        L(0, 0) = mu0 + 3.0 * K0 * A[0] * A[0] + Kc * A[1] * A[1];
        L(1, 1) = mu0 + 3.0 * K0 * A[1] * A[1] + Kc * A[0] * A[0];
        L(0, 1) = L(1, 0) = 2.0 * Kc * A[0] * A[1];
    }
    return L;
}

SpatialStability qep_spectrum(const Eigen::MatrixXd& D, double c0, const Eigen::MatrixXd& L) {
    int m = int(D.rows());
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    Eigen::MatrixXd Dinv = D.inverse();
    Z.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
    Z.bottomLeftCorner(m, m) = -Dinv * L;
    Z.bottomRightCorner(m, m) = -c0 * Dinv;
    Eigen::EigenSolver<Eigen::MatrixXd> es(Z, false);
    SpatialStability out;
    for (int i = 0; i < 2 * m; ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        out.eigenvalues.push_back(z);
        if (z.real() < 0.0) ++out.n_stable;
        else ++out.n_unstable;
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

SpatialStability spatial_stability(std::span<const double> A, const ModelParams& params,
                                   const Direction& dir) {
    AmplitudeSystem sys(natural_variant(params.kind, dir), params, dir);
    Eigen::VectorXd x = sys.embed_amplitudes(A);
    Eigen::MatrixXd J = sys.jacobian(std::span<const double>(x.data(), sys.dim()));
    Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
    SpatialStability out;
    for (int i = 0; i < sys.dim(); ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        out.eigenvalues.push_back(z);
        if (std::abs(z.real()) < kMarginalTol)
            throw MarginalSpectrumError("spatial eigenvalue on the imaginary axis (bifurcation point)");
        if (z.real() < 0.0) ++out.n_stable;
        else ++out.n_unstable;
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    // Counting law (temporal vs spatial stability): skip when the Landau
    // spectrum itself is marginal.
    Eigen::MatrixXd L = landau_jacobian(A, params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ls(L);
    bool marginal_landau = false;
    int n = 0;
    for (int i = 0; i < L.rows(); ++i) {
        if (std::abs(ls.eigenvalues()(i)) < kMarginalTol) marginal_landau = true;
        if (ls.eigenvalues()(i) > 0.0) ++n;
    }
    if (!marginal_landau) {
        int want = expected_stable(sys.variant(), n);
        if (want >= 0 && want != out.n_stable)
            throw std::runtime_error(
                "spatial stability count disagrees with the temporal counting law: got " +
                std::to_string(out.n_stable) + " stable, expected " + std::to_string(want));
    }
    return out;
}

ModeCriticality mode_criticality(double dk_sq, double mu0, double c0) {
    ModeCriticality mc;
    if (dk_sq == 0.0) {
        mc.first_order = true;
        mc.decay_rate = -mu0 / c0;
        mc.c_crit = 0.0;
        mc.lambda_plus = mc.lambda_minus = std::complex<double>(mc.decay_rate, 0.0);
        return mc;
    }
    mc.c_crit = 4.0 * std::sqrt(dk_sq * mu0);
    std::complex<double> disc = std::sqrt(std::complex<double>(c0 * c0 - 16.0 * dk_sq * mu0, 0.0));
    mc.lambda_plus = (-c0 + disc) / (8.0 * dk_sq);
    mc.lambda_minus = (-c0 - disc) / (8.0 * dk_sq);
    mc.oscillatory = c0 < mc.c_crit;
    return mc;
}

std::vector<ModeCriticality> trivial_mode_classification(const ModelParams& params,
                                                         const Direction& dir) {
    if (params.mu0 <= 0.0)
        throw std::invalid_argument("trivial_mode_classification needs mu0 > 0");
    std::vector<ModeCriticality> out;
    for (int j = 0; j < generator_count(params.kind); ++j)
        out.push_back(mode_criticality(dir.proj[j] * dir.proj[j], params.mu0, params.c0));
    return out;
}

namespace {

EquilibriumRecord annotate(EquilibriumRecord rec, const ModelParams& params,
                           const Direction& dir) {
    if (!rec.exists) return rec;
    Direction d = dir;
    AmplitudeSystem sys(natural_variant(params.kind, d), params, d);
    Eigen::VectorXd x = sys.embed_amplitudes(rec.amplitudes);
    rec.energy = sys.lyapunov(std::span<const double>(x.data(), sys.dim()));

    Eigen::MatrixXd L = landau_jacobian(rec.amplitudes, params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ls(L);
    rec.landau_eigs.assign(ls.eigenvalues().data(), ls.eigenvalues().data() + L.rows());
    rec.n_unstable_landau = 0;
    for (double ev : rec.landau_eigs)
        if (ev > 0.0) ++rec.n_unstable_landau;

    try {
        SpatialStability ss = spatial_stability(rec.amplitudes, params, d);
        rec.n_stable_spatial = ss.n_stable;
        rec.n_unstable_spatial = ss.n_unstable;
    } catch (const MarginalSpectrumError&) {
        rec.n_stable_spatial = rec.n_unstable_spatial = -1;
    }
    return rec;
}

}  // namespace

std::vector<EquilibriumRecord> catalogue(const ModelParams& params, const Direction& dir) {
    const double mu0 = params.mu0, b2 = params.beta2, K0 = params.K0, Kc = params.Kcross;
    std::vector<EquilibriumRecord> out;
    int m = generator_count(params.kind);

    {
        EquilibriumRecord trivial;
        trivial.branch = Branch::Trivial;
        trivial.amplitudes.assign(m, 0.0);
        trivial.exists = true;
        trivial = annotate(trivial, params, dir);
        if (mu0 > 0.0)
            for (const auto& mc : trivial_mode_classification(params, dir))
                trivial.per_mode_oscillatory.push_back(mc.oscillatory);
        out.push_back(std::move(trivial));
    }

    {
        EquilibriumRecord rolls;
        rolls.branch = Branch::Rolls;
        rolls.amplitudes.assign(m, 0.0);
        if (mu0 * K0 < 0.0) {
            rolls.exists = true;
            rolls.amplitudes[0] = std::sqrt(-mu0 / K0);
        } else {
            rolls.violated_condition = "mu0*K0 < 0";
        }
        out.push_back(annotate(std::move(rolls), params, dir));
    }

    if (params.kind == LatticeKind::Hex) {
        double s = K0 + 2.0 * Kc;
        double disc = b2 * b2 - 4.0 * mu0 * s;
        for (int sign : {+1, -1}) {
            EquilibriumRecord hex;
            hex.sublabel = sign > 0 ? "H+" : "H-";
            hex.amplitudes.assign(3, 0.0);
            if (s != 0.0 && disc > 0.0) {
                double A = (-b2 - sign * std::sqrt(disc)) / (2.0 * s);
                hex.exists = true;
                hex.amplitudes.assign(3, A);
                hex.branch = A > 0.0 ? Branch::HexUp : Branch::HexDown;
            } else {
                hex.branch = sign > 0 ? Branch::HexUp : Branch::HexDown;
                hex.violated_condition = "K0+2*K2 != 0 and beta2^2 - 4*mu0*(K0+2*K2) > 0";
            }
            out.push_back(annotate(std::move(hex), params, dir));
        }

        EquilibriumRecord mm;
        mm.branch = Branch::MixedOrFalseHex;
        mm.amplitudes.assign(3, 0.0);
        double dk = K0 - Kc, sk = K0 + Kc;
        double cond = (dk != 0.0 && sk != 0.0)
                          ? (K0 * b2 * b2 + dk * dk * mu0) / sk
                          : 0.0;
        if (dk != 0.0 && sk != 0.0 && cond < 0.0) {
            mm.exists = true;
            mm.amplitudes[0] = b2 / dk;
            double A23 = std::sqrt(-(K0 * b2 * b2 + dk * dk * mu0) / (sk * dk * dk));
            mm.amplitudes[1] = mm.amplitudes[2] = A23;
            double lo = -K0 * b2 * b2 / (dk * dk);
            double hi = -b2 * b2 * (2.0 * K0 + Kc) / (dk * dk);
            mm.sublabel = (lo < mu0 && mu0 < hi) ? "mixed" : "false_hex";
        } else {
            mm.violated_condition = "(K0*beta2^2 + (K0-K2)^2*mu0)/(K0+K2) < 0";
        }
        out.push_back(annotate(std::move(mm), params, dir));
    } else {
        EquilibriumRecord sq;
        sq.branch = Branch::Squares;
        sq.amplitudes.assign(2, 0.0);
        double s = K0 + Kc;
        if (s != 0.0 && mu0 * s < 0.0) {
            sq.exists = true;
            double A = std::sqrt(-mu0 / s);
            sq.amplitudes = {A, A};
        } else {
            sq.violated_condition = "mu0*(K0+K1) < 0";
        }
        out.push_back(annotate(std::move(sq), params, dir));
    }
    return out;
}

std::vector<EquilibriumRecord> catalogue(const ModelParams& params) {
    return catalogue(params, canonical_direction(params.kind));
}

double mu_one(const ModelParams& params) {
    const double b2 = params.beta2, K0 = params.K0, K2 = params.Kcross;
    if (!(K0 < K2 && K2 < 0.0))
        throw std::invalid_argument("mu_one needs K0 < K2 < 0");
    double root = std::sqrt(K0 * std::pow(K0 + K2, 3));
    return -b2 * b2 * K0 / (2.0 * std::sqrt(2.0) * root - 2.0 * K0 * (K0 + 3.0 * K2));
}

EnergyRanking energy_ranking(const ModelParams& params) {
    if (!params.rigorous_orbit_regime())
        throw std::invalid_argument("energy_ranking needs K0 < 0 and the cross coefficient < 0");
    EnergyRanking er;
    auto records = catalogue(params);
    for (const auto& rec : records) {
        if (!rec.exists || rec.branch == Branch::Trivial) continue;
        if (rec.branch == Branch::HexUp || rec.branch == Branch::HexDown) {
            if (rec.sublabel == "H+") er.hex_gap += rec.energy;
            if (rec.sublabel == "H-") er.hex_gap -= rec.energy;
        }
        er.ranking.emplace_back(rec.branch, rec.energy);
    }
    std::sort(er.ranking.begin(), er.ranking.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    if (params.kind == LatticeKind::Hex) {
        double s = params.K0 + 2.0 * params.Kcross;
        double disc = params.beta2 * params.beta2 - 4.0 * params.mu0 * s;
        if (disc > 0.0)
            er.hex_gap_formula = -params.beta2 * std::pow(disc, 1.5) / (4.0 * std::pow(s, 3));
        if (params.K0 < params.Kcross) er.mu1 = mu_one(params);
    }
    return er;
}

void write_bifurcation_csv(std::ostream& os, ModelParams params, const Direction& dir,
                           std::span<const double> mu0_values) {
    os << "mu0,branch,A1,A2,A3,energy,n_unstable_landau,n_stable_spatial\n";
    char buf[256];
    for (double mu0 : mu0_values) {
        params.mu0 = mu0;
        for (const auto& rec : catalogue(params, dir)) {
            if (!rec.exists) continue;
            double A3 = rec.amplitudes.size() > 2 ? rec.amplitudes[2] : 0.0;
            std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%.17g,%.17g,%d,%d\n", mu0,
                          to_string(rec.branch).c_str(), rec.amplitudes[0], rec.amplitudes[1],
                          A3, rec.energy, rec.n_unstable_landau, rec.n_stable_spatial);
            os << buf;
        }
    }
}

}  // namespace shfront
