#include "shfront/amplitude.hpp"

#include <cmath>
#include <stdexcept>

namespace shfront {

namespace {

double l0_symbol(const Vec2& g) {
    double n = g.dot(g);
    return -(1.0 - n) * (1.0 - n);
}

}  // namespace

std::string to_string(SystemVariant v) {
    switch (v) {
        case SystemVariant::HexGeneric: return "hex_generic";
        case SystemVariant::HexDegenerate: return "hex_degenerate";
        case SystemVariant::SquareGeneric: return "square_generic";
        case SystemVariant::SquareDegenerate: return "square_degenerate";
        case SystemVariant::InfiniteSpeed: return "infinite_speed";
    }
    return "?";
}

SystemVariant natural_variant(LatticeKind kind, const Direction& dir) {
    if (kind == LatticeKind::Hex)
        return dir.degenerate() ? SystemVariant::HexDegenerate : SystemVariant::HexGeneric;
    return dir.degenerate() ? SystemVariant::SquareDegenerate : SystemVariant::SquareGeneric;
}

AmplitudeSystem::AmplitudeSystem(SystemVariant variant, const ModelParams& params,
                                 const Direction& dir)
    : variant_(variant), params_(params), dir_(dir) {
    bool hex = variant == SystemVariant::HexGeneric || variant == SystemVariant::HexDegenerate ||
               variant == SystemVariant::InfiniteSpeed;
    if (hex != (params.kind == LatticeKind::Hex) || params.kind != dir.kind)
        throw std::invalid_argument("variant/params/direction lattice kinds disagree");
    modes_ = generator_count(params.kind);
    D_.resize(modes_);
    for (int j = 0; j < modes_; ++j) D_[j] = 4.0 * dir.proj[j] * dir.proj[j];

    auto layout = [&](std::initializer_list<int> a, std::initializer_list<int> b) {
        a_idx_.assign(a);
        b_idx_.assign(b);
    };
    switch (variant) {
        case SystemVariant::HexGeneric:
            layout({0, 2, 4}, {1, 3, 5});
            dim_ = 6;
            break;
        case SystemVariant::HexDegenerate:
            if (dir.degenerate_mode.value_or(1) != 1)
                throw std::invalid_argument("hex degenerate variant eliminates mode k2");
            layout({0, 2, 3}, {1, -1, 4});
            dim_ = 5;
            break;
        case SystemVariant::SquareGeneric:
            layout({0, 2}, {1, 3});
            dim_ = 4;
            break;
        case SystemVariant::SquareDegenerate:
            // The square slow subsystem eliminates B2 (theta = 0).
            layout({0, 2}, {1, -1});
            dim_ = 3;
            break;
        case SystemVariant::InfiniteSpeed:
            layout({0, 1, 2}, {-1, -1, -1});
            dim_ = 3;
            break;
    }
    if (variant == SystemVariant::HexGeneric || variant == SystemVariant::SquareGeneric) {
        if (dir.degenerate())
            throw std::invalid_argument("generic variant needs a non-degenerate direction");
    }
}

double AmplitudeSystem::landau_rhs(std::span<const double> A, int j) const {
    const double K0 = params_.K0, Kc = params_.Kcross;
    if (modes_ == 3) {
        int k = (j + 1) % 3, l = (j + 2) % 3;
        return params_.mu0 * A[j] + params_.beta2 * A[k] * A[l] +
               (K0 * A[j] * A[j] + Kc * (A[k] * A[k] + A[l] * A[l])) * A[j];
    }
    int k = 1 - j;
    return params_.mu0 * A[j] + (K0 * A[j] * A[j] + Kc * A[k] * A[k]) * A[j];
}

Eigen::MatrixXd AmplitudeSystem::landau_matrix(std::span<const double> A) const {
    const double mu0 = params_.mu0, b2 = params_.beta2, K0 = params_.K0, Kc = params_.Kcross;
    Eigen::MatrixXd L(modes_, modes_);
    if (modes_ == 3) {
        double ss = A[0] * A[0] + A[1] * A[1] + A[2] * A[2];
        for (int i = 0; i < 3; ++i)
            L(i, i) = mu0 + 3.0 * K0 * A[i] * A[i] + Kc * (ss - A[i] * A[i]);
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                int k = 3 - i - j;
                L(i, j) = L(j, i) = b2 * A[k] + 2.0 * Kc * A[i] * A[j];
            }
        }
    } else {
        L(0, 0) = mu0 + 3.0 * K0 * A[0] * A[0] + Kc * A[1] * A[1];
        L(1, 1) = mu0 + 3.0 * K0 * A[1] * A[1] + Kc * A[0] * A[0];
        L(0, 1) = L(1, 0) = 2.0 * Kc * A[0] * A[1];
    }
    return L;
}

void AmplitudeSystem::rhs(std::span<const double> x, std::span<double> dx) const {
    std::vector<double> A = amplitudes(x);
    for (int j = 0; j < modes_; ++j) {
        double f = landau_rhs(A, j);
        if (b_idx_[j] >= 0) {
            double B = x[b_idx_[j]];
            dx[a_idx_[j]] = B;
            dx[b_idx_[j]] = -(f + params_.c0 * B) / D_[j];
        } else if (variant_ == SystemVariant::InfiniteSpeed) {
            dx[a_idx_[j]] = -f;
        } else {
            dx[a_idx_[j]] = -f / params_.c0;
        }
    }
}

Eigen::VectorXd AmplitudeSystem::rhs(const Eigen::VectorXd& x) const {
    Eigen::VectorXd dx(dim_);
    rhs(std::span<const double>(x.data(), dim_), std::span<double>(dx.data(), dim_));
    return dx;
}

double AmplitudeSystem::lyapunov(std::span<const double> x) const {
    std::vector<double> A = amplitudes(x);
    const double mu0 = params_.mu0, K0 = params_.K0, Kc = params_.Kcross;
    double V = 0.0;
    for (int j = 0; j < modes_; ++j) V += 0.5 * mu0 * A[j] * A[j] + 0.25 * K0 * std::pow(A[j], 4);
    if (modes_ == 3) {
        V += params_.beta2 * A[0] * A[1] * A[2];
        V += 0.5 * Kc * (A[0] * A[0] * A[1] * A[1] + A[0] * A[0] * A[2] * A[2] +
                         A[1] * A[1] * A[2] * A[2]);
    } else {
        V += 0.5 * Kc * A[0] * A[0] * A[1] * A[1];
    }
    double H = V;
    for (int j = 0; j < modes_; ++j)
        if (b_idx_[j] >= 0) H += 0.5 * D_[j] * x[b_idx_[j]] * x[b_idx_[j]];
    return H;
}

double AmplitudeSystem::b_dissipation(std::span<const double> x) const {
    double s = 0.0;
    for (int j = 0; j < modes_; ++j)
        if (b_idx_[j] >= 0) s += x[b_idx_[j]] * x[b_idx_[j]];
    return -params_.c0 * s;
}

double AmplitudeSystem::dissipation_rate(std::span<const double> x) const {
    double r = b_dissipation(x);
    if (variant_ == SystemVariant::InfiniteSpeed) {
        std::vector<double> A = amplitudes(x);
        for (int j = 0; j < modes_; ++j) {
            double f = landau_rhs(A, j);
            r -= f * f;
        }
        return r;
    }
    std::vector<double> A = amplitudes(x);
    for (int j = 0; j < modes_; ++j)
        if (b_idx_[j] < 0) {
            double f = landau_rhs(A, j);
            r -= f * f / params_.c0;
        }
    return r;
}

void AmplitudeSystem::lyapunov_gradient(std::span<const double> x, std::span<double> grad) const {
    std::vector<double> A = amplitudes(x);
    for (int j = 0; j < modes_; ++j) {
        grad[a_idx_[j]] = landau_rhs(A, j);
        if (b_idx_[j] >= 0) grad[b_idx_[j]] = D_[j] * x[b_idx_[j]];
    }
}

Eigen::MatrixXd AmplitudeSystem::jacobian(std::span<const double> x) const {
    std::vector<double> A = amplitudes(x);
    Eigen::MatrixXd L = landau_matrix(A);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int j = 0; j < modes_; ++j) {
        if (b_idx_[j] >= 0) {
            J(a_idx_[j], b_idx_[j]) = 1.0;
            for (int k = 0; k < modes_; ++k) J(b_idx_[j], a_idx_[k]) = -L(j, k) / D_[j];
            J(b_idx_[j], b_idx_[j]) = -params_.c0 / D_[j];
        } else if (variant_ == SystemVariant::InfiniteSpeed) {
            for (int k = 0; k < modes_; ++k) J(a_idx_[j], a_idx_[k]) = -L(j, k);
        } else {
            for (int k = 0; k < modes_; ++k) J(a_idx_[j], a_idx_[k]) = -L(j, k) / params_.c0;
        }
    }
    return J;
}

Eigen::VectorXd AmplitudeSystem::embed_amplitudes(std::span<const double> A) const {
    if (int(A.size()) != modes_) throw std::invalid_argument("amplitude count mismatch");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
    for (int j = 0; j < modes_; ++j) x[a_idx_[j]] = A[j];
    return x;
}

std::vector<double> AmplitudeSystem::amplitudes(std::span<const double> x) const {
    std::vector<double> A(modes_);
    for (int j = 0; j < modes_; ++j) A[j] = x[a_idx_[j]];
    return A;
}

std::vector<std::string> AmplitudeSystem::component_names() const {
    std::vector<std::string> names(dim_);
    for (int j = 0; j < modes_; ++j) {
        names[a_idx_[j]] = "A" + std::to_string(j + 1);
        if (b_idx_[j] >= 0) names[b_idx_[j]] = "B" + std::to_string(j + 1);
    }
    return names;
}

std::vector<double> rhs(std::span<const double> state, const ModelParams& params,
                        const Direction& dir, SystemVariant variant) {
    AmplitudeSystem sys(variant, params, dir);
    std::vector<double> dx(sys.dim());
    sys.rhs(state, dx);
    return dx;
}

double lyapunov(std::span<const double> state, const ModelParams& params, const Direction& dir,
                SystemVariant variant) {
    return AmplitudeSystem(variant, params, dir).lyapunov(state);
}

CoefficientSet coefficients_qcsh(double beta, LatticeKind kind) {
    if (std::abs(beta) >= 1.0) throw std::invalid_argument("coefficients_qcsh needs |beta| < 1");
    auto n2 = [beta](const Vec2& a, const Vec2& b) { return beta * a.dot(b); };
    const double n3 = -1.0;

    Vec2 k1 = generator(kind, 1), k2 = generator(kind, 2);
    Vec2 zero{0.0, 0.0};

    auto shell_response = [&](const LatticeVector& g, double pair_factor, const Vec2& ga,
                              const Vec2& gb) {
        double l0 = l0_symbol(g.vec());
        if (l0 == 0.0)
            throw std::runtime_error("second-shell mode with vanishing linear symbol");
        return -pair_factor / l0 * n2(ga, gb);
    };

    CoefficientSet cs;
    // nu0: mean-mode response, "3 nu0 sum |A_j|^2" normalisation of the hex
    // derivation. Its coupling n2(0, k1) vanishes for the gradient
    // nonlinearity, so it contributes nothing to K0/Kcross here.
    cs.nu0 = -(2.0 / 3.0) * (1.0 / l0_symbol(zero)) * n2(k1, k1 * -1.0);

    LatticeVector g2k1 = make_lattice_vector(kind, 2, 0);
    double nu_2k1 = shell_response(g2k1, 1.0, k1, k1);
    cs.nu_map.emplace_back(g2k1, nu_2k1);

    LatticeVector gk1mk2 = make_lattice_vector(kind, 1, -1);
    double nu_k1mk2 = shell_response(gk1mk2, 2.0, k1, k2 * -1.0);
    cs.nu_map.emplace_back(gk1mk2, nu_k1mk2);

    cs.K0 = 2.0 * (n2(zero, k1) * cs.nu0 + n2(g2k1.vec(), k1 * -1.0) * nu_2k1) + 3.0 * n3;

    if (kind == LatticeKind::Hex) {
        Vec2 k3 = generator(kind, 3);
        cs.Kcross = 2.0 * (n2(zero, k1) * cs.nu0 + n2(gk1mk2.vec(), k2) * nu_k1mk2) + 6.0 * n3;
        cs.beta2 = 2.0 * n2(k2 * -1.0, k3 * -1.0);
    } else {
        LatticeVector gk1pk2 = make_lattice_vector(kind, 1, 1);
        double nu_k1pk2 = shell_response(gk1pk2, 2.0, k1, k2);
        cs.nu_map.emplace_back(gk1pk2, nu_k1pk2);
        cs.Kcross = 2.0 * (n2(zero, k1) * cs.nu0 + n2(gk1pk2.vec(), k2 * -1.0) * nu_k1pk2 +
                           n2(gk1mk2.vec(), k2) * nu_k1mk2) +
                    6.0 * n3;
        cs.beta2 = 0.0;  // non-resonant lattice
    }
    return cs;
}

}  // namespace shfront
