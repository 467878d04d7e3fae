#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shfront/lattice.hpp"

namespace shfront {

/// Amplitude-level model parameters. Kcross is the cross-interaction
/// coefficient: K2 on the hexagonal lattice, K1 on the square lattice.
struct ModelParams {
    LatticeKind kind = LatticeKind::Hex;
    double mu0 = 1.0;
    double c0 = 2.0;
    double beta2 = 1.0;
    double K0 = -3.0;
    double Kcross = -6.0;

    /// Flag (not enforced): the analytic orbit construction needs
    /// K0 < 0 and Kcross < 0.
    bool rigorous_orbit_regime() const { return K0 < 0.0 && Kcross < 0.0; }
};

enum class SystemVariant {
    HexGeneric,       // (A1,B1,A2,B2,A3,B3)
    HexDegenerate,    // (A1,B1,A2,A3,B3): B2 eliminated (theta = pi/6 or slow subsystem)
    SquareGeneric,    // (A1,B1,A2,B2)
    SquareDegenerate, // (A1,B1,A2): theta = 0 slow subsystem
    InfiniteSpeed     // (A1,A2,A3): c0 -> infinity gradient flow
};

std::string to_string(SystemVariant v);

/// The reduced amplitude ODE in first-order form together with its Lyapunov
/// function. The degenerate variants use the direction's own diffusion
/// coefficients for the non-degenerate modes, so HexDegenerate at an angle
/// short of pi/6 is exactly the slow subsystem of the fast-slow splitting.
class AmplitudeSystem {
public:
    AmplitudeSystem(SystemVariant variant, const ModelParams& params, const Direction& dir);

    int dim() const { return dim_; }
    SystemVariant variant() const { return variant_; }
    const ModelParams& params() const { return params_; }
    const Direction& dir() const { return dir_; }

    void rhs(std::span<const double> x, std::span<double> dx) const;
    Eigen::VectorXd rhs(const Eigen::VectorXd& x) const;

    double lyapunov(std::span<const double> x) const;
    double lyapunov(const Eigen::VectorXd& x) const {
        return lyapunov(std::span<const double>(x.data(), size_t(x.size())));
    }
    /// Exact dH/dXi along the flow: -c0 sum of the present B_j^2 minus the
    /// gradient-flow terms of eliminated modes.
    double dissipation_rate(std::span<const double> x) const;
    /// -c0 sum B_j^2 over the B components present in the state.
    double b_dissipation(std::span<const double> x) const;
    void lyapunov_gradient(std::span<const double> x, std::span<double> grad) const;

    /// Jacobian of rhs, assembled from the Landau linearisation.
    Eigen::MatrixXd jacobian(std::span<const double> x) const;

    /// Embed mode amplitudes (3 hex / 2 square values) as a state with B = 0
    /// where B components exist.
    Eigen::VectorXd embed_amplitudes(std::span<const double> A) const;
    /// Extract the mode amplitudes from a state.
    std::vector<double> amplitudes(std::span<const double> x) const;

    int mode_count() const { return modes_; }
    /// State indices of A_j and (if present, else -1) B_j.
    int a_index(int j) const { return a_idx_[j]; }
    int b_index(int j) const { return b_idx_[j]; }
    /// Diffusion coefficient 4 (d.k_j)^2 of mode j (0-based).
    double diffusion(int j) const { return D_[j]; }
    std::vector<std::string> component_names() const;

private:
    /// mu0 A_j + quadratic + cubic terms of the j-th stationary equation.
    double landau_rhs(std::span<const double> A, int j) const;
    Eigen::MatrixXd landau_matrix(std::span<const double> A) const;

    SystemVariant variant_;
    ModelParams params_;
    Direction dir_;
    int modes_ = 3;
    int dim_ = 6;
    std::vector<int> a_idx_, b_idx_;
    std::vector<double> D_;
};

/// Convenience free-function forms.
std::vector<double> rhs(std::span<const double> state, const ModelParams& params,
                        const Direction& dir, SystemVariant variant);
double lyapunov(std::span<const double> state, const ModelParams& params, const Direction& dir,
                SystemVariant variant);

/// Ginzburg-Landau coefficients of the quadratic-cubic nonlinearity
/// N = -beta |grad u|^2 - u^3 at onset.
struct CoefficientSet {
    double beta2 = 0.0;  // computed quadratic coefficient (sign as computed)
    double K0 = 0.0;
    double Kcross = 0.0;  // K2 (hex) / K1 (square)
    double nu0 = 0.0;
    std::vector<std::pair<LatticeVector, double>> nu_map;  // second-shell responses
};

CoefficientSet coefficients_qcsh(double beta, LatticeKind kind);

/// Natural variant for a direction: degenerate directions get the reduced
/// first-order equation for the degenerate mode.
SystemVariant natural_variant(LatticeKind kind, const Direction& dir);

}  // namespace shfront
