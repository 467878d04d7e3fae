#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shfront/amplitude.hpp"
#include "shfront/lattice.hpp"

namespace shfront {

struct MarginalSpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Branch { Trivial, Rolls, HexUp, HexDown, MixedOrFalseHex, Squares };

std::string to_string(Branch b);

struct EquilibriumRecord {
    Branch branch = Branch::Trivial;
    /// "H+"/"H-" formula sign for hexagons, "mixed"/"false_hex" for the mixed
    /// branch, empty otherwise.
    std::string sublabel;
    std::vector<double> amplitudes;  // 3 (hex) or 2 (square)
    bool exists = false;
    std::string violated_condition;  // set when exists is false
    double energy = 0.0;             // Lyapunov value at B = 0
    std::vector<double> landau_eigs;
    int n_unstable_landau = -1;
    int n_stable_spatial = -1;   // -1: not computed (marginal or non-existent)
    int n_unstable_spatial = -1;
    std::vector<bool> per_mode_oscillatory;  // trivial branch only
};

/// Canonical non-degenerate gap-admissible direction per lattice kind
/// (hex: theta = 0; square: cot theta = 2).
Direction canonical_direction(LatticeKind kind);

/// Closed-form equilibrium catalogue with stability annotations. Branches that
/// fail their existence condition are returned with exists = false. Spatial
/// counts falling on a marginal spectrum are left at -1.
std::vector<EquilibriumRecord> catalogue(const ModelParams& params, const Direction& dir);
std::vector<EquilibriumRecord> catalogue(const ModelParams& params);

/// Linearisation of the Landau system about A (symmetric; 3x3 hex, 2x2 square).
Eigen::MatrixXd landau_jacobian(std::span<const double> A, const ModelParams& params);

struct SpatialStability {
    int n_stable = 0;
    int n_unstable = 0;
    std::vector<std::complex<double>> eigenvalues;
};

/// Spatial eigenvalue counts of the first-order linearisation about the
/// equilibrium with amplitudes A, cross-checked against the
/// temporal-vs-spatial counting law (applied at theta = 0 too: the diffusion
/// matrix stays positive-definite there even though two of its entries
/// coincide). Throws MarginalSpectrumError when an eigenvalue sits within
/// 1e-8 of the imaginary axis.
SpatialStability spatial_stability(std::span<const double> A, const ModelParams& params,
                                   const Direction& dir);

/// General quadratic-eigenvalue core (D lambda^2 + c0 lambda + L) psi = 0 via
/// the companion linearisation; D must be invertible. No symmetry assumed.
SpatialStability qep_spectrum(const Eigen::MatrixXd& D, double c0, const Eigen::MatrixXd& L);

struct ModeCriticality {
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    bool oscillatory = false;
    double c_crit = 0.0;
    bool first_order = false;  // degenerate mode: single rate -mu0/c0
    double decay_rate = 0.0;
};

/// Roots of 4 dk_sq lambda^2 + c0 lambda + mu0 for one mode with
/// dk_sq = (d.k_j)^2; dk_sq = 0 reports the first-order decay rate.
ModeCriticality mode_criticality(double dk_sq, double mu0, double c0);

/// Per-mode classification of the trivial state (needs mu0 > 0).
std::vector<ModeCriticality> trivial_mode_classification(const ModelParams& params,
                                                         const Direction& dir);

struct EnergyRanking {
    /// Existing branches ordered by increasing energy.
    std::vector<std::pair<Branch, double>> ranking;
    std::optional<double> mu1;  // closed form, when K0 < K2 < 0 (hex)
    /// H(A_H+) - H(A_H-), and the closed-form prediction.
    double hex_gap = 0.0;
    double hex_gap_formula = 0.0;
};

/// mu1 of the energy crossing H(A_H-) = H(A_R) (hex, K0 < K2 < 0).
double mu_one(const ModelParams& params);

EnergyRanking energy_ranking(const ModelParams& params);

/// CSV bifurcation table over a mu0 sweep:
/// `mu0,branch,A1,A2,A3,energy,n_unstable_landau,n_stable_spatial`.
void write_bifurcation_csv(std::ostream& os, ModelParams params, const Direction& dir,
                           std::span<const double> mu0_values);

}  // namespace shfront
