#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "shfront/lattice.hpp"

namespace shfront {

using cplx = std::complex<double>;

struct AmbiguousClassification : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters of the spatial-dynamics eigenvalue problem per mode.
struct DispersionContext {
    double mu0 = 1.0;
    double c0 = 1.0;
    double eps = 0.0;
    Direction dir;
    /// Classification band constants: more-central roots satisfy
    /// |lambda| <= k_mc * eps, less-central |Re lambda| <= k_lc * sqrt(eps).
    double k_mc = 10.0;
    double k_lc = 10.0;
};

/// Per-mode critical speed 4 |d.k| sqrt(mu0).
double critical_speed(double d_dot_k, double mu0);

enum class RootClass { Imaginary, MoreCentral, LessCentral, Hyperbolic };
enum class JordanStructure { TwoTwo, Four, HyperbolicTwoTwo };

std::string to_string(RootClass c);

/// Ascending coefficients c[0..4] of the quartic
/// p(lambda) = -(1 + (d lambda + i gamma).(d lambda + i gamma))^2
///             + eps^2 mu0 + eps c0 lambda; c[4] = -1.
std::array<cplx, 5> dispersion_poly(const LatticeVector& g, const DispersionContext& ctx);

/// Roots of a quartic with ascending coefficients via the balanced companion
/// matrix, one Newton polish per root.
std::array<cplx, 4> quartic_roots(const std::array<cplx, 5>& coeff);

struct ModeSpectrum {
    LatticeVector gamma;
    std::array<cplx, 4> roots{};
    std::array<RootClass, 4> classes{};
    JordanStructure jordan = JordanStructure::TwoTwo;
    /// Soft flag: some root sits within 5% of the less-central band edge
    /// k_lc sqrt(eps). The more-central edge is a hard error instead.
    bool near_lc_edge = false;
};

ModeSpectrum mode_spectrum(const LatticeVector& g, const DispersionContext& ctx);

enum class McBranch { Generic, CriticalSpeed, Perpendicular };

struct McAsymptotic {
    cplx nu_plus;
    cplx nu_minus;
    McBranch branch = McBranch::Generic;
    /// Set when |c0 - c_crit| < 1e-6 but above the exact-equality tolerance.
    bool near_critical_warning = false;
};

/// O(eps) expansion of the more-central eigenvalues at critical mode k_j
/// (j is 1-based). lambda ~ eps * nu.
McAsymptotic mc_eigenvalues_asymptotic(int j, const DispersionContext& ctx);

struct GapReport {
    int n_more_central = 0;
    int n_less_central = 0;
    int n_hyperbolic = 0;
    double min_hyperbolic_gap = 0.0;
    double min_less_central_real = 0.0;
    int n_modes = 0;
    int n_near_lc_edge = 0;
};

GapReport gap_report(LatticeKind kind, const Direction& dir, const DispersionContext& ctx,
                     double radius);

enum class ScalingBranch {
    MoreCentral,       // |Re lambda| of the roots emerging from 0     -> slope 1
    MoreCentralError,  // |lambda - eps nu_pm| for the same roots       -> slope ~2
    LessCentral,       // |Re lambda| of roots off nonzero imag points  -> slope 1/2
    TangentialFast,    // |lambda| of the three fast Jordan-4 roots     -> slope 1/3
    TangentialQuartic  // |Re lambda| at a tangential non-critical mode -> slope 1/4
};

struct ScalingProbeResult {
    double alpha_fit = 0.0;
    std::vector<double> eps;
    std::vector<double> value;
};

/// Log-log least-squares slope of the branch measure against eps over a
/// geometric sweep (>= 8 points, ratio 2, eps_max <= 1e-2).
ScalingProbeResult scaling_probe(const LatticeVector& g, const DispersionContext& base,
                                 std::span<const double> eps_sweep, ScalingBranch branch);

/// CSV `n1,n2,re1,im1,...,re4,im4,class1..4`.
void write_spectrum_csv(std::ostream& os, const std::vector<ModeSpectrum>& modes);

}  // namespace shfront
