#pragma once

#include <complex>
#include <iosfwd>

namespace shfront {

/// One pinched-double-root candidate of the co-moving dispersion relation
/// d(lambda, nu d + i k_perp d_perp, c) = -(1 + nu^2 - k_perp^2)^2 + mu
///                                        + c nu - lambda  at lambda = i omega.
struct MarginalSolution {
    double k_perp = 0.0;
    double mu = 0.0;
    std::complex<double> nu;  // Re nu < 0, Im nu > 0 branch
    double c = 0.0;
    double omega = 0.0;
};

/// Closed-form marginal-stability solution for the full parameter mu.
/// Requires |k_perp| < 1 and mu > 0.
MarginalSolution marginal_exact(double k_perp, double mu);

/// Leading-order expansion at mu = eps^2 mu0:
///   nu = i sqrt(1-k^2) - eps/2 sqrt(mu0/(1-k^2)),
///   c = 4 eps sqrt((1-k^2) mu0), omega = 4 eps (1-k^2) sqrt(mu0).
MarginalSolution marginal_leading(double k_perp, double mu0, double eps);

/// Verification oracle: Newton iteration on the double-root system
/// {d = 0, d_nu d = 0} from the leading-order guess.
MarginalSolution marginal_newton(double k_perp, double mu);

/// |d| + |d_nu d| at the solution triple.
double dispersion_residual(const MarginalSolution& s);

/// Table `kperp,c_exact,c_leading,omega` over a uniform k_perp grid.
void write_frontspeed_table(std::ostream& os, double k_min, double k_max, int n, double mu0,
                            double eps);

}  // namespace shfront
