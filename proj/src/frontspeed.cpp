#include "shfront/frontspeed.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

namespace shfront {

namespace {

using cplx = std::complex<double>;

cplx disp(cplx lambda, cplx nu, double k_perp, double mu, double c) {
    cplx z = 1.0 + nu * nu - k_perp * k_perp;
    return -(z * z) + mu + c * nu - lambda;
}

cplx disp_dnu(cplx nu, double k_perp, double c) {
    cplx z = 1.0 + nu * nu - k_perp * k_perp;
    return -4.0 * nu * z + c;
}

}  // namespace

MarginalSolution marginal_exact(double k_perp, double mu) {
    if (mu <= 0.0) throw std::invalid_argument("no pulled front for mu <= 0");
    if (std::abs(k_perp) >= 1.0) throw std::invalid_argument("marginal_exact needs |k_perp| < 1");
    double a = 1.0 - k_perp * k_perp;
    double S = std::sqrt(a * a + 6.0 * mu);
    double rm = std::sqrt(S - a);  // "minus" branch: Re nu < 0
    double rp = std::sqrt(S + 3.0 * a);
    MarginalSolution s;
    s.k_perp = k_perp;
    s.mu = mu;
    s.nu = cplx(-rm / (2.0 * std::sqrt(3.0)), 0.5 * rp);
    s.c = 4.0 / (3.0 * std::sqrt(3.0)) * (S + 2.0 * a) * rm;
    s.omega = (S + 3.0 * a) * rp * rm / (2.0 * std::sqrt(3.0));
    return s;
}

MarginalSolution marginal_leading(double k_perp, double mu0, double eps) {
    if (std::abs(k_perp) >= 1.0) throw std::invalid_argument("marginal_leading needs |k_perp| < 1");
    if (mu0 <= 0.0) throw std::invalid_argument("no pulled front for mu0 <= 0");
    if (eps <= 0.0 || eps > 0.5) throw std::invalid_argument("marginal_leading needs eps in (0, 0.5]");
    double a = 1.0 - k_perp * k_perp;
    MarginalSolution s;
    s.k_perp = k_perp;
    s.mu = eps * eps * mu0;
    s.nu = cplx(-0.5 * eps * std::sqrt(mu0 / a), std::sqrt(a));
    s.c = 4.0 * eps * std::sqrt(a * mu0);
    s.omega = 4.0 * eps * a * std::sqrt(mu0);
    return s;
}

MarginalSolution marginal_newton(double k_perp, double mu) {
    if (mu <= 0.0) throw std::invalid_argument("no pulled front for mu <= 0");
    // Initial guess from the leading-order expansion written as mu = eps^2 mu0.
    double eps = std::min(0.5, std::sqrt(mu));
    MarginalSolution s = marginal_leading(k_perp, mu / (eps * eps), eps);
    Eigen::Vector4d x(s.nu.real(), s.nu.imag(), s.c, s.omega);
    for (int iter = 0; iter < 60; ++iter) {
        cplx nu(x[0], x[1]);
        cplx f1 = disp(cplx(0.0, x[3]), nu, k_perp, mu, x[2]);
        cplx f2 = disp_dnu(nu, k_perp, x[2]);
        Eigen::Vector4d F(f1.real(), f1.imag(), f2.real(), f2.imag());
        if (F.norm() < 1e-14) break;
        Eigen::Matrix4d J;
        const double h = 1e-7;
        for (int k = 0; k < 4; ++k) {
            Eigen::Vector4d xp = x;
            xp[k] += h;
            cplx nup(xp[0], xp[1]);
            cplx g1 = disp(cplx(0.0, xp[3]), nup, k_perp, mu, xp[2]);
            cplx g2 = disp_dnu(nup, k_perp, xp[2]);
            J(0, k) = (g1.real() - f1.real()) / h;
            J(1, k) = (g1.imag() - f1.imag()) / h;
            J(2, k) = (g2.real() - f2.real()) / h;
            J(3, k) = (g2.imag() - f2.imag()) / h;
        }
        x -= J.fullPivLu().solve(F);
    }
    MarginalSolution out;
    out.k_perp = k_perp;
    out.mu = mu;
    out.nu = cplx(x[0], x[1]);
    out.c = x[2];
    out.omega = x[3];
    return out;
}

double dispersion_residual(const MarginalSolution& s) {
    return std::abs(disp(cplx(0.0, s.omega), s.nu, s.k_perp, s.mu, s.c)) +
           std::abs(disp_dnu(s.nu, s.k_perp, s.c));
}

void write_frontspeed_table(std::ostream& os, double k_min, double k_max, int n, double mu0,
                            double eps) {
    os << "kperp,c_exact,c_leading,omega\n";
    char buf[160];
    for (int i = 0; i < n; ++i) {
        double k = k_min + (k_max - k_min) * (n == 1 ? 0.0 : double(i) / double(n - 1));
        MarginalSolution ex = marginal_exact(k, eps * eps * mu0);
        MarginalSolution ld = marginal_leading(k, mu0, eps);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", k, ex.c, ld.c, ex.omega);
        os << buf;
    }
}

}  // namespace shfront
