#include "shfront/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace shfront {

namespace {

constexpr double kCritTol = 1e-10;
constexpr double kNearCritTol = 1e-6;
constexpr double kClusterRadius = 1e-6;
constexpr double kEdgeFraction = 0.05;

cplx polyval(const std::array<cplx, 5>& c, cplx z) {
    cplx r = c[4];
    for (int k = 3; k >= 0; --k) r = r * z + c[k];
    return r;
}

cplx polyder(const std::array<cplx, 5>& c, cplx z) {
    cplx r = 4.0 * c[4];
    for (int k = 3; k >= 1; --k) r = r * z + double(k) * c[k];
    return r;
}

}  // namespace

double critical_speed(double d_dot_k, double mu0) {
    return 4.0 * std::abs(d_dot_k) * std::sqrt(mu0);
}

std::string to_string(RootClass c) {
    switch (c) {
        case RootClass::Imaginary: return "imaginary";
        case RootClass::MoreCentral: return "more_central";
        case RootClass::LessCentral: return "less_central";
        case RootClass::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

std::array<cplx, 5> dispersion_poly(const LatticeVector& g, const DispersionContext& ctx) {
    double a = ctx.dir.axial(g);
    double s = 1.0 - double(g.norm_sq_int());
    // p = -(lambda^2 + 2 i a lambda + s)^2 + eps^2 mu0 + eps c0 lambda
    std::array<cplx, 5> c;
    c[4] = {-1.0, 0.0};
    c[3] = {0.0, -4.0 * a};
    c[2] = {4.0 * a * a - 2.0 * s, 0.0};
    c[1] = {ctx.eps * ctx.c0, -4.0 * a * s};
    c[0] = {-s * s + ctx.eps * ctx.eps * ctx.mu0, 0.0};
    return c;
}

std::array<cplx, 4> quartic_roots(const std::array<cplx, 5>& coeff) {
    // Monic form, then 4x4 companion matrix with diagonal balancing.
    std::array<cplx, 4> m;
    for (int k = 0; k < 4; ++k) m[k] = coeff[k] / coeff[4];

    Eigen::Matrix4cd C = Eigen::Matrix4cd::Zero();
    C(0, 3) = -m[0];
    C(1, 3) = -m[1];
    C(2, 3) = -m[2];
    C(3, 3) = -m[3];
    C(1, 0) = C(2, 1) = C(3, 2) = 1.0;

    // One pass of two-norm balancing (powers of 2 keep it exact).
    for (int iter = 0; iter < 4; ++iter) {
        for (int i = 0; i < 4; ++i) {
            double rn = 0, cn = 0;
            for (int j = 0; j < 4; ++j) {
                if (j != i) {
                    rn += std::abs(C(i, j));
                    cn += std::abs(C(j, i));
                }
            }
            if (rn == 0 || cn == 0) continue;
            double f = 1.0;
            while (cn < rn / 2.0) { cn *= 2.0; rn /= 2.0; f *= 2.0; }
            while (cn > rn * 2.0) { cn /= 2.0; rn *= 2.0; f /= 2.0; }
            if (f != 1.0) {
                for (int j = 0; j < 4; ++j) C(i, j) /= f;
                for (int j = 0; j < 4; ++j) C(j, i) *= f;
            }
        }
    }

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(C, false);
    std::array<cplx, 4> roots;
    for (int k = 0; k < 4; ++k) {
        cplx z = es.eigenvalues()(k);
        cplx d = polyder(coeff, z);
        if (std::abs(d) > 0.0) {
            cplx corr = polyval(coeff, z) / d;
            if (std::abs(corr) < 1e-2 * (1.0 + std::abs(z))) z -= corr;
        }
        roots[k] = z;
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

ModeSpectrum mode_spectrum(const LatticeVector& g, const DispersionContext& ctx) {
    if (ctx.eps < 0.0) throw std::invalid_argument("eps must be >= 0");
    ModeSpectrum ms;
    ms.gamma = g;
    ms.roots = quartic_roots(dispersion_poly(g, ctx));

    // Jordan structure at eps = 0: geometric rule from |d_perp . gamma|,
    // cross-checked against root clustering of the eps = 0 quartic. A 4-fold
    // root computed through the companion matrix spreads like eps_mach^(1/4),
    // so the quadruple test uses a wider diameter than the pair test.
    double tr = std::abs(ctx.dir.transverse(g));
    JordanStructure geo = tr < 1.0 - 1e-9 ? JordanStructure::TwoTwo
                          : tr <= 1.0 + 1e-9 ? JordanStructure::Four
                                             : JordanStructure::HyperbolicTwoTwo;
    DispersionContext ctx0 = ctx;
    ctx0.eps = 0.0;
    auto r0 = ctx.eps == 0.0 ? ms.roots : quartic_roots(dispersion_poly(g, ctx0));
    double diameter = 0.0;
    int tight_pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double d = std::abs(r0[i] - r0[j]);
            double scale = 1.0 + std::norm(r0[i]);  // double-root conditioning
            diameter = std::max(diameter, d);
            if (d < kClusterRadius * scale) ++tight_pairs;
        }
    double four_scale = 1.0;
    for (const auto& z : r0) four_scale = std::max(four_scale, 1.0 + std::abs(z));
    bool ok = geo == JordanStructure::Four ? diameter < 1e-3 * four_scale : tight_pairs >= 2;
    if (!ok)
        throw std::runtime_error("jordan-structure cross-check failed at mode (" +
                                 std::to_string(g.n1) + "," + std::to_string(g.n2) + ")");
    ms.jordan = geo;

    if (ctx.eps == 0.0) {
        for (int k = 0; k < 4; ++k)
            ms.classes[k] = std::abs(ms.roots[k].real()) < kClusterRadius
                                ? RootClass::Imaginary
                                : RootClass::Hyperbolic;
        return ms;
    }

    double mc_edge = ctx.k_mc * ctx.eps;
    double lc_edge = ctx.k_lc * std::sqrt(ctx.eps);
    for (int k = 0; k < 4; ++k) {
        cplx z = ms.roots[k];
        // More-central roots emerge from lambda = 0, so the separating measure
        // is distance to the origin; less-central vs hyperbolic splits on the
        // real part.
        if (std::abs(std::abs(z) - mc_edge) <= kEdgeFraction * mc_edge)
            throw AmbiguousClassification("root |lambda| within 5% of the more-central edge at mode (" +
                                          std::to_string(g.n1) + "," + std::to_string(g.n2) +
                                          "); shrink eps");
        if (std::abs(z) <= mc_edge) {
            ms.classes[k] = RootClass::MoreCentral;
        } else if (std::abs(z.real()) <= lc_edge) {
            ms.classes[k] = RootClass::LessCentral;
        } else {
            ms.classes[k] = RootClass::Hyperbolic;
        }
        if (std::abs(std::abs(z.real()) - lc_edge) <= kEdgeFraction * lc_edge)
            ms.near_lc_edge = true;
    }
    return ms;
}

McAsymptotic mc_eigenvalues_asymptotic(int j, const DispersionContext& ctx) {
    if (ctx.eps <= 0.0) throw std::invalid_argument("mc_eigenvalues_asymptotic requires eps > 0");
    if (j < 1 || j > generator_count(ctx.dir.kind))
        throw std::invalid_argument("mode index out of range");
    double a = ctx.dir.proj[j - 1];
    McAsymptotic out;
    if (a == 0.0) {
        out.branch = McBranch::Perpendicular;
        out.nu_plus = out.nu_minus = cplx(-ctx.mu0 / ctx.c0, 0.0);
        return out;
    }
    double asq = a * a;
    double ccrit = critical_speed(a, ctx.mu0);
    double dc = std::abs(ctx.c0 - ccrit);
    if (dc < kCritTol) {
        out.branch = McBranch::CriticalSpeed;
        cplx i32 = std::polar(1.0, 3.0 * M_PI / 4.0);  // i^(3/2)
        cplx corr = std::sqrt(ctx.eps) * i32 * std::pow(ctx.mu0, 0.75) /
                    (2.0 * std::sqrt(2.0) * asq);
        cplx base(-ctx.c0 / (8.0 * asq), 0.0);
        out.nu_plus = base + corr;
        out.nu_minus = base - corr;
        return out;
    }
    out.branch = McBranch::Generic;
    out.near_critical_warning = dc < kNearCritTol;
    cplx disc = std::sqrt(cplx(ctx.c0 * ctx.c0 - 16.0 * asq * ctx.mu0, 0.0));
    out.nu_plus = (-ctx.c0 + disc) / (8.0 * asq);
    out.nu_minus = (-ctx.c0 - disc) / (8.0 * asq);
    return out;
}

GapReport gap_report(LatticeKind kind, const Direction& dir, const DispersionContext& ctx,
                     double radius) {
    if (!dir.gap_admissible) throw std::invalid_argument("direction is not gap-admissible");
    if (radius < 2.0) throw std::invalid_argument("gap_report needs radius >= 2");
    DispersionContext c = ctx;
    c.dir = dir;
    GapReport rep;
    rep.min_hyperbolic_gap = std::numeric_limits<double>::infinity();
    rep.min_less_central_real = std::numeric_limits<double>::infinity();
    for (const auto& g : enumerate_lattice(kind, radius)) {
        ModeSpectrum ms = mode_spectrum(g, c);
        ++rep.n_modes;
        if (ms.near_lc_edge) ++rep.n_near_lc_edge;
        for (int k = 0; k < 4; ++k) {
            switch (ms.classes[k]) {
                case RootClass::MoreCentral:
                    ++rep.n_more_central;
                    break;
                case RootClass::LessCentral:
                    ++rep.n_less_central;
                    rep.min_less_central_real =
                        std::min(rep.min_less_central_real, std::abs(ms.roots[k].real()));
                    break;
                default:
                    ++rep.n_hyperbolic;
                    rep.min_hyperbolic_gap =
                        std::min(rep.min_hyperbolic_gap, std::abs(ms.roots[k].real()));
            }
        }
    }
    return rep;
}

ScalingProbeResult scaling_probe(const LatticeVector& g, const DispersionContext& base,
                                 std::span<const double> eps_sweep, ScalingBranch branch) {
    if (eps_sweep.size() < 8) throw std::invalid_argument("scaling probe needs >= 8 sweep points");
    for (size_t i = 0; i < eps_sweep.size(); ++i) {
        if (eps_sweep[i] > 1e-2 + 1e-15) throw std::invalid_argument("scaling probe needs eps <= 1e-2");
        if (i > 0) {
            double ratio = eps_sweep[i - 1] / eps_sweep[i];
            if (std::abs(ratio - 2.0) > 1e-9)
                throw std::invalid_argument("scaling probe needs a geometric sweep of ratio 2");
        }
    }

    ScalingProbeResult out;
    double a = base.dir.axial(g);
    for (double eps : eps_sweep) {
        DispersionContext ctx = base;
        ctx.eps = eps;
        ModeSpectrum ms = mode_spectrum(g, ctx);  // throws on ambiguous classification
        std::array<cplx, 4> r = ms.roots;
        double v = 0.0;
        switch (branch) {
            case ScalingBranch::MoreCentral:
            case ScalingBranch::MoreCentralError: {
                // the two roots continuing from lambda = 0
                std::sort(r.begin(), r.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
                if (branch == ScalingBranch::MoreCentral) {
                    v = std::max(std::abs(r[0].real()), std::abs(r[1].real()));
                } else {
                    double asq = a * a;
                    cplx disc = std::sqrt(cplx(ctx.c0 * ctx.c0 - 16.0 * asq * ctx.mu0, 0.0));
                    cplx nup = eps * (-ctx.c0 + disc) / (8.0 * asq);
                    cplx num = eps * (-ctx.c0 - disc) / (8.0 * asq);
                    double e0 = std::min(std::abs(r[0] - nup), std::abs(r[0] - num));
                    double e1 = std::min(std::abs(r[1] - nup), std::abs(r[1] - num));
                    v = std::max(e0, e1);
                }
                break;
            }
            case ScalingBranch::LessCentral: {
                // the two roots continuing from -2 i (d.gamma)
                std::sort(r.begin(), r.end(), [&](cplx x, cplx y) {
                    return std::abs(x + cplx(0.0, 2.0 * a)) < std::abs(y + cplx(0.0, 2.0 * a));
                });
                v = std::max(std::abs(r[0].real()), std::abs(r[1].real()));
                break;
            }
            case ScalingBranch::TangentialFast: {
                // three fast roots of the Jordan-4 splitting (largest |lambda|)
                std::sort(r.begin(), r.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
                v = (std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2])) / 3.0;
                break;
            }
            case ScalingBranch::TangentialQuartic: {
                v = 0.0;
                for (auto z : r) v = std::max(v, std::abs(z.real()));
                break;
            }
        }
        out.eps.push_back(eps);
        out.value.push_back(v);
    }

    // least squares on (log eps, log value)
    double n = double(out.eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < out.eps.size(); ++i) {
        double x = std::log(out.eps[i]), y = std::log(out.value[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    out.alpha_fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<ModeSpectrum>& modes) {
    os << "n1,n2,re1,im1,re2,im2,re3,im3,re4,im4,class1,class2,class3,class4\n";
    char buf[512];
    for (const auto& ms : modes) {
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s,%s,%s\n",
                      ms.gamma.n1, ms.gamma.n2, ms.roots[0].real(), ms.roots[0].imag(),
                      ms.roots[1].real(), ms.roots[1].imag(), ms.roots[2].real(),
                      ms.roots[2].imag(), ms.roots[3].real(), ms.roots[3].imag(),
                      to_string(ms.classes[0]).c_str(), to_string(ms.classes[1]).c_str(),
                      to_string(ms.classes[2]).c_str(), to_string(ms.classes[3]).c_str());
        os << buf;
    }
}

}  // namespace shfront
