#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "shfront/frontspeed.hpp"
#include "shfront/lattice.hpp"

using namespace shfront;

TEST_CASE("appendix speeds at eps = 0.3") {
    MarginalSolution s = marginal_leading(0.0, 1.0, 0.3);
    CHECK(s.c == doctest::Approx(1.2).epsilon(1e-15));
    s = marginal_leading(-0.5, 1.0, 0.3);
    CHECK(std::abs(s.c - 1.0392304845413263) < 1e-3);
}

TEST_CASE("mu -> 0 limit of the exact solution") {
    for (double kp : {0.0, 0.3, -0.7}) {
        MarginalSolution s = marginal_exact(kp, 1e-14);
        CHECK(s.c < 1e-6);
        CHECK(std::abs(s.nu.imag() - std::sqrt(1.0 - kp * kp)) < 1e-6);
        CHECK(std::abs(s.nu.real()) < 1e-6);
    }
    CHECK_THROWS_AS(marginal_exact(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(marginal_exact(1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(marginal_leading(0.0, 1.0, 0.6), std::invalid_argument);
}

TEST_CASE("exact formulas satisfy the double-root residuals on a grid") {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        double kp = -0.9 + 1.8 * i / 9.0;
        for (int j = 0; j < 10; ++j) {
            double mu = std::pow(10.0, -6.0 + 6.0 * j / 9.0);
            MarginalSolution s = marginal_exact(kp, mu);
            worst = std::max(worst, dispersion_residual(s));
            CHECK(s.nu.real() < 0.0);
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("newton oracle agrees with the closed forms") {
    for (double kp : {0.0, -0.5, 0.3}) {
        for (double mu : {0.01, 0.09, 0.25}) {
            MarginalSolution ex = marginal_exact(kp, mu);
            MarginalSolution nw = marginal_newton(kp, mu);
            CHECK(std::abs(ex.c - nw.c) < 1e-9);
            CHECK(std::abs(ex.omega - nw.omega) < 1e-9);
            CHECK(std::abs(ex.nu - nw.nu) < 1e-9);
        }
    }
}

TEST_CASE("expansion consistency: c error is O(eps^2)") {
    for (double kp : {0.0, -0.5, 0.3}) {
        std::vector<double> eps{1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (double e : eps) {
            double err = std::abs(marginal_exact(kp, e * e).c - marginal_leading(kp, 1.0, e).c);
            double x = std::log(e), y = std::log(err);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        double n = double(eps.size());
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope >= 1.8);
    }
}

TEST_CASE("maximal speed sits at k_perp = 0 and decreases in |k_perp|") {
    double mu = 0.09;
    double prev = marginal_exact(0.0, mu).c;
    for (int i = 1; i <= 40; ++i) {
        double kp = 0.975 * i / 40.0;
        double c = marginal_exact(kp, mu).c;
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("c_leading at k_perp = dperp.k_j matches the per-mode critical speed") {
    for (double mu0 : {1.0, 0.6}) {
        for (double eps : {0.1, 0.3}) {
            Direction dir = make_direction(LatticeKind::Hex, AngleSpec::rational(3, 2));
            for (int j = 0; j < 3; ++j) {
                double kperp = dir.proj_perp[j];
                if (std::abs(kperp) >= 1.0) continue;
                double c_lead = marginal_leading(kperp, mu0, eps).c;
                double c_crit = 4.0 * std::abs(dir.proj[j]) * std::sqrt(mu0);
                CHECK(c_lead == doctest::Approx(eps * c_crit).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("frontspeed table") {
    std::ostringstream os;
    write_frontspeed_table(os, 0.0, 0.5, 3, 1.0, 0.3);
    std::string out = os.str();
    CHECK(out.rfind("kperp,c_exact,c_leading,omega", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 4);
}
