#include <doctest.h>

#include <cmath>
#include <random>

#include "shfront/amplitude.hpp"

using namespace shfront;

namespace {

ModelParams hex_params(double mu0 = 1.0, double c0 = 2.0, double b2 = 1.0, double K0 = -3.0,
                       double K2 = -6.0) {
    ModelParams p;
    p.kind = LatticeKind::Hex;
    p.mu0 = mu0;
    p.c0 = c0;
    p.beta2 = b2;
    p.K0 = K0;
    p.Kcross = K2;
    return p;
}

ModelParams square_params(double mu0 = 1.0, double c0 = 2.0, double K0 = -3.0, double K1 = -6.0) {
    ModelParams p;
    p.kind = LatticeKind::Square;
    p.mu0 = mu0;
    p.c0 = c0;
    p.beta2 = 0.0;
    p.K0 = K0;
    p.Kcross = K1;
    return p;
}

/// Independent oracle for the cubic coefficients: enumerate the ordered
/// quadratic convolution pairs over the six signed critical modes, build the
/// second-shell responses, and read off the monomial coefficients of the
/// k1-equation.
struct HexCoeffOracle {
    double K0 = 0.0, K2 = 0.0, beta2 = 0.0;

    explicit HexCoeffOracle(double beta) {
        Vec2 kk[7];
        for (int j = 1; j <= 3; ++j) {
            kk[j] = generator(LatticeKind::Hex, j);
            kk[j + 3] = kk[j] * -1.0;
        }
        auto n2 = [&](const Vec2& a, const Vec2& b) { return beta * a.dot(b); };
        auto mode_of = [&](int idx) { return (idx - 1) % 3; };
        auto l0 = [](const Vec2& v) {
            double n = v.dot(v);
            return -(1.0 - n) * (1.0 - n);
        };
        // cubic terms: ordered triples with k_a + k_b + k_c = k1
        double cubic_self = 0.0, cubic_cross = 0.0;
        for (int a = 1; a <= 6; ++a)
            for (int b = 1; b <= 6; ++b)
                for (int c = 1; c <= 6; ++c) {
                    Vec2 s = kk[a] + kk[b] + kk[c] - kk[1];
                    if (s.norm() > 1e-12) continue;
                    int e[3] = {0, 0, 0};
                    e[mode_of(a)]++; e[mode_of(b)]++; e[mode_of(c)]++;
                    if (e[0] == 3) cubic_self += -1.0;
                    if (e[0] == 1 && e[1] == 2) cubic_cross += -1.0;
                }
        // quadratic terms through the second-shell response fields
        double quad_self = 0.0, quad_cross = 0.0, quad_res = 0.0;
        for (int a = 1; a <= 6; ++a)
            for (int b = 1; b <= 6; ++b) {
                Vec2 g = kk[a] + kk[b];
                double gn = g.dot(g);
                if (std::abs(gn - 1.0) < 1e-12) {
                    // resonant pair: contributes to beta2 when it lands on k1
                    if ((g - kk[1]).norm() < 1e-12) quad_res += n2(kk[a], kk[b]);
                    continue;
                }
                double psi = -n2(kk[a], kk[b]) / l0(g);  // per ordered pair
                for (int c = 1; c <= 6; ++c) {
                    if ((g + kk[c] - kk[1]).norm() > 1e-12) continue;
                    double contrib = 2.0 * n2(g, kk[c]) * psi;
                    int e[3] = {0, 0, 0};
                    e[mode_of(a)]++; e[mode_of(b)]++; e[mode_of(c)]++;
                    if (e[0] == 3) quad_self += contrib;
                    if (e[0] == 1 && e[1] == 2) quad_cross += contrib;
                }
            }
        K0 = cubic_self + quad_self;
        K2 = cubic_cross + quad_cross;
        beta2 = quad_res;
    }
};

}  // namespace

TEST_CASE("coefficients_qcsh hex: frozen values and oracle agreement") {
    CoefficientSet cs = coefficients_qcsh(0.0, LatticeKind::Hex);
    CHECK(cs.K0 == -3.0);  // exact
    CHECK(cs.Kcross == -6.0);
    CHECK(cs.beta2 == 0.0);

    cs = coefficients_qcsh(0.3, LatticeKind::Hex);
    CHECK(cs.K0 == doctest::Approx(-3.04).epsilon(1e-14));           // -3 - 4 b^2/9
    CHECK(cs.Kcross == doctest::Approx(-6.0675).epsilon(1e-14));     // -6 - 3 b^2/4
    CHECK(cs.beta2 == doctest::Approx(-0.3).epsilon(1e-14));

    for (double beta : {0.0, 0.1, 0.3, 0.5, -0.4}) {
        HexCoeffOracle oracle(beta);
        CoefficientSet c = coefficients_qcsh(beta, LatticeKind::Hex);
        CHECK(c.K0 == doctest::Approx(oracle.K0).epsilon(1e-12));
        CHECK(c.Kcross == doctest::Approx(oracle.K2).epsilon(1e-12));
        CHECK(c.beta2 == doctest::Approx(oracle.beta2).epsilon(1e-12));
    }
}

TEST_CASE("coefficients_qcsh square") {
    CoefficientSet cs = coefficients_qcsh(0.0, LatticeKind::Square);
    CHECK(cs.K0 == -3.0);
    CHECK(cs.Kcross == -6.0);
    // quadratic corrections to K1 vanish: k1 . k2 = 0 kills both pair responses
    cs = coefficients_qcsh(0.4, LatticeKind::Square);
    CHECK(cs.Kcross == -6.0);
    CHECK(cs.K0 == doctest::Approx(-3.0 - 4.0 * 0.16 / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(coefficients_qcsh(1.0, LatticeKind::Hex), std::invalid_argument);
}

TEST_CASE("coefficient limit K -> (-3,-6) is O(beta^2)") {
    for (double beta : {0.2, 0.1, 0.05}) {
        CoefficientSet c = coefficients_qcsh(beta, LatticeKind::Hex);
        CHECK(std::abs(c.K0 + 3.0) <= 0.5 * beta * beta);
        CHECK(std::abs(c.Kcross + 6.0) <= beta * beta);
    }
}

TEST_CASE("equilibria annihilate the rhs") {
    ModelParams p = hex_params();
    Direction dir = make_direction(LatticeKind::Hex, AngleSpec::axis());
    AmplitudeSystem sys(SystemVariant::HexGeneric, p, dir);

    Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
    CHECK(sys.rhs(zero).norm() == 0.0);

    double ar = std::sqrt(-p.mu0 / p.K0);
    double roll[3] = {ar, 0.0, 0.0};
    Eigen::VectorXd x = sys.embed_amplitudes(roll);
    CHECK(sys.rhs(x).norm() < 1e-14);
}

TEST_CASE("degenerate variant stationary state") {
    // theta=pi/6, mu0=1, c0=2, state (0,0,A2,0,0) with mu0 A2 + K0 A2^3 = 0
    ModelParams p = hex_params(1.0, 2.0, 1.0, -3.0, -6.0);
    Direction dir = make_direction(LatticeKind::Hex, AngleSpec::rational(1, 1));
    AmplitudeSystem sys(SystemVariant::HexDegenerate, p, dir);
    REQUIRE(sys.dim() == 5);
    double a2 = std::sqrt(-p.mu0 / p.K0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
    x[sys.a_index(1)] = a2;
    CHECK(sys.rhs(x).norm() < 1e-14);
    // brute-force residual of the middle equation at a non-equilibrium point
    x[sys.a_index(1)] = 0.5;
    double resid = p.mu0 * 0.5 + p.K0 * 0.125;
    CHECK(sys.rhs(x)[sys.a_index(1)] == doctest::Approx(-resid / p.c0));
}

TEST_CASE("lyapunov closed-form values") {
    ModelParams p = hex_params(1.0, 2.0, 0.7, -3.0, -6.0);
    Direction dir = make_direction(LatticeKind::Hex, AngleSpec::axis());
    AmplitudeSystem sys(SystemVariant::HexGeneric, p, dir);

    Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
    CHECK(sys.lyapunov(zero) == 0.0);

    // rolls: H = -mu0^2/(4 K0), independent of beta2
    double ar = std::sqrt(-p.mu0 / p.K0);
    double roll[3] = {ar, 0.0, 0.0};
    Eigen::VectorXd x = sys.embed_amplitudes(roll);
    CHECK(sys.lyapunov(x) == doctest::Approx(-p.mu0 * p.mu0 / (4.0 * p.K0)).epsilon(1e-14));

    // beta2 = 0 hexagons: H = -3 mu0^2 / (4 (K0 + 2 K2))
    ModelParams p0 = hex_params(1.0, 2.0, 0.0, -3.0, -6.0);
    AmplitudeSystem sys0(SystemVariant::HexGeneric, p0, dir);
    double ah = std::sqrt(-p0.mu0 / (p0.K0 + 2.0 * p0.Kcross));
    double hexa[3] = {ah, ah, ah};
    x = sys0.embed_amplitudes(hexa);
    CHECK(sys0.lyapunov(x) ==
          doctest::Approx(-3.0 * p0.mu0 * p0.mu0 / (4.0 * (p0.K0 + 2.0 * p0.Kcross)))
              .epsilon(1e-14));
}

TEST_CASE("dissipation identity <grad H, f> = -c0 sum B^2") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Case {
        SystemVariant v;
        ModelParams p;
        AngleSpec spec;
    };
    std::vector<Case> cases{
        {SystemVariant::HexGeneric, hex_params(1.0, 2.0, 1.0, -3.0, -6.0), AngleSpec::axis()},
        {SystemVariant::HexGeneric, hex_params(0.7, 1.3, 0.4, -1.2, -0.6), AngleSpec::rational(3, 2)},
        {SystemVariant::SquareGeneric, square_params(), AngleSpec::rational(2, 1)},
    };
    for (const auto& c : cases) {
        Direction dir = make_direction(c.p.kind, c.spec);
        AmplitudeSystem sys(c.v, c.p, dir);
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::VectorXd x(sys.dim()), grad(sys.dim());
            for (int i = 0; i < sys.dim(); ++i) x[i] = u(rng);
            sys.lyapunov_gradient(std::span<const double>(x.data(), sys.dim()),
                                  std::span<double>(grad.data(), sys.dim()));
            double lhs = grad.dot(sys.rhs(x));
            double rhs_v = sys.b_dissipation(std::span<const double>(x.data(), sys.dim()));
            CHECK(std::abs(lhs - rhs_v) < 1e-12 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("degenerate variants dissipate through the eliminated mode too") {
    ModelParams p = hex_params();
    Direction dir = make_direction(LatticeKind::Hex, AngleSpec::rational(1, 1));
    AmplitudeSystem sys(SystemVariant::HexDegenerate, p, dir);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd x(5), grad(5);
        for (int i = 0; i < 5; ++i) x[i] = u(rng);
        sys.lyapunov_gradient(std::span<const double>(x.data(), 5), std::span<double>(grad.data(), 5));
        double lhs = grad.dot(sys.rhs(x));
        double want = sys.dissipation_rate(std::span<const double>(x.data(), 5));
        CHECK(lhs == doctest::Approx(want).epsilon(1e-10));
        CHECK(lhs <= 1e-15);
    }
}

TEST_CASE("cyclic symmetry of the hex rhs") {
    ModelParams p = hex_params(0.9, 1.7, 0.5, -2.0, -4.0);
    Direction dir = make_direction(LatticeKind::Hex, AngleSpec::rational(2, 1));
    AmplitudeSystem sys(SystemVariant::HexGeneric, p, dir);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // permute (A1,B1)->(A2,B2)->(A3,B3) together with the projections
    Direction dp = dir;
    dp.proj = {dir.proj[2], dir.proj[0], dir.proj[1]};
    dp.proj_perp = {dir.proj_perp[2], dir.proj_perp[0], dir.proj_perp[1]};
    AmplitudeSystem sysp(SystemVariant::HexGeneric, p, dp);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(6);
        for (int i = 0; i < 6; ++i) x[i] = u(rng);
        Eigen::VectorXd xp(6);
        xp << x[4], x[5], x[0], x[1], x[2], x[3];
        Eigen::VectorXd f = sys.rhs(x), fp = sysp.rhs(xp);
        CHECK(std::abs(fp[2] - f[0]) < 1e-14);
        CHECK(std::abs(fp[3] - f[1]) < 1e-14);
        CHECK(std::abs(fp[4] - f[2]) < 1e-14);
        CHECK(std::abs(fp[5] - f[3]) < 1e-14);
        CHECK(std::abs(fp[0] - f[4]) < 1e-14);
        CHECK(std::abs(fp[1] - f[5]) < 1e-14);
    }
}

TEST_CASE("sign symmetry (A1,-A2,-A3) maps equilibria to equilibria") {
    ModelParams p = hex_params();
    Direction dir = make_direction(LatticeKind::Hex, AngleSpec::axis());
    AmplitudeSystem sys(SystemVariant::HexGeneric, p, dir);
    double s = p.K0 + 2.0 * p.Kcross;
    double ah = (-p.beta2 - std::sqrt(p.beta2 * p.beta2 - 4.0 * p.mu0 * s)) / (2.0 * s);
    double flipped[3] = {ah, -ah, -ah};
    Eigen::VectorXd x = sys.embed_amplitudes(flipped);
    CHECK(sys.rhs(x).norm() < 1e-13);
}

TEST_CASE("jacobian matches finite differences") {
    ModelParams p = hex_params(0.8, 1.1, 0.9, -2.5, -3.5);
    for (auto variant : {SystemVariant::HexGeneric, SystemVariant::InfiniteSpeed}) {
        Direction dir = make_direction(LatticeKind::Hex, AngleSpec::axis());
        AmplitudeSystem sys(variant, p, dir);
        Eigen::VectorXd x(sys.dim());
        for (int i = 0; i < sys.dim(); ++i) x[i] = 0.1 * (i + 1) * (i % 2 ? -1 : 1);
        Eigen::MatrixXd J = sys.jacobian(std::span<const double>(x.data(), sys.dim()));
        const double h = 1e-6;
        for (int c = 0; c < sys.dim(); ++c) {
            Eigen::VectorXd xp = x, xm = x;
            xp[c] += h;
            xm[c] -= h;
            Eigen::VectorXd col = (sys.rhs(xp) - sys.rhs(xm)) / (2.0 * h);
            for (int r = 0; r < sys.dim(); ++r)
                CHECK(J(r, c) == doctest::Approx(col[r]).epsilon(1e-5));
        }
    }
}

TEST_CASE("variant/direction mismatch is rejected") {
    ModelParams p = hex_params();
    Direction deg = make_direction(LatticeKind::Hex, AngleSpec::rational(1, 1));
    CHECK_THROWS_AS(AmplitudeSystem(SystemVariant::HexGeneric, p, deg), std::invalid_argument);
    Direction sq = make_direction(LatticeKind::Square, AngleSpec::rational(2, 1));
    CHECK_THROWS_AS(AmplitudeSystem(SystemVariant::HexGeneric, p, sq), std::invalid_argument);
}
