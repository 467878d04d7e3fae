#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "shfront/lattice.hpp"

using namespace shfront;

TEST_CASE("hex axis direction projections") {
    Direction d = make_direction(LatticeKind::Hex, AngleSpec::axis());
    CHECK(d.proj[0] == doctest::Approx(1.0));
    CHECK(d.proj[1] == doctest::Approx(-0.5));
    CHECK(d.proj[2] == doctest::Approx(-0.5));
    CHECK(!d.degenerate());
    CHECK(d.d.x == 1.0);
    CHECK(d.d_perp.y == 1.0);
}

TEST_CASE("hex pi/6 direction is degenerate at k2") {
    Direction d = make_direction(LatticeKind::Hex, AngleSpec::rational(1, 1));
    REQUIRE(d.degenerate());
    CHECK(*d.degenerate_mode == 1);
    CHECK(d.proj[1] == 0.0);  // exact by construction
    CHECK(d.theta() == doctest::Approx(M_PI / 6.0));
    CHECK(d.proj[0] == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(d.proj[2] == doctest::Approx(-std::sqrt(3.0) / 2.0));
}

TEST_CASE("square sector boundary theta=pi/4 rejected") {
    CHECK_THROWS_AS(make_direction(LatticeKind::Square, AngleSpec::rational(1, 1)),
                    std::invalid_argument);
    // outside the hex fundamental sector as well
    CHECK_THROWS_AS(make_direction(LatticeKind::Hex, AngleSpec::rational(1, 2)),
                    std::invalid_argument);
}

TEST_CASE("direction unit and orthogonality invariants") {
    for (auto kind : {LatticeKind::Hex, LatticeKind::Square}) {
        std::vector<AngleSpec> specs{AngleSpec::axis(), AngleSpec::rational(2, 1),
                                     AngleSpec::rational(5, 3), AngleSpec::rational(7, 2)};
        if (kind == LatticeKind::Hex) specs.push_back(AngleSpec::rational(1, 1));
        for (const auto& s : specs) {
            if (kind == LatticeKind::Hex && !s.axis_x && s.p < s.q) continue;
            Direction d = make_direction(kind, s);
            CHECK(d.d.norm() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(d.d_perp.norm() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(d.d.dot(d.d_perp)) < 1e-14);
            CHECK(d.d_perp.x == doctest::Approx(-d.d.y));
            CHECK(d.d_perp.y == doctest::Approx(d.d.x));
            CHECK(d.gap_admissible);
        }
    }
}

TEST_CASE("lattice enumeration counts") {
    CHECK(enumerate_lattice(LatticeKind::Hex, 1.0).size() == 7);
    CHECK(enumerate_lattice(LatticeKind::Square, 1.0).size() == 5);
    // brute-force double loop over |n1|,|n2| <= 3 filtering |gamma| <= 2
    int count = 0;
    for (int n1 = -3; n1 <= 3; ++n1)
        for (int n2 = -3; n2 <= 3; ++n2)
            if (n1 * n1 + n2 * n2 - n1 * n2 <= 4) ++count;
    CHECK(count == 19);
    CHECK(enumerate_lattice(LatticeKind::Hex, 2.0).size() == 19);
}

TEST_CASE("critical modes are exactly the six (n1,n2) pairs on the unit circle") {
    std::set<std::pair<int, int>> expected{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}};
    std::set<std::pair<int, int>> got;
    for (const auto& g : enumerate_lattice(LatticeKind::Hex, 1.0))
        if (g.is_critical()) got.insert({g.n1, g.n2});
    CHECK(got == expected);
    for (const auto& g : enumerate_lattice(LatticeKind::Hex, 3.0)) {
        Vec2 v = g.vec();
        CHECK(v.dot(v) == doctest::Approx(double(g.norm_sq_int())).epsilon(1e-12));
    }
}

TEST_CASE("enumeration order is deterministic") {
    auto a = enumerate_lattice(LatticeKind::Hex, 4.0);
    auto b = enumerate_lattice(LatticeKind::Hex, 4.0);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].n1 == b[i].n1);
        CHECK(a[i].n2 == b[i].n2);
    }
    for (size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].norm_sq_int() <= a[i].norm_sq_int());
}

TEST_CASE("strip membership examples") {
    Direction d0 = make_direction(LatticeKind::Hex, AngleSpec::axis());
    auto k1 = make_lattice_vector(LatticeKind::Hex, 1, 0);
    StripInfo s = strip_membership(k1, d0);
    CHECK(s.transverse == 0.0);
    CHECK(s.axial == 1.0);
    CHECK(s.in_critical_strip);

    auto twok2 = make_lattice_vector(LatticeKind::Hex, 0, 2);
    s = strip_membership(twok2, d0);
    CHECK(s.transverse == doctest::Approx(std::sqrt(3.0)));
    CHECK(!s.in_critical_strip);

    Direction d30 = make_direction(LatticeKind::Hex, AngleSpec::rational(1, 1));
    auto k2 = make_lattice_vector(LatticeKind::Hex, 0, 1);
    s = strip_membership(k2, d30);
    CHECK(s.transverse == doctest::Approx(1.0));  // tangent
    CHECK(s.in_critical_strip);
}

TEST_CASE("pythagoras: |gamma|^2 = axial^2 + transverse^2") {
    for (auto kind : {LatticeKind::Hex, LatticeKind::Square}) {
        Direction d = make_direction(kind, kind == LatticeKind::Hex ? AngleSpec::rational(3, 2)
                                                                    : AngleSpec::rational(3, 1));
        for (const auto& g : enumerate_lattice(kind, 5.0)) {
            StripInfo s = strip_membership(g, d);
            double nsq = s.axial * s.axial + s.transverse * s.transverse;
            CHECK(std::abs(nsq - double(g.norm_sq_int())) < 1e-12);
        }
    }
}

TEST_CASE("transverse gaps above 1 stay bounded away (discreteness)") {
    struct Probe {
        LatticeKind kind;
        AngleSpec spec;
    };
    std::vector<Probe> probes{{LatticeKind::Hex, AngleSpec::axis()},
                              {LatticeKind::Hex, AngleSpec::rational(1, 1)},
                              {LatticeKind::Hex, AngleSpec::rational(2, 1)},
                              {LatticeKind::Square, AngleSpec::axis()},
                              {LatticeKind::Square, AngleSpec::rational(2, 1)},
                              {LatticeKind::Square, AngleSpec::rational(3, 1)}};
    for (const auto& pr : probes) {
        Direction d = make_direction(pr.kind, pr.spec);
        double prev = std::numeric_limits<double>::infinity();
        for (double R : {5.0, 10.0, 20.0}) {
            double gap = std::numeric_limits<double>::infinity();
            for (const auto& g : enumerate_lattice(pr.kind, R)) {
                double tr = std::abs(d.transverse(g));
                if (tr > 1.0) gap = std::min(gap, tr - 1.0);
            }
            CHECK(gap > 0.0);
            CHECK(gap <= prev + 1e-15);  // non-increasing in R
            prev = gap;
            if (R == 20.0) CHECK(gap > 1e-3);  // bounded below at this denominator
        }
    }
}

TEST_CASE("D6 rotation preserves the projection multiset") {
    // rotating the direction by pi/3 maps the generator set to itself
    for (const auto& spec : {AngleSpec::axis(), AngleSpec::rational(2, 1), AngleSpec::rational(5, 4)}) {
        Direction d = make_direction(LatticeKind::Hex, spec);
        double c = std::cos(M_PI / 3.0), s = std::sin(M_PI / 3.0);
        Vec2 dr{c * d.d.x - s * d.d.y, s * d.d.x + c * d.d.y};
        std::vector<double> orig, rot;
        for (int j = 1; j <= 3; ++j) {
            Vec2 k = generator(LatticeKind::Hex, j);
            orig.push_back(std::abs(d.d.dot(k)));
            rot.push_back(std::abs(dr.dot(k)));
        }
        std::sort(orig.begin(), orig.end());
        std::sort(rot.begin(), rot.end());
        for (int j = 0; j < 3; ++j) CHECK(orig[j] == doctest::Approx(rot[j]).epsilon(1e-12));
        // reflection theta -> -theta likewise
        Vec2 drefl{d.d.x, -d.d.y};
        std::vector<double> refl;
        for (int j = 1; j <= 3; ++j)
            refl.push_back(std::abs(drefl.dot(generator(LatticeKind::Hex, j))));
        std::sort(refl.begin(), refl.end());
        for (int j = 0; j < 3; ++j) CHECK(orig[j] == doctest::Approx(refl[j]).epsilon(1e-12));
    }
}

TEST_CASE("angle spec parsing and reduction") {
    CHECK(AngleSpec::parse("axis").axis_x);
    CHECK(AngleSpec::parse("0").axis_x);
    AngleSpec s = AngleSpec::parse("6/4");
    CHECK(s.p == 3);
    CHECK(s.q == 2);
    CHECK(s.str() == "3/2");
    CHECK_THROWS_AS(AngleSpec::parse("x/y"), std::invalid_argument);
    CHECK_THROWS_AS(AngleSpec::rational(-1, 2), std::invalid_argument);
}

TEST_CASE("lattice csv dump") {
    Direction d = make_direction(LatticeKind::Square, AngleSpec::axis());
    auto pts = enumerate_lattice(LatticeKind::Square, 1.0);
    std::ostringstream os;
    write_lattice_csv(os, pts, d);
    std::string out = os.str();
    CHECK(out.substr(0, out.find('\n')) == "n1,n2,kx,ky,axial,transverse,in_strip");
    CHECK(std::count(out.begin(), out.end(), '\n') == 6);  // header + 5 points
}
