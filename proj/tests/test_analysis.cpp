#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "phasor/analysis.hpp"

using namespace phasor;
using namespace phasor::analysis;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

PathPolyline reversed(PathPolyline p) {
    std::reverse(p.vertices.begin(), p.vertices.end());
    return p;
}
}  // namespace

TEST_CASE("chromatic number: simple zero, orientation, rescaling") {
    const expr::ExprAst f = expr::parse("z");
    const PathPolyline circle = circle_path(cplx(0.0, 0.0), 1.0, 64);
    ChromaticResult r = chromatic_number(f, circle);
    CHECK(r.winding == 1);
    CHECK(r.max_phase_step < kPi / 2.0);
    CHECK(chromatic_number(f, reversed(circle)).winding == -1);
    CHECK(chromatic_number(expr::parse("3*z"), circle).winding == 1);
}

TEST_CASE("chromatic number of the Fig. 8 function is -1 on [-2,2]^2") {
    // roots of z^2+z+1 at (-1 +- i sqrt 3)/2 lie inside, the zero at 1 too
    const expr::ExprAst f = expr::parse("(z-1)/(z^2+z+1)");
    CHECK(chromatic_number(f, rect_path({-2.0, 2.0, -2.0, 2.0})).winding == -1);
    CHECK(count_zeros_poles(f, {-2.0, 2.0, -2.0, 2.0}) == -1);
}

TEST_CASE("winding additivity over a split rectangle") {
    const expr::ExprAst f = expr::parse("(z-1)/(z^2+z+1)");
    const int whole = chromatic_number(f, rect_path({-2.0, 2.0, -2.0, 2.0})).winding;
    const int left = chromatic_number(f, rect_path({-2.0, 0.3, -2.0, 2.0})).winding;
    const int right = chromatic_number(f, rect_path({0.3, 2.0, -2.0, 2.0})).winding;
    CHECK(whole == left + right);
}

TEST_CASE("count_zeros_poles examples") {
    CHECK(count_zeros_poles(expr::parse("z^3"), {-0.5, 0.5, -0.5, 0.5}) == 3);
    // simple zero + double zero + triple pole: 1 + 2 - 3 = 0
    CHECK(count_zeros_poles(expr::parse("(z-0.5)*(z+0.5)^2/z^3"), {-1.0, 1.0, -1.0, 1.0}) == 0);
    CHECK(count_zeros_poles(expr::parse("exp(z)"), {-2.0, 2.0, -2.0, 2.0}) == 0);
    CHECK_THROWS_AS(count_zeros_poles(expr::parse("conj(z)"), {-1.0, 1.0, -1.0, 1.0}),
                    expr::NonHolomorphicError);
}

TEST_CASE("localize_singularities: factored polynomial") {
    SingularityReport rep =
        localize_singularities(expr::parse("z^2*(z-1)"), {-2.0, 2.0, -2.0, 2.0}, 1e-3);
    REQUIRE(rep.entries.size() == 2);
    CHECK(rep.entries[0].kind == SingularityKind::Zero);
    CHECK(rep.entries[0].order == 2);
    CHECK(std::abs(rep.entries[0].location) <= 1e-3);
    CHECK(rep.entries[1].order == 1);
    CHECK(std::abs(rep.entries[1].location - 1.0) <= 1e-3);
    CHECK(rep.net_count == 3);
}

TEST_CASE("localize_singularities: Fig. 8 function against the quadratic formula") {
    const expr::ExprAst f = expr::parse("(z-1)/(z^2+z+1)");
    SingularityReport rep = localize_singularities(f, {-2.0, 2.0, -2.0, 2.0}, 1e-3);
    REQUIRE(rep.entries.size() == 3);
    const cplx pole_lo(-0.5, -std::sqrt(3.0) / 2.0);
    const cplx pole_hi(-0.5, std::sqrt(3.0) / 2.0);
    int zeros = 0, poles = 0;
    for (const auto& e : rep.entries) {
        if (e.kind == SingularityKind::Zero) {
            ++zeros;
            CHECK(std::abs(e.location - 1.0) <= 1e-3);
            CHECK(e.order == 1);
        } else {
            ++poles;
            CHECK(std::min(std::abs(e.location - pole_lo), std::abs(e.location - pole_hi)) <=
                  1e-3);
            CHECK(e.order == 1);
        }
    }
    CHECK(zeros == 1);
    CHECK(poles == 2);
    CHECK(rep.net_count == count_zeros_poles(f, {-2.0, 2.0, -2.0, 2.0}));
}

TEST_CASE("localize_singularities: tan") {
    SingularityReport rep = localize_singularities(expr::parse("tan(z)"), {-2.0, 2.0, -2.0, 2.0},
                                                   1e-3);
    REQUIRE(rep.entries.size() == 3);
    int zero_count = 0;
    for (const auto& e : rep.entries) {
        if (e.kind == SingularityKind::Zero) {
            ++zero_count;
            CHECK(std::abs(e.location) <= 1e-3);
        } else {
            CHECK(std::abs(std::abs(e.location.real()) - kPi / 2.0) <= 1e-3);
            CHECK(std::abs(e.location.imag()) <= 1e-3);
        }
    }
    CHECK(zero_count == 1);
    CHECK(rep.net_count == -1);
}

TEST_CASE("report serialization format") {
    SingularityReport rep =
        localize_singularities(expr::parse("z^2*(z-1)"), {-2.0, 2.0, -2.0, 2.0}, 1e-3);
    const std::string text = rep.to_text();
    CHECK(text.find("zero ") == 0);
    CHECK(text.find("net 3\n") != std::string::npos);
}

TEST_CASE("log-derivative density") {
    CHECK(log_derivative_density(expr::parse("z^3"), cplx(2.0, 0.0)) == doctest::Approx(1.5));
    // k/|z - z0| asymptotics: (z-1)^2 at 1.01
    CHECK(log_derivative_density(expr::parse("(z-1)^2"), cplx(1.01, 0.0)) ==
          doctest::Approx(200.0).epsilon(1e-9));
    CHECK(log_derivative_density(expr::parse("exp(z)"), cplx(0.37, -5.2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(log_derivative_density(expr::parse("z"), cplx(0.0, 0.0)),
                    SingularPointError);
}

TEST_CASE("find_saddles") {
    SUBCASE("z^2+1 has a color saddle at the origin") {
        SingularityReport rep = find_saddles(expr::parse("z^2+1"), {-2.0, 2.0, -2.0, 2.0});
        REQUIRE(rep.entries.size() == 1);
        CHECK(rep.entries[0].kind == SingularityKind::Saddle);
        CHECK(rep.entries[0].order == 1);  // 2k+2 = 4 isochromatic rays
        CHECK(std::abs(rep.entries[0].location) <= 1e-5);
    }
    SUBCASE("z^2 has none: f vanishes where f' does") {
        SingularityReport rep = find_saddles(expr::parse("z^2"), {-2.0, 2.0, -2.0, 2.0});
        CHECK(rep.entries.empty());
    }
    SUBCASE("saddle orders of a Blaschke product sum to m-1") {
        const expr::BlaschkeZero zs[] = {{cplx(0.5, 0.0), 1}, {cplx(-0.3, 0.4), 1},
                                         {cplx(0.1, -0.6), 1}};
        const expr::ExprAst f = expr::blaschke(zs, cplx(1.0, 0.0));
        SingularityReport rep = find_saddles(f, {-0.85, 0.85, -0.85, 0.85});
        int total = 0;
        for (const auto& e : rep.entries) total += e.order;
        CHECK(total == 2);
    }
}

TEST_CASE("essential probe: exp(1/z) vs a pole vs a zero") {
    const double radii[] = {0.2, 0.1, 0.05};

    SUBCASE("essential singularity: counts grow like the oracle") {
        auto counts = essential_probe(expr::parse("exp(1/z)"), cplx(0.0, 0.0), cplx(1.0, 0.0),
                                      radii);
        REQUIRE(counts.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            // oracle: solutions of Im(1/z) = 0 mod 2pi on |z| = r
            const int expected = 2 * (2 * int(std::floor(1.0 / (2.0 * kPi * radii[k]))) + 1);
            CHECK(counts[k].second == expected);
        }
        CHECK(counts[0].second < counts[1].second);
        CHECK(counts[1].second < counts[2].second);
        CHECK(counts[2].second - counts[0].second >= 2);
    }
    SUBCASE("pole of order 3: constant count") {
        auto counts = essential_probe(expr::parse("1/z^3"), cplx(0.0, 0.0),
                                      std::polar(1.0, 0.4), radii);
        for (const auto& [r, n] : counts) CHECK(n == 3);
    }
    SUBCASE("simple zero: constant count 1") {
        auto counts = essential_probe(expr::parse("z-1"), cplx(1.0, 0.0), cplx(1.0, 0.0), radii);
        for (const auto& [r, n] : counts) CHECK(n == 1);
    }
    SUBCASE("radii must descend") {
        const double bad[] = {0.1, 0.2};
        CHECK_THROWS(essential_probe(expr::parse("z"), cplx(0.0, 0.0), cplx(1.0, 0.0), bad));
    }
}

TEST_CASE("phase period test") {
    const RectBounds probe{0.3, 1.7, 0.2, 1.3};
    SUBCASE("sin has genuine period 2pi") {
        PeriodTestResult r = phase_period_test(expr::parse("sin(z)"), cplx(2.0 * kPi, 0.0), probe);
        CHECK(r.periodic);
        CHECK(std::abs(r.alpha) <= 1e-10);
    }
    SUBCASE("exp(z) sin(z) is phase-periodic with alpha = 2pi") {
        PeriodTestResult r =
            phase_period_test(expr::parse("exp(z)*sin(z)"), cplx(2.0 * kPi, 0.0), probe);
        CHECK(r.periodic);
        CHECK(std::abs(r.alpha - 2.0 * kPi) <= 1e-8);
    }
    SUBCASE("sin is not phase-periodic with period pi (ratio -1)") {
        PeriodTestResult r = phase_period_test(expr::parse("sin(z)"), cplx(kPi, 0.0), probe);
        CHECK_FALSE(r.periodic);
    }
}

TEST_CASE("periodicity classification") {
    const RectBounds probe{0.3, 1.7, 0.2, 1.3};
    SUBCASE("striped exponentials") {
        PeriodicityClass c = classify_periodicity(expr::parse("exp(2*z+1)"), {}, probe);
        CHECK(c.type == PeriodicityClass::Type::Striped);
        CHECK(std::abs(c.a - cplx(2.0, 0.0)) <= 1e-8);
    }
    SUBCASE("weierstrass p is doubly periodic with vanishing alphas") {
        const cplx candidates[] = {cplx(2.0, 0.0), cplx(0.0, 2.0)};
        PeriodicityClass c = classify_periodicity(expr::parse("wp(z,2,complex(0,2),40)"),
                                                  candidates, RectBounds{0.15, 1.1, 0.2, 1.2});
        CHECK(c.type == PeriodicityClass::Type::DoublyPeriodic);
        CHECK(std::abs(c.alpha1) <= 1e-8);
        CHECK(std::abs(c.alpha2) <= 1e-8);
    }
    SUBCASE("exp(z) sin(z): exactly one independent candidate passes") {
        const cplx candidates[] = {cplx(2.0 * kPi, 0.0), cplx(0.0, 1.0)};
        PeriodicityClass c = classify_periodicity(expr::parse("exp(z)*sin(z)"), candidates, probe);
        CHECK(c.type == PeriodicityClass::Type::SimplyPeriodicPhase);
        CHECK(std::abs(c.alpha1 - 2.0 * kPi) <= 1e-6);
    }
    SUBCASE("no candidate passes: aperiodic") {
        const cplx candidates[] = {cplx(1.0, 0.0), cplx(0.0, 1.0)};
        PeriodicityClass c = classify_periodicity(expr::parse("zeta(z)"), candidates,
                                                  RectBounds{2.0, 4.0, 1.0, 3.0});
        CHECK(c.type == PeriodicityClass::Type::Aperiodic);
    }
}

TEST_CASE("partial sums and the Jentzsch picture at desk scale") {
    CHECK(expr::identical(geometric_partial_sum(3), expr::parse("1+z+z^2+z^3")));

    // zeros of 1 + ... + z^8 are the 9th roots of unity except 1
    SingularityReport rep =
        localize_singularities(geometric_partial_sum(8), {-1.3, 1.3, -1.3, 1.3}, 1e-5);
    REQUIRE(rep.entries.size() == 8);
    for (const auto& e : rep.entries) {
        CHECK(e.kind == SingularityKind::Zero);
        CHECK(std::abs(std::abs(e.location) - 1.0) <= 1e-5);
        double best = 1e9;
        for (int k = 1; k < 9; ++k)
            best = std::min(best, std::abs(e.location - std::polar(1.0, 2.0 * kPi * k / 9.0)));
        CHECK(best <= 1e-5);
    }
    CHECK(chromatic_number(geometric_partial_sum(8), circle_path(cplx(0.0, 0.0), 1.2, 128))
              .winding == 8);
}

TEST_CASE("singular samples on the path are nudged along the curve") {
    // vertex 0 of the unit circle sits exactly on the zero of z-1; the
    // sampler must move off it rather than fail
    const expr::ExprAst f = expr::parse("z-1");
    ChromaticResult r = chromatic_number(f, circle_path(cplx(0.0, 0.0), 1.0, 64));
    CHECK((r.winding == 0 || r.winding == 1));  // the zero sits on the path itself

    // the first quadtree split cross lands exactly on the zero; nudging
    // must recover it
    SingularityReport rep = localize_singularities(f, {0.0, 2.0, -1.0, 1.0}, 1e-3);
    REQUIRE(rep.entries.size() == 1);
    CHECK(std::abs(rep.entries[0].location - 1.0) <= 2e-3);
}
