#include <cmath>
#include <random>

#include "doctest.h"
#include "phasor/special.hpp"

using namespace phasor;
using namespace phasor::special;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("gamma: pinned values and poles") {
    CHECK(gamma(cplx(1.0, 0.0)).is_finite());
    CHECK(std::abs(gamma(cplx(1.0, 0.0)).value() - 1.0) < 1e-13);
    // sqrt(pi), high-precision reference
    CHECK(std::abs(gamma(cplx(0.5, 0.0)).value() - 1.7724538509055160273) < 1e-12);
    CHECK(gamma(cplx(0.0, 0.0)).is_infinity());
    CHECK(gamma(cplx(-2.0, 0.0)).is_infinity());
    CHECK(gamma(cplx(-7.0, 0.0)).is_infinity());

    // frozen double-precision references
    struct Ref {
        cplx z, v;
    };
    const Ref refs[] = {
        {cplx(5.0, 0.0), cplx(24.0, 0.0)},
        {cplx(3.0, 4.0), cplx(0.0052255384713692146, -0.1725470792943002)},
        {cplx(-2.5, 0.0), cplx(-0.9453087204829419, 0.0)},
        {cplx(-5.5, 3.0), cplx(2.5509331785934866e-06, -2.5669925532903067e-06)},
        {cplx(10.0, -20.0), cplx(-0.13371397782847202, -0.12367497527124525)},
        {cplx(0.1, 0.0), cplx(9.51350769866873, 0.0)},
        {cplx(29.0, 3.0), cplx(-2.103460876815292e+29, -1.535624997806134e+29)},
        {cplx(0.5, 14.1347), cplx(-1.4459762901175984e-10, -5.522909925555323e-10)},
    };
    for (const Ref& r : refs) {
        const ExtendedComplex g = gamma(r.z);
        REQUIRE(g.is_finite());
        CHECK(std::abs(g.value() - r.v) <= 1e-10 * std::abs(r.v));
    }
}

TEST_CASE("gamma recurrence on 500 random points") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    int used = 0;
    while (used < 500) {
        const cplx z(dist(rng), dist(rng));
        if (std::abs(z) > 20.0) continue;
        if (z.imag() == 0.0) continue;
        // stay away from the poles of both gamma(z) and gamma(z+1)
        bool near_pole = false;
        for (int k = 0; k <= 21; ++k)
            if (std::abs(z + double(k)) < 0.1) near_pole = true;
        if (near_pole) continue;
        const ExtendedComplex a = gamma(z + 1.0), b = gamma(z);
        if (!a.is_finite() || !b.is_finite()) continue;
        ++used;
        CHECK(std::abs(a.value() - z * b.value()) <= 1e-9 * std::abs(a.value()));
    }
}

TEST_CASE("zeta: pinned values, pole, trivial zeros") {
    CHECK(std::abs(zeta(cplx(2.0, 0.0)).value() - 1.6449340668482264) <= 1e-10);
    CHECK(std::abs(zeta(cplx(2.0, 0.0)).value() - kPi * kPi / 6.0) <= 1e-10);
    CHECK(zeta(cplx(1.0, 0.0)).is_infinity());
    CHECK(std::abs(zeta(cplx(-2.0, 0.0)).value()) <= 1e-12);
    CHECK(std::abs(zeta(cplx(-4.0, 0.0)).value()) <= 1e-12);
    CHECK(std::abs(zeta(cplx(-6.0, 0.0)).value()) <= 1e-12);

    struct Ref {
        cplx z, v;
    };
    const Ref refs[] = {
        {cplx(0.5, 14.134725), cplx(1.767429841384904e-08, -1.1102028930923116e-07)},
        {cplx(-2.5, 13.7), cplx(-5.195877162680385, -8.013277919793143)},
        {cplx(-4.9, 49.0), cplx(62620.53889427769, -18525.75067247323)},
        {cplx(0.3, -22.2), cplx(0.9643553140463071, -0.8856823834140559)},
        {cplx(-0.5, 0.3), cplx(-0.18208058034037894, -0.10310033872774124)},
        {cplx(3.0, 4.0), cplx(0.8905549069650732, -0.00807594542432726)},
        {cplx(0.5, 50.0), cplx(-0.08171210832097997, 0.3307921940386613)},
        {cplx(0.5, 199.5), cplx(5.7740821483375555, 1.5211328668318345)},
        {cplx(-18.3, 7.7), cplx(-221930.16975969318, 73505.4188949318)},
        {cplx(-39.5, 123.0), cplx(-9.23722575870883e+51, 3.811665930669787e+50)},
        {cplx(9.5, -2.5), cplx(0.9997481145097139, 0.0013734221856637153)},
    };
    for (const Ref& r : refs) {
        const ExtendedComplex v = zeta(r.z);
        REQUIRE(v.is_finite());
        // absolute where the value is small, relative where it is huge
        const double tol = std::max(1e-9, 1e-12 * std::abs(r.v));
        CAPTURE(r.z);
        CHECK(std::abs(v.value() - r.v) <= tol);
    }
}

TEST_CASE("zeta functional-equation residual in the strip") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> re(-5.0, 0.5), im(-50.0, 50.0);
    for (int k = 0; k < 100; ++k) {
        const cplx s(re(rng), im(rng));
        if (std::abs(s - 1.0) < 0.2) continue;
        const cplx lhs = zeta(s).value();
        const cplx rhs = std::pow(cplx(2.0, 0.0), s) * std::pow(cplx(kPi, 0.0), s - 1.0) *
                         std::sin(kPi * s / 2.0) * gamma(1.0 - s).value() *
                         zeta(1.0 - s).value();
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("weierstrass p: lattice validation") {
    CHECK_THROWS_AS(validate(LatticeSpec{cplx(2.0, 0.0), cplx(4.0, 0.0), 40}), LatticeError);
    CHECK_THROWS_AS(validate(LatticeSpec{cplx(2.0, 0.0), cplx(0.0, 2.0), 5}), LatticeError);
    CHECK_NOTHROW(validate(LatticeSpec{cplx(2.0, 0.0), cplx(0.0, 2.0), 40}));
}

TEST_CASE("weierstrass p: symmetry, evenness, periodicity, poles") {
    const LatticeSpec rect{cplx(2.0, 0.0), cplx(0.0, 2.0), 40};

    SUBCASE("real on the real half-period of a rectangular lattice") {
        const ExtendedComplex v = wp(cplx(1.0, 0.0), rect);
        REQUIRE(v.is_finite());
        CHECK(std::abs(v.value().imag()) <= 1e-9 * (1.0 + std::abs(v.value())));
    }
    SUBCASE("even function") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-0.9, 0.9);
        for (int k = 0; k < 100; ++k) {
            const cplx z(dist(rng), dist(rng));
            if (std::abs(z) < 0.15) continue;
            const ExtendedComplex a = wp(z, rect), b = wp(-z, rect);
            REQUIRE(a.is_finite());
            REQUIRE(b.is_finite());
            CHECK(std::abs(a.value() - b.value()) <= 1e-10 * (1.0 + std::abs(a.value())));
        }
    }
    SUBCASE("periodicity at shells = 60") {
        const LatticeSpec l60{cplx(2.0, 0.0), cplx(0.0, 2.0), 60};
        const cplx z(0.3, 0.4);
        const cplx a = wp(z, l60).value();
        const cplx b = wp(z + l60.omega1, l60).value();
        CHECK(std::abs(b - a) <= 1e-6);
        const cplx c = wp(z + l60.omega2, l60).value();
        CHECK(std::abs(c - a) <= 1e-6);
    }
    SUBCASE("poles at lattice points") {
        CHECK(wp(cplx(0.0, 0.0), rect).is_infinity());
        CHECK(wp(cplx(2.0, 2.0), rect).is_infinity());
        CHECK(wp(cplx(4.0, -6.0) + cplx(1e-10, 0.0), rect).is_infinity());
    }
    SUBCASE("derivative series is odd and consistent with the sum") {
        const cplx z(0.3, 0.4);
        const ExtendedComplex d = wp_prime(z, rect);
        const ExtendedComplex dneg = wp_prime(-z, rect);
        REQUIRE(d.is_finite());
        CHECK(std::abs(d.value() + dneg.value()) <= 1e-9 * (1.0 + std::abs(d.value())));
        // central difference of the truncated sum matches the derivative series
        const double h = 1e-6;
        const cplx fd = (wp(z + h, rect).value() - wp(z - h, rect).value()) / (2.0 * h);
        CHECK(std::abs(fd - d.value()) <= 1e-6 * (1.0 + std::abs(d.value())));
    }
}
