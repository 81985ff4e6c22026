#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace confactor;
using Catch::Approx;

TEST_CASE("haar hand values") {
    CHECK(haar_function(1).values() == std::vector<double>{1.0});

    auto chi2 = haar_function(2);
    CHECK(chi2.value_at(rational_from_string("1/4")) == 1.0);
    CHECK(chi2.value_at(rational_from_string("3/4")) == -1.0);

    // k = 5: s = 2, l = 1, height 2, support [0, 1/4]
    auto chi5 = haar_function(5);
    CHECK(chi5.value_at(rational_from_string("1/16")) == 2.0);
    CHECK(chi5.value_at(rational_from_string("3/16")) == -2.0);
    CHECK(chi5.value_at(rational_from_string("1/2")) == 0.0);
}

TEST_CASE("haar matches the direct dyadic formula", "[property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 1; k <= 64; ++k) {
        auto f = haar_function(k);
        for (int i = 0; i < 50; ++i) {
            double x = u01(rng);
            CHECK(f.value_at(x) == Approx(testutil::haar_value_direct(k, x)).margin(1e-12));
        }
    }
}

TEST_CASE("walsh hand values") {
    CHECK(walsh_function(1).values() == std::vector<double>{1.0});

    auto w2 = walsh_function(2);
    CHECK(w2.value_at(rational_from_string("1/4")) == 1.0);
    CHECK(w2.value_at(rational_from_string("3/4")) == -1.0);

    auto w4 = walsh_function(4);  // r_1 * r_2: +,-,-,+ on quarters
    CHECK(w4.value_at(rational_from_string("1/8")) == 1.0);
    CHECK(w4.value_at(rational_from_string("3/8")) == -1.0);
    CHECK(w4.value_at(rational_from_string("5/8")) == -1.0);
    CHECK(w4.value_at(rational_from_string("7/8")) == 1.0);
}

TEST_CASE("orthonormality of haar and walsh up to 64") {
    for (auto kind : {SystemKind::haar, SystemKind::walsh}) {
        for (int j = 1; j <= 64; ++j) {
            auto fj = kind == SystemKind::haar ? haar_function(j) : walsh_function(j);
            for (int k = j; k <= 64; ++k) {
                auto fk = kind == SystemKind::haar ? haar_function(k) : walsh_function(k);
                double ip = OrthonormalSystem::inner_product(fj, fk);
                double target = j == k ? 1.0 : 0.0;
                REQUIRE(std::abs(ip - target) <= 1e-13);
            }
        }
    }
}

TEST_CASE("trig orthonormality via quadrature") {
    auto sys = OrthonormalSystem::trig();
    for (int j = 1; j <= 8; ++j) {
        for (int k = j; k <= 8; ++k) {
            auto fj = sys.trig_function(j);
            auto fk = sys.trig_function(k);
            double ip = testutil::riemann_integral(
                [&](double x) { return fj.value(x) * fk.value(x); }, 0.0, 1.0, 1 << 16);
            CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) <= 1e-9);
        }
    }
}

TEST_CASE("rademacher signs") {
    auto e = rademacher_signs(rational_from_string("1/3"), 2);
    CHECK(e == std::vector<int>{1, -1});
    CHECK(rademacher_signs(rational_from_string("1/2"), 1) == std::vector<int>{0});
    CHECK(rademacher_signs(Rational(1), 3) == std::vector<int>{0, 0, 0});
    CHECK_THROWS_AS(rademacher_signs(Rational(0), 1), std::invalid_argument);
}

TEST_CASE("rademacher signs agree with sign(sin(2^k pi t))") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> num(1, 999);
    for (int trial = 0; trial < 20; ++trial) {
        int p = num(rng);
        Rational t = make_rational(p, 1000);
        auto e = rademacher_signs(t, 8);
        for (int k = 1; k <= 8; ++k) {
            double s = std::sin(std::ldexp(1.0, k) * std::numbers::pi * to_double(t));
            if (std::abs(s) > 1e-9) CHECK(e[k - 1] == (s > 0 ? 1 : -1));
        }
    }
}

TEST_CASE("primitive hand values") {
    auto haar = OrthonormalSystem::haar();
    CHECK(haar.primitive(2, rational_from_string("1/2")) == Approx(0.5));
    CHECK(haar.primitive(2, Rational(1)) == Approx(0.0).margin(1e-15));

    auto trig = OrthonormalSystem::trig();
    // cos, n=1 at t=1/4: sqrt2 sin(pi/2)/(2 pi)
    CHECK(trig.primitive(1, rational_from_string("1/4")) ==
          Approx(std::numbers::sqrt2 / (2.0 * std::numbers::pi)));
}

TEST_CASE("haar primitive sharp bound", "[property]") {
    // brute-force maximization over a fine dyadic grid confirms the sharp
    // constant 2^{-s/2-1} before it is asserted
    for (int k = 2; k <= 64; ++k) {
        int s = 0;
        while ((2 << s) < k) ++s;
        double sharp = std::ldexp(1.0, -s) / (2.0 * std::sqrt(std::ldexp(1.0, -s)));
        double expected = 1.0 / (std::sqrt(std::ldexp(1.0, s)) * 2.0);
        CHECK(sharp == Approx(expected));
        auto P = antiderivative(haar_function(k));
        double maxabs = 0.0;
        const int grid = 1 << 12;
        for (int i = 0; i <= grid; ++i)
            maxabs = std::max(maxabs, std::abs(P.value_at(make_rational(i, grid))));
        CHECK(maxabs <= expected + 1e-14);
        CHECK(maxabs == Approx(expected));  // the bound is attained
    }
}

TEST_CASE("haar primitive vanishes outside the support") {
    for (int k : {2, 3, 7, 13, 33}) {
        int s = 0;
        while ((2 << s) < k) ++s;
        int l = k - (1 << s);
        auto P = antiderivative(haar_function(k));
        if (l > 1) CHECK(P.value_at(make_rational(l - 1, 2 * (1 << s))) == Approx(0.0).margin(1e-15));
        CHECK(P.value_at(Rational(0)) == 0.0);
        CHECK(std::abs(P.value_at(make_rational(l, 1 << s))) <= 1e-15);
        CHECK(std::abs(P.value_at(Rational(1))) <= 1e-15);
    }
}

TEST_CASE("walsh mean zero for k >= 2") {
    for (int k = 2; k <= 64; ++k) CHECK(std::abs(integral(walsh_function(k))) <= 1e-15);
}

TEST_CASE("mean-zero filtering empties exactly the non-mean-zero slots") {
    auto haar = OrthonormalSystem::haar();
    CHECK(haar.slot_empty(1));
    for (int k = 2; k <= 32; ++k) CHECK_FALSE(haar.slot_empty(k));
    CHECK(haar.function(1).values() == std::vector<double>{0.0});

    auto haar_full = OrthonormalSystem::haar(false);
    CHECK_FALSE(haar_full.slot_empty(1));
    CHECK(haar_full.function(1).values() == std::vector<double>{1.0});

    auto trig = OrthonormalSystem::trig();
    for (int k = 1; k <= 16; ++k) CHECK_FALSE(trig.slot_empty(k));
}

TEST_CASE("custom system loader rejects non-orthonormal families") {
    CHECK_THROWS_AS(OrthonormalSystem::custom({haar_function(2), haar_function(2)}),
                    std::invalid_argument);
    CHECK_NOTHROW(OrthonormalSystem::custom({haar_function(2), haar_function(3)}));
}

TEST_CASE("evaluation at a breakpoint returns the right-hand value") {
    auto chi2 = haar_function(2);
    CHECK(chi2.value_at(rational_from_string("1/2")) == -1.0);
    CHECK(chi2.value_at(Rational(0)) == 1.0);
    CHECK(chi2.value_at(Rational(1)) == -1.0);  // t = 1 resolves to the last piece
}
