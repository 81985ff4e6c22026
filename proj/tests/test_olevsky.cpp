#include <catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace confactor;
using Catch::Approx;

TEST_CASE("construct saturated and zero prescriptions") {
    auto f0 = PiecewiseConstant::constant(1.0);

    SECTION("b = 1, a = (1): phi_1 equals f0") {
        auto sys = olevsky_construct({1.0}, f0, 1.0);
        REQUIRE(sys.M == 2);
        CHECK(sys.phi[0][0] == Approx(1.0).margin(1e-12));
        CHECK(sys.phi[0][1] == Approx(1.0).margin(1e-12));
    }

    SECTION("b = 0: phi_1 is a unit vector orthogonal to f0") {
        auto sys = olevsky_construct({1.0}, f0, 0.0);
        double ip = 0.0, nrm = 0.0;
        for (int m = 0; m < sys.M; ++m) {
            ip += sys.phi[0][m] / sys.M;
            nrm += sys.phi[0][m] * sys.phi[0][m] / sys.M;
        }
        CHECK(ip == Approx(0.0).margin(1e-12));
        CHECK(nrm == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("prescribed coefficients at N = 64") {
    auto f0 = PiecewiseConstant::constant(1.0);
    std::vector<double> a(64);
    double asq = 0.0;
    for (int n = 1; n <= 64; ++n) {
        a[n - 1] = std::pow(static_cast<double>(n), -4.0 / 3.0);
        asq += a[n - 1] * a[n - 1];
    }
    double b = 0.9 / std::sqrt(asq);
    auto sys = olevsky_construct(a, f0, b);
    CHECK(sys.gram_max_error() <= 1e-10);
    for (int n = 1; n <= 64; ++n) {
        double ip = 0.0;
        for (int m = 0; m < sys.M; ++m) ip += sys.phi[n - 1][m] / sys.M;
        CHECK(std::abs(ip - b * a[n - 1]) <= 1e-10);
    }
}

TEST_CASE("gram matrix is the identity at N = 256") {
    auto rep = theorem_d_demo(256);
    CHECK(rep.gram_max_error <= 1e-10);
    CHECK(rep.coefficient_max_error <= 1e-10);
}

TEST_CASE("feasibility boundary") {
    auto f0 = PiecewiseConstant::constant(1.0);
    std::vector<double> a{0.6, 0.5, 0.2};
    double anorm = std::sqrt(0.36 + 0.25 + 0.04);
    CHECK_NOTHROW(olevsky_construct(a, f0, 1.0 / anorm));
    CHECK_THROWS_WITH(olevsky_construct(a, f0, (1.0 + 1e-6) / anorm),
                      Catch::Matchers::ContainsSubstring("b <= ||f0||_2/||a||_2"));
}

TEST_CASE("f0 must live on the uniform grid") {
    PiecewiseConstant f0({Rational(0), rational_from_string("1/3"), Rational(1)}, {1.0, 2.0});
    // N = 3 targets means M = 4 cells; 1/3 is not a grid point
    CHECK_THROWS_AS(olevsky_construct({0.5, 0.5, 0.5}, f0, 0.1), std::invalid_argument);
    // N = 2 targets (M = 3 cells) is representable
    CHECK_NOTHROW(olevsky_construct({0.5, 0.5}, f0, 0.1));
}

TEST_CASE("theorem_d_demo tracks the scaled harmonic numbers") {
    SECTION("N = 1 is the single term b") {
        auto rep = theorem_d_demo(1);
        CHECK(rep.partial_sums[0] == Approx(rep.b).margin(1e-10));
    }

    SECTION("N = 256 defaults") {
        auto rep = theorem_d_demo(256);
        CHECK(rep.max_deviation <= 1e-8);
        // H_256 = 6.1247...
        CHECK(rep.predicted[255] / rep.b == Approx(6.1247).margin(5e-4));

        // squared-coefficient sum is bounded by b^2 * zeta(8/3)
        double zeta83 = 0.0;
        for (int n = 1; n <= 2000000; ++n) zeta83 += std::pow(static_cast<double>(n), -8.0 / 3.0);
        CHECK(rep.coeff_sq_sum <= rep.b * rep.b * zeta83 + 1e-12);

        // logarithmic growth signature: about b log 2 per doubling in the tail
        CHECK(rep.partial_sums[255] - rep.partial_sums[127] >= 0.6 * rep.b);
    }

    SECTION("gamma must stay below 1/2") {
        CHECK_THROWS_AS(theorem_d_demo(8, 0.6), std::invalid_argument);
    }
}

TEST_CASE("piecewise view of the constructed functions is orthonormal") {
    auto f0 = PiecewiseConstant::constant(1.0);
    auto sys = olevsky_construct({0.4, 0.3, 0.2, 0.1}, f0, 0.8);
    auto fns = sys.functions();
    for (std::size_t j = 0; j < fns.size(); ++j)
        for (std::size_t k = j; k < fns.size(); ++k)
            CHECK(OrthonormalSystem::inner_product(fns[j], fns[k]) ==
                  Approx(j == k ? 1.0 : 0.0).margin(1e-10));
}
