#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zint/integrand.hpp"
#include "zint/quadrature.hpp"

using namespace zint;

namespace {

// Central difference, used to cross-check closed-form antiderivatives.
double dF(const RealFn& F, double x, double h = 1e-5) {
    return (F(x + h) - F(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("catalog closed forms differentiate back to f") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> xs(0.0, 100.0);
    for (const auto& [name, params] :
         std::vector<std::pair<std::string, std::map<std::string, double>>>{
             {"sin_ax", {{"alpha", 1.3}}},
             {"x_cos_ax", {{"alpha", 2.0}}},
             {"exp_sin", {{"alpha", 1.0}, {"beta", -0.4}}},
             {"sin_xy", {{"y", 0.7}}},
             {"x_cos_xy", {{"y", 1.1}}},
             {"gaussian", {}},
             {"exp_decay", {{"lambda", 1.0}}}}) {
        const Integrand g = catalog_get(name, params);
        REQUIRE(g.has_antiderivative());
        for (int i = 0; i < 100; ++i) {
            const double x = xs(rng);
            const double expect = g.f(x);
            const double got = dF(g.F, x);
            CHECK(got == doctest::Approx(expect).epsilon(1e-6).scale(1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("square wave and its triangle antiderivative") {
    const Integrand g = catalog_get("square_wave");
    CHECK(g.f(0.5) == doctest::Approx(1.0));
    CHECK(g.f(1.5) == doctest::Approx(-1.0));
    CHECK(g.f(2.25) == doctest::Approx(1.0));
    CHECK(g.F(0.25) == doctest::Approx(0.25));
    CHECK(g.F(1.25) == doctest::Approx(0.75));
    CHECK(g.F(2.0) == doctest::Approx(0.0));
    CHECK(g.period_hint == doctest::Approx(2.0));
    // F(b) + F(b+1) is identically 1
    for (double b : {0.0, 0.3, 1.9, 7.123, 100.49})
        CHECK(g.F(b) + g.F(b + 1.0) == doctest::Approx(1.0));
}

TEST_CASE("warped square wave invariance") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> us(0.0, 50.0);
    const double alpha = 0.25;
    const Integrand g = catalog_get("square_wave_warped", {{"warp", alpha}});
    for (int i = 0; i < 1000; ++i) {
        const double u = us(rng);
        // the warp map keeps each unit cell fixed, so the wave factor agrees
        CHECK(square_wave(u + alpha * std::sin(M_PI * u)) == doctest::Approx(square_wave(u)));
    }
    // F' = f away from the integer kinks
    for (int i = 0; i < 100; ++i) {
        const double u = us(rng);
        if (std::abs(u - std::round(u)) < 1e-3) continue;
        CHECK(dF(g.F, u, 1e-6) ==
              doctest::Approx(g.f(u)).epsilon(1e-5).scale(1.0 + std::abs(g.f(u))));
    }
    CHECK_THROWS_AS(catalog_get("square_wave_warped", {{"warp", 0.5}}), std::invalid_argument);
}

TEST_CASE("catalog validation") {
    CHECK_THROWS_AS(catalog_get("unknown_name"), std::invalid_argument);
    CHECK_THROWS_AS(catalog_get("sin_ax"), std::invalid_argument);               // missing alpha
    CHECK_THROWS_AS(catalog_get("sin_ax", {{"alpha", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(catalog_get("exp_decay", {{"lambda", -1.0}}), std::invalid_argument);
    CHECK(catalog_names().size() == 10);

    // the cosine-over-x entry has no closed form and leans on the fallback
    const Integrand c = catalog_get("cos_xy_over_x", {{"y", 2.0}});
    CHECK_FALSE(c.has_antiderivative());
    CHECK(c.f(3.0) == doctest::Approx(std::cos(6.0) / 3.0));
    CHECK(*c.period_hint == doctest::Approx(M_PI));
}

TEST_CASE("panel failure reports the offending panel") {
    // an integrable singularity inside a panel defeats the fixed rules
    auto spiky = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.5)); };
    const auto N = numeric_antiderivative(spiky, 0.0, 1e-14);
    try {
        (void)N->value(2.0);
        FAIL("expected a quadrature error");
    } catch (const QuadratureError& e) {
        CHECK(e.lo >= 0.0);
        CHECK(e.hi <= 1.0);
        CHECK(e.lo <= 0.5);
        CHECK(e.hi >= 0.5);
    }
}

TEST_CASE("numeric antiderivative basics") {
    const auto N = numeric_antiderivative([](double x) { return std::cos(x); }, 0.0);
    CHECK(N->value(0.0) == doctest::Approx(0.0));
    CHECK(N->value(M_PI / 2.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(N->value(20.0 + M_PI / 2.0) ==
          doctest::Approx(std::sin(20.0 + M_PI / 2.0)).epsilon(1e-9));

    const auto E = numeric_antiderivative([](double x) { return std::exp(-x); }, 0.0);
    CHECK(E->value(50.0) == doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-12));
}

TEST_CASE("numeric antiderivative matches a refined oracle on sin(x^2)") {
    const auto N = numeric_antiderivative([](double x) { return std::sin(x * x); }, 0.0);
    // independent high-order fixed-grid quadrature at 10x refinement
    const double oracle =
        composite_gauss([](double x) { return std::sin(x * x); }, 0.0, 5.0, 500, 16);
    CHECK(N->value(5.0) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("numeric antiderivative additivity") {
    const auto N = numeric_antiderivative([](double x) { return std::sin(3.0 * x) / (1.0 + x); },
                                          1.0, 1e-12);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> xs(1.0, 30.0);
    for (int i = 0; i < 30; ++i) {
        double x1 = xs(rng), x2 = xs(rng);
        if (x1 > x2) std::swap(x1, x2);
        const double direct = adaptive_simpson(
            [](double x) { return std::sin(3.0 * x) / (1.0 + x); }, x1, x2, 1e-12);
        CHECK(N->value(x2) - N->value(x1) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("closed form and numeric antiderivative differ by a constant") {
    const Integrand g = catalog_get("sin_ax", {{"alpha", 1.0}});
    const auto N = numeric_antiderivative(g.f, 0.0);
    const double c0 = g.F(0.0) - N->value(0.0);
    for (int i = 1; i <= 50; ++i) {
        const double x = 0.37 * i;
        CHECK(g.F(x) - N->value(x) == doctest::Approx(c0).epsilon(1e-8));
    }
}

TEST_CASE("antiderivative shift") {
    const RealFn F = [](double x) { return -std::cos(x); };
    const RealFn shifted = shift_antiderivative(F, 10.0);
    CHECK(shifted(0.0) == doctest::Approx(9.0));
    const RealFn same = shift_antiderivative(F, 0.0);
    for (double x : {-1.0, 0.0, 2.5}) CHECK(same(x) == doctest::Approx(F(x)));
}
