#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zint/calculus.hpp"
#include "zint/quadrature.hpp"

using namespace zint;

namespace {

LimitPolicy slow_tail_policy(double period) {
    // For conventionally convergent but slowly settling tails: start far
    // out and keep the incommensurate step.
    LimitPolicy p;
    p.b_start = 300.0;
    p.b_count = 16;
    p.b_step = 0.6180339887498949 * std::max(1.0, period);
    p.window = 8;
    p.tol = 1e-9;
    return p;
}

}  // namespace

TEST_CASE("derivative brought inside for the sine family") {
    const ParametricIntegrand p = sin_xy_family();
    LimitPolicy policy;  // the tails cancel exactly; tolerance covers h^2 truncation
    policy.tol = 1e-6;

    // rhs at a = 0, y = 1 equals the x cos(x) value
    CHECK(leibniz_rhs(p, 0.0, 1.0, policy) == doctest::Approx(-1.0).epsilon(1e-10));

    for (double y : {0.5, 1.0, 2.0}) {
        for (double a : {0.0, 1.0, 2.0}) {
            const auto rep = leibniz_check(p, a, y, 1e-4, policy);
            CHECK(rep.passed);
            const double exact = -std::cos(a * y) / (y * y) - a * std::sin(a * y) / y;
            CHECK(rep.rhs == doctest::Approx(exact).epsilon(1e-9));
            CHECK(std::abs(rep.lhs - rep.rhs) <= std::max(10.0 * 1e-8, 1e-6));
        }
    }

    // spec'd stencil value: d/dy [cos(y)/y] at y = 1
    const double lhs = leibniz_lhs(p, 1.0, 1.0, 1e-4, policy);
    CHECK(lhs == doctest::Approx(-std::cos(1.0) - std::sin(1.0)).epsilon(1e-5));
}

TEST_CASE("derivative brought inside for the conventional cosine family") {
    const ParametricIntegrand p = cos_over_x_family();
    for (double y : {0.5, 1.0, 2.0}) {
        const LimitPolicy policy = slow_tail_policy(2.0 * M_PI / y);
        for (double a : {1.0, 2.0}) {
            const auto rep = leibniz_check(p, a, y, 1e-4, policy);
            CHECK(rep.passed);
            CHECK(rep.rhs == doctest::Approx(-std::cos(a * y) / y).epsilon(1e-10));
            CHECK(rep.lhs == doctest::Approx(-std::cos(a * y) / y).epsilon(2e-6).scale(1.0));
        }
    }
}

TEST_CASE("leibniz rhs worked values") {
    const ParametricIntegrand p4 = cos_over_x_family();
    const LimitPolicy policy;
    // -sin(xy) terminated: -cos(a y)/y at a = 1, y = 1
    CHECK(leibniz_rhs(p4, 1.0, 1.0, policy) == doctest::Approx(-std::cos(1.0)).epsilon(1e-10));

    // an integrand linear in y: d/dy is the plain decaying integral
    ParametricIntegrand lin;
    lin.label = "y_exp_decay";
    lin.f = [](double x, double y) { return y * std::exp(-x); };
    lin.f_y = [](double x, double) { return std::exp(-x); };
    lin.F = [](double x, double y) { return -y * std::exp(-x); };
    lin.F_y = [](double x, double) { return -std::exp(-x); };
    lin.termination_maker = [](double) { return make_step(); };
    lin.termination_maker_deriv = [](double) { return make_step(); };
    const auto rep = leibniz_check(lin, 0.0, 0.7, 1e-4, policy);
    CHECK(rep.passed);
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-10));

    // zero derivative integrand
    ParametricIntegrand flat = lin;
    flat.f = [](double x, double) { return std::exp(-x); };
    flat.f_y = [](double, double) { return 0.0; };
    flat.F = [](double x, double) { return -std::exp(-x); };
    flat.F_y = [](double, double) { return 0.0; };
    const auto rep0 = leibniz_check(flat, 0.0, 1.0, 1e-4, policy);
    CHECK(rep0.passed);
    CHECK(rep0.rhs == doctest::Approx(0.0));
}

TEST_CASE("leibniz propagates non-convergence") {
    ParametricIntegrand bad = sin_xy_family();
    bad.termination_maker = [](double) { return make_step(); };  // diverges for sin
    CHECK_THROWS_AS(leibniz_lhs(bad, 0.0, 1.0, 1e-4, LimitPolicy{}), NonConvergentError);
}

TEST_CASE("interchange of the iterated integrals") {
    const double oracle = composite_gauss(
        [](double y) { return std::cos(y) / y; }, 1.0, 2.0, 64, 16);

    LimitPolicy policy;
    policy.tol = 1e-6;
    const auto rep33 = interchange_check(sin_xy_interchange_problem(33), policy);
    CHECK(rep33.passed);
    CHECK(rep33.lhs == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(rep33.rhs == doctest::Approx(oracle).epsilon(1e-6));

    const auto rep65 = interchange_check(sin_xy_interchange_problem(65), policy);
    CHECK(rep65.passed);
    // stability under node doubling
    CHECK(std::abs(rep65.lhs - rep33.lhs) < 1e-7);
}

TEST_CASE("zero-mean weight against a y-constant integrand") {
    LimitPolicy policy;
    policy.tol = 1e-8;
    const auto rep = interchange_check(zero_mean_weight_problem(33), policy);
    CHECK(rep.passed);
    CHECK(rep.lhs == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(rep.rhs == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("zero-width interval") {
    auto p = sin_xy_interchange_problem(33);
    p.y_hi = p.y_lo;
    const auto rep = interchange_check(p, LimitPolicy{});
    CHECK(rep.passed);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
}

TEST_CASE("linear change of variable") {
    const Integrand g = catalog_get("sin_ax", {{"alpha", 1.0}});
    const auto zeta = make_pair(M_PI);

    // identity transform
    const auto id = linear_change_of_variable(g, 0.0, zeta, 0.0, 1.0);
    CHECK(id.lower_bound == doctest::Approx(0.0));
    CHECK(id.termination.atoms()[1].position == doctest::Approx(M_PI));

    // u = 2x: sin(2x) integrand with halved atom spacing, same value
    const auto half = linear_change_of_variable(g, 0.0, zeta, 0.0, 2.0);
    CHECK(half.termination.atoms()[1].position == doctest::Approx(M_PI / 2.0));
    CHECK(half.termination.support() == doctest::Approx(M_PI / 2.0));
    const auto res = evaluate(half.integrand, half.lower_bound, half.termination);
    REQUIRE(res.value.has_value());
    CHECK(*res.value == doctest::Approx(1.0).epsilon(1e-10));

    // u = pi + x: shifted lower bound flips the cosine
    const auto shifted = linear_change_of_variable(g, M_PI, zeta, M_PI, 1.0);
    const auto res2 = evaluate(shifted.integrand, shifted.lower_bound, shifted.termination);
    REQUIRE(res2.value.has_value());
    CHECK(*res2.value == doctest::Approx(-1.0).epsilon(1e-10));

    CHECK_THROWS_AS(linear_change_of_variable(g, 0.0, zeta, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(linear_change_of_variable(g, 0.0, zeta, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("linear change of variable over random slopes and shifts") {
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> ss(0.5, 4.0);
    std::uniform_real_distribution<double> rs(-3.0, 3.0);
    const Integrand g = catalog_get("sin_ax", {{"alpha", 1.0}});
    const auto zeta = make_pair(M_PI);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = ss(rng);
        const double r = rs(rng);
        const double lower = rs(rng);
        const auto base = evaluate(g, lower, zeta);
        const auto cov = linear_change_of_variable(g, lower, zeta, r, s);
        const auto moved = evaluate(cov.integrand, cov.lower_bound, cov.termination);
        REQUIRE(base.value.has_value());
        REQUIRE(moved.value.has_value());
        CHECK(*moved.value == doctest::Approx(*base.value).epsilon(1e-8).scale(1.0));
    }

    // box densities rescale as well
    const auto covbox = linear_change_of_variable(g, 0.0, make_box(2.0 * M_PI), 0.0, 2.0);
    CHECK(covbox.termination.support() == doctest::Approx(M_PI));
    CHECK(covbox.termination.mass() == doctest::Approx(-1.0).epsilon(1e-12));
    const auto resbox = evaluate(covbox.integrand, covbox.lower_bound, covbox.termination);
    REQUIRE(resbox.value.has_value());
    CHECK(*resbox.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("nonlinear substitution changes the value") {
    LimitPolicy policy;
    const auto rep = substitution_counterexample(0.25, policy);
    CHECK(rep.base_value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.expected_difference == doctest::Approx(0.5 / M_PI));
    CHECK(rep.passed);
    CHECK(rep.difference == doctest::Approx(2.0 * 0.25 / M_PI).epsilon(1e-9));
    CHECK(rep.substituted_value ==
          doctest::Approx(0.5 + 2.0 * 0.25 / M_PI).epsilon(1e-9));

    const auto zero = substitution_counterexample(0.0, policy);
    CHECK(zero.difference == doctest::Approx(0.0));
    CHECK(zero.passed);

    const auto neg = substitution_counterexample(-0.25, policy);
    CHECK(neg.difference == doctest::Approx(-2.0 * 0.25 / M_PI).epsilon(1e-9));
    CHECK(neg.passed);

    CHECK_THROWS_AS(substitution_counterexample(0.5, policy), std::invalid_argument);
}

TEST_CASE("warp term against a direct finite-cutoff oracle") {
    // Independent route for the warp term: evaluate the defining bracket
    //   int_0^b g(u) du + int_b^{b+1} g(u) z(u - b) du,  z(u) = 1 - u
    // by direct quadrature at several cutoffs; it is constant in b and
    // equals 2 alpha / pi.
    const double alpha = 0.25;
    auto g = [alpha](double u) {
        return alpha * M_PI * square_wave(u) * std::cos(M_PI * u);
    };
    for (double b : {10.0, 10.5, 37.25, 104.8}) {
        double bracket = 0.0;
        // integrate in unit panels so the square wave's jumps land on ends
        double lo = 0.0;
        while (lo < b) {
            const double hi = std::min(lo + 1.0, b);
            bracket += adaptive_simpson(g, lo, hi, 1e-13);
            lo = hi;
        }
        const double kink = std::ceil(b) - b;  // wave jump inside [b, b+1]
        auto taper = [&](double u) { return g(u) * (1.0 - (u - b)); };
        bracket += adaptive_simpson(taper, b, b + kink, 1e-13);
        bracket += adaptive_simpson(taper, b + kink, b + 1.0, 1e-13);
        CHECK(bracket == doctest::Approx(2.0 * alpha / M_PI).epsilon(1e-10));
    }
}

TEST_CASE("warped integrand equals its two-term expansion") {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> us(0.0, 40.0);
    const double alpha = 0.25;
    const Integrand warped = catalog_get("square_wave_warped", {{"warp", alpha}});
    for (int i = 0; i < 500; ++i) {
        const double u = us(rng);
        const double expanded =
            square_wave(u) + alpha * M_PI * square_wave(u) * std::cos(M_PI * u);
        CHECK(warped.f(u) == doctest::Approx(expanded).epsilon(1e-12));
    }
}
