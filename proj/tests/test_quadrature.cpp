#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zint/quadrature.hpp"

using namespace zint;

TEST_CASE("adaptive Simpson on smooth integrands") {
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 50.0, 1e-12) ==
          doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-11));
    CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-12) == 0.0);
}

TEST_CASE("adaptive Simpson resolves oscillation") {
    // int_0^10 sin(x^2) dx against a high-order fixed-grid oracle.
    const double oracle =
        composite_gauss([](double x) { return std::sin(x * x); }, 0.0, 10.0, 400, 16);
    CHECK(adaptive_simpson([](double x) { return std::sin(x * x); }, 0.0, 10.0, 1e-11) ==
          doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
    for (int n : {2, 5, 16, 33, 65}) {
        const GaussRule& rule = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
        // degree 2n-1 monomial on [0,1]
        const int d = 2 * n - 1;
        const double got = gauss_panel([d](double x) { return std::pow(x, d); }, 0.0, 1.0, n);
        CHECK(got == doctest::Approx(1.0 / (d + 1)).epsilon(1e-11));
    }
}

TEST_CASE("composite Gauss handles long ranges") {
    const double got =
        composite_gauss([](double x) { return std::cos(x); }, 0.0, 100.0, 100, 8);
    CHECK(got == doctest::Approx(std::sin(100.0)).epsilon(1e-12));
}
