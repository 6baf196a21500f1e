#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zint/polynomial.hpp"

using namespace zint;

TEST_CASE("evaluation and arithmetic") {
    const Poly p{1.0, 2.0, 3.0};  // 1 + 2t + 3t^2
    CHECK(poly_eval(p, 0.0) == doctest::Approx(1.0));
    CHECK(poly_eval(p, 2.0) == doctest::Approx(17.0));

    const Poly q = poly_mul(p, Poly{0.0, 1.0});  // t * p
    CHECK(poly_eval(q, 2.0) == doctest::Approx(34.0));

    CHECK(poly_integral(Poly{3.0}, 0.0, 2.0) == doctest::Approx(6.0));
    CHECK(poly_integral(Poly{0.0, 2.0}, 0.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("shift rebases a polynomial") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        Poly p(4);
        for (auto& c : p) c = coeff(rng);
        const double shift = coeff(rng);
        const Poly q = poly_shift(p, shift);
        for (double u : {-1.0, 0.0, 0.3, 2.0})
            CHECK(poly_eval(q, u) == doctest::Approx(poly_eval(p, u + shift)).epsilon(1e-12));
    }
}

TEST_CASE("compose with a linear argument") {
    const Poly p{0.0, 0.0, 1.0};  // t^2
    const Poly q = poly_compose_linear(p, 1.0, 2.0);  // (1 + 2u)^2
    CHECK(poly_eval(q, 0.0) == doctest::Approx(1.0));
    CHECK(poly_eval(q, 1.0) == doctest::Approx(9.0));
}

TEST_CASE("box-box convolution is the triangle") {
    // Constant 1 on [0,1] convolved with itself: x on [0,1], 2-x on [1,2].
    const PolyPiece box{0.0, 1.0, Poly{1.0}};
    const auto conv = convolve_pieces(box, box);
    double mass = 0.0;
    for (const auto& piece : conv) mass += piece.mass();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    for (double x : {0.1, 0.5, 0.9, 1.0, 1.3, 1.9}) {
        double v = 0.0;
        for (const auto& piece : conv)
            if (piece.lo <= x && x <= piece.hi) {
                v = piece.value(x);
                break;
            }
        const double expected = x <= 1.0 ? x : 2.0 - x;
        CHECK(v == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("piece convolution matches a dense-grid oracle") {
    // Independent route: rasterize both densities and convolve by direct
    // summation, then compare pointwise.
    const PolyPiece g1{0.0, 1.5, Poly{0.5, -1.0, 2.0}};
    const PolyPiece g2{0.25, 1.0, Poly{1.0, 3.0}};
    const auto conv = convolve_pieces(g1, g2);

    const int n = 3000;
    const double lo = g1.lo + g2.lo, hi = g1.hi + g2.hi;
    auto eval_conv = [&](double x) {
        double v = 0.0;
        for (const auto& piece : conv)
            if (piece.lo <= x && x <= piece.hi) {
                v = piece.value(x);
                break;
            }
        return v;
    };
    // trapezoid integration of g1(t) g2(x - t) over the support overlap,
    // where the integrand is smooth
    auto oracle = [&](double x) {
        const double a = std::max(g1.lo, x - g2.hi);
        const double b = std::min(g1.hi, x - g2.lo);
        if (b <= a) return 0.0;
        const double h = (b - a) / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = a + i * h;
            const double val = g1.value(t) * g2.value(x - t);
            acc += (i == 0 || i == n) ? 0.5 * val : val;
        }
        return acc * h;
    };
    for (int i = 1; i < 10; ++i) {
        const double x = lo + (hi - lo) * i / 10.0;
        CHECK(eval_conv(x) == doctest::Approx(oracle(x)).epsilon(5e-6));
    }
}

TEST_CASE("consolidation merges overlapping pieces") {
    std::vector<PolyPiece> pieces;
    pieces.push_back({0.0, 2.0, Poly{1.0}});
    pieces.push_back({1.0, 3.0, Poly{2.0}});
    const auto merged = consolidate_pieces(pieces, 1e-12);
    REQUIRE(merged.size() == 3);
    CHECK(merged[0].value(0.5) == doctest::Approx(1.0));
    CHECK(merged[1].value(1.5) == doctest::Approx(3.0));
    CHECK(merged[2].value(2.5) == doctest::Approx(2.0));
}
