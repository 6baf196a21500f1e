#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "zint/evaluator.hpp"
#include "zint/integrand.hpp"

using namespace zint;

TEST_CASE("concurrent antiderivative reads match serial values") {
    auto f = [](double x) { return std::sin(x) / (1.0 + 0.1 * x); };

    // serial reference, fresh cache
    const auto serial = numeric_antiderivative(f, 0.0);
    std::vector<double> xs;
    for (int i = 0; i < 400; ++i) xs.push_back(0.37 + 0.93 * i);
    std::vector<double> expected(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) expected[i] = serial->value(xs[i]);

    // concurrent reads on a cold cache race to extend it
    const auto shared = numeric_antiderivative(f, 0.0);
    std::vector<double> got(xs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(xs.size()); ++i)
        got[static_cast<std::size_t>(i)] = shared->value(xs[static_cast<std::size_t>(i)]);

    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(got[i] == expected[i]);
}

TEST_CASE("evaluation through the parallel sweep is deterministic") {
    const Integrand g = catalog_get("x_cos_ax", {{"alpha", 1.3}});
    const auto zd = make_triple(M_PI / 1.3);
    const LimitPolicy policy = make_policy(g);

    const auto r1 = evaluate(g, 0.5, zd, policy);
    const auto r2 = evaluate(g, 0.5, zd, policy);
    REQUIRE(r1.value.has_value());
    REQUIRE(r2.value.has_value());
    CHECK(*r1.value == *r2.value);

    // and identical to assembling from the serial sweep
    const auto samples = tail_sweep_serial(g.F, zd, policy.grid());
    const auto rep = detect_limit(samples, policy);
    REQUIRE(rep.limit.has_value());
    CHECK(-g.F(0.5) - *rep.limit == *r1.value);
}
