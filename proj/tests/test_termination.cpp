#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "zint/termination.hpp"

using namespace zint;

TEST_CASE("atom constructors") {
    const auto step = make_step();
    CHECK(step.atoms().size() == 1);
    CHECK(step.support() == doctest::Approx(1.0));
    CHECK(step.mass() == doctest::Approx(-1.0));

    const auto pair = make_pair(M_PI);
    CHECK(pair.atoms().size() == 2);
    CHECK(pair.atoms()[1].position == doctest::Approx(M_PI));
    CHECK(validate(pair).passed);

    const auto triple = make_triple(M_PI);
    CHECK(triple.atoms().size() == 3);
    CHECK(triple.atoms()[1].weight == doctest::Approx(-0.5));
    CHECK(triple.support() == doctest::Approx(2.0 * M_PI));

    CHECK_THROWS_AS(make_atoms({{0.0, -0.4}, {1.0, -0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(make_atoms({{-1.0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_atoms({}), std::invalid_argument);
    CHECK_THROWS_AS(make_atoms({{2.0, -1.0}}, 1.0), std::invalid_argument);
}

TEST_CASE("box constructor") {
    const auto box = make_box(2.0);
    REQUIRE(box.segments().size() == 1);
    CHECK(box.segments()[0].value(1.0) == doctest::Approx(-0.5));
    CHECK(box.mass() == doctest::Approx(-1.0));
    CHECK(validate(box).passed);

    CHECK(validate(make_box(1e-6)).passed);  // near-step limit keeps mass -1
    CHECK_THROWS_AS(make_box(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_box(-1.0), std::invalid_argument);
}

TEST_CASE("exponential pair weights") {
    const auto even = make_exp_pair(M_PI, 0.0);
    CHECK(even.atoms()[0].weight == doctest::Approx(-0.5));
    CHECK(even.atoms()[1].weight == doctest::Approx(-0.5));

    const double beta = 0.1;
    const auto zd = make_exp_pair(M_PI, beta);
    const double e = std::exp(beta * M_PI);
    CHECK(zd.atoms()[0].weight == doctest::Approx(-e / (1.0 + e)));
    CHECK(zd.atoms()[1].weight == doctest::Approx(-1.0 / (1.0 + e)));
    CHECK(zd.mass() == doctest::Approx(-1.0).epsilon(1e-14));

    const auto late = make_exp_pair(M_PI, -50.0);
    CHECK(late.atoms()[0].weight == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(late.atoms()[1].weight == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("validation reports") {
    const auto good = validate(make_pair(M_PI));
    CHECK(good.passed);
    CHECK(good.mass == doctest::Approx(-1.0));

    const TerminationDerivative bad_mass({{0.0, -0.4}, {1.0, -0.4}}, {}, 1.0);
    const auto rep = validate(bad_mass);
    CHECK_FALSE(rep.passed);
    CHECK(rep.mass == doctest::Approx(-0.8));

    const TerminationDerivative outside({{2.0, -0.0001}},
                                        {{0.0, 1.0, Poly{-0.9999}}}, 1.0);
    const auto rep2 = validate(outside);
    CHECK_FALSE(rep2.passed);
    bool support_failed = false;
    for (const auto& c : rep2.conditions)
        if (c.name == "support respected" && !c.ok) support_failed = true;
    CHECK(support_failed);

    const TerminationDerivative empty({}, {}, 1.0);
    const auto rep3 = validate(empty);
    CHECK_FALSE(rep3.passed);
    CHECK(rep3.mass == doctest::Approx(0.0));
}

TEST_CASE("pair combined with itself is the triple") {
    const auto combined = combine(make_pair(M_PI), make_pair(M_PI));
    const auto triple = make_triple(M_PI);
    REQUIRE(combined.atoms().size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(combined.atoms()[i].position ==
              doctest::Approx(triple.atoms()[i].position).epsilon(1e-14));
        CHECK(combined.atoms()[i].weight ==
              doctest::Approx(triple.atoms()[i].weight).epsilon(1e-14));
    }
    CHECK(combined.support() == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("the sharp step is the combination identity") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto zd = testing::random_zd(rng);
        const auto combined = combine(make_step(), zd);
        CHECK(combined.mass() == doctest::Approx(-1.0).epsilon(1e-9));
        // pointwise density and atom agreement
        for (const Atom& a : zd.atoms()) {
            bool found = false;
            for (const Atom& b : combined.atoms())
                if (std::abs(a.position - b.position) < 1e-10 &&
                    std::abs(a.weight - b.weight) < 1e-10)
                    found = true;
            CHECK(found);
        }
        for (double x = 0.0; x < zd.support(); x += zd.support() / 23.0)
            CHECK(combined.density(x) == doctest::Approx(zd.density(x)).epsilon(1e-10));
    }
}

TEST_CASE("box-box combination is the negative triangle") {
    const auto tri = combine(make_box(1.0), make_box(1.0));
    CHECK(tri.atoms().empty());
    CHECK(tri.support() == doctest::Approx(2.0));
    CHECK(tri.mass() == doctest::Approx(-1.0).epsilon(1e-12));
    // density -x on [0,1], -(2-x) on [1,2], peak at 1
    for (double x : {0.25, 0.5, 0.99, 1.01, 1.5, 1.75}) {
        const double expected = -(x <= 1.0 ? x : 2.0 - x);
        CHECK(tri.density(x) == doctest::Approx(expected).epsilon(1e-12));
    }

    // dense-grid convolution oracle
    const int n = 2000;
    const double h = 1.0 / n;
    for (double x : {0.3, 0.8, 1.2, 1.7}) {
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = i * h;
            const double u = x - t;
            double v = 0.0;
            if (u >= 0.0 && u <= 1.0) v = (-1.0) * (-1.0);
            acc += (i == 0 || i == n) ? 0.5 * v : v;
        }
        acc *= h;
        CHECK(tri.density(x) == doctest::Approx(-acc).epsilon(1e-3));
    }
}

TEST_CASE("combine properties over random inputs") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto z1 = testing::random_zd(rng);
        const auto z2 = testing::random_zd(rng);
        const auto c12 = combine(z1, z2);
        const auto c21 = combine(z2, z1);

        // support additivity and mass preservation
        CHECK(c12.support() == doctest::Approx(z1.support() + z2.support()).epsilon(1e-15));
        CHECK(c12.mass() == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(validate(c12).passed);

        // commutativity: atom-for-atom and pointwise in density
        REQUIRE(c12.atoms().size() == c21.atoms().size());
        for (std::size_t i = 0; i < c12.atoms().size(); ++i) {
            CHECK(c12.atoms()[i].position ==
                  doctest::Approx(c21.atoms()[i].position).epsilon(1e-12));
            CHECK(c12.atoms()[i].weight ==
                  doctest::Approx(c21.atoms()[i].weight).epsilon(1e-12));
        }
        const double c = c12.support();
        for (int k = 0; k < 1000; ++k) {
            const double x = c * (k + 0.5) / 1000.0;
            CHECK(c12.density(x) == doctest::Approx(c21.density(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("reconstruction of z") {
    const auto pair = make_pair(M_PI);
    CHECK(reconstruct_z(pair, M_PI / 2.0) == doctest::Approx(0.5));
    CHECK(reconstruct_z(pair, -1.0) == doctest::Approx(1.0));
    CHECK(reconstruct_z(make_triple(M_PI), 1.5 * M_PI) == doctest::Approx(0.25));

    const TerminationFunction z(make_triple(M_PI));
    CHECK(z(0.5 * M_PI) == doctest::Approx(0.75));
    CHECK(z(3.0 * M_PI) == doctest::Approx(0.0));

    std::mt19937 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const auto zd = testing::random_zd(rng);
        CHECK(reconstruct_z(zd, -1e-9) == doctest::Approx(1.0));
        CHECK(reconstruct_z(zd, -100.0) == doctest::Approx(1.0));
        CHECK(reconstruct_z(zd, zd.support()) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(reconstruct_z(zd, zd.support() + 5.0) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::isfinite(reconstruct_z(zd, 0.3 * zd.support())));
    }
}

TEST_CASE("signed densities with unit mass still validate") {
    // Monotonicity of z is never required; only the mass and support rules.
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const auto zd = testing::random_zd(rng);
        CHECK(validate(zd).passed);
    }
}

TEST_CASE("json round trip") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        const auto zd = testing::random_zd(rng);
        const auto back = termination_from_json_string(to_json_string(zd));
        CHECK(back == zd);
    }
    const auto box = make_box(2.0 * M_PI);
    CHECK(termination_from_json_string(to_json_string(box)) == box);
}
