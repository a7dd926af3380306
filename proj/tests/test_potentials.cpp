#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "flocksim/potentials.hpp"

using namespace flocksim;

TEST_CASE("values per family") {
    const auto quad = PotentialSpec::quadratic(1.0, 2);
    const std::vector<double> x{2.0, 0.0};
    CHECK(quad.value(x) == doctest::Approx(2.0));

    const auto coulomb = PotentialSpec::coulomb_quadratic_1d();
    CHECK(coulomb.value(std::vector<double>{2.0}) == doctest::Approx(0.0));
    CHECK(coulomb.value(std::vector<double>{0.0}) == doctest::Approx(0.0));
    CHECK(coulomb.value(std::vector<double>{-1.0}) == doctest::Approx(-0.5));
}

TEST_CASE("gradients per family") {
    const auto coulomb = PotentialSpec::coulomb_quadratic_1d();
    CHECK(coulomb.gradient_of(std::vector<double>{2.0})[0] == doctest::Approx(1.0));
    CHECK(coulomb.gradient_of(std::vector<double>{-0.5})[0] == doctest::Approx(0.5));
    CHECK(coulomb.gradient_of(std::vector<double>{0.0})[0] == doctest::Approx(0.0));

    const auto quad = PotentialSpec::quadratic(2.0, 2);
    const auto g = quad.gradient_of(std::vector<double>{1.0, 1.0});
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(2.0));
}

TEST_CASE("convexity moduli") {
    const auto quad = PotentialSpec::quadratic(1.0, 1);
    REQUIRE(quad.convexity_moduli().has_value());
    CHECK(quad.convexity_moduli()->first == doctest::Approx(1.0));
    CHECK(quad.convexity_moduli()->second == doctest::Approx(1.0));

    const auto mixed = PotentialSpec::quadratic_sqrt(0.5, 2.5, 2);
    REQUIRE(mixed.convexity_moduli().has_value());
    CHECK(mixed.convexity_moduli()->first == doctest::Approx(0.5));
    CHECK(mixed.convexity_moduli()->second == doctest::Approx(3.0));

    CHECK_FALSE(PotentialSpec::coulomb_quadratic_1d().convexity_moduli().has_value());
}

TEST_CASE("declared moduli are spot-checked") {
    auto value = [](std::span<const double> x) { return 0.5 * x[0] * x[0]; };
    auto gradient = [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; };
    CHECK_NOTHROW(PotentialSpec::custom_convex(1, 1.0, 1.0, value, gradient));
    CHECK_THROWS_AS(PotentialSpec::custom_convex(1, 2.0, 3.0, value, gradient), Error);
    CHECK_THROWS_AS(PotentialSpec::custom_convex(1, 0.1, 0.5, value, gradient), Error);
}

TEST_CASE("gradient matches finite differences") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    const auto pots = {PotentialSpec::quadratic(1.3, 2), PotentialSpec::quadratic_sqrt(0.7, 1.1, 2)};
    for (const auto& p : pots) {
        for (int it = 0; it < 200; ++it) {
            std::vector<double> x{box(rng), box(rng)};
            const auto g = p.gradient_of(x);
            for (int k = 0; k < 2; ++k) {
                const double h = 1e-6;
                auto xp = x, xm = x;
                xp[k] += h;
                xm[k] -= h;
                const double fd = (p.value(xp) - p.value(xm)) / (2.0 * h);
                CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
    // Coulomb case away from the kink.
    const auto coulomb = PotentialSpec::coulomb_quadratic_1d();
    for (double x = -2.0; x <= 2.0; x += 0.37) {
        if (std::abs(x) < 0.2) continue;
        const double h = 1e-7;
        const double fd = (coulomb.value(std::vector<double>{x + h}) -
                           coulomb.value(std::vector<double>{x - h})) /
                          (2.0 * h);
        CHECK(coulomb.gradient_of(std::vector<double>{x})[0] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("symmetry and vanishing gradient at the origin") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> box(-4.0, 4.0);
    const auto pots = {PotentialSpec::quadratic(0.8, 2), PotentialSpec::quadratic_sqrt(1.0, 0.5, 2)};
    for (const auto& p : pots) {
        for (int it = 0; it < 100; ++it) {
            std::vector<double> x{box(rng), box(rng)};
            std::vector<double> nx{-x[0], -x[1]};
            CHECK(p.value(x) == doctest::Approx(p.value(nx)));
        }
        const auto g0 = p.gradient_of(std::vector<double>{0.0, 0.0});
        CHECK(std::abs(g0[0]) <= 1e-12);
        CHECK(std::abs(g0[1]) <= 1e-12);
    }
    const auto coulomb = PotentialSpec::coulomb_quadratic_1d();
    CHECK(coulomb.value(std::vector<double>{1.3}) ==
          doctest::Approx(coulomb.value(std::vector<double>{-1.3})));
}

TEST_CASE("dimension mismatch") {
    const auto quad = PotentialSpec::quadratic(1.0, 2);
    CHECK_THROWS_AS(quad.value(std::vector<double>{1.0}), Error);
    CHECK_THROWS_AS(PotentialSpec::coulomb_quadratic_1d().value(std::vector<double>{1.0, 2.0}),
                    Error);
}
