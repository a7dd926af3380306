#include <doctest.h>

#include <cmath>

#include "flocksim/odi.hpp"

using namespace flocksim;

TEST_CASE("linear equality system matches the damped oscillator") {
    // c1 = c2 = 1, lambda = Lambda = 1: Xdot = Y - X, Ydot = -X gives
    // Xddot + Xdot + X = 0, the same equation as the two-body reduction.
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::linear;
    sys.c1 = sys.c2 = 1.0;
    sys.lambda = sys.Lambda = 1.0;
    sys.x0 = 1.0;
    sys.y0 = 1.5;
    const auto result = integrate_odi(sys, 3.0, 1e-11, 1e-14);
    const double s0 = sys.x0;
    const double w0 = sys.y0 - sys.x0;  // Xdot(0)
    const double mu = std::sqrt(3.0) / 2.0;
    for (const auto& p : result.samples) {
        const double exact = std::exp(-p.t / 2.0) *
                             (s0 * std::cos(mu * p.t) + (w0 + s0 / 2.0) / mu * std::sin(mu * p.t));
        CHECK(p.x == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("basic system: Y decreases; the harmonic extreme exits") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::basic;
    sys.boundary = OdiSystem::Boundary::upper_equality;
    sys.lambda = 1.0;
    sys.x0 = 1.0;
    sys.y0 = 1.0;
    const auto result = integrate_odi(sys, 10.0);
    CHECK(result.exited);  // pure oscillator leaves X > 0 in finite time
    for (size_t k = 0; k + 1 < result.samples.size(); ++k)
        CHECK(result.samples[k + 1].y < result.samples[k].y);
}

TEST_CASE("basic system with contraction passes the lemma checks") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::basic;
    sys.boundary = OdiSystem::Boundary::lower_equality;
    sys.kappa = 0.5;
    sys.lambda = 1.0;
    sys.barrier = OdiSystem::Barrier::linear;
    sys.barrier_slope = 0.3;
    sys.x0 = 1.0;
    sys.y0 = 1.0;
    const auto result = integrate_odi(sys, 60.0);
    const auto report = check_lemma(sys, result);
    INFO(report.summary());
    CHECK(report.pass);
}

TEST_CASE("linear lemma envelopes on an overdamped instance") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::linear;
    sys.c1 = 3.0;
    sys.c2 = 2.0;
    sys.lambda = 0.5;
    sys.Lambda = 0.6;
    sys.x0 = 1.0;
    sys.y0 = 1.0;
    for (const auto boundary :
         {OdiSystem::Boundary::upper_equality, OdiSystem::Boundary::lower_equality}) {
        sys.boundary = boundary;
        const auto result = integrate_odi(sys, 20.0);
        CHECK_FALSE(result.exited);
        const auto report = check_lemma(sys, result);
        INFO(report.summary());
        CHECK(report.pass);
    }
}

TEST_CASE("linear lemma on an oscillatory instance checks the admissible window") {
    // These constants make the upper-equality trajectory spiral and exit;
    // the envelopes are still verified on the admissible part.
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::linear;
    sys.c1 = 2.0;
    sys.c2 = 0.5;
    sys.lambda = sys.Lambda = 1.0;
    sys.x0 = 1.0;
    sys.y0 = 1.0;
    const auto result = integrate_odi(sys, 30.0);
    CHECK(result.exited);
    const auto report = check_lemma(sys, result);
    INFO(report.summary());
    CHECK(report.pass);
}

TEST_CASE("fuzzed interior trajectories satisfy the linear envelopes") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::linear;
    sys.c1 = 3.0;
    sys.c2 = 2.0;
    sys.lambda = 0.4;
    sys.Lambda = 0.6;
    sys.x0 = 1.0;
    sys.y0 = 1.0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto mod = random_modulation(seed, 20.0);
        const auto result = integrate_odi(sys, 20.0, 1e-10, 1e-13, &mod);
        const auto report = check_lemma(sys, result);
        INFO("seed ", seed, "\n", report.summary());
        CHECK(report.pass);
    }
}

TEST_CASE("singular lemma: theta band and envelopes") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::singular;
    sys.alpha = 0.5;
    sys.c1 = 1.5;
    sys.c2 = 1.0;
    sys.lambda = 0.25;
    sys.Lambda = 0.5;
    sys.x0 = 1.0;
    sys.y0 = 1.0;
    const auto result = integrate_odi(sys, 400.0);
    CHECK_FALSE(result.exited);
    const auto report = check_lemma(sys, result);
    INFO(report.summary());
    CHECK(report.pass);
}

TEST_CASE("flock lemma bound") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::flock;
    sys.shift = 2.0;
    sys.barrier = OdiSystem::Barrier::kernel_primitive;
    sys.barrier_kernel = KernelSpec::constant_weight(1.0);
    sys.x0 = 3.0;
    sys.y0 = 0.8;
    for (const auto boundary :
         {OdiSystem::Boundary::upper_equality, OdiSystem::Boundary::lower_equality}) {
        sys.boundary = boundary;
        const auto report = check_lemma(sys, integrate_odi(sys, 30.0));
        INFO(report.summary());
        CHECK(report.pass);
    }
    const auto mod = random_modulation(4, 30.0);
    const auto report = check_lemma(sys, integrate_odi(sys, 30.0, 1e-10, 1e-13, &mod));
    CHECK(report.pass);
}

TEST_CASE("scalar Lyapunov game stays under the explicit bound") {
    DeltaGameModel model;
    model.kappa = 1.0;
    model.alpha = 0.5;
    model.c0 = 2.5;
    model.l0 = 1.0;
    const auto series = integrate_delta_game(model, 1000.0);
    const auto item = check_delta_game(model, series);
    INFO(item.name, ": ", item.measured, " vs ", item.bound);
    CHECK(item.pass);
    // Spot-check the weighted tail directly on [10, 1000].
    for (const auto& [t, l] : series)
        if (t >= 10.0) CHECK(l * (1.0 + t) * (1.0 + t) <= item.bound * (1.0 + 1e-9));
}

TEST_CASE("modulation is deterministic in the seed") {
    const auto a = random_modulation(9, 10.0);
    const auto b = random_modulation(9, 10.0);
    for (double t = 0.0; t <= 10.0; t += 0.37) {
        CHECK(a.damping_blend(t) == doctest::Approx(b.damping_blend(t)));
        CHECK(a.damping_blend(t) >= 0.0);
        CHECK(a.damping_blend(t) <= 1.0);
    }
}

TEST_CASE("parameter validation") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::singular;
    sys.alpha = 1.2;
    CHECK_THROWS_AS(sys.validate(), Error);
    OdiSystem sys2;
    sys2.c1 = 1.0;
    sys2.c2 = 2.0;
    CHECK_THROWS_AS(sys2.validate(), Error);
}

TEST_CASE("require_pass raises on a violated envelope") {
    OdiSystem sys;
    sys.kind = OdiSystem::Kind::flock;
    sys.shift = 2.0;
    sys.x0 = 3.0;
    sys.y0 = 0.8;
    // Fabricated trajectory that overshoots the uniform bound.
    OdiResult fake;
    for (int k = 0; k < 12; ++k) fake.samples.push_back({0.5 * k, 3.0 + k, 0.5});
    const auto report = check_lemma(sys, fake);
    CHECK_FALSE(report.pass);
    CHECK_THROWS_WITH_AS(require_pass(report), doctest::Contains("EnvelopeViolation"), Error);
}
