#include <doctest.h>

#include <cmath>
#include <random>

#include "flocksim/dynamics.hpp"

using namespace flocksim;

namespace {

Ensemble random_ensemble(int n, int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.3, 1.5);
    std::vector<double> pos(size_t(n) * dim), vel(size_t(n) * dim), w(n);
    for (double& v : pos) v = box(rng);
    for (double& v : vel) v = 0.5 * box(rng);
    for (double& v : w) v = wdist(rng);
    return init_particles(std::move(pos), std::move(vel), std::move(w), dim);
}

double closed_form_separation(double psi_bar, double s0, double w0, double t) {
    const double disc = psi_bar * psi_bar - 4.0;
    if (disc < 0.0) {
        const double mu = std::sqrt(-disc) / 2.0;
        return std::exp(-psi_bar * t / 2.0) *
               (s0 * std::cos(mu * t) + (w0 + psi_bar * s0 / 2.0) / mu * std::sin(mu * t));
    }
    const double root = std::sqrt(disc);
    const double rp = (-psi_bar + root) / 2.0;
    const double rm = (-psi_bar - root) / 2.0;
    const double b = (w0 - rp * s0) / (rm - rp);
    return (s0 - b) * std::exp(rp * t) + b * std::exp(rm * t);
}

}  // namespace

TEST_CASE("pair forces by hand") {
    const auto e = init_particles({-1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, 1);
    std::vector<double> acc;
    accelerations(e, PotentialSpec::quadratic(1.0, 1), KernelSpec::constant_weight(1.0), 0.0, acc);
    CHECK(acc[0] == doctest::Approx(1.0));
    CHECK(acc[1] == doctest::Approx(-1.0));
}

TEST_CASE("identical velocities switch the alignment term off") {
    auto e = random_ensemble(12, 2, 3);
    for (int i = 0; i < e.size(); ++i) {
        e.velocities[2 * i] = 0.4;
        e.velocities[2 * i + 1] = -0.2;
    }
    std::vector<double> with_alignment, pure_potential;
    const auto quad = PotentialSpec::quadratic(1.0, 2);
    accelerations(e, quad, KernelSpec::constant_weight(5.0), 0.0, with_alignment);
    accelerations(e, quad, KernelSpec::constant_weight(1e-12), 0.0, pure_potential);
    for (size_t k = 0; k < with_alignment.size(); ++k)
        CHECK(with_alignment[k] == doctest::Approx(pure_potential[k]).epsilon(1e-12));
}

TEST_CASE("total force vanishes by antisymmetry") {
    for (int dim : {1, 2}) {
        auto e = random_ensemble(17, dim, 7 + dim);
        std::vector<double> acc;
        const auto pot = dim == 1 ? PotentialSpec::coulomb_quadratic_1d()
                                  : PotentialSpec::quadratic(1.3, 2);
        accelerations(e, pot, KernelSpec::bounded_band(0.5, 2.0, 3.0), 0.0, acc);
        for (int k = 0; k < dim; ++k) {
            double total = 0.0;
            for (int i = 0; i < e.size(); ++i) total += e.weights[i] * acc[size_t(i) * dim + k];
            CHECK(std::abs(total) <= 1e-14);
        }
    }
}

TEST_CASE("free streaming is exact for RK4") {
    // Test-only null potential: zero value and gradient.
    PotentialSpec null_potential;
    null_potential.family = PotentialFamily::custom_convex;
    null_potential.dim = 1;
    null_potential.lambda = 1.0;
    null_potential.Lambda = 1.0;
    null_potential.custom_value = [](std::span<const double>) { return 0.0; };
    null_potential.custom_gradient = [](std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };

    auto e = init_particles({-0.4, 0.2, 1.0}, {0.7, 0.7, 0.7}, {1.0, 1.0, 1.0}, 1);
    SimConfig cfg;
    cfg.integrator = SimConfig::Integrator::rk4;
    cfg.dt_init = 0.25;
    cfg.t_final = 0.25;
    const auto next = step(e, cfg, null_potential, KernelSpec::constant_weight(2.0));
    for (int i = 0; i < 3; ++i) {
        CHECK(next.positions[i] == doctest::Approx(e.positions[i] + 0.7 * 0.25).epsilon(1e-15));
        CHECK(next.velocities[i] == doctest::Approx(0.7));
    }
}

TEST_CASE("two-body separation matches the damped oscillator") {
    // The recorded state keeps sorted labels, so the measured separation is
    // |s(t)| of the signed closed form (the underdamped pair crosses).
    for (const double psi_bar : {1.0, 3.0}) {
        const auto e = init_particles({-1.0, 1.0}, {0.25, -0.25}, {1.0, 1.0}, 1);
        SimConfig cfg;
        cfg.t_final = 5.0;
        cfg.rel_tol = 1e-9;
        cfg.abs_tol = 1e-12;
        cfg.record_every = 10;
        const auto records = simulate(e, cfg, PotentialSpec::quadratic(1.0, 1),
                                      KernelSpec::constant_weight(psi_bar), nullptr);
        const double s0 = 2.0, w0 = -0.5;
        for (const auto& rec : records) {
            const double s = rec.state.positions[1] - rec.state.positions[0];
            CHECK(std::abs(s - std::abs(closed_form_separation(psi_bar, s0, w0, rec.t))) <= 1e-6);
        }
    }
}

TEST_CASE("momentum and center of mass on a generic run") {
    const auto e = random_ensemble(20, 1, 17);
    SimConfig cfg;
    cfg.t_final = 6.0;
    cfg.record_every = 7;
    const auto records = simulate(e, cfg, PotentialSpec::quadratic(0.8, 1),
                                  KernelSpec::bounded_band(0.4, 1.5, 3.0), nullptr);
    const double p0 = mean_velocity(records.front().state)[0];
    const double c0 = center_of_mass(records.front().state)[0];
    for (const auto& rec : records) {
        CHECK(std::abs(mean_velocity(rec.state)[0] - p0) <= 1e-10);
        CHECK(std::abs(center_of_mass(rec.state)[0] - (c0 + rec.t * p0)) <= 1e-9);
    }
}

TEST_CASE("energy decays and the drop matches the dissipation integral") {
    const auto e = random_ensemble(16, 1, 23);
    SimConfig cfg;
    cfg.t_final = 8.0;
    cfg.record_every = 3;
    const auto pot = PotentialSpec::quadratic(1.0, 1);
    const auto ker = KernelSpec::bounded_band(0.5, 1.5, 3.0);
    DiagnosticsConfig diag;
    const auto records = simulate(e, cfg, pot, ker, [&](const Ensemble& s) {
        return compute_frame(s, pot, ker, nullptr, diag);
    });
    double integral = 0.0;
    for (size_t k = 0; k + 1 < records.size(); ++k) {
        const auto& a = records[k];
        const auto& b = records[k + 1];
        CHECK(b.frame.e_diss <= a.frame.e_diss + 1e-8);
        integral += 0.5 * (a.frame.z_tilde + b.frame.z_tilde) * (b.t - a.t);
    }
    const double drop = records.front().frame.e_diss - records.back().frame.e_diss;
    CHECK(drop == doctest::Approx(integral).epsilon(0.01));
}

TEST_CASE("Galilean shift moves the trajectory rigidly") {
    const auto base = random_ensemble(10, 1, 31);
    Ensemble moved = base;
    const double dc = 0.5, dw = 0.25;
    for (double& x : moved.positions) x += dc;
    for (double& v : moved.velocities) v += dw;

    SimConfig cfg;
    cfg.integrator = SimConfig::Integrator::rk4;
    cfg.dt_init = 1e-3;
    cfg.t_final = 2.0;
    cfg.record_every = 200;
    const auto pot = PotentialSpec::quadratic(1.0, 1);
    const auto ker = KernelSpec::bounded_band(0.5, 1.5, 2.0);
    const auto a = simulate(base, cfg, pot, ker, nullptr);
    const auto b = simulate(moved, cfg, pot, ker, nullptr);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.size(); ++k) {
        for (int i = 0; i < base.size(); ++i) {
            const double expected = a[k].state.positions[i] + dc + a[k].t * dw;
            CHECK(b[k].state.positions[i] == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("near-contact singular kernel keeps the order or fails loudly") {
    const auto e = init_particles({-0.01, 0.01}, {1.5, -1.5}, {1.0, 1.0}, 1);
    SimConfig cfg;
    cfg.t_final = 0.5;
    cfg.record_every = 1;
    cfg.dt_init = 1e-3;
    bool clean = true;
    std::vector<TrajectoryRecord> records;
    try {
        records = simulate(e, cfg, PotentialSpec::quadratic(1.0, 1),
                           KernelSpec::power_law(0.5, 1.0), nullptr);
    } catch (const Error& err) {
        clean = false;
        CHECK((err.code() == Errc::step_size_underflow || err.code() == Errc::separation_underflow));
    }
    if (clean)
        for (const auto& rec : records) CHECK(rec.state.positions[0] <= rec.state.positions[1]);
}

TEST_CASE("recording cadence and final time") {
    const auto e = random_ensemble(6, 1, 41);
    SimConfig cfg;
    cfg.t_final = 1.0;
    cfg.record_every = 4;
    const auto records = simulate(e, cfg, PotentialSpec::quadratic(1.0, 1),
                                  KernelSpec::constant_weight(1.0), nullptr);
    CHECK(records.front().t == doctest::Approx(0.0));
    CHECK(records.back().t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(records.size() >= 3);
}

TEST_CASE("invalid configuration is rejected") {
    SimConfig cfg;
    cfg.dt_init = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    SimConfig cfg2;
    cfg2.record_every = 0;
    CHECK_THROWS_AS(cfg2.validate(), Error);
}
