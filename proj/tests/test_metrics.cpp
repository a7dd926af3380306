#include <doctest.h>

#include <cmath>
#include <random>

#include "flocksim/dynamics.hpp"
#include "flocksim/metrics.hpp"

using namespace flocksim;

TEST_CASE("diameters") {
    const auto e = init_particles({0.0, 2.0, 5.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 1);
    const auto d = diameters(e);
    CHECK(d.positions == doctest::Approx(5.0));
    CHECK(d.velocities == doctest::Approx(0.0));

    const auto kernel = KernelSpec::constant_weight(1.0);
    const auto two = init_particles({0.0, 2.0}, {0.0, 0.0}, {1.0, 1.0}, 1);
    const auto omega = aux_omega(two, kernel);
    CHECK(diameters(two, &omega).omega == doctest::Approx(2.0));
}

TEST_CASE("pairwise deviations") {
    const auto kernel = KernelSpec::constant_weight(0.7);
    const auto e = init_particles({-1.0, 1.0}, {0.3, 0.3}, {1.0, 1.0}, 1);
    const auto dev = pairwise_l2(e, nullptr, kernel, DeviationMode::plain);
    CHECK(dev.x == doctest::Approx(2.0));
    CHECK(dev.z == doctest::Approx(0.0));
    CHECK(dev.z_tilde == doctest::Approx(0.0));

    const auto f = init_particles({-1.0, 1.0}, {0.5, -0.5}, {1.0, 1.0}, 1);
    const auto dev2 = pairwise_l2(f, nullptr, kernel, DeviationMode::plain);
    CHECK(dev2.z_tilde == doctest::Approx(0.7 * dev2.z));
}

TEST_CASE("lyapunov functionals") {
    const auto kernel = KernelSpec::bounded_band(0.5, 2.0, 3.0);
    const auto quad = PotentialSpec::quadratic(1.0, 2);

    // Fully flocked state: everything vanishes.
    const auto flocked =
        init_particles({0.3, 0.3, 0.3, 0.3}, {0.1, 0.2, 0.1, 0.2}, {1.0, 1.0}, 2);
    const auto zero = lyapunov_multid(flocked, quad, kernel, 0.1, 0.1);
    CHECK(zero.e_zeta == doctest::Approx(0.0));
    CHECK(zero.e_tilde_xi == doctest::Approx(0.0));
    CHECK(zero.l_cal == doctest::Approx(0.0));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    std::vector<double> pos(16), vel(16);
    for (double& v : pos) v = box(rng);
    for (double& v : vel) v = 0.5 * box(rng);
    const auto e = init_particles(pos, vel, std::vector<double>(8, 1.0), 2);

    // zeta = 0 drops the cross term.
    const auto base = lyapunov_multid(e, quad, kernel, 0.0, std::nullopt);
    CHECK(base.e_zeta == doctest::Approx(dissipation_energy(e, quad)));

    // Constant kernel: the alignment potential term is xi * psi_bar * X / 2.
    const auto constant = KernelSpec::constant_weight(0.8);
    const double xi = 0.3;
    const auto with_xi = lyapunov_multid(e, quad, constant, xi, xi);
    const auto dev = pairwise_l2(e, nullptr, constant, DeviationMode::plain);
    CHECK(with_xi.e_tilde_xi - with_xi.e_zeta == doctest::Approx(xi * 0.8 * dev.x / 2.0));

    CHECK_THROWS_AS(lyapunov_multid(e, quad, kernel, 5.0, std::nullopt), Error);
    CHECK_THROWS_AS(lyapunov_multid(e, quad, kernel, std::nullopt, 5.0), Error);
    // A singular kernel with no floor admits no zeta at all.
    CHECK_THROWS_AS(lyapunov_multid(e, quad, KernelSpec::power_law(0.5, 1.0), 0.01, std::nullopt),
                    Error);
}

TEST_CASE("wasserstein to a Dirac point") {
    const auto e = init_particles({0.0, 2.0}, {0.0, 0.0}, {1.0, 1.0}, 1);
    CHECK(wasserstein_1d(WassersteinOrder::w2, e, WassersteinTarget::dirac(1.0)) ==
          doctest::Approx(1.0));
    CHECK(wasserstein_1d(WassersteinOrder::winf, e, WassersteinTarget::dirac(1.0)) ==
          doctest::Approx(1.0));
    // Diameter sandwich for the Dirac at the center of mass.
    const double dinf =
        wasserstein_1d(WassersteinOrder::winf, e, WassersteinTarget::dirac(center_of_mass(e)[0]));
    CHECK(dinf >= 0.5 * 2.0);
    CHECK(dinf <= 2.0);
}

TEST_CASE("wasserstein of a measure against itself") {
    const auto e = init_particles({-0.4, 0.1, 0.9}, {0.0, 0.0, 0.0}, {0.2, 0.5, 0.3}, 1);
    const auto self = WassersteinTarget::atoms(e.positions, e.weights);
    for (const auto p : {WassersteinOrder::w1, WassersteinOrder::w2, WassersteinOrder::winf})
        CHECK(wasserstein_1d(p, e, self) == doctest::Approx(0.0));
}

TEST_CASE("wasserstein to the uniform interval") {
    const auto e = init_particles({-0.5, 0.5}, {0.0, 0.0}, {1.0, 1.0}, 1);
    const double d2 = wasserstein_1d(WassersteinOrder::w2, e, WassersteinTarget::uniform(0.0, 1.0));
    CHECK(d2 * d2 == doctest::Approx(1.0 / 12.0));

    // Brute-force oracle: the interval discretized into many equal atoms.
    const int m = 10000;
    std::vector<double> pos(m), w(m, 1.0 / m);
    for (int i = 0; i < m; ++i) pos[i] = 2.0 * (i + 0.5) / m - 1.0;
    const auto oracle = WassersteinTarget::atoms(pos, w);
    for (const auto p : {WassersteinOrder::w1, WassersteinOrder::w2, WassersteinOrder::winf}) {
        const double exact = wasserstein_1d(p, e, WassersteinTarget::uniform(0.0, 1.0));
        const double approx = wasserstein_1d(p, e, oracle);
        CHECK(std::abs(exact - approx) <= 1e-4);
    }
}

TEST_CASE("wasserstein symmetry and triangle inequality on random atoms") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + int(rng() % 5);
        auto sample = [&]() {
            std::vector<double> pos(n), vel(n, 0.0), w(n, 1.0);
            for (double& v : pos) v = box(rng);
            return init_particles(pos, vel, w, 1);
        };
        const auto a = sample(), b = sample(), c = sample();
        const auto atoms = [](const Ensemble& e) {
            return WassersteinTarget::atoms(e.positions, e.weights);
        };
        for (const auto p : {WassersteinOrder::w1, WassersteinOrder::w2, WassersteinOrder::winf}) {
            const double ab = wasserstein_1d(p, a, atoms(b));
            const double ba = wasserstein_1d(p, b, atoms(a));
            const double ac = wasserstein_1d(p, a, atoms(c));
            const double cb = wasserstein_1d(p, c, atoms(b));
            CHECK(ab == doctest::Approx(ba));
            CHECK(ab <= ac + cb + 1e-12);
        }
    }
}

TEST_CASE("wasserstein_2 to the Dirac at the center of mass") {
    const auto e = init_particles({1.0, 0.0, -1.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {1.0, 1.0}, 2);
    CHECK(wasserstein_2_to_dirac(e) == doctest::Approx(1.0));

    const auto cluster = init_particles({0.5, 0.5, 0.5}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 1);
    CHECK(wasserstein_2_to_dirac(cluster) == doctest::Approx(0.0));

    // d2^2 equals X/2 for the plain pairwise sum.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    std::vector<double> pos(10), vel(10, 0.0), w(10, 1.0);
    for (double& v : pos) v = box(rng);
    const auto f = init_particles(pos, vel, w, 1);
    const auto dev = pairwise_l2(f, nullptr, KernelSpec::constant_weight(1.0), DeviationMode::plain);
    const double d2 = wasserstein_2_to_dirac(f);
    CHECK(d2 * d2 == doctest::Approx(dev.x / 2.0));
}

TEST_CASE("uniform diameter bound formula") {
    DiagnosticsFrame f0;
    f0.d_eta = 2.0;
    f0.d_omega = 0.0;
    CHECK(diameter_bound(f0, KernelSpec::constant_weight(1.0)) == doctest::Approx(7.0));
    CHECK(diameter_bound(f0, KernelSpec::constant_weight(0.1)) == doctest::Approx(5.2));
    DiagnosticsFrame any;
    any.d_eta = 0.5;
    any.d_omega = 0.3;
    CHECK(diameter_bound(any, KernelSpec::constant_weight(0.4)) >= 4.0);
    DiagnosticsFrame missing;
    missing.d_eta = 1.0;
    CHECK_THROWS_AS(diameter_bound(missing, KernelSpec::constant_weight(1.0)), Error);
}

TEST_CASE("Coulomb run invariants: velocity sandwich, diameter bound, dissipation") {
    // Smooth initial velocity field: the discrete characteristics must not
    // cross, mirroring the classical-solution setting.
    const int n = 24;
    std::vector<double> pos(n), vel(n), w(n, 1.0);
    for (int i = 0; i < n; ++i) pos[i] = -0.6 + 1.2 * (i + 0.5) / n;
    for (int i = 0; i < n; ++i) vel[i] = 0.2 * std::sin(3.0 * pos[i]);
    const auto e0 = init_particles(pos, vel, w, 1);
    const auto coulomb = PotentialSpec::coulomb_quadratic_1d();
    const auto kernel = KernelSpec::bounded_band(0.75, 1.25, 3.0);
    const auto ref = reference_map(e0, coulomb);

    SimConfig cfg;
    cfg.t_final = 12.0;
    cfg.record_every = 4;
    DiagnosticsConfig diag;
    diag.mode = DiagnosticsConfig::Mode::coulomb_1d;
    const auto records = simulate(e0, cfg, coulomb, kernel, [&](const Ensemble& s) {
        return compute_frame(s, coulomb, kernel, &ref, diag);
    });

    const double dbar = diameter_bound(records.front().frame, kernel);
    const double psi_m_eff = kernel.psi(dbar);
    CHECK(psi_m_eff > 0.0);

    for (const auto& rec : records) {
        CHECK(rec.frame.d_eta <= dbar + 1e-12);
        CHECK(rec.frame.d_v <=
              rec.frame.d_omega + 2.0 * kernel.primitive(rec.frame.d_eta / 2.0) + 1e-10);
    }

    // Integrated dissipation estimates between consecutive frames.
    double int_x = 0.0, int_z = 0.0, int_zt = 0.0;
    const auto& first = records.front().frame;
    const auto& last = records.back().frame;
    for (size_t k = 0; k + 1 < records.size(); ++k) {
        const auto& a = records[k].frame;
        const auto& b = records[k + 1].frame;
        const double dt = records[k + 1].t - records[k].t;
        int_x += 0.5 * (a.x + b.x) * dt;
        int_z += 0.5 * (a.z + b.z) * dt;
        int_zt += 0.5 * (a.z_tilde + b.z_tilde) * dt;
    }
    const double lhs_xy = (last.x + last.y) - (first.x + first.y);
    CHECK(lhs_xy <= -2.0 * psi_m_eff * int_x + 0.02 * std::abs(2.0 * psi_m_eff * int_x) + 1e-12);
    const double lhs_xz = (last.x + last.z) - (first.x + first.z);
    CHECK(lhs_xz <= -2.0 * psi_m_eff * int_z + 0.02 * std::abs(2.0 * psi_m_eff * int_z) + 1e-12);
    CHECK(lhs_xz == doctest::Approx(-2.0 * int_zt).epsilon(0.01));

    // The perturbation stays mean-free along the trajectory.
    for (const auto& rec : records) {
        const auto target = ref.evaluate(rec.t, n);
        double mean = 0.0;
        for (int i = 0; i < n; ++i)
            mean += rec.state.weights[i] * (rec.state.positions[i] - target[i]);
        CHECK(std::abs(mean) <= 1e-9);
    }
}

TEST_CASE("multi-D Lyapunov functionals decay along a run") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    const int n = 16;
    std::vector<double> pos(2 * n), vel(2 * n), w(n, 1.0);
    for (double& v : pos) v = box(rng);
    for (double& v : vel) v = 0.5 * box(rng);
    const auto e0 = init_particles(pos, vel, w, 2);
    const auto quad = PotentialSpec::quadratic(1.0, 2);
    const auto kernel = KernelSpec::bounded_band(0.5, 2.0, 4.0);

    SimConfig cfg;
    cfg.t_final = 6.0;
    cfg.record_every = 5;
    DiagnosticsConfig diag;
    diag.mode = DiagnosticsConfig::Mode::multi_d;
    diag.zeta = 0.15;
    diag.xi = 0.4;
    const auto records = simulate(e0, cfg, quad, kernel, [&](const Ensemble& s) {
        return compute_frame(s, quad, kernel, nullptr, diag);
    });
    for (size_t k = 0; k + 1 < records.size(); ++k) {
        CHECK(records[k + 1].frame.e_zeta <= records[k].frame.e_zeta + 1e-8);
        CHECK(records[k + 1].frame.e_tilde_xi <= records[k].frame.e_tilde_xi + 1e-8);
        CHECK(records[k].frame.l_cal ==
              doctest::Approx(records[k].frame.x + records[k].frame.z));
    }
}

TEST_CASE("frame columns are stable") {
    CHECK(DiagnosticsFrame::columns().size() == 17);
    CHECK(DiagnosticsFrame::columns()[0] == "t");
    CHECK(DiagnosticsFrame{}.row().size() == DiagnosticsFrame::columns().size());
}
