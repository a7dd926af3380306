import math

import numpy as np
import pytest

import flocksim as fs


def test_kernel_basics():
    k = fs.Kernel.power_law(0.5, 1.0)
    assert k.psi(4.0) == pytest.approx(0.5)
    assert k.primitive(1.0) == pytest.approx(2.0)
    lo, hi = k.increment_bounds(1.5, 0.5, 4.0)
    assert lo == pytest.approx(0.5)
    assert hi == pytest.approx(2.0 * math.sqrt(2.0))
    with pytest.raises(fs.Error):
        k.psi(0.0)


def test_potential_basics():
    coulomb = fs.Potential.coulomb_quadratic_1d()
    assert coulomb.value(np.array([2.0])) == pytest.approx(0.0)
    assert coulomb.gradient(np.array([2.0]))[0] == pytest.approx(1.0)
    assert coulomb.convexity_moduli() is None
    quad = fs.Potential.quadratic(1.0, dim=2)
    assert quad.convexity_moduli() == (1.0, 1.0)


def test_two_body_run_conserves_momentum():
    e = fs.init_particles(np.array([-1.0, 1.0]), np.array([0.3, -0.2]), np.array([1.0, 1.0]))
    cfg = fs.SimConfig()
    cfg.t_final = 5.0
    result = fs.simulate(e, cfg, fs.Potential.quadratic(1.0), fs.Kernel.constant(1.0))
    final = result["final"]
    assert fs.mean_velocity(final)[0] == pytest.approx(0.05, abs=1e-9)
    d_eta = result["data"][:, result["columns"].index("D_eta")]
    assert d_eta[-1] < d_eta[0]


def test_coulomb_reference_and_omega():
    e = fs.sample_quantile_uniform(-0.5, 0.5, 8)
    ref = fs.reference_map(e, fs.Potential.coulomb_quadratic_1d())
    assert ref.kind == "coulomb_uniform"
    offsets = ref.offsets
    assert np.all(np.diff(offsets) > 0)
    assert offsets[0] == pytest.approx(-7.0 / 8.0)
    omega = fs.aux_omega(e, fs.Kernel.constant(1.0))
    assert omega.shape == (8,)


def test_wasserstein_values():
    e = fs.init_particles(np.array([0.0, 2.0]), np.zeros(2), np.ones(2))
    assert fs.wasserstein_to_dirac("2", e, 1.0) == pytest.approx(1.0)
    assert fs.wasserstein_to_dirac("inf", e, 1.0) == pytest.approx(1.0)
    two = fs.init_particles(np.array([-0.5, 0.5]), np.zeros(2), np.ones(2))
    d2 = fs.wasserstein_to_uniform("2", two, 0.0, 1.0)
    assert d2 * d2 == pytest.approx(1.0 / 12.0)


def test_rate_fits():
    t = np.linspace(0.0, 5.0, 40)
    y = np.exp(-2.0 * t)
    fit = fs.fit_exponential(t, y)
    assert fit.law == "exponential"
    assert fit.value == pytest.approx(2.0, abs=1e-9)
    t2 = np.linspace(10.0, 100.0, 50)
    fit2 = fs.fit_algebraic(t2, t2**-2.0)
    assert fit2.value == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(fs.Error):
        fs.classify_decay(t, np.ones_like(t))


def test_scenario_and_criterion():
    result = fs.run_scenario("twobody", t_final=2.0)
    assert result["data"].shape[1] == len(result["columns"])
    ok, text = fs.run_criterion(3)
    assert ok, text


def test_odi_oracle():
    sys = fs.OdiSystem()
    sys.kind = fs.OdiSystem.Kind.linear
    sys.c1, sys.c2 = 3.0, 2.0
    sys.lam, sys.Lam = 0.5, 0.6
    ok, text = fs.check_lemma(sys, t_final=20.0)
    assert ok, text
    run = fs.integrate_odi(sys, t_final=5.0)
    assert not run["exited"]
    assert np.all(np.diff(run["y"]) < 0)
    ok, measured, bound = fs.check_delta_game(kappa=1.0, alpha=0.5, c0=2.5)
    assert ok and measured <= bound
    assert fs.diameter_bound(2.0, 0.0, fs.Kernel.constant(1.0)) == pytest.approx(7.0)
