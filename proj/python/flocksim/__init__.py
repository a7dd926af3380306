"""Particle simulator and decay-rate verification harness for nonlocal
alignment-aggregation dynamics."""

from ._core import (
    Ensemble,
    Error,
    Kernel,
    Potential,
    RateFit,
    ReferenceMap,
    SimConfig,
    __version__,
    accelerations,
    aux_omega,
    aux_omega_tilde,
    OdiSystem,
    admissibility_limits,
    bundled_scenarios,
    center_of_mass,
    check_delta_game,
    check_lemma,
    diameter_bound,
    integrate_odi,
    classify_decay,
    criterion_count,
    dissipation_energy,
    fit_algebraic,
    fit_exponential,
    init_particles,
    mean_velocity,
    reference_map,
    run_criterion,
    run_scenario,
    sample_quantile_uniform,
    simulate,
    wasserstein_2_to_dirac,
    wasserstein_to_atoms,
    wasserstein_to_dirac,
    wasserstein_to_uniform,
)

__all__ = [
    "Ensemble",
    "Error",
    "Kernel",
    "Potential",
    "RateFit",
    "ReferenceMap",
    "SimConfig",
    "__version__",
    "accelerations",
    "aux_omega",
    "aux_omega_tilde",
    "OdiSystem",
    "admissibility_limits",
    "bundled_scenarios",
    "center_of_mass",
    "check_delta_game",
    "check_lemma",
    "diameter_bound",
    "integrate_odi",
    "classify_decay",
    "criterion_count",
    "dissipation_energy",
    "fit_algebraic",
    "fit_exponential",
    "init_particles",
    "mean_velocity",
    "reference_map",
    "run_criterion",
    "run_scenario",
    "sample_quantile_uniform",
    "simulate",
    "wasserstein_2_to_dirac",
    "wasserstein_to_atoms",
    "wasserstein_to_dirac",
    "wasserstein_to_uniform",
]
