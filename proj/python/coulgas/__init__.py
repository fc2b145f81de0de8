"""Numerical laboratory for log and Coulomb gases (Python bindings)."""

from ._core import (
    CapabilityError,
    ConfigError,
    NumericError,
    equilibrium_summary,
    expansion_fit,
    fluct_linear,
    hamiltonian,
    jellium_energy,
    kernel_eval,
    lattice_scan,
    logz_closed_form,
    logz_estimate_ti,
    mcmc_sample,
    next_order_energy,
    run_acceptance,
    run_experiment,
    sample_beta_tridiag,
    sample_ginibre,
    splitting_residual,
    variance_prediction,
)

__all__ = [
    "CapabilityError",
    "ConfigError",
    "NumericError",
    "equilibrium_summary",
    "expansion_fit",
    "fluct_linear",
    "hamiltonian",
    "jellium_energy",
    "kernel_eval",
    "lattice_scan",
    "logz_closed_form",
    "logz_estimate_ti",
    "mcmc_sample",
    "next_order_energy",
    "run_acceptance",
    "run_experiment",
    "sample_beta_tridiag",
    "sample_ginibre",
    "splitting_residual",
    "variance_prediction",
]

__version__ = "1.0.0"
