"""Kinetic-fluid hydrodynamic-limit laboratory: python bindings."""

from ._core import (
    ConfigError,
    StepSizeError,
    h_minus1_norm,
    leray_project,
    maxwellian,
    moments,
    run_from_config,
    sobolev_norm,
    solve_poisson,
    stiff_ou_step,
)

__all__ = [
    "ConfigError",
    "StepSizeError",
    "h_minus1_norm",
    "leray_project",
    "maxwellian",
    "moments",
    "run_from_config",
    "sobolev_norm",
    "solve_poisson",
    "stiff_ou_step",
]
