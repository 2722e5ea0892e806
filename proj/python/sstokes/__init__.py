"""Finite element schemes and Monte Carlo convergence studies for the
stochastic Stokes equations."""

from ._core import (
    WienerPath,
    fit_orders,
    preset_defaults,
    run_experiment,
    simulate,
    structured_mesh,
    validate,
    __version__,
)

__all__ = [
    "WienerPath",
    "fit_orders",
    "preset_defaults",
    "run_experiment",
    "simulate",
    "structured_mesh",
    "validate",
    "__version__",
]
