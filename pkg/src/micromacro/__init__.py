"""Micro-macro finite-volume solver for BGK / ES-BGK kinetic equations."""

from micromacro.errors import ConfigurationError, InvalidStateError
from micromacro.mesh import Axis, PhaseMesh, TimePlan, cell_centers, plan_time

__all__ = [
    "Axis",
    "PhaseMesh",
    "TimePlan",
    "cell_centers",
    "plan_time",
    "ConfigurationError",
    "InvalidStateError",
]

__version__ = "0.1.0"
