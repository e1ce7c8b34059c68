"""Uniform cell-centered meshes in space and velocity, and global time-step
planning.

All meshes are immutable after construction; velocity grids never change
during a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from micromacro.errors import ConfigurationError


@dataclass(frozen=True)
class Axis:
    """One uniform, cell-centered coordinate axis."""

    min: float
    max: float
    n: int

    def __post_init__(self):
        if not self.max > self.min:
            raise ConfigurationError(f"axis needs max > min, got [{self.min}, {self.max}]")
        if self.n < 1:
            raise ConfigurationError(f"axis needs n >= 1, got {self.n}")

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / self.n

    def center(self, i: int) -> float:
        """Cell center for 1-based index i in [1, n]."""
        return self.min + (i - 0.5) * self.spacing

    @property
    def vmax_abs(self) -> float:
        """Largest coordinate magnitude; the max transport speed on a
        velocity axis."""
        return max(abs(self.min), abs(self.max))


def cell_centers(axis: Axis) -> np.ndarray:
    """All cell centers in ascending order."""
    return axis.min + (np.arange(1, axis.n + 1) - 0.5) * axis.spacing


@dataclass(frozen=True)
class PhaseMesh:
    """Space x velocity mesh; 1D1V or 2D2V depending on axis counts."""

    space: tuple[Axis, ...]
    velocity: tuple[Axis, ...]

    def __post_init__(self):
        if len(self.space) != len(self.velocity):
            raise ConfigurationError("space and velocity dimensionality must match")
        if len(self.space) not in (1, 2):
            raise ConfigurationError("only 1D1V and 2D2V meshes are supported")

    @property
    def dim(self) -> int:
        return len(self.space)

    @property
    def tag(self) -> str:
        return "1D1V" if self.dim == 1 else "2D2V"


@dataclass(frozen=True)
class TimePlan:
    dt: float
    n_steps: int
    cfl_effective: float
    t_final: float


def plan_time(t_final: float, cfl_request: float, mesh: PhaseMesh) -> TimePlan:
    """Pick the global constant time step.

    The provisional dt from the requested CFL is shrunk so that an integer
    number of steps lands exactly on t_final, and the effective CFL is
    recomputed from the final dt.
    """
    if t_final <= 0:
        raise ConfigurationError(f"t_final must be positive, got {t_final}")
    if not 0 < cfl_request < 1:
        raise ConfigurationError(f"CFL must lie in (0, 1), got {cfl_request}")

    ratios = [sx.spacing / vx.vmax_abs for sx, vx in zip(mesh.space, mesh.velocity)]
    dt0 = cfl_request * min(ratios)
    n_steps = math.ceil(t_final / dt0)
    dt = t_final / n_steps
    cfl_effective = max(dt / r for r in ratios)
    return TimePlan(dt=dt, n_steps=n_steps, cfl_effective=cfl_effective, t_final=t_final)
