"""Serial time loops.

Per-step ordering is fixed by the scheme: the micro field is updated first
(it only needs macro data at t^n), the heat flux is taken from the updated
micro field, and the macro update then uses that t^{n+1} heat flux.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from micromacro import _kernels as K
from micromacro.gas_state import (CollisionModel, conserved_1d, conserved_2d,
                                  maxwellian_1d, primitives_1d, primitives_2d)
from micromacro.macro1d import heat_flux_1d, macro_step_1d
from micromacro.macro2d import heat_flux_tensor_2d, macro_step_2d
from micromacro.mesh import PhaseMesh, cell_centers, plan_time
from micromacro.micro1d import micro_step_1d
from micromacro.micro2d import micro_step_2d


@dataclass
class State1D:
    t: float
    Q: np.ndarray  # (nx, 3) conserved moments
    G: np.ndarray  # (nx, nv) micro field


def step_1d(state: State1D, mesh: PhaseMesh, bc, eps, model: CollisionModel,
            dt, micro_source=None, macro_source=None) -> State1D:
    """Advance one step: micro update, heat-flux moment, macro update.

    micro_source(t, x, v) returns the projected residual (I - Pi)[S];
    macro_source(t, x) returns the moment source <m S>; both evaluated at
    t^n (manufactured-solution runs only).
    """
    x = cell_centers(mesh.space[0])
    v = cell_centers(mesh.velocity[0])
    dx = mesh.space[0].spacing
    rho, u, T = primitives_1d(state.Q)
    tau = np.asarray(model.tau(rho, T), dtype=float)
    M = maxwellian_1d(rho[:, None], u[:, None], T[:, None], v[None, :])
    src = micro_source(state.t, x, v) if micro_source is not None else None
    G_new = micro_step_1d(state.G, rho, u, T, bc, v, dx, dt, eps, tau,
                          M=M, projected_source=src)
    H = heat_flux_1d(G_new, v, eps)
    qsrc = macro_source(state.t, x) if macro_source is not None else None
    Q_new = macro_step_1d(state.Q, H, bc, dx, dt, source=qsrc)
    return State1D(t=state.t + dt, Q=Q_new, G=G_new)


def run_1d(mesh: PhaseMesh, bc, eps, model: CollisionModel, rho0, u0, T0,
           G0, t_final, cfl, micro_source=None, macro_source=None,
           on_step=None):
    """Run from the primitive initial condition to t_final with a constant
    step chosen by plan_time; returns the final State1D.

    on_step(step_index, state) is called after every step.
    """
    plan = plan_time(t_final, cfl, mesh)
    state = State1D(t=0.0, Q=conserved_1d(rho0, u0, T0),
                    G=np.array(G0, dtype=float))
    for n in range(plan.n_steps):
        state = step_1d(state, mesh, bc, eps, model, plan.dt,
                        micro_source=micro_source, macro_source=macro_source)
        # land exactly on multiples of dt (guard against drift)
        state.t = (n + 1) * plan.dt
        if on_step is not None:
            on_step(n, state)
    return state, plan


@dataclass
class State2D:
    t: float
    Q: np.ndarray  # (nx, ny, 6) conserved moments
    G: np.ndarray  # (nx, ny, nv1, nv2) micro field


def step_2d(state: State2D, mesh: PhaseMesh, bc, eps, model: CollisionModel,
            dt, micro_source=None, macro_source=None) -> State2D:
    """Advance one step: split micro update, heat-tensor moment (with the
    t^n velocity), Strang-split macro update.

    micro_source(t, x, y, v1, v2) returns the low-rank (coeffs, shapes)
    factors of the projected residual (I - Pi)[S]; macro_source(t, x, y)
    returns the (nx, ny, 6) moment source; both evaluated at t^n
    (manufactured-solution runs only).
    """
    x = cell_centers(mesh.space[0])
    y = cell_centers(mesh.space[1])
    v1 = cell_centers(mesh.velocity[0])
    v2 = cell_centers(mesh.velocity[1])
    dx = mesh.space[0].spacing
    dy = mesh.space[1].spacing
    rho, u1, u2, tt, T, _ = primitives_2d(state.Q)
    tau = np.asarray(model.tau(rho, T), dtype=float)
    M = K.maxwellian_field_2d(np.ascontiguousarray(rho),
                              np.ascontiguousarray(u1),
                              np.ascontiguousarray(u2),
                              np.ascontiguousarray(T), v1, v2)
    src = (micro_source(state.t, x, y, v1, v2)
           if micro_source is not None else None)
    G_new = micro_step_2d(state.G, rho, u1, u2, T, tt, bc, v1, v2, dx, dy,
                          dt, eps, tau, model.nu, M=M, projected_source=src)
    H = heat_flux_tensor_2d(G_new, u1, u2, v1, v2, eps)
    qsrc = macro_source(state.t, x, y) if macro_source is not None else None
    Q_new = macro_step_2d(state.Q, H, bc, dx, dy, dt, eps, model, source=qsrc)
    return State2D(t=state.t + dt, Q=Q_new, G=G_new)


def run_2d(mesh: PhaseMesh, bc, eps, model: CollisionModel, rho0, u10, u20,
           t11_0, t12_0, t22_0, G0, t_final, cfl, micro_source=None,
           macro_source=None, on_step=None):
    """Run from the primitive initial condition to t_final with a constant
    step chosen by plan_time; returns (final State2D, TimePlan)."""
    plan = plan_time(t_final, cfl, mesh)
    state = State2D(t=0.0,
                    Q=conserved_2d(rho0, u10, u20, t11_0, t12_0, t22_0),
                    G=np.array(G0, dtype=float))
    for n in range(plan.n_steps):
        state = step_2d(state, mesh, bc, eps, model, plan.dt,
                        micro_source=micro_source, macro_source=macro_source)
        state.t = (n + 1) * plan.dt
        if on_step is not None:
            on_step(n, state)
    return state, plan


__all__ = ["State1D", "step_1d", "run_1d", "State2D", "step_2d", "run_2d"]
