"""Case registry and run orchestration.

Every case builds a mesh/boundary/model triple and an initial condition,
advances it with the serial loop (or the worker-grid runner for 2D when
more than one worker is requested), and serializes frames, sweep tables,
convergence tables and a summary record into the output directory.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from micromacro import mms
from micromacro._kernels import backend_name
from micromacro.boundary import (EXTRAPOLATE, PERIODIC, BoundarySpec1D,
                                 BoundarySpec2D, WallSpec)
from micromacro.errors import ConfigurationError
from micromacro.gas_state import CollisionModel, conserved_1d, conserved_2d
from micromacro.macro1d import heat_flux_1d
from micromacro.macro2d import heat_flux_tensor_2d
from micromacro.mesh import Axis, PhaseMesh, cell_centers, plan_time
from micromacro.runner import frames as fr
from micromacro.runner.config import CaseConfig
from micromacro.runner.loop import State1D, State2D, step_1d, step_2d

TAU_HS_1D_EXACT = 3.2 * math.sqrt(mms.T_EXACT_1D / (2.0 * math.pi))


# ---------------------------------------------------------------------------
# reference configurations
# ---------------------------------------------------------------------------

def default_config(case: str) -> CaseConfig:
    """The reference configuration for each registered case."""
    if case == "mms1d":
        return CaseConfig(
            case=case, dim=1, x_min=0.0, x_max=1.0, nx=10,
            v_min=-6.5, v_max=6.5, nv=10, epsilon=0.1,
            tau_model="hard_sphere_1d", cfl=0.95, t_final=0.9351,
            bc_left="periodic", bc_right="periodic", mms_levels=5)
    if case == "shocktube":
        return CaseConfig(
            case=case, dim=1, x_min=-0.25, x_max=1.25, nx=768,
            v_min=-4.5, v_max=4.5, nv=128,
            epsilon=0.1, epsilons=(0.1, 0.01, 0.001),
            tau_model="hard_sphere_1d", cfl=0.991, t_final=0.16,
            bc_left="extrapolate", bc_right="extrapolate")
    if case == "heat_transfer":
        return CaseConfig(
            case=case, dim=1, x_min=0.0, x_max=1.0, nx=129,
            v_min=-6.0, v_max=6.0, nv=129, epsilon=1e-2,
            tau_model="pressure_1d", cfl=0.95, t_final=100.0,
            bc_left="wall", bc_right="wall", T_left=1.0, T_right=1.2,
            micro_x=(0.5,))
    if case == "knudsen_sweep":
        eps = tuple(float(e) for e in np.logspace(-2.0, 2.0, 15))
        return replace(default_config("heat_transfer"), case=case,
                       epsilons=eps)
    if case == "mms2d":
        return CaseConfig(
            case=case, dim=2, x_min=0.0, x_max=1.0, nx=20,
            y_min=0.0, y_max=1.0, ny=20,
            v1_min=-5.0, v1_max=5.0, nv1=20,
            v2_min=-5.0, v2_max=5.0, nv2=20,
            epsilon=0.08, nu=0.0, tau_model="bgk_2d",
            cfl=0.926, t_final=0.25, mms_levels=3)
    if case == "lid_cavity":
        return CaseConfig(
            case=case, dim=2, x_min=0.0, x_max=1.0, nx=120,
            y_min=0.0, y_max=1.0, ny=120,
            v1_min=-5.0, v1_max=5.0, nv1=14,
            v2_min=-5.0, v2_max=5.0, nv2=14,
            epsilon=0.08, nu=-1.0, tau_model="esbgk_2d",
            cfl=0.95, t_final=3.0,
            bc_left="wall", bc_right="wall", bc_bottom="wall", bc_top="wall",
            T_wall=1.0, U_lid=0.16)
    if case == "custom":
        return CaseConfig(case=case)
    raise ConfigurationError(f"unknown case {case!r}")


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def mesh_from_config(cfg: CaseConfig) -> PhaseMesh:
    if cfg.dim == 1:
        return PhaseMesh(space=(Axis(cfg.x_min, cfg.x_max, cfg.nx),),
                         velocity=(Axis(cfg.v_min, cfg.v_max, cfg.nv),))
    return PhaseMesh(
        space=(Axis(cfg.x_min, cfg.x_max, cfg.nx),
               Axis(cfg.y_min, cfg.y_max, cfg.ny)),
        velocity=(Axis(cfg.v1_min, cfg.v1_max, cfg.nv1),
                  Axis(cfg.v2_min, cfg.v2_max, cfg.nv2)))


def model_from_config(cfg: CaseConfig) -> CollisionModel:
    return CollisionModel(kind=cfg.tau_model, nu=cfg.nu, value=cfg.tau_value)


def _face(kind, temperature, velocity=0.0):
    if kind == "periodic":
        return PERIODIC
    if kind == "extrapolate":
        return EXTRAPOLATE
    return WallSpec(temperature=temperature, velocity=velocity)


def bc_from_config(cfg: CaseConfig):
    if cfg.dim == 1:
        return BoundarySpec1D(left=_face(cfg.bc_left, cfg.T_left),
                              right=_face(cfg.bc_right, cfg.T_right))
    # the lid is the top face and slides in +x
    return BoundarySpec2D(left=_face(cfg.bc_left, cfg.T_wall),
                          right=_face(cfg.bc_right, cfg.T_wall),
                          bottom=_face(cfg.bc_bottom, cfg.T_wall),
                          top=_face(cfg.bc_top, cfg.T_wall, cfg.U_lid))


def initial_state_1d(cfg: CaseConfig, mesh: PhaseMesh) -> State1D:
    x = cell_centers(mesh.space[0])
    nv = mesh.velocity[0].n
    if cfg.case == "shocktube":
        rho = np.where(x < 0.5, 1.0, 0.125)
        T = np.where(x < 0.5, 1.0, 0.8)
    else:
        rho = np.ones_like(x)
        T = np.ones_like(x)
    u = np.zeros_like(x)
    return State1D(t=0.0, Q=conserved_1d(rho, u, T),
                   G=np.zeros((mesh.space[0].n, nv)))


def initial_state_2d(cfg: CaseConfig, mesh: PhaseMesh) -> State2D:
    nx, ny = mesh.space[0].n, mesh.space[1].n
    ones = np.ones((nx, ny))
    zeros = np.zeros((nx, ny))
    Q = conserved_2d(ones, zeros, zeros, ones, zeros, ones)
    G = np.zeros((nx, ny, mesh.velocity[0].n, mesh.velocity[1].n))
    return State2D(t=0.0, Q=Q, G=G)


# ---------------------------------------------------------------------------
# frame assembly
# ---------------------------------------------------------------------------

def frame_1d(state: State1D, mesh: PhaseMesh, eps, micro_x=()) -> fr.Frame:
    v = cell_centers(mesh.velocity[0])
    H = heat_flux_1d(state.G, v, eps)
    data = fr.grids_to_records(
        [state.Q[:, 0], state.Q[:, 1], state.Q[:, 2], H])
    micro = {}
    x_axis = mesh.space[0]
    for xpos in micro_x:
        i = int(np.clip(round((xpos - x_axis.min) / x_axis.spacing - 0.5),
                        0, x_axis.n - 1))
        micro[f"g_x{xpos:g}"] = state.G[i].copy()
    return fr.Frame(time=state.t, dims=(x_axis.n,), fields=fr.FIELDS_1D,
                    data=data, micro=micro)


def frame_2d(state: State2D, mesh: PhaseMesh, eps) -> fr.Frame:
    from micromacro.gas_state import primitives_2d
    v1 = cell_centers(mesh.velocity[0])
    v2 = cell_centers(mesh.velocity[1])
    _, u1, u2, _, _, _ = primitives_2d(state.Q)
    H = heat_flux_tensor_2d(state.G, u1, u2, v1, v2, eps)
    grids = [state.Q[..., k] for k in range(6)] + list(H)
    return fr.Frame(time=state.t,
                    dims=(mesh.space[0].n, mesh.space[1].n),
                    fields=fr.FIELDS_2D, data=fr.grids_to_records(grids))


def totals(Q, cell_volume):
    """Spatially integrated conserved moments."""
    return tuple(float(v) for v in Q.reshape(-1, Q.shape[-1]).sum(axis=0)
                 * cell_volume)


# ---------------------------------------------------------------------------
# single runs
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    state: object
    plan: object
    seconds: float
    steps_run: int
    frames: list = field(default_factory=list)   # (time, Frame-ready state)
    steady_max_change: float = float("nan")


def _advance(cfg: CaseConfig, mesh, bc, eps, model, state, stepper,
             micro_source=None, macro_source=None, snapshot=None,
             track_steady=False):
    """Common fixed-step time loop with frame capture at requested times,
    an optional step cap, and steady-state change tracking over the last
    10% of steps."""
    plan = plan_time(cfg.t_final, cfg.cfl, mesh)
    n_steps = plan.n_steps
    if cfg.max_steps:
        n_steps = min(n_steps, cfg.max_steps)
    snap_steps = {}
    for ft in cfg.frame_times:
        snap_steps.setdefault(
            int(np.clip(round(ft / plan.dt), 1, n_steps)), ft)
    captured = []
    steady_window = max(1, int(math.ceil(0.1 * n_steps)))
    steady_max = 0.0
    t0 = time.perf_counter()
    for n in range(n_steps):
        prev_Q = state.Q
        state = stepper(state, mesh, bc, eps, model, plan.dt,
                        micro_source=micro_source, macro_source=macro_source)
        state.t = (n + 1) * plan.dt
        if track_steady and n >= n_steps - steady_window:
            steady_max = max(steady_max,
                             float(np.max(np.abs(state.Q - prev_Q))))
        if snapshot is not None and (n + 1) in snap_steps:
            captured.append((snap_steps[n + 1], snapshot(state)))
    seconds = time.perf_counter() - t0
    return RunRecord(state=state, plan=plan, seconds=seconds,
                     steps_run=n_steps, frames=captured,
                     steady_max_change=steady_max if track_steady
                     else float("nan"))


def run_single_1d(cfg: CaseConfig, eps: float) -> RunRecord:
    mesh = mesh_from_config(cfg)
    bc = bc_from_config(cfg)
    model = model_from_config(cfg)
    state = initial_state_1d(cfg, mesh)
    return _advance(cfg, mesh, bc, eps, model, state, step_1d,
                    snapshot=lambda s: frame_1d(s, mesh, eps,
                                                micro_x=cfg.micro_x))


def run_single_2d(cfg: CaseConfig, eps: float,
                  track_steady: bool = False) -> RunRecord:
    mesh = mesh_from_config(cfg)
    bc = bc_from_config(cfg)
    model = model_from_config(cfg)
    state = initial_state_2d(cfg, mesh)
    if cfg.workers != (1, 1):
        from micromacro.runner.parallel import advance_parallel_2d
        return advance_parallel_2d(cfg, mesh, bc, eps, model, state,
                                   track_steady=track_steady)
    return _advance(cfg, mesh, bc, eps, model, state, step_2d,
                    snapshot=lambda s: frame_2d(s, mesh, eps),
                    track_steady=track_steady)


# ---------------------------------------------------------------------------
# manufactured-solution convergence studies
# ---------------------------------------------------------------------------

def mms_run_1d(n: int, eps: float = 0.1, cfl: float = 0.95,
               t_final: float = 0.9351):
    """One 1D manufactured-solution run at resolution n = nx = nv;
    returns (macro_error, micro_error)."""
    mesh = PhaseMesh(space=(Axis(0.0, 1.0, n),),
                     velocity=(Axis(-6.5, 6.5, n),))
    bc = BoundarySpec1D(PERIODIC, PERIODIC)
    model = CollisionModel(kind="hard_sphere_1d")
    x = cell_centers(mesh.space[0])
    v = cell_centers(mesh.velocity[0])
    rho0, u0, T0 = mms.exact_macro_1d(0.0, x)
    state = State1D(t=0.0, Q=conserved_1d(rho0, u0, T0),
                    G=mms.exact_micro_1d(0.0, x, v, eps))
    plan = plan_time(t_final, cfl, mesh)
    for n_step in range(plan.n_steps):
        state = step_1d(
            state, mesh, bc, eps, model, plan.dt,
            micro_source=lambda t, xx, vv: mms.projected_source_1d(
                t, xx, vv, eps, TAU_HS_1D_EXACT),
            macro_source=mms.macro_source_1d)
        state.t = (n_step + 1) * plan.dt
    Q_exact = conserved_1d(*mms.exact_macro_1d(t_final, x))
    G_exact = mms.exact_micro_1d(t_final, x, v, eps)
    return (mms.relative_l2(state.Q, Q_exact),
            mms.relative_l2(state.G, G_exact))


def mms_run_2d(n: int, eps: float = 0.08, cfl: float = 0.926,
               t_final: float = 0.25):
    """One 2D manufactured-solution run at resolution n (all four axes);
    returns (macro_error, micro_error)."""
    mesh = PhaseMesh(space=(Axis(0.0, 1.0, n), Axis(0.0, 1.0, n)),
                     velocity=(Axis(-5.0, 5.0, n), Axis(-5.0, 5.0, n)))
    bc = BoundarySpec2D(PERIODIC, PERIODIC, PERIODIC, PERIODIC)
    model = CollisionModel(kind="bgk_2d", nu=0.0)
    x = cell_centers(mesh.space[0])
    y = cell_centers(mesh.space[1])
    v1 = cell_centers(mesh.velocity[0])
    v2 = cell_centers(mesh.velocity[1])
    rho0, u10, u20, p11, p12, p22 = mms.exact_macro_2d(0.0, x, y)
    state = State2D(
        t=0.0,
        Q=conserved_2d(rho0, u10, u20, p11 / rho0, p12 / rho0, p22 / rho0),
        G=mms.exact_micro_2d(0.0, x, y, v1, v2))

    def micro_source(t, xx, yy, vv1, vv2):
        rho_e = np.pi * mms.psi_2d(t, xx[:, None], yy[None, :])
        tau_e = model.tau(rho_e, 0.5)
        return mms.projected_source_terms_2d(t, xx, yy, vv1, vv2, eps, tau_e)

    plan = plan_time(t_final, cfl, mesh)
    for n_step in range(plan.n_steps):
        state = step_2d(
            state, mesh, bc, eps, model, plan.dt,
            micro_source=micro_source,
            macro_source=lambda t, xx, yy: mms.macro_source_2d(t, xx, yy, eps))
        state.t = (n_step + 1) * plan.dt
    rho, u1, u2, p11, p12, p22 = mms.exact_macro_2d(t_final, x, y)
    Q_exact = conserved_2d(rho, u1, u2, p11 / rho, p12 / rho, p22 / rho)
    G_exact = mms.exact_micro_2d(t_final, x, y, v1, v2)
    return (mms.relative_l2(state.Q, Q_exact),
            mms.relative_l2(state.G, G_exact))


def mms_convergence(dim: int, levels: int, progress=None):
    """Doubling refinement study; returns the convergence-table rows."""
    base = 10 if dim == 1 else 20
    runner = mms_run_1d if dim == 1 else mms_run_2d
    resolutions = [base * 2 ** k for k in range(levels)]
    macro_errors, micro_errors = [], []
    for n in resolutions:
        me, ge = runner(n)
        macro_errors.append(me)
        micro_errors.append(ge)
        if progress is not None:
            progress(n, me, ge)
    return mms.convergence_table(resolutions, macro_errors, micro_errors)


# ---------------------------------------------------------------------------
# case orchestration
# ---------------------------------------------------------------------------

@dataclass
class CaseResult:
    files: list
    summary: dict


def _eps_tag(eps: float) -> str:
    return f"{eps:.6g}"


def _base_summary(cfg, eps, rec, mesh):
    vol = np.prod([ax.spacing for ax in mesh.space])
    tot0 = totals(
        (initial_state_1d if cfg.dim == 1 else initial_state_2d)(cfg, mesh).Q,
        vol)
    tot1 = totals(rec.state.Q, vol)
    entries = {
        "case": cfg.case,
        "backend": backend_name,
        "epsilon": float(eps),
        "dim": cfg.dim,
        "nx": cfg.nx,
        "dt": rec.plan.dt,
        "n_steps": rec.steps_run,
        "cfl_effective": rec.plan.cfl_effective,
        "t_final": rec.state.t,
        "seconds": rec.seconds,
        "workers": f"{cfg.workers[0]}x{cfg.workers[1]}",
    }
    if cfg.dim == 1:
        entries.update(nv=cfg.nv, v_min=cfg.v_min, v_max=cfg.v_max)
    else:
        entries.update(ny=cfg.ny, nv1=cfg.nv1, nv2=cfg.nv2,
                       v1_min=cfg.v1_min, v1_max=cfg.v1_max,
                       v2_min=cfg.v2_min, v2_max=cfg.v2_max)
    for k, (a, b) in enumerate(zip(tot0, tot1)):
        entries[f"total_initial_{k}"] = a
        entries[f"total_final_{k}"] = b
    entries["mass_drift"] = tot1[0] - tot0[0]
    if not math.isnan(rec.steady_max_change):
        entries["steady_max_change"] = rec.steady_max_change
    return entries


def run_case(cfg: CaseConfig, output_dir=None, progress=None) -> CaseResult:
    """Run one configured case and write all artifacts to the output
    directory; returns the file list and the (last) summary record."""
    outdir = Path(output_dir if output_dir is not None else cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    summary = {}

    def emit_frame(name, frame):
        path = outdir / name
        fr.write_frame(frame, path)
        files.append(path)

    def emit_summary(name, entries):
        path = outdir / name
        fr.write_summary(path, entries)
        files.append(path)

    if cfg.case in ("mms1d", "mms2d"):
        rows = mms_convergence(cfg.dim, cfg.mms_levels, progress=progress)
        path = outdir / f"convergence_{cfg.case}.txt"
        mms.write_convergence_table(rows, path)
        files.append(path)
        summary = {"case": cfg.case, "levels": cfg.mms_levels,
                   "finest_macro_error": rows[-1][1],
                   "finest_micro_error": rows[-1][3]}
        emit_summary(f"summary_{cfg.case}.txt", summary)
        return CaseResult(files=files, summary=summary)

    eps_list = cfg.epsilons if cfg.epsilons else (cfg.epsilon,)
    mesh = mesh_from_config(cfg)

    if cfg.dim == 1:
        sweep_rows = []
        for eps in eps_list:
            rec = run_single_1d(cfg, eps)
            tag = _eps_tag(eps)
            for ft, frame in rec.frames:
                emit_frame(f"{cfg.case}_eps{tag}_t{ft:g}.txt", frame)
            final = frame_1d(rec.state, mesh, eps, micro_x=cfg.micro_x)
            emit_frame(f"{cfg.case}_eps{tag}_final.txt", final)
            summary = _base_summary(cfg, eps, rec, mesh)
            if cfg.case in ("heat_transfer", "knudsen_sweep"):
                heat = final.field_grid("heat")
                i_mid = int(np.argmin(np.abs(
                    cell_centers(mesh.space[0]) - 0.5)))
                h_scaled = abs(heat[i_mid]) / eps
                summary["h_scaled_center"] = h_scaled
                sweep_rows.append((eps, h_scaled))
            emit_summary(f"summary_{cfg.case}_eps{tag}.txt", summary)
            if progress is not None:
                progress(eps, rec.seconds)
        if cfg.case == "knudsen_sweep":
            path = outdir / "sweep.txt"
            fr.write_table(path, "epsilon h_scaled", sweep_rows)
            files.append(path)
        return CaseResult(files=files, summary=summary)

    # 2D single-epsilon cases
    eps = eps_list[0]
    rec = run_single_2d(cfg, eps, track_steady=(cfg.case == "lid_cavity"))
    for ft, frame in rec.frames:
        emit_frame(f"{cfg.case}_t{ft:g}.txt", frame)
    emit_frame(f"{cfg.case}_final.txt", frame_2d(rec.state, mesh, eps))
    summary = _base_summary(cfg, eps, rec, mesh)
    emit_summary(f"summary_{cfg.case}.txt", summary)
    return CaseResult(files=files, summary=summary)


__all__ = [
    "TAU_HS_1D_EXACT",
    "default_config",
    "mesh_from_config",
    "model_from_config",
    "bc_from_config",
    "initial_state_1d",
    "initial_state_2d",
    "frame_1d",
    "frame_2d",
    "totals",
    "RunRecord",
    "run_single_1d",
    "run_single_2d",
    "mms_run_1d",
    "mms_run_2d",
    "mms_convergence",
    "CaseResult",
    "run_case",
]
