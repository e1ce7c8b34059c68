"""Worker-grid runner for the 2D solver: spatial domain decomposition with
one-cell halos over shared memory.

Each worker owns a rectangular block of spatial cells. A step is two
bulk-synchronous phases:

    phase A (after the step barrier): read the macro and micro rings
        (own block + one-cell halo, corners included) from the shared
        arrays, run the three-stage micro update, write the owned micro
        block and its heat-flux tensor;
    barrier;
    phase B: read the heat-flux ring, run the Strang-split macro update,
        write the owned macro block;
    barrier.

All per-cell arithmetic is identical to the serial step (the same kernels
on block slices), so runs are bit-reproducible and macro fields agree
across worker counts to machine precision. Physical faces are filled
locally by the owning worker with the boundary rules (wrap / copy / zero /
diffuse-wall ghosts); interior faces read the neighbor's cells.
"""

from __future__ import annotations

import math
import multiprocessing as mp
import time
import uuid
from dataclasses import dataclass
from multiprocessing import shared_memory

import numpy as np

from micromacro import _kernels as K
from micromacro.boundary import (EXTRAPOLATE, PERIODIC, BoundarySpec2D,
                                 WallSpec, _wall_maxwellian_layer,
                                 wall_ghost_state_2d)
from micromacro.errors import ConfigurationError
from micromacro.gas_state import CollisionModel, TempTensor2D, primitives_2d
from micromacro.macro2d import (kfvs_flux_2d_x, kfvs_flux_2d_y,
                                relax_pressure_2d)
from micromacro.mesh import PhaseMesh, cell_centers
from micromacro.micro2d import ghat_2d


# ---------------------------------------------------------------------------
# decomposition plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HaloPlan:
    """One worker's owned block and face neighbors (None = physical face,
    filled by boundary rules instead of a neighbor)."""

    rank: int
    grid: tuple[int, int]
    pos: tuple[int, int]
    i0: int
    i1: int
    j0: int
    j1: int
    neighbors: dict

    @property
    def shape(self):
        return (self.i1 - self.i0, self.j1 - self.j0)


def make_plans(nx, ny, grid, bc: BoundarySpec2D):
    rows, cols = grid
    if nx % rows != 0 or ny % cols != 0:
        raise ConfigurationError(
            f"worker grid {rows}x{cols} must divide the spatial grid "
            f"{nx}x{ny}")
    bx, by = nx // rows, ny // cols
    plans = []
    for r in range(rows):
        for c in range(cols):
            def nb(dr, dc):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    return rr * cols + cc
                if dr and bc.left == PERIODIC:
                    return (rr % rows) * cols + cc
                if dc and bc.bottom == PERIODIC:
                    return rr * cols + (cc % cols)
                return None
            plans.append(HaloPlan(
                rank=r * cols + c, grid=(rows, cols), pos=(r, c),
                i0=r * bx, i1=(r + 1) * bx, j0=c * by, j1=(c + 1) * by,
                neighbors={"left": nb(-1, 0), "right": nb(+1, 0),
                           "bottom": nb(0, -1), "top": nb(0, +1)}))
    return plans


def _face_mode(face, at_edge, ghost_index, n, wall_mode):
    """How to fill one ghost layer: ('idx', global_index) reads data (an
    interior neighbor or a periodic wrap), 'copy' duplicates the adjacent
    owned layer, 'zero' writes zeros."""
    if not at_edge:
        return ("idx", ghost_index)
    if face == PERIODIC:
        return ("idx", ghost_index % n)
    if face == EXTRAPOLATE:
        return ("copy", None)
    return (wall_mode, None)  # WallSpec face: 'copy' (macro) or 'zero'


def extract_ring(arr, plan: HaloPlan, bc: BoundarySpec2D, wall_mode):
    """The halo exchange: own block plus a one-cell ring (corners
    included) of a global (nx, ny, ...) array. Interior and periodic faces
    read the neighbor's boundary cells; physical faces are filled by the
    boundary rule (`wall_mode` is the diffuse-wall rule for this field:
    'copy' for macro fields, 'zero' for micro/heat fields)."""
    i0, i1, j0, j1 = plan.i0, plan.i1, plan.j0, plan.j1
    nx, ny = arr.shape[:2]
    b1, b2 = i1 - i0, j1 - j0
    ext = np.empty((b1 + 2, b2 + 2) + arr.shape[2:], dtype=arr.dtype)
    ext[1:-1, 1:-1] = arr[i0:i1, j0:j1]

    xlo = _face_mode(bc.left, i0 == 0, i0 - 1, nx, wall_mode)
    xhi = _face_mode(bc.right, i1 == nx, i1, nx, wall_mode)
    ylo = _face_mode(bc.bottom, j0 == 0, j0 - 1, ny, wall_mode)
    yhi = _face_mode(bc.top, j1 == ny, j1, ny, wall_mode)

    # x ghost columns over the owned y range
    for pos, inner, (mode, g) in ((0, 1, xlo), (-1, -2, xhi)):
        if mode == "idx":
            ext[pos, 1:-1] = arr[g, j0:j1]
        elif mode == "copy":
            ext[pos, 1:-1] = ext[inner, 1:-1]
        else:
            ext[pos, 1:-1] = 0.0
    # y ghost rows over the full extended x range (fills the corners)
    for pos, inner, (mode, g) in ((0, 1, ylo), (-1, -2, yhi)):
        if mode == "copy":
            ext[:, pos] = ext[:, inner]
            continue
        if mode == "zero":
            ext[:, pos] = 0.0
            continue
        ext[1:-1, pos] = arr[i0:i1, g]
        for cpos, cinner, (xmode, gx) in ((0, 1, xlo), (-1, -2, xhi)):
            if xmode == "idx":
                ext[cpos, pos] = arr[gx, g]
            elif xmode == "copy":
                ext[cpos, pos] = ext[cinner, pos]
            else:
                ext[cpos, pos] = 0.0
    return ext


# ---------------------------------------------------------------------------
# block step (both phases)
# ---------------------------------------------------------------------------

def _c(a):
    return np.ascontiguousarray(a)


def _physical_faces(plan, bc, nx, ny):
    return {"left": bc.left if plan.i0 == 0 else None,
            "right": bc.right if plan.i1 == nx else None,
            "bottom": bc.bottom if plan.j0 == 0 else None,
            "top": bc.top if plan.j1 == ny else None}


def _wall_ghost_prims(ext, edge_sel, wall, name):
    """Diffuse-wall ghost values for the six pressure-primitive fields,
    computed from the interior edge layer (mirrors the serial sweep)."""
    rho, u1, u2, p11, p12, p22 = (f[edge_sel] for f in ext)
    tt = TempTensor2D(p11 / rho, p12 / rho, p22 / rho)
    rw, g1, g2, t11, t12, t22 = wall_ghost_state_2d(rho, u1, u2, tt, wall,
                                                    name)
    return (rw, g1, g2, rw * t11, rw * t12, rw * t22)


class BlockStepper:
    """Per-worker state and the two step phases. Reads/writes the global
    shared arrays only inside the phases; synchronization is the caller's
    job."""

    def __init__(self, plan, bc, mesh: PhaseMesh, eps, model: CollisionModel,
                 dt):
        self.plan = plan
        self.bc = bc
        self.eps = eps
        self.model = model
        self.dt = dt
        self.dx = mesh.space[0].spacing
        self.dy = mesh.space[1].spacing
        self.nx = mesh.space[0].n
        self.ny = mesh.space[1].n
        self.v1 = cell_centers(mesh.velocity[0])
        self.v2 = cell_centers(mesh.velocity[1])
        self.faces = _physical_faces(plan, bc, self.nx, self.ny)
        self.wall_faces = [(name, f) for name, f in self.faces.items()
                           if isinstance(f, WallSpec)]

    # -- phase A: micro update + heat tensor --------------------------------

    def micro_phase(self, Q_glob, G_glob, G_out, H_out):
        plan, bc = self.plan, self.bc
        dt, eps, dx, dy = self.dt, self.eps, self.dx, self.dy
        v1, v2 = self.v1, self.v2
        Q_E = extract_ring(Q_glob, plan, bc, wall_mode="copy")
        G_E = extract_ring(G_glob, plan, bc, wall_mode="zero")
        rho_E, u1_E, u2_E, tt_E, T_E, _ = primitives_2d(Q_E)
        self._Q_E = Q_E  # reused by the macro phase
        rho_E, u1_E, u2_E, T_E = (_c(a) for a in (rho_E, u1_E, u2_E, T_E))
        M_E = K.maxwellian_field_2d(rho_E, u1_E, u2_E, T_E, v1, v2)

        own = (slice(1, -1), slice(1, -1))
        mid = (slice(1, -1), slice(None))
        rho, u1, u2, T = (_c(a[own]) for a in (rho_E, u1_E, u2_E, T_E))
        tau = np.array(np.broadcast_to(self.model.tau(rho, T), rho.shape),
                       dtype=float)

        # x-transport on the owned x range and the extended y range, so the
        # y-transport needs no mid-step exchange
        Gs_mid = K.transport_stage_2d(
            G_E, _c(M_E[mid]), _c(rho_E[mid]), _c(u1_E[mid]), _c(u2_E[mid]),
            _c(T_E[mid]), v1, v2, dx, dt, 0)
        for name, pos, inner in (("bottom", 0, 1), ("top", -1, -2)):
            face = self.faces[name]
            if face is None or face == PERIODIC:
                continue
            Gs_mid[:, pos] = (Gs_mid[:, inner] if face == EXTRAPOLATE
                              else 0.0)
        M_own = _c(M_E[own])
        Gss = K.transport_stage_2d(_c(Gs_mid), M_own, rho, u1, u2, T,
                                   v1, v2, dy, dt, 1)

        # closed-form collision target from halo-extended gradients
        s11 = ((u1_E[2:, 1:-1] - u1_E[:-2, 1:-1]) / (2.0 * dx)
               - (u2_E[1:-1, 2:] - u2_E[1:-1, :-2]) / (2.0 * dy))
        s12 = ((u1_E[1:-1, 2:] - u1_E[1:-1, :-2]) / (2.0 * dy)
               + (u2_E[2:, 1:-1] - u2_E[:-2, 1:-1]) / (2.0 * dx))
        gt1 = (T_E[2:, 1:-1] - T_E[:-2, 1:-1]) / (2.0 * dx)
        gt2 = (T_E[1:-1, 2:] - T_E[1:-1, :-2]) / (2.0 * dy)
        tt = TempTensor2D(tt_E.t11[own], tt_E.t12[own], tt_E.t22[own])
        Ghat = ghat_2d(rho, u1, u2, T, tt, bc, v1, v2, dx, dy, eps, tau,
                       self.model.nu, M_own,
                       grads=(_c(s11), _c(s12), _c(gt1), _c(gt2)))
        if self.wall_faces:
            self._ghat_wall_override(Ghat, M_E, rho, u1, u2, T, tt, tau)
        G_new = K.relax_2d(Gss, Ghat, tau, dt, eps)

        dv = (v1[1] - v1[0]) * (v2[1] - v2[0])
        H = K.heat_tensor_2d(_c(G_new), u1, u2, v1, v2, dv, eps)
        sel = (slice(plan.i0, plan.i1), slice(plan.j0, plan.j1))
        G_out[sel] = G_new
        for k in range(4):
            H_out[k][sel] = H[k]
        self._u_own = (u1, u2)

    def _ghat_wall_override(self, Ghat, M_E, rho, u1, u2, T, tt, tau):
        """Replace wall-adjacent strips of Ghat by the upwind
        ghost-Maxwellian form, using halo Maxwellians on interior faces and
        wall-emitted Maxwellians on the physical wall layers."""
        v1, v2 = self.v1, self.v2
        Mx = np.array(M_E[:, 1:-1])
        My = np.array(M_E[1:-1, :])
        layers = {"left": (Mx, 0, 0), "right": (Mx, -1, -1),
                  "bottom": (My, (slice(None), 0), 0),
                  "top": (My, (slice(None), -1), -1)}
        for name, wall in self.wall_faces:
            target, pos, edge = layers[name]
            if name in ("left", "right"):
                tte = TempTensor2D(tt.t11[edge], tt.t12[edge], tt.t22[edge])
                target[pos] = _wall_maxwellian_layer(
                    rho[edge], u1[edge], u2[edge], tte, wall, name, v1, v2)
            else:
                tte = TempTensor2D(tt.t11[:, edge], tt.t12[:, edge],
                                   tt.t22[:, edge])
                target[pos] = _wall_maxwellian_layer(
                    rho[:, edge], u1[:, edge], u2[:, edge], tte, wall, name,
                    v1, v2)
        M = _c(M_E[1:-1, 1:-1])
        vm1 = np.minimum(v1, 0.0)[None, None, :, None]
        vp1 = np.maximum(v1, 0.0)[None, None, :, None]
        vm2 = np.minimum(v2, 0.0)[None, None, None, :]
        vp2 = np.maximum(v2, 0.0)[None, None, None, :]
        Mterm = (vm1 * (Mx[2:] - M) + vp1 * (M - Mx[:-2])) / self.dx \
            + (vm2 * (My[:, 2:] - M) + vp2 * (M - My[:, :-2])) / self.dy
        dv = (v1[1] - v1[0]) * (v2[1] - v2[0])
        Pi = K.project_field_2d(_c(Mterm), M, rho, u1, u2, T, v1, v2, dv)
        override = -(Mterm - Pi) / tau[:, :, None, None]
        strips = {"left": (slice(0, 1), slice(None)),
                  "right": (slice(-1, None), slice(None)),
                  "bottom": (slice(None), slice(0, 1)),
                  "top": (slice(None), slice(-1, None))}
        for name, _ in self.wall_faces:
            sl = strips[name]
            Ghat[sl] = override[sl]

    # -- phase B: macro update ----------------------------------------------

    def macro_phase(self, H_glob, Q_out):
        plan, bc = self.plan, self.bc
        dt, dx, dy = self.dt, self.dx, self.dy
        H_E = [extract_ring(h, plan, bc, wall_mode="zero") for h in H_glob]
        Qs_E = relax_pressure_2d(self._Q_E, self.model, self.eps, dt)

        # x-sweep on the owned x range and the extended y range
        ext = list(self._prims(Qs_E))
        self._apply_wall_ghosts(ext, axis=0)
        F = kfvs_flux_2d_x(tuple(f[:-1] for f in ext),
                           tuple(f[1:] for f in ext))
        Qss_mid = Qs_E[1:-1] - (dt / dx) * (F[1:] - F[:-1])
        for comp, k in zip((3, 4, 5), (0, 1, 2)):   # H111, H112, H122
            Hh = 0.5 * (H_E[k][1:] + H_E[k][:-1])
            Qss_mid[..., comp] -= (dt / dx) * (Hh[1:] - Hh[:-1])

        # y-sweep on the owned block
        ext = list(self._prims(Qss_mid))
        self._apply_wall_ghosts(ext, axis=1)
        F = kfvs_flux_2d_y(tuple(f[:, :-1] for f in ext),
                           tuple(f[:, 1:] for f in ext))
        Qsss = Qss_mid[:, 1:-1] - (dt / dy) * (F[:, 1:] - F[:, :-1])
        for comp, k in zip((3, 4, 5), (1, 2, 3)):   # H112, H122, H222
            Hh = 0.5 * (H_E[k][1:-1, 1:] + H_E[k][1:-1, :-1])
            Qsss[..., comp] -= (dt / dy) * (Hh[:, 1:] - Hh[:, :-1])

        Q_new = relax_pressure_2d(Qsss, self.model, self.eps, dt)
        Q_out[plan.i0:plan.i1, plan.j0:plan.j1] = Q_new
        self._Q_E = None
        return Q_new

    @staticmethod
    def _prims(Q):
        rho, u1, u2, tt, T, _ = primitives_2d(Q)
        return (rho, u1, u2, rho * tt.t11, rho * tt.t12, rho * tt.t22)

    def _apply_wall_ghosts(self, ext, axis):
        """Overwrite physical diffuse-wall ghost layers of the extended
        pressure-primitive fields (ghost layers on interior / periodic /
        extrapolate faces are already correct)."""
        if axis == 0:
            entries = (("left", (0, slice(None)), (1, slice(None))),
                       ("right", (-1, slice(None)), (-2, slice(None))))
        else:
            entries = (("bottom", (slice(None), 0), (slice(None), 1)),
                       ("top", (slice(None), -1), (slice(None), -2)))
        for name, ghost_sel, edge_sel in entries:
            face = self.faces[name]
            if not isinstance(face, WallSpec):
                continue
            for arr, val in zip(ext, _wall_ghost_prims(ext, edge_sel, face,
                                                       name)):
                arr[ghost_sel] = val


# ---------------------------------------------------------------------------
# process orchestration
# ---------------------------------------------------------------------------

def _open_shared(name, shape):
    shm = shared_memory.SharedMemory(name=name)
    return shm, np.ndarray(shape, dtype=np.float64, buffer=shm.buf)


def _worker_main(rank, names, qshape, gshape, plan, bc, mesh, eps, model,
                 dt, n_steps, track_from, barrier, steady_shm_name, nworkers):
    handles = []
    try:
        arrays = {}
        for key, shape in (("Qa", qshape), ("Qb", qshape),
                           ("Ga", gshape), ("Gb", gshape)):
            shm, arr = _open_shared(names[key], shape)
            handles.append(shm)
            arrays[key] = arr
        hshape = (4,) + qshape[:2]
        shm, Hbuf = _open_shared(names["H"], hshape)
        handles.append(shm)
        shm, steady = _open_shared(steady_shm_name, (nworkers,))
        handles.append(shm)

        stepper = BlockStepper(plan, bc, mesh, eps, model, dt)
        Qbufs = (arrays["Qa"], arrays["Qb"])
        Gbufs = (arrays["Ga"], arrays["Gb"])
        own = (slice(plan.i0, plan.i1), slice(plan.j0, plan.j1))
        local_max = 0.0
        for n in range(n_steps):
            cur, nxt = n % 2, (n + 1) % 2
            stepper.micro_phase(Qbufs[cur], Gbufs[cur], Gbufs[nxt],
                                [Hbuf[k] for k in range(4)])
            barrier.wait()
            Q_new = stepper.macro_phase([Hbuf[k] for k in range(4)],
                                        Qbufs[nxt])
            if track_from is not None and n >= track_from:
                local_max = max(local_max,
                                float(np.max(np.abs(Q_new - Qbufs[cur][own]))))
            barrier.wait()
        steady[rank] = local_max
    except Exception:
        barrier.abort()
        raise
    finally:
        for shm in handles:
            shm.close()


def run_parallel_2d(mesh: PhaseMesh, bc: BoundarySpec2D, eps,
                    model: CollisionModel, Q0, G0, dt, n_steps,
                    grid=(2, 2), track_from=None):
    """Advance n_steps with a rows x cols worker grid; returns
    (Q, G, steady_max, seconds). steady_max is the largest per-step
    max-norm macro change over steps >= track_from (NaN if untracked)."""
    nx, ny = mesh.space[0].n, mesh.space[1].n
    nv1, nv2 = mesh.velocity[0].n, mesh.velocity[1].n
    plans = make_plans(nx, ny, grid, bc)
    nworkers = len(plans)
    qshape = (nx, ny, 6)
    gshape = (nx, ny, nv1, nv2)

    tag = uuid.uuid4().hex[:12]
    sizes = {"Qa": qshape, "Qb": qshape, "Ga": gshape, "Gb": gshape,
             "H": (4, nx, ny)}
    shms, names, views = {}, {}, {}
    steady_shm = None
    procs = []
    try:
        for key, shape in sizes.items():
            shm = shared_memory.SharedMemory(
                create=True, name=f"mm_{tag}_{key}",
                size=int(np.prod(shape)) * 8)
            shms[key] = shm
            names[key] = shm.name
            views[key] = np.ndarray(shape, dtype=np.float64, buffer=shm.buf)
        steady_shm = shared_memory.SharedMemory(
            create=True, name=f"mm_{tag}_s", size=max(nworkers, 1) * 8)
        steady = np.ndarray((nworkers,), dtype=np.float64,
                            buffer=steady_shm.buf)
        steady[:] = 0.0
        views["Qa"][:] = Q0
        views["Ga"][:] = G0

        ctx = mp.get_context("fork")
        barrier = ctx.Barrier(nworkers)
        t0 = time.perf_counter()
        for plan in plans:
            p = ctx.Process(
                target=_worker_main,
                args=(plan.rank, names, qshape, gshape, plan, bc, mesh, eps,
                      model, dt, n_steps, track_from, barrier,
                      steady_shm.name, nworkers))
            p.start()
            procs.append(p)
        for p in procs:
            p.join()
        seconds = time.perf_counter() - t0
        failed = [plan.rank for plan, p in zip(plans, procs)
                  if p.exitcode != 0]
        if failed:
            raise RuntimeError(
                f"worker-grid run aborted; failing worker ids: {failed}")
        final = n_steps % 2
        Q = np.array(views["Qa" if final == 0 else "Qb"])
        G = np.array(views["Ga" if final == 0 else "Gb"])
        steady_max = (float(np.max(steady)) if track_from is not None
                      else float("nan"))
        return Q, G, steady_max, seconds
    finally:
        for p in procs:
            if p.is_alive():
                p.terminate()
        for shm in shms.values():
            shm.close()
            shm.unlink()
        if steady_shm is not None:
            steady_shm.close()
            steady_shm.unlink()


def advance_parallel_2d(cfg, mesh, bc, eps, model, state,
                        track_steady=False):
    """cases.run_single_2d backend for worker grids other than 1x1;
    mirrors the serial _advance contract (frame capture at requested
    times, step cap, steady tracking over the last 10% of steps)."""
    from micromacro.mesh import plan_time
    from micromacro.runner.cases import RunRecord, frame_2d
    from micromacro.runner.loop import State2D

    plan = plan_time(cfg.t_final, cfg.cfl, mesh)
    n_steps = plan.n_steps
    if cfg.max_steps:
        n_steps = min(n_steps, cfg.max_steps)
    snap_steps = {}
    for ft in cfg.frame_times:
        snap_steps.setdefault(
            int(np.clip(round(ft / plan.dt), 1, n_steps)), ft)
    boundaries = sorted(set(snap_steps) | {n_steps})
    track_start = n_steps - max(1, int(math.ceil(0.1 * n_steps)))

    Q, G = np.array(state.Q), np.array(state.G)
    captured = []
    done = 0
    steady_max = 0.0
    seconds = 0.0
    for stop in boundaries:
        seg = stop - done
        if seg <= 0:
            continue
        track_from = None
        if track_steady and stop > track_start:
            track_from = max(0, track_start - done)
        Q, G, smax, secs = run_parallel_2d(
            mesh, bc, eps, model, Q, G, plan.dt, seg,
            grid=cfg.workers, track_from=track_from)
        seconds += secs
        if track_from is not None:
            steady_max = max(steady_max, smax)
        done = stop
        if stop in snap_steps:
            captured.append((snap_steps[stop],
                             frame_2d(State2D(t=stop * plan.dt, Q=Q, G=G),
                                      mesh, eps)))
    final_state = State2D(t=done * plan.dt, Q=Q, G=G)
    return RunRecord(state=final_state, plan=plan, seconds=seconds,
                     steps_run=done, frames=captured,
                     steady_max_change=steady_max if track_steady
                     else float("nan"))


__all__ = [
    "HaloPlan",
    "make_plans",
    "extract_ring",
    "BlockStepper",
    "run_parallel_2d",
    "advance_parallel_2d",
]
