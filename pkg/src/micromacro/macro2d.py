"""One time step of the 2D 6-moment macroscopic system via Strang
splitting: an implicit TR-BDF2 half-step of the pressure-tensor relaxation,
an x-direction KFVS finite-volume sweep, a y-direction sweep, and a second
relaxation half-step. The micro-supplied heat-flux tensor enters the sweeps
as interface-averaged sources on the energy-tensor components.

State layout: Q = (rho, rho*u1, rho*u2, E11, E12, E22) with
E_ab = rho*u_a*u_b + P_ab.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf

from micromacro import _kernels as K
from micromacro.boundary import (EXTRAPOLATE, PERIODIC, BoundarySpec2D,
                                 interface_heat_2d, wall_ghost_state_2d)
from micromacro.gas_state import (CollisionModel, TempTensor2D,
                                  primitives_2d)


def heat_flux_tensor_2d(G, u1, u2, v1, v2, eps):
    """(H111, H112, H122, H222) = eps dv1 dv2 sum (v-u)^3-moments of G;
    u is the macro velocity at t^n."""
    dv = (v1[1] - v1[0]) * (v2[1] - v2[0])
    return K.heat_tensor_2d(np.ascontiguousarray(G),
                            np.ascontiguousarray(u1),
                            np.ascontiguousarray(u2), v1, v2, dv, eps)


def heat_flux_vector_2d(h111, h112, h122, h222):
    """h = (1/2)(H111 + H122, H112 + H222)."""
    return 0.5 * (h111 + h122), 0.5 * (h112 + h222)


# ---------------------------------------------------------------------------
# TR-BDF2 pressure relaxation
# ---------------------------------------------------------------------------

def trbdf2_w(tau, nu, eps, dt):
    """Amplification factor of the L-stable TR-BDF2 discretization of the
    pressure-relaxation half-step:

        W = (48 eps^2 - 10 z eps) / (48 eps^2 + 14 z eps + z^2),
        z = tau (1 - nu) dt.

    W(dt=0) = 1 and |W| <= 1 for every z >= 0.
    """
    z = np.asarray(tau, dtype=float) * (1.0 - nu) * dt
    e2 = 48.0 * eps * eps
    return (e2 - 10.0 * z * eps) / (e2 + 14.0 * z * eps + z * z)


def relax_pressure_2d(Q, model: CollisionModel, eps, dt):
    """Half-step implicit relaxation of the pressure tensor toward isotropy:

        P11' = ((1+W) P11 + (1-W) P22)/2,  P12' = W P12,  P22' symmetric,

    which preserves the trace (energy) exactly; density and momentum are
    untouched and the energy tensor is rebuilt as rho u x u + P'.
    """
    rho, u1, u2, tt, T, _ = primitives_2d(Q)
    W = trbdf2_w(model.tau(rho, T), model.nu, eps, dt)
    p11, p12, p22 = rho * tt.t11, rho * tt.t12, rho * tt.t22
    Qn = np.array(Q, dtype=float, copy=True)
    Qn[..., 3] = rho * u1 * u1 + 0.5 * ((1.0 + W) * p11 + (1.0 - W) * p22)
    Qn[..., 4] = rho * u1 * u2 + W * p12
    Qn[..., 5] = rho * u2 * u2 + 0.5 * ((1.0 - W) * p11 + (1.0 + W) * p22)
    return Qn


# ---------------------------------------------------------------------------
# Analytic fluxes and KFVS interface fluxes
# ---------------------------------------------------------------------------

def physical_flux_x_2d(rho, u1, u2, p11, p12, p22):
    """x-flux f(q) of the 6-moment system (heat-tensor terms excluded; they
    enter as separate interface-averaged sources)."""
    return np.stack([
        rho * u1,
        rho * u1 * u1 + p11,
        rho * u1 * u2 + p12,
        rho * u1 ** 3 + 3.0 * u1 * p11,
        rho * u1 * u1 * u2 + u2 * p11 + 2.0 * u1 * p12,
        rho * u1 * u2 * u2 + u1 * p22 + 2.0 * u2 * p12,
    ], axis=-1)


def physical_flux_y_2d(rho, u1, u2, p11, p12, p22):
    """y-flux g(q); the (1<->2) mirror of physical_flux_x_2d."""
    return np.stack([
        rho * u2,
        rho * u1 * u2 + p12,
        rho * u2 * u2 + p22,
        rho * u1 * u1 * u2 + u2 * p11 + 2.0 * u1 * p12,
        rho * u1 * u2 * u2 + u1 * p22 + 2.0 * u2 * p12,
        rho * u2 ** 3 + 3.0 * u2 * p22,
    ], axis=-1)


def _split_parts_x(rho, u1, u2, p11, p12, p22):
    a = np.sqrt(2.0 * p11 / (np.pi * rho)) * np.exp(-rho * u1 * u1 / (2.0 * p11))
    b = erf(u1 * np.sqrt(rho / (2.0 * p11)))
    J = np.stack([
        rho,
        rho * u1,
        rho * u2,
        rho * u1 * u1 + 2.0 * p11,
        rho * u1 * u2 + 2.0 * p12,
        rho * u2 * u2 + p22 + p12 * p12 / p11,
    ], axis=-1)
    return a, b, J, physical_flux_x_2d(rho, u1, u2, p11, p12, p22)


def _split_parts_y(rho, u1, u2, p11, p12, p22):
    a = np.sqrt(2.0 * p22 / (np.pi * rho)) * np.exp(-rho * u2 * u2 / (2.0 * p22))
    b = erf(u2 * np.sqrt(rho / (2.0 * p22)))
    J = np.stack([
        rho,
        rho * u1,
        rho * u2,
        rho * u1 * u1 + p11 + p12 * p12 / p22,
        rho * u1 * u2 + 2.0 * p12,
        rho * u2 * u2 + 2.0 * p22,
    ], axis=-1)
    return a, b, J, physical_flux_y_2d(rho, u1, u2, p11, p12, p22)


def _kfvs(parts, left, right):
    """F = (1/2)[a J + (1+b) K]_L + (1/2)[-a J + (1-b) K]_R; K is the
    analytic flux vector, so flux(q, q) = K(q) for any a, b."""
    out = 0.0
    for state, sgn in ((left, 1.0), (right, -1.0)):
        a, b, J, Kvec = parts(*(np.asarray(c, dtype=float) for c in state))
        out = out + 0.5 * (sgn * a[..., None] * J
                           + (1.0 + sgn * b)[..., None] * Kvec)
    return out


def kfvs_flux_2d_x(left, right):
    """Split kinetic x-flux between states (rho, u1, u2, P11, P12, P22);
    the interface distributions are the anisotropic Gaussians matching each
    side's six moments."""
    return _kfvs(_split_parts_x, left, right)


def kfvs_flux_2d_y(down, up):
    """y-direction analog of kfvs_flux_2d_x."""
    return _kfvs(_split_parts_y, down, up)


def _extended_states(prims, bc: BoundarySpec2D, axis: int):
    """Primitive+pressure fields padded by one layer along `axis`:
    wrap (periodic), copy (extrapolate), or the diffuse-wall ghost state
    (rho_wall, tangential wall velocity, P = rho_wall T_wall I)."""
    prims = tuple(np.asarray(f, dtype=float) for f in prims)
    rho, u1, u2, p11, p12, p22 = prims
    lo, hi = (bc.left, bc.right) if axis == 0 else (bc.bottom, bc.top)
    names = ("left", "right") if axis == 0 else ("bottom", "top")
    mode = "wrap" if lo == PERIODIC else "edge"
    width = [(1, 1) if a == axis else (0, 0) for a in range(2)]
    ext = [np.pad(f, width, mode=mode) for f in prims]
    if lo == PERIODIC:
        return ext

    def put(pos, edge, face, name):
        if face == EXTRAPOLATE:
            return  # edge-padding already copied the boundary cell
        sel = ((pos, slice(None)) if axis == 0 else (slice(None), pos))
        pick = ((edge, slice(None)) if axis == 0 else (slice(None), edge))
        tt = TempTensor2D(p11[pick] / rho[pick], p12[pick] / rho[pick],
                          p22[pick] / rho[pick])
        rw, g1, g2, t11, t12, t22 = wall_ghost_state_2d(
            rho[pick], u1[pick], u2[pick], tt, face, name)
        for arr, val in zip(ext, (rw, g1, g2, rw * t11, rw * t12, rw * t22)):
            arr[sel] = val

    put(0, 0, lo, names[0])
    put(-1, -1, hi, names[1])
    return ext


def interface_fluxes_2d(prims, bc: BoundarySpec2D, axis: int):
    """All interface fluxes along one axis; output gains one entry along
    `axis` and a trailing component axis of size 6."""
    ext = _extended_states(prims, bc, axis)
    if axis == 0:
        left = tuple(f[:-1] for f in ext)
        right = tuple(f[1:] for f in ext)
        return kfvs_flux_2d_x(left, right)
    down = tuple(f[:, :-1] for f in ext)
    up = tuple(f[:, 1:] for f in ext)
    return kfvs_flux_2d_y(down, up)


# ---------------------------------------------------------------------------
# Full macro step
# ---------------------------------------------------------------------------

def _pressure_fields(Q):
    rho, u1, u2, tt, T, _ = primitives_2d(Q)
    return rho, u1, u2, rho * tt.t11, rho * tt.t12, rho * tt.t22


def _sweep(Q, H_components, bc, d, dt, axis):
    """One finite-volume transport sweep: KFVS flux differences plus the
    interface-averaged heat-tensor differences on components 3..5."""
    prims = _pressure_fields(Q)
    F = interface_fluxes_2d(prims, bc, axis)
    if axis == 0:
        Qn = Q - (dt / d) * (F[1:] - F[:-1])
    else:
        Qn = Q - (dt / d) * (F[:, 1:] - F[:, :-1])
    for comp, h in zip((3, 4, 5), H_components):
        Hh = interface_heat_2d(h, bc, axis)
        if axis == 0:
            Qn[..., comp] -= (dt / d) * (Hh[1:] - Hh[:-1])
        else:
            Qn[..., comp] -= (dt / d) * (Hh[:, 1:] - Hh[:, :-1])
    return Qn


def macro_step_2d(Q, H, bc: BoundarySpec2D, dx, dy, dt, eps,
                  model: CollisionModel, source=None):
    """Strang-split update. H = (H111, H112, H122, H222) at t^{n+1}.

      1. relax(Q^n)        -> Q*     (TR-BDF2 half-step, tau from t^n)
      2. x-sweep(Q*)       -> Q**    (heat source from H111, H112, H122)
      3. y-sweep(Q**)      -> Q***   (heat source from H112, H122, H222)
         [+ dt*source, for manufactured-solution runs]
      4. relax(Q***)       -> Q^{n+1} (tau from the post-transport state)
    """
    h111, h112, h122, h222 = H
    Qs = relax_pressure_2d(Q, model, eps, dt)
    Qss = _sweep(Qs, (h111, h112, h122), bc, dx, dt, axis=0)
    Qsss = _sweep(Qss, (h112, h122, h222), bc, dy, dt, axis=1)
    if source is not None:
        Qsss = Qsss + dt * source
    return relax_pressure_2d(Qsss, model, eps, dt)


__all__ = [
    "heat_flux_tensor_2d",
    "heat_flux_vector_2d",
    "trbdf2_w",
    "relax_pressure_2d",
    "physical_flux_x_2d",
    "physical_flux_y_2d",
    "kfvs_flux_2d_x",
    "kfvs_flux_2d_y",
    "interface_fluxes_2d",
    "macro_step_2d",
]
