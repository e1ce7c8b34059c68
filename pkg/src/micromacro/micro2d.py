"""One time step of the 2D microscopic update via three-stage operator
splitting: upwind x-transport with its nullspace projection removed, the
same in y, then a backward-Euler collision stage relaxing toward the
closed-form target Ghat.

All three stages use the macroscopic state at t^n; the transport stages are
forward Euler, and the collision blend of eps/(eps + dt*tau) and
dt*tau/(eps + dt*tau) makes the step asymptotic-preserving (G^{n+1} -> Ghat
as eps -> 0 on a fixed mesh).
"""

from __future__ import annotations

import numpy as np

from micromacro import _kernels as K
from micromacro.boundary import (BoundarySpec2D, WallSpec,
                                 extend_macro_scalar_2d, extend_micro_2d,
                                 ghat_override_2d)
from micromacro.gas_state import TempTensor2D, modify_tensor


def micro_transport_x(G, rho, u1, u2, T, M, bc, v1, v2, dx, dt):
    """G* = G - dt*(Z - Zhat) with Z the v1-upwinded x-difference and Zhat
    its nullspace projection at the t^n macro state."""
    G_ext = extend_micro_2d(np.ascontiguousarray(G), bc, axis=0)
    return K.transport_stage_2d(G_ext, M, rho, u1, u2, T, v1, v2, dx, dt, 0)


def micro_transport_y(G, rho, u1, u2, T, M, bc, v1, v2, dy, dt):
    """G** = G* - dt*(Z* - Zhat*); the projection still uses the t^n macro
    state."""
    G_ext = extend_micro_2d(np.ascontiguousarray(G), bc, axis=1)
    return K.transport_stage_2d(G_ext, M, rho, u1, u2, T, v1, v2, dy, dt, 1)


def sigma_grad_t_2d(u1, u2, T, bc, dx, dy):
    """Centered-difference velocity-gradient combination and temperature
    gradient:

        s11 = du1/dx - du2/dy,   s12 = du1/dy + du2/dx   (sigma is
        [[s11, s12], [s12, -s11]]),
        gT = ((T_{i+1/2}-T_{i-1/2})/dx, (T_{j+1/2}-T_{j-1/2})/dy)

    with interface temperatures T_{i+1/2} = (T_{i+1} + T_i)/2, which makes
    both gradients centered over 2*dx (resp. 2*dy). Ghosts wrap for
    periodic faces and copy otherwise (wall-adjacent cells are later
    replaced by the wall override).
    """
    def ddx(f):
        ext = extend_macro_scalar_2d(f, bc, axis=0)
        return (ext[2:] - ext[:-2]) / (2.0 * dx)

    def ddy(f):
        ext = extend_macro_scalar_2d(f, bc, axis=1)
        return (ext[:, 2:] - ext[:, :-2]) / (2.0 * dy)

    s11 = ddx(u1) - ddy(u2)
    s12 = ddy(u1) + ddx(u2)
    return s11, s12, ddx(T), ddy(T)


def _is_isotropic(m11, m12, m22, T):
    tol = 1e-13 * float(np.max(T))
    return (float(np.max(np.abs(m11 - T))) <= tol
            and float(np.max(np.abs(m12))) <= tol
            and float(np.max(np.abs(m22 - T))) <= tol)


def ghat_2d(rho, u1, u2, T, tt: TempTensor2D, bc, v1, v2, dx, dy, eps, tau,
            nu, M, grads=None):
    """Ghat = -(1/tau)(B:sigma + C.gradT) M + (1/eps)(Gaussian - M).

    The Gaussian term uses the anisotropy-blended tensor
    (1-nu) T I + nu TT; for nu = 0 that tensor is exactly isotropic and the
    term vanishes identically, so it is skipped (also skipped for eps below
    1e-10 with an isotropic tensor, where 0/eps noise would otherwise
    amplify roundoff).

    grads, if given, is a precomputed (s11, s12, gT1, gT2) tuple (the
    worker-grid runner computes these from halo-extended fields); bc is
    then unused.
    """
    if grads is None:
        grads = sigma_grad_t_2d(u1, u2, T, bc, dx, dy)
    s11, s12, gt1, gt2 = grads
    Ghat = K.ghat_2d(M, rho, u1, u2, T,
                     np.ascontiguousarray(s11), np.ascontiguousarray(s12),
                     np.ascontiguousarray(gt1), np.ascontiguousarray(gt2),
                     tau, v1, v2)
    if nu != 0.0:
        mt = modify_tensor(tt, T, nu)
        m11 = np.array(np.broadcast_to(mt.t11, rho.shape), dtype=float)
        m12 = np.array(np.broadcast_to(mt.t12, rho.shape), dtype=float)
        m22 = np.array(np.broadcast_to(mt.t22, rho.shape), dtype=float)
        if not (eps < 1e-10 and _is_isotropic(m11, m12, m22, T)):
            K.add_gaussian_term_2d(Ghat, M, rho, u1, u2, m11, m12, m22,
                                   eps, v1, v2)
    return Ghat


def micro_step_2d(G, rho, u1, u2, T, tt, bc: BoundarySpec2D, v1, v2, dx, dy,
                  dt, eps, tau, nu, M=None, projected_source=None):
    """Full micro update: x-transport, y-transport, implicit collision.

    projected_source, if given, is the pair (coeffs, shapes) of low-rank
    factors of the already-projected residual (I - Pi)[S] of a manufactured
    solution evaluated at t^n; it enters Ghat as (1/tau)(I - Pi)[S].
    Diffuse-wall faces replace Ghat on wall-adjacent strips with the upwind
    ghost-Maxwellian form.
    """
    rho, u1, u2, T = (np.ascontiguousarray(a) for a in (rho, u1, u2, T))
    tau = np.array(np.broadcast_to(tau, rho.shape), dtype=float)
    if M is None:
        M = K.maxwellian_field_2d(rho, u1, u2, T, v1, v2)
    M = np.ascontiguousarray(M)
    Gs = micro_transport_x(G, rho, u1, u2, T, M, bc, v1, v2, dx, dt)
    Gss = micro_transport_y(Gs, rho, u1, u2, T, M, bc, v1, v2, dy, dt)
    Ghat = ghat_2d(rho, u1, u2, T, tt, bc, v1, v2, dx, dy, eps, tau, nu, M)
    if projected_source is not None:
        coeffs, shapes = projected_source
        K.add_lowrank_4d(Ghat, np.ascontiguousarray(coeffs / tau[None]),
                         np.ascontiguousarray(shapes))
    if any(isinstance(f, WallSpec) for f in (bc.left, bc.right, bc.bottom,
                                             bc.top)):
        ghat_override_2d(Ghat, M, rho, u1, u2, T, tt, bc, v1, v2, dx, dy, tau)
    return K.relax_2d(Gss, Ghat, tau, dt, eps)


__all__ = [
    "micro_transport_x",
    "micro_transport_y",
    "sigma_grad_t_2d",
    "ghat_2d",
    "micro_step_2d",
]
