"""One time step of the 1D microscopic update.

The micro unknown G approximates the non-equilibrium part g of
f = M + eps*g on the phase grid (nx, nv). Each step combines an explicit
upwind transport term (with its nullspace projection removed) and a
backward-Euler collision term whose target Ghat is the closed-form
projected Maxwellian transport; the blend of weights
eps/(eps + dt*tau) and dt*tau/(eps + dt*tau) makes the update
asymptotic-preserving: as eps -> 0, G^{n+1} -> Ghat^n.
"""

from __future__ import annotations

import numpy as np

from micromacro import _kernels as K
from micromacro.boundary import (BoundarySpec1D, extend_micro_1d,
                                 interface_temperatures_1d)
from micromacro.gas_state import maxwellian_1d


def ghat_1d(rho, u, T, T_half, tau, v, dx):
    """Ghat_ik = -(1/tau_i) ((v_k-u_i)^3/(2 T_i) - (3/2)(v_k-u_i))
    * ((T_{i+1/2} - T_{i-1/2}) / (dx T_i)) * M_ik.

    T_half holds the nx+1 interface temperatures.
    """
    w = v[None, :] - u[:, None]
    dT = (T_half[1:] - T_half[:-1]) / (dx * T)
    M = maxwellian_1d(rho[:, None], u[:, None], T[:, None], v[None, :])
    return -(w ** 3 / (2.0 * T[:, None]) - 1.5 * w) * (dT / tau)[:, None] * M


def upwind_z_1d(G, bc: BoundarySpec1D, v, dx):
    """Sign-split upwind transport term Z = v^+ D^- G + v^- D^+ G with
    ghost rows from the boundary condition."""
    return K.upwind_z_1d(extend_micro_1d(np.ascontiguousarray(G), bc), v, dx)


def micro_step_1d(G, rho, u, T, bc, v, dx, dt, eps, tau, M=None,
                  projected_source=None):
    """Full micro update.

    G^{n+1} = eps/(eps+dt*tau) (G - dt (Z - Zhat))
              + dt*tau/(eps+dt*tau) Ghat

    projected_source, if given, is the already-projected residual term
    (I - Pi)[S] of a manufactured solution; it enters Ghat as
    (1/tau) (I-Pi)[S].
    """
    dv = v[1] - v[0]
    rho, u, T = (np.ascontiguousarray(a) for a in (rho, u, T))
    if M is None:
        M = maxwellian_1d(rho[:, None], u[:, None], T[:, None], v[None, :])
    M = np.ascontiguousarray(M)
    Z = upwind_z_1d(G, bc, v, dx)
    Zhat = K.project_field_1d(Z, M, rho, u, T, v, dv)
    T_half = interface_temperatures_1d(rho, u, T, bc)
    Ghat = ghat_1d(rho, u, T, T_half, tau, v, dx)
    if projected_source is not None:
        Ghat = Ghat + projected_source / tau[:, None]
    wg = (eps / (eps + dt * tau))[:, None]
    wh = (dt * tau / (eps + dt * tau))[:, None]
    return wg * (G - dt * (Z - Zhat)) + wh * Ghat


__all__ = ["ghat_1d", "upwind_z_1d", "micro_step_1d"]
