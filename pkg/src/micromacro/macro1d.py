"""One time step of the 1D macroscopic finite-volume update: kinetic flux
vector splitting (KFVS) for the Euler part, plus the micro-supplied heat
flux in the energy equation.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf

from micromacro.boundary import (EXTRAPOLATE, PERIODIC, BoundarySpec1D,
                                 interface_heat_flux_1d, wall_density_1d)
from micromacro.gas_state import conserved_1d, primitives_1d


def heat_flux_1d(G, v, eps):
    """H_i = (eps/2) dv sum_k v_k^3 G_ik."""
    dv = v[1] - v[0]
    return 0.5 * eps * dv * (G @ (v ** 3))


def _alpha_beta(u, T):
    alpha = np.sqrt(T / (2.0 * np.pi)) * np.exp(-u * u / (2.0 * T))
    s = erf(u / np.sqrt(2.0 * T))
    return alpha, 0.5 * (1.0 + s), 0.5 * (1.0 - s)


def physical_flux_1d(rho, u, T):
    """f(Q) = (rho u, rho (T + u^2), (1/2) rho u (3T + u^2))."""
    return np.stack([rho * u, rho * (T + u * u),
                     0.5 * rho * u * (3.0 * T + u * u)], axis=-1)


def kfvs_flux_1d(left, right):
    """Split kinetic flux between primitive states (rho, u, T).

    F = alpha_L (rho, rho u, rho (2T + u^2)/2)_L + beta+_L f(Q_L)
        - alpha_R (rho, rho u, rho (2T + u^2)/2)_R + beta-_R f(Q_R)

    Each of `left`/`right` is a (rho, u, T) tuple of scalars or arrays;
    arrays give per-interface fluxes.
    """
    out = 0.0
    for state, sign in ((left, 1.0), (right, -1.0)):
        rho, u, T = (np.asarray(c, dtype=float) for c in state)
        alpha, bp, bm = _alpha_beta(u, T)
        half = np.stack([rho, rho * u, 0.5 * rho * (2.0 * T + u * u)], axis=-1)
        beta = bp if sign > 0 else bm
        out = out + sign * alpha[..., None] * half \
            + beta[..., None] * physical_flux_1d(rho, u, T)
    return out


def interface_fluxes_1d(rho, u, T, bc: BoundarySpec1D):
    """All nx+1 interface fluxes, with boundary faces per the boundary
    condition (wrap, zero-gradient copy, or wall-Maxwellian KFVS)."""
    nx = len(rho)
    F = np.empty((nx + 1, 3))
    F[1:-1] = kfvs_flux_1d((rho[:-1], u[:-1], T[:-1]), (rho[1:], u[1:], T[1:]))
    if bc.left == PERIODIC:
        F[0] = F[-1] = kfvs_flux_1d((rho[-1], u[-1], T[-1]), (rho[0], u[0], T[0]))
        return F
    if bc.left == EXTRAPOLATE:
        F[0] = kfvs_flux_1d((rho[0], u[0], T[0]), (rho[0], u[0], T[0]))
    else:
        rho_w = wall_density_1d(rho[0], u[0], T[0], bc.left, "left")
        F[0] = kfvs_flux_1d((rho_w, 0.0, bc.left.temperature),
                            (rho[0], u[0], T[0]))
    if bc.right == EXTRAPOLATE:
        F[-1] = kfvs_flux_1d((rho[-1], u[-1], T[-1]), (rho[-1], u[-1], T[-1]))
    else:
        rho_w = wall_density_1d(rho[-1], u[-1], T[-1], bc.right, "right")
        F[-1] = kfvs_flux_1d((rho[-1], u[-1], T[-1]),
                             (rho_w, 0.0, bc.right.temperature))
    return F


def macro_step_1d(Q, H, bc, dx, dt, source=None):
    """Conservative update with the heat-flux difference in the energy
    component; H is the per-cell heat flux at t^{n+1}.

    Q^{n+1} = Q - dt/dx (F_{i+1/2} - F_{i-1/2})
              - dt/dx (0, 0, H_{i+1/2} - H_{i-1/2}) [+ dt*source]
    """
    rho, u, T = primitives_1d(Q)
    F = interface_fluxes_1d(rho, u, T, bc)
    Hh = interface_heat_flux_1d(H, bc)
    Qn = Q - (dt / dx) * (F[1:] - F[:-1])
    Qn[:, 2] -= (dt / dx) * (Hh[1:] - Hh[:-1])
    if source is not None:
        Qn += dt * source
    return Qn


__all__ = [
    "heat_flux_1d",
    "physical_flux_1d",
    "kfvs_flux_1d",
    "interface_fluxes_1d",
    "macro_step_1d",
    "conserved_1d",
]
