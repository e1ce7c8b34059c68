"""Orthogonal projection onto the nullspace of the relaxation collision
operator, in 1D1V and 2D2V, plus the closed-form projected Maxwellian
transport terms used by the micro solvers.

The nullspace is spanned by the collision invariants weighted by the local
Maxwellian:

    1D basis:  {1, (v-u)/sqrt(T), sqrt(2) ((v-u)^2/(2T) - 1/2)} * M / rho
    2D basis:  {1, (v1-u1)/sqrt(T), (v2-u2)/sqrt(T),
                ||v-u||^2/(2T) - 1} * M / rho

These bases are orthonormal in the continuum inner product <F,G>_M; the
discrete coefficients below replace the integrals by midpoint quadrature on
the cell-centered velocity grid, so the discrete operator is a projector only
up to quadrature error. That choice is deliberate: re-orthonormalizing
discretely would change the scheme, and the quadrature error vanishes
spectrally fast for the wide grids used in practice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from micromacro.gas_state import maxwellian_1d, maxwellian_2d


@dataclass(frozen=True)
class ProjCoeffs1D:
    a1: float
    a2: float
    a3: float


@dataclass(frozen=True)
class ProjCoeffs2D:
    a1: float
    a2: float
    a3: float
    a4: float


def coeffs_1d(F, rho, u, T, vgrid) -> ProjCoeffs1D:
    """Midpoint-quadrature projection coefficients Delta_v/rho * sum(F * b)."""
    F = np.asarray(F, dtype=float)
    dv = vgrid[1] - vgrid[0] if len(vgrid) > 1 else 1.0
    w = (vgrid - u) / np.sqrt(T)
    scale = dv / rho
    a1 = scale * np.sum(F)
    a2 = scale * np.sum(F * w)
    a3 = scale * np.sum(F * np.sqrt(2.0) * (0.5 * w * w - 0.5))
    return ProjCoeffs1D(a1, a2, a3)


def project_1d(F, rho, u, T, vgrid):
    c = coeffs_1d(F, rho, u, T, vgrid)
    w = (vgrid - u) / np.sqrt(T)
    shape = c.a1 + w * c.a2 + np.sqrt(2.0) * (0.5 * w * w - 0.5) * c.a3
    return shape * maxwellian_1d(rho, u, T, vgrid)


def coeffs_2d(F, rho, u1, u2, T, v1grid, v2grid) -> ProjCoeffs2D:
    """2D analog with weights Delta_v1 Delta_v2 / rho; F has shape
    (nv1, nv2)."""
    F = np.asarray(F, dtype=float)
    dv1 = v1grid[1] - v1grid[0] if len(v1grid) > 1 else 1.0
    dv2 = v2grid[1] - v2grid[0] if len(v2grid) > 1 else 1.0
    st = np.sqrt(T)
    w1 = (v1grid[:, None] - u1) / st
    w2 = (v2grid[None, :] - u2) / st
    scale = dv1 * dv2 / rho
    a1 = scale * np.sum(F)
    a2 = scale * np.sum(F * w1)
    a3 = scale * np.sum(F * w2)
    a4 = scale * np.sum(F * (0.5 * (w1 * w1 + w2 * w2) - 1.0))
    return ProjCoeffs2D(a1, a2, a3, a4)


def project_2d(F, rho, u1, u2, T, v1grid, v2grid):
    c = coeffs_2d(F, rho, u1, u2, T, v1grid, v2grid)
    st = np.sqrt(T)
    w1 = (v1grid[:, None] - u1) / st
    w2 = (v2grid[None, :] - u2) / st
    shape = c.a1 + w1 * c.a2 + w2 * c.a3 + (0.5 * (w1 * w1 + w2 * w2) - 1.0) * c.a4
    M = maxwellian_2d(rho, u1, u2, T, v1grid[:, None], v2grid[None, :])
    return shape * M


def projected_maxwellian_transport_1d(rho, u, T, dT_dx, vgrid):
    """Closed form (I - Pi)[v M_x] =
    ((v-u)^3/(2T) - (3/2)(v-u)) * (T_x / T) * M."""
    w = vgrid - u
    M = maxwellian_1d(rho, u, T, vgrid)
    return (w ** 3 / (2.0 * T) - 1.5 * w) * (dT_dx / T) * M


def projected_maxwellian_transport_2d(rho, u1, u2, T, sigma, gradT, v1grid, v2grid):
    """Closed form {B:sigma + C.gradT} * M with

        B = (1/2T) [[-(v2-u2)^2,        (v1-u1)(v2-u2)],
                    [ (v1-u1)(v2-u2),  -(v1-u1)^2     ]]
        C = (||v-u||^2/(2T) - 2) (v - u) / T

    sigma is the symmetric traceless velocity-gradient combination
    [[u1,x - u2,y, u1,y + u2,x], [u1,y + u2,x, -u1,x + u2,y]].
    """
    w1 = v1grid[:, None] - u1
    w2 = v2grid[None, :] - u2
    s11, s12 = sigma[0][0], sigma[0][1]
    s21, s22 = sigma[1][0], sigma[1][1]
    b_colon_sigma = (-w2 * w2 * s11 + w1 * w2 * (s12 + s21) - w1 * w1 * s22) / (2.0 * T)
    cfac = (w1 * w1 + w2 * w2) / (2.0 * T) - 2.0
    c_dot_gradT = cfac * (w1 * gradT[0] + w2 * gradT[1]) / T
    M = maxwellian_2d(rho, u1, u2, T, v1grid[:, None], v2grid[None, :])
    return (b_colon_sigma + c_dot_gradT) * M


__all__ = [
    "ProjCoeffs1D",
    "ProjCoeffs2D",
    "coeffs_1d",
    "coeffs_2d",
    "project_1d",
    "project_2d",
    "projected_maxwellian_transport_1d",
    "projected_maxwellian_transport_2d",
]
