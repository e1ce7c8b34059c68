"""Conversions between conserved moments and primitive variables, equilibrium
distributions, and collision-parameter models.

All functions are pure and broadcast over numpy arrays, so they work both on
single states and on whole fields. Conserved layouts:

    1D: q = (rho, rho*u, E)            with E = rho*T/2 + rho*u^2/2
    2D: q = (rho, rho*u1, rho*u2, E11, E12, E22)
        with the energy tensor E_ab = rho*(u_a*u_b + TT_ab)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from micromacro.errors import ConfigurationError, InvalidStateError

# Hard-sphere monoatomic gas constant A_2(5) (d_v = 2).
A2_5 = 0.436
# Collision parameter tau = c * rho for the 2D ES-BGK model (nu = -1):
# the simplified printed constant 0.4625*pi.
TAU_ESBGK_2D_COEFF = 0.4625 * math.pi
# Same matching but for nu = 0 (plain BGK relaxation in 2D): twice as large.
TAU_BGK_2D_COEFF = 3.0 * math.pi * A2_5 / math.sqrt(2.0)


def _fail_where(bad, message, values):
    """Raise InvalidStateError naming the first offending cell."""
    bad = np.asarray(bad)
    if bad.ndim == 0:
        raise InvalidStateError(message, value=float(values))
    idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
    raise InvalidStateError(message, cell=idx, value=float(np.asarray(values)[idx]))


# ---------------------------------------------------------------------------
# 1D moments and primitives
# ---------------------------------------------------------------------------

def primitives_1d(q):
    """(rho, rho*u, E) -> (rho, u, T), validating rho > 0 and T > 0."""
    q = np.asarray(q, dtype=float)
    rho = q[..., 0]
    if np.any(rho <= 0):
        _fail_where(rho <= 0, "non-positive density", rho)
    u = q[..., 1] / rho
    T = (2.0 * q[..., 2] - rho * u * u) / rho
    if np.any(T <= 0):
        _fail_where(T <= 0, "non-positive temperature", T)
    return rho, u, T


def conserved_1d(rho, u, T):
    rho, u, T = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, u, T)))
    return np.stack([rho, rho * u, 0.5 * rho * T + 0.5 * rho * u * u], axis=-1)


# ---------------------------------------------------------------------------
# 2D moments and primitives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TempTensor2D:
    """Symmetric 2x2 temperature tensor; components may be scalars or
    arrays."""

    t11: object
    t12: object
    t22: object

    @property
    def scalar(self):
        """Scalar temperature T = tr/2."""
        return 0.5 * (np.asarray(self.t11) + np.asarray(self.t22))


def check_spd_2x2(a11, a12, a22, what="tensor"):
    """Leading-minor SPD check with tolerance 1e-14 * trace."""
    a11 = np.asarray(a11, dtype=float)
    a12 = np.asarray(a12, dtype=float)
    a22 = np.asarray(a22, dtype=float)
    tol = 1e-14 * (a11 + a22)
    det = a11 * a22 - a12 * a12
    bad = (a11 <= tol) | (det <= tol * tol)
    if np.any(bad):
        _fail_where(bad, f"{what} is not positive definite", det)


def primitives_2d(q):
    """(rho, rho*u1, rho*u2, E11, E12, E22) ->
    (rho, u1, u2, TempTensor2D, T, p)."""
    q = np.asarray(q, dtype=float)
    rho = q[..., 0]
    if np.any(rho <= 0):
        _fail_where(rho <= 0, "non-positive density", rho)
    u1 = q[..., 1] / rho
    u2 = q[..., 2] / rho
    t11 = q[..., 3] / rho - u1 * u1
    t12 = q[..., 4] / rho - u1 * u2
    t22 = q[..., 5] / rho - u2 * u2
    check_spd_2x2(t11, t12, t22, what="pressure tensor")
    tt = TempTensor2D(t11, t12, t22)
    T = 0.5 * (t11 + t22)
    return rho, u1, u2, tt, T, rho * T


def conserved_2d(rho, u1, u2, t11, t12, t22):
    arrs = np.broadcast_arrays(*(np.asarray(a, dtype=float)
                                 for a in (rho, u1, u2, t11, t12, t22)))
    rho, u1, u2, t11, t12, t22 = arrs
    return np.stack([
        rho,
        rho * u1,
        rho * u2,
        rho * (u1 * u1 + t11),
        rho * (u1 * u2 + t12),
        rho * (u2 * u2 + t22),
    ], axis=-1)


# ---------------------------------------------------------------------------
# Equilibrium distributions
# ---------------------------------------------------------------------------

def maxwellian_1d(rho, u, T, v):
    return rho / np.sqrt(2.0 * np.pi * T) * np.exp(-(v - u) ** 2 / (2.0 * T))


def maxwellian_2d(rho, u1, u2, T, v1, v2):
    r2 = (v1 - u1) ** 2 + (v2 - u2) ** 2
    return rho / (2.0 * np.pi * T) * np.exp(-r2 / (2.0 * T))


def modify_tensor(tt: TempTensor2D, T, nu) -> TempTensor2D:
    """Anisotropy blend (1 - nu)*T*I + nu*TT; trace preserving."""
    if not -1.0 <= nu < 1.0:
        raise ConfigurationError(f"nu must lie in [-1, 1), got {nu}")
    m11 = (1.0 - nu) * T + nu * np.asarray(tt.t11)
    m12 = nu * np.asarray(tt.t12)
    m22 = (1.0 - nu) * T + nu * np.asarray(tt.t22)
    check_spd_2x2(m11, m12, m22, what="modified temperature tensor")
    return TempTensor2D(m11, m12, m22)


def gaussian_2d(rho, u1, u2, tmod: TempTensor2D, v1, v2):
    """Anisotropic Gaussian with covariance tmod; closed-form 2x2 inverse."""
    c11 = np.asarray(tmod.t11, dtype=float)
    c12 = np.asarray(tmod.t12, dtype=float)
    c22 = np.asarray(tmod.t22, dtype=float)
    det = c11 * c22 - c12 * c12
    check_spd_2x2(c11, c12, c22, what="Gaussian covariance")
    w1 = v1 - u1
    w2 = v2 - u2
    quad = (c22 * w1 * w1 - 2.0 * c12 * w1 * w2 + c11 * w2 * w2) / det
    return rho / (2.0 * np.pi * np.sqrt(det)) * np.exp(-0.5 * quad)


# ---------------------------------------------------------------------------
# Collision parameter models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollisionModel:
    """Collision-parameter model tau(state).

    kinds:
        hard_sphere_1d  tau = (16/5) sqrt(T / 2 pi)
        pressure_1d     tau = p = rho * T  (constant viscosity/conductivity)
        esbgk_2d        tau = 0.4625 pi rho        (pairs with nu = -1)
        bgk_2d          tau = (3 pi A2(5)/sqrt 2) rho  (pairs with nu = 0)
        constant        tau = value
    """

    kind: str
    nu: float = 0.0
    value: float = 1.0

    _KINDS = ("hard_sphere_1d", "pressure_1d", "esbgk_2d", "bgk_2d", "constant")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ConfigurationError(f"unknown collision model kind {self.kind!r}")
        if not -1.0 <= self.nu < 1.0:
            raise ConfigurationError(f"nu must lie in [-1, 1), got {self.nu}")

    def tau(self, rho, T):
        if self.kind == "hard_sphere_1d":
            return 3.2 * np.sqrt(np.asarray(T) / (2.0 * np.pi))
        if self.kind == "pressure_1d":
            return np.asarray(rho) * np.asarray(T)
        if self.kind == "esbgk_2d":
            return TAU_ESBGK_2D_COEFF * np.asarray(rho)
        if self.kind == "bgk_2d":
            return TAU_BGK_2D_COEFF * np.asarray(rho)
        return np.full_like(np.asarray(rho, dtype=float), self.value)


__all__ = [
    "A2_5",
    "TAU_ESBGK_2D_COEFF",
    "TAU_BGK_2D_COEFF",
    "CollisionModel",
    "TempTensor2D",
    "check_spd_2x2",
    "conserved_1d",
    "conserved_2d",
    "erf",
    "gaussian_2d",
    "maxwellian_1d",
    "maxwellian_2d",
    "modify_tensor",
    "primitives_1d",
    "primitives_2d",
]
