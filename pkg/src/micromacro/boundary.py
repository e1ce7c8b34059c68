"""Boundary-condition machinery: periodic, constant extrapolation, and
diffusely-reflecting fixed-temperature walls (1D and 2D).

A diffuse wall emits a half-range Maxwellian at the wall temperature whose
density is chosen so the net kinetic mass flux through the wall vanishes;
the closed forms below follow from half-range moments of Maxwellians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from micromacro.errors import ConfigurationError
from micromacro.gas_state import TempTensor2D

#: face keywords for non-wall conditions
PERIODIC = "periodic"
EXTRAPOLATE = "extrapolate"


@dataclass(frozen=True)
class WallSpec:
    """Diffusely-reflecting wall at fixed temperature, optionally sliding
    tangentially (the 2D lid)."""

    temperature: float
    velocity: float = 0.0

    def __post_init__(self):
        if self.temperature <= 0:
            raise ConfigurationError(
                f"wall temperature must be positive, got {self.temperature}")


def _check_face(face):
    if face in (PERIODIC, EXTRAPOLATE) or isinstance(face, WallSpec):
        return
    raise ConfigurationError(f"unknown boundary face {face!r}")


@dataclass(frozen=True)
class BoundarySpec1D:
    left: object
    right: object

    def __post_init__(self):
        _check_face(self.left)
        _check_face(self.right)
        if (self.left == PERIODIC) != (self.right == PERIODIC):
            raise ConfigurationError("periodic boundaries must come in pairs")


@dataclass(frozen=True)
class BoundarySpec2D:
    """Faces in x (left/right) and y (bottom/top)."""

    left: object
    right: object
    bottom: object
    top: object

    def __post_init__(self):
        for f in (self.left, self.right, self.bottom, self.top):
            _check_face(f)
        if (self.left == PERIODIC) != (self.right == PERIODIC):
            raise ConfigurationError("periodic x-boundaries must come in pairs")
        if (self.bottom == PERIODIC) != (self.top == PERIODIC):
            raise ConfigurationError("periodic y-boundaries must come in pairs")

    def transposed(self) -> "BoundarySpec2D":
        """The spec with the x- and y-axes exchanged."""
        return BoundarySpec2D(left=self.bottom, right=self.top,
                              bottom=self.left, top=self.right)


PERIODIC_1D = BoundarySpec1D(PERIODIC, PERIODIC)
EXTRAPOLATE_1D = BoundarySpec1D(EXTRAPOLATE, EXTRAPOLATE)


def _alpha_beta(u, T):
    alpha = np.sqrt(T / (2.0 * np.pi)) * np.exp(-u * u / (2.0 * T))
    s = erf(u / np.sqrt(2.0 * T))
    return alpha, 0.5 * (1.0 + s), 0.5 * (1.0 - s)


# ---------------------------------------------------------------------------
# 1D diffuse walls
# ---------------------------------------------------------------------------

def wall_density_1d(rho, u, T, wall: WallSpec, side: str) -> float:
    """Emitted half-Maxwellian density giving zero net mass flux.

    left:  rho_w = sqrt(2 pi / T_w) (rho alpha - rho u beta^-)
    right: rho_w = sqrt(2 pi / T_w) (rho alpha + rho u beta^+)
    """
    alpha, bp, bm = _alpha_beta(u, T)
    if side == "left":
        return math.sqrt(2.0 * math.pi / wall.temperature) * (rho * alpha - rho * u * bm)
    if side == "right":
        return math.sqrt(2.0 * math.pi / wall.temperature) * (rho * alpha + rho * u * bp)
    raise ConfigurationError(f"side must be left or right, got {side!r}")


def wall_interface_temperature_1d(rho, u, T, wall: WallSpec, side: str) -> float:
    """Interface temperature at a diffuse wall: the ratio of half-range
    second moments to half-range zeroth moments of (wall Maxwellian,
    interior Maxwellian)."""
    alpha, bp, bm = _alpha_beta(u, T)
    Tw = wall.temperature
    rho_w = wall_density_1d(rho, u, T, wall, side)
    if side == "left":
        # emitted over v>0, interior over v<0
        num = 0.5 * rho_w * Tw + rho * ((T + u * u) * bm - u * alpha)
        den = 0.5 * rho_w + rho * bm
    else:
        num = rho * ((T + u * u) * bp + u * alpha) + 0.5 * rho_w * Tw
        den = rho * bp + 0.5 * rho_w
    return num / den


def interface_temperatures_1d(rho, u, T, bc: BoundarySpec1D) -> np.ndarray:
    """All nx+1 interface temperatures T_{i+1/2} (arithmetic means
    interiorly, boundary faces per the boundary condition)."""
    Th = np.empty(len(T) + 1)
    Th[1:-1] = 0.5 * (T[1:] + T[:-1])
    if bc.left == PERIODIC:
        Th[0] = Th[-1] = 0.5 * (T[0] + T[-1])
    else:
        for pos, face, i, side in ((0, bc.left, 0, "left"), (-1, bc.right, -1, "right")):
            if face == EXTRAPOLATE:
                Th[pos] = T[i]
            else:
                Th[pos] = wall_interface_temperature_1d(rho[i], u[i], T[i], face, side)
    return Th


def extend_micro_1d(G, bc: BoundarySpec1D) -> np.ndarray:
    """One ghost row per side for the upwind difference: wrap (periodic),
    copy (extrapolate), or zero (diffuse wall: inflow is pure wall
    Maxwellian, so its micro part vanishes)."""
    nx, nv = G.shape
    G_ext = np.empty((nx + 2, nv))
    G_ext[1:-1] = G
    if bc.left == PERIODIC:
        G_ext[0] = G[-1]
        G_ext[-1] = G[0]
        return G_ext
    for pos, face, edge in ((0, bc.left, 0), (nx + 1, bc.right, nx - 1)):
        if face == EXTRAPOLATE:
            G_ext[pos] = G[edge]
        else:
            G_ext[pos] = 0.0
    return G_ext


def interface_heat_flux_1d(H, bc: BoundarySpec1D) -> np.ndarray:
    """Interface heat-flux values H_{i+1/2}: interior means; wall faces use
    the halving rule (ghost heat flux is zero); extrapolate copies."""
    Hh = np.empty(len(H) + 1)
    Hh[1:-1] = 0.5 * (H[1:] + H[:-1])
    if bc.left == PERIODIC:
        Hh[0] = Hh[-1] = 0.5 * (H[0] + H[-1])
    else:
        Hh[0] = H[0] if bc.left == EXTRAPOLATE else 0.5 * H[0]
        Hh[-1] = H[-1] if bc.right == EXTRAPOLATE else 0.5 * H[-1]
    return Hh


# ---------------------------------------------------------------------------
# 2D ghost filling
# ---------------------------------------------------------------------------

def _faces_2d(bc: BoundarySpec2D, axis: int):
    return (bc.left, bc.right) if axis == 0 else (bc.bottom, bc.top)


def extend_micro_2d(G, bc: BoundarySpec2D, axis: int) -> np.ndarray:
    """One ghost layer per side along the given spatial axis of G
    (nx, ny, nv1, nv2): wrap (periodic), copy (extrapolate), or zero
    (diffuse wall: inflow is pure wall Maxwellian)."""
    G = np.asarray(G)
    lo, hi = _faces_2d(bc, axis)
    shape = list(G.shape)
    shape[axis] += 2
    G_ext = np.empty(shape)
    core = [slice(None)] * 4
    core[axis] = slice(1, -1)
    G_ext[tuple(core)] = G

    def layer(container, pos, value):
        sl = [slice(None)] * 4
        sl[axis] = pos
        container[tuple(sl)] = value

    def take(pos):
        sl = [slice(None)] * 4
        sl[axis] = pos
        return G[tuple(sl)]

    if lo == PERIODIC:
        layer(G_ext, 0, take(-1))
        layer(G_ext, -1, take(0))
        return G_ext
    layer(G_ext, 0, take(0) if lo == EXTRAPOLATE else 0.0)
    layer(G_ext, -1, take(-1) if hi == EXTRAPOLATE else 0.0)
    return G_ext


def extend_macro_scalar_2d(f, bc: BoundarySpec2D, axis: int) -> np.ndarray:
    """One ghost layer per side of a (nx, ny) scalar field along one axis:
    wrap for periodic, copy otherwise (wall-adjacent micro cells are
    recomputed by the wall override, so the copied ghosts never influence
    the scheme there)."""
    lo, _ = _faces_2d(bc, axis)
    mode = "wrap" if lo == PERIODIC else "edge"
    width = [(1, 1) if a == axis else (0, 0) for a in range(2)]
    return np.pad(np.asarray(f), width, mode=mode)


def interface_heat_2d(H, bc: BoundarySpec2D, axis: int) -> np.ndarray:
    """Interface values of one heat-flux-tensor component along one axis:
    arithmetic means interiorly; wrap, copy, or the wall halving rule
    (ghost heat flux is zero) at the physical faces. Output gains one
    entry along `axis`."""
    H = np.asarray(H)
    lo, hi = _faces_2d(bc, axis)
    if axis == 1:
        return interface_heat_2d(H.T, bc.transposed(), 0).T
    nx = H.shape[0]
    Hh = np.empty((nx + 1,) + H.shape[1:])
    Hh[1:-1] = 0.5 * (H[1:] + H[:-1])
    if lo == PERIODIC:
        Hh[0] = Hh[-1] = 0.5 * (H[0] + H[-1])
    else:
        Hh[0] = H[0] if lo == EXTRAPOLATE else 0.5 * H[0]
        Hh[-1] = H[-1] if hi == EXTRAPOLATE else 0.5 * H[-1]
    return Hh


# ---------------------------------------------------------------------------
# 2D diffuse walls
# ---------------------------------------------------------------------------

def wall_density_ratio_2d(u_a, t_aa, wall: WallSpec, sign: int):
    """R_a^{+/-} of the 2D zero-normal-flux closure:

    R = sqrt(T_aa/T_w) exp(-u_a^2 / 2 T_aa)
        + u_a sqrt(pi / 2 T_w) (erf(u_a / sqrt(2 T_aa)) +/- 1)

    The wall density is rho_wall = rho * R; sign -1 applies on faces whose
    inward normal points in +a (left/bottom), +1 on right/top faces.
    """
    Tw = wall.temperature
    return (np.sqrt(t_aa / Tw) * np.exp(-u_a * u_a / (2.0 * t_aa))
            + u_a * np.sqrt(np.pi / (2.0 * Tw))
            * (erf(u_a / np.sqrt(2.0 * t_aa)) + sign))


_SIGN_2D = {"left": -1, "bottom": -1, "right": +1, "top": +1}


def wall_density_2d(rho, u_a, t_aa, wall: WallSpec, face: str):
    """Wall densities along one face; inputs are the interior wall-adjacent
    row/column of rho, the normal velocity u_a, and the normal-normal
    temperature-tensor component T_aa."""
    return rho * wall_density_ratio_2d(u_a, t_aa, wall, _SIGN_2D[face])


def wall_ghost_state_2d(rho, u1, u2, tt, wall: WallSpec, face: str):
    """Macro ghost primitives (rho, u1, u2, T11, T12, T22) behind a diffuse
    wall: the wall density, zero normal velocity, the wall's tangential
    velocity, and the isotropic wall-temperature tensor.

    Inputs are the interior wall-adjacent row/column fields.
    """
    Tw = wall.temperature
    if face in ("left", "right"):
        rho_w = wall_density_2d(rho, u1, tt.t11, wall, face)
        un, ut = np.zeros_like(rho_w), np.full_like(rho_w, wall.velocity)
        g1, g2 = un, ut
    else:
        rho_w = wall_density_2d(rho, u2, tt.t22, wall, face)
        un, ut = np.zeros_like(rho_w), np.full_like(rho_w, wall.velocity)
        g1, g2 = ut, un
    return (rho_w, g1, g2, np.full_like(rho_w, Tw),
            np.zeros_like(rho_w), np.full_like(rho_w, Tw))


def _wall_maxwellian_layer(rho, u1, u2, tt, wall, face, v1, v2):
    """The ghost-cell Maxwellian emitted by one wall face; shape
    (n_face, nv1, nv2)."""
    rho_w, g1, g2, t11, _, _ = wall_ghost_state_2d(rho, u1, u2, tt, wall, face)
    w1 = v1[None, :, None] - g1[:, None, None]
    w2 = v2[None, None, :] - g2[:, None, None]
    Tw = wall.temperature
    return (rho_w[:, None, None] / (2.0 * np.pi * Tw)
            * np.exp(-(w1 * w1 + w2 * w2) / (2.0 * Tw)))


def extend_maxwellian_2d(M, rho, u1, u2, tt, bc: BoundarySpec2D, v1, v2,
                         axis: int) -> np.ndarray:
    """One ghost layer per side of the Maxwellian field along one spatial
    axis: wrap, copy, or the wall-emitted Maxwellian (diffuse faces)."""
    lo, hi = _faces_2d(bc, axis)
    names = ("left", "right") if axis == 0 else ("bottom", "top")
    shape = list(M.shape)
    shape[axis] += 2
    M_ext = np.empty(shape)
    core = [slice(None)] * 4
    core[axis] = slice(1, -1)
    M_ext[tuple(core)] = M

    def put(pos, value):
        sl = [slice(None)] * 4
        sl[axis] = pos
        M_ext[tuple(sl)] = value

    def take(arr, pos):
        sl = [slice(None)] * arr.ndim
        sl[axis] = pos
        return arr[tuple(sl)]

    if lo == PERIODIC:
        put(0, take(M, -1))
        put(-1, take(M, 0))
        return M_ext
    for pos, face, name, edge in ((0, lo, names[0], 0), (-1, hi, names[1], -1)):
        if face == EXTRAPOLATE:
            put(pos, take(M, edge))
        else:
            tt_edge = TempTensor2D(take(tt.t11, edge), take(tt.t12, edge),
                                   take(tt.t22, edge))
            put(pos, _wall_maxwellian_layer(
                take(rho, edge), take(u1, edge), take(u2, edge),
                tt_edge, face, name, v1, v2))
    return M_ext


def ghat_override_2d(Ghat, M, rho, u1, u2, T, tt, bc: BoundarySpec2D,
                     v1, v2, dx, dy, tau):
    """Replace the wall-adjacent strips of Ghat in place by
    -(1/tau)(I - Pi)[M_upwind], where M_upwind is the upwind discretization
    of v . grad(Maxwellian) built with ghost wall Maxwellians.

    Only strips next to diffuse-wall faces are overridden; other faces keep
    the closed-form projected transport value already in Ghat.
    """
    wall_faces = [(f, face) for f, face in
                  (("left", bc.left), ("right", bc.right),
                   ("bottom", bc.bottom), ("top", bc.top))
                  if isinstance(face, WallSpec)]
    if not wall_faces:
        return Ghat
    vm1 = np.minimum(v1, 0.0)[None, None, :, None]
    vp1 = np.maximum(v1, 0.0)[None, None, :, None]
    vm2 = np.minimum(v2, 0.0)[None, None, None, :]
    vp2 = np.maximum(v2, 0.0)[None, None, None, :]
    Mx = extend_maxwellian_2d(M, rho, u1, u2, tt, bc, v1, v2, axis=0)
    My = extend_maxwellian_2d(M, rho, u1, u2, tt, bc, v1, v2, axis=1)
    Mterm = (vm1 * (Mx[2:] - M) + vp1 * (M - Mx[:-2])) / dx \
        + (vm2 * (My[:, 2:] - M) + vp2 * (M - My[:, :-2])) / dy
    from micromacro import _kernels as K
    dv = (v1[1] - v1[0]) * (v2[1] - v2[0])
    Pi = K.project_field_2d(np.ascontiguousarray(Mterm), M, rho, u1, u2, T,
                            v1, v2, dv)
    override = -(Mterm - Pi) / tau[:, :, None, None]
    strips = {"left": (slice(0, 1), slice(None)),
              "right": (slice(-1, None), slice(None)),
              "bottom": (slice(None), slice(0, 1)),
              "top": (slice(None), slice(-1, None))}
    for name, _ in wall_faces:
        sl = strips[name]
        Ghat[sl] = override[sl]
    return Ghat


__all__ = [
    "PERIODIC",
    "EXTRAPOLATE",
    "PERIODIC_1D",
    "EXTRAPOLATE_1D",
    "WallSpec",
    "BoundarySpec1D",
    "BoundarySpec2D",
    "wall_density_1d",
    "wall_interface_temperature_1d",
    "interface_temperatures_1d",
    "extend_micro_1d",
    "interface_heat_flux_1d",
    "wall_density_ratio_2d",
    "wall_density_2d",
    "wall_ghost_state_2d",
    "extend_micro_2d",
    "extend_macro_scalar_2d",
    "extend_maxwellian_2d",
    "interface_heat_2d",
    "ghat_override_2d",
]
