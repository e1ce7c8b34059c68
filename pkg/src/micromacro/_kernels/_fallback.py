"""Pure-numpy reference implementations of the hot kernels.

Semantics here define the kernel contract; the compiled backend in
``_core.pyx`` must agree with these up to floating-point reassociation of
the per-cell velocity reductions (numpy sums pairwise, the compiled loops
sum left to right), which a cross-backend parity test pins at 1e-12.

Array layouts:
    1D: G[i, k]           (nx, nv)
    2D: G[i, j, k, l]     (nx, ny, nv1, nv2)
Halo-extended inputs carry exactly one ghost layer on the differenced axis.
"""

from __future__ import annotations

import math

import numpy as np

_SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# 1D kernels
# ---------------------------------------------------------------------------

def upwind_z_1d(G_ext, v, dx):
    """Z = v^- (G_{i+1}-G_i)/dx + v^+ (G_i - G_{i-1})/dx; G_ext is
    (nx+2, nv)."""
    vm = np.minimum(v, 0.0)
    vp = np.maximum(v, 0.0)
    return (vm * (G_ext[2:] - G_ext[1:-1]) + vp * (G_ext[1:-1] - G_ext[:-2])) / dx


def project_field_1d(F, M, rho, u, T, v, dv):
    """Per-spatial-cell nullspace projection of F (nx, nv); M is the
    matching Maxwellian field."""
    w = (v[None, :] - u[:, None]) / np.sqrt(T)[:, None]
    b3 = _SQRT2 * (0.5 * w * w - 0.5)
    scale = dv / rho
    a1 = scale * F.sum(axis=1)
    a2 = scale * (F * w).sum(axis=1)
    a3 = scale * (F * b3).sum(axis=1)
    return (a1[:, None] + w * a2[:, None] + b3 * a3[:, None]) * M


# ---------------------------------------------------------------------------
# 2D kernels
# ---------------------------------------------------------------------------

def maxwellian_field_2d(rho, u1, u2, T, v1, v2, out=None):
    """Maxwellian at every phase cell; spatial fields are (nx, ny)."""
    w1 = v1[None, None, :, None] - u1[:, :, None, None]
    w2 = v2[None, None, None, :] - u2[:, :, None, None]
    Tf = T[:, :, None, None]
    M = rho[:, :, None, None] / (2.0 * np.pi * Tf) * np.exp(
        -(w1 * w1 + w2 * w2) / (2.0 * Tf))
    if out is None:
        return M
    out[:] = M
    return out


def project_field_2d(F, M, rho, u1, u2, T, v1, v2, dv):
    """Per-spatial-cell 2D nullspace projection; F, M are (nx, ny, nv1,
    nv2), dv = dv1*dv2."""
    st = np.sqrt(T)[:, :, None, None]
    w1 = (v1[None, None, :, None] - u1[:, :, None, None]) / st
    w2 = (v2[None, None, None, :] - u2[:, :, None, None]) / st
    b4 = 0.5 * (w1 * w1 + w2 * w2) - 1.0
    scale = (dv / rho)[:, :, None, None]
    a1 = scale * F.sum(axis=(2, 3), keepdims=True)
    a2 = scale * (F * w1).sum(axis=(2, 3), keepdims=True)
    a3 = scale * (F * w2).sum(axis=(2, 3), keepdims=True)
    a4 = scale * (F * b4).sum(axis=(2, 3), keepdims=True)
    return (a1 + w1 * a2 + w2 * a3 + b4 * a4) * M


def transport_stage_2d(G_ext, M, rho, u1, u2, T, v1, v2, d, dt, axis, out=None):
    """One split transport stage: out = G - dt*(Z - Zhat).

    axis 0: x-differences upwinded on v1 (G_ext is (nx+2, ny, nv1, nv2));
    axis 1: y-differences upwinded on v2 (G_ext is (nx, ny+2, nv1, nv2)).
    """
    if axis == 0:
        vm = np.minimum(v1, 0.0)[None, None, :, None]
        vp = np.maximum(v1, 0.0)[None, None, :, None]
        G = G_ext[1:-1]
        Z = (vm * (G_ext[2:] - G) + vp * (G - G_ext[:-2])) / d
    else:
        vm = np.minimum(v2, 0.0)[None, None, None, :]
        vp = np.maximum(v2, 0.0)[None, None, None, :]
        G = G_ext[:, 1:-1]
        Z = (vm * (G_ext[:, 2:] - G) + vp * (G - G_ext[:, :-2])) / d
    dv = (v1[1] - v1[0]) * (v2[1] - v2[0])
    Zhat = project_field_2d(Z, M, rho, u1, u2, T, v1, v2, dv)
    result = G - dt * (Z - Zhat)
    if out is None:
        return result
    out[:] = result
    return out


def ghat_2d(M, rho, u1, u2, T, s11, s12, gT1, gT2, tau, v1, v2, out=None):
    """Ghat transport part: -(1/tau) * (B:sigma + C.gradT) * M.

    sigma = [[s11, s12], [s12, -s11]] (traceless symmetric); the
    anisotropic (1/eps)(Gaussian - Maxwellian) term is added separately by
    add_gaussian_term_2d.
    """
    w1 = v1[None, None, :, None] - u1[:, :, None, None]
    w2 = v2[None, None, None, :] - u2[:, :, None, None]
    Tf = T[:, :, None, None]
    bs = (-w2 * w2 * s11[:, :, None, None]
          + 2.0 * w1 * w2 * s12[:, :, None, None]
          + w1 * w1 * s11[:, :, None, None]) / (2.0 * Tf)
    cfac = (w1 * w1 + w2 * w2) / (2.0 * Tf) - 2.0
    cg = cfac * (w1 * gT1[:, :, None, None] + w2 * gT2[:, :, None, None]) / Tf
    result = -(bs + cg) * M / tau[:, :, None, None]
    if out is None:
        return result
    out[:] = result
    return out


def add_gaussian_term_2d(Ghat, M, rho, u1, u2, m11, m12, m22, eps, v1, v2):
    """Ghat += (1/eps) * (anisotropic Gaussian - Maxwellian), in place."""
    c11 = m11[:, :, None, None]
    c12 = m12[:, :, None, None]
    c22 = m22[:, :, None, None]
    det = c11 * c22 - c12 * c12
    w1 = v1[None, None, :, None] - u1[:, :, None, None]
    w2 = v2[None, None, None, :] - u2[:, :, None, None]
    quad = (c22 * w1 * w1 - 2.0 * c12 * w1 * w2 + c11 * w2 * w2) / det
    G = rho[:, :, None, None] / (2.0 * np.pi * np.sqrt(det)) * np.exp(-0.5 * quad)
    Ghat += (G - M) / eps
    return Ghat


def add_lowrank_4d(out, coeffs, shapes):
    """out[i,j,k,l] += sum_m coeffs[m,i,j] * shapes[m,k,l], in place."""
    for c, s in zip(coeffs, shapes):
        out += c[:, :, None, None] * s[None, None, :, :]
    return out


def relax_2d(G, Ghat, tau, dt, eps, out=None):
    """Backward-Euler collision stage:
    out = eps/(eps+dt*tau) G + dt*tau/(eps+dt*tau) Ghat."""
    denom = eps + dt * tau
    wg = (eps / denom)[:, :, None, None]
    wh = (dt * tau / denom)[:, :, None, None]
    result = wg * G + wh * Ghat
    if out is None:
        return result
    out[:] = result
    return out


def heat_tensor_2d(G, u1, u2, v1, v2, dv, eps):
    """Third central velocity moments of G:
    H_abc = eps * dv * sum (v-u)_a (v-u)_b (v-u)_c G.

    Returns (h111, h112, h122, h222), each (nx, ny).
    """
    w1 = v1[None, None, :, None] - u1[:, :, None, None]
    w2 = v2[None, None, None, :] - u2[:, :, None, None]
    f = eps * dv
    h111 = f * (w1 * w1 * w1 * G).sum(axis=(2, 3))
    h112 = f * (w1 * w1 * w2 * G).sum(axis=(2, 3))
    h122 = f * (w1 * w2 * w2 * G).sum(axis=(2, 3))
    h222 = f * (w2 * w2 * w2 * G).sum(axis=(2, 3))
    return h111, h112, h122, h222
