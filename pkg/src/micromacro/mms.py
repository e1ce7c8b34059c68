"""Manufactured solutions for convergence verification, their residual
source terms, error norms, and convergence tables.

1D case (periodic on x in [0,1]):

    f(t,x,v) = phi(v) * psi(t,x),   phi(v) = e^{-(v-1)^2} + 2 e^{-(v+1)^2},
    psi(t,x) = 2 + sin(2 pi (x - t))

with exact macro (rho, u, T) = (3 sqrt(pi) psi, -1/3, 25/18) and

    g = (1/eps) (phi(v) - 1.8 e^{-0.04 (3v+1)^2}) psi.

The residual S = f_t + v f_x - (tau/eps)(M - f) reduces to
S = c(t,x) h(v) + tau g with c = 2 pi cos(2 pi (x-t)) and h = (v-1) phi,
so (I - Pi)[S] = c (h - Pi[h]) + tau g, where Pi[h] is evaluated with the
continuum projection at the exact macro state (u, T constant, so Pi[h] is
a function of v only; the three moments of h are (-4, 5.5, -7) sqrt(pi)).

2D case (periodic on [0,1]^2):

    f = e^{-|v|^2} psi (1 + eps chi),  chi = v1^3 - 3 v1^2 v2 - 3 v1 v2^2 + v2^3,
    psi = 2 + sin(a) cos(b),  a = 2 pi (x - t),  b = 2 pi (y - t)

with exact macro (rho, u1, u2, P11, P12, P22) = (pi, 0, 0, pi/2, 0, pi/2) psi
(so T = 1/2 and the temperature tensor is isotropic) and g = e^{-|v|^2} psi chi.
Writing alpha = psi_t, beta = psi_x, gamma = psi_y, the projected residual is

    (I - Pi)[S] = chi e^{-|v|^2} [ eps (alpha + beta v1 + gamma v2) + tau psi ]

and the macro moment source <(1, v1, v2, v1^2, v1 v2, v2^2) S> is

    ( alpha pi, beta pi/2, gamma pi/2,
      alpha pi/2 + (3 eps pi / 4)(beta - gamma),
      -(3 eps pi / 4)(beta + gamma),
      alpha pi/2 + (3 eps pi / 4)(gamma - beta) ).

All closed forms above are hand-derived and pinned against high-resolution
quadrature oracles in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

from micromacro.errors import ConfigurationError

SQRT_PI = math.sqrt(math.pi)

# -- 1D exact fields --------------------------------------------------------

U_EXACT_1D = -1.0 / 3.0
T_EXACT_1D = 25.0 / 18.0
#: moments (integral of h, v h, v^2 h) for h(v) = (v-1) phi(v), over sqrt(pi)
_H_MOMENTS = (-4.0, 5.5, -7.0)


def psi_1d(t, x):
    return 2.0 + np.sin(2.0 * np.pi * (x - t))


def phi_1d(v):
    return np.exp(-(v - 1.0) ** 2) + 2.0 * np.exp(-(v + 1.0) ** 2)


def exact_macro_1d(t, x):
    """(rho, u, T) of the manufactured solution."""
    x = np.asarray(x, dtype=float)
    rho = 3.0 * SQRT_PI * psi_1d(t, x)
    return rho, np.full_like(rho, U_EXACT_1D), np.full_like(rho, T_EXACT_1D)


def exact_micro_1d(t, x, v, eps):
    """g(t,x,v), including the 1/eps prefactor."""
    shape = phi_1d(v) - 1.8 * np.exp(-0.04 * (3.0 * v + 1.0) ** 2)
    return psi_1d(t, np.asarray(x))[:, None] * shape[None, :] / eps


def _h_minus_projection_1d(v):
    """h(v) - Pi[h](v) with h = (v-1) phi, projected at the exact macro."""
    m0, m1, m2 = (m * SQRT_PI for m in _H_MOMENTS)
    u, T = U_EXACT_1D, T_EXACT_1D
    w = (v - u) / math.sqrt(T)
    a1 = m0
    a2 = (m1 - u * m0) / math.sqrt(T)
    a3 = math.sqrt(2.0) * ((m2 - 2.0 * u * m1 + u * u * m0) / (2.0 * T) - 0.5 * m0)
    unit_maxwell = np.exp(-(v - u) ** 2 / (2.0 * T)) / math.sqrt(2.0 * math.pi * T)
    h = (v - 1.0) * phi_1d(v)
    b3 = math.sqrt(2.0) * (0.5 * w * w - 0.5)
    return h - (a1 + w * a2 + b3 * a3) * unit_maxwell


def projected_source_1d(t, x, v, eps, tau):
    """(I - Pi)[S](t, x, v) on the tensor grid x (nx) times v (nv); tau is
    the (constant) collision parameter of the exact state."""
    c = 2.0 * np.pi * np.cos(2.0 * np.pi * (np.asarray(x) - t))
    return (c[:, None] * _h_minus_projection_1d(v)[None, :]
            + tau * exact_micro_1d(t, x, v, eps))


def macro_source_1d(t, x):
    """Moment source <m S> = pi^{3/2} cos(2 pi (x-t)) (-8, 11, -7)."""
    c = math.pi ** 1.5 * np.cos(2.0 * np.pi * (np.asarray(x) - t))
    return c[:, None] * np.array([-8.0, 11.0, -7.0])


def source_1d(t, x, v, eps, tau):
    """Raw residual S = f_t + v f_x - (tau/eps)(M - f) = c h + tau g."""
    c = 2.0 * np.pi * np.cos(2.0 * np.pi * (np.asarray(x) - t))
    h = (v - 1.0) * phi_1d(v)
    return c[:, None] * h[None, :] + tau * exact_micro_1d(t, x, v, eps)


# -- 2D exact fields --------------------------------------------------------

def psi_2d(t, x, y):
    return 2.0 + np.sin(2.0 * np.pi * (x - t)) * np.cos(2.0 * np.pi * (y - t))


def _psi_derivatives_2d(t, x, y):
    """(psi_t, psi_x, psi_y)."""
    a = 2.0 * np.pi * (x - t)
    b = 2.0 * np.pi * (y - t)
    alpha = -2.0 * np.pi * np.cos(a + b)
    beta = 2.0 * np.pi * np.cos(a) * np.cos(b)
    gamma = -2.0 * np.pi * np.sin(a) * np.sin(b)
    return alpha, beta, gamma


def chi_2d(v1, v2):
    """Odd cubic velocity factor with zero collision-invariant moments
    against e^{-|v|^2}."""
    return v1 ** 3 - 3.0 * v1 ** 2 * v2 - 3.0 * v1 * v2 ** 2 + v2 ** 3


def exact_macro_2d(t, x, y):
    """(rho, u1, u2, P11, P12, P22) on the tensor grid of x (nx), y (ny)."""
    psi = psi_2d(t, x[:, None], y[None, :])
    z = np.zeros_like(psi)
    return (np.pi * psi, z, z, 0.5 * np.pi * psi, z.copy(), 0.5 * np.pi * psi)


def exact_micro_2d(t, x, y, v1, v2):
    """g(t,x,y,v1,v2) = e^{-|v|^2} psi chi (no 1/eps factor in 2D)."""
    psi = psi_2d(t, x[:, None], y[None, :])
    vel = (np.exp(-(v1[:, None] ** 2 + v2[None, :] ** 2))
           * chi_2d(v1[:, None], v2[None, :]))
    return psi[:, :, None, None] * vel[None, None, :, :]


def projected_source_terms_2d(t, x, y, v1, v2, eps, tau):
    """Low-rank factors of (I - Pi)[S]: spatial coefficient fields
    (3, nx, ny) and velocity shapes (3, nv1, nv2) with
    (I-Pi)[S] = sum_m coeffs[m] x shapes[m]."""
    X, Y = x[:, None], y[None, :]
    alpha, beta, gamma = _psi_derivatives_2d(t, X, Y)
    psi = psi_2d(t, X, Y)
    coeffs = np.stack([eps * alpha + tau * psi, eps * beta, eps * gamma])
    base = (np.exp(-(v1[:, None] ** 2 + v2[None, :] ** 2))
            * chi_2d(v1[:, None], v2[None, :]))
    shapes = np.stack([base, base * v1[:, None], base * v2[None, :]])
    return np.ascontiguousarray(coeffs), np.ascontiguousarray(shapes)


def macro_source_2d(t, x, y, eps):
    """Moment source <(1, v1, v2, v1^2, v1 v2, v2^2) S> as an
    (nx, ny, 6) field."""
    X, Y = x[:, None], y[None, :]
    alpha, beta, gamma = _psi_derivatives_2d(t, X, Y)
    q = 0.75 * eps * np.pi
    return np.stack([
        np.pi * alpha,
        0.5 * np.pi * beta,
        0.5 * np.pi * gamma,
        0.5 * np.pi * alpha + q * (beta - gamma),
        -q * (beta + gamma),
        0.5 * np.pi * alpha + q * (gamma - beta),
    ], axis=-1)


# -- error norms and tables -------------------------------------------------

def relative_l2(numeric, exact):
    """sqrt( sum |numeric - exact|^2 / sum |exact|^2 ) over all entries."""
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    denom = float(np.sum(exact * exact))
    if denom == 0.0:
        raise ConfigurationError("exact field is identically zero")
    return math.sqrt(float(np.sum((numeric - exact) ** 2)) / denom)


def error_norms(Q, Q_exact, G, G_exact):
    """(macro_error, micro_error) relative L2 norms."""
    return relative_l2(Q, Q_exact), relative_l2(G, G_exact)


def convergence_table(resolutions, macro_errors, micro_errors):
    """Rows of (N, macro_error, log2 ratio, micro_error, log2 ratio); the
    first row's ratios are NaN."""
    rows = []
    for i, n in enumerate(resolutions):
        if i == 0:
            mr = gr = float("nan")
        else:
            mr = math.log2(macro_errors[i - 1] / macro_errors[i])
            gr = math.log2(micro_errors[i - 1] / micro_errors[i])
        rows.append((n, macro_errors[i], mr, micro_errors[i], gr))
    return rows


def write_convergence_table(rows, path):
    """Delimited text: N macro_error macro_ratio micro_error micro_ratio."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# N macro_error macro_ratio micro_error micro_ratio\n")
        for n, me, mr, ge, gr in rows:
            fh.write(f"{n} {me:.17g} {mr:.17g} {ge:.17g} {gr:.17g}\n")


def read_convergence_table(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            rows.append((int(parts[0]),) + tuple(float(p) for p in parts[1:]))
    return rows
