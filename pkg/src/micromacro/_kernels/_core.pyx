# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Mirrors the contract of ``_fallback`` (same function names and call
signatures) with fused per-spatial-cell loops: no 4D temporaries beyond the
explicit output arrays, which matters for the largest 2D phase grids.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()

cdef double PI = 3.141592653589793238462643383279502884
cdef double SQRT2 = 1.4142135623730950488016887242096980786


def upwind_z_1d(double[:, ::1] G_ext, double[::1] v, double dx):
    cdef Py_ssize_t nx = G_ext.shape[0] - 2, nv = G_ext.shape[1]
    cdef Py_ssize_t i, k
    cdef double vk
    Z_arr = np.empty((nx, nv))
    cdef double[:, ::1] Z = Z_arr
    for i in range(nx):
        for k in range(nv):
            vk = v[k]
            if vk >= 0.0:
                Z[i, k] = vk * (G_ext[i + 1, k] - G_ext[i, k]) / dx
            else:
                Z[i, k] = vk * (G_ext[i + 2, k] - G_ext[i + 1, k]) / dx
    return Z_arr


def project_field_1d(double[:, ::1] F, double[:, ::1] M, double[::1] rho,
                     double[::1] u, double[::1] T, double[::1] v, double dv):
    cdef Py_ssize_t nx = F.shape[0], nv = F.shape[1]
    cdef Py_ssize_t i, k
    cdef double st, scale, a1, a2, a3, w, b3, f
    out_arr = np.empty((nx, nv))
    cdef double[:, ::1] out = out_arr
    for i in range(nx):
        st = sqrt(T[i])
        scale = dv / rho[i]
        a1 = 0.0
        a2 = 0.0
        a3 = 0.0
        for k in range(nv):
            w = (v[k] - u[i]) / st
            b3 = SQRT2 * (0.5 * w * w - 0.5)
            f = F[i, k]
            a1 += f
            a2 += f * w
            a3 += f * b3
        a1 *= scale
        a2 *= scale
        a3 *= scale
        for k in range(nv):
            w = (v[k] - u[i]) / st
            b3 = SQRT2 * (0.5 * w * w - 0.5)
            out[i, k] = (a1 + w * a2 + b3 * a3) * M[i, k]
    return out_arr


def maxwellian_field_2d(double[:, ::1] rho, double[:, ::1] u1,
                        double[:, ::1] u2, double[:, ::1] T,
                        double[::1] v1, double[::1] v2, out=None):
    cdef Py_ssize_t nx = rho.shape[0], ny = rho.shape[1]
    cdef Py_ssize_t nv1 = v1.shape[0], nv2 = v2.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double pref, inv2T, w1, w2
    out_arr = out if out is not None else np.empty((nx, ny, nv1, nv2))
    cdef double[:, :, :, ::1] M = out_arr
    for i in range(nx):
        for j in range(ny):
            pref = rho[i, j] / (2.0 * PI * T[i, j])
            inv2T = 1.0 / (2.0 * T[i, j])
            for k in range(nv1):
                w1 = v1[k] - u1[i, j]
                for l in range(nv2):
                    w2 = v2[l] - u2[i, j]
                    M[i, j, k, l] = pref * exp(-(w1 * w1 + w2 * w2) * inv2T)
    return out_arr


def project_field_2d(double[:, :, :, ::1] F, double[:, :, :, ::1] M,
                     double[:, ::1] rho, double[:, ::1] u1, double[:, ::1] u2,
                     double[:, ::1] T, double[::1] v1, double[::1] v2,
                     double dv):
    cdef Py_ssize_t nx = F.shape[0], ny = F.shape[1]
    cdef Py_ssize_t nv1 = F.shape[2], nv2 = F.shape[3]
    cdef Py_ssize_t i, j, k, l
    cdef double st, scale, a1, a2, a3, a4, w1, w2, b4, f
    out_arr = np.empty((nx, ny, nv1, nv2))
    cdef double[:, :, :, ::1] out = out_arr
    for i in range(nx):
        for j in range(ny):
            st = sqrt(T[i, j])
            scale = dv / rho[i, j]
            a1 = 0.0
            a2 = 0.0
            a3 = 0.0
            a4 = 0.0
            for k in range(nv1):
                w1 = (v1[k] - u1[i, j]) / st
                for l in range(nv2):
                    w2 = (v2[l] - u2[i, j]) / st
                    b4 = 0.5 * (w1 * w1 + w2 * w2) - 1.0
                    f = F[i, j, k, l]
                    a1 += f
                    a2 += f * w1
                    a3 += f * w2
                    a4 += f * b4
            a1 *= scale
            a2 *= scale
            a3 *= scale
            a4 *= scale
            for k in range(nv1):
                w1 = (v1[k] - u1[i, j]) / st
                for l in range(nv2):
                    w2 = (v2[l] - u2[i, j]) / st
                    b4 = 0.5 * (w1 * w1 + w2 * w2) - 1.0
                    out[i, j, k, l] = (a1 + w1 * a2 + w2 * a3 + b4 * a4) * M[i, j, k, l]
    return out_arr


def transport_stage_2d(double[:, :, :, ::1] G_ext, double[:, :, :, ::1] M,
                       double[:, ::1] rho, double[:, ::1] u1,
                       double[:, ::1] u2, double[:, ::1] T,
                       double[::1] v1, double[::1] v2, double d, double dt,
                       int axis, out=None):
    cdef Py_ssize_t nv1 = v1.shape[0], nv2 = v2.shape[0]
    cdef Py_ssize_t nx, ny, i, j, k, l, io, jo
    cdef double st, scale, a1, a2, a3, a4, w1, w2, b4, z, vk, zh
    cdef double dv = (v1[1] - v1[0]) * (v2[1] - v2[0])
    if axis == 0:
        nx = G_ext.shape[0] - 2
        ny = G_ext.shape[1]
    else:
        nx = G_ext.shape[0]
        ny = G_ext.shape[1] - 2
    out_arr = out if out is not None else np.empty((nx, ny, nv1, nv2))
    cdef double[:, :, :, ::1] res = out_arr
    zbuf_arr = np.empty((nv1, nv2))
    cdef double[:, ::1] zbuf = zbuf_arr
    for i in range(nx):
        for j in range(ny):
            io = i + 1 if axis == 0 else i
            jo = j + 1 if axis == 1 else j
            # Z row for this spatial cell into zbuf
            if axis == 0:
                for k in range(nv1):
                    vk = v1[k]
                    if vk >= 0.0:
                        for l in range(nv2):
                            zbuf[k, l] = vk * (G_ext[io, jo, k, l] - G_ext[io - 1, jo, k, l]) / d
                    else:
                        for l in range(nv2):
                            zbuf[k, l] = vk * (G_ext[io + 1, jo, k, l] - G_ext[io, jo, k, l]) / d
            else:
                for k in range(nv1):
                    for l in range(nv2):
                        vk = v2[l]
                        if vk >= 0.0:
                            zbuf[k, l] = vk * (G_ext[io, jo, k, l] - G_ext[io, jo - 1, k, l]) / d
                        else:
                            zbuf[k, l] = vk * (G_ext[io, jo + 1, k, l] - G_ext[io, jo, k, l]) / d
            # projection coefficients of Z
            st = sqrt(T[i, j])
            scale = dv / rho[i, j]
            a1 = 0.0
            a2 = 0.0
            a3 = 0.0
            a4 = 0.0
            for k in range(nv1):
                w1 = (v1[k] - u1[i, j]) / st
                for l in range(nv2):
                    w2 = (v2[l] - u2[i, j]) / st
                    b4 = 0.5 * (w1 * w1 + w2 * w2) - 1.0
                    z = zbuf[k, l]
                    a1 += z
                    a2 += z * w1
                    a3 += z * w2
                    a4 += z * b4
            a1 *= scale
            a2 *= scale
            a3 *= scale
            a4 *= scale
            # G* = G - dt * (Z - Zhat)
            for k in range(nv1):
                w1 = (v1[k] - u1[i, j]) / st
                for l in range(nv2):
                    w2 = (v2[l] - u2[i, j]) / st
                    b4 = 0.5 * (w1 * w1 + w2 * w2) - 1.0
                    zh = (a1 + w1 * a2 + w2 * a3 + b4 * a4) * M[i, j, k, l]
                    res[i, j, k, l] = G_ext[io, jo, k, l] - dt * (zbuf[k, l] - zh)
    return out_arr


def ghat_2d(double[:, :, :, ::1] M, double[:, ::1] rho, double[:, ::1] u1,
            double[:, ::1] u2, double[:, ::1] T, double[:, ::1] s11,
            double[:, ::1] s12, double[:, ::1] gT1, double[:, ::1] gT2,
            double[:, ::1] tau, double[::1] v1, double[::1] v2, out=None):
    cdef Py_ssize_t nx = rho.shape[0], ny = rho.shape[1]
    cdef Py_ssize_t nv1 = v1.shape[0], nv2 = v2.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double inv2T, invT, invtau, w1, w2, bs, cg
    out_arr = out if out is not None else np.empty((nx, ny, nv1, nv2))
    cdef double[:, :, :, ::1] res = out_arr
    for i in range(nx):
        for j in range(ny):
            inv2T = 1.0 / (2.0 * T[i, j])
            invT = 1.0 / T[i, j]
            invtau = 1.0 / tau[i, j]
            for k in range(nv1):
                w1 = v1[k] - u1[i, j]
                for l in range(nv2):
                    w2 = v2[l] - u2[i, j]
                    bs = (-w2 * w2 * s11[i, j] + 2.0 * w1 * w2 * s12[i, j]
                          + w1 * w1 * s11[i, j]) * inv2T
                    cg = ((w1 * w1 + w2 * w2) * inv2T - 2.0) * (
                        w1 * gT1[i, j] + w2 * gT2[i, j]) * invT
                    res[i, j, k, l] = -(bs + cg) * M[i, j, k, l] * invtau
    return out_arr


def add_gaussian_term_2d(double[:, :, :, ::1] Ghat, double[:, :, :, ::1] M,
                         double[:, ::1] rho, double[:, ::1] u1,
                         double[:, ::1] u2, double[:, ::1] m11,
                         double[:, ::1] m12, double[:, ::1] m22, double eps,
                         double[::1] v1, double[::1] v2):
    cdef Py_ssize_t nx = rho.shape[0], ny = rho.shape[1]
    cdef Py_ssize_t nv1 = v1.shape[0], nv2 = v2.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double det, pref, c11, c12, c22, w1, w2, quad, inveps = 1.0 / eps
    for i in range(nx):
        for j in range(ny):
            c11 = m11[i, j]
            c12 = m12[i, j]
            c22 = m22[i, j]
            det = c11 * c22 - c12 * c12
            pref = rho[i, j] / (2.0 * PI * sqrt(det))
            for k in range(nv1):
                w1 = v1[k] - u1[i, j]
                for l in range(nv2):
                    w2 = v2[l] - u2[i, j]
                    quad = (c22 * w1 * w1 - 2.0 * c12 * w1 * w2 + c11 * w2 * w2) / det
                    Ghat[i, j, k, l] += (pref * exp(-0.5 * quad) - M[i, j, k, l]) * inveps
    return np.asarray(Ghat)


def add_lowrank_4d(double[:, :, :, ::1] out, double[:, :, ::1] coeffs,
                   double[:, :, ::1] shapes):
    cdef Py_ssize_t nterms = coeffs.shape[0]
    cdef Py_ssize_t nx = out.shape[0], ny = out.shape[1]
    cdef Py_ssize_t nv1 = out.shape[2], nv2 = out.shape[3]
    cdef Py_ssize_t m, i, j, k, l
    cdef double c
    for i in range(nx):
        for j in range(ny):
            for m in range(nterms):
                c = coeffs[m, i, j]
                for k in range(nv1):
                    for l in range(nv2):
                        out[i, j, k, l] += c * shapes[m, k, l]
    return np.asarray(out)


def relax_2d(double[:, :, :, ::1] G, double[:, :, :, ::1] Ghat,
             double[:, ::1] tau, double dt, double eps, out=None):
    cdef Py_ssize_t nx = G.shape[0], ny = G.shape[1]
    cdef Py_ssize_t nv1 = G.shape[2], nv2 = G.shape[3]
    cdef Py_ssize_t i, j, k, l
    cdef double denom, wg, wh
    out_arr = out if out is not None else np.empty((nx, ny, nv1, nv2))
    cdef double[:, :, :, ::1] res = out_arr
    for i in range(nx):
        for j in range(ny):
            denom = eps + dt * tau[i, j]
            wg = eps / denom
            wh = dt * tau[i, j] / denom
            for k in range(nv1):
                for l in range(nv2):
                    res[i, j, k, l] = wg * G[i, j, k, l] + wh * Ghat[i, j, k, l]
    return out_arr


def heat_tensor_2d(double[:, :, :, ::1] G, double[:, ::1] u1,
                   double[:, ::1] u2, double[::1] v1, double[::1] v2,
                   double dv, double eps):
    cdef Py_ssize_t nx = G.shape[0], ny = G.shape[1]
    cdef Py_ssize_t nv1 = G.shape[2], nv2 = G.shape[3]
    cdef Py_ssize_t i, j, k, l
    cdef double w1, w2, g, f = eps * dv
    cdef double s111, s112, s122, s222
    h111_arr = np.empty((nx, ny))
    h112_arr = np.empty((nx, ny))
    h122_arr = np.empty((nx, ny))
    h222_arr = np.empty((nx, ny))
    cdef double[:, ::1] h111 = h111_arr, h112 = h112_arr
    cdef double[:, ::1] h122 = h122_arr, h222 = h222_arr
    for i in range(nx):
        for j in range(ny):
            s111 = 0.0
            s112 = 0.0
            s122 = 0.0
            s222 = 0.0
            for k in range(nv1):
                w1 = v1[k] - u1[i, j]
                for l in range(nv2):
                    w2 = v2[l] - u2[i, j]
                    g = G[i, j, k, l]
                    s111 += w1 * w1 * w1 * g
                    s112 += w1 * w1 * w2 * g
                    s122 += w1 * w2 * w2 * g
                    s222 += w2 * w2 * w2 * g
            h111[i, j] = f * s111
            h112[i, j] = f * s112
            h122[i, j] = f * s122
            h222[i, j] = f * s222
    return h111_arr, h112_arr, h122_arr, h222_arr
