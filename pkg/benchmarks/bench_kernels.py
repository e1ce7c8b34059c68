#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-numpy fallback.

Runs every hot kernel on identical inputs with both implementations,
reports per-call timings and speedups, and cross-checks that the two
backends agree to near machine precision.

Usage:
    python3 benchmarks/bench_kernels.py [--nx 60] [--ny 60] [--nv 24]
                                        [--repeat 5]
"""

import argparse
import time

import numpy as np

from micromacro._kernels import _fallback

try:
    from micromacro._kernels import _core
except ImportError:
    _core = None

RNG = np.random.default_rng(12345)


def _c(a):
    return np.ascontiguousarray(a)


def make_inputs(nx, ny, nv):
    x = (np.arange(nx) + 0.5) / nx
    y = (np.arange(ny) + 0.5) / ny
    X, Y = np.meshgrid(x, y, indexing="ij")
    v = np.linspace(-6.0 + 6.0 / nv, 6.0 - 6.0 / nv, nv)
    dv = v[1] - v[0]
    rho = _c(1.0 + 0.3 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y))
    u1 = _c(0.15 * np.cos(2 * np.pi * X))
    u2 = _c(-0.1 * np.sin(2 * np.pi * Y))
    T = _c(0.9 + 0.1 * np.cos(2 * np.pi * (X + Y)))
    M = _c(_fallback.maxwellian_field_2d(rho, u1, u2, T, v, v))
    G = _c(0.01 * RNG.standard_normal((nx, ny, nv, nv)))
    G_ext2 = _c(0.01 * RNG.standard_normal((nx + 2, ny, nv, nv)))
    F = _c(RNG.standard_normal((nx, ny, nv, nv)))
    s11 = _c(0.1 * RNG.standard_normal((nx, ny)))
    s12 = _c(0.1 * RNG.standard_normal((nx, ny)))
    gT1 = _c(0.1 * RNG.standard_normal((nx, ny)))
    gT2 = _c(0.1 * RNG.standard_normal((nx, ny)))
    tau = _c(np.full((nx, ny), 0.7))
    m11 = _c(T * 1.05)
    m12 = _c(0.02 * np.ones_like(T))
    m22 = _c(T * 0.95)
    coeffs = _c(RNG.standard_normal((3, nx, ny)))
    shapes = _c(RNG.standard_normal((3, nv, nv)))
    Ghat = _c(0.01 * RNG.standard_normal((nx, ny, nv, nv)))

    rho1 = _c(rho[:, 0])
    u1d = _c(u1[:, 0])
    T1d = _c(T[:, 0])
    M1d = _c(np.exp(-((v[None, :] - u1d[:, None]) ** 2)
                    / (2 * T1d[:, None]))
             * rho1[:, None] / np.sqrt(2 * np.pi * T1d[:, None]))
    F1d = _c(RNG.standard_normal((nx, nv)))
    G_ext1 = _c(0.01 * RNG.standard_normal((nx + 2, nv)))

    dt, dx, eps = 1e-3, 1.0 / nx, 0.08
    return [
        ("upwind_z_1d", (G_ext1, v, dx)),
        ("project_field_1d", (F1d, M1d, rho1, u1d, T1d, v, dv)),
        ("maxwellian_field_2d", (rho, u1, u2, T, v, v)),
        ("project_field_2d", (F, M, rho, u1, u2, T, v, v, dv)),
        ("transport_stage_2d", (G_ext2, M, rho, u1, u2, T, v, v, dx, dt, 0)),
        ("ghat_2d", (M, rho, u1, u2, T, s11, s12, gT1, gT2, tau, v, v)),
        # first argument is updated in place: mark it so each timed call
        # gets a fresh copy and the backends can be compared fairly
        ("add_gaussian_term_2d", ("COPY", Ghat, M, rho, u1, u2,
                                  m11, m12, m22, eps, v, v)),
        ("add_lowrank_4d", ("COPY", Ghat, coeffs, shapes)),
        ("relax_2d", (G, Ghat, tau, dt, eps)),
        ("heat_tensor_2d", (G, u1, u2, v, v, dv * dv, eps)),
    ]


def time_call(fn, args, repeat):
    in_place = args and isinstance(args[0], str) and args[0] == "COPY"
    if in_place:
        args = args[1:]
    best = float("inf")
    out = None
    for _ in range(repeat):
        call = (np.array(args[0]),) + args[1:] if in_place else args
        t0 = time.perf_counter()
        out = fn(*call)
        best = min(best, time.perf_counter() - t0)
        if in_place:
            out = call[0]
    return best, out


def rel_dev(a, b):
    if a is None or b is None:
        return 0.0
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.dtype == object or a.shape != b.shape:
        return float("nan")
    scale = float(np.max(np.abs(b))) + 1e-300
    return float(np.max(np.abs(a - b))) / scale


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nx", type=int, default=60)
    ap.add_argument("--ny", type=int, default=60)
    ap.add_argument("--nv", type=int, default=24)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _core is None:
        print("compiled backend not importable; nothing to compare")
        return 1

    cases = make_inputs(args.nx, args.ny, args.nv)
    print(f"grid {args.nx}x{args.ny}, velocity {args.nv}x{args.nv}, "
          f"best of {args.repeat} runs\n")
    print(f"{'kernel':<22} {'python':>10} {'compiled':>10} "
          f"{'speedup':>8} {'max rel dev':>12}")
    for name, call_args in cases:
        t_py, out_py = time_call(getattr(_fallback, name), call_args,
                                 args.repeat)
        t_c, out_c = time_call(getattr(_core, name), call_args, args.repeat)
        if isinstance(out_py, tuple):
            dev = max(rel_dev(a, b) for a, b in zip(out_py, out_c))
        else:
            dev = rel_dev(out_py, out_c)
        print(f"{name:<22} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms "
              f"{t_py / t_c:>7.1f}x {dev:>12.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
