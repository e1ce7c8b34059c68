"""Scaling-study harness.

Weak scaling grows the spatial grid with the worker count
(N_x = N_y = 36 sqrt(P)), so the ideal run time at P workers is
sqrt(P / P_base) times the baseline time. Strong scaling keeps a fixed
360^2 x 14^2 problem, so the ideal time is P_base * t_base / P. The
baseline is the smallest requested worker count and efficiency is
ideal / actual. Records are emitted as one self-describing text row per
run; wall-clock numbers are machine-dependent and never acceptance
targets.
"""

from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

from micromacro.errors import ConfigurationError
from micromacro.runner import frames as fr
from micromacro.runner.cases import default_config, run_single_2d

TABLE_HEADER = ("mode workers nx ny nv1 nv2 steps seconds "
                "ideal_seconds efficiency")


def _square_grid(count: int):
    side = math.isqrt(count)
    if side * side != count:
        raise ConfigurationError(
            f"scaling worker counts must be perfect squares (got {count})")
    return (side, side)


def weak_resolution(count: int) -> int:
    """N_x = N_y = 36 sqrt(P); P must keep it an integer."""
    n = 36.0 * math.sqrt(count)
    if abs(n - round(n)) > 1e-9:
        raise ConfigurationError(
            f"weak scaling needs 36*sqrt(P) integral; P={count} gives {n}")
    return int(round(n))


def ideal_times(mode: str, counts, actual_seconds):
    """Ideal run times with the smallest count as baseline."""
    base = counts[0]
    t_base = actual_seconds[0]
    if mode == "weak":
        return [math.sqrt(c / base) * t_base for c in counts]
    if mode == "strong":
        return [base * t_base / c for c in counts]
    raise ConfigurationError(f"scaling mode must be weak or strong, got {mode!r}")


def _run_config(count: int, mode: str, max_steps: int, nv: int,
                strong_n: int):
    cfg = default_config("lid_cavity")
    n = weak_resolution(count) if mode == "weak" else strong_n
    return replace(cfg, nx=n, ny=n, nv1=nv, nv2=nv,
                   workers=_square_grid(count), max_steps=max_steps)


def scaling_harness(mode: str, worker_counts, max_steps: int = 10,
                    nv: int = 14, strong_n: int = 360, output_dir=None,
                    progress=None):
    """Run the lid-driven case step-count-limited at each worker count and
    return (records, table_path or None). Counts must be ascending perfect
    squares; the smallest is the baseline."""
    counts = sorted(int(c) for c in worker_counts)
    if not counts:
        raise ConfigurationError("no worker counts requested")
    records = []
    for count in counts:
        cfg = _run_config(count, mode, max_steps, nv, strong_n)
        rec = run_single_2d(cfg, cfg.epsilon)
        records.append({
            "mode": mode, "workers": count,
            "nx": cfg.nx, "ny": cfg.ny, "nv1": cfg.nv1, "nv2": cfg.nv2,
            "steps": rec.steps_run, "seconds": rec.seconds,
        })
        if progress is not None:
            progress(count, rec.seconds)
    ideals = ideal_times(mode, counts, [r["seconds"] for r in records])
    for r, ideal in zip(records, ideals):
        r["ideal_seconds"] = ideal
        r["efficiency"] = ideal / r["seconds"]
    path = None
    if output_dir is not None:
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / f"scaling_{mode}.txt"
        _write_records(path, records)
    return records, path


def _write_records(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {TABLE_HEADER}\n")
        for r in records:
            fh.write(f"{r['mode']} {r['workers']} {r['nx']} {r['ny']} "
                     f"{r['nv1']} {r['nv2']} {r['steps']} "
                     f"{r['seconds']:.17g} {r['ideal_seconds']:.17g} "
                     f"{r['efficiency']:.17g}\n")


def read_records(path):
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            t = line.split()
            records.append({
                "mode": t[0], "workers": int(t[1]), "nx": int(t[2]),
                "ny": int(t[3]), "nv1": int(t[4]), "nv2": int(t[5]),
                "steps": int(t[6]), "seconds": float(t[7]),
                "ideal_seconds": float(t[8]), "efficiency": float(t[9]),
            })
    return records


__all__ = [
    "TABLE_HEADER",
    "weak_resolution",
    "ideal_times",
    "scaling_harness",
    "read_records",
]
