"""Figure builders.

Each builder takes the directory holding the solver's output files and
returns a matplotlib Figure.  All layouts are deterministic: fixed sizes,
per-panel color scales from the data extrema (printed in the title), and
a uniform 16x16 seed lattice for streamlines.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from plots.io import (PlotInputError, read_convergence, read_frame,
                      read_records, read_table)  # noqa: E402

# reference closures overlaid on the Knudsen-sweep figure
NSF_SCALED_FLUX = 0.3
FREE_MOLECULAR_COEFF = 0.083422728489775170621
HARMONIC_COEFF = 0.0834227284897751706
HARMONIC_SHIFT = 0.2780757616325839021

# spatial domain of the reference shock-tube case; frames carry only grid
# dimensions, so the domain is part of the case definition
SHOCKTUBE_DOMAIN = (-0.25, 1.25)
SHOCKTUBE_WINDOW = (0.0, 1.0)

STREAM_SEEDS = 16


def _centers(lo, hi, n):
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def _titled(ax, label, values):
    mn, mx = float(np.min(values)), float(np.max(values))
    ax.set_title(f"{label}  [min {mn:.4g}, max {mx:.4g}]", fontsize=10)


def _require(paths, where, what):
    if not paths:
        raise PlotInputError(f"{where}: no {what} found")
    return paths


# ---------------------------------------------------------------------------
# shock tube: four line-plot panels, one curve per Knudsen number
# ---------------------------------------------------------------------------

_EPS_RE = re.compile(r"_eps([0-9eE.+-]+)_final\.txt$")


def shocktube_figure(input_dir) -> plt.Figure:
    input_dir = Path(input_dir)
    matches = []
    for path in sorted(input_dir.glob("shocktube_eps*_final.txt")):
        m = _EPS_RE.search(path.name)
        if m:
            matches.append((float(m.group(1)), path))
    _require(matches, input_dir, "shocktube_eps*_final.txt frames")
    matches.sort(key=lambda t: -t[0])

    fig, axes = plt.subplots(2, 2, figsize=(9, 7), constrained_layout=True)
    panels = {name: [] for name in ("rho", "u", "T", "h_scaled")}
    for eps, path in matches:
        frame = read_frame(path)
        nx = frame.dims[0]
        x = _centers(*SHOCKTUBE_DOMAIN, nx)
        rho = frame.field_grid("rho")
        u = frame.field_grid("mom") / rho
        T = (2.0 * frame.field_grid("energy") - rho * u * u) / rho
        h = frame.field_grid("heat") / eps
        window = (x >= SHOCKTUBE_WINDOW[0]) & (x <= SHOCKTUBE_WINDOW[1])
        for name, vals in (("rho", rho), ("u", u), ("T", T),
                           ("h_scaled", h)):
            panels[name].append((eps, x[window], vals[window]))

    labels = (("rho", "density"), ("u", "velocity"),
              ("T", "temperature"), ("h_scaled", "heat flux / epsilon"))
    for ax, (name, label) in zip(axes.flat, labels):
        all_vals = []
        for eps, x, vals in panels[name]:
            ax.plot(x, vals, label=f"eps = {eps:g}", linewidth=1.2)
            all_vals.append(vals)
        _titled(ax, label, np.concatenate(all_vals))
        ax.set_xlabel("x")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    return fig


# ---------------------------------------------------------------------------
# Knudsen sweep: scaled heat flux with the three reference closures
# ---------------------------------------------------------------------------

def knudsen_figure(input_dir) -> plt.Figure:
    path = Path(input_dir) / "sweep.txt"
    if not path.exists():
        raise PlotInputError(f"{input_dir}: no sweep.txt found")
    table = read_table(path)
    if table.shape[1] != 2:
        raise PlotInputError(f"{path}: expected 2 columns (epsilon, "
                             f"h_scaled), got {table.shape[1]}")
    eps, h = table[:, 0], table[:, 1]

    fig, ax = plt.subplots(figsize=(6.5, 5), constrained_layout=True)
    grid = np.logspace(np.log10(eps.min()), np.log10(eps.max()), 200)
    ax.loglog(grid, np.full_like(grid, NSF_SCALED_FLUX), "--",
              label="Navier-Stokes-Fourier", color="tab:green")
    ax.loglog(grid, FREE_MOLECULAR_COEFF / grid, "-.",
              label="free molecular", color="tab:red")
    ax.loglog(grid, HARMONIC_COEFF / (HARMONIC_SHIFT + grid), ":",
              label="harmonic average", color="tab:purple")
    ax.loglog(eps, h, "o-", label="computed", color="tab:blue",
              markersize=4)
    _titled(ax, "scaled heat flux |h|/epsilon at x = 0.5", h)
    ax.set_xlabel("Knudsen number")
    ax.set_ylabel("|h| / epsilon")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=9)
    return fig


# ---------------------------------------------------------------------------
# lid-driven cavity: six color panels with streamlines
# ---------------------------------------------------------------------------

def _stream(ax, x, y, U, V):
    """Streamlines from a deterministic uniform seed lattice.  streamplot
    expects arrays indexed (y, x)."""
    seeds_1d = np.linspace(0.0, 1.0, STREAM_SEEDS + 2)[1:-1]
    sx = x[0] + seeds_1d * (x[-1] - x[0])
    sy = y[0] + seeds_1d * (y[-1] - y[0])
    SX, SY = np.meshgrid(sx, sy)
    pts = np.column_stack([SX.ravel(), SY.ravel()])
    ax.streamplot(x, y, U.T, V.T, start_points=pts, color="k",
                  linewidth=0.5, arrowsize=0.7, density=10)


def cavity_figure(input_dir) -> plt.Figure:
    path = Path(input_dir) / "lid_cavity_final.txt"
    if not path.exists():
        raise PlotInputError(f"{input_dir}: no lid_cavity_final.txt found")
    frame = read_frame(path)
    nx, ny = frame.dims
    x = _centers(0.0, 1.0, nx)
    y = _centers(0.0, 1.0, ny)

    rho = frame.field_grid("rho")
    u1 = frame.field_grid("mom1") / rho
    u2 = frame.field_grid("mom2") / rho
    p11 = frame.field_grid("e11") - rho * u1 * u1
    p12 = frame.field_grid("e12") - rho * u1 * u2
    p22 = frame.field_grid("e22") - rho * u2 * u2
    T = 0.5 * (p11 + p22) / rho
    h1 = 0.5 * (frame.field_grid("h111") + frame.field_grid("h122"))
    h2 = 0.5 * (frame.field_grid("h112") + frame.field_grid("h222"))
    hmag = np.hypot(h1, h2)

    fig, axes = plt.subplots(2, 3, figsize=(13, 8), constrained_layout=True)
    panels = (
        ("density", rho, None),
        ("off-diagonal pressure P12 + velocity streamlines", p12, (u1, u2)),
        ("velocity u1", u1, None),
        ("velocity u2", u2, None),
        ("temperature + heat flux streamlines", T, (h1, h2)),
        ("heat flux magnitude", hmag, None),
    )
    for ax, (label, vals, stream) in zip(axes.flat, panels):
        im = ax.pcolormesh(x, y, vals.T, shading="nearest", cmap="viridis")
        fig.colorbar(im, ax=ax, shrink=0.85)
        if stream is not None:
            _stream(ax, x, y, *stream)
        _titled(ax, label, vals)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_aspect("equal")
    return fig


# ---------------------------------------------------------------------------
# convergence and scaling studies
# ---------------------------------------------------------------------------

def convergence_figure(input_dir) -> plt.Figure:
    paths = sorted(Path(input_dir).glob("convergence_*.txt"))
    _require(paths, input_dir, "convergence_*.txt tables")
    fig, ax = plt.subplots(figsize=(6.5, 5), constrained_layout=True)
    smallest = None
    for path in paths:
        rows = read_convergence(path)
        n = np.array([r[0] for r in rows], dtype=float)
        macro = np.array([r[1] for r in rows])
        micro = np.array([r[3] for r in rows])
        stem = path.stem.replace("convergence_", "")
        ax.loglog(n, macro, "o-", label=f"{stem} macro")
        ax.loglog(n, micro, "s--", label=f"{stem} micro")
        ref = macro[0] * n[0] / n
        if smallest is None or n[0] < smallest[0][0]:
            smallest = (n, ref)
    n, ref = smallest
    ax.loglog(n, ref, "k:", label="first order")
    ax.set_xlabel("resolution N")
    ax.set_ylabel("relative L2 error")
    ax.set_title("manufactured-solution convergence", fontsize=10)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=9)
    return fig


def scaling_figure(input_dir) -> plt.Figure:
    paths = [p for p in (Path(input_dir) / "scaling_weak.txt",
                         Path(input_dir) / "scaling_strong.txt")
             if p.exists()]
    _require(paths, input_dir, "scaling_weak.txt or scaling_strong.txt")
    fig, (ax_t, ax_e) = plt.subplots(1, 2, figsize=(11, 4.5),
                                     constrained_layout=True)
    for path in paths:
        records = read_records(path)
        workers = [r["workers"] for r in records]
        seconds = [r["seconds"] for r in records]
        ideal = [r["ideal_seconds"] for r in records]
        eff = [r["efficiency"] for r in records]
        mode = records[0]["mode"]
        ax_t.loglog(workers, seconds, "o-", label=f"{mode} measured")
        ax_t.loglog(workers, ideal, "s--", label=f"{mode} ideal")
        ax_e.semilogx(workers, eff, "o-", label=mode)
    ax_t.set_xlabel("workers")
    ax_t.set_ylabel("run time [s]")
    ax_t.set_title("run time", fontsize=10)
    ax_t.grid(True, which="both", alpha=0.3)
    ax_t.legend(fontsize=9)
    ax_e.set_xlabel("workers")
    ax_e.set_ylabel("ideal / measured")
    ax_e.set_title("scaling efficiency", fontsize=10)
    ax_e.grid(True, which="both", alpha=0.3)
    ax_e.legend(fontsize=9)
    return fig


FIGURES = {
    "shocktube": shocktube_figure,
    "knudsen": knudsen_figure,
    "cavity": cavity_figure,
    "convergence": convergence_figure,
    "scaling": scaling_figure,
}


def make_figure(kind: str, input_dir) -> plt.Figure:
    if kind not in FIGURES:
        raise PlotInputError(
            f"unknown figure kind {kind!r}; choose from "
            f"{', '.join(sorted(FIGURES))}")
    input_dir = Path(input_dir)
    if not input_dir.is_dir():
        raise PlotInputError(f"{input_dir}: not a directory")
    return FIGURES[kind](input_dir)


def save_figure(fig: plt.Figure, out_path) -> None:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
