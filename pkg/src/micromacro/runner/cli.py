"""Command-line interface.

    micromacro solve --config <path> [--workers RxC] [--output <dir>]
    micromacro mms   --case {1d,2d} --levels <k> [--output <dir>]
    micromacro sweep --epsilons <list> [--output <dir>]
    micromacro scale --mode {weak,strong} --workers <list>
                     [--steps <n>] [--output <dir>]

Exit codes: 0 on success; on failure a single machine-parsable line
``micromacro-error: <category>: <message>`` goes to stderr and the exit
code identifies the category (2 configuration, 3 invalid-state, 4 io,
5 internal).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from micromacro.errors import ConfigurationError, InvalidStateError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="micromacro",
        description="Deterministic kinetic solver: case runner, "
                    "convergence studies, regime sweeps, scaling harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one configured case")
    p.add_argument("--config", required=True, help="path to a config file")
    p.add_argument("--workers", default=None,
                   help="worker grid RxC (2D cases only)")
    p.add_argument("--output", default=None, help="output directory")

    p = sub.add_parser("mms", help="manufactured-solution convergence study")
    p.add_argument("--case", required=True, choices=("1d", "2d"))
    p.add_argument("--levels", type=int, default=3,
                   help="number of doubling refinements")
    p.add_argument("--output", default=".", help="output directory")

    p = sub.add_parser("sweep", help="heat-transfer Knudsen-number sweep")
    p.add_argument("--epsilons", required=True,
                   help="comma-separated Knudsen numbers")
    p.add_argument("--output", default="output", help="output directory")

    p = sub.add_parser("scale", help="scaling-study harness")
    p.add_argument("--mode", required=True, choices=("weak", "strong"))
    p.add_argument("--workers", required=True,
                   help="comma-separated worker counts (perfect squares)")
    p.add_argument("--steps", type=int, default=10,
                   help="step cap per timing run")
    p.add_argument("--nv", type=int, default=14,
                   help="velocity resolution per axis")
    p.add_argument("--strong-n", type=int, default=360,
                   help="fixed spatial resolution for strong scaling")
    p.add_argument("--output", default="output", help="output directory")
    return parser


def _cmd_solve(args) -> int:
    from micromacro.runner.cases import run_case
    from micromacro.runner.config import (_parse_workers, load_config,
                                          validate_config)
    cfg = load_config(args.config)
    if args.workers is not None:
        try:
            cfg = replace(cfg, workers=_parse_workers(args.workers))
        except ValueError as exc:
            raise ConfigurationError(f"--workers: {exc}") from None
        validate_config(cfg, source="--workers")
    if args.output is not None:
        cfg = replace(cfg, output_dir=args.output)
    result = run_case(cfg, progress=_progress_line)
    for path in result.files:
        print(path)
    return 0


def _progress_line(*items):
    print("progress:", *items, file=sys.stderr)


def _cmd_mms(args) -> int:
    from pathlib import Path

    from micromacro import mms
    from micromacro.runner.cases import mms_convergence
    dim = 1 if args.case == "1d" else 2
    rows = mms_convergence(dim, args.levels,
                           progress=lambda n, me, ge: _progress_line(
                               f"N={n}", f"macro={me:.6e}",
                               f"micro={ge:.6e}"))
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"convergence_mms{args.case}.txt"
    mms.write_convergence_table(rows, path)
    print(path)
    for n, me, mr, ge, gr in rows:
        print(f"N={n:5d}  macro={me:.6e} (ratio {mr:6.3f})  "
              f"micro={ge:.6e} (ratio {gr:6.3f})")
    return 0


def _cmd_sweep(args) -> int:
    from micromacro.runner.cases import default_config, run_case
    from micromacro.runner.config import validate_config
    try:
        epsilons = tuple(float(t.strip()) for t in args.epsilons.split(",")
                         if t.strip())
    except ValueError as exc:
        raise ConfigurationError(f"--epsilons: {exc}") from None
    if not epsilons:
        raise ConfigurationError("--epsilons: empty list")
    cfg = replace(default_config("knudsen_sweep"), epsilons=epsilons,
                  output_dir=args.output)
    validate_config(cfg, source="--epsilons")
    result = run_case(cfg, progress=_progress_line)
    for path in result.files:
        print(path)
    return 0


def _cmd_scale(args) -> int:
    from micromacro.runner.scaling import scaling_harness
    try:
        counts = [int(t.strip()) for t in args.workers.split(",")
                  if t.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"--workers: {exc}") from None
    records, path = scaling_harness(
        args.mode, counts, max_steps=args.steps, nv=args.nv,
        strong_n=args.strong_n, output_dir=args.output,
        progress=lambda c, s: _progress_line(f"workers={c}",
                                             f"seconds={s:.3f}"))
    print(path)
    for r in records:
        print(f"workers={r['workers']:4d}  grid={r['nx']}x{r['ny']}  "
              f"seconds={r['seconds']:.3f}  ideal={r['ideal_seconds']:.3f}  "
              f"efficiency={r['efficiency']:.3f}")
    return 0


_COMMANDS = {"solve": _cmd_solve, "mms": _cmd_mms, "sweep": _cmd_sweep,
             "scale": _cmd_scale}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"micromacro-error: configuration: {exc}", file=sys.stderr)
        return 2
    except InvalidStateError as exc:
        print(f"micromacro-error: invalid-state: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"micromacro-error: io: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # pragma: no cover - defensive
        print(f"micromacro-error: internal: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
