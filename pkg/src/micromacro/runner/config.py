"""Run configuration: a flat UTF-8 text format, one ``key = value`` per
line, ``#`` starts a comment, lists are comma-separated. Unknown keys are
rejected and every parse error carries the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from micromacro.errors import ConfigurationError

CASES = ("mms1d", "shocktube", "heat_transfer", "knudsen_sweep",
         "mms2d", "lid_cavity", "custom")
BC_KINDS = ("periodic", "extrapolate", "wall")
TAU_MODELS = ("hard_sphere_1d", "pressure_1d", "esbgk_2d", "bgk_2d",
              "constant")


@dataclass
class CaseConfig:
    """Validated run configuration; `dim` is 1 or 2.

    1D runs use the v_min/v_max/nv velocity axis; 2D runs use the
    v1_*/v2_* axes and the y spatial axis. `workers` is the worker-grid
    shape (rows, cols); 1D runs require (1, 1)."""

    case: str = "custom"
    dim: int = 1
    x_min: float = 0.0
    x_max: float = 1.0
    nx: int = 0
    y_min: float = 0.0
    y_max: float = 1.0
    ny: int = 0
    v_min: float = 0.0
    v_max: float = 0.0
    nv: int = 0
    v1_min: float = 0.0
    v1_max: float = 0.0
    nv1: int = 0
    v2_min: float = 0.0
    v2_max: float = 0.0
    nv2: int = 0
    epsilon: float = 1.0
    epsilons: tuple = ()
    nu: float = 0.0
    tau_model: str = "constant"
    tau_value: float = 1.0
    cfl: float = 0.95
    t_final: float = 1.0
    bc_left: str = "periodic"
    bc_right: str = "periodic"
    bc_bottom: str = "periodic"
    bc_top: str = "periodic"
    T_left: float = 1.0
    T_right: float = 1.0
    T_wall: float = 1.0
    U_lid: float = 0.0
    frame_times: tuple = ()
    micro_x: tuple = ()          # x positions whose micro slice is stored
    output_dir: str = "output"
    workers: tuple = (1, 1)
    max_steps: int = 0           # 0 = unlimited (step-count-limited runs)
    mms_levels: int = 3


def _parse_float(s):
    return float(s)


def _parse_int(s):
    v = int(s)
    return v


def _parse_str(s):
    return s


def _parse_floats(s):
    return tuple(float(t.strip()) for t in s.split(",") if t.strip())


def _parse_workers(s):
    parts = s.lower().split("x")
    if len(parts) == 1:
        r, c = 1, int(parts[0])
    elif len(parts) == 2:
        r, c = int(parts[0]), int(parts[1])
    else:
        raise ValueError(f"worker grid must be N or RxC, got {s!r}")
    if r < 1 or c < 1:
        raise ValueError(f"worker grid must be positive, got {s!r}")
    return (r, c)


_PARSERS = {
    "case": _parse_str, "dim": _parse_int,
    "x_min": _parse_float, "x_max": _parse_float, "nx": _parse_int,
    "y_min": _parse_float, "y_max": _parse_float, "ny": _parse_int,
    "v_min": _parse_float, "v_max": _parse_float, "nv": _parse_int,
    "v1_min": _parse_float, "v1_max": _parse_float, "nv1": _parse_int,
    "v2_min": _parse_float, "v2_max": _parse_float, "nv2": _parse_int,
    "epsilon": _parse_float, "epsilons": _parse_floats,
    "nu": _parse_float, "tau_model": _parse_str, "tau_value": _parse_float,
    "cfl": _parse_float, "t_final": _parse_float,
    "bc_left": _parse_str, "bc_right": _parse_str,
    "bc_bottom": _parse_str, "bc_top": _parse_str,
    "T_left": _parse_float, "T_right": _parse_float,
    "T_wall": _parse_float, "U_lid": _parse_float,
    "frame_times": _parse_floats, "micro_x": _parse_floats,
    "output_dir": _parse_str, "workers": _parse_workers,
    "max_steps": _parse_int, "mms_levels": _parse_int,
}

assert set(_PARSERS) == {f.name for f in fields(CaseConfig)}


def parse_config_text(text: str, source: str = "<config>") -> CaseConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(
                f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigurationError(
                f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    cfg = replace(CaseConfig(), **values)
    validate_config(cfg, source=source)
    return cfg


def load_config(path) -> CaseConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, source=str(path))


def validate_config(cfg: CaseConfig, source: str = "<config>") -> None:
    def fail(msg):
        raise ConfigurationError(f"{source}: {msg}")

    if cfg.case not in CASES:
        fail(f"field 'case' must be one of {', '.join(CASES)}; got {cfg.case!r}")
    if cfg.dim not in (1, 2):
        fail(f"field 'dim' must be 1 or 2; got {cfg.dim}")
    if cfg.tau_model not in TAU_MODELS:
        fail(f"field 'tau_model' must be one of {', '.join(TAU_MODELS)}; "
             f"got {cfg.tau_model!r}")
    if not 0.0 < cfg.cfl < 1.0:
        fail(f"field 'cfl' must lie in (0, 1); got {cfg.cfl}")
    if cfg.t_final <= 0.0:
        fail(f"field 't_final' must be positive; got {cfg.t_final}")
    if cfg.epsilon <= 0.0:
        fail(f"field 'epsilon' must be positive; got {cfg.epsilon}")
    if any(e <= 0.0 for e in cfg.epsilons):
        fail("field 'epsilons' entries must be positive")
    if not -1.0 <= cfg.nu < 1.0:
        fail(f"field 'nu' must lie in [-1, 1); got {cfg.nu}")
    if cfg.max_steps < 0:
        fail(f"field 'max_steps' must be >= 0; got {cfg.max_steps}")
    if cfg.mms_levels < 1:
        fail(f"field 'mms_levels' must be >= 1; got {cfg.mms_levels}")

    faces_1d = ("bc_left", "bc_right")
    faces_2d = faces_1d + ("bc_bottom", "bc_top")
    for name in faces_2d:
        if getattr(cfg, name) not in BC_KINDS:
            fail(f"field {name!r} must be one of {', '.join(BC_KINDS)}; "
                 f"got {getattr(cfg, name)!r}")
    faces = faces_1d if cfg.dim == 1 else faces_2d
    for lo, hi in zip(faces[0::2], faces[1::2]):
        kinds = {getattr(cfg, lo), getattr(cfg, hi)}
        if "periodic" in kinds and kinds != {"periodic"}:
            fail(f"fields {lo!r}/{hi!r}: periodic faces must pair up")

    if cfg.dim == 1:
        axes = (("x_min", "x_max", "nx"), ("v_min", "v_max", "nv"))
    else:
        axes = (("x_min", "x_max", "nx"), ("y_min", "y_max", "ny"),
                ("v1_min", "v1_max", "nv1"), ("v2_min", "v2_max", "nv2"))
    for lo, hi, n in axes:
        if getattr(cfg, n) < 1:
            fail(f"field {n!r} must be >= 1; got {getattr(cfg, n)}")
        if not getattr(cfg, lo) < getattr(cfg, hi):
            fail(f"fields {lo!r}/{hi!r} must satisfy {lo} < {hi}")

    rows, cols = cfg.workers
    if cfg.dim == 1:
        if (rows, cols) != (1, 1):
            fail("field 'workers': 1D runs are serial; use workers = 1")
    else:
        if cfg.nx % rows != 0 or cfg.ny % cols != 0:
            fail(f"field 'workers': grid {rows}x{cols} must divide the "
                 f"spatial resolution {cfg.nx}x{cfg.ny}")

    for t in cfg.frame_times:
        if not 0.0 <= t <= cfg.t_final:
            fail(f"field 'frame_times': {t} outside [0, t_final]")
    for x in cfg.micro_x:
        if not cfg.x_min <= x <= cfg.x_max:
            fail(f"field 'micro_x': {x} outside the x domain")


def config_to_text(cfg: CaseConfig) -> str:
    """Round-trippable text form (only non-default fields are written,
    except `case` which is always present)."""
    default = CaseConfig()
    lines = [f"case = {cfg.case}"]
    for f in fields(CaseConfig):
        if f.name == "case":
            continue
        val = getattr(cfg, f.name)
        if val == getattr(default, f.name):
            continue
        if f.name == "workers":
            text = f"{val[0]}x{val[1]}"
        elif isinstance(val, tuple):
            text = ", ".join(format(v, ".17g") for v in val)
        elif isinstance(val, float):
            text = format(val, ".17g")
        else:
            text = str(val)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CASES",
    "BC_KINDS",
    "TAU_MODELS",
    "CaseConfig",
    "parse_config_text",
    "load_config",
    "validate_config",
    "config_to_text",
]
