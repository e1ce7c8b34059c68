"""Hot-kernel backend selection.

Two interchangeable implementations exist: a compiled Cython extension
(``_core``) and a pure-numpy fallback (``_fallback``). The environment
variable ``MICROMACRO_BACKEND`` picks one:

    auto      (default) compiled if importable, else fallback
    compiled  require the extension; ImportError if missing
    python    force the numpy fallback

``backend_name`` records which one is active.
"""

from __future__ import annotations

import os

from micromacro.errors import ConfigurationError

_requested = os.environ.get("MICROMACRO_BACKEND", "auto")
if _requested not in ("auto", "compiled", "python"):
    raise ConfigurationError(
        f"MICROMACRO_BACKEND must be auto, compiled, or python; got {_requested!r}")

if _requested == "python":
    from micromacro._kernels import _fallback as _impl
    backend_name = "python"
elif _requested == "compiled":
    from micromacro._kernels import _core as _impl
    backend_name = "compiled"
else:
    try:
        from micromacro._kernels import _core as _impl
        backend_name = "compiled"
    except ImportError:
        from micromacro._kernels import _fallback as _impl
        backend_name = "python"

upwind_z_1d = _impl.upwind_z_1d
project_field_1d = _impl.project_field_1d
maxwellian_field_2d = _impl.maxwellian_field_2d
project_field_2d = _impl.project_field_2d
transport_stage_2d = _impl.transport_stage_2d
ghat_2d = _impl.ghat_2d
add_gaussian_term_2d = _impl.add_gaussian_term_2d
add_lowrank_4d = _impl.add_lowrank_4d
relax_2d = _impl.relax_2d
heat_tensor_2d = _impl.heat_tensor_2d

__all__ = [
    "backend_name",
    "upwind_z_1d",
    "project_field_1d",
    "maxwellian_field_2d",
    "project_field_2d",
    "transport_stage_2d",
    "ghat_2d",
    "add_gaussian_term_2d",
    "add_lowrank_4d",
    "relax_2d",
    "heat_tensor_2d",
]
