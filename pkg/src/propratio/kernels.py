"""Backend selection for the sampling hot loops.

Two interchangeable backends implement the replicate/enumeration kernels:

  "c"       Cython extension (propratio._kernels), used when importable
  "python"  pure-Python/NumPy fallback (propratio._kernels_py)

The compiled backend is preferred; set PROPRATIO_BACKEND=python (or =c)
to force one.  Integer sampling is bit-identical between backends, and
reported statistics agree to ~1e-15 relative (asserted in the tests);
see benchmarks/bench_kernels.py for the speed comparison.
"""

from __future__ import annotations

import os

from . import _kernels_py
from .errors import ValidationError

try:
    from . import _kernels
except ImportError:  # extension not built: pure fallback only
    _kernels = None

_ENV_VAR = "PROPRATIO_BACKEND"


def available_backends() -> tuple[str, ...]:
    return ("c", "python") if _kernels is not None else ("python",)


def default_backend() -> str:
    forced = os.environ.get(_ENV_VAR)
    if forced:
        if forced not in ("c", "python"):
            raise ValidationError(
                f"{_ENV_VAR} must be 'c' or 'python', got {forced!r}"
            )
        if forced == "c" and _kernels is None:
            raise ValidationError(
                f"{_ENV_VAR}=c requested but the compiled kernels are not built"
            )
        return forced
    return "c" if _kernels is not None else "python"


def get_backend(name: str | None = None):
    """Return the kernel module for `name` (default: default_backend())."""
    if name is None:
        name = default_backend()
    if name == "python":
        return _kernels_py
    if name == "c":
        if _kernels is None:
            raise ValidationError("compiled kernels are not built; use backend='python'")
        return _kernels
    raise ValidationError(f"unknown backend {name!r} (choose 'c' or 'python')")
