"""Master-equation stepper backends.

The compiled Cython kernel is used when its extension imported cleanly; the
pure-numpy twin is the fallback and can be forced with MRCOOL_PURE_PYTHON=1.
Both expose the same `rk4_evolve` signature and implement the same generator;
`benchmarks/bench_kernels.py` compares them.
"""

import os

from . import _lindblad_np

_cython_backend = None
if os.environ.get("MRCOOL_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _lindblad_cy as _cython_backend
    except ImportError:
        _cython_backend = None

if _cython_backend is not None:
    BACKEND = "cython"
    rk4_evolve = _cython_backend.rk4_evolve
else:
    BACKEND = "numpy"
    rk4_evolve = _lindblad_np.rk4_evolve


def available_backends() -> dict:
    """Name -> module map of importable backends (for parity tests and benchmarks)."""
    out = {"numpy": _lindblad_np}
    if _cython_backend is not None:
        out["cython"] = _cython_backend
    else:
        try:
            from . import _lindblad_cy

            out["cython"] = _lindblad_cy
        except ImportError:
            pass
    return out
