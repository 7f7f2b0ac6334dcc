"""Selects the compiled kernels when available, else the pure-Python ones.

Set ``OVERORDERS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

BACKEND = "python"

if os.environ.get("OVERORDERS_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import hnf_mod, mul_mod, reduce_mod, rref_mod, solve_upper
else:
    try:
        from ._kernels import hnf_mod, mul_mod, reduce_mod, rref_mod, solve_upper

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import hnf_mod, mul_mod, reduce_mod, rref_mod, solve_upper

__all__ = ["BACKEND", "hnf_mod", "mul_mod", "reduce_mod", "rref_mod", "solve_upper"]
