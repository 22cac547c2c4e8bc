"""Numba/NumPy backend selection for the hot kernels.

The environment variable ``DELTALAP_BACKEND`` picks the implementation of the
inner loops:

* ``auto`` (default) — use numba if it imports, else fall back to numpy;
* ``numba`` — require numba, raise if unavailable;
* ``numpy`` — force the pure-numpy path (useful for debugging and as the
  reference in ``benchmarks/bench_kernels.py``).

Everything outside this module is backend-agnostic: the two implementations
expose identical call signatures and agree to rounding.
"""

from __future__ import annotations

import os

_choice = os.environ.get("DELTALAP_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"DELTALAP_BACKEND must be 'auto', 'numba' or 'numpy', got {_choice!r}"
    )

if _choice == "numpy":
    _HAVE_NUMBA = False
else:
    try:
        import numba  # noqa: F401

        _HAVE_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise
        _HAVE_NUMBA = False

USE_NUMBA: bool = _HAVE_NUMBA


def backend_name() -> str:
    """Name of the kernel backend actually in use."""
    return "numba" if USE_NUMBA else "numpy"
