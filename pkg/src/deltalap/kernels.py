"""Dispatch for the hot numeric kernels (numba when available, numpy else).

Exposes:

* ``k0_real(r)`` — K0 on a positive real array;
* ``remainder_real(r, phi0_vals)`` — K0/(2 pi) - phi0, cancellation-safe;
* ``sum_nodes(coefs, shifts, lam)`` — rank-one quadrature collapse;
* ``reduce_lam(g, lam, shifts)`` — per-node spectral pairings.
"""

from __future__ import annotations

import numpy as np

from .backend import USE_NUMBA

if USE_NUMBA:
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl


def k0_real(r: np.ndarray) -> np.ndarray:
    return _impl.k0_real(np.ascontiguousarray(r, dtype=np.float64))


def remainder_real(r: np.ndarray, phi0_vals: np.ndarray) -> np.ndarray:
    return _impl.remainder_real(
        np.ascontiguousarray(r, dtype=np.float64),
        np.ascontiguousarray(phi0_vals, dtype=np.float64),
    )


def sum_nodes(coefs: np.ndarray, shifts: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return _impl.sum_nodes(
        np.ascontiguousarray(coefs, dtype=np.complex128),
        np.ascontiguousarray(shifts, dtype=np.float64),
        np.ascontiguousarray(lam, dtype=np.float64),
    )


def reduce_lam(g: np.ndarray, lam: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    return _impl.reduce_lam(
        np.ascontiguousarray(g, dtype=np.complex128),
        np.ascontiguousarray(lam, dtype=np.float64),
        np.ascontiguousarray(shifts, dtype=np.float64),
    )
