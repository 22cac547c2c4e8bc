"""Pure-numpy implementations of the hot kernels.

Reference implementations for the numba versions in ``_kernels_numba``;
selected at import time by ``deltalap.backend``.
"""

from __future__ import annotations

import numpy as np

from ._besseldata import (
    EULER_GAMMA,
    K0_ASYM,
    K0E_CHEB,
    N_ASYM_TERMS,
    N_SERIES_TERMS,
    Z_ASYM,
    Z_SERIES,
)

_TWO_PI = 2.0 * np.pi


def _k0_series_real(r: np.ndarray) -> np.ndarray:
    """Ascending series for K0 on real r (valid for r <= Z_SERIES)."""
    q = 0.25 * r * r
    logterm = np.log(0.5 * r)
    term = np.ones_like(r)
    i0 = np.ones_like(r)
    psi = -EULER_GAMMA
    s = np.full_like(r, psi)
    for m in range(1, N_SERIES_TERMS):
        term = term * q / (m * m)
        psi += 1.0 / m
        i0 += term
        s += term * psi
    return -i0 * logterm + s


def _k0_small_defect_real(r: np.ndarray) -> np.ndarray:
    """K0(r) + log(r/2) + gamma, summed without the leading cancellation."""
    q = 0.25 * r * r
    logterm = np.log(0.5 * r)
    term = np.ones_like(r)
    i0m1 = np.zeros_like(r)
    psi = -EULER_GAMMA
    s = np.zeros_like(r)
    for m in range(1, N_SERIES_TERMS):
        term = term * q / (m * m)
        psi += 1.0 / m
        i0m1 += term
        s += term * psi
    return -i0m1 * logterm + s


def _k0_cheb_real(r: np.ndarray) -> np.ndarray:
    x = (2.0 * r - (Z_ASYM + Z_SERIES)) / (Z_ASYM - Z_SERIES)
    f = np.polynomial.chebyshev.chebval(x, K0E_CHEB)
    return f * np.exp(-r) / np.sqrt(r)


def _k0_asym_real(r: np.ndarray) -> np.ndarray:
    s = np.zeros_like(r)
    rinv = 1.0 / r
    powk = np.ones_like(r)
    for k in range(N_ASYM_TERMS):
        s += K0_ASYM[k] * powk
        powk = powk * rinv
    with np.errstate(under="ignore"):
        return np.sqrt(np.pi / (2.0 * r)) * np.exp(-r) * s


def k0_real(r: np.ndarray) -> np.ndarray:
    """K0 on a real array, r > 0 elementwise. Underflows to 0 for large r."""
    r = np.asarray(r, dtype=np.float64)
    out = np.zeros_like(r)
    small = r <= Z_SERIES
    mid = (r > Z_SERIES) & (r < Z_ASYM)
    big = (r >= Z_ASYM) & (r < 746.0)
    if small.any():
        out[small] = _k0_series_real(r[small])
    if mid.any():
        out[mid] = _k0_cheb_real(r[mid])
    if big.any():
        out[big] = _k0_asym_real(r[big])
    return out


def remainder_real(r: np.ndarray, phi0_vals: np.ndarray) -> np.ndarray:
    """R(r) = K0(r)/(2 pi) - phi0(r) with a cancellation-free branch at r <= 1.

    ``phi0_vals`` must hold phi0 evaluated at ``r``; it is only consumed on
    the 1 < r < 2 branch where phi0 and K0/(2 pi) no longer cancel.
    """
    r = np.asarray(r, dtype=np.float64)
    out = np.zeros_like(r)
    tiny = r <= 1.0
    mid = (r > 1.0) & (r < Z_ASYM)
    big = (r >= Z_ASYM) & (r < 746.0)
    if tiny.any():
        out[tiny] = _k0_small_defect_real(r[tiny]) / _TWO_PI
    if mid.any():
        rm = r[mid]
        k0m = np.where(rm <= Z_SERIES, _k0_series_real(rm), _k0_cheb_real(np.maximum(rm, Z_SERIES)))
        out[mid] = k0m / _TWO_PI - phi0_vals[mid]
    if big.any():
        out[big] = _k0_asym_real(r[big]) / _TWO_PI
    return out


def sum_nodes(coefs: np.ndarray, shifts: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """out[u] = sum_i coefs[i] / (shifts[i] + lam[u]), chunked over i."""
    out = np.zeros(lam.shape[0], dtype=np.complex128)
    chunk = 64
    for i0 in range(0, shifts.shape[0], chunk):
        i1 = min(i0 + chunk, shifts.shape[0])
        out += coefs[i0:i1] @ (1.0 / (shifts[i0:i1, None] + lam[None, :]))
    return out


def reduce_lam(g: np.ndarray, lam: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """out[i] = sum_u g[u] / (shifts[i] + lam[u]), chunked over i."""
    out = np.empty(shifts.shape[0], dtype=np.complex128)
    chunk = 64
    for i0 in range(0, shifts.shape[0], chunk):
        i1 = min(i0 + chunk, shifts.shape[0])
        out[i0:i1] = (1.0 / (shifts[i0:i1, None] + lam[None, :])) @ g
    return out
