"""Numba implementations of the hot kernels (see _kernels_numpy for the
reference semantics)."""

from __future__ import annotations

import numpy as np
from numba import njit, prange

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


@njit(cache=True)
def _k0_series_scalar(r):
    q = 0.25 * r * r
    logterm = np.log(0.5 * r)
    term = 1.0
    i0 = 1.0
    psi = -EULER_GAMMA
    s = psi
    for m in range(1, N_SERIES_TERMS):
        term = term * q / (m * m)
        psi += 1.0 / m
        i0 += term
        s += term * psi
        if term * (1.0 + psi) < 1e-17 * abs(s):
            break
    return -i0 * logterm + s


@njit(cache=True)
def _k0_defect_scalar(r):
    q = 0.25 * r * r
    logterm = np.log(0.5 * r)
    term = 1.0
    i0m1 = 0.0
    psi = -EULER_GAMMA
    s = 0.0
    for m in range(1, N_SERIES_TERMS):
        term = term * q / (m * m)
        psi += 1.0 / m
        i0m1 += term
        s += term * psi
    return -i0m1 * logterm + s


@njit(cache=True)
def _k0_cheb_scalar(r):
    x = (2.0 * r - (Z_ASYM + Z_SERIES)) / (Z_ASYM - Z_SERIES)
    tprev = 1.0
    tcur = x
    acc = K0E_CHEB[0] + K0E_CHEB[1] * x
    for j in range(2, K0E_CHEB.shape[0]):
        tnext = 2.0 * x * tcur - tprev
        acc += K0E_CHEB[j] * tnext
        tprev = tcur
        tcur = tnext
    return acc * np.exp(-r) / np.sqrt(r)


@njit(cache=True)
def _k0_asym_scalar(r):
    s = 0.0
    powk = 1.0
    rinv = 1.0 / r
    for k in range(N_ASYM_TERMS):
        s += K0_ASYM[k] * powk
        powk *= rinv
    return np.sqrt(np.pi / (2.0 * r)) * np.exp(-r) * s


@njit(cache=True)
def _k0_scalar(r):
    if r <= Z_SERIES:
        return _k0_series_scalar(r)
    if r < Z_ASYM:
        return _k0_cheb_scalar(r)
    if r < 746.0:
        return _k0_asym_scalar(r)
    return 0.0


@njit(cache=True, parallel=True)
def k0_real(r):
    out = np.empty(r.shape[0])
    for i in prange(r.shape[0]):
        out[i] = _k0_scalar(r[i])
    return out


@njit(cache=True, parallel=True)
def remainder_real(r, phi0_vals):
    out = np.empty(r.shape[0])
    for i in prange(r.shape[0]):
        ri = r[i]
        if ri <= 1.0:
            out[i] = _k0_defect_scalar(ri) / _TWO_PI
        elif ri < 746.0:
            out[i] = _k0_scalar(ri) / _TWO_PI - phi0_vals[i]
        else:
            out[i] = 0.0
    return out


@njit(cache=True, parallel=True)
def sum_nodes(coefs, shifts, lam):
    out = np.zeros(lam.shape[0], dtype=np.complex128)
    for u in prange(lam.shape[0]):
        acc = 0.0 + 0.0j
        for i in range(shifts.shape[0]):
            acc += coefs[i] / (shifts[i] + lam[u])
        out[u] = acc
    return out


@njit(cache=True, parallel=True)
def reduce_lam(g, lam, shifts):
    out = np.empty(shifts.shape[0], dtype=np.complex128)
    for i in prange(shifts.shape[0]):
        acc = 0.0 + 0.0j
        for u in range(lam.shape[0]):
            acc += g[u] / (shifts[i] + lam[u])
        out[i] = acc
    return out
