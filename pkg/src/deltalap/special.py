"""Modified Bessel function K0, the smooth cutoff, the singular profile and
the remainder splitting used by the Green-function decomposition.

All functions are pure; the array variants (`*_array`) are the vectorized
entry points used when sampling fields on grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._besseldata import (
    COSH_NODES,
    COSH_WEIGHTS,
    EULER_GAMMA,
    K0_ASYM,
    K0E_CHEB,
    K1_ASYM,
    K1E_CHEB,
    N_ASYM_TERMS,
    N_SERIES_TERMS,
    Z_ASYM,
    Z_SERIES,
)
from .errors import DomainError

__all__ = [
    "EULER_GAMMA",
    "BesselEval",
    "bessel_k0",
    "cutoff_phi",
    "phi0",
    "remainder_R",
    "split_R",
    "phi0_array",
    "cutoff_phi_array",
    "remainder_array",
    "k0_complex_array",
]

_TWO_PI = 2.0 * np.pi
_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class BesselEval:
    """K0(z) together with K0'(z) = -K1(z) and the evaluation regime."""

    value: complex
    derivative: complex
    regime: str  # 'series', 'chebyshev', 'quadrature' or 'asymptotic'


def _series_pair(z: complex) -> tuple[complex, complex]:
    """(K0, K0') by the ascending series, |z| <= Z_SERIES, principal log."""
    q = 0.25 * z * z
    logterm = np.log(0.5 * z) if np.iscomplexobj(z) or isinstance(z, complex) else np.log(0.5 * z)
    term = 1.0 + 0.0j
    i0 = 1.0 + 0.0j
    di = 0.0 + 0.0j  # sum of m * term
    psi = -EULER_GAMMA
    s = psi + 0.0j
    ds = 0.0 + 0.0j  # sum of m * term * psi
    for m in range(1, N_SERIES_TERMS):
        term = term * q / (m * m)
        psi += 1.0 / m
        i0 += term
        s += term * psi
        di += m * term
        ds += m * term * psi
        if abs(term) * (1.0 + psi) < 1e-17 * abs(s):
            break
    k0 = -i0 * logterm + s
    # d/dz: I0' = (2/z) di, S' = (2/z) ds
    k0p = -(2.0 / z) * di * logterm - i0 / z + (2.0 / z) * ds
    return k0, k0p


def _cheb_pair(r: float) -> tuple[float, float]:
    x = (2.0 * r - (Z_ASYM + Z_SERIES)) / (Z_ASYM - Z_SERIES)
    f0 = np.polynomial.chebyshev.chebval(x, K0E_CHEB)
    f1 = np.polynomial.chebyshev.chebval(x, K1E_CHEB)
    scale = np.exp(-r) / np.sqrt(r)
    return f0 * scale, -f1 * scale


def _asym_pair(z: complex) -> tuple[complex, complex]:
    zinv = 1.0 / z
    powk = 1.0 + 0.0j
    s0 = 0.0 + 0.0j
    s1 = 0.0 + 0.0j
    for k in range(N_ASYM_TERMS):
        s0 += K0_ASYM[k] * powk
        s1 += K1_ASYM[k] * powk
        powk = powk * zinv
    pref = np.sqrt(np.pi / (2.0 * z)) * np.exp(-z)
    return pref * s0, -pref * s1


def _quad_pair(z: complex) -> tuple[complex, complex]:
    """Laplace representation K0(z) = e^{-z} int_0^inf e^{-zs} (s(s+2))^{-1/2} ds
    on the contour s = v^2 e^{-i arg z}, which removes both the endpoint
    singularity and the oscillation; valid on the whole half-plane Re z > 0."""
    psi = np.angle(complex(z))
    az = abs(z)
    v_max = np.sqrt(45.0 / az)
    v = v_max * COSH_NODES
    w = v_max * COSH_WEIGHTS
    s = v * v * np.exp(-1j * psi)
    root = np.sqrt(s + 2.0)
    e = np.exp(-az * v * v)
    pref = 2.0 * np.exp(-z - 0.5j * psi)
    k0 = pref * np.sum(w * e / root)
    k1 = pref * np.sum(w * e * (1.0 + s) / root)
    return k0, -k1


def bessel_k0(z: complex) -> BesselEval:
    """K0(z) and its derivative for Re z > 0.

    Regime selection is by |z|; see ``_besseldata`` for the layout and the
    accuracy rationale.
    """
    z = complex(z)
    if z == 0 or z.real <= 0:
        raise DomainError(f"bessel_k0 requires Re z > 0, z != 0, got {z}")
    az = abs(z)
    if az <= Z_SERIES:
        v, d = _series_pair(z)
        regime = "series"
    elif az < Z_ASYM:
        if z.imag == 0.0:
            v, d = _cheb_pair(z.real)
            regime = "chebyshev"
        else:
            v, d = _quad_pair(z)
            regime = "quadrature"
    else:
        v, d = _asym_pair(z)
        regime = "asymptotic"
    return BesselEval(value=complex(v), derivative=complex(d), regime=regime)


def k0_complex_array(z: np.ndarray) -> np.ndarray:
    """K0 over a complex array with Re z > 0 elementwise."""
    z = np.asarray(z, dtype=np.complex128)
    if np.any((z == 0) | (z.real <= 0)):
        raise DomainError("k0_complex_array requires Re z > 0 elementwise")
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    az = np.abs(flat)
    real_like = flat.imag == 0.0
    m_series = az <= Z_SERIES
    m_cheb = ~m_series & (az < Z_ASYM) & real_like
    m_quad = ~m_series & (az < Z_ASYM) & ~real_like
    m_asym = az >= Z_ASYM

    if m_series.any():
        zs = flat[m_series]
        q = 0.25 * zs * zs
        logterm = np.log(0.5 * zs)
        term = np.ones_like(zs)
        i0 = np.ones_like(zs)
        psi = -EULER_GAMMA
        s = np.full_like(zs, psi)
        for m in range(1, N_SERIES_TERMS):
            term = term * q / (m * m)
            psi += 1.0 / m
            i0 += term
            s += term * psi
        out[m_series] = -i0 * logterm + s
    if m_cheb.any():
        r = flat[m_cheb].real
        x = (2.0 * r - (Z_ASYM + Z_SERIES)) / (Z_ASYM - Z_SERIES)
        out[m_cheb] = np.polynomial.chebyshev.chebval(x, K0E_CHEB) * np.exp(-r) / np.sqrt(r)
    if m_quad.any():
        zq = flat[m_quad]
        psi = np.angle(zq)
        azq = np.abs(zq)
        v_max = np.sqrt(45.0 / azq)
        v = v_max[:, None] * COSH_NODES[None, :]
        s = v * v * np.exp(-1j * psi)[:, None]
        vals = (np.exp(-azq[:, None] * v * v) / np.sqrt(s + 2.0)) @ COSH_WEIGHTS
        out[m_quad] = 2.0 * np.exp(-zq - 0.5j * psi) * v_max * vals
    if m_asym.any():
        za = flat[m_asym]
        zinv = 1.0 / za
        powk = np.ones_like(za)
        s0 = np.zeros_like(za)
        for k in range(N_ASYM_TERMS):
            s0 += K0_ASYM[k] * powk
            powk = powk * zinv
        with np.errstate(under="ignore"):
            out[m_asym] = np.sqrt(np.pi / (2.0 * za)) * np.exp(-za) * s0
    return out.reshape(z.shape)


def _bump(s):
    """exp(-1/s) extended by 0 for s <= 0 (smooth transition function)."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    pos = s > 0
    with np.errstate(under="ignore"):
        out[pos] = np.exp(-1.0 / s[pos])
    return out


def cutoff_phi_array(r: np.ndarray) -> np.ndarray:
    """Smooth cutoff: 1 on [0,1], 0 on [2,inf), monotone in between."""
    r = np.asarray(r, dtype=np.float64)
    a = _bump(2.0 - r)
    b = _bump(r - 1.0)
    out = np.zeros_like(r)
    inner = r <= 1.0
    trans = (r > 1.0) & (r < 2.0)
    out[inner] = 1.0
    out[trans] = a[trans] / (a[trans] + b[trans])
    return out


def cutoff_phi(r: float) -> float:
    if r < 0:
        raise DomainError(f"cutoff_phi requires r >= 0, got {r}")
    return float(cutoff_phi_array(np.array([r]))[0])


def _chi_array(r: np.ndarray) -> np.ndarray:
    """Cutoff for the remainder splitting: 1 on [0, 1/sqrt(2)], 0 on [2, inf)."""
    r = np.asarray(r, dtype=np.float64)
    a = _bump(2.0 - r)
    b = _bump(r - _INV_SQRT2)
    out = np.zeros_like(r)
    inner = r <= _INV_SQRT2
    trans = (r > _INV_SQRT2) & (r < 2.0)
    out[inner] = 1.0
    out[trans] = a[trans] / (a[trans] + b[trans])
    return out


def phi0_array(r: np.ndarray) -> np.ndarray:
    """Singular profile -(2 pi)^-1 (log(r/2) + gamma) * phi(r), r > 0."""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r <= 0):
        raise DomainError("phi0 requires r > 0")
    out = np.zeros_like(r)
    supp = r < 2.0
    rs = r[supp]
    out[supp] = -(np.log(0.5 * rs) + EULER_GAMMA) / _TWO_PI * cutoff_phi_array(rs)
    return out


def phi0(r: float) -> float:
    if r <= 0:
        raise DomainError(f"phi0 requires r > 0, got {r}")
    return float(phi0_array(np.array([r]))[0])


def remainder_array(r: np.ndarray) -> np.ndarray:
    """R(r) = K0(r)/(2 pi) - phi0(r) on a positive real array."""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r <= 0):
        raise DomainError("remainder requires r > 0")
    shape = r.shape
    flat = r.ravel()
    return kernels.remainder_real(flat, phi0_array(flat)).reshape(shape)


def remainder_R(r: float) -> float:
    if r <= 0:
        raise DomainError(f"remainder_R requires r > 0, got {r}")
    return float(remainder_array(np.array([r]))[0])


def split_R(r: float) -> tuple[float, float]:
    """Partition R = R_small + R_large with supp R_small in r <= 2 and
    supp R_large in r >= 1/sqrt(2)."""
    total = remainder_R(r)
    chi = float(_chi_array(np.array([r]))[0])
    r_small = chi * total
    return r_small, total - r_small
