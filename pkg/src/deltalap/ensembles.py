"""Seeded random field ensembles for the norm-estimate harnesses.

A band-limited field is defined by unit-variance complex normal
coefficients on the integer frequency lattice inside a fixed band
|xi| <= kmax, drawn in a fixed lexicographic order from a named
generator, then L^2-normalized analytically.  Because the band and the
draw order are grid-independent, the same seed yields samples of the
same continuum function on every resolution (refinements agree with
spectral upsampling exactly), which is what makes refinement-stability
ratios meaningful.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .field import Field2D, Grid2D

__all__ = ["default_band", "band_limited_field", "ensemble"]


def default_band(box_size: float) -> float:
    """Band edge pi 512 / (4 L): a quarter of the Nyquist frequency of the
    default 512-point grid, independent of the actual grid resolution."""
    return np.pi * 512.0 / (4.0 * box_size)


def band_limited_field(grid: Grid2D, seed, kmax: float | None = None) -> Field2D:
    """One unit-L^2 band-limited sample; ``seed`` may be any value accepted
    by numpy's default generator (integers or sequences of integers)."""
    if kmax is None:
        kmax = default_band(grid.box_size)
    qmax = int(np.floor(kmax * grid.box_size / (2.0 * np.pi)))
    if 2 * qmax >= grid.n:
        raise DomainError(
            f"band |q| <= {qmax} does not fit on an n = {grid.n} grid"
        )
    rng = np.random.default_rng(seed)
    n = grid.n
    chat = np.zeros((n, n), dtype=np.complex128)
    total = 0.0
    q2 = qmax * qmax
    for qx in range(-qmax, qmax + 1):
        for qy in range(-qmax, qmax + 1):
            if qx * qx + qy * qy > q2:
                continue
            re, im = rng.standard_normal(2)
            c = (re + 1j * im) / np.sqrt(2.0)
            # (-1)^(qx+qy) anchors the phase at the box center, so samples on
            # different resolutions agree pointwise
            chat[qx % n, qy % n] = c * (-1.0 if (qx + qy) % 2 else 1.0)
            total += abs(c) ** 2
    # Parseval on the box: ||f||_2^2 = L^2 sum |c_q|^2 for f = sum c_q e_q
    norm = grid.box_size * np.sqrt(total)
    values = np.fft.ifft2(chat) * (n * n / norm)
    return Field2D(grid, values)


def ensemble(grid: Grid2D, seed: int, count: int, kmax: float | None = None):
    """``count`` independent band-limited samples from one master seed."""
    return [
        band_limited_field(grid, [int(seed), k], kmax=kmax) for k in range(count)
    ]
