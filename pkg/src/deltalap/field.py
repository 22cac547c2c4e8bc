"""Periodic-box discretization of functions on the plane.

A ``Grid2D`` is an n-by-n periodic grid on the square [-L/2, L/2)^2 with the
origin on a node; a ``Field2D`` holds complex samples on such a grid.  All
spectral work (multipliers, derivatives, norms) uses the standard DFT lattice
xi in (2 pi / L) Z^2.

The grid caches a decomposition of the integer lattice j^2 + k^2 into its
distinct values.  Radial profiles and radial spectral multipliers are then
evaluated once per distinct radius or frequency magnitude, which cuts the
Bessel work per Green-function sample by roughly a factor n^2 / unique.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, GridMismatchError

__all__ = [
    "Grid2D",
    "Field2D",
    "NormReport",
    "fourier_multiplier",
    "lp_norm",
    "weak_lp_quasinorm",
    "sobolev_norm_1p",
    "pairing",
    "bilinear_pairing",
    "sample_radial",
    "radial_multiplier",
    "upsample",
    "save_field",
    "load_field",
]

_MAGIC = b"DLF2"

_NORM_KINDS = ("lebesgue", "weak_lebesgue", "sobolev_1p", "h1_alpha", "strichartz")


class Grid2D:
    """Square periodic grid: n points per side (power of two), box side L."""

    __slots__ = ("n", "box_size", "spacing", "__dict__")

    def __init__(self, n: int, box_size: float):
        n = int(n)
        if n < 16 or n & (n - 1) != 0:
            raise DomainError(f"grid size must be a power of two >= 16, got {n}")
        if not (box_size > 0 and np.isfinite(box_size)):
            raise DomainError(f"box size must be positive and finite, got {box_size}")
        self.n = n
        self.box_size = float(box_size)
        self.spacing = self.box_size / n

    def __eq__(self, other):
        return (
            isinstance(other, Grid2D)
            and self.n == other.n
            and self.box_size == other.box_size
        )

    def __hash__(self):
        return hash((self.n, self.box_size))

    def __repr__(self):
        return f"Grid2D(n={self.n}, box_size={self.box_size})"

    @cached_property
    def coords(self) -> np.ndarray:
        """1D node coordinates -L/2 + j h, j = 0..n-1."""
        return -0.5 * self.box_size + self.spacing * np.arange(self.n)

    @cached_property
    def _lattice(self):
        """Distinct values of j^2 + k^2 over the index offsets used by both
        the spatial radii (offset from the origin node) and the DFT
        frequencies; returns (unique_m, inverse) with inverse of shape (n, n).
        """
        j = np.arange(self.n) - self.n // 2
        m = (j * j)[:, None] + (j * j)[None, :]
        uniq, inv = np.unique(m.ravel(), return_inverse=True)
        return uniq, inv.reshape(self.n, self.n).astype(np.int64)

    @cached_property
    def r_unique(self) -> np.ndarray:
        """Distinct node radii, with the origin regularized to h/2."""
        uniq, _ = self._lattice
        r = self.spacing * np.sqrt(uniq.astype(np.float64))
        r[0] = 0.5 * self.spacing
        return r

    @cached_property
    def _radial_inverse(self) -> np.ndarray:
        uniq, inv = self._lattice
        return inv

    @cached_property
    def lam_unique(self) -> np.ndarray:
        """Distinct values of |xi|^2 on the DFT lattice."""
        uniq, _ = self._lattice
        return (2.0 * np.pi / self.box_size) ** 2 * uniq.astype(np.float64)

    @cached_property
    def _lam_inverse(self) -> np.ndarray:
        """Map from fft2 layout to the unique-|xi|^2 index."""
        _, inv = self._lattice
        # _lattice indexes offsets j - n/2; fftshift moves that layout to the
        # native fft2 ordering.
        return np.fft.ifftshift(inv)

    @cached_property
    def lam_full(self) -> np.ndarray:
        """|xi|^2 in native fft2 ordering."""
        return self.lam_unique[self._lam_inverse]

    @cached_property
    def lattice_counts(self) -> np.ndarray:
        """Multiplicity of each distinct j^2 + k^2 value."""
        _, inv = self._lattice
        return np.bincount(inv.ravel()).astype(np.float64)

    @cached_property
    def alt_phase(self) -> np.ndarray:
        """(-1)^(qx+qy) on the native fft2 index lattice; this is the DFT of
        the origin-node delta up to the 1/h^2 normalization."""
        s = np.where(np.arange(self.n) % 2 == 0, 1.0, -1.0)
        return s[:, None] * s[None, :]

    @cached_property
    def xi(self) -> np.ndarray:
        """1D DFT frequencies in native fft2 ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    @cached_property
    def origin_index(self) -> tuple[int, int]:
        return (self.n // 2, self.n // 2)

    @cached_property
    def cell_area(self) -> float:
        return self.spacing * self.spacing


@dataclass(frozen=True)
class Field2D:
    """Complex samples of a function on a Grid2D. Values are never mutated."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n, self.grid.n):
            raise DomainError(
                f"values shape {v.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise DomainError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "Field2D":
        return Field2D(self.grid, values)

    def __add__(self, other: "Field2D") -> "Field2D":
        _check_same_grid(self, other)
        return Field2D(self.grid, self.values + other.values)

    def __sub__(self, other: "Field2D") -> "Field2D":
        _check_same_grid(self, other)
        return Field2D(self.grid, self.values - other.values)

    def __mul__(self, c) -> "Field2D":
        return Field2D(self.grid, self.values * c)

    __rmul__ = __mul__

    def __neg__(self) -> "Field2D":
        return Field2D(self.grid, -self.values)


@dataclass(frozen=True)
class NormReport:
    p: float
    value: float
    kind: str

    def __post_init__(self):
        if self.kind not in _NORM_KINDS:
            raise DomainError(f"unknown norm kind {self.kind!r}")
        if not (self.value >= 0 and np.isfinite(self.value)):
            raise DomainError(f"norm value must be finite and >= 0, got {self.value}")


def _check_same_grid(a: Field2D, b: Field2D):
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")


def fourier_multiplier(f: Field2D, m) -> Field2D:
    """Apply the spectral multiplier ``m(xi_x, xi_y)``.

    ``m`` is called once with broadcastable frequency arrays and must return
    finite values on the whole lattice.
    """
    xi = f.grid.xi
    mvals = np.asarray(m(xi[:, None], xi[None, :]), dtype=np.complex128)
    mvals = np.broadcast_to(mvals, (f.grid.n, f.grid.n))
    if not np.all(np.isfinite(mvals.real)) or not np.all(np.isfinite(mvals.imag)):
        raise DomainError("multiplier is non-finite on the frequency lattice")
    out = np.fft.ifft2(mvals * np.fft.fft2(f.values))
    return Field2D(f.grid, out)


def radial_multiplier(f: Field2D, mvals_unique: np.ndarray) -> Field2D:
    """Apply a multiplier given by its values on ``grid.lam_unique``."""
    mv = np.asarray(mvals_unique, dtype=np.complex128)
    if mv.shape != f.grid.lam_unique.shape:
        raise DomainError("multiplier values do not match the unique-frequency set")
    full = mv[f.grid._lam_inverse]
    out = np.fft.ifft2(full * np.fft.fft2(f.values))
    return Field2D(f.grid, out)


def sample_radial(grid: Grid2D, fn) -> Field2D:
    """Sample a radial profile ``fn(r)`` on the grid.

    ``fn`` receives the array of distinct radii (origin regularized to h/2)
    and is evaluated once per distinct radius.
    """
    vals = np.asarray(fn(grid.r_unique), dtype=np.complex128)
    if vals.shape != grid.r_unique.shape:
        raise DomainError("radial profile must map radii to one value each")
    return Field2D(grid, vals[grid._radial_inverse])


def lp_norm(f: Field2D, p: float) -> float:
    if not p >= 1:
        raise DomainError(f"lp_norm requires p >= 1, got {p}")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max())
    h2 = f.grid.cell_area
    return float((h2 * np.sum(a**p)) ** (1.0 / p))


def weak_lp_quasinorm(f: Field2D, p: float) -> float:
    """sup_k (k h^2)^{1/p} a_k over the decreasing rearrangement a_1 >= a_2 >= ..."""
    if not (1 < p < np.inf):
        raise DomainError(f"weak_lp_quasinorm requires p in (1, inf), got {p}")
    a = np.sort(np.abs(f.values).ravel())[::-1]
    k = np.arange(1, a.size + 1, dtype=np.float64)
    return float(np.max((k * f.grid.cell_area) ** (1.0 / p) * a))


def _spectral_gradient(f: Field2D) -> tuple[Field2D, Field2D]:
    xi = f.grid.xi
    fhat = np.fft.fft2(f.values)
    dx = np.fft.ifft2(1j * xi[:, None] * fhat)
    dy = np.fft.ifft2(1j * xi[None, :] * fhat)
    return Field2D(f.grid, dx), Field2D(f.grid, dy)


def sobolev_norm_1p(f: Field2D, p: float) -> float:
    if not (1 < p < np.inf):
        raise DomainError(f"sobolev_norm_1p requires p in (1, inf), got {p}")
    dx, dy = _spectral_gradient(f)
    return lp_norm(f, p) + lp_norm(dx, p) + lp_norm(dy, p)


def pairing(a: Field2D, b: Field2D) -> complex:
    """h^2 sum a * conj(b) (sesquilinear, conjugate on the second slot)."""
    _check_same_grid(a, b)
    return complex(a.grid.cell_area * np.vdot(b.values, a.values))


def bilinear_pairing(a: Field2D, b: Field2D) -> complex:
    """h^2 sum a * b, no conjugation (continues analytically in each slot)."""
    _check_same_grid(a, b)
    return complex(a.grid.cell_area * np.sum(a.values * b.values))


def upsample(f: Field2D, n_new: int) -> Field2D:
    """Spectral interpolation onto a finer grid with the same box."""
    n = f.grid.n
    if n_new < n or n_new & (n_new - 1) != 0:
        raise DomainError(f"upsample target must be a power of two >= {n}")
    if n_new == n:
        return f
    fhat = np.fft.fftshift(np.fft.fft2(f.values))
    pad = (n_new - n) // 2
    big = np.zeros((n_new, n_new), dtype=np.complex128)
    big[pad : pad + n, pad : pad + n] = fhat
    out = np.fft.ifft2(np.fft.ifftshift(big)) * (n_new / n) ** 2
    return Field2D(Grid2D(n_new, f.grid.box_size), out)


def save_field(f: Field2D, path) -> None:
    """Write the DLF2 binary format: magic, u32 n, f64 L, then row-major
    (re, im) float64 pairs, all little-endian."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", f.grid.n))
        fh.write(struct.pack("<d", f.grid.box_size))
        inter = np.empty((f.grid.n, f.grid.n, 2), dtype="<f8")
        inter[..., 0] = f.values.real
        inter[..., 1] = f.values.imag
        fh.write(inter.tobytes())


def load_field(path) -> Field2D:
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) != 16 or head[:4] != _MAGIC:
            raise DomainError(f"{path}: not a DLF2 field file")
        n = struct.unpack("<I", head[4:8])[0]
        box = struct.unpack("<d", head[8:16])[0]
        raw = np.frombuffer(fh.read(), dtype="<f8")
    if raw.size != 2 * n * n:
        raise DomainError(f"{path}: truncated field payload")
    vals = raw[0::2] + 1j * raw[1::2]
    return Field2D(Grid2D(n, box), vals.reshape(n, n))
