"""Unitary time stepping for the point-interaction Schroedinger group.

One Cayley (Crank-Nicolson) step is

    u  ->  (1 + (i tau/2) Delta_alpha) (1 - (i tau/2) Delta_alpha)^{-1} u
        =  2 (2/(i tau)) (omega_c - Delta_alpha)^{-1} u - u,
    omega_c = 2/(i tau),

so each step costs one rank-one resolvent solve at a purely imaginary
shift.  The transform of the (discretely self-adjoint) operator is exactly
unitary, which gives mass conservation to rounding regardless of tau.

A ``CayleyStepper`` freezes the per-step spectral data for a fixed
(interaction, grid, tau) triple; repeated steps then cost one FFT pair.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DomainError, GridMismatchError
from .field import Field2D, Grid2D, lp_norm
from .operator import PointInteraction, _delta_pairing_hat, _inv_coupling

__all__ = [
    "TimeGrid",
    "SpaceTimeNorm",
    "CayleyStepper",
    "get_stepper",
    "cn_step",
    "propagate",
    "strichartz_norm",
    "save_frames",
    "load_frames",
]

_FRAME_MAGIC = b"DLF2"


@dataclass(frozen=True)
class TimeGrid:
    """Uniform mesh on [0, t_final] with n_steps steps."""

    t_final: float
    n_steps: int

    def __post_init__(self):
        if not (self.t_final > 0 and np.isfinite(self.t_final)):
            raise DomainError(f"t_final must be positive, got {self.t_final}")
        if self.n_steps < 0:
            raise DomainError(f"n_steps must be >= 0, got {self.n_steps}")

    @property
    def tau(self) -> float:
        return self.t_final / self.n_steps if self.n_steps else 0.0

    @property
    def times(self) -> np.ndarray:
        return self.tau * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class SpaceTimeNorm:
    """A mixed L^q_t L^r_x value together with the (q, r) couple."""

    q: float
    r: float
    value: float

    def __post_init__(self):
        if not (self.value >= 0 and np.isfinite(self.value)):
            raise DomainError(f"space-time norm must be finite and >= 0, got {self.value}")

    @property
    def admissible(self) -> bool:
        """Whether (q, r) is Strichartz-admissible: 1/q + 1/r = 1/2, q > 2."""
        if not self.q > 2:
            return False
        inv_q = 0.0 if np.isinf(self.q) else 1.0 / self.q
        inv_r = 0.0 if np.isinf(self.r) else 1.0 / self.r
        return abs(inv_q + inv_r - 0.5) < 1e-12


class CayleyStepper:
    """Frozen spectral data for one Cayley step of size tau."""

    def __init__(self, pi: PointInteraction, grid: Grid2D, tau: float):
        if not (tau != 0 and np.isfinite(tau)):
            raise DomainError(f"step size must be finite and nonzero, got {tau}")
        self.pi = pi
        self.grid = grid
        self.tau = float(tau)
        self.omega_c = 2.0 / (1j * self.tau)
        lam = grid.lam_unique
        self._prof = 1.0 / (self.omega_c + lam)
        self._free_mult = (self.omega_c - lam) * self._prof
        d = np.sum(grid.lattice_counts * self._prof) / grid.box_size**2
        self._beta_c = _inv_coupling(pi, grid) - d

    @cached_property
    def _rank_profile(self) -> np.ndarray:
        return (
            2.0
            * self.omega_c
            / self._beta_c
            * (self.grid.alt_phase / self.grid.spacing**2)
            * self._prof[self.grid._lam_inverse]
        )

    def apply(self, u: Field2D) -> Field2D:
        if u.grid != self.grid:
            raise GridMismatchError("field grid does not match the stepper grid")
        fhat = np.fft.fft2(u.values)
        proj = complex(np.sum(_delta_pairing_hat(u) * self._prof))
        out_hat = self._free_mult[self.grid._lam_inverse] * fhat + proj * self._rank_profile
        return Field2D(self.grid, np.fft.ifft2(out_hat))


@lru_cache(maxsize=8)
def get_stepper(pi: PointInteraction, grid: Grid2D, tau: float) -> CayleyStepper:
    return CayleyStepper(pi, grid, tau)


def cn_step(pi: PointInteraction, u: Field2D, tau: float) -> Field2D:
    """One Cayley step of size tau (tau < 0 runs the group backwards)."""
    return get_stepper(pi, u.grid, tau).apply(u)


def propagate(pi: PointInteraction, u0: Field2D, tg: TimeGrid) -> list:
    """[u0, U u0, U^2 u0, ...] with U the tau-step; length n_steps + 1."""
    frames = [u0]
    if tg.n_steps == 0:
        return frames
    stepper = get_stepper(pi, u0.grid, tg.tau)
    u = u0
    for _ in range(tg.n_steps):
        u = stepper.apply(u)
        frames.append(u)
    return frames


def strichartz_norm(frames, tg: TimeGrid, q: float, r: float) -> SpaceTimeNorm:
    """Left-endpoint rectangle rule for the L^q_t L^r_x space-time norm."""
    if len(frames) != tg.n_steps + 1:
        raise DomainError(
            f"expected {tg.n_steps + 1} frames, got {len(frames)}"
        )
    space = np.array([lp_norm(f, r) for f in frames])
    if np.isinf(q):
        value = float(space.max())
    else:
        value = float((tg.tau * np.sum(space[:-1] ** q)) ** (1.0 / q))
    return SpaceTimeNorm(q=q, r=r, value=value)


def save_frames(path, frames, tg: TimeGrid) -> None:
    """Concatenated field records, each followed by its f64 timestamp."""
    times = tg.times
    if len(frames) != times.size:
        raise DomainError("frame count does not match the time grid")
    with open(path, "wb") as fh:
        for f, t in zip(frames, times):
            fh.write(_FRAME_MAGIC)
            fh.write(struct.pack("<I", f.grid.n))
            fh.write(struct.pack("<d", f.grid.box_size))
            inter = np.empty((f.grid.n, f.grid.n, 2), dtype="<f8")
            inter[..., 0] = f.values.real
            inter[..., 1] = f.values.imag
            fh.write(inter.tobytes())
            fh.write(struct.pack("<d", float(t)))


def load_frames(path):
    """Returns (frames, times) from a save_frames dump."""
    frames = []
    times = []
    with open(path, "rb") as fh:
        while True:
            head = fh.read(16)
            if not head:
                break
            if len(head) != 16 or head[:4] != _FRAME_MAGIC:
                raise DomainError(f"{path}: corrupt frame header")
            n = struct.unpack("<I", head[4:8])[0]
            box = struct.unpack("<d", head[8:16])[0]
            raw = np.frombuffer(fh.read(16 * n * n), dtype="<f8")
            if raw.size != 2 * n * n:
                raise DomainError(f"{path}: truncated frame payload")
            vals = raw[0::2] + 1j * raw[1::2]
            frames.append(Field2D(Grid2D(n, box), vals.reshape(n, n)))
            (t,) = struct.unpack("<d", fh.read(8))
            times.append(t)
    return frames, np.array(times)
