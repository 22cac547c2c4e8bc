"""Operator calculus of the planar point-interaction Laplacian.

The central object is the rank-one resolvent formula

    (-Delta_alpha + omega)^{-1} = (-Delta + omega)^{-1}
        + beta_alpha(omega)^{-1} <G_omega, .> G_omega,

with G_omega = (2 pi)^{-1} K0(sqrt(omega) |x|) and
beta_alpha(omega) = alpha + gamma/(2 pi) + (2 pi)^{-1} log(sqrt(omega)/2).
The bound state sits at omega0 = 4 exp(-4 pi alpha - 2 gamma), the unique
zero of beta.

On the periodic grid the resolvent family is realized exactly (in the
Sherman-Morrison sense) by perturbing the spectral Laplacian with a
delta potential at the origin node.  The coupling is calibrated once per
(interaction, grid) pair so that the discrete pole coincides with omega0;
the discrete beta then matches the continuum beta up to O(h^2) + box
truncation, while resolvent identities, self-adjointness and the eigenpair
at omega0 hold to rounding rather than to discretization accuracy.

Fractional powers use the half-line rule of ``quadrature``; all node sums
are collapsed onto the distinct values of |xi|^2 so that one FFT pair
serves the whole quadrature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels, special
from .errors import DomainError, MembershipError, PoleError
from .field import (
    Field2D,
    Grid2D,
    fourier_multiplier,
    radial_multiplier,
    sample_radial,
    sobolev_norm_1p,
)
from .quadrature import QuadratureRule

__all__ = [
    "PointInteraction",
    "Decomposition",
    "beta",
    "beta_discrete",
    "green_field",
    "green_field_discrete",
    "free_resolvent",
    "resolvent",
    "inv_sqrt",
    "c_functional",
    "gamma_op",
    "gamma0_op",
    "gamma1_op",
    "lambda_decompose",
    "resolvent_decomposition",
    "apply_forward",
    "h1_alpha_norm",
]

_TWO_PI = 2.0 * np.pi
_POLE_TOL = 1e-10
_MEMBERSHIP_RTOL = 1e-2
_OMEGA_CAL_FLOOR = 1e-6


def _check_off_cut(omega: complex) -> complex:
    omega = complex(omega)
    if omega.imag == 0.0 and omega.real <= 0.0:
        raise DomainError(f"omega must avoid the branch cut (-inf, 0], got {omega}")
    return omega


@dataclass(frozen=True)
class PointInteraction:
    """A single point interaction of strength alpha at the origin."""

    alpha: float

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite, got {self.alpha}")

    @property
    def omega0(self) -> float:
        """Bound-state parameter 4 exp(-4 pi alpha - 2 gamma)."""
        return 4.0 * np.exp(-4.0 * np.pi * self.alpha - 2.0 * special.EULER_GAMMA)


def beta(pi: PointInteraction, omega: complex) -> complex:
    """alpha + gamma/(2 pi) + (2 pi)^{-1} log(sqrt(omega)/2), principal branch."""
    omega = _check_off_cut(omega)
    return (
        pi.alpha
        + special.EULER_GAMMA / _TWO_PI
        + np.log(np.sqrt(omega) / 2.0) / _TWO_PI
    )


@lru_cache(maxsize=16)
def _inv_coupling(pi: PointInteraction, grid: Grid2D) -> float:
    """1/g of the discrete delta potential, calibrated so the discrete
    resolvent family has its pole exactly at omega0 (or matched to the
    continuum beta at omega = 1 when omega0 underflows the grid scale)."""
    om_cal = pi.omega0 if pi.omega0 >= _OMEGA_CAL_FLOOR else 1.0
    return float(beta(pi, om_cal).real + _lattice_green_origin(grid, (om_cal,))[0].real)


def _lattice_green_origin(grid: Grid2D, omegas: tuple) -> np.ndarray:
    """G^d_omega(0) = L^{-2} sum_xi (omega + |xi|^2)^{-1} for each omega."""
    counts = grid.lattice_counts.astype(np.complex128)
    shifts = np.asarray(omegas, dtype=np.complex128)
    if np.iscomplexobj(np.asarray(omegas)):
        # kernels.reduce_lam takes real shifts; fall back for complex omega
        vals = np.array(
            [np.sum(counts / (om + grid.lam_unique)) for om in shifts]
        )
    else:
        vals = kernels.reduce_lam(counts, grid.lam_unique, np.real(shifts))
    return vals / grid.box_size**2


def beta_discrete(pi: PointInteraction, grid: Grid2D, omega: complex) -> complex:
    """Discrete counterpart of beta; exact zero at the calibrated pole."""
    invg = _inv_coupling(pi, grid)
    omega = complex(omega)
    if omega.imag == 0.0:
        if omega.real <= -float(grid.lam_unique[0]):
            raise DomainError(f"omega on the discrete essential spectrum: {omega}")
        d = _lattice_green_origin(grid, (omega.real,))[0]
    else:
        d = _lattice_green_origin(grid, (omega,))[0]
    return invg - complex(d)


def green_field(omega: complex, grid: Grid2D) -> Field2D:
    """Samples of (2 pi)^{-1} K0(sqrt(omega) r), r regularized to h/2 at 0."""
    omega = _check_off_cut(omega)
    s = np.sqrt(omega)
    if omega.imag == 0.0:
        return sample_radial(grid, lambda r: kernels.k0_real(s.real * r) / _TWO_PI)
    return sample_radial(grid, lambda r: special.k0_complex_array(s * r) / _TWO_PI)


def green_field_discrete(omega: complex, grid: Grid2D) -> Field2D:
    """(omega - Delta_per)^{-1} delta on the grid (delta at the origin node)."""
    omega = complex(omega)
    if omega.imag == 0.0 and omega.real <= -float(grid.lam_unique[0]):
        raise DomainError(f"omega on the discrete essential spectrum: {omega}")
    ghat = grid.alt_phase / (grid.spacing**2 * (omega + grid.lam_full))
    return Field2D(grid, np.fft.ifft2(ghat))


def free_resolvent(omega: complex, f: Field2D) -> Field2D:
    """(omega - Delta)^{-1} f as an exact spectral multiplier."""
    omega = _check_off_cut(omega)
    return radial_multiplier(f, 1.0 / (omega + f.grid.lam_unique))


def _delta_pairing_hat(f: Field2D) -> np.ndarray:
    """Per-distinct-|xi|^2 reduction of f-hat against the origin delta, such
    that <G^d_omega, f> = sum_u g[u] / (omega + lam_unique[u])."""
    grid = f.grid
    fhat = (grid.alt_phase * np.fft.fft2(f.values)).ravel() / grid.n**2
    inv = grid._lam_inverse.ravel()
    nu = grid.lam_unique.size
    return np.bincount(inv, weights=fhat.real, minlength=nu) + 1j * np.bincount(
        inv, weights=fhat.imag, minlength=nu
    )


def resolvent(pi: PointInteraction, omega: complex, f: Field2D) -> Field2D:
    """(omega - Delta_alpha)^{-1} f by the rank-one formula.

    The rank-one pairing is bilinear (no conjugation), which keeps the map
    analytic in omega; for real omega and real data this coincides with the
    conjugated pairing.
    """
    omega = _check_off_cut(omega)
    bd = beta_discrete(pi, f.grid, omega)
    if abs(bd) < _POLE_TOL:
        raise PoleError(f"omega = {omega} is at the bound-state pole (beta = {bd})")
    g = green_field_discrete(omega, f.grid)
    proj = complex(np.sum(_delta_pairing_hat(f) / (omega + f.grid.lam_unique)))
    out = free_resolvent(omega, f).values + (proj / bd) * g.values
    return Field2D(f.grid, out)


def _rule_check(rule: QuadratureRule):
    err = rule.self_test_error()
    if err > 1e-8:
        warnings.warn(
            f"quadrature self-test error {err:.2e} exceeds 1e-8", stacklevel=3
        )


def _node_data(pi: PointInteraction, grid: Grid2D, omega: float, rule: QuadratureRule):
    """Shifts omega + t_i, coefficients w_i t_i^{-1/2}/pi and discrete beta
    at every node."""
    shifts = omega + rule.nodes
    invg = _inv_coupling(pi, grid)
    betas = invg - kernels.reduce_lam(
        grid.lattice_counts.astype(np.complex128), grid.lam_unique, shifts
    ).real / grid.box_size**2
    return shifts, rule.scaled_weights, betas


def inv_sqrt(
    pi: PointInteraction, omega: float, f: Field2D, rule: QuadratureRule
) -> Field2D:
    """(omega - Delta_alpha)^{-1/2} f via the half-line resolvent integral.

    All node contributions are accumulated in frequency space: the free
    parts collapse to a single multiplier on the distinct |xi|^2 values and
    the rank-one parts to a single radial profile, so the whole quadrature
    costs one forward and one inverse FFT.
    """
    if not omega > pi.omega0:
        raise DomainError(f"inv_sqrt requires omega > omega0 = {pi.omega0}")
    _rule_check(rule)
    grid = f.grid
    shifts, coefs, betas = _node_data(pi, grid, omega, rule)
    if np.min(np.abs(betas)) < _POLE_TOL:
        raise PoleError("quadrature node hit the bound-state pole")

    fhat = np.fft.fft2(f.values)
    g_u = _delta_pairing_hat(f)
    proj = kernels.reduce_lam(g_u, grid.lam_unique, shifts)  # <G_{w+t}, f> per node

    free_mult = kernels.sum_nodes(
        coefs.astype(np.complex128), shifts, grid.lam_unique
    )
    rank_prof = kernels.sum_nodes(coefs * proj / betas, shifts, grid.lam_unique)

    out_hat = free_mult[grid._lam_inverse] * fhat + (
        grid.alt_phase / grid.spacing**2
    ) * rank_prof[grid._lam_inverse]
    return Field2D(grid, np.fft.ifft2(out_hat))


# Kernel matrices over (quadrature node, distinct radius), cached per
# (grid, rule) since every gamma call reuses them.


@lru_cache(maxsize=8)
def _kernel_matrices(grid: Grid2D, rule: QuadratureRule):
    r = grid.r_unique
    scale = np.sqrt(1.0 + rule.nodes)
    rr = scale[:, None] * r[None, :]
    phi0_t = special.phi0_array(rr.ravel()).reshape(rr.shape)
    phi0_1 = special.phi0_array(r)
    rem = kernels.remainder_real(rr.ravel(), phi0_t.ravel()).reshape(rr.shape)
    green = kernels.k0_real(rr.ravel()).reshape(rr.shape) / _TWO_PI
    return {
        "remainder": rem,
        "phi0_shift": phi0_t,
        "phi0_diff": phi0_t - phi0_1[None, :],
        "green": green,
        "phi0_base": phi0_1,
    }


def _radial_counts_pairing(f: Field2D, profiles: np.ndarray) -> np.ndarray:
    """<profile_i, f> = h^2 sum_x profile_i(r(x)) f(x) for a stack of radial
    profiles (bilinear, so the resulting operators are linear in f), via
    per-radius sums of f."""
    grid = f.grid
    inv = grid._radial_inverse.ravel()
    cf = f.values.ravel()
    nu = grid.r_unique.size
    s = np.bincount(inv, weights=cf.real, minlength=nu) + 1j * np.bincount(
        inv, weights=cf.imag, minlength=nu
    )
    return grid.cell_area * (profiles @ s)


def _require_unit_omega(omega: float):
    if omega != 1.0:
        raise DomainError(
            "the kernel-split operators are defined in the rescaled setting omega = 1"
        )


def _gamma_generic(
    pi: PointInteraction,
    f: Field2D,
    rule: QuadratureRule,
    omega: float,
    kind: str,
) -> Field2D:
    _require_unit_omega(omega)
    _rule_check(rule)
    mats = _kernel_matrices(f.grid, rule)
    pair = _radial_counts_pairing(f, mats["green"])  # <G_{1+t_i}, f>
    wts = rule.weights / np.sqrt(rule.nodes) * pair
    prof = wts @ mats[kind]
    return Field2D(f.grid, prof[f.grid._radial_inverse])


def gamma_op(
    pi: PointInteraction, f: Field2D, rule: QuadratureRule, omega: float = 1.0
) -> Field2D:
    """Gamma f = sum_i w_i t_i^{-1/2} R(sqrt(1+t_i)|x|) <G_{1+t_i}, f>."""
    return _gamma_generic(pi, f, rule, omega, "remainder")


def gamma0_op(
    pi: PointInteraction, f: Field2D, rule: QuadratureRule, omega: float = 1.0
) -> Field2D:
    """As gamma_op with kernel phi0(sqrt(1+t)|x|) - phi0(|x|)."""
    return _gamma_generic(pi, f, rule, omega, "phi0_diff")


def gamma1_op(
    pi: PointInteraction, f: Field2D, rule: QuadratureRule, omega: float = 1.0
) -> Field2D:
    """As gamma_op with kernel phi0(sqrt(1+t)|x|)."""
    return _gamma_generic(pi, f, rule, omega, "phi0_shift")


def c_functional(
    pi: PointInteraction, omega: float, f: Field2D, rule: QuadratureRule
) -> complex:
    """C(f) = (1/pi) sum_i w_i t_i^{-1/2} <G_{omega+t_i}, f> / beta(omega+t_i)."""
    if not omega > pi.omega0:
        raise DomainError(f"c_functional requires omega > omega0 = {pi.omega0}")
    _rule_check(rule)
    if omega == 1.0:
        green = _kernel_matrices(f.grid, rule)["green"]
    else:
        rr = np.sqrt(omega + rule.nodes)[:, None] * f.grid.r_unique[None, :]
        green = kernels.k0_real(rr.ravel()).reshape(rr.shape) / _TWO_PI
    pair = _radial_counts_pairing(f, green)
    betas = np.array([beta(pi, omega + t) for t in rule.nodes])
    return complex(np.sum(rule.scaled_weights * pair / betas))


@dataclass(frozen=True)
class Decomposition:
    """phi = regular + coeff * G_omega, the regular/singular splitting of a
    function in the form domain."""

    regular: Field2D
    coeff: complex
    omega: float

    def __post_init__(self):
        if not (self.omega > 0 and np.isfinite(self.omega)):
            raise DomainError(f"decomposition omega must be positive, got {self.omega}")
        if not np.isfinite(complex(self.coeff)):
            raise DomainError("decomposition coefficient must be finite")

    def assemble(self) -> Field2D:
        g = green_field_discrete(self.omega, self.regular.grid)
        return Field2D(self.regular.grid, self.regular.values + self.coeff * g.values)

    def regular_at_origin(self) -> complex:
        i, j = self.regular.grid.origin_index
        return complex(self.regular.values[i, j])


def lambda_decompose(
    pi: PointInteraction, f: Field2D, rule: QuadratureRule, omega: float = 1.0
) -> Decomposition:
    """Split (1 - Delta_alpha)^{-1/2} f into regular part + coeff * G_1.

    regular = (1 - Delta)^{-1/2} f + Gamma f + Gamma0 f - C(f) R, with the
    beta-weighted variants of the kernel-split operators and the
    grid-consistent remainder R = G^d_1 - phi0; coeff = C(f).
    """
    _require_unit_omega(omega)
    if not 1.0 > pi.omega0:
        raise DomainError("lambda_decompose requires omega0 < 1 (rescaled setting)")
    _rule_check(rule)
    grid = f.grid
    shifts, coefs, betas = _node_data(pi, grid, 1.0, rule)
    if np.min(np.abs(betas)) < _POLE_TOL:
        raise PoleError("quadrature node hit the bound-state pole")
    mats = _kernel_matrices(grid, rule)

    g_u = _delta_pairing_hat(f)
    proj = kernels.reduce_lam(g_u, grid.lam_unique, shifts)
    wts = coefs * proj / betas  # per-node rank-one strengths
    c_val = complex(np.sum(wts))

    # sum_i wts_i G^d_{1+t_i}, collapsed in frequency space
    rank_prof = kernels.sum_nodes(wts, shifts, grid.lam_unique)
    rank_field = np.fft.ifft2(
        (grid.alt_phase / grid.spacing**2) * rank_prof[grid._lam_inverse]
    )

    # radial contractions of the phi0 kernels
    shift_prof = wts @ mats["phi0_shift"]
    gamma_vals = rank_field - shift_prof[grid._radial_inverse]
    gamma0_vals = (shift_prof - c_val * mats["phi0_base"])[grid._radial_inverse]

    free_half = radial_multiplier(f, 1.0 / np.sqrt(1.0 + grid.lam_unique))
    r1 = green_field_discrete(1.0, grid).values - mats["phi0_base"][grid._radial_inverse]
    regular = free_half.values + gamma_vals + gamma0_vals - c_val * r1
    return Decomposition(regular=Field2D(grid, regular), coeff=c_val, omega=1.0)


def resolvent_decomposition(
    pi: PointInteraction, omega: float, f: Field2D
) -> Decomposition:
    """The domain element (omega - Delta_alpha)^{-1} f, split into its
    regular part and its Green-function coefficient <G_omega, f>/beta."""
    if not (omega > 0 and np.isfinite(omega)):
        raise DomainError(f"resolvent_decomposition requires omega > 0, got {omega}")
    bd = beta_discrete(pi, f.grid, omega)
    if abs(bd) < _POLE_TOL:
        raise PoleError(f"omega = {omega} is at the bound-state pole")
    proj = complex(np.sum(_delta_pairing_hat(f) / (omega + f.grid.lam_unique)))
    coeff = proj / bd
    phi = resolvent(pi, omega, f)
    g = green_field_discrete(omega, f.grid)
    reg = Field2D(f.grid, phi.values - coeff * g.values)
    return Decomposition(regular=reg, coeff=coeff, omega=float(omega))


def apply_forward(
    pi: PointInteraction, omega: float, d: Decomposition
) -> Field2D:
    """(omega - Delta_alpha) applied to phi = regular + coeff * G_omega,
    which equals (omega - Delta) regular for domain elements."""
    if not (omega > 0 and np.isfinite(omega)):
        raise DomainError(f"apply_forward requires omega > 0, got {omega}")
    bd = beta_discrete(pi, d.regular.grid, omega)
    if abs(bd) < _POLE_TOL:
        raise PoleError(f"omega = {omega} is at the bound-state pole")
    g0 = d.regular_at_origin()
    expected = g0 / bd
    scale = max(abs(d.coeff), abs(expected), 1e-30)
    if abs(d.coeff - expected) > _MEMBERSHIP_RTOL * scale:
        raise MembershipError(
            f"coeff {d.coeff} != regular(0)/beta = {expected}: not in the domain"
        )
    return radial_multiplier(d.regular, omega + d.regular.grid.lam_unique + 0j)


def h1_alpha_norm(d: Decomposition) -> float:
    """sqrt(||regular||_{H^1}^2 + |coeff|^2)."""
    return float(np.hypot(sobolev_norm_1p(d.regular, 2.0), abs(d.coeff)))
