import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltalap import bessel_k0, cutoff_phi, phi0, remainder_R, split_R
from deltalap.errors import DomainError
from deltalap.special import (
    EULER_GAMMA,
    cutoff_phi_array,
    k0_complex_array,
    phi0_array,
    remainder_array,
)


def _oracle_err(z, got, ref):
    return abs(got - ref) / abs(ref)


def test_k0_real_oracle(bessel_oracle):
    worst = 0.0
    for r, k0r, k0i, k1r, k1i in bessel_oracle["real"]:
        ev = bessel_k0(r)
        worst = max(worst, _oracle_err(r, ev.value, complex(k0r, k0i)))
        worst = max(worst, _oracle_err(r, ev.derivative, -complex(k1r, k1i)))
    assert worst <= 1e-12


def test_k0_complex_oracle(bessel_oracle):
    worst = 0.0
    for a, b, k0r, k0i, k1r, k1i in bessel_oracle["complex"]:
        z = complex(a, b)
        ev = bessel_k0(z)
        worst = max(worst, _oracle_err(z, ev.value, complex(k0r, k0i)))
        worst = max(worst, _oracle_err(z, ev.derivative, -complex(k1r, k1i)))
    assert worst <= 1e-12


def test_k0_array_matches_scalar(bessel_oracle):
    zs = np.array([complex(a, b) for a, b, *_ in bessel_oracle["complex"]])
    vals = k0_complex_array(zs)
    for z, v in zip(zs, vals):
        assert abs(v - bessel_k0(z).value) <= 1e-14 * abs(v)


def test_k0_small_z_defect():
    # near the origin K0(z) = -log(z/2) - gamma + O(z^2 log z)
    for z in np.logspace(-6, -2, 20):
        defect = abs(bessel_k0(z).value + np.log(z / 2.0) + EULER_GAMMA)
        assert defect <= 2.0 * z * z * np.log(2.0 / z)


def test_k0_regime_boundaries():
    # continuity across the regime switches (the step in z itself moves K0
    # by about |K0'| dz, so compare against that scale)
    for z0 in (4.0, 16.0):
        ev_lo = bessel_k0(z0 * (1 - 1e-9))
        ev_hi = bessel_k0(z0 * (1 + 1e-9))
        assert ev_lo.regime != ev_hi.regime
        drift = abs(ev_lo.derivative) * 2e-9 * z0
        assert abs(ev_lo.value - ev_hi.value) <= drift + 1e-11 * abs(ev_lo.value)
    assert bessel_k0(3.9).regime == "series"
    assert bessel_k0(5.0).regime == "chebyshev"
    assert bessel_k0(5.0 + 1.0j).regime == "quadrature"
    assert bessel_k0(20.0).regime == "asymptotic"


def test_k0_domain_errors():
    for z in (0.0, -1.0, -2.0 + 1.0j):
        with pytest.raises(DomainError):
            bessel_k0(z)
    with pytest.raises(DomainError):
        k0_complex_array(np.array([1.0, -1.0 + 0j]))


def test_k0_conjugate_symmetry():
    for z in (0.5 + 2j, 6.0 + 3j, 30.0 + 10j):
        a = bessel_k0(z).value
        b = bessel_k0(np.conj(z)).value
        assert abs(a - np.conj(b)) <= 1e-13 * abs(a)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e-4, max_value=80.0))
def test_k0_positive_decreasing(r):
    v = bessel_k0(r).value
    assert v.real > 0 and v.imag == 0
    assert bessel_k0(r).derivative.real < 0


def test_cutoff_phi_plateaus():
    assert cutoff_phi(0.0) == 1.0
    assert cutoff_phi(1.0) == 1.0
    assert cutoff_phi(2.0) == 0.0
    assert cutoff_phi(5.0) == 0.0
    mid = cutoff_phi_array(np.linspace(1.01, 1.99, 50))
    assert np.all(np.diff(mid) <= 0)
    assert np.all((mid >= 0) & (mid <= 1))
    assert 0.0 < cutoff_phi(1.5) < 1.0
    with pytest.raises(DomainError):
        cutoff_phi(-0.1)


def test_phi0_profile():
    # -(log(r/2)+gamma)/(2 pi) on the inner plateau, zero beyond 2
    r = 0.3
    expected = -(np.log(r / 2.0) + EULER_GAMMA) / (2.0 * np.pi)
    assert phi0(r) == pytest.approx(expected, rel=1e-15)
    assert phi0(2.5) == 0.0
    with pytest.raises(DomainError):
        phi0(0.0)


def test_remainder_bounded_at_origin():
    # K0/(2 pi) and phi0 share the log singularity, so R extends continuously
    r = np.logspace(-12, -1, 40)
    vals = remainder_array(r)
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(vals)) < 1.0
    # spot value against the direct (cancelling) formula at moderate r
    r0 = 0.5
    direct = bessel_k0(r0).value.real / (2.0 * np.pi) - phi0(r0)
    assert remainder_R(r0) == pytest.approx(direct, rel=1e-10)


def test_split_R_partition():
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for r in (0.1, 0.5, 0.9, 1.5, 3.0, 10.0):
        small, large = split_R(r)
        assert small + large == pytest.approx(remainder_R(r), abs=1e-15)
        if r <= inv_sqrt2:
            assert large == 0.0
        if r >= 2.0:
            assert small == 0.0


def test_phi0_array_shape():
    r = np.linspace(0.1, 3.0, 17).reshape(1, 17)
    assert phi0_array(r).shape == (1, 17)
