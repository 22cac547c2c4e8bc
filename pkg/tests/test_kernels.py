import numpy as np
import pytest

from deltalap import backend, kernels
from deltalap._kernels_numpy import k0_real as np_k0
from deltalap._kernels_numpy import reduce_lam as np_reduce
from deltalap._kernels_numpy import remainder_real as np_rem
from deltalap._kernels_numpy import sum_nodes as np_sum
from deltalap.special import phi0_array

numba = pytest.importorskip("numba")
from deltalap._kernels_numba import k0_real as nb_k0  # noqa: E402
from deltalap._kernels_numba import reduce_lam as nb_reduce  # noqa: E402
from deltalap._kernels_numba import remainder_real as nb_rem  # noqa: E402
from deltalap._kernels_numba import sum_nodes as nb_sum  # noqa: E402


@pytest.fixture(scope="module")
def data():
    rng = np.random.default_rng(0)
    r = np.sort(rng.uniform(1e-4, 60.0, 2000))
    coefs = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    shifts = np.sort(rng.uniform(1.0, 1e5, 50))
    lam = np.sort(rng.uniform(0.0, 1e4, 300))
    g = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    return r, coefs, shifts, lam, g


def test_backend_name():
    assert backend.backend_name() in ("numba", "numpy")
    assert kernels.k0_real is not None


def test_k0_parity(data):
    r = data[0]
    a, b = np_k0(r), nb_k0(r)
    assert np.max(np.abs(a - b)) <= 1e-14 * np.max(np.abs(a))


def test_remainder_parity(data):
    r = data[0]
    phi = phi0_array(r)
    a, b = np_rem(r, phi), nb_rem(r, phi)
    assert np.max(np.abs(a - b)) <= 1e-13


def test_sum_nodes_parity(data):
    _, coefs, shifts, lam, _ = data
    a = np_sum(coefs, shifts, lam)
    b = nb_sum(coefs, shifts, lam)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(a))
    # against a dense reference
    ref = np.sum(coefs[:, None] / (shifts[:, None] + lam[None, :]), axis=0)
    assert np.allclose(a, ref, rtol=1e-12)


def test_reduce_lam_parity(data):
    _, _, shifts, lam, g = data
    a = np_reduce(g, lam, shifts)
    b = nb_reduce(g, lam, shifts)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(a))
    ref = np.sum(g[None, :] / (shifts[:, None] + lam[None, :]), axis=1)
    assert np.allclose(a, ref, rtol=1e-12)
