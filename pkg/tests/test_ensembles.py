import numpy as np
import pytest

from deltalap import Grid2D, lp_norm, upsample
from deltalap.ensembles import band_limited_field, default_band, ensemble
from deltalap.errors import DomainError


def test_unit_mass(grid):
    kmax = np.pi * grid.n / (4.0 * grid.box_size)
    f = band_limited_field(grid, 1, kmax=kmax)
    assert lp_norm(f, 2.0) == pytest.approx(1.0, rel=1e-12)


def test_determinism(grid):
    kmax = np.pi * grid.n / (4.0 * grid.box_size)
    a = band_limited_field(grid, [3, 1], kmax=kmax)
    b = band_limited_field(grid, [3, 1], kmax=kmax)
    c = band_limited_field(grid, [3, 2], kmax=kmax)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_cross_resolution_consistency():
    # the same seed samples the same continuum function on every grid
    L = 10.0
    kmax = np.pi * 64 / (4.0 * L)
    coarse = band_limited_field(Grid2D(64, L), 7, kmax=kmax)
    fine = band_limited_field(Grid2D(128, L), 7, kmax=kmax)
    diff = upsample(coarse, 128) - fine
    assert lp_norm(diff, 2.0) <= 1e-12


def test_band_must_fit(grid):
    with pytest.raises(DomainError):
        band_limited_field(grid, 0, kmax=np.pi * grid.n / grid.box_size)


def test_default_band_independent_of_grid():
    assert default_band(40.0) == pytest.approx(np.pi * 512 / 160.0)


def test_ensemble_substreams(grid):
    kmax = np.pi * grid.n / (4.0 * grid.box_size)
    fields = ensemble(grid, 5, 3, kmax=kmax)
    assert len(fields) == 3
    direct = band_limited_field(grid, [5, 2], kmax=kmax)
    assert np.array_equal(fields[2].values, direct.values)
