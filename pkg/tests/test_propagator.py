import numpy as np
import pytest

from deltalap import (
    Field2D,
    SpaceTimeNorm,
    TimeGrid,
    cn_step,
    lp_norm,
    pairing,
    propagate,
    strichartz_norm,
)
from deltalap.errors import DomainError, GridMismatchError
from deltalap.field import Grid2D
from deltalap.operator import green_field_discrete
from deltalap.propagator import get_stepper, load_frames, save_frames


def test_time_grid():
    tg = TimeGrid(1.0, 4)
    assert tg.tau == 0.25
    assert np.allclose(tg.times, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert TimeGrid(1.0, 0).tau == 0.0
    with pytest.raises(DomainError):
        TimeGrid(-1.0, 4)
    with pytest.raises(DomainError):
        TimeGrid(1.0, -1)


def test_space_time_norm_admissibility():
    assert SpaceTimeNorm(4.0, 4.0, 1.0).admissible
    assert SpaceTimeNorm(np.inf, 2.0, 1.0).admissible
    assert not SpaceTimeNorm(2.0, np.inf, 1.0).admissible
    assert not SpaceTimeNorm(4.0, 3.0, 1.0).admissible
    with pytest.raises(DomainError):
        SpaceTimeNorm(4.0, 4.0, -1.0)


def test_mass_conservation(pi, rand_field):
    u = cn_step(pi, rand_field, 0.01)
    assert lp_norm(u, 2.0) == pytest.approx(lp_norm(rand_field, 2.0), rel=1e-13)


def test_reversibility(pi, rand_field):
    back = cn_step(pi, cn_step(pi, rand_field, 0.02), -0.02)
    assert lp_norm(back - rand_field, 2.0) <= 1e-12 * lp_norm(rand_field, 2.0)


def test_linearity(pi, grid, rand_field):
    rng = np.random.default_rng(9)
    g = Field2D(grid, rng.standard_normal((grid.n, grid.n)))
    lhs = cn_step(pi, rand_field + (2.0 - 1.0j) * g, 0.05)
    rhs = cn_step(pi, rand_field, 0.05) + (2.0 - 1.0j) * cn_step(pi, g, 0.05)
    assert lp_norm(lhs - rhs, 2.0) <= 1e-12 * lp_norm(lhs, 2.0)


def test_bound_state_phase(pi, grid):
    # on the eigenvector the Cayley step is the Cayley transform of omega0
    gd = green_field_discrete(pi.omega0, grid)
    tau = 0.01
    out = cn_step(pi, gd, tau)
    z = pairing(out, gd) / pairing(gd, gd)
    expected = (1.0 + 0.5j * tau * pi.omega0) / (1.0 - 0.5j * tau * pi.omega0)
    assert z == pytest.approx(expected, rel=1e-10)


def test_propagate_frames(pi, rand_field):
    frames = propagate(pi, rand_field, TimeGrid(0.1, 5))
    assert len(frames) == 6
    assert frames[0] is rand_field
    assert propagate(pi, rand_field, TimeGrid(0.1, 0)) == [rand_field]


def test_stepper_grid_mismatch(pi, grid, rand_field):
    other = Grid2D(grid.n, 2.0 * grid.box_size)
    stepper = get_stepper(pi, other, 0.01)
    with pytest.raises(GridMismatchError):
        stepper.apply(rand_field)
    with pytest.raises(DomainError):
        get_stepper(pi, grid, 0.0)


def test_strichartz_norm(pi, rand_field):
    tg = TimeGrid(0.1, 4)
    frames = propagate(pi, rand_field, tg)
    sn = strichartz_norm(frames, tg, 4.0, 4.0)
    assert sn.admissible and sn.value > 0
    sup = strichartz_norm(frames, tg, np.inf, 2.0)
    assert sup.value == pytest.approx(lp_norm(rand_field, 2.0), rel=1e-12)
    with pytest.raises(DomainError):
        strichartz_norm(frames[:-1], tg, 4.0, 4.0)


def test_frames_roundtrip(tmp_path, pi, rand_field):
    tg = TimeGrid(0.1, 3)
    frames = propagate(pi, rand_field, tg)
    path = tmp_path / "frames.bin"
    save_frames(path, frames, tg)
    back, times = load_frames(path)
    assert len(back) == 4
    assert np.allclose(times, tg.times)
    for a, b in zip(back, frames):
        assert np.array_equal(a.values, b.values)
    with pytest.raises(DomainError):
        save_frames(path, frames[:-1], tg)
