import json
import os

import numpy as np
import pytest

from deltalap import Grid2D, PointInteraction, QuadratureRule
from deltalap.ensembles import band_limited_field

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def grid():
    return Grid2D(64, 10.0)


@pytest.fixture(scope="session")
def pi():
    return PointInteraction(0.3)


@pytest.fixture(scope="session")
def rule():
    return QuadratureRule.build(1.0, 200)


@pytest.fixture(scope="session")
def rand_field(grid):
    # band small enough for the 64-point grid
    return band_limited_field(grid, 11, kmax=np.pi * 64 / (4.0 * 10.0))


@pytest.fixture(scope="session")
def bessel_oracle():
    with open(os.path.join(DATA_DIR, "bessel_oracle.json")) as fh:
        return json.load(fh)
