import numpy as np
import pytest

from fsilab.domain import Geometry, GridPair, MaterialParams


@pytest.fixture
def geom():
    return Geometry()


@pytest.fixture
def mat_unit():
    """Medium solid (delta=1): cp = sqrt(3), cs = 1."""
    return MaterialParams.from_density_ratio(1.0, mu_f=0.02)


@pytest.fixture
def grid_small(geom):
    return GridPair(geom=geom, nx=16, ny_f=16, ny_s=8)
