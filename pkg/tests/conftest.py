import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rrtexplore.occupancy import CellState, OccupancyGrid

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def make_grid(w, h, res=0.5, fill=CellState.FREE):
    return OccupancyGrid(np.full((h, w), fill, dtype=np.uint8), res)


@pytest.fixture
def free_grid():
    return make_grid
