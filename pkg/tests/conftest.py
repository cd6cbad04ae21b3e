import numpy as np
import pytest

from eifg.core.grid import DomainSpec, build_grid


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def unit_grid():
    return build_grid(DomainSpec.box(0.0, 1.0, 1), [16])


@pytest.fixture
def box_grid():
    return build_grid(DomainSpec((0.0, -0.5, 0.0), (1.0, 0.5, 2.0)), [8, 6, 10])
