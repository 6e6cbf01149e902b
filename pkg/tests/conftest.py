import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mgcl import _kernels
from mgcl.surfaces import make_family


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    _kernels.warmup()


@pytest.fixture(scope="session")
def z2_surface():
    return make_family("holomorphic", [0, 0, 1], 1.0)


@pytest.fixture(scope="session")
def scherk_surface():
    return make_family("scherk", [], 1.0)


@pytest.fixture(scope="session")
def tilted_plane():
    return make_family("plane", [1.0, 0.0], 1.0)


@pytest.fixture(scope="session")
def scherk_chart(scherk_surface):
    from mgcl.conformal import solve_chart

    return solve_chart(scherk_surface, modes=32, grid=(64, 256), tol=1e-3)


def random_disc_points(count, radius, seed, margin=0.999):
    rng = np.random.default_rng(seed)
    r = radius * margin * np.sqrt(rng.uniform(0.0, 1.0, count))
    a = rng.uniform(0.0, 2.0 * np.pi, count)
    return list(zip(r * np.cos(a), r * np.sin(a)))
