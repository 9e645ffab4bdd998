import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from aconvex.geom_core import Polygon
from aconvex import random_shapes as rs

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_of(seed):
    return np.random.default_rng(seed)


polygons = seeds.map(lambda s: rs.random_polygon(rng_of(s)))
certified = seeds.map(lambda s: rs.random_certified(rng_of(s)))
convex_polygons = seeds.map(lambda s: rs.random_convex(rng_of(s), 3 + s % 30))
chain_pairs = seeds.map(lambda s: rs.random_chain_pair(rng_of(s)))
looping_chains = seeds.map(lambda s: rs.random_looping_chain(rng_of(s)))


@pytest.fixture
def square():
    return Polygon.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def lshape():
    return Polygon.from_points([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def staircase():
    return Polygon.from_points([(0, 0), (3, 0), (3, 1), (2, 1), (2, 2), (1, 2), (1, 3), (0, 3)])
