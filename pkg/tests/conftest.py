"""
Shared fixtures: catalog transforms, input functions and seeded random varieties.
"""

import math

import numpy as np
import pytest

from meanper.entire import EntireFunctionSpec, MultiplicityVariety, find_zeros, taylor_stream_of
from meanper.growth import YoungSpec

TWO_PI = 2.0 * math.pi


def random_variety(rng: np.random.Generator, max_nodes: int, radius: float, separation: float,
                   max_multiplicity: int) -> MultiplicityVariety:
    """Random nodes in |alpha| <= radius with a minimum pairwise separation."""
    count = int(rng.integers(1, max_nodes + 1))
    nodes = []
    while len(nodes) < count:
        candidate = complex(*rng.uniform(-radius, radius, size=2))
        if abs(candidate) > radius:
            continue
        if all(abs(candidate - other) >= separation for other in nodes):
            nodes.append(candidate)
    points = [(alpha, int(rng.integers(1, max_multiplicity + 1))) for alpha in nodes]
    return MultiplicityVariety.from_points(points)


def random_values(rng: np.random.Generator, V: MultiplicityVariety):
    """Jet data with |a| <= 1."""
    rows = []
    for _, m in V:
        modulus = rng.uniform(0.0, 1.0, size=m)
        phase = rng.uniform(0.0, TWO_PI, size=m)
        rows.append(modulus * np.exp(1j * phase))
    return rows


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def exp_minus_one():
    """Phi = e^xi - 1, the transform of delta_1 - delta_0."""
    return EntireFunctionSpec.exp_sum([(1.0, 1.0), (-1.0, 0.0)], label="exp(xi) - 1")


@pytest.fixture
def xi_squared_minus_one():
    return EntireFunctionSpec.polynomial([-1.0, 0.0, 1.0])


@pytest.fixture
def xi_squared():
    return EntireFunctionSpec.polynomial([0.0, 0.0, 1.0])


@pytest.fixture
def segment_average():
    return EntireFunctionSpec.segment_average(1.0)


@pytest.fixture
def fourier_variety(exp_minus_one):
    """Zeros 2 pi i k, |k| <= 3."""
    return find_zeros(exp_minus_one, 20.0)


@pytest.fixture
def ode_variety(xi_squared_minus_one):
    return find_zeros(xi_squared_minus_one, 2.0)


@pytest.fixture
def sin_two_pi():
    """sin(2 pi z) = (e^{2 pi i z} - e^{-2 pi i z}) / 2i."""
    spec = EntireFunctionSpec.exp_sum([(1 / 2j, 2j * math.pi), (-1 / 2j, -2j * math.pi)])
    return taylor_stream_of(spec)


@pytest.fixture
def ode_input():
    """f = 3 e^z + 2 e^{-z}, a solution of f'' - f = 0."""
    return taylor_stream_of(EntireFunctionSpec.exp_sum([(3.0, 1.0), (2.0, -1.0)]))


@pytest.fixture
def linear():
    return YoungSpec.linear()
