"""Shared fixtures: cones, small problems and a fast Dini discretization."""

import pytest

from setlat.application.commands import RunSettings
from setlat.application.corpus import load_corpus_problem
from setlat.domain.models import DiniConfig
from setlat.domain.polytope import ConvexCone


@pytest.fixture
def orthant2():
    return ConvexCone.orthant(2)


@pytest.fixture
def ray_cone():
    """C = cone{(0, 1)} in R^2."""
    return ConvexCone.from_generators([[0.0, 1.0]])


@pytest.fixture
def fast_dini():
    return DiniConfig(t0=0.1, rho=0.5, K=12, window=3)


@pytest.fixture
def settings():
    return RunSettings()


@pytest.fixture
def scalar_problem():
    return load_corpus_problem("scalar_shapes.json")


@pytest.fixture
def triangle_problem():
    return load_corpus_problem("triangle.json")


@pytest.fixture
def domination_problem():
    return load_corpus_problem("strict_domination.json")


@pytest.fixture
def problem_json():
    """A minimal valid problem document."""
    return {
        "name": "line",
        "space": {"n": 1, "d": 2},
        "cone": {"generators": [[1, 0], [0, 1]]},
        "vector_function": {"pieces": [{"guard": "0 <= x1 <= 1",
                                        "value": ["x1", "1 - x1"]}]},
        "grids": {"domain": "0:1:0.25"},
        "M": [[0.0], [1.0]],
        "x0": [0.5],
    }
