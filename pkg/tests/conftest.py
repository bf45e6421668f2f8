import json

import numpy as np
import pytest

from finslerjet.families import MetricFamilySpec, construct
from finslerjet.general_utils.sampling import SampleConfig


def make_spec(family: str, dimension: int, **params) -> MetricFamilySpec:
    return MetricFamilySpec.from_params(family, dimension, **params)


def make_metric(family: str, dimension: int, **params):
    return construct(make_spec(family, dimension, **params))


@pytest.fixture
def euclidean2():
    return make_metric("euclidean", 2)


@pytest.fixture
def euclidean3():
    return make_metric("euclidean", 3)


@pytest.fixture
def space_form3():
    return make_metric("space_form", 3, mu=1.0)


@pytest.fixture
def funk2():
    return make_metric("funk", 2)


@pytest.fixture
def riemannian3():
    return make_metric("riemannian", 3, k=[0.5, 1.0, 1.5])


@pytest.fixture
def simple_randers3():
    """F = |y| + 0.5 y¹."""
    return make_metric("randers", 3, alpha=np.eye(3).tolist(), b=[0.5, 0.0, 0.0])


@pytest.fixture
def twisted_randers2():
    return make_metric("randers", 2, alpha=[[1.0, 0.2], [0.2, 1.5]], b=[0.2, -0.1], twist=0.3)


@pytest.fixture
def twisted_randers3():
    """A generic Randers metric: β is not closed and the flag curvature is not scalar."""
    return make_metric("randers", 3, alpha=[[1.0, 0.2, 0.0], [0.2, 1.5, 0.1], [0.0, 0.1, 0.8]],
                       b=[0.2, -0.1, 0.05], twist=0.3)


@pytest.fixture
def quartic3():
    return make_metric("quartic", 3)


@pytest.fixture
def cms_delta():
    """Navigation metric with c ≡ δ: constant flag curvature -δ²."""
    return make_metric("cms_family", 3, delta=0.1)


@pytest.fixture
def cms_linear():
    """Navigation metric with c = ⟨a, x⟩, θ ≠ 0 away from critical points."""
    return make_metric("cms_family", 3, a=[0.1, 0.0, 0.0])


@pytest.fixture
def cms_radial():
    """Navigation metric with a = 0, δ and μ nonzero: θ and dσ are both radial."""
    return make_metric("cms_family", 3, delta=0.1, mu=0.2)


@pytest.fixture
def small_sampler():
    return SampleConfig(num_points=3, seed=7, directions=12)


@pytest.fixture
def write_spec(tmp_path):
    def write(family: str, dimension: int, name: str = "spec.json", **params) -> str:
        path = tmp_path / name
        path.write_text(json.dumps({"family": family, "dimension": dimension, "params": params}), encoding="utf-8")
        return str(path)

    return write
