"""Shared samples for the distcomp tests."""

from pathlib import Path

import numpy as np
import pytest

from distcomp.comparison_engine import synth
from distcomp.distance_like import SampledFunction
from distcomp.formats import write_sample_csv
from distcomp.model_spaces import ComparisonParams


@pytest.fixture
def euclidean_params():
    """Fits g(0) = 3/5, g(1) = 4/5 in the flat plane."""
    return ComparisonParams(0.0, 0.36, 0.48)


@pytest.fixture
def euclidean_sample(euclidean_params):
    return synth(euclidean_params, 0.0, 1.0, 1001)


@pytest.fixture
def hyperbolic_sample():
    return synth(ComparisonParams(-1.0, 0.3, 0.5), 0.0, 1.0, 1001)


@pytest.fixture
def spherical_sample():
    return synth(ComparisonParams(1.0, 0.3, 0.2), 0.0, 1.0, 1001)


@pytest.fixture
def slope_quarter_sample():
    """g(t) = (t + 1) / 4 on [0, 1]: nonexpanding but not distance-like."""
    ts = np.linspace(0.0, 1.0, 11)
    return SampledFunction(ts, (ts + 1.0) / 4.0)


@pytest.fixture
def constant_sample():
    def make(c, a=0.0, b=1.0, n=101):
        return SampledFunction(np.linspace(a, b, n), np.full(n, c))

    return make


@pytest.fixture
def sample_file(tmp_path):
    """Write a SampledFunction as t,g CSV and return its path."""

    def write(f, name="sample.csv") -> Path:
        path = tmp_path / name
        with open(path, "w", newline="\n") as stream:
            write_sample_csv(f, stream)
        return path

    return write
