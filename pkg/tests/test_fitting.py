import math

import numpy as np
import pytest

from distcomp.config import FIGURE_KS
from distcomp.errors import DomainError, InfeasibleChordError, ParameterError
from distcomp.fitting import (
    ChordSpec,
    fit,
    fit_curvature_scale,
    fit_euclidean,
    fit_hyperbolic,
    fit_spherical,
)
from distcomp.model_spaces import ComparisonParams, eval_g


def test_fit_euclidean_figure_endpoints():
    result = fit_euclidean(ChordSpec(0, 1, 0.6, 0.8, 0))
    assert result.params.u == pytest.approx(0.36, abs=1e-15)
    assert result.params.v == pytest.approx(0.48, abs=1e-15)
    assert abs(result.residual_t1) < 1e-12
    assert abs(result.residual_t2) < 1e-12


def test_fit_euclidean_symmetric_chord():
    result = fit(ChordSpec(0, 2, math.sqrt(2), math.sqrt(2), 0))
    assert result.params.u == pytest.approx(1.0, abs=1e-12)
    assert result.params.v == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", [0, -1, 1])
def test_slope_quarter_chord_is_infeasible(k):
    # 1/4 + 1/2 < 1: no triangle with these sides
    with pytest.raises(InfeasibleChordError):
        fit(ChordSpec(0, 1, 0.25, 0.5, k))


def test_fit_euclidean_rejects_degenerate_chord():
    with pytest.raises(InfeasibleChordError):
        fit(ChordSpec(0, 1, 0.5, 0.5, 0))


def test_fit_hyperbolic_on_the_geodesic():
    result = fit_hyperbolic(ChordSpec(1, 2, 1, 2, -1))
    assert result.params.u ** 2 == pytest.approx(0.0, abs=1e-12)
    assert result.params.v == pytest.approx(1.0, rel=1e-12)


def test_fit_hyperbolic_figure_endpoints():
    result = fit(ChordSpec(0, 1, 0.6, 0.8, -1))
    assert abs(result.residual_t1) <= 1e-10
    assert abs(result.residual_t2) <= 1e-10


def test_fit_spherical_pole():
    result = fit_spherical(ChordSpec(0, math.pi / 2, math.pi / 2, math.pi / 2, 1))
    assert result.params.u == pytest.approx(0.0, abs=1e-12)
    assert result.params.v == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("k", [1, 6])
def test_fit_spherical_figure_endpoints(k):
    result = fit(ChordSpec(0, 1, 0.6, 0.8, k))
    assert abs(result.residual_t1) <= 1e-10
    assert abs(result.residual_t2) <= 1e-10


def test_fit_spherical_rejects_points_on_the_geodesic():
    with pytest.raises(InfeasibleChordError):
        fit(ChordSpec(0, 0.2, 0.1, 0.1, 1))


def test_chord_spec_validation():
    with pytest.raises(ParameterError):
        ChordSpec(1, 1, 0.5, 0.5, 0)
    with pytest.raises(ParameterError):
        ChordSpec(0, 1, 0.0, 0.5, 0)
    with pytest.raises(ParameterError):
        ChordSpec(0, float("nan"), 0.5, 0.5, 0)
    with pytest.raises(DomainError):
        ChordSpec(0, 4, 2.0, 2.5, 1)
    with pytest.raises(DomainError):
        ChordSpec(-0.5, 0.5, 0.6, 0.8, 1)
    assert ChordSpec(0.25, 1, 0.6, 0.8, 0).width == 0.75


def test_fit_dispatch_matches_the_branch():
    spec = ChordSpec(0, 1, 0.6, 0.8, 0)
    assert fit(spec) == fit_euclidean(spec)
    with pytest.raises(ParameterError):
        fit_hyperbolic(spec)
    with pytest.raises(ParameterError):
        fit_spherical(spec)


def test_fit_handles_very_negative_curvature():
    result = fit(ChordSpec(0, 1, 0.6, 0.8, -4000))
    assert abs(result.residual_t1) <= 1e-9
    assert abs(result.residual_t2) <= 1e-9


def test_fit_beyond_the_floating_point_range_is_a_domain_error():
    # sqrt(-k) * t2 = 1000 overflows exp
    with pytest.raises(DomainError):
        fit(ChordSpec(0, 1, 0.6, 0.8, -1e6))


def _random_params(rng, k):
    if k < 0:
        return ComparisonParams(k, rng.uniform(0, 1), rng.uniform(0.3, 2.0))
    if k == 0:
        return ComparisonParams(k, rng.uniform(-1, 2), rng.uniform(0.1, 2.0))
    radius = math.sqrt(rng.uniform(0.0, 0.5 / k))
    angle = rng.uniform(0, 2 * math.pi)
    return ComparisonParams(k, radius * math.cos(angle), radius * math.sin(angle))


@pytest.mark.parametrize("k", [-4.0, -1.0, -0.25, 0.0, 0.25, 1.0, 2.0])
def test_fit_recovers_random_parameters(k):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        params = _random_params(rng, k)
        t1, t2 = rng.uniform(0.0, 0.3), rng.uniform(0.6, 1.0)
        spec = ChordSpec(t1, t2, eval_g(params, t1), eval_g(params, t2), k)
        result = fit(spec)
        assert abs(result.residual_t1) <= 1e-10
        assert abs(result.residual_t2) <= 1e-10
        assert result.params.u ** 2 == pytest.approx(params.u ** 2, abs=1e-8)
        assert result.params.v == pytest.approx(params.v, abs=1e-8)
        if k >= 0:
            assert result.params.u == pytest.approx(params.u, abs=1e-8)


def test_curvature_scale_fits_every_figure_curvature():
    scale = fit_curvature_scale(0, 1, 0.6, 0.8, FIGURE_KS)
    assert list(scale) == [float(k) for k in FIGURE_KS]
    for result in scale.values():
        assert abs(result.residual_t1) <= 1e-9
        assert abs(result.residual_t2) <= 1e-9
    midpoints = [eval_g(scale[k].params, 0.5) for k in sorted(scale)]
    assert all(lo < hi for lo, hi in zip(midpoints, midpoints[1:]))


def test_curvature_scale_nests_pointwise():
    scale = fit_curvature_scale(0, 1, 0.6, 0.8, [-1, 0, 1])
    ts = np.linspace(0, 1, 101)
    below, flat, above = (eval_g(scale[k].params, ts) for k in (-1.0, 0.0, 1.0))
    assert np.all(below <= flat + 1e-12)
    assert np.all(flat <= above + 1e-12)


def test_curvature_scale_skips_infeasible_curvatures(caplog):
    with caplog.at_level("WARNING", logger="distcomp.fitting"):
        scale = fit_curvature_scale(0, 1, 0.25, 0.5, [0, 1])
    assert scale == {}
    assert "Skipping k=0" in caplog.text
