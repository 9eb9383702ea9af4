import math

import numpy as np
import pytest

from distcomp.comparison_engine import (
    ChordRelation,
    ThresholdSide,
    bump,
    chord_params,
    compare_on_chord,
    compare_on_indices,
    draw_chords,
    equivalence_audit,
    estimate_threshold,
    interpolated_chord,
    perturb,
    synth,
)
from distcomp.errors import BracketError, DomainError, ParameterError
from distcomp.inequality_checker import VerdictKind
from distcomp.model_spaces import ComparisonParams, eval_g


def test_synth_cases():
    f = synth(ComparisonParams(0, 0, 1), -1.0, 1.0, 3)
    np.testing.assert_allclose(f.ts, [-1.0, 0.0, 1.0])
    np.testing.assert_allclose(f.gs, [math.sqrt(2), 1.0, math.sqrt(2)])
    on_geodesic = synth(ComparisonParams(-1, 0, 1), 1.0, 2.0, 101)
    np.testing.assert_allclose(on_geodesic.gs, on_geodesic.ts, atol=1e-12)
    pole = synth(ComparisonParams(1, 0, 0), 0.0, 1.0, 11)
    np.testing.assert_allclose(pole.gs, math.pi / 2)
    with pytest.raises(ParameterError):
        synth(ComparisonParams(0, 0, 1), 1.0, 0.0, 11)
    with pytest.raises(ParameterError):
        synth(ComparisonParams(0, 0, 1), 0.0, 1.0, 1)
    with pytest.raises(DomainError):
        synth(ComparisonParams(1, 0, 0), -1.0, 1.0, 11)


def test_bump_is_a_unit_hat():
    assert bump(np.array(0.0)) == 1.0
    np.testing.assert_allclose(bump(np.array([-1.0, 1.0, 2.0])), 0.0)
    # both spline pieces meet at r = 1/2
    assert bump(np.array(0.5)) == pytest.approx(0.25)
    assert bump(np.array(0.5 + 1e-9)) == pytest.approx(0.25, abs=1e-8)


def test_perturb(euclidean_sample):
    assert np.array_equal(perturb(euclidean_sample, 0.0, 0.5, 0.2).gs, euclidean_sample.gs)
    bumped = perturb(euclidean_sample, 1e-3, 0.5, 0.2)
    change = bumped.gs - euclidean_sample.gs
    assert change.max() == pytest.approx(1e-3, abs=1e-15)
    assert euclidean_sample.ts[np.argmax(change)] == pytest.approx(0.5)
    assert np.array_equal(bumped.ts, euclidean_sample.ts)
    with pytest.raises(ParameterError):
        perturb(euclidean_sample, 1e-3, 0.5, 0.0)
    with pytest.raises(DomainError):
        perturb(euclidean_sample, -2.0, 0.5, 0.2)


def test_compare_exact_chord_is_equal(euclidean_sample):
    comparison = compare_on_chord(euclidean_sample, 0, 0.0, 1.0)
    assert comparison.relation is ChordRelation.EQUAL
    assert abs(comparison.max_signed_gap) <= 1e-12


def test_compare_dented_chord_is_below(euclidean_sample):
    dented = perturb(euclidean_sample, -1e-3, 0.5, 0.2)
    comparison = compare_on_chord(dented, 0, 0.0, 1.0)
    assert comparison.relation is ChordRelation.BELOW
    assert comparison.min_signed_gap == pytest.approx(-1e-3, abs=1e-9)


def test_compare_bumped_chord_is_above(euclidean_sample):
    bumped = perturb(euclidean_sample, 1e-3, 0.5, 0.2)
    comparison = compare_on_chord(bumped, 0, 0.0, 1.0)
    assert comparison.relation is ChordRelation.ABOVE
    assert comparison.max_signed_gap == pytest.approx(1e-3, abs=1e-9)


def test_compare_on_chord_needs_grid_nodes(euclidean_sample):
    with pytest.raises(ParameterError):
        compare_on_chord(euclidean_sample, 0, 0.0, 0.5005)
    with pytest.raises(ParameterError):
        compare_on_indices(euclidean_sample, 0, 10, 10)
    with pytest.raises(ParameterError):
        compare_on_indices(euclidean_sample, 0, 0, 1001)


@pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
@pytest.mark.parametrize("amplitude", [0.0, 1e-3])
def test_interpolated_chord_matches_the_fitted_chord(euclidean_sample, k, amplitude):
    f = perturb(euclidean_sample, amplitude, 0.5, 0.2)
    for i1, i2 in [(0, 1000), (100, 800), (450, 460)]:
        fitted = eval_g(chord_params(f, k, i1, i2), f.ts[i1 : i2 + 1])
        np.testing.assert_allclose(interpolated_chord(f, k, i1, i2), fitted, atol=1e-9)


def test_chord_functions_nest_in_k(euclidean_sample):
    nodes = euclidean_sample.ts[200:901]
    chords = [eval_g(chord_params(euclidean_sample, k, 200, 900), nodes) for k in (-2, -1, 0, 1, 2)]
    for lower, upper in zip(chords, chords[1:]):
        assert np.all(lower <= upper + 1e-12)


def test_draw_chords_is_deterministic():
    chords = draw_chords(1001, 200, seed=3)
    assert chords == draw_chords(1001, 200, seed=3)
    assert chords != draw_chords(1001, 200, seed=4)
    assert len(chords) == 200
    assert all(0 <= i1 < i2 < 1001 for i1, i2 in chords)
    assert chords == sorted(chords)
    with pytest.raises(ParameterError):
        draw_chords(1, 5, seed=0)
    with pytest.raises(ParameterError):
        draw_chords(10, 0, seed=0)


@pytest.mark.parametrize(
    "params",
    [ComparisonParams(-1, 0.3, 0.5), ComparisonParams(0, 0.36, 0.48), ComparisonParams(1, 0.3, 0.2)],
)
def test_audit_of_exact_samples(params):
    f = synth(params, 0.0, 1.0, 1001)
    report = equivalence_audit(f, params.k, pair_count=200, seed=0)
    assert report.verdict.kind is VerdictKind.EQUALITY
    assert report.chords_tested == 200
    assert report.agreements == 200
    assert report.within_band == 200
    assert report.mismatches == []


def test_audit_is_deterministic(euclidean_sample):
    bumped = perturb(euclidean_sample, 1e-3, 0.5, 0.2)
    first = equivalence_audit(bumped, 0, pair_count=100, seed=11)
    assert first == equivalence_audit(bumped, 0, pair_count=100, seed=11)


def test_flat_sample_audited_against_other_curvatures(euclidean_sample):
    upper = equivalence_audit(euclidean_sample, 1, pair_count=200, seed=1)
    assert upper.verdict.kind is VerdictKind.UPPER_SATISFIED
    assert upper.mismatches == []
    lower = equivalence_audit(euclidean_sample, -1, pair_count=200, seed=1)
    assert lower.verdict.kind is VerdictKind.LOWER_SATISFIED
    assert lower.mismatches == []


@pytest.mark.parametrize("amplitude", [1e-3, -1e-3])
def test_audit_of_perturbed_samples(euclidean_sample, amplitude):
    f = perturb(euclidean_sample, amplitude, 0.5, 0.2)
    report = equivalence_audit(f, 0, pair_count=200, seed=0)
    # the hat bends both ways, so no side holds and no chord can contradict that
    assert report.verdict.kind is VerdictKind.NEITHER
    assert report.mismatches == []
    assert report.agreements == report.chords_tested
    relations = {compare_on_indices(f, 0, i1, i2).relation for i1, i2 in draw_chords(len(f), 200, seed=0)}
    expected = ChordRelation.ABOVE if amplitude > 0 else ChordRelation.BELOW
    assert expected in relations


@pytest.mark.parametrize("c, k_min, k_max", [(math.pi / 2, 0.5, 2.0), (1.0, 1.0, 5.0), (2.0, 0.1, 2.0)])
def test_threshold_of_constant_functions(constant_sample, c, k_min, k_max):
    """g = c satisfies the upper inequality exactly when sqrt(k) c >= pi/2."""
    f = constant_sample(c, b=1.0 if c == math.pi / 2 else 0.5)
    result = estimate_threshold(f, ThresholdSide.UPPER, k_min, k_max, 1e-4, tol=1e-9)
    expected = (math.pi / (2 * c)) ** 2
    assert result.k_hi - result.k_lo <= 1e-4
    assert result.k_lo - 1e-8 <= expected <= result.k_hi + 1e-8
    assert result.estimate == pytest.approx(expected, abs=1e-4)
    assert result.side is ThresholdSide.UPPER


@pytest.mark.parametrize(
    "params, k_min, k_max",
    [
        (ComparisonParams(-1, 0.3, 0.5), -3.0, 1.0),
        (ComparisonParams(0, 0.36, 0.48), -5.0, 2.0),
        (ComparisonParams(1, 0.3, 0.2), 0.0, 2.0),
    ],
)
@pytest.mark.parametrize("side", [ThresholdSide.UPPER, ThresholdSide.LOWER])
def test_threshold_recovers_the_synthesis_curvature(params, k_min, k_max, side):
    f = synth(params, 0.0, 1.0, 2001)
    result = estimate_threshold(f, side, k_min, k_max, 1e-3)
    assert abs(result.estimate - params.k.k) <= 0.05


def test_threshold_needs_a_bracket(constant_sample):
    f = constant_sample(math.pi / 2)
    with pytest.raises(BracketError):
        estimate_threshold(f, ThresholdSide.UPPER, 1.5, 2.0, 1e-4, tol=1e-9)
    with pytest.raises(ParameterError):
        estimate_threshold(f, ThresholdSide.UPPER, 2.0, 1.5, 1e-4)
    with pytest.raises(ParameterError):
        estimate_threshold(f, ThresholdSide.UPPER, 0.5, 2.0, 0.0)
