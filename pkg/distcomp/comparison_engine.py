"""Chordal comparison, equivalence audits and curvature thresholds.

A chord (t1, t2) of a sampled g is compared against g_k^{t1,t2}, the
comparison function fitted to g at both ends. The differential inequality
g'' >= RHS_k holds exactly when g stays below every such chord function;
``equivalence_audit`` tests that correspondence on seeded random chords.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .distance_like import SampledFunction, is_distance_like
from .errors import BracketError, DomainError, ParameterError
from .fitting import ChordSpec, fit
from .inequality_checker import (
    DEFAULT_GRID_RTOL,
    Verdict,
    VerdictKind,
    classify,
    default_tolerance,
    residual_series,
)
from .model_spaces import ComparisonParams, CurvatureLike, CurvatureSign, as_curvature, eval_g

logger = logging.getLogger(__name__)

DEFAULT_GAP_TOL = 1e-8
MAX_BISECTIONS = 200


class ChordRelation(Enum):
    BELOW = "below"
    ABOVE = "above"
    EQUAL = "equal"
    MIXED = "mixed"


class ThresholdSide(Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class ChordComparison:
    """Relation of g to g_k^{t1,t2} over [t1, t2]; gaps are g - g_k."""

    t1: float
    t2: float
    relation: ChordRelation
    max_signed_gap: float
    min_signed_gap: float
    tol: float


@dataclass(frozen=True)
class ChordMismatch:
    t1: float
    t2: float
    gap: float


@dataclass(frozen=True)
class AuditReport:
    """Outcome of checking the residual verdict against sampled chords.

    ``within_band`` counts chords whose gaps never left the tolerance band;
    they agree with any verdict and are also included in ``agreements``.
    """

    verdict: Verdict
    chords_tested: int
    agreements: int
    mismatches: List[ChordMismatch] = field(default_factory=list)
    tol: float = DEFAULT_GAP_TOL
    within_band: int = 0


@dataclass(frozen=True)
class ThresholdResult:
    k_lo: float
    k_hi: float
    iterations: int
    side: ThresholdSide

    @property
    def estimate(self) -> float:
        return 0.5 * (self.k_lo + self.k_hi)


def _relation(gaps: np.ndarray, tol: float) -> ChordRelation:
    below = gaps.max() <= tol
    above = gaps.min() >= -tol
    if below and above:
        return ChordRelation.EQUAL
    if below:
        return ChordRelation.BELOW
    if above:
        return ChordRelation.ABOVE
    return ChordRelation.MIXED


def _check_chord_indices(f: SampledFunction, i1: int, i2: int) -> None:
    if not 0 <= i1 < i2 < len(f):
        raise ParameterError(f"chord needs node indices 0 <= i1 < i2 < {len(f)}, got ({i1}, {i2})")
    if np.any(f.gs[i1 : i2 + 1] <= 0):
        raise DomainError(f"g must be positive on [{f.ts[i1]}, {f.ts[i2]}]")


def chord_params(f: SampledFunction, k: CurvatureLike, i1: int, i2: int) -> ComparisonParams:
    """Parameters of g_k^{t1,t2} fitted to the sample at two nodes."""
    spec = ChordSpec(f.ts[i1], f.ts[i2], f.gs[i1], f.gs[i2], as_curvature(k))
    return fit(spec).params


def compare_on_indices(
    f: SampledFunction, k: CurvatureLike, i1: int, i2: int, tol: float = DEFAULT_GAP_TOL
) -> ChordComparison:
    """``compare_on_chord`` addressed by node indices."""
    _check_chord_indices(f, i1, i2)
    params = chord_params(f, k, i1, i2)
    nodes = slice(i1, i2 + 1)
    gaps = f.gs[nodes] - np.asarray(eval_g(params, f.ts[nodes]))
    relation = _relation(gaps, tol)
    return ChordComparison(
        t1=float(f.ts[i1]),
        t2=float(f.ts[i2]),
        relation=relation,
        max_signed_gap=float(gaps.max()),
        min_signed_gap=float(gaps.min()),
        tol=tol,
    )


def compare_on_chord(
    f: SampledFunction, k: CurvatureLike, t1: float, t2: float, tol: float = DEFAULT_GAP_TOL
) -> ChordComparison:
    """Compare g with g_k^{t1,t2} at every node of [t1, t2]; t1 and t2 must be nodes."""
    return compare_on_indices(f, k, f.index_of(t1), f.index_of(t2), tol)


def interpolated_chord(f: SampledFunction, k: CurvatureLike, i1: int, i2: int) -> np.ndarray:
    """g_k^{t1,t2} on the nodes of [t1, t2] without solving for (u, v).

    Along an exact comparison function a transformed value is affine in a
    transformed parameter:

        k = 0:  g^2 - t^2                 against t
        k < 0:  e^{s t} cosh(s g)         against e^{2 s t} / 2
        k > 0:  cos(s g) / cos(s t)       against tan(s t)

    so interpolating the endpoint values linearly and mapping back gives
    the chord function.
    """
    _check_chord_indices(f, i1, i2)
    k = as_curvature(k)
    s = k.root
    t = f.ts[i1 : i2 + 1]
    ends = np.array([i1, i2])
    tt, gg = f.ts[ends], f.gs[ends]
    if k.sign is CurvatureSign.ZERO:
        squared = np.interp(t, tt, gg ** 2 - tt ** 2) + t ** 2
        return np.sqrt(np.maximum(squared, 0.0))
    if k.sign is CurvatureSign.NEGATIVE:
        x, xs = 0.5 * np.exp(2.0 * s * t), 0.5 * np.exp(2.0 * s * tt)
        rho = np.interp(x, xs, np.exp(s * tt) * np.cosh(s * gg))
        return np.arccosh(np.maximum(rho * np.exp(-s * t), 1.0)) / s
    if s * tt[1] >= math.pi / 2 or tt[0] < 0:
        raise DomainError("interpolated spherical chords need 0 <= t1 and sqrt(k)*t2 < pi/2")
    x, xs = np.tan(s * t), np.tan(s * tt)
    psi = np.interp(x, xs, np.cos(s * gg) / np.cos(s * tt))
    return np.arccos(np.clip(psi * np.cos(s * t), -1.0, 1.0)) / s


def _chord_agrees(kind: VerdictKind, relation: ChordRelation) -> bool:
    if relation is ChordRelation.EQUAL:
        return True
    if kind is VerdictKind.UPPER_SATISFIED:
        return relation is ChordRelation.BELOW
    if kind is VerdictKind.LOWER_SATISFIED:
        return relation is ChordRelation.ABOVE
    if kind is VerdictKind.EQUALITY:
        return False
    # A sampled set of chords cannot refute "neither".
    return True


def _offending_gap(kind: VerdictKind, comparison: ChordComparison) -> float:
    if kind is VerdictKind.UPPER_SATISFIED:
        return comparison.max_signed_gap
    if kind is VerdictKind.LOWER_SATISFIED:
        return comparison.min_signed_gap
    if abs(comparison.max_signed_gap) >= abs(comparison.min_signed_gap):
        return comparison.max_signed_gap
    return comparison.min_signed_gap


def draw_chords(n: int, pair_count: int, seed: int) -> List[Tuple[int, int]]:
    """Seeded node-index chords (i1 < i2), sorted.

    Draws come from numpy's PCG64 bit generator, which produces the same
    stream on every platform for a given seed.
    """
    if n < 2:
        raise ParameterError("chords need at least 2 nodes")
    if pair_count < 1:
        raise ParameterError(f"pair_count must be at least 1, got {pair_count}")
    rng = np.random.Generator(np.random.PCG64(seed))
    first = rng.integers(0, n, size=pair_count)
    second = rng.integers(0, n - 1, size=pair_count)
    second = second + (second >= first)
    lo, hi = np.minimum(first, second), np.maximum(first, second)
    return sorted(zip(lo.tolist(), hi.tolist()))


def equivalence_audit(
    f: SampledFunction,
    k: CurvatureLike,
    pair_count: int,
    seed: int,
    tol: float = DEFAULT_GAP_TOL,
    residual_tol: Optional[float] = None,
    grid_rtol: float = DEFAULT_GRID_RTOL,
) -> AuditReport:
    """Check the residual verdict against seeded random chords.

    UpperSatisfied must come with chords Below (or Equal), LowerSatisfied
    with chords Above (or Equal), Equality with chords Equal.
    """
    k = as_curvature(k)
    if residual_tol is None:
        residual_tol = default_tolerance(f)
    verdict = classify(residual_series(f, k, grid_rtol), residual_tol)
    if not is_distance_like(f).distance_like:
        logger.warning("Auditing a sample that is not distance-like; the equivalence may not apply")

    chords = draw_chords(len(f), pair_count, seed)
    agreements = 0
    within_band = 0
    mismatches: List[ChordMismatch] = []
    for i1, i2 in chords:
        comparison = compare_on_indices(f, k, i1, i2, tol)
        if comparison.relation is ChordRelation.EQUAL:
            within_band += 1
        if _chord_agrees(verdict.kind, comparison.relation):
            agreements += 1
        else:
            mismatches.append(ChordMismatch(comparison.t1, comparison.t2, _offending_gap(verdict.kind, comparison)))
    logger.info(
        f"Audit at k={k.k}: verdict {verdict.kind.value}, {agreements}/{len(chords)} chords agree, "
        f"{within_band} within the band"
    )
    return AuditReport(
        verdict=verdict,
        chords_tested=len(chords),
        agreements=agreements,
        mismatches=mismatches,
        tol=tol,
        within_band=within_band,
    )


def estimate_threshold(
    f: SampledFunction,
    side: ThresholdSide,
    k_min: float,
    k_max: float,
    k_tol: float,
    tol: Optional[float] = None,
    grid_rtol: float = DEFAULT_GRID_RTOL,
) -> ThresholdResult:
    """Bisect for the critical curvature k*.

    The residual is nondecreasing in k, so the upper inequality holds on a
    half-line [k*, inf) and the lower one on (-inf, k*]. The returned
    bracket satisfies k_hi - k_lo <= k_tol.
    """
    side = ThresholdSide(side)
    if not k_min < k_max:
        raise ParameterError(f"threshold search needs k_min < k_max, got [{k_min}, {k_max}]")
    if not k_tol > 0:
        raise ParameterError(f"k_tol must be positive, got {k_tol}")
    if tol is None:
        tol = default_tolerance(f)

    def holds(k: float) -> bool:
        kind = classify(residual_series(f, k, grid_rtol), tol).kind
        return kind.satisfies_upper if side is ThresholdSide.UPPER else kind.satisfies_lower

    lo, hi = float(k_min), float(k_max)
    at_lo, at_hi = holds(lo), holds(hi)
    if at_lo == at_hi:
        raise BracketError(
            f"the {side.value} inequality {'holds' if at_lo else 'fails'} at both k={lo} and k={hi}"
        )
    iterations = 0
    while hi - lo > k_tol and iterations < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        if holds(mid) == at_hi:
            hi = mid
        else:
            lo = mid
        iterations += 1
    logger.info(f"Threshold ({side.value}) bracketed in [{lo}, {hi}] after {iterations} bisections")
    return ThresholdResult(lo, hi, iterations, side)


def synth(params: ComparisonParams, a: float, b: float, n: int) -> SampledFunction:
    """Sample g_k on n uniform nodes over [a, b]."""
    if n < 2:
        raise ParameterError(f"synth needs n >= 2, got {n}")
    if not a < b:
        raise ParameterError(f"synth needs a < b, got [{a}, {b}]")
    if params.k.sign is CurvatureSign.POSITIVE and a < 0:
        raise DomainError(f"spherical samples need a >= 0, got a={a}")
    ts = np.linspace(a, b, n)
    return SampledFunction(ts, np.asarray(eval_g(params, ts)))


def bump(x: np.ndarray) -> np.ndarray:
    """C^2 cubic-spline hat with unit peak at 0 and support (-1, 1)."""
    r = np.abs(np.asarray(x, dtype=float))
    inner = 1.0 - 6.0 * r ** 2 + 6.0 * r ** 3
    outer = 2.0 * (1.0 - r) ** 3
    return np.where(r <= 0.5, inner, np.where(r < 1.0, outer, 0.0))


def perturb(f: SampledFunction, amplitude: float, center: float, width: float) -> SampledFunction:
    """Add amplitude * bump((t - center) / width) on the same grid."""
    if not width > 0:
        raise ParameterError(f"bump width must be positive, got {width}")
    gs = f.gs + amplitude * bump((f.ts - center) / width)
    if np.any(gs <= 0):
        raise DomainError("perturbation drives the sample to non-positive values")
    return SampledFunction(f.ts, gs)
