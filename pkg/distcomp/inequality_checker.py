"""Differential-inequality residuals and witness functions on sampled data.

For a sample of g on a uniform grid the residual is g'' - (1 - g'^2) ct_k(g)
with second-order central differences at interior nodes. A residual that
stays above -tol means g'' >= RHS ("curvature <= k" side); one that stays
below tol means g'' <= RHS ("curvature >= k" side).

Witness functions are the monotone auxiliaries whose nondecrease is
equivalent to the first inequality:

    k < 0:  h(t) = e^{-s t} (cosh(s g) + g' sinh(s g)),      s = sqrt(-k)
    k > 0:  H(t) = g' cos(s t) sin(s g) - sin(s t) cos(s g), s = sqrt(k)
    k = 0:  w(t) = g g' - t

Each is constant on an exact comparison function (1/v, -v sqrt(k) and -u).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .distance_like import SampledFunction
from .errors import DomainError, GridError, ParameterError
from .model_spaces import CurvatureLike, CurvatureSign, as_curvature, rhs

logger = logging.getLogger(__name__)

DEFAULT_GRID_RTOL = 1e-9
MIN_CLASSIFY_TOL = 1e-6


class VerdictKind(Enum):
    UPPER_SATISFIED = "upper_satisfied"
    LOWER_SATISFIED = "lower_satisfied"
    EQUALITY = "equality"
    NEITHER = "neither"

    @property
    def satisfies_upper(self) -> bool:
        return self in (VerdictKind.UPPER_SATISFIED, VerdictKind.EQUALITY)

    @property
    def satisfies_lower(self) -> bool:
        return self in (VerdictKind.LOWER_SATISFIED, VerdictKind.EQUALITY)


class WitnessKind(Enum):
    H_NEG = "h_neg"
    H_POS = "H_pos"
    W_ZERO = "w_zero"


@dataclass(frozen=True)
class Stencil:
    order: int
    step: float


@dataclass(frozen=True, eq=False)
class ResidualSeries:
    """Residuals at the interior nodes of the grid."""

    ts: np.ndarray
    rs: np.ndarray
    stencil: Stencil

    @property
    def min_residual(self) -> float:
        return float(self.rs.min())

    @property
    def max_residual(self) -> float:
        return float(self.rs.max())


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    min_residual: float
    max_residual: float
    tol: float


@dataclass(frozen=True, eq=False)
class WitnessSeries:
    ts: np.ndarray
    ws: np.ndarray
    kind: WitnessKind


@dataclass(frozen=True)
class CheckReport:
    """Everything the ``check`` command reports for one curvature."""

    k: float
    verdict: Verdict
    witness_kind: WitnessKind
    witness_monotone: bool
    witness_tol: float
    nodes: int
    step: float


def _require_checkable(f: SampledFunction, k: CurvatureLike, grid_rtol: float) -> None:
    """Guards shared by residuals and witnesses."""
    k = as_curvature(k)
    if len(f) < 3:
        raise GridError(f"finite differences need at least 3 nodes, got {len(f)}")
    if not f.is_uniform(grid_rtol):
        raise GridError(
            f"grid spacing is not uniform within {grid_rtol:g} relative; resample it first"
        )
    if f.min_value <= 0:
        raise DomainError(f"differential inequalities need g > 0, got min {f.min_value}")
    if k.sign is CurvatureSign.POSITIVE:
        s = k.root
        if f.a < 0:
            raise DomainError(f"spherical checks need a >= 0, got a={f.a}")
        if s * f.max_value >= math.pi:
            raise DomainError(f"spherical guard: sqrt(k)*max(g) = {s * f.max_value:.6g} >= pi")
        if s * f.b >= math.pi / 2:
            raise DomainError(f"spherical guard: sqrt(k)*b = {s * f.b:.6g} >= pi/2")


def residual_series(
    f: SampledFunction, k: CurvatureLike, tol_domain: float = DEFAULT_GRID_RTOL
) -> ResidualSeries:
    """g'' - RHS_k(g, g') at interior nodes by second-order central stencils."""
    _require_checkable(f, k, tol_domain)
    h = f.step
    g = f.gs
    second = (g[2:] - 2.0 * g[1:-1] + g[:-2]) / (h * h)
    first = (g[2:] - g[:-2]) / (2.0 * h)
    rs = second - np.asarray(rhs(k, g[1:-1], first))
    if not np.all(np.isfinite(rs)):
        raise DomainError("residuals are not finite")
    return ResidualSeries(f.ts[1:-1], rs, Stencil(order=2, step=h))


def classify(series: ResidualSeries, tol: float) -> Verdict:
    """Sort a residual series into one of the four verdicts."""
    if not tol > 0:
        raise ParameterError(f"classification tolerance must be positive, got {tol}")
    lo, hi = series.min_residual, series.max_residual
    upper = lo >= -tol
    lower = hi <= tol
    if upper and lower:
        kind = VerdictKind.EQUALITY
    elif upper:
        kind = VerdictKind.UPPER_SATISFIED
    elif lower:
        kind = VerdictKind.LOWER_SATISFIED
    else:
        kind = VerdictKind.NEITHER
    return Verdict(kind, lo, hi, tol)


def default_tolerance(f: SampledFunction) -> float:
    """max(1e-6, 10 h^2 scale), scale = max(1, max |g''| estimate)."""
    h = f.step
    scale = 1.0
    if len(f) >= 3:
        scale = max(scale, float(np.abs(np.diff(f.gs, 2)).max()) / (h * h))
    return max(MIN_CLASSIFY_TOL, 10.0 * h * h * scale)


def _witness_weight(f: SampledFunction, k: CurvatureLike) -> np.ndarray:
    # the factor multiplying the residual in the witness derivative
    k = as_curvature(k)
    s = k.root
    if k.sign is CurvatureSign.NEGATIVE:
        return np.exp(-s * f.ts) * np.sinh(s * f.gs)
    if k.sign is CurvatureSign.POSITIVE:
        return np.cos(s * f.ts) * np.sin(s * f.gs)
    return f.gs


def witness_series(
    f: SampledFunction, k: CurvatureLike, tol_domain: float = DEFAULT_GRID_RTOL
) -> WitnessSeries:
    """Witness values at every node; g' by central differences, one-sided at the ends."""
    _require_checkable(f, k, tol_domain)
    k = as_curvature(k)
    s = k.root
    t, g = f.ts, f.gs
    gp = np.gradient(g, f.step, edge_order=2)
    with np.errstate(over="ignore", invalid="ignore"):
        if k.sign is CurvatureSign.NEGATIVE:
            ws = np.exp(-s * t) * (np.cosh(s * g) + gp * np.sinh(s * g))
            kind = WitnessKind.H_NEG
        elif k.sign is CurvatureSign.POSITIVE:
            ws = gp * np.cos(s * t) * np.sin(s * g) - np.sin(s * t) * np.cos(s * g)
            kind = WitnessKind.H_POS
        else:
            ws = g * gp - t
            kind = WitnessKind.W_ZERO
    if not np.all(np.isfinite(ws)):
        raise DomainError("witness values are not finite")
    return WitnessSeries(t, ws, kind)


def witness_monotone(series: WitnessSeries, tol: float = 0.0) -> bool:
    """True iff ws[i+1] >= ws[i] - tol for every i."""
    return bool(np.all(np.diff(series.ws) >= -tol))


def default_witness_tolerance(f: SampledFunction, k: CurvatureLike, tol: float) -> float:
    """Witness slack matching a residual band of width tol.

    A witness step is about h * weight * residual; the h^2 g''' term covers
    the mismatch between the one-sided end stencils and the central ones.
    """
    h = f.step
    third = float(np.abs(np.diff(f.gs, 3)).max()) / h ** 3 if len(f) >= 4 else 0.0
    weight = float(np.abs(_witness_weight(f, k)).max())
    return weight * max(h * tol, h * h * third)


def check(
    f: SampledFunction,
    k: CurvatureLike,
    tol: Optional[float] = None,
    witness_tol: Optional[float] = None,
    grid_rtol: float = DEFAULT_GRID_RTOL,
) -> CheckReport:
    """Residual verdict plus witness monotonicity for one curvature."""
    k = as_curvature(k)
    if tol is None:
        tol = default_tolerance(f)
    verdict = classify(residual_series(f, k, grid_rtol), tol)
    witness = witness_series(f, k, grid_rtol)
    if witness_tol is None:
        witness_tol = default_witness_tolerance(f, k, tol)
    monotone = witness_monotone(witness, witness_tol)
    if monotone != verdict.kind.satisfies_upper:
        logger.info(
            f"Witness monotonicity ({monotone}) and verdict {verdict.kind.value} disagree at k={k.k}; "
            f"residuals lie near the tolerance band"
        )
    return CheckReport(
        k=k.k,
        verdict=verdict,
        witness_kind=witness.kind,
        witness_monotone=monotone,
        witness_tol=witness_tol,
        nodes=len(f),
        step=f.step,
    )
