"""Sampled 1-dimensional functions and the distance-like property.

A non-negative g on [a, b] is distance-like when it is nonexpanding and
|t1 - t2| <= g(t1) + g(t2) for all t1, t2. For nonexpanding g the second
condition reduces to the single endpoint check b - a <= g(a) + g(b); the
pairwise oracle verifies both conditions over every grid pair.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError, GridError, ParameterError

logger = logging.getLogger(__name__)

DEFAULT_SLOPE_TOL = 1e-9
ENDPOINT_TOL = 1e-12

# Rows of the pair matrix processed at once by the oracle.
ORACLE_BLOCK = 512

IndexPair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values gs of a function on a strictly increasing grid ts.

    Between nodes the function reads as piecewise linear.
    """

    ts: np.ndarray
    gs: np.ndarray

    def __post_init__(self) -> None:
        ts = np.array(self.ts, dtype=float)
        gs = np.array(self.gs, dtype=float)
        if ts.ndim != 1 or gs.ndim != 1:
            raise ParameterError("ts and gs must be one-dimensional")
        if ts.size != gs.size:
            raise ParameterError(f"ts and gs differ in length ({ts.size} vs {gs.size})")
        if ts.size < 2:
            raise ParameterError("a sampled function needs at least 2 nodes")
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(gs))):
            raise ParameterError("samples must be finite")
        if np.any(np.diff(ts) <= 0):
            raise GridError("ts must be strictly increasing")
        if np.any(gs < 0):
            raise DomainError(f"sampled values must be non-negative (min {gs.min()})")
        ts.setflags(write=False)
        gs.setflags(write=False)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "gs", gs)

    def __len__(self) -> int:
        return int(self.ts.size)

    @property
    def a(self) -> float:
        return float(self.ts[0])

    @property
    def b(self) -> float:
        return float(self.ts[-1])

    @property
    def min_value(self) -> float:
        return float(self.gs.min())

    @property
    def max_value(self) -> float:
        return float(self.gs.max())

    @property
    def max_spacing(self) -> float:
        return float(np.diff(self.ts).max())

    @property
    def step(self) -> float:
        """Mean grid spacing; the stencil step on uniform grids."""
        return (self.b - self.a) / (len(self) - 1)

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        spacing = np.diff(self.ts)
        return bool(np.all(np.abs(spacing - self.step) <= rtol * self.step))

    def shifted(self, constant: float) -> "SampledFunction":
        return SampledFunction(self.ts, self.gs + constant)

    def resampled(self, n: int) -> "SampledFunction":
        """Piecewise-linear resampling onto n uniform nodes over [a, b]."""
        if n < 2:
            raise ParameterError(f"resampling needs n >= 2, got {n}")
        ts = np.linspace(self.a, self.b, n)
        logger.debug(f"Resampling {len(self)} nodes onto a uniform grid of {n}")
        return SampledFunction(ts, np.interp(ts, self.ts, self.gs))

    def index_of(self, t: float, rtol: float = 1e-12) -> int:
        """Index of the grid node at t; chords never leave the grid."""
        i = int(np.argmin(np.abs(self.ts - t)))
        scale = max(1.0, abs(self.b), abs(self.a))
        if abs(self.ts[i] - t) > rtol * scale:
            raise ParameterError(f"t={t} is not a grid node")
        return i


@dataclass(frozen=True)
class DistanceLikeReport:
    """Outcome of the distance-like check.

    ``pairwise_ok`` stays None unless the pairwise oracle ran. ``worst_slack``
    is the smallest margin found across the nonexpanding steps and the
    endpoint condition (negative on failure).
    """

    nonexpanding: bool
    endpoint_ok: bool
    pairwise_ok: Optional[bool]
    first_violation: Optional[IndexPair]
    worst_slack: float

    @property
    def distance_like(self) -> bool:
        return self.nonexpanding and self.endpoint_ok


def _step_slack(f: SampledFunction, tol: float) -> np.ndarray:
    return np.diff(f.ts) * (1.0 + tol) - np.abs(np.diff(f.gs))


def is_nonexpanding(f: SampledFunction, tol: float = DEFAULT_SLOPE_TOL) -> Tuple[bool, Optional[IndexPair]]:
    """Check |g[i+1] - g[i]| <= (t[i+1] - t[i]) (1 + tol) on consecutive nodes.

    Consecutive steps suffice: any pair's increment is the sum of the steps
    between them.
    """
    if tol < 0:
        raise ParameterError(f"tol must be non-negative, got {tol}")
    bad = np.flatnonzero(_step_slack(f, tol) < 0)
    if bad.size:
        i = int(bad[0])
        return False, (i, i + 1)
    return True, None


def endpoint_slack(f: SampledFunction) -> float:
    """g(a) + g(b) - (b - a)."""
    return float(f.gs[0] + f.gs[-1] - (f.b - f.a))


def endpoint_condition(f: SampledFunction) -> bool:
    return endpoint_slack(f) >= -ENDPOINT_TOL


def is_distance_like(
    f: SampledFunction, tol: float = DEFAULT_SLOPE_TOL, run_oracle: bool = False
) -> DistanceLikeReport:
    """Distance-like verdict through the nonexpanding + endpoint shortcut."""
    nonexpanding, violation = is_nonexpanding(f, tol)
    endpoint_ok = endpoint_condition(f)
    if violation is None and not endpoint_ok:
        violation = (0, len(f) - 1)
    slack = min(float(_step_slack(f, tol).min()), endpoint_slack(f))
    pairwise_ok: Optional[bool] = None
    if run_oracle:
        pairwise_ok, oracle_violation = pairwise_oracle(f, tol)
        if violation is None:
            violation = oracle_violation
    report = DistanceLikeReport(nonexpanding, endpoint_ok, pairwise_ok, violation, slack)
    logger.debug(f"Distance-like check on {len(f)} nodes: {report}")
    return report


def pairwise_oracle(f: SampledFunction, tol: float = DEFAULT_SLOPE_TOL) -> Tuple[bool, Optional[IndexPair]]:
    """Brute-force both distance-like conditions over every pair i < j.

    The reported violation is the lexicographically smallest failing pair.
    """
    if tol < 0:
        raise ParameterError(f"tol must be non-negative, got {tol}")
    n = len(f)
    ts, gs = f.ts, f.gs
    for start in range(0, n - 1, ORACLE_BLOCK):
        rows = slice(start, min(start + ORACLE_BLOCK, n - 1))
        dt = ts[None, :] - ts[rows, None]
        dg = np.abs(gs[None, :] - gs[rows, None])
        upper = np.arange(n)[None, :] > np.arange(n)[rows, None]
        failing = upper & (
            (dg > dt * (1.0 + tol)) | (dt > gs[rows, None] + gs[None, :] + ENDPOINT_TOL)
        )
        hits = np.argwhere(failing)
        if hits.size:
            i, j = hits[0]
            return False, (int(i) + start, int(j))
    return True, None


def thin_for_oracle(f: SampledFunction, max_pairs: int) -> SampledFunction:
    """Evenly spaced node subset with at most max_pairs pairs, endpoints kept."""
    n = len(f)
    if n * (n - 1) // 2 <= max_pairs:
        return f
    m = max(2, int((1.0 + math.sqrt(1.0 + 8.0 * max_pairs)) / 2.0))
    while m * (m - 1) // 2 > max_pairs:
        m -= 1
    keep = np.unique(np.round(np.linspace(0, n - 1, m)).astype(int))
    logger.info(f"Thinning {n} nodes to {keep.size} for the pairwise oracle")
    return SampledFunction(f.ts[keep], f.gs[keep])


def shift_to_distance_like(f: SampledFunction, epsilon: float = 1e-9) -> SampledFunction:
    """Add the smallest constant (plus epsilon) that fixes the endpoint condition.

    Nonexpandingness is shift-invariant, so this repairs any nonexpanding
    sample whose only failure is b - a > g(a) + g(b).
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    deficit = -endpoint_slack(f)
    if deficit <= 0:
        return f
    return f.shifted(deficit / 2.0 + epsilon)

