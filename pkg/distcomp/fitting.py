"""Fit comparison functions to boundary values at two parameters.

Given g(t1) = alpha and g(t2) = beta, solve for the (u, v) that make g_k pass
through both points: the chord function g_k^{t1,t2}. Each curvature sign has
a closed form; the k != 0 cases reduce to a 2x2 linear system solved by
Cramer's rule.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable

from .errors import DistCompError, DomainError, InfeasibleChordError, ParameterError
from .model_spaces import (
    ComparisonParams,
    Curvature,
    CurvatureLike,
    CurvatureSign,
    as_curvature,
    eval_g,
)

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-12
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class ChordSpec:
    """Boundary data (t1, alpha), (t2, beta) for a comparison function of curvature k."""

    t1: float
    t2: float
    alpha: float
    beta: float
    k: Curvature

    def __post_init__(self) -> None:
        k = as_curvature(self.k)
        object.__setattr__(self, "k", k)
        for name in ("t1", "t2", "alpha", "beta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not self.t1 < self.t2:
            raise ParameterError(f"chord needs t1 < t2, got t1={self.t1}, t2={self.t2}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ParameterError(f"boundary values must be positive, got alpha={self.alpha}, beta={self.beta}")
        width = self.t2 - self.t1
        slack = FEASIBILITY_TOL * (1.0 + self.alpha + self.beta)
        if width > self.alpha + self.beta + slack or abs(self.alpha - self.beta) > width + slack:
            raise InfeasibleChordError(
                f"no triangle with sides {width}, {self.alpha}, {self.beta}: "
                f"the chord violates |alpha - beta| <= t2 - t1 <= alpha + beta"
            )
        if k.sign is CurvatureSign.POSITIVE:
            s = k.root
            if self.t1 < 0:
                raise DomainError(f"spherical chords need t1 >= 0, got t1={self.t1}")
            if s * width >= math.pi:
                raise DomainError(f"spherical chord too long: sqrt(k)*(t2 - t1) = {s * width} >= pi")
            if s * max(self.alpha, self.beta) >= math.pi:
                raise DomainError(f"spherical chord too far: sqrt(k)*max(alpha, beta) = {s * max(self.alpha, self.beta)} >= pi")

    @property
    def width(self) -> float:
        return self.t2 - self.t1


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters plus the boundary residuals g_k(t_i) - target_i."""

    params: ComparisonParams
    residual_t1: float
    residual_t2: float


def _finish(spec: ChordSpec, params: ComparisonParams) -> FitResult:
    result = FitResult(
        params=params,
        residual_t1=float(eval_g(params, spec.t1)) - spec.alpha,
        residual_t2=float(eval_g(params, spec.t2)) - spec.beta,
    )
    bound = RESIDUAL_TOL * (1.0 + spec.alpha + spec.beta)
    if max(abs(result.residual_t1), abs(result.residual_t2)) > bound:
        logger.warning(
            f"Fit for k={spec.k.k} on [{spec.t1}, {spec.t2}] misses its boundary values "
            f"by ({result.residual_t1:.3e}, {result.residual_t2:.3e}), above {bound:.1e}"
        )
    logger.debug(f"Fitted k={spec.k.k}: u={params.u!r}, v={params.v!r}")
    return result


def fit_euclidean(spec: ChordSpec) -> FitResult:
    """Closed-form fit of sqrt((u - t)^2 + v^2)."""
    if spec.k.sign is not CurvatureSign.ZERO:
        raise ParameterError(f"fit_euclidean needs k = 0, got k={spec.k.k}")
    u = (spec.alpha ** 2 - spec.beta ** 2) / (2.0 * spec.width) + (spec.t1 + spec.t2) / 2.0
    v_squared = spec.alpha ** 2 - (u - spec.t1) ** 2
    if v_squared <= FEASIBILITY_TOL * max(1.0, spec.alpha ** 2):
        raise InfeasibleChordError(
            f"degenerate Euclidean chord: comparison point on the geodesic (v^2 = {v_squared:.3e})"
        )
    return _finish(spec, ComparisonParams(spec.k, u, math.sqrt(v_squared)))


def fit_hyperbolic(spec: ChordSpec) -> FitResult:
    """Fit g_k for k < 0.

    With s = sqrt(-k), A = (u^2 + v^2) / (2v) and B = 1 / (2v), the boundary
    conditions read A e^{-s t_i} + B e^{s t_i} = cosh(s alpha_i).
    """
    if spec.k.sign is not CurvatureSign.NEGATIVE:
        raise ParameterError(f"fit_hyperbolic needs k < 0, got k={spec.k.k}")
    s = spec.k.root
    try:
        c1, c2 = math.cosh(s * spec.alpha), math.cosh(s * spec.beta)
        e1, e2 = math.exp(s * spec.t1), math.exp(s * spec.t2)
        determinant = 2.0 * math.sinh(s * spec.width)
    except OverflowError:
        raise DomainError(
            f"hyperbolic chord at k={spec.k.k} exceeds the floating-point range (sqrt(-k) = {s:g})"
        )
    a = (c1 * e2 - c2 * e1) / determinant
    b = (c2 / e1 - c1 / e2) / determinant
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"hyperbolic chord at k={spec.k.k} exceeds the floating-point range")
    if not b > 0:
        raise InfeasibleChordError(f"hyperbolic chord not realizable: B = {b:.3e} <= 0")
    if 4.0 * a * b < 1.0 - FEASIBILITY_TOL:
        raise InfeasibleChordError(f"hyperbolic chord not realizable: 4AB = {4.0 * a * b:.12g} < 1")
    v = 1.0 / (2.0 * b)
    u_squared = max(a / b - v * v, 0.0)
    return _finish(spec, ComparisonParams(spec.k, math.sqrt(u_squared), v))


def fit_spherical(spec: ChordSpec) -> FitResult:
    """Fit g_k for k > 0.

    With s = sqrt(k): u cos(s t_i) + v sin(s t_i) = cos(s alpha_i) / s. The
    determinant is sin(s (t2 - t1)) > 0 under the chord's size guard.
    """
    if spec.k.sign is not CurvatureSign.POSITIVE:
        raise ParameterError(f"fit_spherical needs k > 0, got k={spec.k.k}")
    s = spec.k.root
    c1, c2 = math.cos(s * spec.alpha) / s, math.cos(s * spec.beta) / s
    determinant = math.sin(s * spec.width)
    u = (c1 * math.sin(s * spec.t2) - c2 * math.sin(s * spec.t1)) / determinant
    v = (c2 * math.cos(s * spec.t1) - c1 * math.cos(s * spec.t2)) / determinant
    if u * u + v * v >= 1.0 / spec.k.k - FEASIBILITY_TOL:
        raise InfeasibleChordError(
            f"spherical chord not realizable: u^2 + v^2 = {u * u + v * v:.12g} reaches 1/k = {1.0 / spec.k.k:.12g}"
        )
    return _finish(spec, ComparisonParams(spec.k, u, v))


def fit(spec: ChordSpec) -> FitResult:
    """Fit g_k^{t1,t2}, dispatching on the sign of k."""
    if spec.k.sign is CurvatureSign.ZERO:
        return fit_euclidean(spec)
    if spec.k.sign is CurvatureSign.NEGATIVE:
        return fit_hyperbolic(spec)
    return fit_spherical(spec)


def fit_curvature_scale(
    t1: float, t2: float, g1: float, g2: float, ks: Iterable[CurvatureLike]
) -> Dict[float, FitResult]:
    """Fit one comparison function per curvature, skipping those that fail.

    Returns a mapping from k to its fit, in the order of ``ks``.
    """
    scale: Dict[float, FitResult] = {}
    for k in ks:
        curvature = as_curvature(k)
        try:
            scale[curvature.k] = fit(ChordSpec(t1, t2, g1, g2, curvature))
        except DistCompError as e:
            logger.warning(f"Skipping k={curvature.k:g}: {e}")
    logger.info(f"Fitted {len(scale)} comparison functions on [{t1}, {t2}]")
    return scale
