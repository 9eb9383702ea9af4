"""Comparison functions on the model planes of constant curvature.

The model space M_k is the Euclidean plane for k = 0, the upper half-plane
with its metric scaled to curvature k for k < 0, and the sphere of radius
1/sqrt(k) for k > 0. A comparison function g_k(t) is the distance from a fixed
comparison point to the point at arc length t on a fixed model geodesic.

All operations accept scalars or numpy arrays for ``t`` and broadcast.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, ParameterError, SingularityError

logger = logging.getLogger(__name__)

# Arguments of arccosh/arccos this close outside their domain are clamped.
CLAMP_TOL = 1e-12

# ct_k switches to its Taylor series when |k| * g**2 falls below this.
SERIES_THRESHOLD = 1e-8

RealOrArray = Union[float, np.ndarray]


class CurvatureSign(Enum):
    """Which model plane a curvature selects."""

    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"


@dataclass(frozen=True)
class Curvature:
    """A constant curvature k in units of 1/length**2."""

    k: float

    def __post_init__(self) -> None:
        value = float(self.k)
        if not math.isfinite(value):
            raise ParameterError(f"curvature must be finite, got {self.k!r}")
        object.__setattr__(self, "k", value)

    @property
    def sign(self) -> CurvatureSign:
        if self.k < 0:
            return CurvatureSign.NEGATIVE
        if self.k > 0:
            return CurvatureSign.POSITIVE
        return CurvatureSign.ZERO

    @property
    def root(self) -> float:
        """sqrt(|k|), the inverse length scale of the model plane."""
        return math.sqrt(abs(self.k))

    def __float__(self) -> float:
        return self.k


CurvatureLike = Union[float, int, Curvature]


def as_curvature(k: CurvatureLike) -> Curvature:
    """Accept a bare number wherever a Curvature is expected."""
    if isinstance(k, Curvature):
        return k
    return Curvature(k)


@dataclass(frozen=True)
class ComparisonParams:
    """Curvature plus the (u, v) coordinates identifying one g_k.

    For k < 0 the sign of u is unobservable, so u is stored as |u|.
    """

    k: Curvature
    u: float
    v: float

    def __post_init__(self) -> None:
        k = as_curvature(self.k)
        u, v = float(self.u), float(self.v)
        if not (math.isfinite(u) and math.isfinite(v)):
            raise ParameterError(f"u and v must be finite, got u={self.u!r}, v={self.v!r}")
        if k.sign is not CurvatureSign.POSITIVE and v <= 0:
            raise ParameterError(f"v must be positive for k <= 0, got v={v}")
        if k.sign is CurvatureSign.POSITIVE and u * u + v * v >= 1.0 / k.k:
            raise ParameterError(f"u^2 + v^2 must stay below 1/k = {1.0 / k.k} for k={k.k}, got {u * u + v * v}")
        if k.sign is CurvatureSign.NEGATIVE:
            u = abs(u)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True, eq=False)
class ModelPoint:
    """A point of M_k in the chart the comparison choices use.

    ``coords`` has a trailing axis of length 2 (plane, half-plane) or
    3 (ambient coordinates of the sphere); leading axes broadcast.
    """

    k: Curvature
    coords: np.ndarray

    def __post_init__(self) -> None:
        k = as_curvature(self.k)
        coords = np.array(self.coords, dtype=float)
        dim = 3 if k.sign is CurvatureSign.POSITIVE else 2
        if coords.shape[-1:] != (dim,):
            raise ParameterError(f"points of M_k with k={k.k} need {dim} coordinates, got shape {coords.shape}")
        if k.sign is CurvatureSign.NEGATIVE and np.any(coords[..., 1] <= 0):
            raise DomainError("half-plane points need a positive second coordinate")
        if k.sign is CurvatureSign.POSITIVE:
            radius = 1.0 / k.root
            norms = np.linalg.norm(coords, axis=-1)
            if np.any(np.abs(norms - radius) > 1e-12 * radius):
                raise DomainError(f"sphere points must have norm 1/sqrt(k) = {radius}")
        coords.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coords", coords)


def _as_result(values: np.ndarray) -> RealOrArray:
    if values.ndim == 0:
        return float(values)
    return values


def _clamp_unit(c: np.ndarray, what: str) -> np.ndarray:
    """Clamp into [-1, 1], tolerating CLAMP_TOL of floating-point noise."""
    if np.any(np.abs(c) > 1.0 + CLAMP_TOL):
        raise DomainError(f"{what} argument outside [-1, 1] beyond clamp tolerance (max |c| = {np.max(np.abs(c))})")
    return np.clip(c, -1.0, 1.0)


def _arccosh1p(delta: np.ndarray) -> np.ndarray:
    """arccosh(1 + delta) without cancellation for small delta."""
    if np.any(delta < -CLAMP_TOL):
        raise DomainError(f"argcosh argument below 1 beyond clamp tolerance (min offset {np.min(delta)})")
    delta = np.maximum(delta, 0.0)
    return np.log1p(delta + np.sqrt(delta * (delta + 2.0)))


def _half_plane_offset(params: ComparisonParams, s: float, t: np.ndarray) -> np.ndarray:
    # (cosh of the hyperbolic distance) - 1 between (u, v) and (0, e^{st})
    y = np.exp(s * t)
    return (params.u ** 2 + (params.v - y) ** 2) / (2.0 * params.v * y)


def _sphere_cosine(params: ComparisonParams, s: float, t: np.ndarray) -> np.ndarray:
    return s * (params.u * np.cos(s * t) + params.v * np.sin(s * t))


def _require_finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{what} is not finite over the requested parameters (overflow)")
    return values


def eval_g(params: ComparisonParams, t: ArrayLike) -> RealOrArray:
    """Evaluate the comparison function g_k(t)."""
    t = np.asarray(t, dtype=float)
    k = params.k
    s = k.root
    with np.errstate(over="ignore", invalid="ignore"):
        if k.sign is CurvatureSign.ZERO:
            g = np.hypot(params.u - t, params.v)
        elif k.sign is CurvatureSign.NEGATIVE:
            g = _arccosh1p(_half_plane_offset(params, s, t)) / s
        else:
            g = np.arccos(_clamp_unit(_sphere_cosine(params, s, t), "arccos")) / s
    return _as_result(_require_finite(g, "g_k"))


def eval_g_prime(params: ComparisonParams, t: ArrayLike) -> RealOrArray:
    """First derivative of g_k, from the implicit derivative relations.

    Raises:
        SingularityError: where g = 0 (k = 0), the point lies on the
            geodesic (k < 0) or the sine factor vanishes (k > 0).
    """
    t = np.asarray(t, dtype=float)
    k = params.k
    s = k.root
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if k.sign is CurvatureSign.ZERO:
            numerator = t - params.u
            denominator = np.hypot(numerator, params.v)
        elif k.sign is CurvatureSign.NEGATIVE:
            y = np.exp(s * t)
            numerator = (y - (params.u ** 2 + params.v ** 2) / y) / (2.0 * params.v)
            delta = np.maximum(_half_plane_offset(params, s, t), 0.0)
            # sinh(arccosh(1 + delta))
            denominator = np.sqrt(delta * (delta + 2.0))
        else:
            c = _clamp_unit(_sphere_cosine(params, s, t), "arccos")
            numerator = s * (params.u * np.sin(s * t) - params.v * np.cos(s * t))
            denominator = np.sqrt(1.0 - c * c)
    if np.any(denominator == 0):
        raise SingularityError(f"g_k' is singular for k={k.k}: the dividing factor vanishes")
    gp = _require_finite(numerator / denominator, "g_k'")
    # only rounding noise within CLAMP_TOL of +-1 is clipped
    return _as_result(np.where(np.abs(gp) <= 1.0 + CLAMP_TOL, np.clip(gp, -1.0, 1.0), gp))


def eval_g_second(params: ComparisonParams, t: ArrayLike) -> RealOrArray:
    """Second derivative of g_k through its differential equation."""
    return rhs(params.k, eval_g(params, t), eval_g_prime(params, t))


def ct(k: CurvatureLike, g: ArrayLike) -> RealOrArray:
    """Generalized cotangent: 1/g, sqrt(-k) coth(sqrt(-k) g) or sqrt(k) cot(sqrt(k) g)."""
    k = as_curvature(k)
    g = np.asarray(g, dtype=float)
    if np.any(~(g > 0)):
        raise DomainError("ct_k needs strictly positive g")
    s = k.root
    if k.sign is CurvatureSign.POSITIVE and np.any(s * g >= math.pi):
        raise DomainError(f"ct_k needs sqrt(k)*g < pi for k={k.k}")
    series = 1.0 / g - k.k * g / 3.0 - k.k ** 2 * g ** 3 / 45.0
    if k.sign is CurvatureSign.ZERO:
        return _as_result(1.0 / g)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if k.sign is CurvatureSign.NEGATIVE:
            exact = s / np.tanh(s * g)
        else:
            exact = s / np.tan(s * g)
    small = abs(k.k) * g * g < SERIES_THRESHOLD
    return _as_result(np.where(small, series, exact))


def rhs(k: CurvatureLike, g: ArrayLike, gp: ArrayLike) -> RealOrArray:
    """Right-hand side (1 - g'^2) ct_k(g) of the comparison differential equation."""
    gp = np.asarray(gp, dtype=float)
    return _as_result((1.0 - gp * gp) * np.asarray(ct(k, g)))


def geodesic_point(k: CurvatureLike, t: ArrayLike) -> ModelPoint:
    """Point at arc length t on the model geodesic."""
    k = as_curvature(k)
    t = np.asarray(t, dtype=float)
    s = k.root
    if k.sign is CurvatureSign.ZERO:
        coords = np.stack([t, np.zeros_like(t)], axis=-1)
    elif k.sign is CurvatureSign.NEGATIVE:
        coords = np.stack([np.zeros_like(t), np.exp(s * t)], axis=-1)
    else:
        if np.any(t < 0):
            raise DomainError("spherical geodesic parameters must be non-negative")
        coords = np.stack([np.cos(s * t) / s, np.sin(s * t) / s, np.zeros_like(t)], axis=-1)
    return ModelPoint(k, coords)


def comparison_point(params: ComparisonParams) -> ModelPoint:
    """The comparison point, on the upper hemisphere when k > 0."""
    k = params.k
    if k.sign is CurvatureSign.POSITIVE:
        height = math.sqrt(max(1.0 / k.k - params.u ** 2 - params.v ** 2, 0.0))
        return ModelPoint(k, np.array([params.u, params.v, height]))
    return ModelPoint(k, np.array([params.u, params.v]))


def model_distance(k: CurvatureLike, p: ModelPoint, q: ModelPoint) -> RealOrArray:
    """Intrinsic distance d_k between two points of M_k."""
    k = as_curvature(k)
    if p.k != k or q.k != k:
        raise ParameterError(f"points belong to M_{p.k.k} and M_{q.k.k}, not M_{k.k}")
    a, b = np.broadcast_arrays(p.coords, q.coords)
    s = k.root
    if k.sign is CurvatureSign.ZERO:
        return _as_result(np.linalg.norm(a - b, axis=-1))
    if k.sign is CurvatureSign.NEGATIVE:
        delta = np.sum((a - b) ** 2, axis=-1) / (2.0 * a[..., 1] * b[..., 1])
        return _as_result(_arccosh1p(delta) / s)
    # Great-circle angle via atan2, well conditioned for near and far points alike.
    angle = np.arctan2(np.linalg.norm(np.cross(a, b), axis=-1), np.sum(a * b, axis=-1))
    return _as_result(angle / s)
