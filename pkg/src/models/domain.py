from dataclasses import dataclass, field
from typing import Sequence, Union
import math

import numpy as np

from src.models.exceptions import InvalidInstance, ZeroDelta

ArrayLike = Union[Sequence[float], np.ndarray]


@dataclass(frozen=True)
class DomainBounds:
    """The clipping box [a, b] shared by all coordinates"""
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidInstance(f"bounds must be finite, got a={self.a}, b={self.b}")
        if not self.a < self.b:
            raise InvalidInstance(f"bounds require a < b, got a={self.a}, b={self.b}")


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """
    One instance of: find eta >= 0 with ||clip(x + eta * delta) - x||_p == eps

    Vectors are copied into read-only float64 arrays on construction so an
    instance can be shared between threads.
    """
    x: np.ndarray
    delta: np.ndarray
    eps: float
    p: float = 2.0
    bounds: DomainBounds = field(default_factory=DomainBounds)

    def __post_init__(self):
        x = _as_vector(self.x, 'x')
        delta = _as_vector(self.delta, 'delta')
        if x.shape != delta.shape:
            raise InvalidInstance(f"x and delta differ in length ({x.size} != {delta.size})")

        eps = float(self.eps)
        p = float(self.p)
        if not math.isfinite(eps) or eps < 0:
            raise InvalidInstance(f"eps must be finite and non-negative, got {self.eps}")
        if not math.isfinite(p) or p < 1:
            raise InvalidInstance(f"p must be finite and >= 1, got {self.p}")

        # Exact comparison, no tolerance
        if np.any(x < self.bounds.a) or np.any(x > self.bounds.b):
            raise InvalidInstance(f"x must lie in [{self.bounds.a}, {self.bounds.b}]")
        if not np.any(delta != 0):
            raise ZeroDelta()

        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'delta', delta)
        object.__setattr__(self, 'eps', eps)
        object.__setattr__(self, 'p', p)

    @property
    def n(self) -> int:
        return int(self.x.size)

    def with_eps(self, eps: float) -> 'ProblemInstance':
        return ProblemInstance(self.x, self.delta, eps, self.p, self.bounds)


@dataclass(frozen=True, eq=False)
class BreakpointProfile:
    """
    Sorted saturation thresholds of f(t) = ||clip(x + t^(1/p) delta / scale) - x||_p^p

    Thresholds and slopes are measured against the unit direction
    delta / scale, scale = max|delta_i|, so t = (scale * eta)^p. cumulative
    holds norms to the p-th power and does not depend on the scale.

    thresholds: sorted t_i over coordinates with delta_i != 0
    slopes: suffix sums of the sorted |delta_i / scale|^p (slope of f left of each threshold)
    cumulative: f evaluated at each threshold
    order: profile position -> original coordinate index
    scale: max|delta_i|
    """
    thresholds: np.ndarray
    slopes: np.ndarray
    cumulative: np.ndarray
    order: np.ndarray
    scale: float = 1.0

    @property
    def m(self) -> int:
        return int(self.thresholds.size)


@dataclass(frozen=True)
class EtaSolution:
    eta: float
    achieved_norm: float
    saturated_count: int
    active_mass: float


@dataclass(frozen=True, eq=False)
class EtaGradient:
    d_eps: float
    d_x: np.ndarray
    d_delta: np.ndarray
    at_breakpoint: bool


def _as_vector(values: ArrayLike, name: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInstance(f"{name} is not a numeric vector: {e}") from e
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInstance(f"{name} must be a non-empty 1-dimensional vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidInstance(f"{name} contains NaN or Inf")
    arr.setflags(write=False)
    return arr
