from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from src.models.domain import DomainBounds, ProblemInstance
from src.models.exceptions import InvalidInstance


class RecordStatus(str, Enum):
    OK = "ok"
    UNREACHABLE = "unreachable"
    ZERO_DELTA = "zero_delta"
    DEGENERATE = "degenerate"
    INVALID = "invalid"


class InstanceDefaults(BaseModel):
    """Fallback values for record fields that are left out"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    p: float = 2.0
    a: float = 0.0
    b: float = 1.0
    eps: Optional[float] = None
    eta: Optional[float] = None


class InstanceRecord(BaseModel):
    """One input line: a problem instance with optional per-record overrides"""
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    x: List[float]
    delta: Optional[List[float]] = None
    eps: Optional[float] = None
    p: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    eta: Optional[float] = None
    id: Optional[str] = None

    @field_validator('x')
    @classmethod
    def _x_not_empty(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("x must not be empty")
        return value

    def bounds(self, defaults: InstanceDefaults) -> DomainBounds:
        a = self.a if self.a is not None else defaults.a
        b = self.b if self.b is not None else defaults.b
        return DomainBounds(a, b)

    def to_instance(self, defaults: InstanceDefaults, delta: Optional[List[float]] = None) -> ProblemInstance:
        """
        Build a validated ProblemInstance

        Args:
            defaults: values used for fields the record leaves out
            delta: direction to use instead of the record's own (noise mode)
        """
        direction = delta if delta is not None else self.delta
        if direction is None:
            raise InvalidInstance("record has no delta")
        eps = self.eps if self.eps is not None else defaults.eps
        if eps is None:
            raise InvalidInstance("record has no eps and no default eps was given")
        p = self.p if self.p is not None else defaults.p
        return ProblemInstance(self.x, direction, eps, p, self.bounds(defaults))

    def resolve_eta(self, defaults: InstanceDefaults) -> float:
        eta = self.eta if self.eta is not None else defaults.eta
        if eta is None:
            raise InvalidInstance("record has no eta and no default eta was given")
        if eta < 0:
            raise InvalidInstance(f"eta must be non-negative, got {eta}")
        return eta


class SolutionRecord(BaseModel):
    id: Optional[str] = None
    status: RecordStatus = RecordStatus.OK
    eta: Optional[float] = None
    achieved_norm: Optional[float] = None
    saturated_count: Optional[int] = None
    max_norm: Optional[float] = None
    perturbed: Optional[List[float]] = None
    message: Optional[str] = None


class NoiseRecord(SolutionRecord):
    eps: Optional[float] = None
    naive_norm: Optional[float] = None


class NormRecord(BaseModel):
    id: Optional[str] = None
    status: RecordStatus = RecordStatus.OK
    eta: Optional[float] = None
    effective_norm: Optional[float] = None
    naive_norm: Optional[float] = None
    max_norm: Optional[float] = None
    message: Optional[str] = None


class GradientRecord(BaseModel):
    id: Optional[str] = None
    status: RecordStatus = RecordStatus.OK
    eta: Optional[float] = None
    d_eps: Optional[float] = None
    d_x: Optional[List[float]] = None
    d_delta: Optional[List[float]] = None
    at_breakpoint: Optional[bool] = None
    max_norm: Optional[float] = None
    message: Optional[str] = None


class BenchRecord(BaseModel):
    trial: int
    row: int
    n: int
    method: str
    nanos: int
    eta: float
    iterations: int
