from typing import Optional


class ClipRescaleError(Exception):
    """Base class for all solver errors"""


class InvalidInstance(ClipRescaleError, ValueError):
    """Problem data violates the instance invariants"""


class ZeroDelta(ClipRescaleError):
    """Perturbation direction is the zero vector"""

    def __init__(self, message: str = "delta must contain at least one non-zero entry"):
        super().__init__(message)


class Unreachable(ClipRescaleError):
    """Requested eps exceeds the largest attainable effective norm"""

    def __init__(self, eps: float, max_norm: float):
        self.eps = eps
        self.max_norm = max_norm
        super().__init__(f"eps={eps!r} exceeds attainable maximum {max_norm!r}")


class NonConvergence(ClipRescaleError):
    """Bisection did not meet its tolerance within the iteration budget or before running out of float resolution"""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")


class DegenerateGradient(ClipRescaleError):
    """Gradient requested at a point where eta is not differentiable"""


class RecordParseError(ClipRescaleError, ValueError):
    """A single input line or row could not be turned into a record"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)
