"""
Reference implementations used to cross-check the analytic path.

Nothing here uses the min-form rewrite: the norm is computed by literally
perturbing, clipping and subtracting, and eta is found by bisection on that
norm. Slow on purpose; not meant for production use.
"""

from dataclasses import dataclass
import logging

import numpy as np

from src.core.clipping import clip, max_effective_norm, pth_root, unconstrained_eta
from src.models.domain import ProblemInstance
from src.models.exceptions import NonConvergence, Unreachable

logger = logging.getLogger(__name__)

# Doubling the bracket more often than this overflows float64
MAX_BRACKET_DOUBLINGS = 2100


@dataclass(frozen=True)
class BisectionResult:
    eta: float
    iterations: int
    residual: float


def naive_effective_norm(inst: ProblemInstance, eta: float) -> float:
    """||clip(x + eta * delta) - x||_p, computed exactly as written"""
    if eta < 0:
        raise ValueError(f"eta must be non-negative, got {eta}")
    effective = clip(inst.x + eta * inst.delta, inst.bounds) - inst.x
    return pth_root(np.sum(np.abs(effective) ** inst.p), inst.p)


def bisect_eta(inst: ProblemInstance, tol: float = 1e-12, max_iter: int = 200) -> BisectionResult:
    """
    Binary search for eta with |naive_effective_norm(eta) - eps| <= tol

    The bracket starts at [0, eps / ||delta||_p] and its upper end doubles
    until it covers eps.

    Raises:
        Unreachable: eps exceeds the attainable maximum
        NonConvergence: tol not reached within max_iter halvings, or not
            reachable at all because the bracket shrank to adjacent floats
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter <= 0:
        raise ValueError(f"max_iter must be positive, got {max_iter}")

    eps = inst.eps
    if eps == 0:
        return BisectionResult(eta=0.0, iterations=0, residual=0.0)

    max_norm = max_effective_norm(inst)
    if eps > max_norm:
        raise Unreachable(eps, max_norm)

    lo = 0.0
    hi = unconstrained_eta(inst)
    f_hi = naive_effective_norm(inst, hi)
    doublings = 0
    while f_hi < eps:
        # The naive sum can round a hair below max_norm at full saturation
        if eps - f_hi <= tol:
            return BisectionResult(eta=hi, iterations=0, residual=abs(f_hi - eps))
        if doublings >= MAX_BRACKET_DOUBLINGS:
            raise NonConvergence(0, eps - f_hi)
        lo, hi = hi, 2.0 * hi
        f_hi = naive_effective_norm(inst, hi)
        doublings += 1

    f_lo = naive_effective_norm(inst, lo)
    for iteration in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # Bracket is down to adjacent floats
            eta, f = (lo, f_lo) if abs(f_lo - eps) <= abs(f_hi - eps) else (hi, f_hi)
            residual = abs(f - eps)
            logger.debug(f"Bisection hit float resolution after {iteration - 1} iterations "
                         f"(residual {residual:.3e})")
            if residual <= tol:
                return BisectionResult(eta=eta, iterations=iteration - 1, residual=residual)
            raise NonConvergence(iteration - 1, residual)

        f_mid = naive_effective_norm(inst, mid)
        residual = abs(f_mid - eps)
        if residual <= tol:
            return BisectionResult(eta=mid, iterations=iteration, residual=residual)
        if f_mid < eps:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    raise NonConvergence(max_iter, min(abs(f_lo - eps), abs(f_hi - eps)))


def solve_eta_bisect(inst: ProblemInstance, tol: float = 1e-12, max_iter: int = 200) -> float:
    """eta from bisect_eta, without the iteration bookkeeping"""
    return bisect_eta(inst, tol, max_iter).eta
