"""
Analytic solver for the clipping-aware scale eta.

With t = eta^p the p-th power of the effective norm is a concave piecewise
linear function f(t). Its breakpoints are the saturation thresholds t_i;
left of the sorted threshold j its slope is the mass of all coordinates that
have not saturated yet. Building f costs one sort, inverting it at eps^p is
a single search followed by one linear interpolation.

The direction is divided by max|delta_i| before any power is taken, and the
resulting eta is divided by the same factor. eta scales as 1/c under
delta -> c * delta, so this is exact and keeps |delta_i|^p inside float64.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from src.core.clipping import (
    abs_pow, effective_norm, face_distances, max_effective_norm, pth_root, unconstrained_eta,
)
from src.models.domain import ArrayLike, BreakpointProfile, DomainBounds, EtaSolution, ProblemInstance
from src.models.exceptions import ClipRescaleError, InvalidInstance, Unreachable, ZeroDelta

logger = logging.getLogger(__name__)

BatchResult = Union[EtaSolution, ClipRescaleError]


def build_profile(inst: ProblemInstance) -> BreakpointProfile:
    """
    Sort the saturation thresholds and accumulate slopes and f values at each of them

    Coordinates whose threshold is not representable in float64 (a
    relative size of delta_i below roughly 1e-308^(1/p)) are left out: they
    never reach their face at any finite scale and their slope is below
    rounding.
    """
    coords = np.flatnonzero(inst.delta != 0)
    if coords.size == 0:
        raise ZeroDelta()

    scale = float(np.max(np.abs(inst.delta[coords])))
    unit = inst.delta[coords] / scale
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        thresholds = abs_pow(face_distances(inst)[coords] / unit, inst.p)
    representable = np.isfinite(thresholds)
    if not np.any(representable):
        raise InvalidInstance("no coordinate reaches its face within the float64 range")
    if not np.all(representable):
        logger.debug(f"Leaving {int(np.count_nonzero(~representable))} coordinates out of the profile")
    coords, unit, thresholds = coords[representable], unit[representable], thresholds[representable]
    weights = abs_pow(unit, inst.p)

    ks = np.argsort(thresholds, kind='stable')
    thresholds = thresholds[ks]
    slopes = np.cumsum(weights[ks][::-1])[::-1]
    # f(0) = 0, so the first step runs from t = 0 to the first threshold
    steps = np.diff(thresholds, prepend=0.0)
    cumulative = np.cumsum(slopes * steps)

    order = coords[ks]
    for arr in (thresholds, slopes, cumulative, order):
        arr.setflags(write=False)
    return BreakpointProfile(thresholds=thresholds, slopes=slopes, cumulative=cumulative, order=order, scale=scale)


def evaluate_profile(profile: BreakpointProfile, t: float) -> float:
    """f(t), the p-th power of the effective norm at eta = t^(1/p) / profile.scale"""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    k = int(np.searchsorted(profile.thresholds, t, side='right'))
    if k == profile.m:
        return float(profile.cumulative[-1])
    if k == 0:
        return float(profile.slopes[0] * t)
    return float(profile.cumulative[k - 1] + profile.slopes[k] * (t - profile.thresholds[k - 1]))


def solve_eta(inst: ProblemInstance) -> EtaSolution:
    """Smallest eta >= 0 with ||clip(x + eta * delta) - x||_p == eps"""
    if inst.eps == 0:
        scale = float(np.max(np.abs(inst.delta)))
        return EtaSolution(
            eta=0.0,
            achieved_norm=0.0,
            saturated_count=0,
            active_mass=_mass(float(np.sum(abs_pow(inst.delta / scale, inst.p))), scale, inst.p),
        )
    return solve_eta_from_profile(inst, build_profile(inst))


def segment_index(inst: ProblemInstance, profile: BreakpointProfile) -> Tuple[int, bool]:
    """
    Profile segment holding eps^p

    Returns:
        (j, clamped): the first index whose cumulative value reaches eps^p,
        and whether the solution sits on thresholds[j] itself rather than
        inside the segment

    Raises:
        Unreachable: eps is larger than the effective norm with every coordinate saturated
        InvalidInstance: eta lies past a threshold the profile had to leave out
    """
    max_norm = max_effective_norm(inst)
    if inst.eps > max_norm:
        raise Unreachable(inst.eps, max_norm)

    target = float(abs_pow(inst.eps, inst.p))
    hits = np.flatnonzero(profile.cumulative >= target)
    at_plateau = inst.eps == max_norm
    if (at_plateau or hits.size == 0) and profile.m < np.count_nonzero(inst.delta):
        raise InvalidInstance(f"eta for eps={inst.eps!r} lies beyond the float64 range")

    if at_plateau:
        # Every coordinate saturated: the solutions form the ray t >= last threshold
        return int(np.searchsorted(profile.thresholds, profile.thresholds[-1], side='left')), True
    if hits.size == 0:
        # Rounding can leave eps^p a hair above the last cumulative value
        # even though eps <= max_norm; that case belongs to the final segment.
        return profile.m - 1, True
    return int(hits[0]), False


def solve_eta_from_profile(inst: ProblemInstance, profile: BreakpointProfile) -> EtaSolution:
    """
    Invert a prebuilt profile at inst.eps

    The profile only depends on (x, delta, p, bounds), so it can be reused
    for several eps values via inst.with_eps(...).

    Raises:
        Unreachable: eps is larger than the effective norm with every coordinate saturated
    """
    if inst.eps == 0:
        return solve_eta(inst)

    j, clamped = segment_index(inst, profile)
    slope = float(profile.slopes[j])
    if clamped:
        t = float(profile.thresholds[j])
    else:
        # slope > 0 here: a flat segment repeats the previous cumulative value and is never the first hit
        target = float(abs_pow(inst.eps, inst.p))
        t = max(float(profile.thresholds[j] - (profile.cumulative[j] - target) / slope), 0.0)

    # Ties with a threshold count as saturated
    saturated_count = max(j, int(np.searchsorted(profile.thresholds, t, side='right')))
    if saturated_count == 0:
        eta = unconstrained_eta(inst)
    else:
        eta = pth_root(t, inst.p) / profile.scale

    return EtaSolution(
        eta=eta,
        achieved_norm=effective_norm(inst, eta),
        saturated_count=saturated_count,
        active_mass=_mass(slope, profile.scale, inst.p),
    )


def _mass(unit_mass: float, scale: float, p: float) -> float:
    """sum |delta_i|^p from sum |delta_i / scale|^p; inf or 0 once it leaves the float64 range"""
    with np.errstate(over='ignore'):
        return float(unit_mass * abs_pow(scale, p))


def solve_eta_batch(x_rows: ArrayLike, delta_rows: ArrayLike, eps: Sequence[float],
                    p: float = 2.0, bounds: Optional[DomainBounds] = None,
                    workers: int = 1) -> List[BatchResult]:
    """
    Solve eta for every row of (x_rows, delta_rows, eps)

    Rows share p and bounds. Each row goes through solve_eta on its own, so a
    row's result is the same as solving it alone. Failing rows yield their
    exception in place of a solution instead of aborting the batch.

    Args:
        x_rows: matrix of starting points, one row per instance
        delta_rows: matrix of directions, row-aligned with x_rows
        eps: one target norm per row
        p: norm order shared by all rows
        bounds: clipping box shared by all rows, [0, 1] if None
        workers: thread count; results keep input order for any value

    Returns:
        List with an EtaSolution or a ClipRescaleError per row
    """
    bounds = bounds or DomainBounds()
    x_rows = np.atleast_2d(np.asarray(x_rows, dtype=np.float64))
    delta_rows = np.atleast_2d(np.asarray(delta_rows, dtype=np.float64))
    eps = np.atleast_1d(np.asarray(eps, dtype=np.float64))
    if x_rows.shape != delta_rows.shape:
        raise InvalidInstance(f"x_rows {x_rows.shape} and delta_rows {delta_rows.shape} are not row-aligned")
    if eps.shape != (x_rows.shape[0],):
        raise InvalidInstance(f"expected {x_rows.shape[0]} eps values, got {eps.size}")

    def solve_row(k: int) -> BatchResult:
        try:
            return solve_eta(ProblemInstance(x_rows[k], delta_rows[k], eps[k], p, bounds))
        except ClipRescaleError as e:
            logger.debug(f"Batch row {k} failed: {e}")
            return e

    rows = range(x_rows.shape[0])
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve_row, rows))
    else:
        results = [solve_row(k) for k in rows]

    failed = sum(1 for r in results if isinstance(r, ClipRescaleError))
    logger.debug(f"Solved batch of {len(results)} rows ({failed} failed)")
    return results
