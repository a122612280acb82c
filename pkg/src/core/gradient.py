"""
Closed-form partial derivatives of the solved scale eta.

At a solution the coordinates split into an active set A (still moving,
slope mass M = sum over A of |delta_i|^p) and a saturated set S (pinned to
their face, fixed mass R = sum over S of |c_i - x_i|^p). Locally

    eta^p * M = eps^p - R

and differentiating this identity gives every partial below. eta is only
piecewise smooth: where t = eta^p sits on a saturation threshold the
derivatives are one-sided and at_breakpoint is raised.
"""

from typing import Optional
import logging

import numpy as np

from src.core.clipping import abs_pow, face_distances
from src.core.solver import build_profile, segment_index
from src.models.domain import EtaGradient, EtaSolution, ProblemInstance
from src.models.exceptions import DegenerateGradient

logger = logging.getLogger(__name__)

DEFAULT_BREAKPOINT_TOL = 1e-9


def gradient_eta(inst: ProblemInstance, sol: EtaSolution,
                 breakpoint_tol: Optional[float] = None) -> EtaGradient:
    """
    Partial derivatives of eta with respect to eps, x and delta

    Args:
        inst: the instance that was solved
        sol: result of solve_eta(inst)
        breakpoint_tol: relative distance between t and a threshold below
            which the point is reported as a breakpoint

    Raises:
        DegenerateGradient: eps == 0, where eta(eps) only has a one-sided derivative
    """
    if inst.eps == 0:
        raise DegenerateGradient("eta is not differentiable at eps = 0")
    tol = DEFAULT_BREAKPOINT_TOL if breakpoint_tol is None else breakpoint_tol

    p = inst.p
    eta = sol.eta
    profile = build_profile(inst)
    j, _ = segment_index(inst, profile)

    # Everything below is in units of the unit direction delta / c
    c = profile.scale
    mass = float(profile.slopes[j])
    unit_eta = c * eta

    # Same classification as the solver: the saturated_count smallest thresholds
    saturated = np.zeros(inst.n, dtype=bool)
    saturated[profile.order[:sol.saturated_count]] = True
    active = np.zeros(inst.n, dtype=bool)
    active[profile.order[sol.saturated_count:]] = True

    signs = np.sign(inst.delta)
    denominator = c * mass * float(abs_pow(unit_eta, p - 1))

    d_eps = float(abs_pow(inst.eps, p - 1)) / denominator

    d_x = np.zeros(inst.n)
    d_x[saturated] = signs[saturated] * abs_pow(face_distances(inst)[saturated], p - 1) / denominator

    d_delta = np.zeros(inst.n)
    d_delta[active] = -eta * signs[active] * abs_pow(inst.delta[active] / c, p - 1) / (c * mass)

    t = float(abs_pow(unit_eta, p))
    gap = float(np.min(np.abs(profile.thresholds - t)))
    at_breakpoint = gap <= tol * max(1.0, t)
    if at_breakpoint:
        logger.debug(f"Gradient evaluated at a breakpoint (t={t:.6g}, gap={gap:.3e})")

    return EtaGradient(d_eps=d_eps, d_x=d_x, d_delta=d_delta, at_breakpoint=at_breakpoint)
