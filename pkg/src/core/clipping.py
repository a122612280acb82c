"""
Element-wise clipping and forward evaluation of the effective perturbation norm.

The p-th power of the effective norm is rewritten coordinate-wise as

    sum over delta_i != 0 of min(|delta_i|^p * eta^p, |c_i - x_i|^p)

where c_i is the box face delta_i points at (b for delta_i > 0, a otherwise).
This form is what makes the solver in src.core.solver possible.
"""

from typing import Union

import numpy as np

from src.models.domain import ArrayLike, DomainBounds, ProblemInstance
from src.models.exceptions import ZeroDelta


def abs_pow(values: Union[ArrayLike, float], p: float) -> np.ndarray:
    """|values|^p, multiplying directly for p in {1, 2} and using exp(p * ln|v|) for fractional p"""
    magnitude = np.abs(np.asarray(values, dtype=np.float64))
    if p == 1:
        return magnitude
    if p == 2:
        return magnitude * magnitude
    if float(p).is_integer():
        return np.power(magnitude, int(p))
    with np.errstate(divide='ignore'):
        # ln(0) = -inf, exp(-inf) = 0
        return np.exp(p * np.log(magnitude))


def pth_root(value: float, p: float) -> float:
    if p == 1:
        return float(value)
    if p == 2:
        return float(np.sqrt(value))
    return float(np.power(value, 1.0 / p))


def clip(v: ArrayLike, bounds: DomainBounds) -> np.ndarray:
    """Element-wise max(a, min(b, v_i))"""
    return np.clip(np.asarray(v, dtype=np.float64), bounds.a, bounds.b)


def face_distances(inst: ProblemInstance) -> np.ndarray:
    """Distance from x_i to the face delta_i points at: b - x_i if delta_i > 0 else x_i - a"""
    return np.where(inst.delta > 0, inst.bounds.b - inst.x, inst.x - inst.bounds.a)


def saturation_thresholds(inst: ProblemInstance) -> np.ndarray:
    """
    Value of t = eta^p at which each coordinate reaches its face.

    Returned in original coordinate order; coordinates with delta_i == 0
    never saturate and get +inf, as do thresholds beyond the float64 range.
    """
    nonzero = inst.delta != 0
    thresholds = np.full(inst.n, np.inf)
    with np.errstate(over='ignore'):
        thresholds[nonzero] = abs_pow(face_distances(inst)[nonzero] / inst.delta[nonzero], inst.p)
    return thresholds


def p_norm(v: ArrayLike, p: float) -> float:
    """||v||_p, scaled by max|v_i| first so that |v_i|^p neither underflows nor overflows"""
    magnitude = np.abs(np.asarray(v, dtype=np.float64))
    if magnitude.size == 0:
        return 0.0
    largest = float(np.max(magnitude))
    if largest == 0 or not np.isfinite(largest):
        return largest
    return largest * pth_root(np.sum(abs_pow(magnitude / largest, p)), p)


def delta_norm(inst: ProblemInstance) -> float:
    return p_norm(inst.delta, inst.p)


def effective_norm(inst: ProblemInstance, eta: float) -> float:
    """||clip(x + eta * delta) - x||_p evaluated through the min-form, without building the clipped vector"""
    if eta < 0:
        raise ValueError(f"eta must be non-negative, got {eta}")
    if eta == 0:
        return 0.0
    nonzero = inst.delta != 0
    with np.errstate(over='ignore'):
        moved = np.abs(eta * inst.delta[nonzero])
    return p_norm(np.minimum(moved, face_distances(inst)[nonzero]), inst.p)


def unconstrained_eta(inst: ProblemInstance) -> float:
    """eps / ||delta||_p, the scale that would be right if nothing were clipped"""
    norm = delta_norm(inst)
    if norm == 0:
        raise ZeroDelta(f"||delta||_{inst.p:g} evaluates to 0")
    return inst.eps / norm


def max_effective_norm(inst: ProblemInstance) -> float:
    """Effective norm once every coordinate with delta_i != 0 sits at its face"""
    nonzero = inst.delta != 0
    return p_norm(face_distances(inst)[nonzero], inst.p)


def perturb(inst: ProblemInstance, eta: float) -> np.ndarray:
    """The perturbed-and-clipped point clip(x + eta * delta)"""
    return clip(inst.x + eta * inst.delta, inst.bounds)
