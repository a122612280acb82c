import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pytest

# Add the project root directory to Python path
sys.path.append(str(Path(__file__).parent.parent))

from src.config.settings import reset_settings
from src.core.clipping import max_effective_norm
from src.core.solver import build_profile
from src.models.domain import DomainBounds, ProblemInstance

P_VALUES = (1.0, 1.5, 2.0, 3.0)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees settings built from a clean environment"""
    for name in list(os.environ):
        if name.startswith('CLIPRESCALE_'):
            monkeypatch.delenv(name)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def worked_instance() -> ProblemInstance:
    """Two coordinates, the first clips at b: eta^2 = 0.24"""
    return ProblemInstance([0.9, 0.5], [1.0, 1.0], 0.5, 2.0, DomainBounds(0.0, 1.0))


def random_bounds(rng: np.random.Generator) -> DomainBounds:
    a = rng.uniform(-2.0, 1.0)
    return DomainBounds(a, a + rng.uniform(0.1, 3.0))


def random_instance(rng: np.random.Generator, n_max: int = 64, p_values: Sequence[float] = P_VALUES,
                    bounds: Optional[DomainBounds] = None, eps_fraction: Optional[float] = None,
                    face_prob: float = 0.1, zero_prob: float = 0.1) -> ProblemInstance:
    """
    Draw a valid instance

    Some x_i sit exactly on a face and some delta_i are exactly zero so that
    those branches are exercised. eps is a uniform fraction in (0, 1] of the
    attainable maximum unless eps_fraction is given.
    """
    n = int(rng.integers(1, n_max + 1))
    p = float(rng.choice(p_values))
    bounds = bounds or random_bounds(rng)

    x = rng.uniform(bounds.a, bounds.b, n)
    on_face = rng.random(n) < face_prob
    x[on_face] = np.where(rng.random(on_face.sum()) < 0.5, bounds.a, bounds.b)

    delta = rng.standard_normal(n)
    delta[rng.random(n) < zero_prob] = 0.0
    if not np.any(delta != 0):
        delta[int(rng.integers(n))] = 1.0

    inst = ProblemInstance(x, delta, 0.0, p, bounds)
    fraction = eps_fraction if eps_fraction is not None else 1.0 - rng.uniform()
    return inst.with_eps(fraction * max_effective_norm(inst))


def solvable(inst: ProblemInstance) -> bool:
    return inst.eps <= max_effective_norm(inst)


def eta_rtol(inst: ProblemInstance, base: float = 1e-12) -> float:
    """
    Relative tolerance on a solved eta

    eta^p comes out of thresholds[j] - (cumulative[j] - eps^p) / slopes[j];
    when both terms are much larger than the result, or the active slope is
    tiny, the subtraction cancels digits and the attainable accuracy drops
    accordingly.
    """
    if inst.eps == 0:
        return base
    profile = build_profile(inst)
    target = inst.eps ** inst.p
    j = min(int(np.searchsorted(profile.cumulative, target, side='left')), profile.m - 1)
    slope = profile.slopes[j]
    t = profile.thresholds[j] - (profile.cumulative[j] - target) / slope
    if t <= 0:
        return base
    amplification = (profile.thresholds[j] + profile.cumulative[j] / slope) / t
    return base + 1e-14 * amplification
