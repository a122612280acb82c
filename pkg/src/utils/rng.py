"""Seeded, per-record random streams for noise generation and benchmarks."""

from enum import Enum
from typing import Optional
import logging

import numpy as np

logger = logging.getLogger(__name__)


class NoiseDistribution(str, Enum):
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"


class RecordRngFactory:
    """
    Hands out an independent generator per record index

    Every stream is derived from (seed, index) alone, so the draws for a
    record do not depend on how many records came before it or on which
    thread processes it.
    """

    def __init__(self, seed: Optional[int] = None):
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % (2 ** 63))
            logger.info(f"No seed given, using generated seed {seed}")
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self._seed = seed

    @property
    def seed(self) -> int:
        return self._seed

    def for_record(self, index: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self._seed, index]))


def draw_direction(rng: np.random.Generator, n: int, distribution: NoiseDistribution) -> np.ndarray:
    """i.i.d. standard normal, or i.i.d. uniform on [-1, 1]"""
    if distribution == NoiseDistribution.GAUSSIAN:
        return rng.standard_normal(n)
    if distribution == NoiseDistribution.UNIFORM:
        return rng.uniform(-1.0, 1.0, n)
    raise ValueError(f"Unknown noise distribution: {distribution}")
