from time import perf_counter_ns
from typing import List, Optional
import logging
import math

import numpy as np

from src.core.clipping import max_effective_norm
from src.core.oracle import bisect_eta
from src.core.solver import solve_eta
from src.models.domain import DomainBounds, ProblemInstance
from src.models.exceptions import NonConvergence
from src.models.records import BenchRecord
from src.utils.rng import RecordRngFactory

logger = logging.getLogger(__name__)

ANALYTIC = "analytic"
BISECT = "bisect"


class BenchmarkService:
    """
    Times the analytic solver against bisection on the same seeded instances

    Each trial draws `batch` instances of dimension n: x uniform in the box,
    delta standard normal, eps uniform in (0, max effective norm]. Every
    instance is solved once by each method and timed on its own. An instance
    bisection cannot bring within tol is logged and left out of both methods.
    """

    def __init__(self, n: int, batch: int = 1, p: float = 2.0, trials: int = 5,
                 seed: Optional[int] = None, tol: float = 1e-12, max_iter: int = 200,
                 bounds: Optional[DomainBounds] = None):
        for name, value in (('n', n), ('batch', batch), ('trials', trials)):
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not (math.isfinite(p) and p >= 1):
            raise ValueError(f"p must be finite and >= 1, got {p}")
        if not tol > 0:
            raise ValueError(f"tol must be positive, got {tol}")
        self.n = n
        self.batch = batch
        self.p = p
        self.trials = trials
        self.tol = tol
        self.max_iter = max_iter
        self.bounds = bounds or DomainBounds()
        self.rng_factory = RecordRngFactory(seed)

    @property
    def seed(self) -> int:
        return self.rng_factory.seed

    def generate_instance(self, rng: np.random.Generator) -> ProblemInstance:
        """Draw one solvable instance"""
        x = rng.uniform(self.bounds.a, self.bounds.b, self.n)
        delta = rng.standard_normal(self.n)
        inst = ProblemInstance(x, delta, 0.0, self.p, self.bounds)
        # 1 - U is in (0, 1], so eps never hits 0
        return inst.with_eps((1.0 - rng.uniform()) * max_effective_norm(inst))

    def run(self) -> List[BenchRecord]:
        records = []
        for trial in range(self.trials):
            rng = self.rng_factory.for_record(trial)
            for row in range(self.batch):
                inst = self.generate_instance(rng)

                start = perf_counter_ns()
                sol = solve_eta(inst)
                analytic_nanos = perf_counter_ns() - start

                start = perf_counter_ns()
                try:
                    bisection = bisect_eta(inst, self.tol, self.max_iter)
                except NonConvergence as e:
                    logger.warning(f"Trial {trial}, row {row}: bisection failed, instance skipped: {str(e)}")
                    continue
                bisect_nanos = perf_counter_ns() - start

                records.append(BenchRecord(trial=trial, row=row, n=self.n, method=ANALYTIC,
                                           nanos=analytic_nanos, eta=sol.eta, iterations=1))
                records.append(BenchRecord(trial=trial, row=row, n=self.n, method=BISECT,
                                           nanos=bisect_nanos, eta=bisection.eta,
                                           iterations=bisection.iterations))
            logger.info(f"Trial {trial + 1}/{self.trials} done")
        return records
