import logging

import numpy as np

from src.core.clipping import p_norm, perturb, unconstrained_eta
from src.core.solver import solve_eta
from src.models.domain import ProblemInstance
from src.models.records import InstanceDefaults, InstanceRecord, NoiseRecord
from src.services.base import RecordService
from src.utils.rng import NoiseDistribution, RecordRngFactory, draw_direction

logger = logging.getLogger(__name__)


def naive_rescale_and_clip(inst: ProblemInstance) -> np.ndarray:
    """Rescale delta to norm eps ignoring the box, then clip: the pipeline that under-uses the budget"""
    return perturb(inst, unconstrained_eta(inst))


class NoiseService(RecordService):
    """
    Perturbs each record's x with random noise of effective norm exactly eps

    A direction is drawn per record from its own seeded stream, rescaled with
    the clipping-aware eta and added to x before clipping. The norm reached
    by plain rescale-then-clip is reported as naive_norm for comparison.
    """
    result_type = NoiseRecord

    def __init__(self, defaults: InstanceDefaults, distribution: NoiseDistribution,
                 rng_factory: RecordRngFactory, workers: int = 1):
        super().__init__(workers)
        self.defaults = defaults
        self.distribution = NoiseDistribution(distribution)
        self.rng_factory = rng_factory

    def process_record(self, index: int, record: InstanceRecord) -> NoiseRecord:
        if record.delta is not None:
            logger.warning(f"Record {index + 1}: ignoring given delta, noise mode draws its own")
        rng = self.rng_factory.for_record(index)
        delta = draw_direction(rng, len(record.x), self.distribution)

        inst = record.to_instance(self.defaults, delta=delta.tolist())
        sol = solve_eta(inst)
        naive = naive_rescale_and_clip(inst)
        return NoiseRecord(
            id=record.id,
            eps=inst.eps,
            eta=sol.eta,
            achieved_norm=sol.achieved_norm,
            saturated_count=sol.saturated_count,
            naive_norm=p_norm(naive - inst.x, inst.p),
            perturbed=perturb(inst, sol.eta).tolist(),
        )
