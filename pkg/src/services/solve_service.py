import logging

from src.core.clipping import perturb
from src.core.solver import solve_eta
from src.models.records import InstanceDefaults, InstanceRecord, SolutionRecord
from src.services.base import RecordService

logger = logging.getLogger(__name__)


class SolveService(RecordService):
    result_type = SolutionRecord

    def __init__(self, defaults: InstanceDefaults, emit_vector: bool = False, workers: int = 1):
        super().__init__(workers)
        self.defaults = defaults
        self.emit_vector = emit_vector

    def process_record(self, index: int, record: InstanceRecord) -> SolutionRecord:
        """Solve eta for one record"""
        inst = record.to_instance(self.defaults)
        sol = solve_eta(inst)
        logger.debug(f"Record {index + 1}: eta={sol.eta:.6g}, saturated={sol.saturated_count}/{inst.n}")
        return SolutionRecord(
            id=record.id,
            eta=sol.eta,
            achieved_norm=sol.achieved_norm,
            saturated_count=sol.saturated_count,
            perturbed=perturb(inst, sol.eta).tolist() if self.emit_vector else None,
        )
