from typing import Optional

from src.core.gradient import gradient_eta
from src.core.solver import solve_eta
from src.models.records import GradientRecord, InstanceDefaults, InstanceRecord
from src.services.base import RecordService


class GradientService(RecordService):
    result_type = GradientRecord

    def __init__(self, defaults: InstanceDefaults, breakpoint_tol: Optional[float] = None, workers: int = 1):
        super().__init__(workers)
        self.defaults = defaults
        self.breakpoint_tol = breakpoint_tol

    def process_record(self, index: int, record: InstanceRecord) -> GradientRecord:
        """Solve a record and differentiate eta at the solution"""
        inst = record.to_instance(self.defaults)
        sol = solve_eta(inst)
        grad = gradient_eta(inst, sol, self.breakpoint_tol)
        return GradientRecord(
            id=record.id,
            eta=sol.eta,
            d_eps=grad.d_eps,
            d_x=grad.d_x.tolist(),
            d_delta=grad.d_delta.tolist(),
            at_breakpoint=grad.at_breakpoint,
        )
