from src.core.clipping import effective_norm, max_effective_norm
from src.core.oracle import naive_effective_norm
from src.models.records import InstanceDefaults, InstanceRecord, NormRecord
from src.services.base import RecordService


class NormService(RecordService):
    """Evaluates the effective norm at a given eta, with the literal clip-then-norm value alongside"""
    result_type = NormRecord

    def __init__(self, defaults: InstanceDefaults, workers: int = 1):
        super().__init__(workers)
        # eps plays no part in evaluating the norm
        self.defaults = defaults.model_copy(update={'eps': defaults.eps if defaults.eps is not None else 0.0})

    def process_record(self, index: int, record: InstanceRecord) -> NormRecord:
        inst = record.to_instance(self.defaults)
        eta = record.resolve_eta(self.defaults)
        return NormRecord(
            id=record.id,
            eta=eta,
            effective_norm=effective_norm(inst, eta),
            naive_norm=naive_effective_norm(inst, eta),
            max_norm=max_effective_norm(inst),
        )
