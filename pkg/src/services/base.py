from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Type
import logging

from pydantic import BaseModel

from src.models.exceptions import ClipRescaleError, DegenerateGradient, Unreachable, ZeroDelta
from src.models.records import InstanceRecord, RecordStatus
from src.parsers.base import ParsedRecord

logger = logging.getLogger(__name__)


class RecordService:
    """
    Shared plumbing for services that map input records to result records

    Subclasses implement process_record(index, record). Results come back in
    input order whatever the worker count, and a failing record never stops
    the others.
    """
    result_type: Type[BaseModel] = BaseModel

    def __init__(self, workers: int = 1):
        self.workers = workers

    def process_record(self, index: int, record: InstanceRecord) -> BaseModel:
        raise NotImplementedError

    def process_all(self, parsed: List[ParsedRecord]) -> List[BaseModel]:
        """Process every parsed line; lines that failed to parse become 'invalid' results"""
        def run(item):
            index, entry = item
            if not entry.ok:
                return self.result_type(status=RecordStatus.INVALID, message=str(entry.error))
            return self._guarded(index, entry.record)

        items = list(enumerate(parsed))
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                return list(pool.map(run, items))
        return [run(item) for item in items]

    def _guarded(self, index: int, record: InstanceRecord) -> BaseModel:
        try:
            return self.process_record(index, record)
        except ClipRescaleError as e:
            logger.warning(f"Record {index + 1}{_label(record)} failed: {e}")
            return self.failure(record, e)

    def failure(self, record: Optional[InstanceRecord], error: ClipRescaleError) -> BaseModel:
        """Result record describing why a record could not be processed"""
        fields = {
            'id': record.id if record is not None else None,
            'status': status_for(error),
            'message': str(error),
        }
        if isinstance(error, Unreachable) and 'max_norm' in self.result_type.model_fields:
            fields['max_norm'] = error.max_norm
        return self.result_type(**fields)


def status_for(error: ClipRescaleError) -> RecordStatus:
    if isinstance(error, Unreachable):
        return RecordStatus.UNREACHABLE
    if isinstance(error, ZeroDelta):
        return RecordStatus.ZERO_DELTA
    if isinstance(error, DegenerateGradient):
        return RecordStatus.DEGENERATE
    return RecordStatus.INVALID


def _label(record: InstanceRecord) -> str:
    return f" ({record.id})" if record.id else ""
