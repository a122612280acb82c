from dataclasses import dataclass
from typing import Optional

from src.models.exceptions import RecordParseError
from src.models.records import InstanceRecord


@dataclass
class ParsedRecord:
    """One input line or row: either a record or the reason it could not be read"""
    line_number: int
    record: Optional[InstanceRecord] = None
    error: Optional[RecordParseError] = None

    @property
    def ok(self) -> bool:
        return self.record is not None
