from typing import Iterable, List
import logging

from pydantic import ValidationError

from src.models.exceptions import RecordParseError
from src.models.records import InstanceRecord
from src.parsers.base import ParsedRecord

logger = logging.getLogger(__name__)


class JsonlRecordParser:
    """Reads one InstanceRecord per non-blank line"""

    def parse_line(self, line: str, line_number: int) -> InstanceRecord:
        """Parse a single line, raising RecordParseError with its line number"""
        try:
            return InstanceRecord.model_validate_json(line)
        except ValidationError as e:
            details = "; ".join(
                f"{'.'.join(str(loc) for loc in err['loc']) or 'record'}: {err['msg']}"
                for err in e.errors()
            )
            raise RecordParseError(details, line_number) from e

    def parse_stream(self, lines: Iterable[str]) -> List[ParsedRecord]:
        """Parse every line; malformed lines are kept as errors so output stays aligned with input"""
        parsed = []
        for line_number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                parsed.append(ParsedRecord(line_number, record=self.parse_line(line, line_number)))
            except RecordParseError as e:
                logger.error(f"Malformed record: {e}")
                parsed.append(ParsedRecord(line_number, error=e))
        return parsed
