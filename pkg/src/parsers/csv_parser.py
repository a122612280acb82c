from typing import IO, List, Optional, Union
import logging

import pandas as pd
from pydantic import ValidationError

from src.models.exceptions import RecordParseError
from src.models.records import InstanceRecord
from src.parsers.base import ParsedRecord

logger = logging.getLogger(__name__)

SCALAR_COLUMNS = ('eps', 'p', 'a', 'b', 'eta')


class CsvRecordParser:
    """
    Reads InstanceRecords from a table, one row per instance

    Vector columns are selected with a comma-separated list of names or a
    prefix pattern such as 'x*' that expands to every matching column in file
    order. Scalar columns eps, p, a, b, eta and id are picked up by name when
    present; empty cells fall back to the defaults.
    """

    def __init__(self, x_cols: str, delta_cols: Optional[str] = None):
        self.x_cols = x_cols
        self.delta_cols = delta_cols

    def parse(self, source: Union[str, IO[str]]) -> List[ParsedRecord]:
        try:
            df = pd.read_csv(source, dtype={'id': str})
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise RecordParseError(f"unreadable CSV: {str(e)}") from e

        x_columns = self._resolve_columns(self.x_cols, df.columns)
        delta_columns = self._resolve_columns(self.delta_cols, df.columns) if self.delta_cols else []
        if delta_columns and len(delta_columns) != len(x_columns):
            raise RecordParseError(f"{len(x_columns)} x columns but {len(delta_columns)} delta columns")

        known = set(x_columns) | set(delta_columns) | set(SCALAR_COLUMNS) | {'id'}
        ignored = [c for c in df.columns if c not in known]
        if ignored:
            logger.warning(f"Ignoring unused CSV columns: {', '.join(ignored)}")

        parsed = []
        # Line 1 is the header
        for offset, values in enumerate(df.to_dict(orient='records'), start=2):
            try:
                parsed.append(ParsedRecord(offset, record=self._row_to_record(values, x_columns, delta_columns, offset)))
            except RecordParseError as e:
                logger.error(f"Malformed record: {e}")
                parsed.append(ParsedRecord(offset, error=e))
        return parsed

    def _row_to_record(self, values: dict, x_columns: List[str], delta_columns: List[str],
                       line_number: int) -> InstanceRecord:
        fields = {'x': [_to_float(values[c]) for c in x_columns]}
        if delta_columns:
            fields['delta'] = [_to_float(values[c]) for c in delta_columns]
        for name in SCALAR_COLUMNS:
            value = values.get(name)
            if value is not None and not pd.isna(value):
                fields[name] = _to_float(value)
        if values.get('id') is not None and not pd.isna(values['id']):
            fields['id'] = str(values['id'])
        try:
            return InstanceRecord(**fields)
        except ValidationError as e:
            details = "; ".join(f"{'.'.join(str(loc) for loc in err['loc'])}: {err['msg']}" for err in e.errors())
            raise RecordParseError(details, line_number) from e

    @staticmethod
    def _resolve_columns(pattern: str, columns: pd.Index) -> List[str]:
        names = []
        for part in (s.strip() for s in pattern.split(',')):
            if part.endswith('*'):
                matches = [c for c in columns if str(c).startswith(part[:-1])]
                if not matches:
                    raise RecordParseError(f"no column matches '{part}'")
                names.extend(matches)
            elif part in columns:
                names.append(part)
            else:
                raise RecordParseError(f"no column named '{part}'")
        return names


def _to_float(value) -> float:
    # numpy scalars and numeric strings alike; NaN is rejected later by the record model
    try:
        return float(value)
    except (TypeError, ValueError):
        return value
