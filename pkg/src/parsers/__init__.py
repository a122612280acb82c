from .base import ParsedRecord
from .jsonl_parser import JsonlRecordParser
from .csv_parser import CsvRecordParser

__all__ = ['ParsedRecord', 'JsonlRecordParser', 'CsvRecordParser']
