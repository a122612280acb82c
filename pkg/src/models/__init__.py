from .domain import DomainBounds, ProblemInstance, BreakpointProfile, EtaSolution, EtaGradient
from .records import (
    RecordStatus, InstanceDefaults, InstanceRecord, SolutionRecord,
    NoiseRecord, NormRecord, GradientRecord, BenchRecord,
)

__all__ = [
    'DomainBounds', 'ProblemInstance', 'BreakpointProfile', 'EtaSolution', 'EtaGradient',
    'RecordStatus', 'InstanceDefaults', 'InstanceRecord', 'SolutionRecord',
    'NoiseRecord', 'NormRecord', 'GradientRecord', 'BenchRecord',
]
