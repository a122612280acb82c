from .solve_service import SolveService
from .norm_service import NormService
from .gradient_service import GradientService
from .noise_service import NoiseService
from .benchmark_service import BenchmarkService

__all__ = ['SolveService', 'NormService', 'GradientService', 'NoiseService', 'BenchmarkService']
