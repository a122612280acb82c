from .clipping import clip, effective_norm, unconstrained_eta, max_effective_norm, perturb
from .solver import build_profile, solve_eta, solve_eta_batch
from .gradient import gradient_eta
from .oracle import naive_effective_norm, solve_eta_bisect

__all__ = [
    'clip', 'effective_norm', 'unconstrained_eta', 'max_effective_norm', 'perturb',
    'build_profile', 'solve_eta', 'solve_eta_batch',
    'gradient_eta',
    'naive_effective_norm', 'solve_eta_bisect',
]
