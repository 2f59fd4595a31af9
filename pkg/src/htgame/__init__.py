"""Two-period team production game with model disagreement."""

from .evaluate import expected_team_output, team_output
from .game import GameConfig, NonConvergence, solve_equilibrium
from .kernels import BACKEND
from .payoffs import PayoffSpec
from .views import AdditiveNoise, DiscreteBandit, DomainError, InverseInfoLinear, TrueProcess, UniformLinear

__version__ = "0.1.0"

__all__ = [
    "AdditiveNoise", "BACKEND", "DiscreteBandit", "DomainError", "GameConfig", "InverseInfoLinear",
    "NonConvergence", "PayoffSpec", "TrueProcess", "UniformLinear", "expected_team_output",
    "solve_equilibrium", "team_output",
]
