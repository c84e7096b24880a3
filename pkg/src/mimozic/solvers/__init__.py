"""Constrained log-det optimizers."""

from .config import (
    ACHIEVABLE_LOWER_BOUND,
    CAPACITY_CERTIFIED,
    Certificate,
    ConvergenceError,
    RateRegion,
    SolverConfig,
    SumRateResult,
)
from .single_user import max_logdet, waterfill, waterfill_covariance
from .sumrate import maximize_tin, noisy_sum_capacity
from .minmax import certificate_residual, genie_minmax

__all__ = [
    "ACHIEVABLE_LOWER_BOUND",
    "CAPACITY_CERTIFIED",
    "Certificate",
    "ConvergenceError",
    "RateRegion",
    "SolverConfig",
    "SumRateResult",
    "certificate_residual",
    "genie_minmax",
    "max_logdet",
    "maximize_tin",
    "noisy_sum_capacity",
    "waterfill",
    "waterfill_covariance",
]
