from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from ..channel import RatePair


class ConvergenceError(RuntimeError):
    """A solver exhausted its iteration budget without meeting tolerance."""


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-9
    max_iter: int = 5000
    restarts: int = 8
    seed: int = 0
    region_points: int = 65
    certificate_tol: float = 1e-6
    # classify() runs the genie min-max certificate only when asked
    request_certificate: bool = False

    def __post_init__(self):
        if not (self.tol > 0 and self.max_iter > 0 and self.restarts >= 1 and self.seed >= 0):
            raise ValueError("solver settings must be positive (restarts >= 1)")
        if self.region_points < 2 or self.certificate_tol <= 0:
            raise ValueError("region_points must be >= 2 and certificate_tol positive")

    def with_overrides(self, **kw) -> "SolverConfig":
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in kw.items() if k in known and v is not None})


CAPACITY_CERTIFIED = "capacity_certified"
ACHIEVABLE_LOWER_BOUND = "achievable_lower_bound"


@dataclass(frozen=True, eq=False)
class Certificate:
    A: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class SumRateResult:
    """Sum rate in nats with its optimizing covariances.

    ``upper_bound`` is only set by the genie min-max solver; ``bound_gap`` is
    ``upper_bound - value`` when known.
    """

    value: float
    S1: np.ndarray
    S2: np.ndarray
    status: str
    bound_gap: Optional[float] = None
    certificate: Optional[Certificate] = None
    upper_bound: Optional[float] = None

    @property
    def certified(self) -> bool:
        return self.status == CAPACITY_CERTIFIED


RECTANGLE = "rectangle"
PENTAGON_UNION = "pentagon_union"


@dataclass(frozen=True)
class RateRegion:
    """Outer boundary of a rate region, ordered by increasing ``r1``."""

    boundary: tuple
    kind: str
    hull: Optional[tuple] = None

    def as_array(self) -> np.ndarray:
        return np.array([tuple(p) for p in self.boundary], dtype=float).reshape(-1, 2)


def make_pairs(points) -> tuple:
    return tuple(RatePair(float(a), float(b)) for a, b in points)
