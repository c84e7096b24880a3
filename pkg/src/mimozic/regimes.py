"""Interference regime classification with numeric witnesses.

The existence tests for the contraction ``A`` in ``H2 = A F`` (aligned
strong) and ``F = A^H H2`` (noisy) use the minimum spectral-norm exact
solution.  Any exact solution agrees with it on the relevant range, so the
test ``residual <= tol and ||A0|| <= 1`` decides existence without search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .channel import (
    CovarianceConstraint,
    ZicChannel,
    check_dims,
    rate_sum_joint,
)
from .matcore import TOL_NORM, TOL_RESIDUAL, herm, min_norm_solution, spectral_norm
from .solvers.config import SolverConfig
from .solvers.single_user import max_logdet


class VeryStrongCheck(NamedTuple):
    holds: bool
    lhs: float
    rhs: float
    S1: np.ndarray
    S2: np.ndarray


class FactorCheck(NamedTuple):
    holds: bool
    A: np.ndarray
    residual: float
    norm: float


class RelaxedCheck(NamedTuple):
    holds: bool
    A: np.ndarray
    B: np.ndarray
    residual: float
    norm: float


def check_very_strong(ch: ZicChannel, P, cfg: SolverConfig | None = None) -> VeryStrongCheck:
    """Whether interference can be decoded first at no rate cost.

    Each user's single-user optimal covariance is found on its own; the check
    compares the joint-decoding rate at receiver 1 against the sum of the two
    interference-free rates.  Ties count as very strong.
    """
    cfg = cfg or SolverConfig()
    check_dims(ch, P)
    S1, r1 = max_logdet(ch.H1, P.user(1, ch.t1), cfg)
    S2, r2 = max_logdet(ch.H2, P.user(2, ch.t2), cfg)
    lhs = rate_sum_joint(ch, S1, S2)
    rhs = r1 + r2
    holds = lhs >= rhs - cfg.tol * max(1.0, abs(rhs))
    return VeryStrongCheck(bool(holds), lhs, rhs, S1, S2)


def _decide(A, residual):
    norm = spectral_norm(A)
    return bool(residual <= TOL_RESIDUAL and norm <= 1.0 + TOL_NORM), norm


def check_aligned_strong(ch: ZicChannel) -> FactorCheck:
    """Is ``H2 = A F`` for some contraction ``A``?"""
    A, residual = min_norm_solution(ch.F, ch.H2, "left_factor")
    holds, norm = _decide(A, residual)
    return FactorCheck(holds, A, residual, norm)


def check_aligned_strong_relaxed(ch: ZicChannel, S2bar) -> RelaxedCheck:
    """Relaxed aligned-strong test under a covariance bound on user 2.

    Looks for ``H2 = A F + B`` with ``||A|| <= 1`` and ``Sbar2 B^H = 0``,
    i.e. ``A (F Sbar2) = H2 Sbar2``.
    """
    S2bar = np.asarray(S2bar)
    A, residual = min_norm_solution(ch.F @ S2bar, ch.H2 @ S2bar, "left_factor")
    holds, norm = _decide(A, residual)
    return RelaxedCheck(holds, A, ch.H2 - A @ ch.F, residual, norm)


def check_noisy(ch: ZicChannel) -> FactorCheck:
    """Is ``F = A^H H2`` for some contraction ``A``?  Returns ``A`` (not ``A^H``)."""
    Ah, residual = min_norm_solution(ch.H2, ch.F, "left_factor")
    holds, norm = _decide(Ah, residual)
    return FactorCheck(holds, herm(Ah), residual, norm)


def check_noisy_relaxed(ch: ZicChannel, S2bar) -> RelaxedCheck:
    """Relaxed noisy test: ``F = A^H H2 + B`` with ``||A|| <= 1``, ``Sbar2 B^H = 0``."""
    S2bar = np.asarray(S2bar)
    Ah, residual = min_norm_solution(ch.H2 @ S2bar, ch.F @ S2bar, "left_factor")
    holds, norm = _decide(Ah, residual)
    return RelaxedCheck(holds, herm(Ah), ch.F - Ah @ ch.H2, residual, norm)


@dataclass(frozen=True, eq=False)
class GenieCertificate:
    A: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    residual: float
    certified: bool
    value: float
    upper_bound: float


@dataclass(frozen=True, eq=False)
class RegimeReport:
    very_strong: VeryStrongCheck
    aligned_strong: FactorCheck
    noisy: FactorCheck
    aligned_strong_relaxed: Optional[RelaxedCheck] = None
    noisy_relaxed: Optional[RelaxedCheck] = None
    genie_certificate: Optional[GenieCertificate] = None

    @property
    def region_applies(self) -> bool:
        return (
            self.very_strong.holds
            or self.aligned_strong.holds
            or bool(self.aligned_strong_relaxed and self.aligned_strong_relaxed.holds)
        )


def classify(ch: ZicChannel, P, cfg: SolverConfig | None = None) -> RegimeReport:
    """Run every applicable regime test.

    Relaxed tests run only for covariance constraints.  The genie min-max
    certificate is computed only when ``cfg.request_certificate`` is set.
    """
    from .solvers.minmax import genie_minmax

    cfg = cfg or SolverConfig()
    check_dims(ch, P)
    relaxed_as = relaxed_noisy = None
    if isinstance(P, CovarianceConstraint):
        relaxed_as = check_aligned_strong_relaxed(ch, P.S2)
        relaxed_noisy = check_noisy_relaxed(ch, P.S2)
    cert = None
    if cfg.request_certificate:
        res = genie_minmax(ch, P, cfg)
        cert = GenieCertificate(
            A=res.certificate.A,
            S1=res.S1,
            S2=res.S2,
            residual=res.certificate.residual,
            certified=res.certified,
            value=res.value,
            upper_bound=res.upper_bound,
        )
    return RegimeReport(
        very_strong=check_very_strong(ch, P, cfg),
        aligned_strong=check_aligned_strong(ch),
        noisy=check_noisy(ch),
        aligned_strong_relaxed=relaxed_as,
        noisy_relaxed=relaxed_noisy,
        genie_certificate=cert,
    )
