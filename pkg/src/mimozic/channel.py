"""Channel model, power constraints and Gaussian rate expressions.

The Z-interference channel is

    y1 = H1 x1 + F x2 + z1
    y2 = H2 x2 + z2

with unit-covariance circularly symmetric noise.  All rates are in nats.
Constraints are stated on the per-use input covariances ``S1, S2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .matcore import (
    DimensionError,
    TOL_PSD,
    as_matrix,
    as_psd,
    herm,
    is_psd,
    loewner_leq,
    logdet,
    symmetrize,
)


def _frozen(M: np.ndarray) -> np.ndarray:
    M.setflags(write=False)
    return M


@dataclass(frozen=True)
class ZicChannel:
    """Channel matrices ``(H1, F, H2)``; antenna counts are derived."""

    H1: np.ndarray
    F: np.ndarray
    H2: np.ndarray

    def __post_init__(self):
        H1, F, H2 = (as_matrix(M) for M in (self.H1, self.F, self.H2))
        if F.shape[0] != H1.shape[0]:
            raise DimensionError(
                f"F has {F.shape[0]} rows but H1 has {H1.shape[0]} (both feed receiver 1)"
            )
        if F.shape[1] != H2.shape[1]:
            raise DimensionError(
                f"F has {F.shape[1]} columns but H2 has {H2.shape[1]} (both driven by transmitter 2)"
            )
        object.__setattr__(self, "H1", _frozen(H1))
        object.__setattr__(self, "F", _frozen(F))
        object.__setattr__(self, "H2", _frozen(H2))

    @property
    def t1(self) -> int:
        return self.H1.shape[1]

    @property
    def t2(self) -> int:
        return self.H2.shape[1]

    @property
    def r1(self) -> int:
        return self.H1.shape[0]

    @property
    def r2(self) -> int:
        return self.H2.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ZicChannel):
            return NotImplemented
        return all(
            a.shape == b.shape and np.array_equal(a, b)
            for a, b in zip((self.H1, self.F, self.H2), (other.H1, other.F, other.H2))
        )

    __hash__ = None


# ---------------------------------------------------------------------------
# power constraints


@dataclass(frozen=True, eq=False)
class CovarianceConstraint:
    """``S_i <= Sbar_i`` in the Loewner order."""

    S1: np.ndarray
    S2: np.ndarray
    kind = "covariance"

    def __post_init__(self):
        object.__setattr__(self, "S1", _frozen(as_psd(self.S1)))
        object.__setattr__(self, "S2", _frozen(as_psd(self.S2)))

    def user(self, i: int, dim: int | None = None) -> "UserCovariance":
        return UserCovariance(self.S1 if i == 1 else self.S2)

    def dims(self):
        return self.S1.shape[0], self.S2.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, CovarianceConstraint)
            and np.array_equal(self.S1, other.S1)
            and np.array_equal(self.S2, other.S2)
        )


@dataclass(frozen=True)
class TotalPowerConstraint:
    """Block power: ``tr(S_i) <= P_i``."""

    P1: float
    P2: float
    kind = "total_power"

    def __post_init__(self):
        _check_power(self.P1, self.P2)

    def user(self, i: int, dim: int | None = None) -> "UserTrace":
        return UserTrace(float(self.P1 if i == 1 else self.P2), dim)

    def dims(self):
        return None


@dataclass(frozen=True)
class PerSymbolPowerConstraint(TotalPowerConstraint):
    """Per-symbol power; identical to block power on per-use covariances."""

    kind = "per_symbol_power"


@dataclass(frozen=True, eq=False)
class PerAntennaPowerConstraint:
    """Per-antenna block power: ``(S_i)_kk <= p_ik``."""

    p1: tuple
    p2: tuple
    kind = "per_antenna_power"

    def __post_init__(self):
        p1 = tuple(float(v) for v in np.ravel(self.p1))
        p2 = tuple(float(v) for v in np.ravel(self.p2))
        _check_power(*p1, *p2)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    def user(self, i: int, dim: int | None = None) -> "UserPerAntenna":
        return UserPerAntenna(np.array(self.p1 if i == 1 else self.p2))

    def dims(self):
        return len(self.p1), len(self.p2)

    def __eq__(self, other):
        return isinstance(other, PerAntennaPowerConstraint) and (self.p1, self.p2) == (other.p1, other.p2)


PowerConstraint = Union[
    CovarianceConstraint, TotalPowerConstraint, PerSymbolPowerConstraint, PerAntennaPowerConstraint
]


def _check_power(*values):
    for v in values:
        if not np.isfinite(v) or v < 0:
            raise ValueError(f"power budgets must be finite and non-negative, got {v}")


# Single-user feasible sets.  The solvers attach projections to these.


@dataclass(frozen=True, eq=False)
class UserCovariance:
    Sbar: np.ndarray

    @property
    def dim(self):
        return self.Sbar.shape[0]

    def contains(self, S, tol=TOL_PSD):
        return is_psd(S, tol) and loewner_leq(S, self.Sbar, tol)


@dataclass(frozen=True)
class UserTrace:
    P: float
    dim: int | None = None

    def contains(self, S, tol=TOL_PSD):
        return is_psd(S, tol) and np.trace(S).real <= self.P + tol * max(1.0, self.P)


@dataclass(frozen=True, eq=False)
class UserPerAntenna:
    p: np.ndarray

    @property
    def dim(self):
        return self.p.size

    def contains(self, S, tol=TOL_PSD):
        d = np.real(np.diag(S))
        return is_psd(S, tol) and bool(np.all(d <= self.p + tol * np.maximum(1.0, self.p)))


def check_dims(ch: ZicChannel, P: PowerConstraint) -> None:
    """Raise :class:`DimensionError` if the constraint does not fit the channel."""
    dims = P.dims()
    if dims is not None and dims != (ch.t1, ch.t2):
        raise DimensionError(
            f"constraint is sized for ({dims[0]}, {dims[1]}) transmit antennas, "
            f"channel has ({ch.t1}, {ch.t2})"
        )


def feasible(P: PowerConstraint, S1, S2, tol: float = TOL_PSD) -> bool:
    """Whether the covariance pair satisfies the constraint within ``tol``."""
    S1 = np.asarray(S1)
    S2 = np.asarray(S2)
    dims = P.dims()
    if dims is not None and (S1.shape[0], S2.shape[0]) != dims:
        raise DimensionError(f"covariance sizes {S1.shape}, {S2.shape} do not match constraint")
    return P.user(1).contains(S1, tol) and P.user(2).contains(S2, tol)


class RatePair(NamedTuple):
    r1: float
    r2: float


# ---------------------------------------------------------------------------
# rates (nats)


def _eye(n):
    return np.eye(n)


def gain_logdet(H: np.ndarray, S: np.ndarray) -> float:
    """``log|I + H S H^H|``."""
    return logdet(_eye(H.shape[0]) + H @ S @ herm(H))


def rate_r1_single(ch: ZicChannel, S1) -> float:
    """Interference-free rate of user 1."""
    return gain_logdet(ch.H1, S1)


def rate_r2(ch: ZicChannel, S2) -> float:
    """``log|I + H2 S2 H2^H|``."""
    return gain_logdet(ch.H2, S2)


def rate_sum_joint(ch: ZicChannel, S1, S2) -> float:
    """``log|I + H1 S1 H1^H + F S2 F^H|``: joint decoding at receiver 1."""
    M = _eye(ch.r1) + ch.H1 @ S1 @ herm(ch.H1) + ch.F @ S2 @ herm(ch.F)
    return logdet(M)


def rate_r1_tin(ch: ZicChannel, S1, S2) -> float:
    """User-1 rate when the interference ``F x2`` is treated as noise."""
    K = _eye(ch.r1) + ch.F @ S2 @ herm(ch.F)
    return logdet(K + ch.H1 @ S1 @ herm(ch.H1)) - logdet(K)


def tin_sum_rate(ch: ZicChannel, S1, S2) -> float:
    return rate_r1_tin(ch, S1, S2) + rate_r2(ch, S2)


def _genie_schur(ch: ZicChannel, S2, A):
    K = _eye(ch.r1) + ch.F @ S2 @ herm(ch.F)
    B = ch.H2 @ S2 @ herm(ch.F) + A
    Kinv_Bh = np.linalg.solve(K, herm(B))
    schur = _eye(ch.r2) + ch.H2 @ S2 @ herm(ch.H2) - B @ Kinv_Bh
    return symmetrize(schur), K, B


def rate_r2_genie(ch: ZicChannel, S2, A) -> float:
    """Genie-aided user-2 term of the min-max sum-rate bound.

    Equals ``h(H2 x2 + z2 | F x2 + n) - h(z2 | n)`` for Gaussian ``x2`` with
    covariance ``S2`` and side noise ``n`` correlated with ``z2`` through
    ``E[z2 n^H] = A``::

        log|I + H2 S2 H2^H - (H2 S2 F^H + A)(I + F S2 F^H)^-1 (...)^H|
            - log|I - A A^H|

    Raises
    ------
    ValueError
        If ``||A|| >= 1`` numerically (the noise coupling does not exist).
    """
    A = np.asarray(A)
    if A.shape != (ch.r2, ch.r1):
        raise DimensionError(f"A must be {ch.r2}x{ch.r1}, got {A.shape}")
    try:
        noise_term = logdet(_eye(ch.r2) - A @ herm(A))
        schur, _, _ = _genie_schur(ch, S2, A)
        return logdet(schur) - noise_term
    except np.linalg.LinAlgError as exc:
        raise ValueError("genie covariance is not positive definite; ||A|| must be < 1") from exc


def genie_bound(ch: ZicChannel, S1, S2, A) -> float:
    """Objective of the min-max sum-rate bound."""
    return rate_sum_joint(ch, S1, S2) + rate_r2_genie(ch, S2, A)


# ---------------------------------------------------------------------------
# gradients; Hermitian for covariances, Re-tr inner product for A


def grad_gain_logdet(H: np.ndarray, S) -> np.ndarray:
    M = _eye(H.shape[0]) + H @ S @ herm(H)
    return symmetrize(herm(H) @ np.linalg.solve(M, H))


def grad_sum_joint(ch: ZicChannel, S1, S2):
    M = _eye(ch.r1) + ch.H1 @ S1 @ herm(ch.H1) + ch.F @ S2 @ herm(ch.F)
    G1 = symmetrize(herm(ch.H1) @ np.linalg.solve(M, ch.H1))
    G2 = symmetrize(herm(ch.F) @ np.linalg.solve(M, ch.F))
    return G1, G2


def grad_interference_logdet(ch: ZicChannel, S2) -> np.ndarray:
    """Gradient of ``log|I + F S2 F^H|``."""
    return grad_gain_logdet(ch.F, S2)


def grad_r1_tin(ch: ZicChannel, S1, S2):
    G1, G2 = grad_sum_joint(ch, S1, S2)
    return G1, G2 - grad_interference_logdet(ch, S2)


def grad_r2_genie(ch: ZicChannel, S2, A):
    """Gradients of :func:`rate_r2_genie` with respect to ``S2`` and ``A``."""
    A = np.asarray(A)
    G = np.vstack([ch.H2, ch.F])
    J = G @ S2 @ herm(G)
    J[: ch.r2, : ch.r2] += _eye(ch.r2)
    J[ch.r2 :, ch.r2 :] += _eye(ch.r1)
    J[: ch.r2, ch.r2 :] += A
    J[ch.r2 :, : ch.r2] += herm(A)
    Jinv = np.linalg.inv(symmetrize(J))
    gS = symmetrize(herm(G) @ Jinv @ G) - grad_interference_logdet(ch, S2)
    N = _eye(ch.r2) - A @ herm(A)
    gA = 2.0 * Jinv[: ch.r2, ch.r2 :] + 2.0 * np.linalg.solve(N, A)
    return gS, gA
