"""Genie-aided min-max sum-rate bound and its TIN certificate.

For any coupling matrix ``A`` with ``||A|| < 1`` the value

    phi(A) = max_{(S1, S2) feasible}  log|I + H1 S1 H1^H + F S2 F^H|
                                      + rate_r2_genie(S2, A)

upper-bounds the sum capacity.  If the inner maximizer satisfies
``S2 F^H = S2 H2^H A`` the bound collapses to the TIN sum rate at that
maximizer, which is then the sum capacity.  The outer minimization is run by
projected gradient descent on ``A`` (Danskin gradient, iterate averaging) and
followed by a closed-form alignment step that solves the certificate
equation for ``A`` at the current ``S2``.
"""

from __future__ import annotations

import numpy as np

from ..channel import (
    ZicChannel,
    genie_bound,
    grad_r2_genie,
    grad_sum_joint,
    tin_sum_rate,
)
from ..matcore import herm, min_norm_solution, project_spectral_ball, spectral_norm
from .ascent import projected_ascent
from .config import (
    ACHIEVABLE_LOWER_BOUND,
    CAPACITY_CERTIFIED,
    Certificate,
    ConvergenceError,
    SolverConfig,
    SumRateResult,
)
from .sumrate import maximize_tin, user_domains

# keeps A strictly inside the unit ball where the bound is finite
BALL_RADIUS = 1.0 - 1e-9
OUTER_ITER = 200
ALIGN_ROUNDS = 5


def certificate_residual(ch: ZicChannel, S2, A) -> float:
    """Relative Frobenius residual of ``S2 F^H = S2 H2^H A``."""
    lhs = S2 @ herm(ch.F)
    R = lhs - S2 @ herm(ch.H2) @ A
    return float(np.linalg.norm(R) / max(1.0, np.linalg.norm(lhs)))


class _Inner:
    """Warm-started inner maximization over the feasible covariances."""

    def __init__(self, ch, P, cfg):
        self.ch = ch
        self.cfg = cfg
        self.d1, self.d2 = user_domains(ch, P)
        self.x = [self.d1.boundary(), self.d2.boundary()]

    def decode(self, x):
        return self.d1.decode(x[0]), self.d2.decode(x[1])

    def solve(self, A, x0=None):
        ch = self.ch
        d1, d2 = self.d1, self.d2

        def fun(x):
            return genie_bound(ch, *self.decode(x), A)

        def grad(x):
            S1, S2 = self.decode(x)
            g1, g2 = grad_sum_joint(ch, S1, S2)
            gS, _ = grad_r2_genie(ch, S2, A)
            return [d1.pullback(g1), d2.pullback(g2 + gS)]

        def project(x):
            return [d1.project(x[0]), d2.project(x[1])]

        res = projected_ascent(fun, grad, project, x0 if x0 is not None else self.x,
                               max_iter=self.cfg.max_iter, tol=self.cfg.tol)
        if not res.converged:
            raise ConvergenceError("inner maximization of the genie bound did not converge")
        self.x = res.x
        S1, S2 = self.decode(res.x)
        return res.value, S1, S2


def _phi_grad(ch, S2, A):
    return grad_r2_genie(ch, S2, A)[1]


def _initial_couplings(ch):
    from ..regimes import check_noisy

    cands = [np.zeros((ch.r2, ch.r1), dtype=np.result_type(ch.H2, ch.F))]
    noisy = check_noisy(ch)
    if noisy.residual <= 1e-8:
        cands.insert(0, project_spectral_ball(noisy.A, BALL_RADIUS))
    return cands


def _align(ch, S2):
    """Minimum-norm ``A`` solving ``A^H (H2 S2) = F S2``, or ``None`` if not a contraction."""
    Ah, _ = min_norm_solution(ch.H2 @ S2, ch.F @ S2, "left_factor")
    A = herm(Ah)
    if spectral_norm(A) >= BALL_RADIUS:
        return None
    return A


def genie_minmax(ch: ZicChannel, P, cfg: SolverConfig | None = None) -> SumRateResult:
    """Solve the genie-aided min-max bound and test the TIN certificate.

    Returns a ``capacity_certified`` result (value = TIN sum rate at the
    inner maximizer) when the certificate residual is within
    ``cfg.certificate_tol``.  Otherwise the best TIN rate found is returned as
    an achievable lower bound with ``upper_bound`` and ``bound_gap`` set.
    """
    cfg = cfg or SolverConfig()
    inner = _Inner(ch, P, cfg)
    evaluated = []  # (phi, A, S1, S2)

    def evaluate(A, x0=None):
        phi, S1, S2 = inner.solve(A, x0)
        evaluated.append((phi, A, S1, S2))
        return phi, S1, S2

    def try_certificate():
        for phi, A, S1, S2 in evaluated:
            if certificate_residual(ch, S2, A) <= cfg.certificate_tol:
                return phi, A, S1, S2
        return None

    # start from the best of the simple candidates
    starts = []
    for A0 in _initial_couplings(ch):
        starts.append((evaluate(A0, [inner.d1.boundary(), inner.d2.boundary()]), A0))
    (phi, S1, S2), A = min(starts, key=lambda s: s[0][0])
    x_best = list(inner.x)

    for _ in range(ALIGN_ROUNDS):
        if try_certificate():
            break
        A_al = _align(ch, S2)
        if A_al is None:
            break
        phi_al, S1_al, S2_al = evaluate(A_al, x_best)
        if phi_al > phi + 1e-12:
            break
        phi, S1, S2, A, x_best = phi_al, S1_al, S2_al, A_al, list(inner.x)

    if try_certificate() is None:
        phi, A, S1, S2 = _descend(ch, inner, evaluate, phi, A, S1, S2, cfg)
        for _ in range(ALIGN_ROUNDS):
            if try_certificate():
                break
            A_al = _align(ch, S2)
            if A_al is None:
                break
            phi_al, S1_al, S2_al = evaluate(A_al)
            if phi_al > phi + 1e-12:
                break
            phi, S1, S2, A = phi_al, S1_al, S2_al, A_al

    hit = try_certificate()
    if hit is not None:
        phi, A, S1, S2 = hit
        value = tin_sum_rate(ch, S1, S2)
        res = certificate_residual(ch, S2, A)
        return SumRateResult(
            value=max(value, 0.0), S1=S1, S2=S2, status=CAPACITY_CERTIFIED,
            bound_gap=phi - value, certificate=Certificate(A, res), upper_bound=phi,
        )

    phi, A, S1, S2 = min(evaluated, key=lambda e: e[0])
    lower = tin_sum_rate(ch, S1, S2)
    T1, T2, tin = maximize_tin(ch, P, cfg)
    if tin > lower:
        S1, S2, lower = T1, T2, tin
    return SumRateResult(
        value=max(lower, 0.0), S1=S1, S2=S2, status=ACHIEVABLE_LOWER_BOUND,
        bound_gap=phi - lower, certificate=Certificate(A, certificate_residual(ch, S2, A)),
        upper_bound=phi,
    )


def _descend(ch, inner, evaluate, phi, A, S1, S2, cfg):
    """Projected gradient descent on the upper bound with iterate averaging."""
    best = (phi, A, S1, S2)
    t = 0.5
    A_sum = np.zeros_like(A, dtype=np.result_type(A, float))
    count = 0
    for _ in range(OUTER_ITER):
        g = _phi_grad(ch, S2, A)
        while True:
            A_new = project_spectral_ball(A - t * g, BALL_RADIUS)
            try:
                phi_new, S1_new, S2_new = evaluate(A_new, list(inner.x))
            except (ValueError, np.linalg.LinAlgError):
                phi_new = np.inf
            if phi_new <= phi - 1e-4 * np.real(np.vdot(g, A - A_new)):
                break
            t *= 0.5
            if t < 1e-12:
                break
        if t < 1e-12:
            break
        dphi = phi - phi_new
        A, phi, S1, S2 = A_new, phi_new, S1_new, S2_new
        A_sum = A_sum + A
        count += 1
        if phi < best[0]:
            best = (phi, A, S1, S2)
        if dphi <= cfg.tol * max(1.0, abs(phi)):
            break
        t = min(2.0 * t, 10.0)
    if count:
        A_avg = project_spectral_ball(A_sum / count, BALL_RADIUS)
        phi_avg, S1_avg, S2_avg = evaluate(A_avg)
        if phi_avg < best[0]:
            best = (phi_avg, A_avg, S1_avg, S2_avg)
    return best
