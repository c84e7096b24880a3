from __future__ import annotations

import numpy as np

from ..channel import UserCovariance, UserPerAntenna, UserTrace, gain_logdet, grad_gain_logdet
from ..matcore import herm, symmetrize
from .ascent import projected_ascent
from .config import ConvergenceError, SolverConfig
from .domains import make_domain


def waterfill(gains: np.ndarray, total: float, iters: int = 200):
    """Water-filling powers over parallel channels with power ``gains``.

    The water level is bracketed and bisected, then recomputed exactly from
    the resulting active set so that every active mode satisfies
    ``p_k + 1/g_k == mu``.

    Returns
    -------
    (powers, mu)
    """
    gains = np.asarray(gains, dtype=float)
    powers = np.zeros_like(gains)
    pos = gains > 0
    if total <= 0 or not np.any(pos):
        return powers, 0.0
    inv = 1.0 / gains[pos]
    lo, hi = 0.0, total + inv.max()
    for _ in range(iters):
        mu = 0.5 * (lo + hi)
        if np.maximum(mu - inv, 0.0).sum() > total:
            hi = mu
        else:
            lo = mu
        if hi - lo <= 1e-15 * hi:
            break
    active = inv < 0.5 * (lo + hi)
    mu = (total + inv[active].sum()) / active.sum()
    p = np.where(active, mu - inv, 0.0)
    powers[pos] = np.maximum(p, 0.0)
    return powers, float(mu)


def waterfill_covariance(H: np.ndarray, total: float):
    """Capacity-achieving covariance for ``log|I + H S H^H|`` with ``tr S <= total``."""
    t = H.shape[1]
    _, s, Vh = np.linalg.svd(H, full_matrices=True)
    gains = np.zeros(t)
    gains[: s.size] = s**2
    gains[gains <= 1e-14 * max(1.0, gains.max(initial=0.0))] = 0.0
    p, mu = waterfill(gains, total)
    V = herm(Vh)
    return symmetrize((V * p) @ herm(V)), mu


def max_logdet(H: np.ndarray, user_set, cfg: SolverConfig | None = None):
    """Maximize ``log|I + H S H^H|`` over one user's feasible set.

    Returns
    -------
    (S, value)
    """
    cfg = cfg or SolverConfig()
    H = np.asarray(H)
    if isinstance(user_set, UserCovariance):
        # log-det is Loewner-monotone, so the bound itself is optimal
        S = np.array(user_set.Sbar)
    elif isinstance(user_set, UserTrace):
        S, _ = waterfill_covariance(H, user_set.P)
    elif isinstance(user_set, UserPerAntenna):
        dom = make_domain(user_set, H.shape[1], np.iscomplexobj(H))
        res = projected_ascent(
            lambda x: gain_logdet(H, x[0]),
            lambda x: [grad_gain_logdet(H, x[0])],
            lambda x: [dom.project(x[0])],
            [dom.boundary()],
            max_iter=cfg.max_iter,
            tol=cfg.tol,
        )
        if not res.converged:
            raise ConvergenceError("per-antenna log-det ascent did not converge")
        S = res.x[0]
    else:
        raise TypeError(f"unsupported constraint set {type(user_set).__name__}")
    return S, gain_logdet(H, S)
