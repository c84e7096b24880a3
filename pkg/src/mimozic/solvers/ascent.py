"""Projected gradient ascent with backtracking over a tuple of matrix blocks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class AscentResult:
    x: list
    value: float
    iterations: int
    converged: bool
    step_norm: float


def _inner(G, D):
    return float(sum(np.real(np.vdot(g, d)) for g, d in zip(G, D)))


def _safe(fun, x):
    try:
        v = fun(x)
    except (np.linalg.LinAlgError, ValueError):
        return -np.inf
    return v if np.isfinite(v) else -np.inf


def projected_ascent(fun, grad, project, x0, *, max_iter=5000, tol=1e-9, step0=1.0,
                     xtol=1e-9, max_step=1e6):
    """Maximize a smooth function over a product of convex sets.

    ``fun(x) -> float``, ``grad(x) -> list`` and ``project(x) -> list`` act on
    lists of arrays.  Steps use the sufficient-ascent test

        f(x+) >= f(x) + <g, x+ - x> - ||x+ - x||^2 / (2 t)

    with halving on failure and growth on success.  Terminates when the
    relative objective change drops below ``tol`` and the projected step
    (gradient mapping times ``t``) is below ``xtol``.
    """
    x = [np.array(b, copy=True) for b in project(x0)]
    f = fun(x)
    t = step0
    step_norm = np.inf
    for it in range(1, max_iter + 1):
        g = grad(x)
        while True:
            cand = project([xi + t * gi for xi, gi in zip(x, g)])
            d = [c - xi for c, xi in zip(cand, x)]
            dn2 = _inner(d, d)
            if dn2 == 0.0:
                return AscentResult(x, f, it, True, 0.0)
            f_new = _safe(fun, cand)
            if f_new >= f + _inner(g, d) - dn2 / (2 * t):
                break
            t *= 0.5
            if t < 1e-16:
                return AscentResult(x, f, it, True, 0.0)
        step_norm = np.sqrt(dn2)
        df = f_new - f
        x, f = cand, f_new
        if abs(df) <= tol * max(1.0, abs(f)) and step_norm / t <= max(xtol, np.sqrt(tol)):
            return AscentResult(x, f, it, True, step_norm)
        t = min(t * 2.0, max_step)
    return AscentResult(x, f, max_iter, False, step_norm)
