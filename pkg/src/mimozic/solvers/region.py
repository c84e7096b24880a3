"""Capacity-region boundaries.

The pentagon union is traced by maximizing ``lam R1 + (1 - lam) R2``.  For a
fixed covariance pair the best pentagon corner gives

    lam >= 1/2:  lam a + (1 - lam) min(b, c - a)
    lam <  1/2:  (1 - lam) b + lam min(a, c - b)

with ``a, b`` the single-user rates and ``c`` the joint-decoding sum bound.
Both are minima of two concave functions.  Writing ``min(u, v)`` as
``min_theta theta u + (1 - theta) v`` and swapping max and min turns each
weight into a 1-D convex problem in ``theta`` whose evaluations are smooth
concave maximizations; ``theta`` is found by bisection on ``u - v``.
"""

from __future__ import annotations

import numpy as np

from ..channel import (
    ZicChannel,
    gain_logdet,
    grad_gain_logdet,
    grad_sum_joint,
    rate_sum_joint,
)
from .ascent import projected_ascent
from .config import (
    PENTAGON_UNION,
    RECTANGLE,
    ConvergenceError,
    RateRegion,
    SolverConfig,
    make_pairs,
)
from .single_user import max_logdet
from .sumrate import user_domains

THETA_BISECTIONS = 40
MERGE_TOL = 1e-9


class RegionPreconditionError(ValueError):
    """The requested region characterization does not apply to this channel."""


def region_very_strong(ch: ZicChannel, P, cfg: SolverConfig | None = None) -> RateRegion:
    """Interference-free rectangle; requires the very strong interference test to pass."""
    from ..regimes import check_very_strong

    cfg = cfg or SolverConfig()
    vs = check_very_strong(ch, P, cfg)
    if not vs.holds:
        raise RegionPreconditionError("channel does not have very strong interference")
    R1 = max(gain_logdet(ch.H1, vs.S1), 0.0)
    R2 = max(gain_logdet(ch.H2, vs.S2), 0.0)
    pts = [(0.0, R2), (R1, R2), (R1, 0.0)]
    return RateRegion(_clean(pts), RECTANGLE)


def _corner_terms(ch, S1, S2):
    a = gain_logdet(ch.H1, S1)
    b = gain_logdet(ch.H2, S2)
    c = rate_sum_joint(ch, S1, S2)
    return a, b, c


class _Tracer:
    def __init__(self, ch, P, cfg):
        self.ch = ch
        self.cfg = cfg
        self.d1, self.d2 = user_domains(ch, P)
        self.x = [self.d1.boundary(), self.d2.boundary()]

    def decode(self, x):
        return self.d1.decode(x[0]), self.d2.decode(x[1])

    def maximize(self, wa, wb, wc, x0=None):
        """Maximize ``wa a + wb b + wc c`` (all weights >= 0)."""
        ch, d1, d2 = self.ch, self.d1, self.d2

        def fun(x):
            a, b, c = _corner_terms(ch, *self.decode(x))
            return wa * a + wb * b + wc * c

        def grad(x):
            S1, S2 = self.decode(x)
            g1, g2 = grad_sum_joint(ch, S1, S2)
            G1 = wa * grad_gain_logdet(ch.H1, S1) + wc * g1
            G2 = wb * grad_gain_logdet(ch.H2, S2) + wc * g2
            return [d1.pullback(G1), d2.pullback(G2)]

        def project(x):
            return [d1.project(x[0]), d2.project(x[1])]

        res = projected_ascent(fun, grad, project, x0 if x0 is not None else self.x,
                               max_iter=self.cfg.max_iter, tol=self.cfg.tol)
        if not res.converged:
            raise ConvergenceError("weighted pentagon ascent did not converge")
        self.x = res.x
        return self.decode(res.x)

    def weighted_point(self, lam):
        """Boundary point maximizing ``lam R1 + (1 - lam) R2``; returns ``(R1, R2, S1, S2)``."""
        mu = 1.0 - lam
        if lam >= 0.5:
            # u = lam a + mu b, v = lam a + mu (c - a)
            def weights(th):
                return lam - mu * (1 - th), mu * th, mu * (1 - th)

            def gap(a, b, c):
                return b - (c - a)
        else:
            # u = mu b + lam a, v = mu b + lam (c - b)
            def weights(th):
                return lam * th, mu - lam * (1 - th), lam * (1 - th)

            def gap(a, b, c):
                return a - (c - b)

        # dual in theta is convex; its derivative is u - v at the maximizer
        lo, hi = 0.0, 1.0
        start = [np.array(v) for v in self.x]
        S1, S2 = self.maximize(*weights(1.0), [np.array(v) for v in start])
        if gap(*_corner_terms(self.ch, S1, S2)) <= 0:
            sol = (S1, S2)
        else:
            S1, S2 = self.maximize(*weights(0.0), [np.array(v) for v in start])
            if gap(*_corner_terms(self.ch, S1, S2)) >= 0:
                sol = (S1, S2)
            else:
                for _ in range(THETA_BISECTIONS):
                    th = 0.5 * (lo + hi)
                    S1, S2 = self.maximize(*weights(th))
                    if gap(*_corner_terms(self.ch, S1, S2)) > 0:
                        hi = th
                    else:
                        lo = th
                sol = (S1, S2)
        S1, S2 = sol
        a, b, c = _corner_terms(self.ch, S1, S2)
        if lam >= 0.5:
            R1, R2 = a, min(b, c - a)
        else:
            R2, R1 = b, min(a, c - b)
        return max(R1, 0.0), max(R2, 0.0), S1, S2


def trace_pentagon_union(ch: ZicChannel, P, cfg: SolverConfig | None = None, lambdas=None):
    """Trace the union of pentagons; returns ``(points, covariances)``.

    ``points[k]`` is the optimizing corner for ``lambdas[k]`` and
    ``covariances[k]`` the ``(S1, S2)`` that attains it.
    """
    cfg = cfg or SolverConfig()
    if lambdas is None:
        lambdas = np.linspace(0.0, 1.0, cfg.region_points)
    tr = _Tracer(ch, P, cfg)
    pts, covs = [], []
    for lam in lambdas:
        if lam == 1.0:
            # lexicographic endpoint: max R1 first, then best R2 with S1 fixed
            S1, _ = max_logdet(ch.H1, P.user(1, ch.t1), cfg)
            R1, R2, _, S2 = _fixed_user1_point(ch, P, cfg, S1)
            pts.append((R1, R2))
            covs.append((S1, S2))
            continue
        if lam == 0.0:
            S2, b = max_logdet(ch.H2, P.user(2, ch.t2), cfg)
            R1, S1 = _fixed_user2_point(ch, P, cfg, S2)
            pts.append((R1, b))
            covs.append((S1, S2))
            continue
        R1, R2, S1, S2 = tr.weighted_point(float(lam))
        pts.append((R1, R2))
        covs.append((S1, S2))
    return pts, covs


def _fixed_user1_point(ch, P, cfg, S1):
    """With ``S1`` fixed, maximize ``min(b, c - a)`` over ``S2``."""
    a = gain_logdet(ch.H1, S1)
    tr = _Tracer(ch, P, cfg)
    d2 = tr.d2

    def fixed(th):
        def fun(x):
            S2 = d2.decode(x[0])
            return th * gain_logdet(ch.H2, S2) + (1 - th) * rate_sum_joint(ch, S1, S2)

        def grad(x):
            S2 = d2.decode(x[0])
            G = th * grad_gain_logdet(ch.H2, S2) + (1 - th) * grad_sum_joint(ch, S1, S2)[1]
            return [d2.pullback(G)]

        res = projected_ascent(fun, grad, lambda x: [d2.project(x[0])], [d2.boundary()],
                               max_iter=cfg.max_iter, tol=cfg.tol)
        return d2.decode(res.x[0])

    def gap(S2):
        return gain_logdet(ch.H2, S2) - (rate_sum_joint(ch, S1, S2) - a)

    S2 = fixed(1.0)
    if gap(S2) > 0:
        S2 = fixed(0.0)
        if gap(S2) < 0:
            lo, hi = 0.0, 1.0
            for _ in range(THETA_BISECTIONS):
                th = 0.5 * (lo + hi)
                S2 = fixed(th)
                if gap(S2) > 0:
                    hi = th
                else:
                    lo = th
    b = gain_logdet(ch.H2, S2)
    return a, min(b, rate_sum_joint(ch, S1, S2) - a), S1, S2


def _fixed_user2_point(ch, P, cfg, S2):
    """With ``S2`` fixed, maximize ``min(a, c - b)`` over ``S1``.

    Both terms increase with ``S1`` in the Loewner order, but not jointly, so
    the same theta bisection as above is used.
    """
    b = gain_logdet(ch.H2, S2)
    tr = _Tracer(ch, P, cfg)
    d1 = tr.d1

    def fixed(th):
        def fun(x):
            S1 = d1.decode(x[0])
            return th * gain_logdet(ch.H1, S1) + (1 - th) * rate_sum_joint(ch, S1, S2)

        def grad(x):
            S1 = d1.decode(x[0])
            G = th * grad_gain_logdet(ch.H1, S1) + (1 - th) * grad_sum_joint(ch, S1, S2)[0]
            return [d1.pullback(G)]

        res = projected_ascent(fun, grad, lambda x: [d1.project(x[0])], [d1.boundary()],
                               max_iter=cfg.max_iter, tol=cfg.tol)
        return d1.decode(res.x[0])

    def gap(S1):
        return gain_logdet(ch.H1, S1) - (rate_sum_joint(ch, S1, S2) - b)

    S1 = fixed(1.0)
    if gap(S1) > 0:
        S1 = fixed(0.0)
        if gap(S1) < 0:
            lo, hi = 0.0, 1.0
            for _ in range(THETA_BISECTIONS):
                th = 0.5 * (lo + hi)
                S1 = fixed(th)
                if gap(S1) > 0:
                    hi = th
                else:
                    lo = th
    a = gain_logdet(ch.H1, S1)
    return max(min(a, rate_sum_joint(ch, S1, S2) - b), 0.0), S1


def _clean(points):
    """Sort by R1, drop strictly dominated points, merge near-duplicates."""
    pts = [(float(a), float(b)) for a, b in points]
    keep = [
        p for p in pts
        if not any(q[0] > p[0] + MERGE_TOL and q[1] > p[1] + MERGE_TOL for q in pts)
    ]
    keep.sort(key=lambda p: (p[0], -p[1]))
    out = []
    for p in keep:
        if out and abs(out[-1][0] - p[0]) <= MERGE_TOL and abs(out[-1][1] - p[1]) <= MERGE_TOL:
            continue
        out.append(p)
    return make_pairs(out)


def upper_hull(points):
    """Upper-right concave hull of a monotone boundary (time-sharing closure)."""
    pts = sorted(set((float(a), float(b)) for a, b in points), key=lambda p: (p[0], -p[1]))
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= -1e-12:
                hull.pop()
            else:
                break
        hull.append(p)
    return _clean(hull)


def region_aligned_strong(ch: ZicChannel, P, cfg: SolverConfig | None = None,
                          require_condition: bool = True) -> RateRegion:
    """Boundary of the union of pentagons over the feasible covariances.

    Requires the aligned strong test (exact, or relaxed under a covariance
    constraint) unless ``require_condition`` is False.
    """
    from ..channel import CovarianceConstraint
    from ..regimes import check_aligned_strong, check_aligned_strong_relaxed

    cfg = cfg or SolverConfig()
    if require_condition:
        ok = check_aligned_strong(ch).holds
        if not ok and isinstance(P, CovarianceConstraint):
            ok = check_aligned_strong_relaxed(ch, P.S2).holds
        if not ok:
            raise RegionPreconditionError("channel does not have aligned strong interference")
    pts, _ = trace_pentagon_union(ch, P, cfg)
    r1_max = max(p[0] for p in pts)
    r2_max = max(p[1] for p in pts)
    pts = [(0.0, r2_max)] + list(pts) + [(r1_max, 0.0)]
    boundary = _clean(pts)
    hull = upper_hull(boundary)
    return RateRegion(boundary, PENTAGON_UNION, hull=hull if hull != boundary else None)
