"""Parametrized single-user feasible sets with cheap projections.

Each domain maps an optimization variable ``X`` to a covariance ``S``:

* block/per-symbol power: ``X = S`` over ``{S >= 0, tr S <= P}``
* per-antenna power: ``X = S`` over ``{S >= 0, diag S <= p}`` (Dykstra)
* covariance: ``S = L X L^H`` with ``Sbar = L L^H`` and ``0 <= X <= I``,
  which turns the Loewner-interval projection into eigenvalue clipping.
"""

from __future__ import annotations

import numpy as np

from ..channel import UserCovariance, UserPerAntenna, UserTrace
from ..matcore import herm, pinv, project_psd, psd_sqrt_factor, symmetrize

DYKSTRA_MAX_ITER = 200


def _eig_map(X, fn):
    w, V = np.linalg.eigh(symmetrize(X))
    return symmetrize((V * fn(w)) @ herm(V))


def project_capped_simplex(v: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum(x) <= total}``."""
    x = np.maximum(v, 0.0)
    if x.sum() <= total:
        return x
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def _wishart(rng, n, cplx):
    Z = rng.standard_normal((n, n))
    if cplx:
        Z = Z + 1j * rng.standard_normal((n, n))
    return symmetrize(Z @ herm(Z)) / n


class TraceDomain:
    def __init__(self, P: float, dim: int, cplx: bool = False):
        self.P = P
        self.dim = dim
        self.cplx = cplx

    def decode(self, X):
        return X

    def encode(self, S):
        return self.project(S)

    def pullback(self, G):
        return G

    def project(self, X):
        w, V = np.linalg.eigh(symmetrize(X))
        return symmetrize((V * project_capped_simplex(w, self.P)) @ herm(V))

    def boundary(self):
        return np.eye(self.dim) * (self.P / self.dim)

    def random(self, rng):
        W = _wishart(rng, self.dim, self.cplx)
        return W * (self.P * rng.uniform(0.3, 1.0) / np.trace(W).real)


class PerAntennaDomain:
    def __init__(self, p: np.ndarray, cplx: bool = False, max_iter: int = DYKSTRA_MAX_ITER):
        self.p = np.asarray(p, dtype=float)
        self.dim = self.p.size
        self.cplx = cplx
        self.max_iter = max_iter

    def decode(self, X):
        return X

    def encode(self, S):
        return self.project(S)

    def pullback(self, G):
        return G

    def _box(self, X):
        Y = X.copy()
        idx = np.diag_indices(self.dim)
        Y[idx] = np.minimum(np.real(np.diag(X)), self.p)
        return Y

    def project(self, X, tol: float = 1e-13):
        """Dykstra's alternating projections between the PSD cone and the diagonal box."""
        X = symmetrize(X)
        if np.all(np.real(np.diag(X)) <= self.p) and np.linalg.eigvalsh(X)[0] >= 0:
            return X
        x = X
        p = np.zeros_like(X)
        q = np.zeros_like(X)
        for _ in range(self.max_iter):
            y = self._box(x + p)
            p = x + p - y
            x_new = project_psd(y + q)
            q = y + q - x_new
            done = np.linalg.norm(x_new - x) <= tol * max(1.0, np.linalg.norm(x))
            x = x_new
            if done:
                break
        # a truncated run can leave the diagonal slightly over budget; a
        # diagonal congruence restores the box exactly and keeps x PSD
        x = project_psd(x)
        d = np.real(np.diag(x))
        scale = np.sqrt(np.minimum(1.0, self.p / np.maximum(d, 1e-300)))
        return symmetrize(x * np.outer(scale, scale))

    def boundary(self):
        return np.diag(self.p)

    def random(self, rng):
        W = _wishart(rng, self.dim, self.cplx) + 1e-3 * np.eye(self.dim)
        d = np.sqrt(np.real(np.diag(W)))
        C = W / np.outer(d, d)
        s = np.sqrt(self.p * rng.uniform(0.3, 1.0, self.dim))
        return symmetrize(C * np.outer(s, s))


class CovarianceDomain:
    def __init__(self, Sbar: np.ndarray, cplx: bool = False):
        self.Sbar = Sbar
        self.L = psd_sqrt_factor(Sbar)
        self.Linv = pinv(self.L)
        self.k = self.L.shape[1]
        self.dim = Sbar.shape[0]
        self.cplx = cplx

    def decode(self, X):
        if self.k == 0:
            return np.zeros((self.dim, self.dim))
        return symmetrize(self.L @ X @ herm(self.L))

    def encode(self, S):
        return self.project(self.Linv @ S @ herm(self.Linv))

    def pullback(self, G):
        return symmetrize(herm(self.L) @ G @ self.L)

    def project(self, X):
        if self.k == 0:
            return X
        return _eig_map(X, lambda w: np.clip(w, 0.0, 1.0))

    def boundary(self):
        return np.eye(self.k)

    def random(self, rng):
        if self.k == 0:
            return np.zeros((0, 0))
        W = _wishart(rng, self.k, self.cplx)
        return W * (rng.uniform(0.3, 1.0) / np.linalg.eigvalsh(W)[-1])


def make_domain(user_set, dim: int, cplx: bool = False):
    """Build the optimization domain for one user's constraint set."""
    if isinstance(user_set, UserCovariance):
        return CovarianceDomain(user_set.Sbar, cplx)
    if isinstance(user_set, UserTrace):
        return TraceDomain(user_set.P, dim, cplx)
    if isinstance(user_set, UserPerAntenna):
        return PerAntennaDomain(user_set.p, cplx)
    raise TypeError(f"unsupported constraint set {type(user_set).__name__}")
