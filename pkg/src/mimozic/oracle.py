"""Closed-form Gaussian information quantities used as independent checks.

Everything here works from covariances only; nothing is sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ZicChannel
from .matcore import herm, is_psd, logdet, pinv, symmetrize


@dataclass(frozen=True, eq=False)
class GaussianJoint:
    """Named blocks of a zero-mean jointly Gaussian vector."""

    cov: np.ndarray
    blocks: dict

    def __post_init__(self):
        if not is_psd(self.cov):
            raise ValueError("joint covariance must be PSD")

    def index(self, names) -> np.ndarray:
        if isinstance(names, str):
            names = [names]
        return np.concatenate([np.arange(*self.blocks[n]) for n in names]) if names else np.array([], int)

    @classmethod
    def linear(cls, sources: dict, outputs: dict):
        """Build a joint from independent sources and linear outputs.

        ``sources`` maps names to covariances; ``outputs`` maps names to
        ``{source_name: matrix}`` mixing maps.  Blocks are laid out sources
        first, in insertion order.
        """
        names = list(sources) + list(outputs)
        dims = [np.asarray(sources[n]).shape[0] for n in sources]
        for n in outputs:
            dims.append(next(iter(outputs[n].values())).shape[0])
        total_src = sum(dims[: len(sources)])
        # rows express every block as a linear map of the stacked sources
        rows = []
        offset = 0
        src_off = {}
        for n in sources:
            d = np.asarray(sources[n]).shape[0]
            src_off[n] = (offset, offset + d)
            offset += d
        cplx = any(np.iscomplexobj(v) for v in sources.values()) or any(
            np.iscomplexobj(M) for o in outputs.values() for M in o.values()
        )
        dtype = complex if cplx else float
        for n in sources:
            lo, hi = src_off[n]
            R = np.zeros((hi - lo, total_src), dtype=dtype)
            R[:, lo:hi] = np.eye(hi - lo)
            rows.append(R)
        for n in outputs:
            d = next(iter(outputs[n].values())).shape[0]
            R = np.zeros((d, total_src), dtype=dtype)
            for s, M in outputs[n].items():
                lo, hi = src_off[s]
                R[:, lo:hi] += M
            rows.append(R)
        T = np.vstack(rows)
        Ssrc = np.zeros((total_src, total_src), dtype=dtype)
        for n in sources:
            lo, hi = src_off[n]
            Ssrc[lo:hi, lo:hi] = sources[n]
        blocks = {}
        start = 0
        for n, d in zip(names, dims):
            blocks[n] = (start, start + d)
            start += d
        return cls(symmetrize(T @ Ssrc @ herm(T)), blocks)


def _conditional_cov(joint: GaussianJoint, target, given) -> np.ndarray:
    C = joint.cov
    t = joint.index(target)
    g = joint.index(given)
    Ctt = C[np.ix_(t, t)]
    if g.size == 0:
        return Ctt
    Ctg = C[np.ix_(t, g)]
    # conditioning on a singular block is well defined through the pseudoinverse
    return symmetrize(Ctt - Ctg @ pinv(C[np.ix_(g, g)]) @ herm(Ctg))


def gaussian_mi(joint: GaussianJoint, X, Y, given=()) -> float:
    """``I(X; Y | given)`` in nats for jointly Gaussian blocks.

    Computed as ``log|Cov(Y | given)| - log|Cov(Y | X, given)|``, which needs
    only the ``Y`` conditional covariances to be positive definite.

    Raises
    ------
    ValueError
        If a conditional covariance of ``Y`` is singular.
    """
    X = [X] if isinstance(X, str) else list(X)
    Y = [Y] if isinstance(Y, str) else list(Y)
    given = [given] if isinstance(given, str) else list(given)
    try:
        h_y = logdet(_conditional_cov(joint, Y, given))
        h_y_x = logdet(_conditional_cov(joint, Y, X + given))
    except np.linalg.LinAlgError as exc:
        raise ValueError("singular conditional covariance") from exc
    return h_y - h_y_x


def zic_joint(ch: ZicChannel, S1, S2) -> GaussianJoint:
    """Joint law of ``(x1, x2, z1, z2, y1, y2)`` for Gaussian inputs."""
    return GaussianJoint.linear(
        {"x1": S1, "x2": S2, "z1": np.eye(ch.r1), "z2": np.eye(ch.r2)},
        {
            "y1": {"x1": ch.H1, "x2": ch.F, "z1": np.eye(ch.r1)},
            "y2": {"x2": ch.H2, "z2": np.eye(ch.r2)},
        },
    )


def strong_mi_gap(ch: ZicChannel, A, S1, S2, tol: float = 1e-8) -> float:
    """``I(x2; y1 | x1) - I(x2; y2 | x1)`` for Gaussian inputs.

    ``A`` must factor ``H2 = A F``; then the gap is non-negative for every
    input law whenever ``||A|| <= 1``.
    """
    A = np.asarray(A)
    R = A @ ch.F - ch.H2
    if np.linalg.norm(R) > tol * max(1.0, np.linalg.norm(ch.H2)):
        raise ValueError("A does not satisfy H2 = A F")
    joint = zic_joint(ch, S1, S2)
    return gaussian_mi(joint, "x2", "y1", "x1") - gaussian_mi(joint, "x2", "y2", "x1")


def markov_condition(Sx, H, G, Su, Suv) -> float:
    """Residual ``||Sx G^H - Sx H^H Su^-1 Suv||_F``.

    Zero iff ``x -> H x + u -> G x + v`` is a Markov chain (``x`` independent
    of ``(u, v)``, ``Su`` invertible).
    """
    Sx, H, G, Su, Suv = (np.asarray(M) for M in (Sx, H, G, Su, Suv))
    try:
        W = np.linalg.solve(Su, Suv)
    except np.linalg.LinAlgError as exc:
        raise ValueError("Su must be invertible") from exc
    return float(np.linalg.norm(Sx @ herm(G) - Sx @ herm(H) @ W))


def decode_order_check(ch: ZicChannel, S1, S2) -> float:
    """``I(x2; y1) - I(x2; y2 | x1)``: can receiver 1 decode user 2 first?"""
    joint = zic_joint(ch, S1, S2)
    return gaussian_mi(joint, "x2", "y1") - gaussian_mi(joint, "x2", "y2", "x1")


__all__ = [
    "GaussianJoint",
    "decode_order_check",
    "gaussian_mi",
    "markov_condition",
    "strong_mi_gap",
    "zic_joint",
]
