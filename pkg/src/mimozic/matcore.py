"""Hermitian and positive semidefinite linear algebra primitives.

Matrices are plain :class:`numpy.ndarray` objects.  Real inputs stay real so
that real-valued channels never pick up spurious imaginary parts; complex
inputs are handled throughout.
"""

from __future__ import annotations

import numpy as np

TOL_PSD = 1e-9
TOL_RESIDUAL = 1e-8
TOL_NORM = 1e-9
TOL_HERMITIAN = 1e-9


class DimensionError(ValueError):
    """Raised when matrix shapes are inconsistent."""


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a 2-D float or complex array (a copy)."""
    A = np.array(M)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    if np.iscomplexobj(A):
        A = A.astype(complex)
        if not np.any(A.imag):
            A = A.real.copy()
    else:
        A = A.astype(float)
    return A


def herm(M: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return M.conj().T


def symmetrize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + herm(M))


def as_hermitian(M, tol: float = TOL_HERMITIAN) -> np.ndarray:
    """Validate and symmetrize a Hermitian matrix.

    Inputs whose asymmetry ``||M - M^H|| / max(1, ||M||)`` exceeds ``tol``
    are rejected.
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"Hermitian matrix must be square, got {A.shape}")
    scale = max(1.0, np.linalg.norm(A))
    if np.linalg.norm(A - herm(A)) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return symmetrize(A)


def as_psd(M, tol: float = TOL_PSD) -> np.ndarray:
    """Validate a positive semidefinite matrix and return its symmetrized form."""
    A = as_hermitian(M)
    if not is_psd(A, tol):
        raise ValueError("matrix is not positive semidefinite")
    return A


def is_psd(M: np.ndarray, tol: float = TOL_PSD) -> bool:
    """True iff ``min eig(M) >= -tol * max(1, max eig(M))``."""
    w = np.linalg.eigvalsh(symmetrize(np.asarray(M)))
    return bool(w[0] >= -tol * max(1.0, w[-1]))


def loewner_leq(A: np.ndarray, B: np.ndarray, tol: float = TOL_PSD) -> bool:
    """Return ``A <= B`` in the Loewner order, i.e. ``B - A`` is PSD."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return is_psd(B - A, tol)


def logdet(M: np.ndarray) -> float:
    """Natural log-determinant of a positive definite matrix via Cholesky.

    Raises
    ------
    numpy.linalg.LinAlgError
        If ``M`` is singular or indefinite.
    """
    L = np.linalg.cholesky(symmetrize(np.asarray(M)))
    d = np.real(np.diag(L))
    if np.any(d <= 0):
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return float(2.0 * np.sum(np.log(d)))


def pinv(M: np.ndarray, rank_tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values at or below ``rank_tol * sigma_max`` are treated as zero.
    """
    M = np.asarray(M)
    m, n = M.shape
    if M.size == 0:
        return np.zeros((n, m), dtype=M.dtype)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    cutoff = rank_tol * (s[0] if s.size else 0.0)
    keep = s > cutoff
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (herm(Vh) * s_inv) @ herm(U)


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value (0 for empty or zero matrices)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def min_norm_solution(X: np.ndarray, Y: np.ndarray, side: str = "left_factor"):
    """Minimum spectral-norm solution of a linear matrix equation.

    With ``side="left_factor"`` solves ``A @ X = Y`` for ``A``; with
    ``side="right_factor"`` solves ``X @ A = Y``.  The returned
    ``A0 = Y pinv(X)`` (resp. ``pinv(X) Y``) agrees with every exact solution
    on the range of ``X`` and vanishes on its orthogonal complement, so it has
    the smallest spectral norm of all exact solutions.

    Returns
    -------
    (A0, residual)
        ``residual`` is the relative Frobenius error
        ``||A0 X - Y|| / max(1, ||Y||)``.  The caller decides whether an
        exact solution exists.
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    if side == "left_factor":
        if X.shape[1] != Y.shape[1]:
            raise DimensionError(f"A @ X = Y needs equal column counts, got {X.shape}, {Y.shape}")
        A0 = Y @ pinv(X)
        R = A0 @ X - Y
    elif side == "right_factor":
        if X.shape[0] != Y.shape[0]:
            raise DimensionError(f"X @ A = Y needs equal row counts, got {X.shape}, {Y.shape}")
        A0 = pinv(X) @ Y
        R = X @ A0 - Y
    else:
        raise ValueError(f"unknown side {side!r}")
    residual = float(np.linalg.norm(R) / max(1.0, np.linalg.norm(Y)))
    return A0, residual


def project_spectral_ball(M: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Frobenius projection onto ``{A : ||A||_2 <= radius}`` (singular value clipping)."""
    M = np.asarray(M)
    if M.size == 0:
        return M.copy()
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s[0] <= radius:
        return M.copy()
    return (U * np.minimum(s, radius)) @ Vh


def project_psd(M: np.ndarray) -> np.ndarray:
    """Frobenius-nearest PSD matrix (negative eigenvalues clipped to zero)."""
    w, V = np.linalg.eigh(symmetrize(np.asarray(M)))
    if w[0] >= 0:
        return symmetrize(np.asarray(M))
    return symmetrize((V * np.maximum(w, 0.0)) @ herm(V))


def psd_sqrt_factor(S: np.ndarray, rank_tol: float = 1e-12) -> np.ndarray:
    """Thin factor ``L`` with ``L @ L^H == S`` spanning only the range of ``S``."""
    w, V = np.linalg.eigh(symmetrize(np.asarray(S)))
    keep = w > rank_tol * max(1.0, w[-1] if w.size else 0.0)
    return V[:, keep] * np.sqrt(w[keep])
