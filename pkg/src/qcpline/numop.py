"""Dense spectral toolkit: Hermitian eigensolver, SVD, truncated inverse
square root and the polar partial isometry ``T (T*T)^{-1/2}``.

Operators are plain complex ``numpy`` arrays.  Zero-versus-nonzero spectral
splits are always made relative to the largest eigenvalue: an eigenvalue
``lam`` of ``T*T`` counts as zero when ``lam <= tol * lam_max``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


class PreconditionError(ValueError):
    """Input violates an operator precondition (not Hermitian, not PSD)."""


@dataclass(frozen=True)
class SpectralFactorization:
    """Eigen- or singular-value factorization of a square operator.

    For ``kind == "eig"``: ``values`` ascending, ``left`` = ``right`` = Q.
    For ``kind == "svd"``: ``values`` descending, ``A = left @ diag @ right^*``.
    """

    kind: str
    values: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.values) @ self.right.conj().T

    def residual(self, A: np.ndarray) -> float:
        return float(np.linalg.norm(A - self.reconstruct(), 2))

    def orthonormality_defect(self) -> float:
        defects = []
        for Q in (self.left, self.right):
            defects.append(np.abs(Q.conj().T @ Q - np.eye(Q.shape[1])).max())
        return float(max(defects))


def as_operator(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("operator has non-finite entries")
    return A


def adjoint(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def op_norm(A: np.ndarray) -> float:
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def hermitian_defect(A: np.ndarray) -> float:
    return float(np.abs(A - A.conj().T).max()) if A.size else 0.0


def hermitian_eig(A, herm_tol: float = 1e-10) -> SpectralFactorization:
    A = as_operator(A)
    scale = max(op_norm(A), 1.0)
    if op_norm(A - A.conj().T) > herm_tol * scale:
        raise PreconditionError("hermitian_eig requires a Hermitian operator")
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    return SpectralFactorization("eig", w, V, V)


def svd_factor(A) -> SpectralFactorization:
    A = as_operator(A)
    U, s, Vh = np.linalg.svd(A)
    return SpectralFactorization("svd", s, U, Vh.conj().T)


def _threshold(values: np.ndarray, tol: float) -> float:
    top = float(np.max(np.abs(values))) if values.size else 0.0
    return tol * top


def truncated_inverse_sqrt(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``f(A)`` with ``f(lam) = lam**-0.5`` above the threshold and 0 below."""
    fac = hermitian_eig(A)
    w = fac.values
    thr = _threshold(w, tol)
    if w.size and w.min() < -thr:
        raise PreconditionError(f"operator is not positive semidefinite (min eigenvalue {w.min():.3e})")
    keep = w > thr
    f = np.zeros_like(w)
    f[keep] = 1.0 / np.sqrt(w[keep])
    V = fac.left
    return (V * f) @ V.conj().T


def spectral_projector(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the eigenvalues of Hermitian ``A`` above the threshold."""
    fac = hermitian_eig(A)
    keep = fac.values > _threshold(fac.values, tol)
    V = fac.left[:, keep]
    return V @ V.conj().T


def polar_partial_isometry(T, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``W = T f(T*T)`` with ``f`` the truncated inverse square root."""
    T = as_operator(T)
    return T @ truncated_inverse_sqrt(T.conj().T @ T, tol)


def polar_by_svd(T, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Same partial isometry assembled from the SVD, ``U 1[s^2 > tol s1^2] V*``."""
    fac = svd_factor(T)
    s = fac.values
    keep = s**2 > _threshold(s**2, tol)
    return fac.left[:, keep] @ fac.right[:, keep].conj().T


def small_singular_count(T, tol: float = DEFAULT_TOL) -> int:
    s = svd_factor(T).values
    return int(np.sum(s**2 <= _threshold(s**2, tol)))


def null_right_vectors(T, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Right singular vectors whose singular values fall below the threshold."""
    fac = svd_factor(T)
    s = fac.values
    return fac.right[:, s**2 <= _threshold(s**2, tol)]


def partial_isometry_defect(W: np.ndarray) -> float:
    return op_norm(W @ W.conj().T @ W - W)
