"""Dense complex linear algebra at small order (N up to a few dozen).

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The helpers
here validate the structured kinds used throughout the package (Hermitian
matrices and orthogonal projectors) and provide the few decompositions the
spectral code relies on.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

PROJECTOR_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-8


def as_matrix(M, n: int | None = None) -> np.ndarray:
    """Coerce ``M`` to a finite square complex matrix (optionally of order ``n``)."""
    A = np.array(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if n is not None and A.shape[0] != n:
        raise DimensionMismatch(f"expected order {n}, got {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def hermitian_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T), initial=0.0))


def as_hermitian(M, n: int | None = None, tol: float = 1e-12) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrised matrix."""
    A = as_matrix(M, n)
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if hermitian_defect(A) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return 0.5 * (A + A.conj().T)


def projector_defect(P: np.ndarray) -> float:
    """max(|P - P*|, |P^2 - P|), entrywise."""
    return max(hermitian_defect(P), float(np.max(np.abs(P @ P - P), initial=0.0)))


def as_projector(M, n: int | None = None) -> np.ndarray:
    P = as_matrix(M, n)
    if projector_defect(P) > PROJECTOR_TOL * P.shape[0]:
        raise ValueError("matrix is not an orthogonal projector")
    return 0.5 * (P + P.conj().T)


def projector_rank(P: np.ndarray) -> int:
    return int(round(float(np.trace(P).real)))


def orth(B: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as columns) of the column span of ``B``."""
    B = np.asarray(B, dtype=complex)
    if B.size == 0:
        return np.zeros((B.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return U[:, :r]


def projector_onto(B: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of the columns of ``B``."""
    Q = orth(B)
    return Q @ Q.conj().T


def norm2(M: np.ndarray) -> float:
    """Spectral norm (largest singular value); 0 for empty input."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def _jacobi_rotation(a: float, d: float, b: complex):
    """Unitary 2x2 block that annihilates ``b`` in [[a, b], [conj(b), d]]."""
    r = abs(b)
    phase = b / r
    theta = (d - a) / (2.0 * r)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0:
        t = -t
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    g = np.array([[c, s], [-s / phase, c / phase]], dtype=complex)
    return g


def herm_eig(H, tol: float = 1e-15, max_sweeps: int = 60):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with ascending real eigenvalues ``w`` and orthonormal
    eigenvectors in the columns of ``V`` so that ``H @ V = V @ diag(w)``.
    """
    A = as_hermitian(H).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if n > 1 and scale > 0:
        for _ in range(max_sweeps):
            off = np.linalg.norm(A - np.diag(np.diag(A)))
            if off <= tol * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    b = A[p, q]
                    if abs(b) <= 1e-300 or abs(b) < 1e-18 * scale:
                        A[p, q] = A[q, p] = 0.0
                        continue
                    g = _jacobi_rotation(A[p, p].real, A[q, q].real, b)
                    idx = [p, q]
                    A[:, idx] = A[:, idx] @ g
                    A[idx, :] = g.conj().T @ A[idx, :]
                    A[p, q] = A[q, p] = 0.0
                    A[p, p] = A[p, p].real
                    A[q, q] = A[q, q].real
                    V[:, idx] = V[:, idx] @ g
    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def singular_values(M) -> np.ndarray:
    """Singular values in descending order."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch("singular_values expects a square matrix")
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def invert(M) -> np.ndarray:
    """Inverse of a square matrix; ``SingularMatrix`` when numerically singular."""
    A = as_matrix(M)
    s = singular_values(A)
    if s.size and s[-1] <= 1e-13 * s[0]:
        raise SingularMatrix(f"sigma_min/sigma_max = {s[-1] / s[0] if s[0] else 0.0:.3e}")
    return np.linalg.inv(A)


def numerical_rank(M, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``tol * max(1, sigma_max)``."""
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    s = singular_values(M)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def null_space(M, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical kernel (right singular vectors)."""
    A = np.asarray(M, dtype=complex)
    _, s, Vh = np.linalg.svd(A)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return Vh[r:].conj().T


def basis_of(P: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the range of a projector."""
    w, V = np.linalg.eigh(0.5 * (P + P.conj().T))
    return V[:, w > 0.5]
