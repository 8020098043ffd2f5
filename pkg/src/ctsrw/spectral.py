"""Laplacian eigendecomposition and the heat kernel P(t) = exp(-t L_w)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_PROB = 1e-9


class SpectralError(ArithmeticError):
    pass


def eps_eig(n: int) -> float:
    return 1e-10 * n


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues of L_w with matching orthonormal eigenvector columns.

    Column 0 is the constant vector 1/sqrt(n) with a positive sign.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


@dataclass(frozen=True)
class TransitionMatrix:
    t: float
    p: np.ndarray

    def __getitem__(self, key):
        return self.p[key]


def decompose(L: np.ndarray) -> SpectralDecomposition:
    """Eigendecompose a graph Laplacian and check the invariants downstream code relies on."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if L.shape != (n, n):
        raise SpectralError(f"expected a square matrix, got shape {L.shape}")
    if not np.allclose(L, L.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(L).max())):
        raise SpectralError("Laplacian is not symmetric")
    try:
        lam, U = np.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed to converge: {exc}") from exc
    order = np.argsort(lam, kind="stable")
    lam, U = lam[order], U[:, order]

    scale = max(1.0, float(np.abs(L).max()))
    tol = eps_eig(n) * scale
    if abs(lam[0]) > tol:
        raise SpectralError(f"smallest eigenvalue {lam[0]!r} is not zero; input is not a Laplacian")
    if n > 1 and lam[1] <= tol:
        raise SpectralError("zero eigenvalue is not simple: graph is disconnected")
    lam[0] = 0.0
    # Pin the kernel vector exactly; eigh only returns it to rounding.
    U[:, 0] = 1.0 / np.sqrt(n)
    if n > 1:
        # Re-orthogonalise the rest against the pinned column.
        rest = U[:, 1:] - np.outer(U[:, 0], U[:, 0] @ U[:, 1:])
        q, r = np.linalg.qr(rest)
        U[:, 1:] = q * np.sign(np.diag(r))
    return SpectralDecomposition(lam, U)


def heat_kernel(s: SpectralDecomposition, t: float) -> TransitionMatrix:
    """p_xy(t) = sum_k u_xk u_yk exp(-lambda_k t)."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    U = s.eigenvectors
    return TransitionMatrix(float(t), (U * np.exp(-s.eigenvalues * t)) @ U.T)


def heat_kernel_column(s: SpectralDecomposition, y: int, t: float) -> np.ndarray:
    """The column p_{.y}(t), O(n^2) per call."""
    U = s.eigenvectors
    return U @ (U[y] * np.exp(-s.eigenvalues * t))


def mixing_rate(s: SpectralDecomposition) -> float:
    """Smallest positive eigenvalue (the spectral gap)."""
    if s.n < 2:
        raise SpectralError("a single vertex has no spectral gap")
    lam2 = float(s.eigenvalues[1])
    if lam2 <= eps_eig(s.n):
        raise SpectralError("spectral gap vanishes: graph is disconnected")
    return lam2


def check_invariants(s: SpectralDecomposition, L: np.ndarray) -> dict[str, float]:
    """Residuals of orthonormality, eigen-equation, and reconstruction."""
    U, lam = s.eigenvectors, s.eigenvalues
    n = s.n
    return {
        "orthogonality": float(np.abs(U.T @ U - np.eye(n)).max()),
        "eigen_equation": float(np.abs(L @ U - U * lam).max()),
        "reconstruction": float(np.abs(s.reconstruct() - L).max()),
        "kernel_vector": float(np.abs(U[:, 0] - 1.0 / np.sqrt(n)).max()),
    }
