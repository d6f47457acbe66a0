"""Deterministic cyclic-Jacobi eigensolver for small real symmetric matrices.

Everything this package diagonalizes is at most 48x48 (the complex
embedding of a four-box density matrix), so a fixed-order Jacobi sweep is
both fast enough and, unlike LAPACK drivers, bit-reproducible across
platforms.  Determinism matters because downstream code picks "the first"
eigenvector inside degenerate clusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ConvergenceError

SYMMETRY_TOL = 1e-12
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100
CLUSTER_GAP = 1e-8
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def cluster_slice(self, value: float, gap: float = CLUSTER_GAP) -> slice:
        """Index range of the eigenvalue cluster containing `value`."""
        close = np.abs(self.eigenvalues - value) <= gap
        if not close.any():
            raise ConvergenceError(f"no eigenvalue within {gap} of {value}")
        idx = np.nonzero(close)[0]
        return slice(int(idx[0]), int(idx[-1]) + 1)

    def degeneracy(self, value: float, gap: float = CLUSTER_GAP) -> int:
        s = self.cluster_slice(value, gap)
        return s.stop - s.start


def _orthonormalize_columns(block: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt; columns are assumed close to orthonormal."""
    Q = block.copy()
    for j in range(Q.shape[1]):
        for k in range(j):
            Q[:, j] -= (Q[:, k] @ Q[:, j]) * Q[:, k]
        norm = np.linalg.norm(Q[:, j])
        if norm < 0.5:
            raise ConvergenceError("eigenvector cluster lost rank during cleanup")
        Q[:, j] /= norm
    return Q


def _fix_signs(V: np.ndarray) -> None:
    """Make the largest-magnitude component of each column positive."""
    for j in range(V.shape[1]):
        lead = np.argmax(np.abs(V[:, j]))
        if V[lead, j] < 0.0:
            V[:, j] = -V[:, j]


def symmetric_spectrum(matrix) -> SpectralDecomposition:
    """Full eigendecomposition of a real symmetric matrix.

    Cyclic Jacobi sweeps in fixed row-major pivot order, stopping once the
    largest off-diagonal entry falls below 1e-12 (at most 100 sweeps).
    Output is deterministic: eigenvalues sorted descending with a stable
    sort, each eigenvector's largest-magnitude component made positive,
    and near-degenerate clusters (gap < 1e-8) re-orthonormalized.
    """
    A = np.array(matrix, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError("matrix contains non-finite entries")
    if np.abs(A - A.T).max(initial=0.0) > SYMMETRY_TOL:
        raise ContractError("matrix is not symmetric within 1e-12")
    d = A.shape[0]
    A = (A + A.T) / 2.0
    original = A.copy()
    V = np.eye(d)

    converged = d < 2
    for _ in range(MAX_SWEEPS):
        if converged:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) < 1e-200:  # far below any tolerance; avoids overflow in tau
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(tau) > 1e8:
                    t = 0.5 / tau  # asymptotic root; avoids tau*tau overflow
                elif tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app, aqq = A[p, p], A[q, q]
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
        off = np.abs(A - np.diag(np.diag(A))).max()
        converged = off <= OFFDIAG_TOL
    if not converged:
        raise ConvergenceError(f"Jacobi sweep did not converge in {MAX_SWEEPS} sweeps")

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = V[:, order]

    # Re-orthonormalize inside near-degenerate clusters; the basis inside a
    # cluster is otherwise arbitrary and callers must not rely on it beyond
    # the determinism guaranteed here.
    start = 0
    for j in range(1, d + 1):
        if j == d or eigenvalues[j - 1] - eigenvalues[j] >= CLUSTER_GAP:
            if j - start > 1:
                V[:, start:j] = _orthonormalize_columns(V[:, start:j])
            start = j
    _fix_signs(V)

    gram = np.abs(V.T @ V - np.eye(d)).max(initial=0.0)
    residual = np.abs(original - (V * eigenvalues) @ V.T).max(initial=0.0)
    if gram > RESIDUAL_TOL or residual > RESIDUAL_TOL * max(1.0, np.abs(original).max()):
        raise ConvergenceError(
            f"decomposition failed contract: gram {gram:.2e}, residual {residual:.2e}"
        )
    eigenvalues.setflags(write=False)
    V.setflags(write=False)
    return SpectralDecomposition(eigenvalues, V)


def hermitian_min_eigenvalue(matrix) -> float:
    """Smallest eigenvalue of a complex Hermitian matrix.

    Uses the real embedding [[Re, -Im], [Im, Re]], whose spectrum is the
    Hermitian spectrum with doubled multiplicities, so no complex solver is
    needed.  The input is symmetrized first; callers check Hermiticity to
    their own tolerance.
    """
    H = np.asarray(matrix, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {H.shape}")
    H = (H + H.conj().T) / 2.0
    embedded = np.block([[H.real, -H.imag], [H.imag, H.real]])
    return float(symmetric_spectrum(embedded).eigenvalues[-1])
