"""Shared numerical kernels: eigendecompositions, pseudo-inverses, matrix
exponentials and least squares, with one consistent tolerance policy.

All comparisons against zero are relative, anchored at the operand's largest
singular value (with a floor of 1 so that tiny matrices do not pass
vacuously strict checks).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotHermitian, NotPSD

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "frob",
    "spectral_norm",
    "hermitian_eig",
    "expm",
    "pinv_psd",
    "rank_tol",
    "lstsq",
]


@dataclass(frozen=True)
class Tolerances:
    """Tolerance knobs used throughout the library.

    :param eig_cut: eigenvalues/singular values below this (relative) cut are
        treated as zero when computing ranks, pseudo-inverses and Kraus bases.
    :param psd_slack: how far below zero an eigenvalue may sit (relative to the
        matrix scale) while the matrix still counts as positive semidefinite.
    :param residual: relative residual allowed when deciding that two maps or
        matrices are equal, or that a linear system was solved exactly.
    """

    eig_cut: float = 1e-9
    psd_slack: float = 1e-9
    residual: float = 1e-10


DEFAULT_TOL = Tolerances()

# Internal tolerance used to classify a matrix as (skew-)Hermitian or normal
# before choosing an exponentiation path.  Deliberately much tighter than any
# user-facing tolerance.
_CLASSIFY_TOL = 1e-12


def frob(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def hermitian_eig(m: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    :param m: square matrix with ``||m - m*|| <= residual * ||m||``.
    :return: ``(w, u)`` with real eigenvalues ``w`` in descending order and
        the matching orthonormal eigenvector columns in ``u``.
    :raises NotHermitian: if the Hermiticity check fails.
    """
    m = np.asarray(m, dtype=complex)
    defect = frob(m - m.conj().T)
    if defect > tol.residual * max(1.0, frob(m)):
        raise NotHermitian(
            f"matrix is not Hermitian: ||m - m*|| = {defect:.3e}"
        )
    w, u = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w[::-1].copy(), u[:, ::-1].copy()


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    Hermitian input is exponentiated through its eigendecomposition, other
    normal input through a complex Schur form; everything else falls back to
    scaling-and-squaring.
    """
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, frob(m))
    if frob(m - m.conj().T) <= _CLASSIFY_TOL * scale:
        w, u = np.linalg.eigh(m)
        return (u * np.exp(w)) @ u.conj().T
    commutator = m @ m.conj().T - m.conj().T @ m
    if frob(commutator) <= _CLASSIFY_TOL * scale * scale:
        t, z = scipy.linalg.schur(m, output="complex")
        return (z * np.exp(np.diag(t))) @ z.conj().T
    return scipy.linalg.expm(m)


def pinv_psd(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a positive semidefinite matrix.

    Eigenvalues below the relative cut are treated as exactly zero.

    :raises NotPSD: if ``m`` is not PSD within ``psd_slack`` (non-Hermitian
        input counts as not PSD).
    """
    try:
        w, u = hermitian_eig(m, tol)
    except NotHermitian as exc:
        raise NotPSD(str(exc)) from exc
    if w.size == 0:
        return np.zeros_like(np.asarray(m, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[-1] < -tol.psd_slack * scale:
        raise NotPSD(f"matrix has negative eigenvalue {w[-1]:.3e}")
    cut = tol.eig_cut * scale
    inv = np.where(w > cut, 1.0 / np.where(w > cut, w, 1.0), 0.0)
    return (u * inv) @ u.conj().T


def rank_tol(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical rank: number of singular values above the relative cut."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol.eig_cut * max(1.0, float(s[0]))))


def lstsq(a: np.ndarray, b: np.ndarray):
    """Minimum-norm least-squares solution of ``a @ x = b``.

    :return: ``(x, residual)`` with ``residual = ||a @ x - b||``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual
