"""Superoperator representations of linear maps on M_n(C) and conversions
between them.

A linear map P on n x n complex matrices is stored as its n^2 x n^2 matrix
``mat`` acting on column-vectorized operators.  We use the column-stacking
convention

    vec(x)[i*n + k] = x[k, i]          (column i, row k),

so that ``vec(a @ x @ b) = kron(b.T, a) @ vec(x)``.  The Choi matrix of P is

    J(P) = sum_ij E_ij (x) P(E_ij),

the n^2 x n^2 block matrix whose (i, j) block of size n x n is P(E_ij).
With this pair of conventions the Choi matrix of x -> v x v* equals
vec(v) vec(v)*, so Kraus extraction is a plain eigendecomposition of J.

All maps here act in the Heisenberg picture: "unital" means P(1) = 1.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotPSD
from .numerics import DEFAULT_TOL, Tolerances, frob, hermitian_eig, spectral_norm

__all__ = [
    "vec",
    "unvec",
    "dim_of",
    "identity_superop",
    "left_right_superop",
    "ad_superop",
    "apply_superop",
    "kraus_to_superop",
    "kraus_to_choi",
    "superop_to_choi",
    "choi_to_superop",
    "choi_to_kraus",
    "is_hermiticity_preserving",
    "is_completely_positive",
    "is_unital",
    "choi_min_eig",
    "superop_norm_bound",
]


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a 1-d vector."""
    return np.asarray(x, dtype=complex).T.reshape(-1)


def unvec(v: np.ndarray, n: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if n is None:
        n = int(round(np.sqrt(v.size)))
    if n * n != v.size:
        raise DimensionMismatch(f"cannot unvec a vector of length {v.size}")
    return v.reshape(n, n).T


def dim_of(mat: np.ndarray) -> int:
    """Algebra dimension n for an n^2 x n^2 superoperator matrix."""
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"superoperator must be square, got {mat.shape}")
    n = int(round(np.sqrt(mat.shape[0])))
    if n * n != mat.shape[0]:
        raise DimensionMismatch(
            f"superoperator side {mat.shape[0]} is not a perfect square"
        )
    return n


def identity_superop(n: int) -> np.ndarray:
    return np.eye(n * n, dtype=complex)


def left_right_superop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator matrix of the two-sided multiplication x -> a @ x @ b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.kron(b.T, a)


def ad_superop(v: np.ndarray) -> np.ndarray:
    """Superoperator matrix of the conjugation x -> v @ x @ v*."""
    v = np.asarray(v, dtype=complex)
    return np.kron(v.conj(), v)


def apply_superop(mat: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply the map with matrix ``mat`` to the operator ``x``."""
    n = dim_of(mat)
    x = np.asarray(x, dtype=complex)
    if x.shape != (n, n):
        raise DimensionMismatch(
            f"operator shape {x.shape} does not match algebra dimension {n}"
        )
    return unvec(np.asarray(mat, dtype=complex) @ vec(x), n)


def kraus_to_superop(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Superoperator matrix of x -> sum_m v_m @ x @ v_m*."""
    ops = [np.asarray(v, dtype=complex) for v in ops]
    if not ops:
        raise DimensionMismatch("need at least one Kraus operator")
    n = ops[0].shape[0]
    out = np.zeros((n * n, n * n), dtype=complex)
    for v in ops:
        if v.shape != (n, n):
            raise DimensionMismatch("Kraus operators must share a square shape")
        out += np.kron(v.conj(), v)
    return out


def kraus_to_choi(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Choi matrix of x -> sum_m v_m @ x @ v_m*, i.e. sum_m vec(v_m) vec(v_m)*."""
    ops = [np.asarray(v, dtype=complex) for v in ops]
    if not ops:
        raise DimensionMismatch("need at least one Kraus operator")
    n = ops[0].shape[0]
    out = np.zeros((n * n, n * n), dtype=complex)
    for v in ops:
        w = vec(v)
        out += np.outer(w, w.conj())
    return out


def _reshuffle(m: np.ndarray) -> np.ndarray:
    """The involutive index shuffle exchanging superoperator and Choi forms."""
    n = dim_of(m)
    return (
        np.asarray(m, dtype=complex)
        .reshape(n, n, n, n)
        .transpose(3, 1, 2, 0)
        .reshape(n * n, n * n)
    )


def superop_to_choi(mat: np.ndarray) -> np.ndarray:
    """Choi matrix of the map with superoperator matrix ``mat``."""
    return _reshuffle(mat)


def choi_to_superop(choi: np.ndarray) -> np.ndarray:
    """Superoperator matrix of the map with Choi matrix ``choi``."""
    return _reshuffle(choi)


def choi_to_kraus(
    choi: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> list[np.ndarray]:
    """Kraus operators of a completely positive map from its Choi matrix.

    Eigenvalues of the Choi matrix in ``[-psd_slack, eig_cut]`` (relative to
    its scale) are clamped to zero; anything more negative raises
    :class:`NotPSD`.  Each operator's phase is fixed by making its
    largest-magnitude entry real and positive, so the output is deterministic.

    :return: list of n x n operators ``v_m`` with
        ``sum_m vec(v_m) vec(v_m)* = choi`` up to the clamped part, ordered by
        descending Choi eigenvalue.
    """
    n = dim_of(choi)
    try:
        w, u = hermitian_eig(choi, tol)
    except Exception as exc:  # non-Hermitian Choi cannot be PSD
        raise NotPSD(f"Choi matrix is not Hermitian: {exc}") from exc
    if w.size == 0:
        return []
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[-1] < -tol.psd_slack * scale:
        raise NotPSD(
            f"Choi matrix has negative eigenvalue {w[-1]:.3e} "
            f"(slack {tol.psd_slack * scale:.3e})"
        )
    ops = []
    for lam, col in zip(w, u.T):
        if lam <= tol.eig_cut * scale:
            continue
        v = np.sqrt(lam) * unvec(col, n)
        idx = int(np.argmax(np.abs(v)))
        entry = v.reshape(-1)[idx]
        if abs(entry) > 0:
            v = v * (entry.conjugate() / abs(entry))
        ops.append(v)
    return ops


def is_hermiticity_preserving(mat: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the map sends Hermitian matrices to Hermitian matrices,
    tested as Hermiticity of the Choi matrix."""
    j = superop_to_choi(mat)
    return frob(j - j.conj().T) <= tol.residual * max(1.0, frob(j))


def is_completely_positive(mat: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the Choi matrix is PSD within ``psd_slack`` (relative)."""
    if not is_hermiticity_preserving(mat, tol):
        return False
    j = superop_to_choi(mat)
    w = np.linalg.eigvalsh((j + j.conj().T) / 2.0)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
    return bool(w.size == 0 or w[0] >= -tol.psd_slack * scale)


def is_unital(mat: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the map fixes the identity: P(1) = 1 within ``residual``."""
    n = dim_of(mat)
    p1 = apply_superop(mat, np.eye(n))
    return frob(p1 - np.eye(n)) <= tol.residual * max(1.0, frob(p1))


def choi_min_eig(mat: np.ndarray) -> tuple[float, float]:
    """Smallest eigenvalue of the (hermitized) Choi matrix and the scale
    ``max(1, largest |eigenvalue|)`` it should be compared against."""
    j = superop_to_choi(mat)
    w = np.linalg.eigvalsh((j + j.conj().T) / 2.0)
    if w.size == 0:
        return 0.0, 1.0
    return float(w[0]), max(1.0, float(np.max(np.abs(w))))


def superop_norm_bound(mat: np.ndarray) -> float:
    """Certified upper bound on the operator norm of the map itself:
    n * ||mat||_2 (conservative)."""
    return dim_of(mat) * spectral_norm(np.asarray(mat, dtype=complex))
