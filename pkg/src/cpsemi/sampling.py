"""Seeded random instances used by the verification commands and the tests."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .superop import choi_to_superop, kraus_to_superop

__all__ = [
    "random_matrix",
    "random_hermitian",
    "random_hp_map",
    "random_cp_map",
    "random_ccp_generator",
    "random_constrained_tuple",
]


def random_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Complex matrix with i.i.d. standard complex normal entries."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    m = random_matrix(rng, n)
    return (m + m.conj().T) / 2.0


def random_hp_map(rng: np.random.Generator, n: int) -> np.ndarray:
    """Hermiticity-preserving map: superoperator with a random Hermitian
    Choi matrix (almost surely not conditionally CP)."""
    return choi_to_superop(random_hermitian(rng, n * n))


def random_cp_map(rng: np.random.Generator, n: int, m: int | None = None) -> np.ndarray:
    """Completely positive map with ``m`` random Kraus operators."""
    if m is None:
        m = int(rng.integers(1, n * n))
    ops = [random_matrix(rng, n) / np.sqrt(n) for _ in range(m)]
    return kraus_to_superop(ops)


def random_ccp_generator(
    rng: np.random.Generator,
    n: int,
    m: int | None = None,
    unital: bool = False,
) -> np.ndarray:
    """Conditionally completely positive generator L(x) = sum v x v* + k x + x k*.

    With ``unital=True`` the drift is k = i h - (1/2) sum v v* for a random
    Hermitian h, which makes L(1) = 0; otherwise k is a free random matrix.
    """
    if m is None:
        m = int(rng.integers(1, n * n))
    ops = [random_matrix(rng, n) / np.sqrt(n) for _ in range(m)]
    if unital:
        h = random_hermitian(rng, n)
        k = 1j * h - 0.5 * sum(v @ v.conj().T for v in ops)
    else:
        k = random_matrix(rng, n)
    eye = np.eye(n)
    return kraus_to_superop(ops) + np.kron(eye, k) + np.kron(k.conj(), eye)


def random_constrained_tuple(rng: np.random.Generator, n: int, r: int = 3):
    """Random tuple (xs, as) of length ``r`` with sum_k x_k a_k = 0.

    The a's are drawn from the null space of the linear map
    (a_1, ..., a_r) -> sum_k x_k a_k.
    """
    xs = [random_matrix(rng, n) for _ in range(r)]
    eye = np.eye(n)
    design = np.hstack([np.kron(eye, x) for x in xs])
    null = scipy.linalg.null_space(design)
    coef = rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1])
    stacked = null @ coef
    as_ = []
    for k in range(r):
        seg = stacked[k * n * n : (k + 1) * n * n]
        as_.append(seg.reshape(n, n).T)
    return xs, as_
