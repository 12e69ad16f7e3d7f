"""Shared fixtures and small helpers for the test suite."""

import numpy as np
import pytest

from cpsemi import ad_superop, identity_superop, vec

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def superop_of(f, n):
    """Matrix of the linear map f on M_n, columns = vec of images of E_ij."""
    out = np.zeros((n * n, n * n), dtype=complex)
    for p in range(n * n):
        i, j = p % n, p // n
        e = np.zeros((n, n), dtype=complex)
        e[i, j] = 1.0
        out[:, p] = vec(f(e))
    return out


def transpose_superop(n):
    return superop_of(lambda x: x.T, n)


def dephasing_generator():
    """Qubit dephasing generator L(x) = sz x sz - x."""
    return ad_superop(SZ) - identity_superop(2)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def dephasing():
    return dephasing_generator()
