"""Canonical decomposition of semigroup generators on M_n(C).

A Hermiticity-preserving, conditionally completely positive map L can be
written as

    L(x) = P(x) + k x + x k*,

where P(x) = sum_m v_m x v_m* is completely positive with traceless,
linearly independent Kraus operators (so its metric operator space E meets
the scalars only in 0), and k is unique once the free imaginary multiple of
the identity is fixed by Im(tr k) = 0.  The number of Kraus operators,
dim E, is the rank of the generator and equals the numerical index of the
semigroup it generates.

Construction: the basis is extracted from the eigendecomposition of the
projected Choi matrix of L (compression to the orthogonal complement of
vec(1)), whose eigenvectors are automatically orthogonal to vec(1), hence
traceless as operators; k then solves the least-squares problem
mat(L) - mat(P) = kron(1, k) + kron(conj(k), 1), in closed form via partial
traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NotCCP, NotHermitian, NotHermiticityPreserving
from .numerics import DEFAULT_TOL, Tolerances, expm, frob, lstsq
from .opspace import MetricOperatorSpace, _empty_space, space_from_kraus
from .superop import (
    choi_to_kraus,
    dim_of,
    is_hermiticity_preserving,
    kraus_to_superop,
    superop_to_choi,
    vec,
)
from .symbols import ccp_defect, projected_choi

__all__ = [
    "GklsForm",
    "decompose",
    "rebuild",
    "rank",
    "gauge_shift",
    "same_generator",
    "GaugeRelation",
    "extract_gauge",
    "dominates",
    "KSplit",
    "split_k",
    "hamiltonian_lindblad",
]


@dataclass(frozen=True, eq=False)
class GklsForm:
    """Canonical form of a generator: metric operator space plus drift.

    ``residual`` is the relative reconstruction error
    ||rebuild - L|| / max(1, ||L||) observed at decomposition time.
    """

    n: int
    space: MetricOperatorSpace
    k: np.ndarray
    residual: float


def _two_sided_term(k: np.ndarray) -> np.ndarray:
    """Superoperator matrix of x -> k x + x k*."""
    n = k.shape[0]
    eye = np.eye(n)
    return np.kron(eye, k) + np.kron(k.conj(), eye)


def _solve_drift(d: np.ndarray, n: int) -> np.ndarray:
    """Least-squares solution k of d = kron(1, k) + kron(conj(k), 1),
    gauge-fixed by Im(tr k) = 0.

    Closed form from the normal equations: with S1/S2 the partial traces of
    d over the first/second tensor factor and tau = Re(tr d) / (2n),

        k = (S1 + conj(S2) - 2 tau 1) / (2n).
    """
    d4 = np.asarray(d, dtype=complex).reshape(n, n, n, n)
    s1 = np.einsum("iaib->ab", d4)
    s2 = np.einsum("iaja->ij", d4)
    tau = float(np.real(np.trace(np.asarray(d, dtype=complex))) / (2.0 * n))
    k = (s1 + s2.conj() - 2.0 * tau * np.eye(n)) / (2.0 * n)
    # The formula already leaves tr k real; clean up the last float dust.
    k = k - 1j * (np.trace(k).imag / n) * np.eye(n)
    return k


def decompose(mat: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> GklsForm:
    """Canonical decomposition of a generator.

    :param mat: superoperator matrix of a Hermiticity-preserving,
        conditionally completely positive map.
    :raises NotHermiticityPreserving: if the Choi matrix is not Hermitian.
    :raises NotCCP: if the projected Choi matrix has a negative eigenvalue
        beyond ``psd_slack`` (the witness eigenvector is attached).
    """
    n = dim_of(mat)
    if not is_hermiticity_preserving(mat, tol):
        raise NotHermiticityPreserving(
            "generator does not preserve Hermiticity (Choi matrix not Hermitian)"
        )
    low, witness, scale = ccp_defect(mat)
    if low < -tol.psd_slack * scale:
        raise NotCCP(
            f"projected Choi matrix has negative eigenvalue {low:.3e}",
            witness=witness,
            eigenvalue=low,
        )
    jp = projected_choi(mat)
    ops = choi_to_kraus(jp, tol)
    if ops:
        space = space_from_kraus(ops, tol)
        cp_part = kraus_to_superop(ops)
    else:
        space = _empty_space(n)
        cp_part = np.zeros((n * n, n * n), dtype=complex)
    k = _solve_drift(np.asarray(mat, dtype=complex) - cp_part, n)
    rebuilt = cp_part + _two_sided_term(k)
    residual = frob(rebuilt - mat) / max(1.0, frob(np.asarray(mat)))
    return GklsForm(n=n, space=space, k=k, residual=residual)


def rebuild(d: GklsForm) -> np.ndarray:
    """Superoperator matrix of the generator described by a canonical form."""
    if d.space.dim:
        cp_part = kraus_to_superop(d.space.basis)
    else:
        cp_part = np.zeros((d.n * d.n, d.n * d.n), dtype=complex)
    return cp_part + _two_sided_term(d.k)


def rank(mat: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    """Rank of a generator: the dimension of its metric operator space."""
    return decompose(mat, tol).space.dim


def gauge_shift(d: GklsForm, lam: Sequence[complex], c: complex = 0.0) -> np.ndarray:
    """Superoperator of Q(x) = sum_m (v_m + lam_m 1) x (v_m + lam_m 1)* + Re(c) x.

    Q has the same symbol as the CP part of ``d``; shifting the Kraus family
    by scalars and adding a nonnegative multiple of the identity map never
    changes the symbol.
    """
    lam = np.asarray(list(lam), dtype=complex)
    if lam.size != d.space.dim:
        raise ValueError(
            f"need {d.space.dim} scalars, got {lam.size}"
        )
    eye = np.eye(d.n, dtype=complex)
    ops = [v + l * eye for v, l in zip(d.space.basis, lam)]
    out = complex(c).real * np.eye(d.n * d.n, dtype=complex)
    if ops:
        out = out + kraus_to_superop(ops)
    return out


def same_generator(d1: GklsForm, d2: GklsForm, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the two canonical forms rebuild to the same generator
    (within ``residual``, relative)."""
    if d1.n != d2.n:
        return False
    m1 = rebuild(d1)
    m2 = rebuild(d2)
    scale = max(1.0, frob(m1), frob(m2))
    return frob(m1 - m2) <= tol.residual * scale


class GaugeRelation(NamedTuple):
    """How two canonical forms of one generator are related.

    ``theta`` maps coordinates over d1's basis to coordinates over d2's
    basis (a unitary when both forms are canonical); ``v2`` is the member of
    d2's space and ``c`` the real scalar with

        k2 = k1 + v2 + ((1/2) <v2, v2> + i c) 1.

    ``residual`` is the norm of what is left of k2 - k1 after removing the
    v2 and scalar parts.
    """

    theta: np.ndarray
    v2: np.ndarray
    c: float
    residual: float


def extract_gauge(
    d1: GklsForm, d2: GklsForm, tol: Tolerances = DEFAULT_TOL
) -> GaugeRelation:
    """Extract the gauge relating two decompositions of the same generator.

    Each basis element of d1's space is expanded over d2's basis plus the
    identity; the identity components define a linear functional that is
    represented by ``v2`` in d2's inner product.
    """
    if d1.n != d2.n or d1.space.dim != d2.space.dim:
        raise ValueError("forms do not describe spaces of equal dimension")
    n = d1.n
    dim = d1.space.dim
    cols = [vec(v) for v in d2.space.basis] + [vec(np.eye(n))]
    design = np.column_stack(cols) if cols else np.zeros((n * n, 0))
    theta = np.zeros((dim, dim), dtype=complex)
    f = np.zeros(dim, dtype=complex)
    for i, u in enumerate(d1.space.basis):
        sol, res = lstsq(design, vec(u))
        if res > tol.eig_cut * max(1.0, frob(u)):
            raise ValueError("spaces do not agree modulo scalars")
        theta[:, i] = sol[:dim]
        f[i] = sol[dim]
    if dim:
        gamma_conj, _ = lstsq(theta.T, f)
        gamma = gamma_conj.conj()
        v2 = d2.space.from_coords(gamma)
        vv = float(np.real(np.vdot(gamma, gamma)))
    else:
        v2 = np.zeros((n, n), dtype=complex)
        vv = 0.0
    resid_mat = d2.k - d1.k - v2 - 0.5 * vv * np.eye(n)
    c = float(np.trace(resid_mat).imag / n)
    leftover = frob(resid_mat - 1j * c * np.eye(n))
    return GaugeRelation(theta=theta, v2=v2, c=c, residual=leftover)


def dominates(
    mat1: np.ndarray,
    mat2: np.ndarray,
    t_samples: Sequence[float] = (0.1, 0.25, 0.5, 0.75, 1.0),
    tol: Tolerances = DEFAULT_TOL,
) -> bool:
    """True iff exp(t L2) - exp(t L1) is completely positive at each sample.

    When L2 - L1 is completely positive this holds for every t >= 0; the
    check verifies the Choi matrix of the difference is PSD within
    ``psd_slack`` at the sampled times.
    """
    if np.asarray(mat1).shape != np.asarray(mat2).shape:
        raise ValueError("generators must act on the same algebra")
    m1 = np.asarray(mat1, dtype=complex)
    m2 = np.asarray(mat2, dtype=complex)
    for t in t_samples:
        diff = expm(t * m2) - expm(t * m1)
        j = superop_to_choi(diff)
        w = np.linalg.eigvalsh((j + j.conj().T) / 2.0)
        scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
        if w.size and w[0] < -tol.psd_slack * scale:
            return False
    return True


class KSplit(NamedTuple):
    v: np.ndarray
    c: complex
    cp_drift: bool


def split_k(d: GklsForm, kcand: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Split a drift candidate as kcand = v + c 1 with v in the space.

    Returns None when kcand is not in E + C1.  The flag ``cp_drift`` reports
    whether c + conj(c) >= <v, v> (within ``psd_slack``), the condition under
    which x -> P(x) + kcand x + x kcand* is completely positive, not merely
    conditionally so.
    """
    kcand = np.asarray(kcand, dtype=complex)
    n = d.n
    cols = [vec(v) for v in d.space.basis] + [vec(np.eye(n))]
    design = np.column_stack(cols)
    sol, res = lstsq(design, vec(kcand))
    if res > tol.eig_cut * max(1.0, frob(kcand)):
        return None
    if d.space.dim:
        v = d.space.from_coords(sol[: d.space.dim])
        vv = float(np.real(vec(v).conj() @ d.space.choi_pinv @ vec(v)))
    else:
        v = np.zeros((n, n), dtype=complex)
        vv = 0.0
    c = complex(sol[-1])
    cp_drift = bool(2.0 * c.real >= vv - tol.psd_slack * max(1.0, vv))
    return KSplit(v=v, c=c, cp_drift=cp_drift)


def hamiltonian_lindblad(
    h: np.ndarray, ops: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Unital generator from a Hamiltonian and a family of jump operators:

        L(x) = sum_m v_m x v_m* + k x + x k*,  k = i h - (1/2) sum_m v_m v_m*.

    (Heisenberg picture: L(1) = 0.)
    """
    h = np.asarray(h, dtype=complex)
    if frob(h - h.conj().T) > tol.residual * max(1.0, frob(h)):
        raise NotHermitian("hamiltonian part must be Hermitian")
    n = h.shape[0]
    ops = [np.asarray(v, dtype=complex) for v in ops]
    k = 1j * h - 0.5 * sum(
        (v @ v.conj().T for v in ops), start=np.zeros((n, n), dtype=complex)
    )
    out = _two_sided_term(k)
    if ops:
        out = out + kraus_to_superop(ops)
    return out
