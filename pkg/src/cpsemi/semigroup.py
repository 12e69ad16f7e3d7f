"""Semigroups exp(tL), their metric operator spaces, units and covariance.

A unit of the semigroup P_t = exp(tL) is the family

    T(t) = exp(c t) * exp(t (v + k)),

for a scalar c and a member v of the generator's metric operator space E;
each T(t) lies in the space of P_t and e^{alpha t} P_t - (x -> T x T*) is
completely positive for alpha = <v, v> + 2 Re c.  The covariance of two
units has the closed form c1 + conj(c2) + <v1, v2>, and is recovered
numerically by the uniform-partition estimator

    (m / t) * Log <T1(t/m), T2(t/m)>_{E(t/m)}

with the principal logarithm.  The dimension of E is the rank of the
generator and the numerical index of the minimal dilation of the semigroup
to a semigroup of *-endomorphisms; it is also recovered as the rank of the
centered Gram matrix of the covariance kernel over any spanning sample of
units.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, LogBranch, NotMember, OwnerMismatch
from .generator import GklsForm, decompose
from .numerics import DEFAULT_TOL, Tolerances, expm, rank_tol
from .opspace import MetricOperatorSpace, space_from_cp_map
from .superop import ad_superop, dim_of, superop_to_choi, vec

__all__ = [
    "evolve",
    "space_at",
    "product_system_check",
    "Unit",
    "make_unit",
    "unit_matrix",
    "verify_unit",
    "covariance",
    "covariance_estimate",
    "index",
    "CovarianceKernel",
    "covariance_kernel",
    "gram_dimension",
    "sample_units",
]

# Guard zone around the branch cut of the principal logarithm.
_BRANCH_ANGLE = 1e-8
_BRANCH_MODULUS = 1e-300


def evolve(mat: np.ndarray, t: float) -> np.ndarray:
    """Superoperator matrix of exp(t L)."""
    if t < 0:
        raise ValueError("evolution time must be nonnegative")
    return expm(t * np.asarray(mat, dtype=complex))


def space_at(mat: np.ndarray, t: float, tol: Tolerances = DEFAULT_TOL) -> MetricOperatorSpace:
    """Metric operator space of exp(t L) for t > 0.

    :raises NotCP: if exp(t L) is not completely positive within tolerance
        (i.e. L was not a generator to begin with).
    """
    if t <= 0:
        raise ValueError("the space is defined for strictly positive times")
    return space_from_cp_map(evolve(mat, t), tol)


def product_system_check(
    mat: np.ndarray, s: float, t: float, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Check E(s) E(t) spans E(s + t).

    Compares, by numerical rank, the span of pairwise products of basis
    elements of the spaces at times s and t against the space at time s + t
    (equality of spans: each must contain the other).
    """
    es = space_at(mat, s, tol)
    et = space_at(mat, t, tol)
    est = space_at(mat, s + t, tol)
    prod_cols = []
    for x in es.basis:
        for y in et.basis:
            w = vec(x @ y)
            nrm = np.linalg.norm(w)
            if nrm > 0:
                prod_cols.append(w / nrm)
    target_cols = []
    for z in est.basis:
        w = vec(z)
        nrm = np.linalg.norm(w)
        if nrm > 0:
            target_cols.append(w / nrm)
    if not prod_cols or not target_cols:
        return bool(not prod_cols and not target_cols)
    a = np.column_stack(prod_cols)
    b = np.column_stack(target_cols)
    r_prod = rank_tol(a, tol)
    r_target = rank_tol(b, tol)
    r_union = rank_tol(np.column_stack([a, b]), tol)
    return r_prod == r_target == r_union


@dataclass(frozen=True, eq=False)
class Unit:
    """A unit of exp(tL), recorded by its scalar part and the coordinates of
    its vector part over the owner's space basis."""

    c: complex
    v_coords: np.ndarray
    owner: GklsForm


def make_unit(d: GklsForm, c: complex, v_coords: Sequence[complex]) -> Unit:
    coords = np.asarray(list(v_coords), dtype=complex)
    if coords.size != d.space.dim:
        raise DimensionMismatch(
            f"need {d.space.dim} coordinates, got {coords.size}"
        )
    return Unit(c=complex(c), v_coords=coords, owner=d)


def unit_matrix(u: Unit, t: float) -> np.ndarray:
    """The operator T(t) = exp(c t) exp(t (v + k)) of a unit."""
    d = u.owner
    v = d.space.from_coords(u.v_coords)
    return np.exp(u.c * t) * expm(t * (v + d.k))


def verify_unit(
    mat: np.ndarray,
    u: Unit,
    t_samples: Sequence[float] = (0.1, 0.5, 1.0),
    tol: Tolerances = DEFAULT_TOL,
    alpha: float | None = None,
) -> bool:
    """Verify the defining property of a unit against the semigroup of ``mat``.

    For each sampled t, checks that T(t) is a member of the space of exp(tL)
    and that the Choi matrix of e^{alpha t} exp(tL) - (x -> T x T*) is PSD
    within ``psd_slack``, with alpha = <v, v> + 2 Re c by default.
    """
    if alpha is None:
        alpha = float(np.vdot(u.v_coords, u.v_coords).real + 2.0 * u.c.real)
    for t in t_samples:
        big = evolve(mat, t)
        tt = unit_matrix(u, t)
        space = space_from_cp_map(big, tol)
        if space.membership(tt, tol) is None:
            return False
        diff = np.exp(alpha * t) * big - ad_superop(tt)
        j = superop_to_choi(diff)
        w = np.linalg.eigvalsh((j + j.conj().T) / 2.0)
        scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
        if w.size and w[0] < -tol.psd_slack * scale:
            return False
    return True


def covariance(d: GklsForm, u1: Unit, u2: Unit) -> complex:
    """Closed-form covariance c1 + conj(c2) + <v1, v2> of two units over ``d``."""
    if u1.owner is not d or u2.owner is not d:
        raise OwnerMismatch("both units must be built over the given form")
    return complex(u1.c + np.conj(u2.c) + np.vdot(u2.v_coords, u1.v_coords))


def covariance_estimate(
    mat: np.ndarray,
    u1: Unit,
    u2: Unit,
    t: float = 1.0,
    m: int = 512,
    tol: Tolerances = DEFAULT_TOL,
) -> complex:
    """Uniform-partition estimate of the covariance of two units.

    Evaluates (m / t) * Log <T1(t/m), T2(t/m)> in the space of exp((t/m) L),
    with the principal logarithm.

    :raises NotMember: if a unit operator leaves the step space (the step
        t/m is too coarse for the membership tolerance).
    :raises LogBranch: if the inner product lands on or too close to the
        branch cut of the principal logarithm.
    """
    if u1.owner is not u2.owner:
        raise OwnerMismatch("units must share an owner")
    if t <= 0 or m < 1:
        raise ValueError("need t > 0 and m >= 1")
    delta = t / m
    step_space = space_at(mat, delta, tol)
    t1 = unit_matrix(u1, delta)
    t2 = unit_matrix(u2, delta)
    if step_space.membership(t1, tol) is None:
        raise NotMember("first unit operator is not in the step space")
    if step_space.membership(t2, tol) is None:
        raise NotMember("second unit operator is not in the step space")
    z = complex(vec(t2).conj() @ step_space.choi_pinv @ vec(t1))
    if abs(z) < _BRANCH_MODULUS:
        raise LogBranch("inner product vanished; logarithm undefined")
    if np.pi - abs(np.angle(z)) < _BRANCH_ANGLE:
        raise LogBranch("inner product too close to the negative real axis")
    return complex(m / t) * np.log(z)


def index(mat: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical index of the semigroup generated by ``mat``: the dimension
    of the metric operator space of its generator (equals the index of the
    minimal dilation to a semigroup of *-endomorphisms)."""
    return decompose(mat, tol).space.dim


@dataclass(frozen=True, eq=False)
class CovarianceKernel:
    """Covariance values of a finite sample of units."""

    units: tuple[Unit, ...]
    matrix: np.ndarray


def covariance_kernel(d: GklsForm, units: Sequence[Unit]) -> CovarianceKernel:
    units = tuple(units)
    size = len(units)
    out = np.empty((size, size), dtype=complex)
    for i, ui in enumerate(units):
        for j, uj in enumerate(units):
            out[i, j] = covariance(d, ui, uj)
    return CovarianceKernel(units=units, matrix=out)


def gram_dimension(kernel: CovarianceKernel, tol: Tolerances = DEFAULT_TOL) -> int:
    """Rank of the centered Gram matrix of a covariance kernel.

    With base point x0 (the first sample) the centered matrix is
    G[m, m'] = c(x_m, x_m') - c(x_m, x0) - c(x0, x_m') + c(x0, x0); its rank
    recovers the dimension of the space spanned by the vector parts, i.e.
    the index.
    """
    size = len(kernel.units)
    if size < 2:
        raise ValueError("need at least two sampled units")
    c = kernel.matrix
    g = c[1:, 1:] - c[1:, :1] - c[:1, 1:] + c[0, 0]
    return rank_tol(g, tol)


def sample_units(d: GklsForm, count: int, seed: int = 0) -> list[Unit]:
    """Deterministic spanning sample of units over a canonical form.

    The first unit is trivial (c = 0, v = 0); the next dim(E) units run
    through the basis directions with scalar parts cycling over {0, 1, i};
    the remainder use random coordinate vectors from the seeded generator.
    """
    if count < 1:
        raise ValueError("need at least one unit")
    rng = np.random.default_rng(seed)
    grid = [0.0, 1.0, 1j]
    dim = d.space.dim
    units = [make_unit(d, 0.0, np.zeros(dim))]
    j = 0
    while len(units) < count and j < dim:
        coords = np.zeros(dim, dtype=complex)
        coords[j] = 1.0
        units.append(make_unit(d, grid[j % 3], coords))
        j += 1
    while len(units) < count:
        coords = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        units.append(make_unit(d, grid[len(units) % 3], coords))
    return units
