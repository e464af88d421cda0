"""Finitely generated cones, invariant subspaces and quotient maps."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InternalInvariantError
from .exactlp import LinearSystem, lp_feasible
from .numq import (
    QMatrix,
    QVector,
    is_zero_vector,
    primitive,
    rank,
    row_space_basis,
    solve,
    vscale,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorCone:
    generators: tuple
    dim: int

    @property
    def nonzero_generators(self) -> tuple:
        return tuple(g for g in self.generators if not is_zero_vector(g))


@dataclass(frozen=True)
class Halfspace:
    normal: QVector

    def __post_init__(self):
        if is_zero_vector(self.normal):
            raise ValueError("halfspace normal must be nonzero")

    def contains(self, x: Sequence) -> bool:
        return sum(a * b for a, b in zip(self.normal, x)) >= 0


@dataclass(frozen=True)
class Subspace:
    """Span of ``basis`` inside R^ambient_dim; basis is kept in RREF."""

    basis: tuple
    ambient_dim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        if not self.basis:
            return is_zero_vector(v)
        M = QMatrix.from_columns(self.basis, self.ambient_dim)
        return solve(M, v) is not None


def dual_cone(sys) -> GeneratorCone:
    """Generators of the dual of the guard cone: the guard rows themselves."""
    return GeneratorCone(tuple(sys.guard_rows), sys.d)


def is_salient_finite(cone: GeneratorCone) -> tuple[bool, QVector | None]:
    """Whether cone(generators) contains no line; otherwise a witness v with +-v inside.

    For each nonzero generator g_i, asks for nu >= 0 with nu_i >= 1 and
    sum_j nu_j g_j = 0; a solution makes nu_i g_i and its negation members.
    """
    gens = list(cone.nonzero_generators)
    if len(gens) != len(cone.generators):
        log.warning("dropping %d zero generator(s)", len(cone.generators) - len(gens))
    m, d = len(gens), cone.dim
    for i in range(m):
        eq = [(tuple(g[t] for g in gens), 0) for t in range(d)]
        eq.append((tuple(Fraction(int(j == i)) for j in range(m)), 1))
        res = lp_feasible(LinearSystem(m, eq=eq, nonneg=True))
        if res.feasible:
            return False, primitive(vscale(res.point[i], gens[i]))
    return True, None


def invariant_closure(w: Sequence, Ms: Sequence[QMatrix]) -> Subspace:
    """Smallest subspace containing ``w`` and mapped into itself by every M."""
    if is_zero_vector(w):
        raise ValueError("invariant closure of the zero vector")
    d = len(w)
    basis = row_space_basis([tuple(w)], d)
    while True:
        images = [M @ b for M in Ms for b in basis]
        grown = row_space_basis(list(basis) + images, d)
        if len(grown) == len(basis):
            return Subspace(tuple(grown), d)
        basis = grown


def quotient_map(W: Subspace) -> QMatrix:
    """Rational surjection R^d -> R^(d - dim W) with kernel exactly W.

    Using the RREF basis of W, a vector x is reduced by subtracting
    x[p_i] * b_i for each pivot p_i; the map keeps the non-pivot coordinates
    of the result.
    """
    d = W.ambient_dim
    pivots = [next(j for j, a in enumerate(b) if a != 0) for b in W.basis]
    free = [j for j in range(d) if j not in pivots]
    rows = []
    for q in free:
        # coordinate q of x - sum_i x[p_i] b_i
        row = [Fraction(0)] * d
        row[q] = Fraction(1)
        for p, b in zip(pivots, W.basis):
            row[p] -= b[q]
        rows.append(row)
    return QMatrix(rows, cols=d)


def induced_matrices(pi: QMatrix, Ms: Sequence[QMatrix]) -> list[QMatrix]:
    """Matrices B with B pi = pi M, for M leaving ker(pi) invariant."""
    r, d = pi.shape
    if r == 0:
        return [QMatrix.zeros(0, 0) for _ in Ms]
    # pi has full row rank; a right inverse comes from solving pi S = I
    cols = []
    for t in range(r):
        e = tuple(Fraction(int(i == t)) for i in range(r))
        s = solve(pi, e)
        if s is None:
            raise InternalInvariantError("quotient map is not surjective")
        cols.append(s)
    right_inv = QMatrix.from_columns(cols, d)
    out = []
    for M in Ms:
        B = pi @ M @ right_inv
        if B @ pi != pi @ M:
            raise InternalInvariantError("kernel of the quotient map is not invariant")
        out.append(B)
    return out


def check_quotient(W: Subspace, pi: QMatrix) -> bool:
    """rank(pi) = d - dim W and pi kills every basis vector of W."""
    if pi.cols != W.ambient_dim or pi.rows != W.ambient_dim - W.dim:
        return False
    if pi.rows and rank(pi) != pi.rows:
        return False
    return all(is_zero_vector(pi @ b) for b in W.basis)
