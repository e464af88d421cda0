"""Generators of the kernel module M = ker(phi) inside A^n.

With F_j the characteristic polynomial of A_j^T and S the monomials whose
X_j-degree stays below deg F_j, M is generated by

* R: the linear relations among the vectors phi(s), s in S, and
* F: the tuples F_j e_i.

Restricting to a guard subfamily I gives M_I by running the same
construction on {c_i : i in I}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InternalInvariantError
from .numq import QMatrix, char_poly, is_zero_vector, kernel_basis, solve
from .polyring import (
    LoopSystem,
    MultiPoly,
    divide_univariate,
    monomials_in_box,
    phi,
    pv_add,
    pv_scale,
    pv_zero,
)


@dataclass(frozen=True)
class ModuleBasis:
    generators: tuple  # R generators first, then F_j e_i
    n: int
    k: int
    char_polys: tuple  # F_j as MultiPoly in X_{j+1}
    degree_bounds: tuple  # deg F_j
    subset: tuple  # 0-based guard indices I
    num_relations: int  # |R|
    monomial_set: tuple  # S as (exps, position in I)

    @property
    def relation_generators(self) -> tuple:
        return self.generators[: self.num_relations]

    @property
    def charpoly_generators(self) -> tuple:
        return self.generators[self.num_relations:]


@lru_cache(maxsize=256)
def _char_polys(transposed: tuple) -> tuple:
    k = len(transposed)
    return tuple(MultiPoly.from_univariate(char_poly(M), j, k) for j, M in enumerate(transposed))


def kernel_module_basis(sys: LoopSystem, subset: Sequence[int] | None = None) -> ModuleBasis:
    """Generating set of M_I for the 0-based guard index set ``subset`` (default: all)."""
    subset = tuple(range(sys.n)) if subset is None else tuple(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    sub = sys.restrict(subset)
    k, n = sys.k, len(subset)
    F = _char_polys(sys.transposed_matrices)
    bounds = tuple(f.degree_in(j) for j, f in enumerate(F))
    S = tuple((exps, i) for i in range(n) for exps in monomials_in_box(bounds))
    columns = [sub.orbit_vector(exps, sub.guard_rows[i]) for exps, i in S]
    lam = QMatrix.from_columns(columns, sys.d)
    relations = []
    for r in kernel_basis(lam):
        comps = [dict() for _ in range(n)]
        for coef, (exps, i) in zip(r, S):
            if coef:
                comps[i][exps] = coef
        relations.append(tuple(MultiPoly(k, c) for c in comps))
    charpolys = []
    for j in range(k):
        for i in range(n):
            charpolys.append(tuple(F[j] if t == i else MultiPoly.zero(k) for t in range(n)))
    gens = tuple(relations + charpolys)
    for g in gens:
        if not is_zero_vector(phi(g, sub)):
            raise InternalInvariantError("module generator outside ker(phi)")
    return ModuleBasis(gens, n, k, F, bounds, subset, len(relations), S)


def _reduce(fvec: Sequence[MultiPoly], basis: ModuleBasis):
    """Remainders and per-(j, i) quotients of iterated division by the F_j."""
    rems = []
    quots = {}
    for i, f in enumerate(fvec):
        r = f
        for j, F in enumerate(basis.char_polys):
            P, r = divide_univariate(r, j, F)
            if not P.is_zero():
                quots[(j, i)] = P
        rems.append(r)
    return tuple(rems), quots


def reduce_mod_charpolys(fvec: Sequence[MultiPoly], basis: ModuleBasis) -> tuple[tuple, tuple]:
    """Split f = f' + f'' with f'' in the span of the F generators and f' supported on S."""
    if len(fvec) != basis.n:
        raise ValueError("tuple width does not match the basis")
    rem, _ = _reduce(fvec, basis)
    return rem, tuple(f - r for f, r in zip(fvec, rem))


def represent(fvec: Sequence[MultiPoly], basis: ModuleBasis) -> list[MultiPoly] | None:
    """Coefficients h with sum_g h_g g = fvec, or None when fvec is not in the span."""
    if len(fvec) != basis.n:
        raise ValueError("tuple width does not match the basis")
    rem, quots = _reduce(fvec, basis)
    index = {s: t for t, s in enumerate(basis.monomial_set)}
    target = [Fraction(0)] * len(index)
    for i, r in enumerate(rem):
        for exps, c in r.terms.items():
            t = index.get((exps, i))
            if t is None:
                return None
            target[t] = c
    rel = basis.relation_generators
    if rel:
        cols = []
        for g in rel:
            col = [Fraction(0)] * len(index)
            for i, p in enumerate(g):
                for exps, c in p.terms.items():
                    col[index[(exps, i)]] = c
            cols.append(col)
        x = solve(QMatrix.from_columns(cols, len(index)), target)
        if x is None:
            return None
    elif any(target):
        return None
    else:
        x = ()
    h = [MultiPoly.constant(c, basis.k) for c in x]
    for j in range(basis.k):
        for i in range(basis.n):
            h.append(quots.get((j, i), MultiPoly.zero(basis.k)))
    total = pv_zero(basis.n, basis.k)
    for coef, g in zip(h, basis.generators):
        total = pv_add(total, pv_scale(coef, g))
    if total != tuple(fvec):
        raise InternalInvariantError("module representation does not reproduce the input")
    return h


def module_membership(fvec: Sequence[MultiPoly], sys: LoopSystem, basis: ModuleBasis, check: bool = False) -> bool:
    """Whether fvec lies in M_I, i.e. phi vanishes on it.

    With ``check`` set, membership must also be witnessed by an explicit
    combination of the basis generators.
    """
    if len(fvec) != basis.n:
        raise ValueError("tuple width does not match the basis")
    member = is_zero_vector(phi(fvec, sys.restrict(basis.subset)))
    if check and member and represent(fvec, basis) is None:
        raise InternalInvariantError("kernel element not generated by the computed basis")
    return member
