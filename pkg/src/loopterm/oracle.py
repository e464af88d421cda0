"""Brute-force checks on truncated orbits, used as ground truth at small sizes.

Each check is one-sided: a definitive answer is sound, silence means nothing.
Words over commuting updates are enumerated by multidegree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .conegeom import GeneratorCone, is_salient_finite
from .exactlp import LinearSystem, lp_feasible
from .numq import QVector, dot
from .polyring import LoopSystem, monomials_up_to

DEFINITIVE_NO = "DEFINITIVE_NO"


def truncated_orbit_generators(sys: LoopSystem, L: int) -> list[QVector]:
    """(A^T)^e c_i for every multidegree e with |e| <= L, deduplicated in order."""
    if L < 0:
        raise ValueError("word bound must be nonnegative")
    seen = set()
    out = []
    for exps in monomials_up_to(sys.k, L):
        for c in sys.guard_rows:
            v = sys.orbit_vector(exps, c)
            if v not in seen:
                seen.add(v)
                out.append(v)
    return out


def oracle_no_witness(sys: LoopSystem, L: int) -> str | None:
    """DEFINITIVE_NO when {v : c_i . A^e v >= 0 for |e| <= L} is {0}.

    For each coordinate j and sign s the system with the extra row
    s * v_j >= 1 is tested; by homogeneity all 2d being infeasible means the
    truncated cone is the origin, and the true witness set is smaller still.
    """
    rows = truncated_orbit_generators(sys, L)
    d = sys.d
    for j in range(d):
        for s in (1, -1):
            extra = tuple(Fraction(s if t == j else 0) for t in range(d))
            res = lp_feasible(LinearSystem(d, ineq=[(r, 0) for r in rows] + [(extra, 1)]))
            if res.feasible:
                return None
    return DEFINITIVE_NO


def oracle_not_salient(sys: LoopSystem, L: int) -> QVector | None:
    """A vector w with +-w in the cone of the truncated orbit, if one exists."""
    gens = truncated_orbit_generators(sys, L)
    salient, witness = is_salient_finite(GeneratorCone(tuple(gens), sys.d))
    return None if salient else witness


def orbit_simulate(v: Sequence, sys: LoopSystem, L: int) -> bool:
    """Whether c_i . A^e v >= 0 for every |e| <= L and every guard row."""
    v = tuple(Fraction(x) for x in v)
    for exps in monomials_up_to(sys.k, L):
        x = v
        for j, e in enumerate(exps):
            for _ in range(e):
                x = sys.matrices[j] @ x
        if any(dot(c, x) < 0 for c in sys.guard_rows):
            return False
    return True
