"""Independent dense computations used as oracles (sympy based)."""

from __future__ import annotations

from fractions import Fraction

import sympy

from loopterm.polyring import LoopSystem, MultiPoly, monomials_up_to


def _q(x: Fraction):
    return sympy.Rational(x.numerator, x.denominator)


def _f(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def brute_kernel(sys: LoopSystem, degree: int) -> list[tuple]:
    """Basis of all kernel tuples with total degree <= degree, by a dense nullspace.

    Orbit vectors are recomputed here with sympy matrix powers.
    """
    mons = monomials_up_to(sys.k, degree)
    At = [sympy.Matrix(A.rows, A.cols, [_q(x) for x in A.entries]).T for A in sys.matrices]
    cols = []
    index = []
    for i, c in enumerate(sys.guard_rows):
        cv = sympy.Matrix([_q(x) for x in c])
        for e in mons:
            v = cv
            for M, p in zip(At, e):
                v = (M ** p) * v
            cols.append(v)
            index.append((i, e))
    lam = sympy.Matrix.hstack(*cols)
    out = []
    for z in lam.nullspace():
        comps = [dict() for _ in range(sys.n)]
        for (i, e), coef in zip(index, z):
            if coef != 0:
                comps[i][e] = _f(coef)
        out.append(tuple(MultiPoly(sys.k, t) for t in comps))
    return out


def in_span(target: list, columns: list[list]) -> bool:
    """Exact membership of a rational vector in a column span."""
    if not any(target):
        return True
    if not columns:
        return False
    M = sympy.Matrix([[_q(c[r]) for c in columns] for r in range(len(target))])
    aug = M.row_join(sympy.Matrix([_q(t) for t in target]))
    return M.rank() == aug.rank()
