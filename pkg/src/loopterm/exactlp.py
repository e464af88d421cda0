"""Exact rational linear feasibility with checkable certificates.

Phase-one simplex over fractions with Bland's rule.  A feasible answer
carries a point; an infeasible answer carries a Farkas multiplier vector read
off the final tableau.  Both are re-checked by :func:`check_point` and
:func:`check_farkas`, which share no code with the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numq import QMatrix, QVector

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LinearSystem:
    """Rows ``a . x = b`` (``eq``) and ``a . x >= b`` (``ineq``).

    Variables are free unless ``nonneg`` is set, in which case ``x >= 0`` is
    implied and not listed as rows.
    """

    num_vars: int
    eq: tuple = ()
    ineq: tuple = ()
    nonneg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "eq", tuple((tuple(map(Fraction, a)), Fraction(b)) for a, b in self.eq))
        object.__setattr__(self, "ineq", tuple((tuple(map(Fraction, a)), Fraction(b)) for a, b in self.ineq))
        for a, _ in self.eq + self.ineq:
            if len(a) != self.num_vars:
                raise ValueError("row length does not match num_vars")

    @property
    def rows(self) -> tuple:
        return self.eq + self.ineq


@dataclass(frozen=True)
class FeasibilityResult:
    status: str
    point: QVector | None = None
    # one multiplier per row, equalities first then inequalities
    farkas: QVector | None = None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def _phase_one(A: list[list[Fraction]], b: list[Fraction], n: int):
    """Minimise the sum of artificials for ``A z = b, z >= 0`` (``b >= 0``).

    Returns (value, z, u) where ``u`` is the optimal dual of the phase-one
    problem: ``A^T u <= 0`` and ``b . u = value``.
    """
    m = len(A)
    ncols = n + m
    rows = [list(A[r]) + [Fraction(int(i == r)) for i in range(m)] for r in range(m)]
    rhs = list(b)
    basis = [n + r for r in range(m)]
    cost = [-sum((A[r][j] for r in range(m)), Fraction(0)) for j in range(n)] + [Fraction(0)] * m
    value = sum(rhs, Fraction(0))
    while True:
        enter = next((j for j in range(n) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for r in range(m):
            a = rows[r][enter]
            if a > 0:
                ratio = rhs[r] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        # phase one is bounded below by zero, so a leaving row always exists
        prow = rows[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [x / piv for x in prow]
            rows[leave] = prow
            rhs[leave] = rhs[leave] / piv
        nz = [j for j in range(ncols) if prow[j] != 0]
        for r in range(m):
            if r == leave:
                continue
            f = rows[r][enter]
            if f != 0:
                row = rows[r]
                for j in nz:
                    row[j] -= f * prow[j]
                rhs[r] -= f * rhs[leave]
        f = cost[enter]
        for j in nz:
            cost[j] -= f * prow[j]
        value += f * rhs[leave]
        basis[leave] = enter
    z = [Fraction(0)] * n
    for r, j in enumerate(basis):
        if j < n:
            z[j] = rhs[r]
    # reduced cost of artificial r is 1 - u_r
    u = [1 - cost[n + r] for r in range(m)]
    return value, z, u


def solve_standard(A: Sequence[Sequence], b: Sequence, n: int) -> FeasibilityResult:
    """Feasibility of ``A z = b, z >= 0``.

    The Farkas vector ``y`` (one entry per row) satisfies ``A^T y <= 0`` and
    ``b . y > 0``.
    """
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    signs = []
    for r in range(len(A)):
        if b[r] < 0:
            A[r] = [-x for x in A[r]]
            b[r] = -b[r]
            signs.append(-1)
        else:
            signs.append(1)
    value, z, u = _phase_one(A, b, n)
    if value == 0:
        return FeasibilityResult(FEASIBLE, point=tuple(z))
    return FeasibilityResult(INFEASIBLE, farkas=tuple(s * x for s, x in zip(signs, u)))


def lp_feasible(sys: LinearSystem) -> FeasibilityResult:
    """Exact feasibility of ``sys`` with a point or a Farkas certificate."""
    nv = sys.num_vars
    n_eq, n_in = len(sys.eq), len(sys.ineq)
    # columns: x+ (nv), x- (nv, only if free), slack per inequality
    free = not sys.nonneg
    width = nv * (2 if free else 1) + n_in
    A, b = [], []
    for r, (a, rhs) in enumerate(sys.rows):
        row = list(a)
        if free:
            row += [-x for x in a]
        slack = [Fraction(0)] * n_in
        if r >= n_eq:
            slack[r - n_eq] = Fraction(-1)
        A.append(row + slack)
        b.append(rhs)
    res = solve_standard(A, b, width)
    if res.feasible:
        z = res.point
        x = [z[j] - z[nv + j] for j in range(nv)] if free else list(z[:nv])
        return FeasibilityResult(FEASIBLE, point=tuple(x))
    return res


def check_point(sys: LinearSystem, x: Sequence) -> bool:
    if x is None or len(x) != sys.num_vars:
        return False
    if sys.nonneg and any(v < 0 for v in x):
        return False
    for a, b in sys.eq:
        if sum(p * q for p, q in zip(a, x)) != b:
            return False
    for a, b in sys.ineq:
        if sum(p * q for p, q in zip(a, x)) < b:
            return False
    return True


def check_farkas(sys: LinearSystem, y: Sequence) -> bool:
    """True iff ``y`` proves ``sys`` infeasible.

    Inequality multipliers must be nonnegative; the combined row must vanish
    (or be componentwise <= 0 for nonnegative variables) while the combined
    right-hand side is positive.
    """
    rows = sys.rows
    if y is None or len(y) != len(rows):
        return False
    if any(v < 0 for v in y[len(sys.eq):]):
        return False
    combo = [Fraction(0)] * sys.num_vars
    rhs = Fraction(0)
    for w, (a, b) in zip(y, rows):
        if w:
            for j, v in enumerate(a):
                combo[j] += w * v
            rhs += w * b
    if sys.nonneg:
        ok = all(v <= 0 for v in combo)
    else:
        ok = all(v == 0 for v in combo)
    return ok and rhs > 0


def positive_span_feasible(G: QMatrix) -> QVector | None:
    """Some ``r`` with ``G r >= 1`` componentwise, or None if ``G r > 0`` is impossible."""
    n, m = G.shape
    sys = LinearSystem(m, ineq=[(G.row(i), 1) for i in range(n)])
    res = lp_feasible(sys)
    return res.point if res.feasible else None


def gordan_dual(G: QMatrix) -> QVector | None:
    """Some ``y >= 0`` with ``sum(y) = 1`` and ``G^T y = 0``, or None."""
    n, m = G.shape
    eq = [(G.col(j), 0) for j in range(m)] + [((1,) * n, 1)]
    res = lp_feasible(LinearSystem(n, eq=eq, nonneg=True))
    return res.point if res.feasible else None
