"""Decide whether some nonzero vector has its whole orbit inside the guard cone.

A nonzero v with every A^w v in C exists iff the orbit of the dual cone under
the transposed updates lies in a closed halfspace.  That question is settled
by induction on the dimension: a salient orbit cone lies in a halfspace; a
non-salient one contains a line through some w, and the problem passes to the
quotient by the smallest invariant subspace containing w.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .conegeom import Subspace, induced_matrices, invariant_closure, quotient_map
from .errors import (
    DimensionMismatchError,
    InternalInvariantError,
    LoopSystemError,
    NonCommutingError,
    SingularMatrixError,
    ZeroGuardRowError,
)
from .numq import QMatrix, QVector, is_invertible, is_zero_vector, matrix, parse_rational, unit_vector
from .polyring import LoopSystem
from .positivity import (
    INCONCLUSIVE,
    NO,
    YES,
    PositiveCertificate,
    PositivityResult,
    SearchConfig,
    decide_positive_nonzero,
)

log = logging.getLogger(__name__)

NONTERMINATING_WITNESS_EXISTS = "NONTERMINATING_WITNESS_EXISTS"
NO_WITNESS = "NO_WITNESS"

CONTAINED = "CONTAINED"
NOT_CONTAINED = "NOT_CONTAINED"

# how a trace level was resolved
BASE_CASE = "base_case"
SALIENT = "salient"
NOT_SALIENT = "not_salient"
EMPTY_QUOTIENT = "empty_quotient"
ZERO_IMAGES = "zero_images"
UNRESOLVED = "inconclusive"


@dataclass
class TraceLevel:
    dimension: int
    acting: tuple  # matrices acting at this level (A_i^T at the top)
    generators: tuple  # nonzero cone generators at this level
    outcome: str
    positivity: PositivityResult | None = None
    w: QVector | None = None
    subspace: Subspace | None = None
    quotient: QMatrix | None = None
    induced: tuple = ()
    images: tuple = ()  # nonzero images of the generators under the quotient map
    result: str | None = None  # CONTAINED / NOT_CONTAINED at a leaf


@dataclass
class Decision:
    answer: str
    trace: list = field(default_factory=list)
    witness: QVector | None = None

    @property
    def decided(self) -> bool:
        return self.answer != INCONCLUSIVE


def _coerce_matrix(M) -> QMatrix:
    if isinstance(M, QMatrix):
        return M
    try:
        return matrix([[parse_rational(x) if isinstance(x, str) else x for x in row] for row in M])
    except (TypeError, ValueError) as exc:
        raise DimensionMismatchError(f"bad matrix: {exc}") from exc


def validate_system(matrices: Sequence, guard_rows: Sequence) -> LoopSystem:
    """Check the instance assumptions and build a LoopSystem.

    Raises DimensionMismatchError, SingularMatrixError, NonCommutingError or
    ZeroGuardRowError (all LoopSystemError).
    """
    mats = [_coerce_matrix(M) for M in matrices]
    if not mats:
        raise DimensionMismatchError("at least one update matrix is required")
    d = mats[0].rows
    if d < 1:
        raise DimensionMismatchError("dimension must be at least 1")
    for i, M in enumerate(mats):
        if M.shape != (d, d):
            raise DimensionMismatchError(f"update matrix {i} has shape {M.shape}, expected {(d, d)}")
    rows = []
    for i, c in enumerate(guard_rows):
        row = tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in c)
        if len(row) != d:
            raise DimensionMismatchError(f"guard row {i} has length {len(row)}, expected {d}")
        rows.append(row)
    if not rows:
        raise DimensionMismatchError("at least one guard row is required")
    for i, c in enumerate(rows):
        if is_zero_vector(c):
            raise ZeroGuardRowError(i)
    for i, M in enumerate(mats):
        if not is_invertible(M):
            raise SingularMatrixError(i)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if mats[i] @ mats[j] != mats[j] @ mats[i]:
                raise NonCommutingError(i, j)
    return LoopSystem(tuple(mats), tuple(rows))


def extract_w(cert: PositiveCertificate, sys: LoopSystem) -> QVector:
    """(A^T)^e c_i for the least grlex monomial X^e of the first nonzero component."""
    pos, f = next((t, f) for t, f in enumerate(cert.element) if not f.is_zero())
    i0 = cert.subset[pos]
    exps = f.monomials()[0]
    w = sys.orbit_vector(exps, sys.guard_rows[i0])
    if is_zero_vector(w):
        raise InternalInvariantError("extracted vector is zero")
    return w


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def decide_halfspace_containment(
    Ms: Sequence[QMatrix],
    gens: Sequence[QVector],
    cfg: SearchConfig,
    dim: int | None = None,
    deadline: float | None = None,
) -> tuple[str, list]:
    """Is the orbit of cone(gens) under the commuting invertible Ms inside a closed halfspace?

    Returns (CONTAINED | NOT_CONTAINED | INCONCLUSIVE, trace levels).
    """
    Ms = tuple(Ms)
    d = dim if dim is not None else (Ms[0].rows if Ms else len(gens[0]))
    gens = tuple(tuple(g) for g in gens if not is_zero_vector(g))
    trace = []
    while True:
        level = TraceLevel(d, Ms, gens, outcome=UNRESOLVED)
        trace.append(level)
        if d == 0:
            level.outcome, level.result = EMPTY_QUOTIENT, NOT_CONTAINED
            return NOT_CONTAINED, trace
        if not gens:
            level.outcome, level.result = ZERO_IMAGES, CONTAINED
            return CONTAINED, trace
        if d == 1:
            level.outcome = BASE_CASE
            same_sign = len({_sign(g[0]) for g in gens}) == 1
            positive = all(M[0, 0] > 0 for M in Ms)
            level.result = CONTAINED if same_sign and positive else NOT_CONTAINED
            return level.result, trace
        sys = LoopSystem.from_acting(Ms, gens)
        pos = decide_positive_nonzero(sys, cfg, deadline=deadline)
        level.positivity = pos
        if pos.status == NO:
            level.outcome, level.result = SALIENT, CONTAINED
            return CONTAINED, trace
        if pos.status == INCONCLUSIVE:
            level.outcome = UNRESOLVED
            return INCONCLUSIVE, trace
        assert pos.status == YES
        level.outcome = NOT_SALIENT
        w = extract_w(pos.certificate, sys)
        W = invariant_closure(w, Ms)
        pi = quotient_map(W)
        Bs = tuple(induced_matrices(pi, Ms))
        images = tuple(pi @ g for g in gens)
        level.w, level.subspace, level.quotient, level.induced = w, W, pi, Bs
        level.images = tuple(v for v in images if not is_zero_vector(v))
        log.debug("dimension %d: not salient, quotient by subspace of dimension %d", d, W.dim)
        Ms, gens, d = Bs, level.images, d - W.dim


def _pull_back_witness(trace: list) -> QVector | None:
    leaf = trace[-1]
    if leaf.result != CONTAINED:
        return None
    if leaf.outcome == BASE_CASE:
        u = (Fraction(_sign(leaf.generators[0][0])),)
    elif leaf.outcome == ZERO_IMAGES:
        u = unit_vector(leaf.dimension, 0)
    else:
        return None
    for level in reversed(trace[:-1]):
        u = level.quotient.T @ u
    return tuple(u)


def decide_nontermination(sys: LoopSystem, cfg: SearchConfig | None = None) -> Decision:
    """Can the loop ``while x in C: x := A_i x`` run forever from some x != 0?"""
    cfg = cfg or SearchConfig()
    deadline = None
    if cfg.budget_seconds is not None:
        deadline = time.monotonic() + cfg.budget_seconds
    status, trace = decide_halfspace_containment(
        sys.transposed_matrices, sys.guard_rows, cfg, dim=sys.d, deadline=deadline
    )
    if status == CONTAINED:
        return Decision(NONTERMINATING_WITNESS_EXISTS, trace, _pull_back_witness(trace))
    if status == NOT_CONTAINED:
        return Decision(NO_WITNESS, trace)
    return Decision(INCONCLUSIVE, trace)


__all__ = [
    "CONTAINED",
    "NOT_CONTAINED",
    "NONTERMINATING_WITNESS_EXISTS",
    "NO_WITNESS",
    "INCONCLUSIVE",
    "Decision",
    "TraceLevel",
    "LoopSystemError",
    "validate_system",
    "extract_w",
    "decide_halfspace_containment",
    "decide_nontermination",
]
