"""Search for positive elements of kernel modules, with certificates both ways.

YES side: an exact LP over the span of {m * g : g a generator, deg m <= l}
looks for a tuple with nonnegative coefficients and every component nonzero.

NO side: a point a > 0 and a probability vector y with y . g(a) = 0 for every
generator g.  Any f = sum h_g g with components in A^{++} has f(a) > 0
componentwise, so y . f(a) > 0, contradicting y . f(a) = sum h_g(a) y . g(a) = 0.
When the generators include F_j e_i, such a point must have every a_j a
root of F_j, so the rational candidates are finitely many and are enumerated
exactly.

Real quantifier elimination is not attempted; when neither side produces a
certificate within the configured degree the answer is INCONCLUSIVE.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InternalInvariantError
from .exactlp import LinearSystem, gordan_dual, lp_feasible, positive_span_feasible
from .kermod import ModuleBasis, kernel_module_basis
from .numq import QMatrix, QVector, positive_rational_roots, primitive, rref
from .polyring import (
    ALL_NONZERO,
    LoopSystem,
    MultiPoly,
    grlex_key,
    is_positive_tuple,
    monomials_up_to,
    phi,
    pv_eval,
)

log = logging.getLogger(__name__)

YES = "YES"
NO = "NO"
INCONCLUSIVE = "INCONCLUSIVE"

VERIFIED = "verified"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchConfig:
    box: tuple = (Fraction(1, 2), Fraction(2))
    max_degree: int = 8
    max_subdivision_depth: int = 8
    max_boxes: int = 256
    # grid height for Gordan sampling when a basis carries no F_j generators
    max_sample_height: int = 6
    budget_seconds: float | None = None

    def __post_init__(self):
        p, q = (Fraction(x) for x in self.box)
        if not (0 < p <= 1 <= q):
            raise ValueError("box [p, q] needs 0 < p <= 1 <= q")
        object.__setattr__(self, "box", (p, q))
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")


@dataclass(frozen=True)
class PositiveCertificate:
    subset: tuple  # 0-based guard indices
    element: tuple  # tuple of MultiPoly over A^I
    degree: int


@dataclass(frozen=True)
class GordanPointCertificate:
    subset: tuple
    point: QVector
    dual: QVector


@dataclass
class PositivityResult:
    status: str
    certificate: PositiveCertificate | None = None
    refutations: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


@dataclass
class BoxCheck:
    status: str
    boxes: list = field(default_factory=list)  # verified (box, r) pairs
    certificate: GordanPointCertificate | None = None
    detail: str = ""


# YES side


def _coordinates(vectors: Sequence[tuple]) -> list[tuple]:
    coords = set()
    for v in vectors:
        for i, p in enumerate(v):
            for exps in p.terms:
                coords.add((i, exps))
    return sorted(coords, key=lambda t: (t[0], grlex_key(t[1])))


def find_positive_element(basis: ModuleBasis, ell: int) -> tuple | None:
    """A tuple sum_g h_g g (deg h_g <= ell) with nonnegative coefficients and no zero component."""
    if ell < 0:
        raise ValueError("degree bound must be nonnegative")
    k, n = basis.k, basis.n
    spanning = [
        tuple(p.shift(m) for p in g) for g in basis.generators for m in monomials_up_to(k, ell)
    ]
    spanning = [v for v in spanning if any(not p.is_zero() for p in v)]
    if not spanning:
        return None
    coords = _coordinates(spanning)
    if any(not any(c[0] == i for c in coords) for i in range(n)):
        return None
    where = {c: t for t, c in enumerate(coords)}
    rows = []
    for v in spanning:
        row = [Fraction(0)] * len(coords)
        for i, p in enumerate(v):
            for exps, c in p.terms.items():
                row[where[(i, exps)]] = c
        rows.append(row)
    R, pivots = rref(QMatrix(rows, cols=len(coords)))
    r = len(pivots)
    # z = sum_t z[p_t] R_t; unknowns are the pivot coordinates, all >= 0
    pivot_set = set(pivots)
    ineq = []
    for q in range(len(coords)):
        if q not in pivot_set:
            ineq.append((tuple(R[t, q] for t in range(r)), 0))
    for i in range(n):
        sums = [sum((R[t, q] for q, c in enumerate(coords) if c[0] == i), Fraction(0)) for t in range(r)]
        ineq.append((tuple(sums), 1))
    res = lp_feasible(LinearSystem(r, ineq=ineq, nonneg=True))
    if not res.feasible:
        return None
    # prefer a witness of least total degree: cap the support degree and retry
    top = max(sum(coords[q][1]) for q in range(len(coords)) if _combine(res.point, R, q) != 0)
    for cap in range(top):
        eq = [(tuple(R[t, q] for t in range(r)), 0) for q, c in enumerate(coords) if sum(c[1]) > cap]
        capped = lp_feasible(LinearSystem(r, eq=eq, ineq=ineq, nonneg=True))
        if capped.feasible:
            res = capped
            break
    z = [_combine(res.point, R, q) for q in range(len(coords))]
    scaled = primitive(z)
    comps = [dict() for _ in range(n)]
    for (i, exps), c in zip(coords, scaled):
        if c:
            comps[i][exps] = c
    return tuple(MultiPoly(k, c) for c in comps)


def _combine(t, R, q):
    return sum((t[i] * R[i, q] for i in range(len(t))), Fraction(0))


# NO side


def _univariate_coeffs(F: MultiPoly, j: int) -> list[Fraction]:
    deg = F.degree_in(j)
    return [F.coefficient(tuple(e if i == j else 0 for i in range(F.k))) for e in range(deg + 1)]


def _height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


def _in_box(point, box) -> bool:
    p, q = box
    return all(p <= x <= q for x in point)


def candidate_points(basis: ModuleBasis, cfg: SearchConfig) -> list[tuple]:
    """Rational points worth testing for a Gordan certificate, in search order.

    With F_j generators present these are exactly the tuples of positive
    rational roots; otherwise a grid of small-height rationals.
    """
    if basis.char_polys:
        roots = [positive_rational_roots(_univariate_coeffs(F, j)) for j, F in enumerate(basis.char_polys)]
        points = list(itertools.product(*roots))
    else:
        h = cfg.max_sample_height
        values = sorted({Fraction(a, b) for a in range(1, h + 1) for b in range(1, h + 1)})
        points = list(itertools.product(values, repeat=basis.k))
    return sorted(points, key=lambda a: (not _in_box(a, cfg.box), max(map(_height, a)), a))


def _evaluation_matrix(basis: ModuleBasis, point) -> QMatrix:
    cols = [pv_eval(g, point) for g in basis.generators]
    return QMatrix.from_columns(cols, basis.n)


def gordan_at(basis: ModuleBasis, point) -> GordanPointCertificate | None:
    point = tuple(Fraction(x) for x in point)
    y = gordan_dual(_evaluation_matrix(basis, point))
    if y is None:
        return None
    return GordanPointCertificate(basis.subset, point, tuple(y))


def find_gordan_point(basis: ModuleBasis, cfg: SearchConfig, in_box_only: bool = False) -> GordanPointCertificate | None:
    for a in candidate_points(basis, cfg):
        if in_box_only and not _in_box(a, cfg.box):
            continue
        cert = gordan_at(basis, a)
        if cert is not None:
            return cert
    return None


# interval branch and prune


def _interval_eval(f: MultiPoly, box) -> tuple[Fraction, Fraction]:
    """Enclosure of f over a box inside the positive orthant."""
    lo = hi = Fraction(0)
    for exps, c in f.terms.items():
        a = b = Fraction(1)
        for (l, h), e in zip(box, exps):
            if e > 0:
                a *= l ** e
                b *= h ** e
            elif e < 0:
                a *= h ** e
                b *= l ** e
        if c >= 0:
            lo += c * a
            hi += c * b
        else:
            lo += c * b
            hi += c * a
    return lo, hi


def existpos_box_verify(basis: ModuleBasis, cfg: SearchConfig, deadline: float | None = None) -> BoxCheck:
    """Cover [p, q]^k by boxes, each with a fixed combination positive on it.

    ``verified``: every box of the cover carries rationals r whose combination
    sum r_g g has componentwise positive interval enclosure on the box.
    ``refuted``: a rational point of the box with a Gordan certificate.
    ``unknown``: subdivision depth, box budget or time budget exhausted.
    """
    cert = find_gordan_point(basis, cfg, in_box_only=True)
    if cert is not None:
        return BoxCheck(REFUTED, certificate=cert)
    p, q = cfg.box
    stack = [(tuple((p, q) for _ in range(basis.k)), 0)]
    done = []
    seen = 0
    while stack:
        box, depth = stack.pop()
        seen += 1
        if seen > cfg.max_boxes:
            return BoxCheck(UNKNOWN, boxes=done, detail="box budget exhausted")
        if deadline is not None and time.monotonic() > deadline:
            return BoxCheck(UNKNOWN, boxes=done, detail="time budget exhausted")
        mid = tuple((l + h) / 2 for l, h in box)
        G = _evaluation_matrix(basis, mid)
        # ask for positivity at the corners too, so r does not lean on
        # generators that vanish somewhere in the box
        corners = [_evaluation_matrix(basis, a) for a in itertools.product(*box)]
        r = positive_span_feasible(QMatrix([row for M in [G] + corners for row in M.row_tuples()], cols=G.cols))
        if r is None:
            r = positive_span_feasible(G)
        if r is None:
            y = gordan_dual(G)
            return BoxCheck(REFUTED, certificate=GordanPointCertificate(basis.subset, mid, tuple(y)))
        combo = [sum((g[i] * c for g, c in zip(basis.generators, r) if c), MultiPoly.zero(basis.k)) for i in range(basis.n)]
        if all(_interval_eval(f, box)[0] > 0 for f in combo):
            done.append((box, tuple(r)))
            continue
        if depth >= cfg.max_subdivision_depth:
            return BoxCheck(UNKNOWN, boxes=done, detail=f"depth limit reached near {[str(x) for x in mid]}")
        halves = [((l, (l + h) / 2), ((l + h) / 2, h)) for l, h in box]
        for child in itertools.product(*halves):
            stack.append((child, depth + 1))
    return BoxCheck(VERIFIED, boxes=done)


# verifiers


def _embed(cert: PositiveCertificate, n: int, k: int) -> tuple:
    full = [MultiPoly.zero(k) for _ in range(n)]
    for idx, f in zip(cert.subset, cert.element):
        full[idx] = f
    return tuple(full)


def verify_positive_certificate(cert: PositiveCertificate, sys: LoopSystem) -> bool:
    """phi of the embedded element is zero; coefficients >= 0; no zero component."""
    if not cert.subset or len(cert.subset) != len(cert.element):
        return False
    if len(set(cert.subset)) != len(cert.subset) or not all(0 <= i < sys.n for i in cert.subset):
        return False
    if any(f.k != sys.k or not f.is_polynomial() for f in cert.element):
        return False
    if not is_positive_tuple(cert.element, ALL_NONZERO):
        return False
    return all(x == 0 for x in phi(_embed(cert, sys.n, sys.k), sys))


def verify_no_certificate(cert: GordanPointCertificate, basis: ModuleBasis) -> bool:
    """a > 0, y >= 0, sum y = 1 and y . g(a) = 0 for every generator, exactly."""
    if tuple(cert.subset) != tuple(basis.subset):
        return False
    a, y = cert.point, cert.dual
    if len(a) != basis.k or len(y) != basis.n:
        return False
    if any(x <= 0 for x in a) or any(x < 0 for x in y) or sum(y) != 1:
        return False
    for g in basis.generators:
        if sum((yi * gi(a) for yi, gi in zip(y, g)), Fraction(0)) != 0:
            return False
    return True


# driver


def nonempty_subsets(n: int) -> list[tuple]:
    """Nonempty subsets of range(n) by increasing size, then lexicographically."""
    return [c for size in range(1, n + 1) for c in itertools.combinations(range(n), size)]


def decide_positive_nonzero(sys: LoopSystem, cfg: SearchConfig, deadline: float | None = None) -> PositivityResult:
    """Does M contain a nonzero tuple with nonnegative coefficients?

    YES carries a PositiveCertificate; NO carries a Gordan certificate for
    every nonempty guard subset; INCONCLUSIVE reports what was tried.
    """
    subsets = nonempty_subsets(sys.n)
    bases = {I: kernel_module_basis(sys, I) for I in subsets}
    refuted = {}
    for I in subsets:
        cert = find_gordan_point(bases[I], cfg)
        if cert is not None:
            if not verify_no_certificate(cert, bases[I]):
                raise InternalInvariantError("Gordan certificate failed verification")
            refuted[I] = cert
    reached = {}
    out_of_time = False
    for ell in range(cfg.max_degree + 1):
        for I in subsets:
            if I in refuted and ell > 0:
                continue
            if deadline is not None and time.monotonic() > deadline:
                out_of_time = True
                break
            elem = find_positive_element(bases[I], ell)
            reached[I] = ell
            if elem is None:
                continue
            if I in refuted:
                raise InternalInvariantError(f"positive element and Gordan point both found for subset {I}")
            cert = PositiveCertificate(I, elem, ell)
            if not verify_positive_certificate(cert, sys):
                raise InternalInvariantError("positive certificate failed verification")
            log.debug("positive element for subset %s at degree %d", I, ell)
            return PositivityResult(YES, certificate=cert, refutations=refuted)
        if len(refuted) == len(subsets):
            return PositivityResult(NO, refutations=refuted)
        if out_of_time:
            break
    diagnostics = {}
    for I in subsets:
        if I in refuted:
            continue
        box = existpos_box_verify(bases[I], cfg, deadline)
        diagnostics[I] = {
            "max_degree_tried": reached.get(I, -1),
            "candidate_points": [tuple(a) for a in candidate_points(bases[I], cfg)],
            "box_check": box.status,
            "box_detail": box.detail,
        }
    return PositivityResult(INCONCLUSIVE, refutations=refuted, diagnostics=diagnostics)
