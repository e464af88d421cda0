"""Sparse multivariate (Laurent) polynomials over Q and the loop instance.

A :class:`MultiPoly` maps exponent tuples to nonzero fractions.  Exponents may
be negative, which gives the Laurent ring; :meth:`MultiPoly.is_polynomial`
tells the two apart.  Tuples of polynomials (elements of A^n) are plain
Python tuples of MultiPoly.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .numq import QMatrix, QVector, format_rational, zero_vector

ALL_NONZERO = "all"
SOME_NONZERO = "some"


def grlex_key(exps: tuple) -> tuple:
    """Sort key for graded lexicographic order (X1 > X2 > ... within a degree)."""
    return (sum(exps), exps)


def monomials_up_to(k: int, degree: int) -> list[tuple]:
    """All exponent tuples of total degree <= ``degree``, ascending grlex."""
    return sorted(
        (t for t in itertools.product(range(degree + 1), repeat=k) if sum(t) <= degree), key=grlex_key
    )


def monomials_in_box(bounds: Sequence[int]) -> list[tuple]:
    """Exponent tuples with ``e_j < bounds[j]``, ascending grlex."""
    tuples = [()]
    for b in bounds:
        tuples = [t + (e,) for t in tuples for e in range(b)]
    return sorted(tuples, key=grlex_key)


class MultiPoly:
    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms=None):
        self.k = k
        clean = {}
        if terms:
            for exps, c in dict(terms).items():
                c = Fraction(c)
                if c != 0:
                    exps = tuple(exps)
                    if len(exps) != k:
                        raise ValueError("exponent tuple has the wrong length")
                    clean[exps] = c
        self.terms = clean

    # constructors

    @classmethod
    def zero(cls, k: int) -> MultiPoly:
        return cls(k)

    @classmethod
    def constant(cls, c, k: int) -> MultiPoly:
        return cls(k, {(0,) * k: c})

    @classmethod
    def one(cls, k: int) -> MultiPoly:
        return cls.constant(1, k)

    @classmethod
    def var(cls, j: int, k: int) -> MultiPoly:
        """The variable X_{j+1} (``j`` is 0-based)."""
        return cls.monomial(tuple(int(i == j) for i in range(k)))

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> MultiPoly:
        exps = tuple(exps)
        return cls(len(exps), {exps: c})

    @classmethod
    def from_univariate(cls, coeffs: Sequence, j: int, k: int) -> MultiPoly:
        """Coefficients low to high in the single variable X_{j+1}."""
        return cls(k, {tuple(e if i == j else 0 for i in range(k)): c for e, c in enumerate(coeffs)})

    # queries

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.k == other.k and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(other, self.k)
        return NotImplemented

    def __hash__(self):
        return hash((self.k, frozenset(self.terms.items())))

    def monomials(self) -> list[tuple]:
        """Exponent tuples in ascending grlex order."""
        return sorted(self.terms, key=grlex_key)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, j: int) -> int:
        return max((e[j] for e in self.terms), default=-1)

    def is_polynomial(self) -> bool:
        return all(x >= 0 for e in self.terms for x in e)

    def is_nonneg(self) -> bool:
        return all(c >= 0 for c in self.terms.values())

    def coefficient_sum(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    # arithmetic

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.k != self.k:
                raise ValueError("polynomials over different variable counts")
            return other
        return MultiPoly.constant(other, self.k)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.k, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.k, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            return MultiPoly(self.k, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.k, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.one(self.k)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, exps: Sequence[int]) -> MultiPoly:
        """Multiply by the monomial X^exps."""
        return MultiPoly(self.k, {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()})

    def __call__(self, point: Sequence) -> Fraction:
        """Exact evaluation at a rational point."""
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, p in zip(point, e):
                if p:
                    term *= Fraction(x) ** p
            total += term
        return total

    # text format

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[exps]
            factors = []
            for j, p in enumerate(exps):
                if p == 1:
                    factors.append(f"X{j + 1}")
                elif p != 0:
                    factors.append(f"X{j + 1}^{p}")
            mag = abs(c)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_rational(mag) + "*" + "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.k}, {str(self)!r})"

    @classmethod
    def parse(cls, text: str, k: int) -> MultiPoly:
        return _PolyParser(text, k).parse()


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(X\d+)|(\^)|(\*)|(/)|(\+)|(-))")


class _PolyParser:
    def __init__(self, text: str, k: int):
        self.text = text
        self.k = k
        self.pos = 0

    def _peek(self):
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m or m.end() == m.start():
            return None, None
        if m.lastindex is None:
            return None, None
        return m.lastindex, m

    def _take(self):
        kind, m = self._peek()
        if kind is None:
            raise ValueError(f"unexpected input at offset {self.pos} in {self.text!r}")
        self.pos = m.end()
        return kind, m.group(m.lastindex)

    def _at_end(self):
        return self.text[self.pos:].strip() == ""

    def parse(self) -> MultiPoly:
        result = MultiPoly.zero(self.k)
        sign = 1
        kind, _ = self._peek()
        if kind in (6, 7):
            sign = 1 if self._take()[0] == 6 else -1
        result = result + self._term() * sign
        while not self._at_end():
            kind, _ = self._take()
            if kind not in (6, 7):
                raise ValueError(f"expected '+' or '-' at offset {self.pos} in {self.text!r}")
            result = result + self._term() * (1 if kind == 6 else -1)
        return result

    def _term(self) -> MultiPoly:
        coef = Fraction(1)
        exps = [0] * self.k
        while True:
            kind, tok = self._take()
            if kind == 1:
                value = Fraction(int(tok))
                nk, _ = self._peek()
                if nk == 5:
                    self._take()
                    dk, dtok = self._take()
                    if dk != 1 or int(dtok) == 0:
                        raise ValueError(f"bad denominator in {self.text!r}")
                    value /= int(dtok)
                coef *= value
            elif kind == 2:
                j = int(tok[1:]) - 1
                if not 0 <= j < self.k:
                    raise ValueError(f"variable {tok} out of range for k={self.k}")
                p = 1
                nk, _ = self._peek()
                if nk == 3:
                    self._take()
                    neg = False
                    nk, _ = self._peek()
                    if nk == 7:
                        self._take()
                        neg = True
                    pk, ptok = self._take()
                    if pk != 1:
                        raise ValueError(f"bad exponent in {self.text!r}")
                    p = -int(ptok) if neg else int(ptok)
                exps[j] += p
            else:
                raise ValueError(f"unexpected token {tok!r} in {self.text!r}")
            nk, _ = self._peek()
            if nk != 4:
                break
            self._take()
        return MultiPoly.monomial(exps, coef)


# tuples of polynomials


def pv_zero(n: int, k: int) -> tuple:
    return tuple(MultiPoly.zero(k) for _ in range(n))


def pv_unit(n: int, i: int, k: int) -> tuple:
    return tuple(MultiPoly.one(k) if j == i else MultiPoly.zero(k) for j in range(n))


def pv_add(u: Sequence[MultiPoly], v: Sequence[MultiPoly]) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def pv_sub(u: Sequence[MultiPoly], v: Sequence[MultiPoly]) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def pv_scale(f, v: Sequence[MultiPoly]) -> tuple:
    """Multiply every component by a polynomial or a scalar."""
    return tuple(a * f for a in v)


def pv_is_zero(v: Sequence[MultiPoly]) -> bool:
    return all(a.is_zero() for a in v)


def pv_str(v: Sequence[MultiPoly]) -> list[str]:
    return [str(a) for a in v]


def pv_parse(texts: Sequence[str], k: int) -> tuple:
    return tuple(MultiPoly.parse(t, k) for t in texts)


def pv_eval(v: Sequence[MultiPoly], point: Sequence) -> QVector:
    return tuple(a(point) for a in v)


def is_positive_tuple(fvec: Sequence[MultiPoly], mode: str = ALL_NONZERO) -> bool:
    """Nonnegative coefficients plus the nonzero-component condition of ``mode``."""
    if not all(f.is_nonneg() for f in fvec):
        return False
    if mode == ALL_NONZERO:
        return all(not f.is_zero() for f in fvec)
    if mode == SOME_NONZERO:
        return any(not f.is_zero() for f in fvec)
    raise ValueError(f"unknown mode {mode!r}")


def divide_univariate(f: MultiPoly, j: int, F: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Divide ``f`` by a monic polynomial ``F`` in the single variable X_{j+1}.

    Returns (P, R) with f = P*F + R and deg_{X_j} R < deg F.
    """
    n = F.degree_in(j)
    if F.is_zero() or any(e[i] for e in F.terms for i in range(F.k) if i != j):
        raise ValueError("divisor must be a nonzero univariate polynomial in the given variable")
    lead = tuple(n if i == j else 0 for i in range(F.k))
    if F.terms.get(lead) != 1:
        raise ValueError("divisor is not monic")
    P = {}
    R = dict(f.terms)
    while True:
        high = [e for e in R if e[j] >= n]
        if not high:
            break
        e = max(high, key=lambda t: (t[j], grlex_key(t)))
        c = R[e]
        q = tuple(x - n if i == j else x for i, x in enumerate(e))
        P[q] = P.get(q, 0) + c
        for fe, fc in F.terms.items():
            t = tuple(a + b for a, b in zip(q, fe))
            v = R.get(t, 0) - c * fc
            if v == 0:
                R.pop(t, None)
            else:
                R[t] = v
    return MultiPoly(f.k, P), MultiPoly(f.k, R)


def laurent_normalize(hs: Sequence[MultiPoly]) -> tuple[tuple, list[MultiPoly]]:
    """Smallest monomial X^e making every Laurent polynomial in ``hs`` a polynomial."""
    if not hs:
        return (), []
    k = hs[0].k
    mult = tuple(max([0] + [-e[j] for h in hs for e in h.terms]) for j in range(k))
    return mult, [h.shift(mult) for h in hs]


# matrices and the loop instance


class MatrixPowers:
    """Memoised powers of a fixed list of commuting square matrices."""

    def __init__(self, Ms: Sequence[QMatrix]):
        self.Ms = list(Ms)
        self._powers = [[QMatrix.identity(M.rows)] for M in self.Ms]

    def power(self, j: int, e: int) -> QMatrix:
        if e < 0:
            raise ValueError("negative matrix power")
        pw = self._powers[j]
        while len(pw) <= e:
            pw.append(pw[-1] @ self.Ms[j])
        return pw[e]

    def monomial(self, exps: Sequence[int]) -> QMatrix:
        d = self.Ms[0].rows
        out = QMatrix.identity(d)
        for j, e in enumerate(exps):
            if e:
                out = out @ self.power(j, e)
        return out


def poly_eval_matrix(f: MultiPoly, Ms: Sequence[QMatrix], powers: MatrixPowers | None = None) -> QMatrix:
    """Substitute commuting matrices for the variables of ``f``."""
    if len(Ms) != f.k:
        raise ValueError(f"need {f.k} matrices, got {len(Ms)}")
    if not Ms:
        raise ValueError("no matrices")
    d = Ms[0].rows
    if any(M.shape != (d, d) for M in Ms):
        raise ValueError("matrices must be square and of equal size")
    powers = powers or MatrixPowers(Ms)
    out = QMatrix.zeros(d, d)
    for exps, c in f.terms.items():
        out = out + powers.monomial(exps).scale(c)
    return out


@dataclass(eq=False)
class LoopSystem:
    """Update matrices A_1..A_k and guard rows c_1..c_n (the cone c_i . x >= 0).

    Construct through :func:`loopterm.termination.validate_system` to get the
    invertibility and commutation checks.
    """

    matrices: tuple
    guard_rows: tuple
    _orbit: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.matrices = tuple(self.matrices)
        self.guard_rows = tuple(tuple(Fraction(x) for x in c) for c in self.guard_rows)
        self.transposed_matrices = tuple(A.T for A in self.matrices)

    @property
    def d(self) -> int:
        return self.matrices[0].rows

    @property
    def k(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return len(self.guard_rows)

    def __eq__(self, other):
        if not isinstance(other, LoopSystem):
            return NotImplemented
        return self.matrices == other.matrices and self.guard_rows == other.guard_rows

    def restrict(self, indices: Sequence[int]) -> LoopSystem:
        """Same updates with the guard subfamily ``indices`` (0-based); shares caches."""
        return LoopSystem(self.matrices, [self.guard_rows[i] for i in indices], self._orbit)

    @classmethod
    def from_acting(cls, acting: Sequence[QMatrix], gens: Sequence[QVector]) -> LoopSystem:
        """Instance whose transposed updates are ``acting``."""
        return cls(tuple(M.T for M in acting), tuple(gens))

    def orbit_vector(self, exps: Sequence[int], c: Sequence) -> QVector:
        """(A_1^T)^e1 ... (A_k^T)^ek c, memoised."""
        exps = tuple(exps)
        c = tuple(c)
        key = (exps, c)
        hit = self._orbit.get(key)
        if hit is not None:
            return hit
        j = next((i for i, e in enumerate(exps) if e), None)
        if j is None:
            v = c
        else:
            prev = tuple(e - 1 if i == j else e for i, e in enumerate(exps))
            v = self.transposed_matrices[j] @ self.orbit_vector(prev, c)
        self._orbit[key] = v
        return v


def phi(fvec: Sequence[MultiPoly], sys: LoopSystem) -> QVector:
    """sum_i f_i(A_1^T, ..., A_k^T) c_i."""
    if len(fvec) != sys.n:
        raise ValueError(f"tuple has {len(fvec)} components, system has {sys.n} guard rows")
    out = list(zero_vector(sys.d))
    for f, c in zip(fvec, sys.guard_rows):
        for exps, coef in f.terms.items():
            v = sys.orbit_vector(exps, c)
            for t in range(len(out)):
                out[t] += coef * v[t]
    return tuple(out)

