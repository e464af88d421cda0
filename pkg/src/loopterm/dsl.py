"""Loop DSL and JSON instance formats, with printers for both.

DSL grammar::

    program := "while" guard "do" "{" update ("|" update)* "}"
    guard   := ineq ("&&" ineq)*
    ineq    := linexpr ">=" "0"
    linexpr := term (("+"|"-") term)*
    term    := [rational "*"] var
    var     := "x" digit+
    update  := "x" ":=" "[" row (";" row)* "]" "*" "x"
    row     := rational ("," rational)*
    rational:= ["-"] digit+ ["/" digit+]

A leading "-" before the first term of a guard is read as a coefficient of -1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError, InstanceSyntaxError
from .numq import format_rational, parse_rational
from .polyring import LoopSystem
from .termination import validate_system

SCHEMA_VERSION = 1

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_]\w*)|(?P<op>:=|>=|&&|[|{}\[\];,*+\-/]))")


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while True:
        # skip whitespace by hand to keep line numbers right
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= len(text):
            tokens.append(Token("eof", "", line, pos - line_start + 1))
            return tokens
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise InstanceSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), line, m.start(kind) - line_start + 1))
        pos = m.end()


class _DslParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _fail(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise InstanceSyntaxError(f"expected {expected}, found {found}", t.line, t.column)

    def _accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "ident") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def _expect(self, text: str):
        if not self._accept(text):
            self._fail(repr(text))

    def _rational(self) -> Fraction:
        neg = self._accept("-")
        if self.tok.kind != "num":
            self._fail("a number")
        num = int(self.tok.text)
        self.i += 1
        den = 1
        if self._accept("/"):
            if self.tok.kind != "num":
                self._fail("a denominator")
            den = int(self.tok.text)
            if den == 0:
                raise InstanceSyntaxError("zero denominator", self.tok.line, self.tok.column)
            self.i += 1
        value = Fraction(num, den)
        return -value if neg else value

    def _var(self) -> int:
        t = self.tok
        m = re.fullmatch(r"x(\d+)", t.text) if t.kind == "ident" else None
        if m is None or int(m.group(1)) == 0:
            self._fail("a variable x1, x2, ...")
        self.i += 1
        return int(m.group(1))

    def _term(self, sign: int) -> tuple[int, Fraction]:
        coef = Fraction(1)
        if self.tok.kind == "num" or (self.tok.text == "-" and self.tokens[self.i + 1].kind == "num"):
            coef = self._rational()
            self._expect("*")
        elif self._accept("-"):
            sign = -sign
        return self._var(), sign * coef

    def _ineq(self) -> dict:
        coeffs: dict[int, Fraction] = {}
        sign = 1
        while True:
            var, c = self._term(sign)
            coeffs[var] = coeffs.get(var, Fraction(0)) + c
            if self._accept("+"):
                sign = 1
            elif self._accept("-"):
                sign = -1
            else:
                break
        self._expect(">=")
        t = self.tok
        if t.kind != "num" or int(t.text) != 0:
            self._fail("'0'")
        self.i += 1
        return coeffs

    def _update(self) -> list[list[Fraction]]:
        start = self.tok
        self._expect("x")
        self._expect(":=")
        self._expect("[")
        rows = [[self._rational()]]
        while True:
            if self._accept(","):
                rows[-1].append(self._rational())
            elif self._accept(";"):
                rows.append([self._rational()])
            else:
                break
        self._expect("]")
        self._expect("*")
        self._expect("x")
        if any(len(r) != len(rows) for r in rows):
            raise DimensionMismatchError(
                f"update matrix at line {start.line}, column {start.column} is not square"
            )
        return rows

    def parse(self) -> tuple[list, list]:
        self._expect("while")
        guards = [self._ineq()]
        while self._accept("&&"):
            guards.append(self._ineq())
        self._expect("do")
        self._expect("{")
        updates = [self._update()]
        while self._accept("|"):
            updates.append(self._update())
        self._expect("}")
        if self.tok.kind != "eof":
            self._fail("end of input")
        return guards, updates


def parse_loop_dsl(text: str) -> LoopSystem:
    """Parse and validate a loop written in the DSL; d is the update matrix size."""
    guards, updates = _DslParser(text).parse()
    d = len(updates[0])
    for j, A in enumerate(updates):
        if len(A) != d:
            raise DimensionMismatchError(f"update {j} is {len(A)}x{len(A)}, expected {d}x{d}")
    top = max(v for g in guards for v in g)
    if top > d:
        raise DimensionMismatchError(f"guard mentions x{top} but the updates act on {d} variables")
    rows = [tuple(g.get(v, Fraction(0)) for v in range(1, d + 1)) for g in guards]
    return validate_system(updates, rows)


def _linexpr(row) -> str:
    out = ""
    for v, c in enumerate(row, start=1):
        if c == 0:
            continue
        if not out:
            out = f"x{v}" if c == 1 else f"{format_rational(c)}*x{v}"
        else:
            op = "+" if c > 0 else "-"
            a = abs(c)
            out += f" {op} x{v}" if a == 1 else f" {op} {format_rational(a)}*x{v}"
    return out


def print_loop_dsl(sys: LoopSystem) -> str:
    guard = " && ".join(f"{_linexpr(c)} >= 0" for c in sys.guard_rows)
    updates = " | ".join(
        "x := [" + ";".join(",".join(format_rational(a) for a in row) for row in A.tolist()) + "] * x"
        for A in sys.matrices
    )
    return f"while {guard} do {{ {updates} }}\n"


# JSON


def _rational_at(value, path: str) -> Fraction:
    if not isinstance(value, str):
        raise InstanceSyntaxError(f"{path}: rationals must be written as \"p/q\" strings, got {value!r}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise InstanceSyntaxError(f"{path}: {exc}") from None


def _list_at(value, path: str) -> list:
    if not isinstance(value, list):
        raise InstanceSyntaxError(f"{path}: expected an array")
    return value


def load_instance_json(text: str) -> tuple[LoopSystem, dict]:
    """Parse a JSON instance; returns the validated system and its raw options."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise InstanceSyntaxError("instance must be a JSON object", 1, 1)
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InstanceSyntaxError(f"unsupported schema_version {version!r}")
    for key in ("matrices", "guard"):
        if key not in data:
            raise InstanceSyntaxError(f"missing field {key!r}")
    mats = [
        [[_rational_at(x, f"matrices[{j}][{r}][{c}]") for c, x in enumerate(_list_at(row, f"matrices[{j}][{r}]"))]
         for r, row in enumerate(_list_at(M, f"matrices[{j}]"))]
        for j, M in enumerate(_list_at(data["matrices"], "matrices"))
    ]
    guard = [
        tuple(_rational_at(x, f"guard[{i}][{c}]") for c, x in enumerate(_list_at(row, f"guard[{i}]")))
        for i, row in enumerate(_list_at(data["guard"], "guard"))
    ]
    for key, actual in (("k", len(mats)), ("n", len(guard))):
        if key in data and data[key] != actual:
            raise DimensionMismatchError(f"declared {key}={data[key]} but found {actual}")
    for j, M in enumerate(mats):
        if any(len(row) != len(M) for row in M):
            raise DimensionMismatchError(f"matrices[{j}] is not square")
    if "d" in data:
        for j, M in enumerate(mats):
            if len(M) != data["d"]:
                raise DimensionMismatchError(f"declared d={data['d']} but matrices[{j}] is {len(M)}x{len(M)}")
    options = data.get("options") or {}
    if not isinstance(options, dict):
        raise InstanceSyntaxError("options: expected an object")
    return validate_system(mats, guard), options


def parse_instance_json(text: str) -> LoopSystem:
    return load_instance_json(text)[0]


def instance_to_json(sys: LoopSystem, options: dict | None = None) -> dict:
    data = {
        "schema_version": SCHEMA_VERSION,
        "d": sys.d,
        "k": sys.k,
        "n": sys.n,
        "matrices": [[[format_rational(a) for a in row] for row in A.tolist()] for A in sys.matrices],
        "guard": [[format_rational(a) for a in c] for c in sys.guard_rows],
    }
    if options:
        data["options"] = options
    return data


def print_instance_json(sys: LoopSystem, options: dict | None = None) -> str:
    return json.dumps(instance_to_json(sys, options), indent=2) + "\n"
