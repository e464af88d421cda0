"""JSON reports for decisions, and an independent re-checker for them.

The checker re-derives everything it can from the instance and the embedded
data: positive elements are re-multiplied through phi, Gordan points are
re-evaluated against freshly computed module bases, and each quotient step is
re-verified exactly.  It never calls the search routines.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .conegeom import Subspace, check_quotient
from .dsl import SCHEMA_VERSION, instance_to_json, load_instance_json
from .errors import InstanceSyntaxError, LoopSystemError
from .exactlp import LinearSystem, lp_feasible
from .kermod import ModuleBasis, kernel_module_basis
from .numq import QMatrix, format_rational, is_zero_vector, parse_rational, positive_rational_roots, rank
from .oracle import orbit_simulate
from .polyring import LoopSystem, pv_parse, pv_str
from .positivity import (
    GordanPointCertificate,
    PositiveCertificate,
    SearchConfig,
    nonempty_subsets,
    verify_no_certificate,
    verify_positive_certificate,
)
from .termination import (
    BASE_CASE,
    CONTAINED,
    EMPTY_QUOTIENT,
    INCONCLUSIVE,
    NO_WITNESS,
    NONTERMINATING_WITNESS_EXISTS,
    NOT_CONTAINED,
    NOT_SALIENT,
    SALIENT,
    UNRESOLVED,
    ZERO_IMAGES,
    Decision,
    TraceLevel,
)

# depth used when re-simulating a reported witness
WITNESS_CHECK_DEPTH = 6

_SALIENT_NOTE = (
    "salient leaf: a separating halfspace exists but is not constructed, so no explicit witness is given"
)


def qvec(v: Sequence) -> list[str]:
    return [format_rational(x) for x in v]


def qmat(M: QMatrix) -> list[list[str]]:
    return [qvec(row) for row in M.tolist()]


def _vec(data) -> tuple:
    return tuple(parse_rational(x) for x in data)


def _mat(data, cols: int | None = None) -> QMatrix:
    rows = [_vec(r) for r in data]
    return QMatrix(rows, cols=cols if cols is not None else (len(rows[0]) if rows else 0))


def config_to_json(cfg: SearchConfig) -> dict:
    return {
        "box": qvec(cfg.box),
        "max_degree": cfg.max_degree,
        "max_subdivision_depth": cfg.max_subdivision_depth,
        "max_boxes": cfg.max_boxes,
        "max_sample_height": cfg.max_sample_height,
        "budget_seconds": cfg.budget_seconds,
    }


def config_from_json(data: dict, base: SearchConfig | None = None) -> SearchConfig:
    """Apply overrides from an options object; unknown keys are rejected."""
    cfg = base or SearchConfig()
    fields = dict(cfg.__dict__)
    for key, value in data.items():
        if key not in fields:
            raise InstanceSyntaxError(f"options: unknown key {key!r}")
        if key == "box":
            if not isinstance(value, list) or len(value) != 2:
                raise InstanceSyntaxError("options.box: expected [p, q]")
            try:
                value = tuple(parse_rational(x) for x in value)
            except ValueError as exc:
                raise InstanceSyntaxError(f"options.box: {exc}") from None
        elif key == "budget_seconds":
            value = None if value is None else float(value)
        else:
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise InstanceSyntaxError(f"options.{key}: expected a nonnegative integer")
        fields[key] = value
    try:
        return SearchConfig(**fields)
    except ValueError as exc:
        raise InstanceSyntaxError(f"options: {exc}") from None


def basis_to_json(basis: ModuleBasis) -> dict:
    return {
        "subset": list(basis.subset),
        "char_polys": [str(F) for F in basis.char_polys],
        "num_relations": basis.num_relations,
        "generators": [pv_str(g) for g in basis.generators],
    }


def positive_to_json(cert: PositiveCertificate) -> dict:
    return {"subset": list(cert.subset), "element": pv_str(cert.element), "degree": cert.degree}


def gordan_to_json(cert: GordanPointCertificate) -> dict:
    return {"subset": list(cert.subset), "point": qvec(cert.point), "dual": qvec(cert.dual)}


def _positivity_to_json(level: TraceLevel) -> dict | None:
    pos = level.positivity
    if pos is None:
        return None
    out = {
        "status": pos.status,
        "positive_element": positive_to_json(pos.certificate) if pos.certificate else None,
        "gordan_points": [gordan_to_json(c) for c in pos.refutations.values()],
    }
    if pos.diagnostics:
        out["diagnostics"] = [
            {
                "subset": list(I),
                "max_degree_tried": diag["max_degree_tried"],
                "candidate_points": [qvec(a) for a in diag["candidate_points"]],
                "box_check": diag["box_check"],
                "box_detail": diag["box_detail"],
            }
            for I, diag in pos.diagnostics.items()
        ]
    return out


def level_to_json(level: TraceLevel) -> dict:
    out: dict[str, Any] = {
        "dimension": level.dimension,
        "acting": [qmat(M) for M in level.acting],
        "generators": [qvec(g) for g in level.generators],
        "outcome": level.outcome,
        "result": level.result,
        "positivity": _positivity_to_json(level),
    }
    if level.outcome == NOT_SALIENT:
        out.update(
            w=qvec(level.w),
            subspace=[qvec(b) for b in level.subspace.basis],
            quotient=qmat(level.quotient),
            induced=[qmat(B) for B in level.induced],
            images=[qvec(v) for v in level.images],
        )
    return out


def build_report(
    decision: Decision,
    sys: LoopSystem,
    cfg: SearchConfig,
    timings: dict | None = None,
    oracle: dict | None = None,
) -> dict:
    certificates = []
    for t, level in enumerate(decision.trace):
        pos = _positivity_to_json(level)
        if pos is not None:
            certificates.append({"level": t, **pos})
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "loopterm", "version": __version__},
        "instance": instance_to_json(sys),
        "config": config_to_json(cfg),
        "decision": decision.answer,
        "witness": qvec(decision.witness) if decision.witness is not None else None,
        "certificates": certificates,
        "trace": [level_to_json(level) for level in decision.trace],
        "timings": timings or {},
    }
    leaf = decision.trace[-1] if decision.trace else None
    if leaf is not None and leaf.outcome == SALIENT:
        report["note"] = _SALIENT_NOTE
    if oracle is not None:
        report["oracle"] = oracle
    return report


def certificate_bundle(decision: Decision) -> dict:
    """Certificates together with the module bases they refer to."""
    levels = []
    for t, level in enumerate(decision.trace):
        pos = _positivity_to_json(level)
        if pos is None:
            continue
        sys = LoopSystem.from_acting(level.acting, level.generators)
        pos["bases"] = [basis_to_json(kernel_module_basis(sys, I)) for I in nonempty_subsets(sys.n)]
        levels.append({"level": t, **pos})
    return {"schema_version": SCHEMA_VERSION, "decision": decision.answer, "levels": levels}


def dumps(data) -> str:
    """JSON with arrays of scalars kept on one line."""

    def enc(x, ind):
        pad = "  " * ind
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f'{pad}  {json.dumps(k)}: {enc(v, ind + 1)}' for k, v in x.items()]
            return "{\n" + ",\n".join(items) + f"\n{pad}}}"
        if isinstance(x, list):
            if all(not isinstance(v, (list, dict)) for v in x):
                return json.dumps(x)
            items = [f"{pad}  {enc(v, ind + 1)}" for v in x]
            return "[\n" + ",\n".join(items) + f"\n{pad}]"
        return json.dumps(x)

    return enc(data, 0) + "\n"


# verification


class _Checker:
    def __init__(self):
        self.problems: list[str] = []
        self.checks = 0

    def require(self, cond: bool, message: str) -> bool:
        self.checks += 1
        if not cond:
            self.problems.append(message)
        return cond


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _check_positivity(ck: _Checker, t: int, data: dict | None, sys: LoopSystem, outcome: str):
    where = f"level {t}"
    if not ck.require(data is not None, f"{where}: missing positivity record"):
        return
    subsets = nonempty_subsets(sys.n)
    bases = {}

    def basis(I):
        if I not in bases:
            bases[I] = kernel_module_basis(sys, I)
        return bases[I]

    refuted = set()
    for g in data.get("gordan_points", []):
        I = tuple(g["subset"])
        if not ck.require(I in subsets, f"{where}: Gordan point for unknown subset {I}"):
            continue
        cert = GordanPointCertificate(I, _vec(g["point"]), _vec(g["dual"]))
        if ck.require(verify_no_certificate(cert, basis(I)), f"{where}: Gordan point for {I} does not verify"):
            refuted.add(I)
    if outcome == NOT_SALIENT:
        pe = data.get("positive_element")
        if not ck.require(pe is not None, f"{where}: missing positive element"):
            return None
        I = tuple(pe["subset"])
        cert = PositiveCertificate(I, pv_parse(pe["element"], sys.k), pe["degree"])
        ck.require(verify_positive_certificate(cert, sys), f"{where}: positive element does not verify")
        ck.require(I not in refuted, f"{where}: subset {I} both refuted and witnessed")
        return cert
    if outcome == SALIENT:
        ck.require(refuted == set(subsets), f"{where}: salient leaf without a Gordan point for every subset")
        return None
    # inconclusive: every unrefuted subset must have no rational Gordan point at all
    diags = {tuple(d["subset"]): d for d in data.get("diagnostics", [])}
    for I in subsets:
        if I in refuted:
            continue
        if not ck.require(I in diags, f"{where}: no diagnostics for subset {I}"):
            continue
        B = basis(I)
        roots = [
            positive_rational_roots([F.coefficient(tuple(e if i == j else 0 for i in range(sys.k))) for e in range(B.degree_bounds[j] + 1)])
            for j, F in enumerate(B.char_polys)
        ]
        listed = {_vec(a) for a in diags[I]["candidate_points"]}
        expected = set(itertools.product(*roots))
        ck.require(listed == expected, f"{where}: candidate points for {I} are not the rational root tuples")
        for a in expected:
            G = QMatrix.from_columns([tuple(p(a) for p in g) for g in B.generators], B.n)
            # a Gordan point at a would be y >= 0, sum y = 1, y G = 0
            ck.require(not _has_gordan_dual(G), f"{where}: candidate {a} for {I} admits a Gordan point")
    return None


def _has_gordan_dual(G: QMatrix) -> bool:
    n, m = G.shape
    eq = [(tuple(G[i, j] for i in range(n)), 0) for j in range(m)]
    eq.append((tuple(Fraction(1) for _ in range(n)), 1))
    return lp_feasible(LinearSystem(n, eq=eq, nonneg=True)).feasible


def _level_from_json(data: dict, cols: int) -> tuple:
    acting = tuple(_mat(M, cols) for M in data["acting"])
    gens = tuple(_vec(g) for g in data["generators"])
    return acting, gens


def verify_report(report: dict) -> list[str]:
    """Re-check a report; returns the list of problems (empty when it verifies)."""
    ck = _Checker()
    try:
        return _verify(report, ck)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, LoopSystemError):
            ck.problems.append(f"instance invalid: {exc}")
        else:
            ck.problems.append(f"malformed report: {type(exc).__name__}: {exc}")
        return ck.problems


def _verify(report: dict, ck: _Checker) -> list[str]:
    ck.require(report.get("schema_version") == SCHEMA_VERSION, "unsupported schema_version")
    sys, _ = load_instance_json(json.dumps(report["instance"]))
    trace = report["trace"]
    if not ck.require(len(trace) >= 1, "empty trace"):
        return ck.problems
    d = sys.d
    expected_acting = tuple(A.T for A in sys.matrices)
    expected_gens = tuple(c for c in sys.guard_rows if not is_zero_vector(c))
    for t, level in enumerate(trace):
        where = f"level {t}"
        ck.require(level["dimension"] == d, f"{where}: dimension {level['dimension']} != {d}")
        acting, gens = _level_from_json(level, d)
        ck.require(acting == expected_acting, f"{where}: acting matrices do not match the previous quotient")
        ck.require(gens == expected_gens, f"{where}: generators do not match the previous images")
        if t > 0:
            ck.require(d < trace[t - 1]["dimension"], f"{where}: dimension did not decrease")
        outcome = level["outcome"]
        last = t == len(trace) - 1
        ck.require((outcome == NOT_SALIENT) != last, f"{where}: outcome {outcome} in the wrong position")
        if outcome == EMPTY_QUOTIENT:
            ck.require(d == 0 and level["result"] == NOT_CONTAINED, f"{where}: bad empty-quotient leaf")
        elif outcome == ZERO_IMAGES:
            ck.require(d >= 1 and not gens and level["result"] == CONTAINED, f"{where}: bad zero-images leaf")
        elif outcome == BASE_CASE:
            same = len({_sign(g[0]) for g in gens}) == 1
            positive = all(M[0, 0] > 0 for M in acting)
            want = CONTAINED if same and positive else NOT_CONTAINED
            ck.require(d == 1 and bool(gens) and level["result"] == want, f"{where}: base case result should be {want}")
        elif outcome in (SALIENT, NOT_SALIENT, UNRESOLVED):
            if not ck.require(d >= 2 and bool(gens), f"{where}: positivity step needs d >= 2 and generators"):
                continue
            sub = LoopSystem.from_acting(acting, gens)
            cert = _check_positivity(ck, t, level.get("positivity"), sub, outcome)
            if outcome == SALIENT:
                ck.require(level["result"] == CONTAINED, f"{where}: salient leaf must be CONTAINED")
            elif outcome == UNRESOLVED:
                ck.require(level["result"] is None, f"{where}: inconclusive leaf carries a result")
            elif cert is not None:
                expected_acting, expected_gens, d = _check_quotient_step(ck, t, level, sub, cert, acting, gens, d)
                continue
        else:
            ck.require(False, f"{where}: unknown outcome {outcome!r}")
    leaf = trace[-1]
    want = {CONTAINED: NONTERMINATING_WITNESS_EXISTS, NOT_CONTAINED: NO_WITNESS, None: INCONCLUSIVE}[leaf["result"]]
    ck.require(report["decision"] == want, f"decision {report['decision']} does not follow from the trace ({want})")
    if report.get("witness") is not None:
        v = _vec(report["witness"])
        ck.require(report["decision"] == NONTERMINATING_WITNESS_EXISTS, "witness attached to a negative decision")
        ck.require(len(v) == sys.d and not is_zero_vector(v), "witness has the wrong size or is zero")
        ck.require(orbit_simulate(v, sys, WITNESS_CHECK_DEPTH), "witness orbit leaves the guard cone")
    return ck.problems


def _check_quotient_step(ck, t, level, sub, cert, acting, gens, d):
    where = f"level {t}"
    w = _vec(level["w"])
    ck.require(not is_zero_vector(w), f"{where}: w is zero")
    pos = next(p for p, f in enumerate(cert.element) if not f.is_zero())
    exps = cert.element[pos].monomials()[0]
    ck.require(w == sub.orbit_vector(exps, sub.guard_rows[cert.subset[pos]]), f"{where}: w is not the certified orbit vector")
    basis = tuple(_vec(b) for b in level["subspace"])
    W = Subspace(basis, d)
    ck.require(bool(basis) and rank(QMatrix(basis, cols=d)) == len(basis), f"{where}: subspace basis is degenerate")
    ck.require(W.contains(w), f"{where}: w not in W")
    ck.require(all(W.contains(M @ b) for M in acting for b in basis), f"{where}: W is not invariant")
    pi = _mat(level["quotient"], d)
    ck.require(check_quotient(W, pi), f"{where}: quotient map kernel is not W")
    r = d - len(basis)
    Bs = tuple(_mat(B, r) for B in level["induced"])
    ck.require(len(Bs) == len(acting), f"{where}: wrong number of induced matrices")
    ck.require(all(B @ pi == pi @ M for B, M in zip(Bs, acting)), f"{where}: B pi != pi M")
    images = tuple(_vec(v) for v in level["images"])
    ck.require(images == tuple(v for v in (pi @ g for g in gens) if not is_zero_vector(v)), f"{where}: images mismatch")
    ck.require(level["result"] is None, f"{where}: inner level carries a result")
    return Bs, images, r
