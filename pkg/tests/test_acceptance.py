"""One test per acceptance criterion; each records a pass/fail line in the summary."""

import json
import random
import time
from fractions import Fraction

from loopterm.cli import run
from loopterm.conegeom import check_quotient
from loopterm.exactlp import LinearSystem, gordan_dual, lp_feasible, positive_span_feasible
from loopterm.kermod import kernel_module_basis, reduce_mod_charpolys, represent
from loopterm.numq import QMatrix, char_poly, is_zero_vector, upoly_eval_matrix
from loopterm.oracle import oracle_not_salient, orbit_simulate, truncated_orbit_generators
from loopterm.polyring import MultiPoly, phi, poly_eval_matrix
from loopterm.positivity import (
    YES,
    SearchConfig,
    find_gordan_point,
    find_positive_element,
    nonempty_subsets,
    decide_positive_nonzero,
    verify_no_certificate,
    verify_positive_certificate,
    PositiveCertificate,
)
from loopterm.termination import NOT_SALIENT, decide_nontermination, extract_w
from brute import brute_kernel, in_span
from corpus import CORPUS, DEGENERATE
from randinst import rand_matrix, rand_rational, rand_system

F = Fraction
CFG = SearchConfig()


def _random_systems(seed, count):
    rng = random.Random(seed)
    return [rand_system(rng) for _ in range(count)]


def test_criterion_1_corpus(criterion_line):
    failures, slow = [], []
    start = time.perf_counter()
    for case in CORPUS:
        t0 = time.perf_counter()
        sys = case.system
        dec = decide_nontermination(sys, CFG)
        elapsed = time.perf_counter() - t0
        if dec.answer != case.expected:
            failures.append(f"{case.name}: {dec.answer}")
        if case.witness is not None and not orbit_simulate(case.witness, sys, 10):
            failures.append(f"{case.name}: hand witness fails simulation")
        if elapsed >= 10:
            slow.append(case.name)
    total = time.perf_counter() - start
    ok = len(CORPUS) >= 12 and not failures and not slow and total < 120
    criterion_line(1, ok, f"{len(CORPUS)} instances, {len(CORPUS) - len(failures)} agree, total {total:.2f}s, slow={slow}")
    assert ok, failures


def test_criterion_2_kernel_soundness(criterion_line):
    violations = 0
    gens = 0
    for sys in _random_systems(2024, 50):
        for I in nonempty_subsets(sys.n):
            basis = kernel_module_basis(sys, I)
            sub = sys.restrict(I)
            for g in basis.generators:
                gens += 1
                if not is_zero_vector(phi(g, sub)):
                    violations += 1
    criterion_line(2, violations == 0, f"50 instances, {gens} generators, {violations} violations")
    assert violations == 0


def test_criterion_3_kernel_completeness(criterion_line):
    failures = 0
    checked = 0
    for sys in _random_systems(2024, 50):
        basis = kernel_module_basis(sys)
        D = max(basis.degree_bounds) + 1
        cols = [[g[i].coefficient(e) for e, i in basis.monomial_set] for g in basis.relation_generators]
        for f in brute_kernel(sys, D):
            checked += 1
            rem, _ = reduce_mod_charpolys(f, basis)
            target = [rem[i].coefficient(e) for e, i in basis.monomial_set]
            outside = any(e not in {m for m, j in basis.monomial_set if j == i} for i, r in enumerate(rem) for e in r.terms)
            if outside or not in_span(target, cols) or represent(f, basis) is None:
                failures += 1
    criterion_line(3, failures == 0, f"50 instances, {checked} brute-force kernel elements, {failures} failures")
    assert failures == 0


def test_criterion_4_gordan_alternative(criterion_line):
    rng = random.Random(4)
    violations = 0
    yes = 0
    for _ in range(200):
        G = rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        r, y = positive_span_feasible(G), gordan_dual(G)
        if (r is None) == (y is None):
            violations += 1
            continue
        if r is not None:
            yes += 1
            if not all(x >= 1 for x in G @ r):
                violations += 1
        elif not (all(v >= 0 for v in y) and sum(y) == 1 and is_zero_vector(G.T @ y)):
            violations += 1
    criterion_line(4, violations == 0, f"200 matrices ({yes} positive spans, {200 - yes} Gordan duals), {violations} violations")
    assert violations == 0


def test_criterion_5_mutual_exclusion(criterion_line):
    rng = random.Random(5)
    violations = 0
    counts = {"yes": 0, "no": 0, "neither": 0}
    for t in range(30):
        # every other module uses triangular matrices, whose eigenvalues are rational
        sys = rand_system(rng, triangular=(t % 2 == 0))
        for I in nonempty_subsets(sys.n):
            basis = kernel_module_basis(sys, I)
            gordan = find_gordan_point(basis, CFG)
            positive = next((e for e in (find_positive_element(basis, ell) for ell in range(4)) if e is not None), None)
            if gordan is not None and positive is not None:
                violations += 1
            if gordan is not None:
                counts["no"] += 1
                violations += not verify_no_certificate(gordan, basis)
            elif positive is not None:
                counts["yes"] += 1
                violations += not verify_positive_certificate(PositiveCertificate(I, positive, 0), sys)
            else:
                counts["neither"] += 1
    criterion_line(5, violations == 0, f"30 systems, subset modules {counts}, {violations} violations")
    assert violations == 0


def _in_cone(v, gens):
    d = len(v)
    eq = [(tuple(g[t] for g in gens), v[t]) for t in range(d)]
    return lp_feasible(LinearSystem(len(gens), eq=eq, nonneg=True)).feasible


def test_criterion_6_salience_cross_check(criterion_line):
    fired = 0
    disagreements = []
    for case in CORPUS:
        sys = case.system
        L = next((L for L in range(5) if oracle_not_salient(sys, L) is not None), None)
        if L is None:
            continue
        fired += 1
        res = decide_positive_nonzero(sys, CFG)
        if res.status != YES:
            disagreements.append(case.name)
            continue
        w = extract_w(res.certificate, sys)
        depth = max(L, max(f.degree() for f in res.certificate.element))
        gens = truncated_orbit_generators(sys, depth)
        if not (_in_cone(w, gens) and _in_cone(tuple(-x for x in w), gens)):
            disagreements.append(case.name)
    ok = fired > 0 and not disagreements
    criterion_line(6, ok, f"oracle fired on {fired} corpus instances, disagreements={disagreements}")
    assert ok


def test_criterion_7_trace_validity(criterion_line):
    violations = []
    levels = 0
    for case in CORPUS:
        dec = decide_nontermination(case.system, CFG)
        trace = dec.trace
        for t, lv in enumerate(trace):
            levels += 1
            if t > 0 and lv.dimension >= trace[t - 1].dimension:
                violations.append(f"{case.name}[{t}] dimension")
            if lv.outcome != NOT_SALIENT:
                continue
            W, pi = lv.subspace, lv.quotient
            if not all(W.contains(M @ b) for M in lv.acting for b in W.basis):
                violations.append(f"{case.name}[{t}] invariance")
            if not check_quotient(W, pi):
                violations.append(f"{case.name}[{t}] kernel")
            if not all(B @ pi == pi @ M for B, M in zip(lv.induced, lv.acting)):
                violations.append(f"{case.name}[{t}] induced")
            if trace[t + 1].dimension != lv.dimension - W.dim:
                violations.append(f"{case.name}[{t}] quotient dimension")
    criterion_line(7, not violations, f"{levels} trace levels over {len(CORPUS)} instances, violations={violations}")
    assert not violations


def test_criterion_8_cayley_hamilton_and_homomorphism(criterion_line):
    rng = random.Random(8)
    violations = 0
    for _ in range(100):
        d = rng.randint(1, 5)
        A = rand_matrix(rng, d, d)
        if not upoly_eval_matrix(char_poly(A), A).is_zero():
            violations += 1
        B = QMatrix.identity(d).scale(rand_rational(rng)) + A.scale(rand_rational(rng))
        if not poly_eval_matrix(MultiPoly.from_univariate(char_poly(B), 1, 2), [A, B]).is_zero():
            violations += 1
        f = MultiPoly(2, {(rng.randint(0, 3), rng.randint(0, 3)): rand_rational(rng) for _ in range(3)})
        g = MultiPoly(2, {(rng.randint(0, 3), rng.randint(0, 3)): rand_rational(rng) for _ in range(3)})
        if poly_eval_matrix(f * g, [A, B]) != poly_eval_matrix(f, [A, B]) @ poly_eval_matrix(g, [A, B]):
            violations += 1
    criterion_line(8, violations == 0, f"100 random matrices and polynomial pairs, {violations} violations")
    assert violations == 0


def test_criterion_9_inconclusive_honesty(criterion_line, tmp_path, capsys):
    src = tmp_path / "sqrt2.loop"
    src.write_text(DEGENERATE.source + "\n")
    report = tmp_path / "report.json"
    t0 = time.perf_counter()
    code = run(["--input", str(src), "--output", str(report), "--budget-seconds", "60"])
    elapsed = time.perf_counter() - t0
    verify_code = run(["--verify", str(report)])
    verified = json.loads(capsys.readouterr().out)["verified"]
    decision = json.loads(report.read_text())["decision"]
    ok = code == 2 and decision == "INCONCLUSIVE" and verified and verify_code == 2 and elapsed < 60
    criterion_line(9, ok, f"exit {code}, decision {decision}, --verify verified={verified} (exit {verify_code}), {elapsed:.2f}s")
    assert ok
