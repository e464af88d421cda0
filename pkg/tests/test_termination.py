from fractions import Fraction

import pytest

from loopterm.errors import DimensionMismatchError, NonCommutingError, SingularMatrixError, ZeroGuardRowError
from loopterm.numq import QMatrix, matrix
from loopterm.oracle import orbit_simulate
from loopterm.polyring import LoopSystem, MultiPoly
from loopterm.positivity import PositiveCertificate, SearchConfig
from loopterm.termination import (
    BASE_CASE,
    CONTAINED,
    EMPTY_QUOTIENT,
    NOT_CONTAINED,
    NOT_SALIENT,
    SALIENT,
    decide_halfspace_containment,
    decide_nontermination,
    extract_w,
    validate_system,
)
from corpus import CORPUS, DEGENERATE

F = Fraction
CFG = SearchConfig()
ROT = matrix([[0, -1], [1, 0]])


def test_validate_accepts_commuting_diagonals():
    sys = validate_system([[[2, 0], [0, 3]], [[5, 0], [0, 7]]], [(1, 0)])
    assert sys.k == 2 and sys.d == 2


def test_validate_errors():
    with pytest.raises(NonCommutingError) as exc:
        validate_system([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], [(1, 0)])
    assert exc.value.pair == (0, 1)
    with pytest.raises(SingularMatrixError):
        validate_system([[[0, 0], [0, 0]]], [(1, 0)])
    with pytest.raises(ZeroGuardRowError):
        validate_system([[[1]]], [(0,)])
    with pytest.raises(DimensionMismatchError):
        validate_system([[[1, 0], [0, 1]]], [(1,)])
    with pytest.raises(DimensionMismatchError):
        validate_system([[[1, 0], [0, 1]], [[1]]], [(1, 0)])
    with pytest.raises(DimensionMismatchError):
        validate_system([], [(1,)])


def test_extract_w_examples():
    sys = LoopSystem((matrix([[2]]),), ((1,), (-2,)))
    cert = PositiveCertificate((0, 1), (MultiPoly.parse("2", 1), MultiPoly.parse("1", 1)), 0)
    assert extract_w(cert, sys) == (F(1),)
    sys = LoopSystem((ROT,), ((1, 0), (0, 1)))
    cert = PositiveCertificate((0,), (MultiPoly.parse("X1", 1),), 0)
    assert extract_w(cert, sys) == ROT.T @ (F(1), F(0))
    cert = PositiveCertificate((0, 1), (MultiPoly.zero(1), MultiPoly.one(1)), 0)
    assert extract_w(cert, sys) == (F(0), F(1))


def test_containment_examples():
    status, trace = decide_halfspace_containment([matrix([[2]])], [(F(1),)], CFG)
    assert status == CONTAINED and trace[0].outcome == BASE_CASE
    status, trace = decide_halfspace_containment([ROT.T], [(F(1), F(0))], CFG)
    assert status == NOT_CONTAINED
    assert [lv.outcome for lv in trace] == [NOT_SALIENT, EMPTY_QUOTIENT]
    assert trace[0].subspace.dim == 2
    status, trace = decide_halfspace_containment([QMatrix.diag([2, F(1, 2)])], [(F(1), F(0)), (F(0), F(1))], CFG)
    assert status == CONTAINED and trace[0].outcome == SALIENT


def test_base_case_needs_positive_matrices():
    status, _ = decide_halfspace_containment([matrix([[-2]])], [(F(1),)], CFG)
    assert status == NOT_CONTAINED
    status, _ = decide_halfspace_containment([matrix([[2]])], [(F(1),), (F(-1),)], CFG)
    assert status == NOT_CONTAINED


@pytest.mark.parametrize("case", CORPUS, ids=lambda c: c.name)
def test_corpus_decisions(case):
    sys = case.system
    dec = decide_nontermination(sys, CFG)
    assert dec.answer == case.expected, case.why
    dims = [lv.dimension for lv in dec.trace]
    assert dims == sorted(dims, reverse=True) and len(set(dims)) == len(dims)
    assert len(dec.trace) <= sys.d + 1
    if dec.witness is not None:
        assert orbit_simulate(dec.witness, sys, 8)
    if case.witness is not None:
        assert orbit_simulate(case.witness, sys, 10)


def test_degenerate_is_inconclusive():
    dec = decide_nontermination(DEGENERATE.system, SearchConfig(max_degree=4))
    assert dec.answer == DEGENERATE.expected and not dec.decided


def test_budget_stops_search():
    dec = decide_nontermination(DEGENERATE.system, SearchConfig(budget_seconds=0.0))
    assert dec.answer == DEGENERATE.expected
    pos = dec.trace[-1].positivity
    assert pos.diagnostics[(0,)]["max_degree_tried"] == -1
    assert pos.diagnostics[(0,)]["box_detail"] == "time budget exhausted"
