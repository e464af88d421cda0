import random
from fractions import Fraction

import pytest

from loopterm.kermod import kernel_module_basis
from loopterm.numq import QMatrix, matrix
from loopterm.polyring import LoopSystem, MultiPoly, laurent_normalize, pv_str
from loopterm.positivity import (
    INCONCLUSIVE,
    NO,
    REFUTED,
    VERIFIED,
    YES,
    GordanPointCertificate,
    PositiveCertificate,
    SearchConfig,
    decide_positive_nonzero,
    existpos_box_verify,
    find_gordan_point,
    find_positive_element,
    nonempty_subsets,
    verify_no_certificate,
    verify_positive_certificate,
)
from randinst import rand_system

F = Fraction
CFG = SearchConfig()
D1 = LoopSystem((matrix([[2]]),), ((1,), (-2,)))


def P(text, k=1):
    return MultiPoly.parse(text, k)


def test_decide_yes_on_opposite_rows():
    res = decide_positive_nonzero(D1, CFG)
    assert res.status == YES
    assert res.certificate.subset == (0, 1)
    assert pv_str(res.certificate.element) == ["2", "1"]


def test_decide_no_on_single_row():
    sys = LoopSystem((matrix([[2]]),), ((1,),))
    res = decide_positive_nonzero(sys, CFG)
    assert res.status == NO
    cert = res.refutations[(0,)]
    assert cert.point == (F(2),) and cert.dual == (F(1),)


def test_decide_no_on_identity():
    sys = LoopSystem((QMatrix.identity(2),), ((1, 0),))
    res = decide_positive_nonzero(sys, CFG)
    assert res.status == NO
    cert = res.refutations[(0,)]
    assert cert.point == (F(1),) and cert.dual == (F(1),)


def test_decide_inconclusive_on_sqrt2():
    sys = LoopSystem((matrix([[0, 2], [1, 0]]),), ((1, 0),))
    res = decide_positive_nonzero(sys, SearchConfig(max_degree=3))
    assert res.status == INCONCLUSIVE
    diag = res.diagnostics[(0,)]
    assert diag["candidate_points"] == []
    assert diag["max_degree_tried"] == 3


def test_find_positive_element_examples():
    b = kernel_module_basis(D1)
    assert pv_str(find_positive_element(b, 0)) == ["2", "1"]
    single = kernel_module_basis(D1, (0,))
    assert all(find_positive_element(single, ell) is None for ell in range(4))
    # basis {(1)}: guard row 0 makes the constant 1 a kernel element
    trivial = kernel_module_basis(LoopSystem((matrix([[1, 0], [0, 1]]),), ((1, 0), (-1, 0))), (0, 1))
    assert find_positive_element(trivial, 0) is not None


def test_find_gordan_point_examples():
    single = kernel_module_basis(D1, (0,))
    cert = find_gordan_point(single, CFG)
    assert cert.point == (F(2),) and cert.dual == (F(1),)
    assert find_gordan_point(kernel_module_basis(D1), CFG) is None
    ident = kernel_module_basis(LoopSystem((QMatrix.identity(2),), ((1, 0),)))
    cert = find_gordan_point(ident, CFG)
    assert cert.point == (F(1),)


def test_box_verify_examples():
    assert existpos_box_verify(kernel_module_basis(D1), CFG).status == VERIFIED
    refuted = existpos_box_verify(kernel_module_basis(D1, (0,)), CFG)
    assert refuted.status == REFUTED and refuted.certificate.point == (F(2),)
    # generator X - 3 is negative on the whole box, so -1 times it is positive there
    three = kernel_module_basis(LoopSystem((matrix([[3]]),), ((1,),)))
    assert existpos_box_verify(three, CFG).status == VERIFIED


def test_verify_positive_certificate():
    good = PositiveCertificate((0, 1), (P("2"), P("1")), 0)
    assert verify_positive_certificate(good, D1)
    assert not verify_positive_certificate(PositiveCertificate((0, 1), (P("-2"), P("-1")), 0), D1)
    assert not verify_positive_certificate(PositiveCertificate((0, 1), (P("1"), P("1")), 0), D1)
    assert not verify_positive_certificate(PositiveCertificate((0, 1), (P("2"), P("0")), 0), D1)
    assert not verify_positive_certificate(PositiveCertificate((0, 0), (P("2"), P("1")), 0), D1)


def test_verify_no_certificate():
    b = kernel_module_basis(D1, (0,))
    assert verify_no_certificate(GordanPointCertificate((0,), (F(2),), (F(1),)), b)
    assert not verify_no_certificate(GordanPointCertificate((0,), (F(-2),), (F(1),)), b)
    assert not verify_no_certificate(GordanPointCertificate((0,), (F(2),), (F(0),)), b)
    assert not verify_no_certificate(GordanPointCertificate((0,), (F(3),), (F(1),)), b)


def test_subset_order():
    assert nonempty_subsets(3) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]


@pytest.mark.parametrize("seed", range(10))
def test_degree_monotonicity(seed):
    rng = random.Random(100 + seed)
    sys = rand_system(rng, max_d=2)
    for I in nonempty_subsets(sys.n):
        b = kernel_module_basis(sys, I)
        found = [find_positive_element(b, ell) is not None for ell in range(4)]
        assert found == sorted(found)


@pytest.mark.parametrize("seed", range(10))
def test_laurent_shift_of_positive_element(seed):
    rng = random.Random(200 + seed)
    sys = rand_system(rng)
    res = decide_positive_nonzero(sys, SearchConfig(max_degree=3))
    if res.status != YES:
        return
    cert = res.certificate
    e = tuple(-rng.randint(0, 3) for _ in range(sys.k))
    laurent = [f.shift(e) for f in cert.element]
    _, poly = laurent_normalize(laurent)
    shifted = PositiveCertificate(cert.subset, tuple(poly), cert.degree)
    assert verify_positive_certificate(shifted, sys)
