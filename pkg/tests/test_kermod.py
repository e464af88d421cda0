import random
from fractions import Fraction

import pytest

from loopterm.errors import InternalInvariantError
from loopterm.kermod import kernel_module_basis, module_membership, reduce_mod_charpolys, represent
from loopterm.numq import QMatrix, is_zero_vector, matrix
from loopterm.polyring import LoopSystem, MultiPoly, phi, pv_str
from brute import brute_kernel, in_span
from randinst import rand_system

F = Fraction
D1 = LoopSystem((matrix([[2]]),), ((1,), (-2,)))


def P(text, k=1):
    return MultiPoly.parse(text, k)


def test_basis_d1_pair():
    b = kernel_module_basis(D1)
    assert [pv_str(g) for g in b.generators] == [["2", "1"], ["X1 - 2", "0"], ["0", "X1 - 2"]]
    assert b.num_relations == 1


def test_basis_single_row():
    b = kernel_module_basis(D1, (0,))
    assert [pv_str(g) for g in b.generators] == [["X1 - 2"]]
    assert b.relation_generators == ()


def test_basis_identity():
    sys = LoopSystem((QMatrix.identity(2),), ((1, 0),))
    b = kernel_module_basis(sys)
    assert [pv_str(g) for g in b.generators] == [["-X1 + 1"], ["X1^2 - 2*X1 + 1"]]


def test_reduce_examples():
    b = kernel_module_basis(D1, (0,))
    assert reduce_mod_charpolys((P("X1 - 2"),), b) == ((P("0"),), (P("X1 - 2"),))
    assert reduce_mod_charpolys((P("X1^2"),), b) == ((P("4"),), (P("X1^2 - 4"),))
    assert reduce_mod_charpolys((P("3"),), b) == ((P("3"),), (P("0"),))


def test_membership_examples():
    b = kernel_module_basis(D1)
    assert module_membership((P("2"), P("1")), D1, b, check=True)
    assert not module_membership((P("1"), P("0")), D1, b)
    assert module_membership((P("0"), P("0")), D1, b, check=True)


def test_represent_rejects_non_members():
    b = kernel_module_basis(D1)
    assert represent((P("1"), P("0")), b) is None
    h = represent((P("2*X1"), P("X1")), b)
    assert h is not None


def test_width_mismatch():
    b = kernel_module_basis(D1)
    with pytest.raises(ValueError):
        reduce_mod_charpolys((P("1"),), b)


def test_representation_check_catches_corruption():
    b = kernel_module_basis(D1)
    bad = type(b)(b.generators[:1], b.n, b.k, b.char_polys, b.degree_bounds, b.subset, 1, b.monomial_set)
    # without the F_j generators the quotients cannot be reproduced
    with pytest.raises(InternalInvariantError):
        represent((P("X1 - 2"), P("0")), bad)


@pytest.mark.parametrize("seed", range(12))
def test_random_soundness_and_completeness(seed):
    rng = random.Random(seed)
    sys = rand_system(rng)
    b = kernel_module_basis(sys)
    for g in b.generators:
        assert is_zero_vector(phi(g, sys))
    D = max(b.degree_bounds) + 1
    for f in brute_kernel(sys, D):
        rem, _ = reduce_mod_charpolys(f, b)
        target = [r.coefficient(e) for e, i in b.monomial_set for r in [rem[i]]]
        cols = [[g[i].coefficient(e) for e, i in b.monomial_set] for g in b.relation_generators]
        assert in_span(target, cols)
        assert represent(f, b) is not None
