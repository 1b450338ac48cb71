from fractions import Fraction
from itertools import product

import pytest

from curvedmf.ainf import (AInfStructure, ainf_check, associative_structure, cpn_fiber_structure,
                           mutation_sensitivity, power_inverse, rescale_t)

GRID = list(product([1, 2, 3], [1, 2, 3]))


def exterior_algebra():
    """Lambda(a, b) with |a| = |b| = 1: associative with odd signs in play."""
    basis = ["1", "a", "b", "ab"]
    mult = {}
    for i in range(4):
        mult[(0, i)] = {i: 1}
        mult[(i, 0)] = {i: 1}
    mult[(1, 2)] = {3: 1}
    mult[(2, 1)] = {3: -1}
    return associative_structure(basis, [0, 1, 1, 2], mult)


def test_associative_algebra_passes():
    S = exterior_algebra()
    assert ainf_check(S, 5) == []
    assert S.check_grading() == []


def test_non_associative_product_is_caught():
    S = exterior_algebra().mutated(2, (0, 1), 1, 0)
    assert S.check_grading() == []
    assert ainf_check(S, 3)


@pytest.mark.parametrize("n,d", GRID)
def test_fiber_structure_satisfies_relations(n, d):
    S = cpn_fiber_structure(n, d)
    assert S.check_grading() == []
    assert ainf_check(S, 2 * d + 4, 2) == []


@pytest.mark.parametrize("n,d", [(n, d) for n, d in GRID if n > 1])
def test_every_constant_matters(n, d):
    assert mutation_sensitivity(cpn_fiber_structure(n, d), 2 * d + 4, 2) == []


@pytest.mark.parametrize("d", [1, 2, 3])
def test_line_deformation_constant_is_a_rescaling(d):
    # with a single deformation entry, changing it is the substitution t -> 2t,
    # which no identity can see
    S = cpn_fiber_structure(1, d)
    top = 2 * d
    assert mutation_sensitivity(S, 2 * d + 4, 2) == [(top, (1,) * top, 0, 1)]
    assert S.mutated(top, (1,) * top, 0, 1).ops == rescale_t(S, 2).ops


@pytest.mark.parametrize("n,d", [(2, 1), (2, 2), (3, 1), (3, 3)])
def test_literal_formula_is_not_a_structure(n, d):
    assert ainf_check(cpn_fiber_structure(n, d, "literal"), 2 * d + 2, 1)


def test_literal_and_carry_agree_for_the_line():
    for d in (1, 2, 3):
        carry = cpn_fiber_structure(1, d, complete_arity=0)
        literal = cpn_fiber_structure(1, d, "literal")
        assert carry.ops == literal.ops


def test_m4_on_the_projective_line():
    # [PAPER] m4(e, e, e, e) = t and nothing else in arity four
    S = cpn_fiber_structure(1, 2)
    assert list(S.entries(4)) == [((1, 1, 1, 1), 0, 1, Fraction(1))]


def test_m4_for_the_plane():
    S = cpn_fiber_structure(2, 2, complete_arity=0)
    rows = list(S.entries(4))
    # outputs t * e^(sum - 6); every pair of adjacent inputs carries
    for ins, j, e, c in rows:
        assert e == 1 and c == 1 and j == sum(ins) - 6
        assert ins[0] + ins[1] >= 3 and ins[2] + ins[3] >= 3
    assert ((2, 1, 1, 2), 0, 1, Fraction(1)) in rows
    # [DERIVED] tuples summing to 6 that do not carry pairwise stay zero
    assert not any(ins == (2, 2, 1, 1) for ins, _, _, _ in rows)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_d_one_is_truncated_polynomial_ring(n):
    S = cpn_fiber_structure(n, 1)
    assert len(S.basis) == n + 1
    assert set(S.ops) == {2}
    for k in range(n + 1):
        inv = power_inverse(S, k)
        assert inv is not None
        j, out = inv
        assert (k + j) % (n + 1) == 0
        assert out == {0: {0 if k == 0 else 1: Fraction(1)}}


def test_json_round_trip():
    S = cpn_fiber_structure(3, 2)
    again = AInfStructure.from_json(S.to_json())
    assert again.to_json() == S.to_json()
    assert ainf_check(again, 6, 2) == []
    bad = S.to_json()
    bad["ops"]["2"][0]["in"] = ["e"]
    with pytest.raises(ValueError):
        AInfStructure.from_json(bad)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        cpn_fiber_structure(0, 1)
    with pytest.raises(ValueError):
        cpn_fiber_structure(1, 1, "other")
