import random

import pytest
from hypothesis import given, settings, strategies as st

from curvedmf.algebra import AlgebraCtx, GCPoly, parse
from curvedmf.groebner import INFINITE
from curvedmf.matfac import (FactorizationError, MatrixFactorization, cohomology_product,
                             equivariant_weights, hom_cohomology, hom_differential_squares_to_zero,
                             identity_check, koszul_mf, make_mf, rank1_mf)

R = AlgebraCtx.build([("u", 0), ("q", 0)])
R3 = AlgebraCtx.build([("x", 0), ("y", 0), ("z", 0)])


def P():
    return make_mf(R, "u*q^2", [["q"]], [["u*q"]])


def P_prime():
    return make_mf(R, "u*q^2", [["u"]], [["q^2"]])


def test_endomorphisms_of_q_brane():
    H = hom_cohomology(P(), P())
    s = H.summary()
    # each parity: one generator, annihilated by q only, so free over Q[u]
    assert s["even"]["rank"] == 1 and s["even"]["relations"] == ["q"]
    assert s["odd"]["rank"] == 1 and s["odd"]["relations"] == ["q"]
    assert H.dimension == INFINITE
    table = cohomology_product(P(), H)
    parity, coeffs = table.entries[((1, 0), (1, 0))]
    assert parity == 0 and [str(c) for c in coeffs] == ["u"]
    parity, coeffs = table.entries[((0, 0), (1, 0))]
    assert parity == 1 and [str(c) for c in coeffs] == ["1"]


def test_endomorphisms_of_u_brane():
    H = hom_cohomology(P_prime(), P_prime())
    assert H.dimension == 2
    assert H.odd.rank == 0
    assert sorted(H.summary()["even"]["relations"]) == ["q^2", "u"]
    table = cohomology_product(P_prime(), H)
    assert table.entries[((0, 0), (0, 0))][0] == 0


def test_hom_between_branes():
    H = hom_cohomology(P(), P_prime())
    assert H.dimension == 1 and H.even.rank == 0


def test_identity_is_checked():
    with pytest.raises(FactorizationError):
        make_mf(R, "u*q^2", [["q"]], [["u"]])
    with pytest.raises(FactorizationError):
        make_mf(R, "u*q", [["q", "u"]], [["u"]])


def test_koszul_factorization():
    K = koszul_mf(R3, ["x", "y", "z"], ["y*z", "x*z", "x*y"])
    assert K.w == parse(R3, "3*x*y*z")
    assert identity_check(R3, K.w, K.d0, K.d1) is None
    assert hom_differential_squares_to_zero(K, K)


def _rand_poly(rng, ring, deg=2):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        e = tuple(rng.randint(0, deg) for _ in ring.names)
        if sum(e) == 0:
            e = (1,) + e[1:]
        terms[(e, 0)] = rng.choice([-2, -1, 1, 2, 3])
    return GCPoly(ring, terms)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_koszul_and_rank_one_identities(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 2)
    h = [_rand_poly(rng, R) for _ in range(k)]
    parts = [_rand_poly(rng, R) for _ in range(k)]
    K = koszul_mf(R, h, parts)
    assert identity_check(R, K.w, K.d0, K.d1) is None
    assert hom_differential_squares_to_zero(K, K)
    M = rank1_mf(R, h[0], parts[0])
    assert identity_check(R, M.w, M.d0, M.d1) is None
    assert hom_differential_squares_to_zero(M, M)


def test_json_round_trip():
    M = P_prime()
    again = MatrixFactorization.from_json(M.to_json())
    assert again.dumps() == M.dumps()


def test_equivariant_weights():
    assert equivariant_weights(P(), {"u": 2, "q": -2}).ok
    M = make_mf(R, "u*q^2 + u^2*q^4", [["q"]], [["u*q + u^2*q^3"]])
    with pytest.raises(ValueError):
        equivariant_weights(M, {"u": 1, "q": 0})


def test_odd_variables_rejected():
    from curvedmf.groebner import OddVariableError
    odd = AlgebraCtx.build([("u", 0), ("th", 1)])
    with pytest.raises(OddVariableError):
        make_mf(odd, "u^2", [["u"]], [["u"]])


def test_product_is_associative_on_q_brane():
    from curvedmf.matfac import product_is_associative
    H = hom_cohomology(P(), P())
    assert product_is_associative(H, cohomology_product(P(), H))
