import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from curvedmf.algebra import GCPoly, parse, substitute
from curvedmf.polyvector import (MCProblem, NonFlatBackground, PolyCtx, Polyvector, check_flat, cohomology_window,
                                 gamma_check, gauge, is_coboundary, mc_residual, potential_background, schouten,
                                 twisted_diff)

from helpers import monomials_by_degree, random_homogeneous

PZ = PolyCtx.build([("x", -2), ("e", 1)])
_BY = monomials_by_degree(PZ.full, 3)
_DEGS = sorted(d for d, ms in _BY.items() if len(ms) >= 2)

UQ = PolyCtx.build([("u", 0), ("q", 0)], t_mode="laurent", grading="Z2")
HEIS = PolyCtx.build([("x", 0), ("y", 0), ("z", 0)], t_mode="laurent", grading="Z2")
S2 = PolyCtx.build([("x", 0), ("e", 1)], {"x": "xi", "e": "u"}, grading="Z2")


def rand_pv(rng):
    return Polyvector(PZ, random_homogeneous(rng, PZ.full, _BY, _DEGS))


def shifted_sign(F, G):
    return -1 if ((F.degree() - 1) * (G.degree() - 1)) % 2 else 1


def test_jacobi_and_antisymmetry_on_1000_triples():
    rng = random.Random(7)
    for _ in range(1000):
        F, G, H = rand_pv(rng), rand_pv(rng), rand_pv(rng)
        s = shifted_sign(F, G)
        assert schouten(F, G) == -s * schouten(G, F)
        assert schouten(F, schouten(G, H)) == schouten(schouten(F, G), H) + s * schouten(G, schouten(F, H))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_bracket_is_a_graded_derivation(seed):
    rng = random.Random(seed)
    F, G, H = rand_pv(rng), rand_pv(rng), rand_pv(rng)
    # [F, G H] = [F, G] H + (-1)^{(|F|-1)|G|} G [F, H]
    s = -1 if ((F.degree() - 1) * G.degree()) % 2 else 1
    assert schouten(F, G * H) == schouten(F, G) * H + s * (G * schouten(F, H))


def test_vector_field_acts_on_functions():
    phi = UQ.parse("-1/2*t*u*Dq")
    f = UQ.parse("u*q^2")
    assert schouten(phi, f) == UQ.parse("-t*u^2*q")
    assert schouten(UQ.parse("Du"), UQ.parse("u")) == UQ.const(1)


@pytest.mark.parametrize("background", [
    (S2, "x^2*u"),
    (HEIS, "z*Dx*Dy + z"),
    (HEIS, "x*Dy*Dz + y*Dz*Dx + z*Dx*Dy"),
    (UQ, "-u*q^2"),
])
def test_twisted_differential_squares_to_zero(background):
    ctx, text = background
    B = ctx.parse(text)
    check_flat(B)
    by = monomials_by_degree(ctx.full, 3)
    rng = random.Random(11)
    for _ in range(40):
        exps = rng.choice([m for ms in by.values() for m in ms])
        F = Polyvector(ctx, GCPoly(ctx.full, {(exps, 0): 1}))
        assert not twisted_diff(B, twisted_diff(B, F))


def test_nonflat_background_is_rejected():
    B = HEIS.parse("-y*Dy*Dz + x*Dz*Dx + Dx*Dy")
    with pytest.raises(NonFlatBackground):
        twisted_diff(B, HEIS.parse("x"))
    with pytest.raises(NonFlatBackground):
        MCProblem(B, HEIS.parse("x"))


def test_gauge_lemma_matches_substitution_flow():
    phi = UQ.parse("-1/2*t*u*Dq")
    mu = UQ.parse("-(u+u^2*q)*t")
    W = UQ.parse("u*q^2")
    result = gauge(phi, mu, potential_background(W), 2)
    assert result == UQ.parse("-u*t + 1/4*u^3*t^2")
    # second route: flow q -> q - t*u/2 applied to the full curved element
    ring = UQ.base
    total = parse(ring, "-u*q^2 - (u+u^2*q)*t")
    flowed = substitute(total, {"u": parse(ring, "u"), "q": parse(ring, "q - 1/2*t*u")})
    assert flowed == parse(ring, "-u*q^2") + parse(ring, "-u*t + 1/4*u^3*t^2")


def test_gauge_with_uncorrected_sign_differs():
    phi = UQ.parse("-1/2*t*u*Dq")
    mu = UQ.parse("-(u+u^2*q)*t")
    assert gauge(phi, mu, UQ.parse("u*q^2"), 2) == UQ.parse("-u*t - 2*u^2*q*t + 3/4*u^3*t^2")


def heisenberg_monomials(max_weight=3):
    for e in itertools.product(range(max_weight + 1), repeat=3):
        if sum(e) <= max_weight:
            yield "*".join([f"x^{e[0]}", f"y^{e[1]}", f"z^{e[2]}"]), sum(e)


def test_heisenberg_residual_forces_p13_p23_zero():
    pi = HEIS.parse("z*Dx*Dy")
    assert not mc_residual(MCProblem(pi, HEIS.parse("z")))
    for m, _ in heisenberg_monomials():
        for bi in ("Dx*Dz", "Dy*Dz"):
            res = mc_residual(MCProblem(pi, HEIS.parse(f"z + {m}*{bi}")))
            assert res, (m, bi)


def test_heisenberg_p12_terms_are_exact():
    bg = HEIS.parse("z*Dx*Dy + z")
    for m, w in heisenberg_monomials():
        c = HEIS.parse(f"{m}*Dx*Dy")
        assert not schouten(bg, c)
        pre = is_coboundary(bg, c, w + 3)
        assert pre is not None and schouten(bg, pre) == c
    blocks = cohomology_window(bg, (0, 1), 3)
    assert all(b.stable for b in blocks)


def test_is_coboundary_requires_a_cocycle():
    bg = HEIS.parse("z*Dx*Dy + z")
    with pytest.raises(ValueError):
        is_coboundary(bg, HEIS.parse("Dz"), 3)


@pytest.mark.parametrize("bound", [1, 2, 3, 4, 5])
def test_sphere_window_dimensions(bound):
    # hand count of Q[u, a] (x) L(b) / (a^2, ab, au) cut off at the bound
    v = S2.parse("x^2*u")
    blocks = {b.degree: b for b in cohomology_window(v, (0, 1), bound)}
    assert blocks[0].dimension == bound + 2
    assert blocks[1].dimension == bound - 1
    assert blocks[0].stable and blocks[1].stable


def test_gamma_for_sphere():
    rep = gamma_check(S2.parse("x^2*u"))
    assert rep.nilpotency_order is not None and rep.nilpotency_order <= 2
    assert rep.all_traces_zero()


def test_polyvector_json_round_trip():
    p = HEIS.parse("z*Dx*Dy + 3*t*x")
    again = Polyvector.from_json(json.loads(json.dumps(p.to_json())))
    assert str(again) == str(p)
