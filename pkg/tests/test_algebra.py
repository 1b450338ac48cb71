import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from curvedmf.algebra import AlgebraCtx, ContextMismatch, GCPoly, VariableSpec, derive, parse, substitute
from curvedmf.ratfunc import RatFunc

from helpers import MIXED, homogeneous


def sign(a, b):
    return -1 if (a * b) % 2 else 1


@settings(max_examples=200, deadline=None)
@given(homogeneous(), homogeneous(), homogeneous())
def test_product_is_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@settings(max_examples=200, deadline=None)
@given(homogeneous(), homogeneous())
def test_graded_commutativity(p, q):
    assert p * q == (q * p).scale(sign(p.degree(), q.degree()))


@settings(max_examples=200, deadline=None)
@given(homogeneous(), homogeneous())
def test_leibniz_rule(p, q):
    for v in MIXED.variables:
        lhs = derive(p * q, v.name)
        rhs = derive(p, v.name) * q + (p * derive(q, v.name)).scale(sign(v.degree, p.degree()))
        assert lhs == rhs


def test_odd_variables_square_to_zero():
    a = GCPoly.var(MIXED, "a")
    assert not a * a
    assert GCPoly.var(MIXED, "b") * a == -(a * GCPoly.var(MIXED, "b"))


def test_parse_and_print_round_trip():
    p = parse(MIXED, "3/2*x^2*a - y*b*c + 7")
    assert parse(MIXED, str(p)) == p
    assert p.degrees() == {5, 0}


def test_json_round_trip():
    ctx = AlgebraCtx.build([("u", 0), ("q", 0)], t_mode="laurent")
    p = parse(ctx, "u*q^2 - 1/4*u^3*t^2 + t^-1")
    again = GCPoly.from_json(json.loads(p.dumps()))
    assert again.terms == p.terms


def test_laurent_and_truncated_t():
    ctx = AlgebraCtx.build([("u", 0)], t_mode="truncated", t_order=2)
    p = parse(ctx, "(1 + t*u)^4")
    assert p == parse(ctx, "1 + 4*t*u + 6*t^2*u^2")
    poly = AlgebraCtx.build([("u", 0)])
    with pytest.raises(ValueError):
        GCPoly.t(poly, -1)


def test_mixing_contexts_is_rejected():
    a = AlgebraCtx.build([("u", 0)])
    b = AlgebraCtx.build([("v", 0)])
    with pytest.raises(ContextMismatch):
        GCPoly.var(a, "u") + GCPoly.var(b, "v")


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        AlgebraCtx((VariableSpec("x", 0), VariableSpec("x", 2)))


def test_substitution_respects_signs():
    ctx = AlgebraCtx.build([("a", 1), ("b", 1)])
    p = parse(ctx, "a*b")
    swapped = substitute(p, {"a": GCPoly.var(ctx, "b"), "b": GCPoly.var(ctx, "a")})
    assert swapped == -p


def test_left_derivative_sign():
    p = parse(MIXED, "a*b")
    assert derive(p, "b") == -GCPoly.var(MIXED, "a")
    assert derive(p, "a") == GCPoly.var(MIXED, "b")


def test_ratfunc_field_operations():
    t = RatFunc.t_power(1)
    f = (t + 1) / (t - 1)
    assert f * f.inverse() == RatFunc.coerce(1)
    assert (f + 1) == (2 * t) / (t - 1)
    assert f.evaluate(Fraction(3)) == 2
