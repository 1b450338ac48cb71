"""Random generators shared by the property tests."""

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from curvedmf.algebra import AlgebraCtx, GCPoly

MIXED = AlgebraCtx.build([("x", 2), ("y", -2), ("a", 1), ("b", -1), ("c", 3)])


def monomials_by_degree(ctx, max_total=3):
    out = {}
    odd = set(ctx.odd_positions())
    for exps in itertools.product(range(max_total + 1), repeat=ctx.nvars):
        if sum(exps) > max_total or any(exps[i] > 1 for i in odd):
            continue
        deg = sum(e * v.degree for e, v in zip(exps, ctx.variables))
        out.setdefault(deg, []).append(exps)
    return out


_BY_DEG = monomials_by_degree(MIXED)
_DEGREES = sorted(d for d, ms in _BY_DEG.items() if len(ms) >= 2)


def random_homogeneous(rng, ctx=MIXED, by_deg=None, degrees=None, max_terms=3):
    by_deg = by_deg or _BY_DEG
    degrees = degrees or _DEGREES
    d = rng.choice(degrees)
    monos = rng.sample(by_deg[d], min(len(by_deg[d]), rng.randint(1, max_terms)))
    return GCPoly(ctx, {(m, 0): Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3)) for m in monos})


@st.composite
def homogeneous(draw, ctx=MIXED):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_homogeneous(random.Random(seed), ctx)
