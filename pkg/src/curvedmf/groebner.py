"""Commutative Groebner bases over Q or Q(t), for ideals and free modules.

Polynomials are handled internally as dicts ``{(component, exponents): coef}``;
ideals simply use component 0.  Coefficients are ``Fraction`` (field Q) or
``RatFunc`` (field Q(t)); both support the field operations Buchberger needs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import AlgebraCtx, GCPoly, VariableSpec, derive
from .ratfunc import RatFunc

Exps = Tuple[int, ...]
Term = Tuple[int, Exps]
Vec = Dict[Term, object]

INFINITE = math.inf


class OddVariableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomial orders

def _grevlex(e: Exps):
    return (sum(e), tuple(-x for x in reversed(e)))


def _grlex(e: Exps):
    return (sum(e), e)


def _lex(e: Exps):
    return e


_ORDERS = {"grevlex": _grevlex, "grlex": _grlex, "lex": _lex}


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order; ``blocks`` splits the variables into elimination blocks."""

    name: str = "grevlex"
    blocks: Tuple[int, ...] = ()
    module: str = "pot"

    def mono_key(self) -> Callable[[Exps], tuple]:
        if self.name not in _ORDERS:
            raise ValueError(f"unknown monomial order {self.name!r}")
        base = _ORDERS[self.name]
        if not self.blocks:
            return base
        cuts = [0]
        for b in self.blocks:
            cuts.append(cuts[-1] + b)

        def key(e: Exps):
            parts = tuple(base(e[cuts[i]:cuts[i + 1]]) for i in range(len(self.blocks)))
            return parts + (base(e[cuts[-1]:]),)

        return key

    def term_key(self) -> Callable[[Term], tuple]:
        mk = self.mono_key()
        if self.module == "pot":
            return lambda term: (-term[0], mk(term[1]))
        return lambda term: (mk(term[1]), -term[0])


# ---------------------------------------------------------------------------
# coefficient fields

@dataclass(frozen=True)
class CoefficientMode:
    """How t enters: absent (``rational``), as the field Q(t), or specialized."""

    kind: str = "rational"
    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("rational", "rational_function", "specialized"):
            raise ValueError(f"unknown coefficient mode {self.kind!r}")
        if self.kind == "specialized":
            if self.value is None:
                raise ValueError("specialized mode needs a value for t")
            object.__setattr__(self, "value", Fraction(self.value))

    @property
    def one(self):
        return RatFunc.coerce(1) if self.kind == "rational_function" else Fraction(1)

    def coefficient(self, c: Fraction, texp: int):
        if self.kind == "rational_function":
            return RatFunc.t_power(texp, c)
        if self.kind == "specialized":
            if self.value == 0 and texp < 0:
                raise ZeroDivisionError("t specialized to 0 in a Laurent term")
            return c * self.value ** texp
        if texp:
            raise ValueError("t appears but the coefficient mode is 'rational'")
        return c

    def convert(self, c):
        if self.kind == "rational_function":
            return RatFunc.coerce(c)
        return Fraction(c)


RATIONAL = CoefficientMode("rational")
RATIONAL_FUNCTION = CoefficientMode("rational_function")


def specialized(value) -> CoefficientMode:
    return CoefficientMode("specialized", Fraction(value))


# ---------------------------------------------------------------------------
# vector arithmetic

def vec_add_scaled(target: Vec, src: Vec, coef, shift: Optional[Exps] = None) -> None:
    """target += coef * x^shift * src, in place."""
    if shift is None:
        for k, c in src.items():
            v = target.get(k)
            v = coef * c if v is None else v + coef * c
            if v:
                target[k] = v
            else:
                target.pop(k, None)
        return
    for (comp, e), c in src.items():
        k = (comp, tuple(a + b for a, b in zip(e, shift)))
        v = target.get(k)
        v = coef * c if v is None else v + coef * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)


def vec_scale(v: Vec, coef, shift: Optional[Exps] = None) -> Vec:
    out: Vec = {}
    vec_add_scaled(out, v, coef, shift)
    return out


def poly_mul(a: Vec, b: Vec) -> Vec:
    """Product of two ideal elements (component 0)."""
    out: Vec = {}
    for (_, ea), ca in a.items():
        for (cb_comp, eb), cb in b.items():
            k = (cb_comp, tuple(x + y for x, y in zip(ea, eb)))
            v = out.get(k)
            v = ca * cb if v is None else v + ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def scalar_times_vec(s: Vec, v: Vec) -> Vec:
    """Polynomial s (component 0) times module element v."""
    out: Vec = {}
    for (_, e), c in s.items():
        vec_add_scaled(out, v, c, e)
    return out


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Buchberger

class _Elem:
    __slots__ = ("vec", "lt", "lc")

    def __init__(self, vec: Vec, tkey):
        self.vec = vec
        self.lt = max(vec, key=tkey)
        self.lc = vec[self.lt]


def _find_reducer(term: Term, basis: Sequence[_Elem]) -> Optional[_Elem]:
    comp, e = term
    for g in basis:
        if g.lt[0] == comp and _divides(g.lt[1], e):
            return g
    return None


def reduce_vec(f: Vec, basis: Sequence[_Elem], tkey, full: bool = True) -> Vec:
    p = dict(f)
    rem: Vec = {}
    while p:
        lt = max(p, key=tkey)
        g = _find_reducer(lt, basis)
        if g is None:
            if not full:
                rem.update(p)
                return rem
            rem[lt] = p.pop(lt)
            continue
        q = p[lt] / g.lc
        vec_add_scaled(p, g.vec, -q, _sub(lt[1], g.lt[1]))
        p.pop(lt, None)
    return rem


def _monic(v: Vec, tkey) -> Vec:
    lt = max(v, key=tkey)
    c = v[lt]
    if c == 1:
        return v
    inv = 1 / c
    return {k: x * inv for k, x in v.items()}


def buchberger_vecs(gens: Iterable[Vec], order: MonomialOrder, module: bool = False) -> List[Vec]:
    """Reduced Groebner basis (monic, sorted by leading term, descending)."""
    tkey = order.term_key()
    mkey = order.mono_key()
    basis: List[_Elem] = []
    pairs: List[Tuple[int, int, Exps]] = []

    def add(h: Vec) -> None:
        h = _monic(h, tkey)
        new = _Elem(h, tkey)
        idx = len(basis)
        comp, lt = new.lt
        cand = []
        for i, g in enumerate(basis):
            if g.lt[0] != comp:
                continue
            cand.append((i, _lcm(g.lt[1], lt)))
        # chain criterion on the new pairs
        kept = []
        for i, l in cand:
            if any(l2 != l and _divides(l2, l) for _, l2 in cand):
                continue
            kept.append((i, l))
        seen = set()
        fresh = []
        for i, l in kept:
            if l in seen:
                continue
            seen.add(l)
            g = basis[i]
            if not module and all(a == 0 or b == 0 for a, b in zip(g.lt[1], lt)):
                continue  # coprime leading monomials
            fresh.append((i, idx, l))
        # prune old pairs made redundant by the new element
        survivors = []
        for i, j, l in pairs:
            if basis[i].lt[0] == comp and _divides(lt, l):
                li = _lcm(basis[i].lt[1], lt)
                lj = _lcm(basis[j].lt[1], lt)
                if li != l and lj != l:
                    continue
            survivors.append((i, j, l))
        pairs[:] = survivors + fresh
        basis.append(new)

    for g in gens:
        if not g:
            continue
        r = reduce_vec(g, basis, tkey)
        if r:
            add(r)

    while pairs:
        best = min(range(len(pairs)), key=lambda k: (sum(pairs[k][2]), mkey(pairs[k][2])))
        i, j, l = pairs.pop(best)
        gi, gj = basis[i], basis[j]
        s = vec_scale(gi.vec, 1 / gi.lc, _sub(l, gi.lt[1]))
        vec_add_scaled(s, gj.vec, -1 / gj.lc, _sub(l, gj.lt[1]))
        if not s:
            continue
        h = reduce_vec(s, basis, tkey)
        if h:
            add(h)

    # minimal basis, then interreduce
    elems = sorted(basis, key=lambda g: tkey(g.lt))
    minimal: List[_Elem] = []
    for g in elems:
        if any(h.lt[0] == g.lt[0] and _divides(h.lt[1], g.lt[1]) for h in minimal):
            continue
        minimal.append(g)
    out: List[Vec] = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        tail = dict(g.vec)
        lead = {g.lt: tail.pop(g.lt)}
        r = reduce_vec(tail, others, tkey)
        r.update(lead)
        out.append(_monic(r, tkey))
    out.sort(key=lambda v: tkey(max(v, key=tkey)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# ideals

def _check_even(ring: AlgebraCtx) -> None:
    if any(v.parity for v in ring.variables):
        raise OddVariableError("Groebner computations need even variables only")


def gcpoly_to_vec(p: GCPoly, ring: AlgebraCtx, mode: CoefficientMode, comp: int = 0) -> Vec:
    if p.ctx.names != ring.names:
        if not set(p.variables_used()) <= set(ring.names):
            raise ValueError("polynomial uses variables outside the ring")
        keep = [v for v in p.ctx.variables if v.name in ring.names]
        sub = p.ctx.with_t(variables=keep)
        p = GCPoly(sub, {(tuple(e[i] for i, v in enumerate(p.ctx.variables) if v.name in ring.names), te): c
                         for (e, te), c in p.terms.items()})
        p = p.embed(ring.with_t(t_mode=p.ctx.t_mode, t_order=p.ctx.t_order, t_degree=p.ctx.t_degree))
    if any(v.parity for v in p.ctx.variables):
        raise OddVariableError("odd variables present")
    out: Vec = {}
    for (exps, texp), c in p.terms.items():
        k = (comp, exps)
        v = out.get(k, 0) + mode.coefficient(c, texp)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def vec_to_gcpoly(v: Vec, ring: AlgebraCtx) -> GCPoly:
    """Convert back; Q(t) coefficients must be Laurent polynomials in t."""
    terms = {}
    ctx = ring.with_t(t_mode="laurent")
    for (_, e), c in v.items():
        if isinstance(c, RatFunc):
            den = c.den
            if any(den[:-1]):
                raise ValueError(f"coefficient {c} is not a Laurent polynomial in t")
            shift = len(den) - 1
            for k, a in enumerate(c.num):
                if a:
                    key = (e, k - shift)
                    terms[key] = terms.get(key, 0) + a
        else:
            terms[(e, 0)] = terms.get((e, 0), 0) + c
    return GCPoly(ctx, terms)


def format_vec(v: Vec, names: Sequence[str], ncomp: int = 1) -> str:
    if not v:
        return "0"
    parts = []
    tkey = MonomialOrder().term_key()
    for (comp, e) in sorted(v, key=tkey, reverse=True):
        c = v[(comp, e)]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if ncomp > 1:
            mono = (mono + "*" if mono else "") + f"e{comp}"
        cs = str(c)
        if isinstance(c, RatFunc) and not c.is_constant():
            cs = f"({c})"
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class Ideal:
    """An ideal in Q[vars] or Q(t)[vars]."""

    def __init__(self, ring: AlgebraCtx, generators: Sequence = (), coefficient_mode: CoefficientMode = RATIONAL):
        _check_even(ring)
        self.ring = ring
        self.mode = coefficient_mode
        gens: List[Vec] = []
        for g in generators:
            if isinstance(g, GCPoly):
                g = gcpoly_to_vec(g, ring, coefficient_mode)
            gens.append({k: coefficient_mode.convert(c) for k, c in g.items()})
        self.gens: List[Vec] = [g for g in gens if g]

    @property
    def names(self) -> Tuple[str, ...]:
        return self.ring.names

    def with_generators(self, gens: Sequence[Vec]) -> "Ideal":
        return Ideal(self.ring, gens, self.mode)

    def __add__(self, other: "Ideal") -> "Ideal":
        return self.with_generators(self.gens + other.gens)

    def __repr__(self) -> str:
        return f"Ideal({', '.join(format_vec(g, self.names) for g in self.gens)})"


@dataclass
class GroebnerBasis:
    ring: AlgebraCtx
    mode: CoefficientMode
    order: MonomialOrder
    basis: List[Vec]
    _elems: List[_Elem] = field(default=None, repr=False)

    def __post_init__(self):
        tkey = self.order.term_key()
        self._elems = [_Elem(v, tkey) for v in self.basis]

    @property
    def names(self):
        return self.ring.names

    def leading_monomials(self) -> List[Exps]:
        return [g.lt[1] for g in self._elems]

    def is_unit(self) -> bool:
        return any(not any(e) for e in self.leading_monomials())

    def normal_form(self, f) -> Vec:
        if isinstance(f, GCPoly):
            f = gcpoly_to_vec(f, self.ring, self.mode)
        return reduce_vec(f, self._elems, self.order.term_key())

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    def pure_power_missing(self) -> List[str]:
        """Variables with no pure power among the leading monomials."""
        missing = []
        for i, n in enumerate(self.names):
            if not any(e[i] and sum(e) == e[i] for e in self.leading_monomials()):
                missing.append(n)
        return missing

    def staircase(self) -> Optional[List[Exps]]:
        """Standard monomials, or ``None`` when there are infinitely many."""
        if self.is_unit():
            return []
        if self.pure_power_missing():
            return None
        return _order_ideal(self.leading_monomials(), len(self.names))

    def __str__(self) -> str:
        return "[" + ", ".join(format_vec(g, self.names) for g in self.basis) + "]"


def _order_ideal(leads: Sequence[Exps], n: int) -> List[Exps]:
    start = (0,) * n
    seen = {start}
    stack = [start]
    while stack:
        m = stack.pop()
        for i in range(n):
            nxt = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nxt in seen or any(_divides(l, nxt) for l in leads):
                continue
            seen.add(nxt)
            stack.append(nxt)
    return sorted(seen, key=_grevlex)


def buchberger(I: Ideal, order="grevlex") -> GroebnerBasis:
    if isinstance(order, str):
        order = MonomialOrder(order)
    basis = buchberger_vecs(I.gens, order)
    return GroebnerBasis(I.ring, I.mode, order, basis)


def quotient_dimension(G: GroebnerBasis):
    """Dimension of the quotient ring over the coefficient field, or ``INFINITE``."""
    st = G.staircase()
    return INFINITE if st is None else len(st)


# ---------------------------------------------------------------------------
# saturation, lengths, critical loci

def _extend_vec(v: Vec, extra: int) -> Vec:
    pad = (0,) * extra
    return {(c, e + pad): x for (c, e), x in v.items()}


def saturate(I: Ideal, f, order="grevlex") -> Ideal:
    """I : f^infinity via elimination of y from I + (1 - y f)."""
    if isinstance(f, GCPoly):
        f = gcpoly_to_vec(f, I.ring, I.mode)
    if not f:
        raise ValueError("cannot saturate by zero")
    n = len(I.names)
    one = I.mode.one
    rab: Vec = {(0, (0,) * (n + 1)): one}
    for (c, e), x in f.items():
        k = (0, e + (1,))
        rab[k] = rab.get(k, 0) - x
        if not rab[k]:
            del rab[k]
    gens = [_extend_vec(g, 1) for g in I.gens] + [rab]
    base = order if isinstance(order, str) else order.name
    # y is the last variable; put it in the first block by reversing block roles
    elim = _YLastOrder(base, n)
    basis = buchberger_vecs(gens, elim)
    kept = [{(c, e[:n]): x for (c, e), x in g.items()} for g in basis if all(e[n] == 0 for (_, e) in g)]
    return I.with_generators(kept)


class _YLastOrder(MonomialOrder):
    """Elimination order for the ring with one extra trailing variable."""

    def __init__(self, base: str, n: int):
        object.__setattr__(self, "name", base)
        object.__setattr__(self, "blocks", ())
        object.__setattr__(self, "module", "pot")
        object.__setattr__(self, "_n", n)

    def mono_key(self):
        base = _ORDERS[self.name]
        n = self._n
        return lambda e: (e[n], base(e[:n]))


def scheme_length(I: Ideal, excluded: Sequence = (), order="grevlex"):
    """Length of the subscheme cut out by I after removing each excluded divisor."""
    J = I
    for f in excluded:
        J = saturate(J, f, order)
    return quotient_dimension(buchberger(J, order))


def critical_ideal(W_num: GCPoly, W_den: GCPoly, k: int, vars: Sequence[str],
                   mode: CoefficientMode = RATIONAL_FUNCTION, ring: Optional[AlgebraCtx] = None):
    """Cleared critical equations of W = W_num / W_den^k.

    Each partial derivative is multiplied by W_den^(k+1):
    dW_num * W_den - k * W_num * dW_den.  Returns the ideal and the
    denominator (to be saturated away downstream).
    """
    if not W_den:
        raise ValueError("denominator is the zero polynomial")
    if ring is None:
        ring = AlgebraCtx(tuple(VariableSpec(n, W_num.ctx.var(n).degree) for n in vars))
    gens = []
    for v in vars:
        gens.append(derive(W_num, v) * W_den - (derive(W_den, v) * W_num).scale(k))
    return Ideal(ring, gens, mode), W_den


def translate(v: Vec, point: Sequence, n: int) -> Vec:
    """Substitute x_i -> x_i + point_i."""
    out: Vec = {}
    for (c, e), x in v.items():
        term: Vec = {(c, (0,) * n): x}
        for i, k in enumerate(e):
            if not k:
                continue
            lin: Vec = {(0, tuple(1 if j == i else 0 for j in range(n))): 1}
            if point[i]:
                lin[(0, (0,) * n)] = point[i]
            for _ in range(k):
                term = poly_mul(lin, term) if c == 0 else scalar_times_vec(lin, term)
        vec_add_scaled(out, term, 1)
    return out


def local_multiplicity(I: Ideal, point: Sequence = None, order="grevlex", max_power: int = 64):
    """Length of the local ring of V(I) at ``point`` (default: the origin).

    Computes dim R/(I + m^N) for N = 1, 2, ... until two consecutive values
    agree; at that point m^N lies in I locally and the value is the length.
    """
    n = len(I.names)
    if point is None:
        point = [0] * n
    point = [Fraction(p) for p in point]
    gens = [translate(g, point, n) for g in I.gens] if any(point) else list(I.gens)
    one = I.mode.one
    prev = None
    for N in range(1, max_power + 1):
        mN = []
        for combo in combinations_with_replacement(range(n), N):
            e = [0] * n
            for i in combo:
                e[i] += 1
            mN.append({(0, tuple(e)): one})
        d = quotient_dimension(buchberger(I.with_generators(gens + mN), order))
        if d == prev:
            return d
        prev = d
    raise RuntimeError("local length did not stabilise; the point may lie on a positive-dimensional component")


def specialized_length(make_ideal: Callable[[CoefficientMode], Ideal], excluded_for: Callable[[CoefficientMode], Sequence],
                       seed: int = 0, draws: int = 2, order="grevlex"):
    """Probabilistic fast path: specialize t at random rationals; draws must agree."""
    rng = random.Random(seed)
    values = []
    results = []
    for _ in range(draws):
        v = Fraction(rng.randint(1, 10 ** 6), rng.randint(1, 10 ** 3))
        mode = specialized(v)
        values.append(v)
        results.append(scheme_length(make_ideal(mode), excluded_for(mode), order))
    if len(set(results)) != 1:
        raise RuntimeError(f"specializations disagree: {dict(zip(map(str, values), results))}")
    return results[0], values


# ---------------------------------------------------------------------------
# submodules of free modules

def augmented_basis(vectors: Sequence[Vec], ncomp: int, nvars: int, order="grevlex") -> List[Vec]:
    """GB of the module generated by (v_i, e_i) in R^(ncomp + len(vectors)), POT order."""
    base = order if isinstance(order, str) else order.name
    mo = MonomialOrder(base, module="pot")
    zero = (0,) * nvars
    gens = []
    for i, v in enumerate(vectors):
        g = dict(v)
        g[(ncomp + i, zero)] = Fraction(1)
        gens.append(g)
    return buchberger_vecs(gens, mo, module=True)


def syzygies(vectors: Sequence[Vec], ncomp: int, nvars: int, order="grevlex") -> List[Vec]:
    """Generators of {a : sum a_i v_i = 0}, as vectors indexed by generator number."""
    basis = augmented_basis(vectors, ncomp, nvars, order)
    out = []
    for g in basis:
        if all(c >= ncomp for (c, _) in g):
            out.append({(c - ncomp, e): x for (c, e), x in g.items()})
    return out


class ModuleLifter:
    """Membership and lifting for the submodule generated by ``vectors``."""

    def __init__(self, vectors: Sequence[Vec], ncomp: int, nvars: int, order="grevlex"):
        self.ncomp = ncomp
        self.nvars = nvars
        self.order = MonomialOrder(order if isinstance(order, str) else order.name, module="pot")
        basis = augmented_basis(vectors, ncomp, nvars, self.order)
        tkey = self.order.term_key()
        self._elems = [_Elem(g, tkey) for g in basis]
        self._plain = [_Elem({k: x for k, x in g.items() if k[0] < ncomp}, tkey)
                       for g in basis if any(k[0] < ncomp for k in g)]

    def normal_form(self, v: Vec) -> Vec:
        return reduce_vec(v, self._plain, self.order.term_key())

    def lift(self, v: Vec) -> Optional[Vec]:
        """Coefficients a with sum a_i v_i = v, or None when v is not in the module."""
        if not v:
            return {}
        rem = reduce_vec(v, self._elems, self.order.term_key())
        if any(c < self.ncomp for (c, _) in rem):
            return None
        return {(c - self.ncomp, e): -x for (c, e), x in rem.items()}


def module_quotient_dimension(relations: Sequence[Vec], ncomp: int, nvars: int, order="grevlex"):
    """Dimension over the field of R^ncomp / <relations>, or INFINITE."""
    mo = MonomialOrder(order if isinstance(order, str) else order.name, module="pot")
    basis = buchberger_vecs(relations, mo, module=True)
    total = 0
    tkey = mo.term_key()
    for c in range(ncomp):
        leads = [max(g, key=tkey)[1] for g in basis if max(g, key=tkey)[0] == c]
        if any(not any(e) for e in leads):
            continue
        if any(not any(e[i] and sum(e) == e[i] for e in leads) for i in range(nvars)):
            return INFINITE
        total += len(_order_ideal(leads, nvars))
    return total
