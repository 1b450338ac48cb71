"""Polyvector fields, the Schouten bracket and twisted differentials.

A polyvector on the algebra of ``base`` is an element of the free
graded-commutative algebra on the base variables together with one dual
variable per base variable.  The dual of z has degree ``-|z| - dual_shift``;
the default shift 1 makes duals of even variables odd and the bracket odd.

The bracket is the Poisson bracket of the pairing z_i <-> z*_i,

    [F, G] = sum_i (F d_r/dz*_i)(d_l G/dz_i) - (F d_r/dz_i)(d_l G/dz*_i)

where d_r and d_l are right and left derivatives.  Right derivatives are
obtained from left ones: F d_r/dy = (-1)^(|y|(|F|+|y|)) d_l F/dy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .algebra import AlgebraCtx, ContextMismatch, GCPoly, VariableSpec, derive, mul, parse
from .linalg import Echelon, kernel, solve
from .ratfunc import RatFunc


class NonFlatBackground(ValueError):
    pass


class GaugeBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PolyCtx:
    base: AlgebraCtx
    dual_shift: int = 1
    dual_names: Tuple[Tuple[str, str], ...] = ()
    full: AlgebraCtx = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        names = dict(self.dual_names)
        object.__setattr__(self, "dual_names", tuple(sorted(names.items())))
        duals = []
        for v in self.base.variables:
            dn = names.get(v.name, "D" + v.name)
            duals.append(VariableSpec(dn, -v.degree - self.dual_shift))
        full = self.base.extend(duals)  # raises on name clashes
        object.__setattr__(self, "full", full)

    @classmethod
    def build(cls, spec, dual_names: Optional[Mapping[str, str]] = None, dual_shift: int = 1, **kw) -> "PolyCtx":
        base = AlgebraCtx.build(spec, **kw)
        return cls(base, dual_shift, tuple((dual_names or {}).items()))

    @property
    def n(self) -> int:
        return self.base.nvars

    def dual(self, name: str) -> str:
        return self.full.variables[self.n + self.base.index(name)].name

    def pairs(self) -> List[Tuple[str, str]]:
        return [(v.name, self.full.variables[self.n + i].name) for i, v in enumerate(self.base.variables)]

    def parse(self, text: str) -> "Polyvector":
        return Polyvector(self, parse(self.full, text))

    def zero(self) -> "Polyvector":
        return Polyvector(self, GCPoly.zero(self.full))

    def const(self, c) -> "Polyvector":
        return Polyvector(self, GCPoly.const(self.full, c))

    def dual_degree(self, mono) -> int:
        """Number of dual factors in a monomial."""
        return sum(mono[0][self.n:])


class Polyvector:
    """A polyvector: a GCPoly over base variables and their duals."""

    __slots__ = ("ctx", "body")

    def __init__(self, ctx: PolyCtx, body: GCPoly):
        if body.ctx != ctx.full:
            raise ContextMismatch("body does not live in the polyvector context")
        self.ctx = ctx
        self.body = body

    def _wrap(self, body: GCPoly) -> "Polyvector":
        return Polyvector(self.ctx, body)

    def _other(self, other) -> GCPoly:
        if isinstance(other, Polyvector):
            if other.ctx != self.ctx:
                raise ContextMismatch("polyvectors live in different contexts")
            return other.body
        return GCPoly.const(self.ctx.full, other)

    def __add__(self, other):
        return self._wrap(self.body + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.body - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.body)

    def __neg__(self):
        return self._wrap(-self.body)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._wrap(self.body.scale(other))
        return self._wrap(mul(self.body, self._other(other)))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._wrap(self.body.scale(other))
        return self._wrap(mul(self._other(other), self.body))

    def __bool__(self):
        return bool(self.body)

    def __eq__(self, other):
        if isinstance(other, Polyvector):
            return self.ctx == other.ctx and self.body == other.body
        if isinstance(other, (int, Fraction)):
            return self.body == other
        return NotImplemented

    def __hash__(self):
        return hash(self.body)

    def truncate_t(self, order: int) -> "Polyvector":
        return self._wrap(self.body.truncate_t(order))

    def degree(self) -> Optional[int]:
        return self.body.degree()

    def __str__(self):
        return str(self.body)

    def __repr__(self):
        return f"Polyvector({self.body})"

    def to_json(self) -> dict:
        data = self.body.to_json()
        data["duals"] = {b: d for b, d in self.ctx.pairs()}
        data["dual_shift"] = self.ctx.dual_shift
        data["grading"] = self.ctx.base.grading
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Polyvector":
        duals = data["duals"]
        dual_set = set(duals.values())
        base_vars = [(v["name"], int(v["degree"])) for v in data["vars"] if v["name"] not in dual_set]
        ctx = PolyCtx.build(base_vars, duals, int(data.get("dual_shift", 1)),
                            t_degree=int(data.get("t_degree", 0)), t_mode="laurent",
                            grading=data.get("grading", "Z"))
        return cls(ctx, GCPoly.from_json(data, ctx.full))


def _parity_parts(p: GCPoly) -> Dict[int, GCPoly]:
    parts: Dict[int, dict] = {}
    for m, c in p.terms.items():
        parts.setdefault(p.term_degree(m) % 2, {})[m] = c
    return {k: GCPoly(p.ctx, v) for k, v in parts.items()}


def _right_derive(ctx: AlgebraCtx, F: GCPoly, parity: int, name: str) -> GCPoly:
    """Right derivative of a parity-homogeneous F via the left one."""
    d = derive(F, name)
    y = ctx.var(name).parity
    return -d if (y * (parity + y)) % 2 else d


def _bracket_body(ctx: PolyCtx, F: GCPoly, G: GCPoly) -> GCPoly:
    out = GCPoly.zero(ctx.full)
    if not F or not G:
        return out
    full = ctx.full
    pairs = ctx.pairs()
    for pf, Fp in _parity_parts(F).items():
        for z, zs in pairs:
            a = _right_derive(full, Fp, pf, zs)
            if a:
                b = derive(G, z)
                if b:
                    out = out + mul(a, b)
            c = _right_derive(full, Fp, pf, z)
            if c:
                d = derive(G, zs)
                if d:
                    out = out - mul(c, d)
    return out


def schouten(F: Polyvector, G: Polyvector) -> Polyvector:
    """The Schouten bracket [F, G]."""
    if F.ctx != G.ctx:
        raise ContextMismatch("polyvectors live in different contexts")
    body = _bracket_body(F.ctx, F.body, G.body)
    return Polyvector(F.ctx, body)


def check_flat(background: Polyvector) -> None:
    sq = schouten(background, background)
    if sq:
        raise NonFlatBackground(f"[background, background] = {sq} is not zero")


def twisted_diff(background: Polyvector, F: Polyvector, check: bool = True) -> Polyvector:
    """[background, F]; the background must square to zero."""
    if check:
        check_flat(background)
    return schouten(background, F)


@dataclass
class MCProblem:
    background: Polyvector
    candidate: Polyvector
    truncation: Optional[int] = None

    def __post_init__(self):
        if self.truncation is not None and self.truncation < 0:
            raise ValueError("truncation must be nonnegative")
        check_flat(self.background)


def mc_residual(prob: MCProblem) -> Polyvector:
    """d_B(mu) + 1/2 [mu, mu], truncated at the t-order bound."""
    mu = prob.candidate
    res = schouten(prob.background, mu) + schouten(mu, mu) * Fraction(1, 2)
    if prob.truncation is not None:
        res = res.truncate_t(prob.truncation)
    return res


def _min_t(p: Polyvector) -> Optional[int]:
    exps = p.body.t_exponents()
    return min(exps) if exps else None


def gauge(phi: Polyvector, mu: Polyvector, background: Polyvector, order: int, max_terms: int = 64) -> Polyvector:
    """exp(phi) acting on mu: mu + sum_n ad(phi)^n ([phi, mu] - [B, phi]) / (n+1)!"""
    x = schouten(phi, mu) - schouten(background, phi)
    result = mu + x
    k = 1
    term = x
    while True:
        term = schouten(phi, term).truncate_t(order)
        if not term:
            break
        k += 1
        if k > max_terms:
            raise GaugeBudgetExceeded(f"ad(phi) series did not terminate within {max_terms} terms")
        result = result + term * Fraction(1, factorial(k))
    return result.truncate_t(order)


def potential_background(W: Polyvector) -> Polyvector:
    """Background for a curving potential W.

    With [phi, f] = phi(f) the curvature enters the Maurer-Cartan element as
    -W, so gauge flows of phi move B + mu along q -> exp(phi) q.
    """
    return -W


# ---------------------------------------------------------------------------
# finite windows of the polyvector complex

def _monomials(ctx: AlgebraCtx, bound: int) -> Iterator[Tuple[int, ...]]:
    n = ctx.nvars
    odd = [ctx.is_odd(i) for i in range(n)]

    def rec(i, left, acc):
        if i == n:
            yield tuple(acc)
            return
        top = 1 if odd[i] else left
        for e in range(min(top, left) + 1):
            acc.append(e)
            yield from rec(i + 1, left - e, acc)
            acc.pop()

    yield from rec(0, bound, [])


def _mono_degree(ctx: AlgebraCtx, exps) -> int:
    return ctx.reduce_degree(sum(e * v.degree for e, v in zip(exps, ctx.variables)))


def _as_vector(p: GCPoly) -> Dict:
    """Group t-exponents into coefficients of Q(t) (or Q when t is absent)."""
    out: Dict = {}
    uses_t = any(te for _, te in p.terms)
    for (exps, te), c in p.terms.items():
        val = RatFunc.t_power(te, c) if uses_t else c
        prev = out.get(exps)
        val = val if prev is None else prev + val
        if val:
            out[exps] = val
        else:
            out.pop(exps, None)
    return out


def _from_vector(ctx: AlgebraCtx, vec: Dict) -> GCPoly:
    terms = {}
    for exps, c in vec.items():
        if isinstance(c, RatFunc):
            if any(c.den[:-1]):
                raise ValueError(f"coefficient {c} is not a Laurent polynomial")
            shift = len(c.den) - 1
            for k, a in enumerate(c.num):
                if a:
                    terms[(exps, k - shift)] = a
        else:
            terms[(exps, 0)] = c
    return GCPoly(ctx, terms)


@dataclass
class WindowBlock:
    degree: int
    weight_bound: int
    dimension: int
    stable: bool
    basis: List[Polyvector]
    cocycle_dimension: int
    coboundary_dimension: int

    def to_json(self) -> dict:
        return {"degree": self.degree, "weight_bound": self.weight_bound, "dimension": self.dimension,
                "stable": self.stable, "basis": [str(b) for b in self.basis]}


def _cohomology_block(background: Polyvector, degree: int, bound: int, slack: int):
    ctx = background.ctx
    full = ctx.full
    cochains = [e for e in _monomials(full, bound) if _mono_degree(full, e) == degree]
    pre = [e for e in _monomials(full, bound + slack) if _mono_degree(full, e) == full.reduce_degree(degree - 1)]

    def image(exps):
        p = Polyvector(ctx, GCPoly(full, {(exps, 0): 1}))
        return _as_vector(schouten(background, p).body)

    ker, _ = kernel([image(e) for e in cochains])
    cocycles = [{cochains[i]: c for i, c in k.items()} for k in ker]
    ech = Echelon()
    for e in pre:
        img = image(e)
        if img:
            ech.add(img)
    # count cocycles modulo coboundaries
    quot = Echelon()
    for rv, _ in ech.rows.values():
        quot.add(rv)
    nb = len(quot)
    reps = []
    for z in cocycles:
        rem, _ = quot.add(z)
        if rem:
            reps.append(z)
    bounded = len(cocycles) + nb - len(quot)  # coboundaries lying in the window
    return cocycles, reps, bounded


def cohomology_window(background: Polyvector, degree_window: Sequence[int], weight_bound: int,
                      slack: int = 1, check: bool = True) -> List[WindowBlock]:
    """Cohomology of [background, -] on monomials of total exponent <= weight_bound.

    Cocycles are taken among monomials of weight <= weight_bound; coboundaries
    are images of cochains of weight <= weight_bound + slack.  A block is
    flagged stable when allowing one more unit of preimage weight does not
    change its dimension.
    """
    lo, hi = degree_window
    if lo > hi:
        raise ValueError("degree window is inverted")
    if weight_bound < 0:
        raise ValueError("weight bound must be nonnegative")
    if check:
        check_flat(background)
    full = background.ctx.full
    degrees = sorted({full.reduce_degree(d) for d in range(lo, hi + 1)})
    out = []
    for d in degrees:
        cocycles, reps, bounded = _cohomology_block(background, d, weight_bound, slack)
        _, reps2, _ = _cohomology_block(background, d, weight_bound, slack + 1)
        basis = [Polyvector(background.ctx, _from_vector(full, z)) for z in reps]
        out.append(WindowBlock(d, weight_bound, len(reps), len(reps) == len(reps2), basis,
                               len(cocycles), bounded))
    return out


def is_coboundary(background: Polyvector, cocycle: Polyvector, weight_bound: int) -> Optional[Polyvector]:
    """A preimage P with [background, P] = cocycle among monomials of weight <= bound."""
    check_flat(background)
    if schouten(background, cocycle):
        raise ValueError("input is not closed")
    if not cocycle:
        return background.ctx.zero()
    ctx = background.ctx
    full = ctx.full
    target = _as_vector(cocycle.body)
    degs = {cocycle.body.term_degree(m) for m in cocycle.body.terms}
    pre_deg = {full.reduce_degree(d - 1) for d in degs}
    cands = [e for e in _monomials(full, weight_bound) if _mono_degree(full, e) in pre_deg]
    imgs = [_as_vector(schouten(background, Polyvector(ctx, GCPoly(full, {(e, 0): 1}))).body) for e in cands]
    _, ech = kernel(imgs)
    sol = solve(ech, target)
    if sol is None:
        return None
    vec = {cands[i]: c for i, c in sol.items()}
    return Polyvector(ctx, _from_vector(full, vec))


# ---------------------------------------------------------------------------
# Gamma matrix of a vector field

@dataclass
class GammaReport:
    variables: List[str]
    matrix: List[List[GCPoly]]
    nilpotency_order: Optional[int]
    traces: List[GCPoly]

    def all_traces_zero(self) -> bool:
        return all(not tr for tr in self.traces)


def vector_field_components(v: Polyvector) -> Dict[str, GCPoly]:
    """Write v = sum_j v_j * dual_j with v_j in the base algebra."""
    ctx = v.ctx
    n = ctx.n
    comps: Dict[str, dict] = {}
    for (exps, te), c in v.body.terms.items():
        duals = [i for i in range(n, 2 * n) if exps[i]]
        if len(duals) != 1 or exps[duals[0]] != 1:
            raise ValueError("input is not a vector field")
        j = duals[0] - n
        # normal form already lists base factors before the dual, so no sign
        name = ctx.base.variables[j].name
        key = (exps[:n], te)
        bucket = comps.setdefault(name, {})
        bucket[key] = bucket.get(key, 0) + c
    base = ctx.base.with_t(t_mode="laurent")
    return {k: GCPoly(base, t) for k, t in comps.items()}


def gamma_check(v: Polyvector) -> GammaReport:
    """Matrix-valued one-form Gamma_ji = sum_k d_i d_k v_j dz_k, its nilpotency and traces."""
    ctx = v.ctx
    comps = vector_field_components(v)
    base = ctx.base.with_t(t_mode="laurent")
    forms = base.extend(VariableSpec("d" + var.name, var.degree + 1) for var in base.variables)
    names = list(base.names)
    nvar = len(names)

    def lift(p: GCPoly) -> GCPoly:
        return p.embed(forms)

    gamma = [[GCPoly.zero(forms) for _ in range(nvar)] for _ in range(nvar)]
    for j, name in enumerate(names):
        vj = comps.get(name)
        if vj is None:
            continue
        for i in range(nvar):
            di = derive(vj, names[i])
            if not di:
                continue
            entry = GCPoly.zero(forms)
            for k in range(nvar):
                dik = derive(di, names[k])
                if dik:
                    entry = entry + mul(lift(dik), GCPoly.var(forms, "d" + names[k]))
            gamma[j][i] = entry

    def matmul(a, b):
        return [[sum((mul(a[r][m], b[m][c]) for m in range(nvar)), GCPoly.zero(forms)) for c in range(nvar)]
                for r in range(nvar)]

    traces = []
    power = gamma
    nil = None
    for k in range(1, nvar + 1):
        if k > 1:
            power = matmul(power, gamma)
        if nil is None and all(not e for row in power for e in row):
            nil = k
        traces.append(sum((power[r][r] for r in range(nvar)), GCPoly.zero(forms)))
    if nil is None and nvar == 0:
        nil = 1
    return GammaReport(names, gamma, nil, traces)
