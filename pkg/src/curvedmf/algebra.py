"""Free graded-commutative algebras over Q with an optional formal parameter t.

Even variables commute, odd variables anticommute and square to zero.  A
monomial is stored in normal form: an exponent vector aligned with the
context's variable order (odd exponents are 0 or 1, the odd factors are
multiplied in context order) together with an integer exponent of t.

Odd derivatives are *left* derivatives: the variable is moved to the front
of the monomial, picking up a sign for every odd factor it passes.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[Tuple[int, ...], int]  # (exponents, t exponent)

T_MODES = ("polynomial", "laurent", "truncated")


class ContextMismatch(ValueError):
    pass


@dataclass(frozen=True)
class VariableSpec:
    name: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree % 2


@dataclass(frozen=True)
class AlgebraCtx:
    variables: Tuple[VariableSpec, ...] = ()
    t_degree: int = 0
    t_mode: str = "polynomial"
    t_order: Optional[int] = None
    grading: str = "Z"
    _index: Dict[str, int] = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if "t" in names:
            raise ValueError("'t' is reserved for the formal parameter")
        if self.t_mode not in T_MODES:
            raise ValueError(f"unknown t_mode {self.t_mode!r}")
        if self.t_mode == "truncated" and (self.t_order is None or self.t_order < 0):
            raise ValueError("truncated mode needs a nonnegative t_order")
        if self.t_degree % 2:
            raise ValueError("t must have even degree")
        if self.grading not in ("Z", "Z2"):
            raise ValueError("grading must be 'Z' or 'Z2'")
        self._index.clear()
        self._index.update({n: i for i, n in enumerate(names)})

    @classmethod
    def build(cls, spec: Iterable[Tuple[str, int]], **kw) -> "AlgebraCtx":
        return cls(tuple(VariableSpec(n, d) for n, d in spec), **kw)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> VariableSpec:
        return self.variables[self.index(name)]

    def is_odd(self, i: int) -> bool:
        return self.variables[i].degree % 2 == 1

    def odd_positions(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.variables) if v.degree % 2)

    def with_t(self, **kw) -> "AlgebraCtx":
        args = dict(variables=self.variables, t_degree=self.t_degree, t_mode=self.t_mode,
                    t_order=self.t_order, grading=self.grading)
        args.update(kw)
        return AlgebraCtx(**args)

    def extend(self, extra: Iterable[VariableSpec]) -> "AlgebraCtx":
        return self.with_t(variables=self.variables + tuple(extra))

    def reduce_degree(self, d: int) -> int:
        return d % 2 if self.grading == "Z2" else d


def _merge_sign(odd_a: Sequence[int], odd_b: Sequence[int]) -> int:
    """Sign of reordering (odd_a)(odd_b) into increasing order; 0 on repeats."""
    inv = 0
    j = 0
    sb = sorted(odd_b)
    for a in sorted(odd_a):
        # count entries of b smaller than a
        while j < len(sb) and sb[j] < a:
            j += 1
        if j < len(sb) and sb[j] == a:
            return 0
        inv += j
    return -1 if inv % 2 else 1


class GCPoly:
    """Element of the free graded-commutative algebra of ``ctx``.

    Instances are treated as immutable; ``terms`` maps normal-form monomials
    to nonzero rational coefficients.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraCtx, terms: Optional[Mapping[Monomial, object]] = None):
        self.ctx = ctx
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            odd = ctx.odd_positions()
            for (exps, texp), c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(exps) != ctx.nvars:
                    raise ValueError("exponent vector does not match context")
                if any(exps[i] > 1 for i in odd) or any(e < 0 for e in exps):
                    raise ValueError(f"monomial {exps} not in normal form")
                if texp < 0 and ctx.t_mode != "laurent":
                    raise ValueError("negative power of t outside laurent mode")
                if ctx.t_mode == "truncated" and texp > ctx.t_order:
                    continue
                clean[(tuple(exps), texp)] = c
        self.terms: Dict[Monomial, Fraction] = clean

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ctx: AlgebraCtx) -> "GCPoly":
        return cls(ctx)

    @classmethod
    def const(cls, ctx: AlgebraCtx, c=1) -> "GCPoly":
        return cls(ctx, {((0,) * ctx.nvars, 0): c})

    @classmethod
    def var(cls, ctx: AlgebraCtx, name: str) -> "GCPoly":
        exps = [0] * ctx.nvars
        exps[ctx.index(name)] = 1
        return cls(ctx, {(tuple(exps), 0): 1})

    @classmethod
    def t(cls, ctx: AlgebraCtx, k: int = 1) -> "GCPoly":
        return cls(ctx, {((0,) * ctx.nvars, k): 1})

    @classmethod
    def monomial(cls, ctx: AlgebraCtx, powers: Mapping[str, int], coef=1, t: int = 0) -> "GCPoly":
        exps = [0] * ctx.nvars
        for n, e in powers.items():
            exps[ctx.index(n)] = e
        return cls(ctx, {(tuple(exps), t): coef})

    # basic queries ----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, GCPoly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == GCPoly.const(self.ctx, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def term_degree(self, mono: Monomial) -> int:
        exps, texp = mono
        d = sum(e * v.degree for e, v in zip(exps, self.ctx.variables)) + texp * self.ctx.t_degree
        return self.ctx.reduce_degree(d)

    def degrees(self) -> set:
        return {self.term_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element (``None`` for 0 or inhomogeneous)."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def parities(self) -> set:
        return {self.term_degree(m) % 2 for m in self.terms}

    def parity(self) -> Optional[int]:
        ps = self.parities()
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def variables_used(self) -> set:
        used = set()
        for exps, _ in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(self.ctx.variables[i].name)
        return used

    def t_exponents(self) -> set:
        return {texp for _, texp in self.terms}

    def constant_term(self) -> Fraction:
        return self.terms.get(((0,) * self.ctx.nvars, 0), Fraction(0))

    def weight(self, mono: Monomial) -> int:
        return sum(mono[0])

    def max_weight(self) -> int:
        return max((sum(m[0]) for m in self.terms), default=0)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "GCPoly":
        if isinstance(other, GCPoly):
            if other.ctx != self.ctx:
                raise ContextMismatch("operands live in different algebra contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return GCPoly.const(self.ctx, other)
        raise TypeError(f"cannot combine GCPoly with {type(other).__name__}")

    def __add__(self, other) -> "GCPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GCPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "GCPoly":
        return GCPoly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "GCPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GCPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "GCPoly":
        c = Fraction(c)
        return GCPoly(self.ctx, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> "GCPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other) -> "GCPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self._coerce(other), self)

    def __truediv__(self, other) -> "GCPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, GCPoly) and len(other.terms) == 1:
            (exps, texp), c = next(iter(other.terms.items()))
            if not any(exps):
                return GCPoly(self.ctx, {(m, te - texp): v / c for (m, te), v in self.terms.items()})
        raise ValueError("only division by scalars and powers of t is supported")

    def __pow__(self, k: int) -> "GCPoly":
        if k < 0:
            return GCPoly.const(self.ctx, 1) / (self ** (-k))
        out = GCPoly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derive(self, name: str) -> "GCPoly":
        return derive(self, name)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def truncate_t(self, order: int) -> "GCPoly":
        return GCPoly(self.ctx, {m: c for m, c in self.terms.items() if m[1] <= order})

    def embed(self, ctx: AlgebraCtx) -> "GCPoly":
        """Reinterpret in a context containing all variables used here (by name)."""
        if ctx == self.ctx:
            return self
        pos = [ctx.index(v.name) for v in self.ctx.variables]
        for v, p in zip(self.ctx.variables, pos):
            if ctx.variables[p].parity != v.parity:
                raise ContextMismatch(f"variable {v.name} changes parity")
        out: Dict[Monomial, Fraction] = {}
        for (exps, texp), c in self.terms.items():
            new = [0] * ctx.nvars
            odd_src = []
            for i, e in enumerate(exps):
                if e:
                    new[pos[i]] = e
                    if self.ctx.is_odd(i):
                        odd_src.append(pos[i])
            # odd factors are listed in source order; sort them into target order
            sign = _perm_sign(odd_src)
            out[(tuple(new), texp)] = out.get((tuple(new), texp), 0) + sign * c
        return GCPoly(ctx, out)

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for (exps, texp), c in self.sorted_terms():
            mono = {self.ctx.variables[i].name: e for i, e in enumerate(exps) if e}
            if texp:
                mono["t"] = texp
            terms.append({"mono": mono, "coef": _frac_str(c)})
        return {
            "vars": [{"name": v.name, "degree": v.degree} for v in self.ctx.variables],
            "t_degree": self.ctx.t_degree,
            "terms": terms,
        }

    @classmethod
    def from_json(cls, data: dict, ctx: Optional[AlgebraCtx] = None) -> "GCPoly":
        if ctx is None:
            ctx = AlgebraCtx.build(((v["name"], int(v["degree"])) for v in data["vars"]),
                                   t_degree=int(data.get("t_degree", 0)),
                                   t_mode=data.get("t_mode", "laurent"))
        terms: Dict[Monomial, Fraction] = {}
        for term in data["terms"]:
            mono = dict(term["mono"])
            texp = int(mono.pop("t", 0))
            p = GCPoly.monomial(ctx, {k: int(v) for k, v in mono.items()}, 1, texp)
            # odd factors in JSON are listed in context order, so the sign is +1
            (m, _), = p.terms.items()
            terms[m] = terms.get(m, 0) + Fraction(term["coef"])
        return cls(ctx, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    # printing ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], sum(kv[0][0]), tuple(-e for e in kv[0][0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (exps, texp), c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e:
                    n = self.ctx.variables[i].name
                    factors.append(n if e == 1 else f"{n}^{e}")
            if texp:
                factors.append("t" if texp == 1 else f"t^{texp}")
            mono = "*".join(factors)
            if not mono:
                parts.append(_frac_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_frac_str(c)}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"GCPoly({self})"


def _perm_sign(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def mul(a: GCPoly, b: GCPoly) -> GCPoly:
    """Graded-commutative product with Koszul signs."""
    if a.ctx != b.ctx:
        raise ContextMismatch("operands live in different algebra contexts")
    ctx = a.ctx
    odd = ctx.odd_positions()
    out: Dict[Monomial, Fraction] = {}
    b_items = [(exps, texp, c, [i for i in odd if exps[i]]) for (exps, texp), c in b.terms.items()]
    for (ea, ta), ca in a.terms.items():
        oa = [i for i in odd if ea[i]]
        for eb, tb, cb, ob in b_items:
            if oa and ob:
                sign = _merge_sign(oa, ob)
                if sign == 0:
                    continue
            else:
                sign = 1
            key = (tuple(x + y for x, y in zip(ea, eb)), ta + tb)
            out[key] = out.get(key, 0) + sign * ca * cb
    return GCPoly(ctx, out)


def derive(p: GCPoly, name: str) -> GCPoly:
    """Signed left partial derivative with respect to the variable ``name``."""
    ctx = p.ctx
    k = ctx.index(name)
    odd_var = ctx.is_odd(k)
    odd = ctx.odd_positions()
    out: Dict[Monomial, Fraction] = {}
    for (exps, texp), c in p.terms.items():
        e = exps[k]
        if not e:
            continue
        new = list(exps)
        new[k] = e - 1
        if odd_var:
            passed = sum(1 for i in odd if i < k and exps[i])
            coef = -c if passed % 2 else c
        else:
            coef = c * e
        key = (tuple(new), texp)
        out[key] = out.get(key, 0) + coef
    return GCPoly(ctx, out)


def substitute(p: GCPoly, mapping: Mapping[str, GCPoly], target: Optional[AlgebraCtx] = None) -> GCPoly:
    """Algebra homomorphism sending each mapped variable to its image.

    Unmapped variables are sent to the variable of the same name in the target
    context; t is sent to t.
    """
    if target is None:
        imgs = [v for v in mapping.values() if isinstance(v, GCPoly)]
        target = imgs[0].ctx if imgs else p.ctx
    images = []
    for i, v in enumerate(p.ctx.variables):
        if v.name in mapping:
            img = mapping[v.name]
            if not isinstance(img, GCPoly):
                img = GCPoly.const(target, img)
            if img.ctx != target:
                raise ContextMismatch(f"image of {v.name} lives in another context")
            par = img.parity()
            if img and par != v.parity:
                raise ValueError(f"image of {v.name} does not have parity {v.parity}")
        else:
            try:
                j = target.index(v.name)
            except KeyError:
                raise ContextMismatch(f"variable {v.name} has no image in the target context") from None
            if target.variables[j].parity != v.parity:
                raise ValueError(f"variable {v.name} changes parity")
            img = GCPoly.var(target, v.name)
        images.append(img)
    one = GCPoly.const(target, 1)
    power_cache: Dict[Tuple[int, int], GCPoly] = {}

    def power(i: int, e: int) -> GCPoly:
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = images[i] ** e
        return power_cache[key]

    out = GCPoly.zero(target)
    for (exps, texp), c in p.terms.items():
        term = GCPoly.t(target, texp).scale(c) if texp else one.scale(c)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
                if not term:
                    break
        out = out + term
    return out


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse(ctx: AlgebraCtx, text: str) -> GCPoly:
    """Parse an expression such as ``"-u*t + 1/4*u^3*t^2"`` in ``ctx``."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id == "t":
                return GCPoly.t(ctx)
            return GCPoly.var(ctx, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                if isinstance(left, Fraction) and isinstance(right, GCPoly):
                    return right.scale(left)
                return left * right
            if isinstance(node.op, ast.Div):
                if isinstance(left, Fraction) and isinstance(right, Fraction):
                    return left / right
                if isinstance(left, Fraction):
                    left = GCPoly.const(ctx, left)
                return left / right
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, Fraction) or right.denominator != 1:
                    raise ValueError("exponents must be integers")
                return left ** int(right)
        raise ValueError(f"unsupported syntax in {text!r}")

    val = ev(tree)
    if isinstance(val, Fraction):
        val = GCPoly.const(ctx, val)
    return val
