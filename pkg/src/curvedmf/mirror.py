"""Ring presentations: Grassmannian quantum cohomology and mirror rings of divisor complements.

Gromov-Witten numbers are input data here; the builder only evaluates the
multiplication rule

    a_I * a_J = sum_m a_{I+J,m} + sum_{K,B} GW_K(I, J, B) * a_K

for pairs with I, J disjoint or D_I, D_J disjoint, where the sum runs over
classes B supported on D_K with (B.D_i) + v_K = v_I + v_J.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .algebra import AlgebraCtx, GCPoly, VariableSpec, parse, substitute
from .groebner import (RATIONAL, RATIONAL_FUNCTION, Ideal, buchberger, format_vec,
                       quotient_dimension)

DATA_DIR = Path(__file__).parent / "data"


class MissingGWInput(ValueError):
    pass


class UndeclaredInverse(ValueError):
    pass


@dataclass
class RingPresentation:
    generators: Tuple[str, ...]
    relations: List[GCPoly]
    inverted: Tuple[str, ...] = ()
    ctx: AlgebraCtx = field(default=None, repr=False)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.inverted = tuple(self.inverted)
        bad = [g for g in self.inverted if g not in self.generators]
        if bad:
            raise ValueError(f"inverted generators {bad} are not generators")
        if self.ctx is None:
            self.ctx = ring_ctx(self.generators, self.inverted)
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                r = parse(self.ctx, r)
            elif r.ctx != self.ctx:
                r = _rebase(r, self.ctx)
            rels.append(r)
        self.relations = rels

    def element(self, text: str) -> GCPoly:
        return parse(self.ctx, text)

    def ideal(self, t_mode=RATIONAL) -> Ideal:
        gens = list(self.relations)
        for g in self.inverted:
            gens.append(GCPoly.var(self.ctx, g) * GCPoly.var(self.ctx, inverse_name(g)) - 1)
        return Ideal(self.ctx.with_t(t_mode="polynomial"), gens, t_mode)

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "inverted": list(self.inverted),
                "relations": sorted(str(r) for r in self.relations)}


def inverse_name(g: str) -> str:
    return g + "_inv"


def ring_ctx(generators: Sequence[str], inverted: Sequence[str] = ()) -> AlgebraCtx:
    names = list(generators) + [inverse_name(g) for g in inverted]
    return AlgebraCtx(tuple(VariableSpec(n, 0) for n in names), t_mode="laurent")


def _rebase(p: GCPoly, ctx: AlgebraCtx) -> GCPoly:
    used = p.variables_used()
    missing = used - set(ctx.names)
    if missing:
        raise UndeclaredInverse(f"element uses {sorted(missing)} which the target does not provide")
    out = {}
    for (e, te), c in p.terms.items():
        new = [0] * ctx.nvars
        for n, k in zip(p.ctx.names, e):
            if k:
                new[ctx.index(n)] = k
        out[(tuple(new), te)] = c
    return GCPoly(ctx, out)


# ---------------------------------------------------------------------------
# Grassmannians Gr(2, 2n+2)

@dataclass
class GrassmannianQH:
    n: int
    y: List[GCPoly]
    full: RingPresentation
    zero_eigenspace: RingPresentation
    dimension: object
    relation: GCPoly
    classical_dimension: object


def chern_recursion(ctx: AlgebraCtx, top: int) -> List[GCPoly]:
    """y_0..y_top with y_0 = 1 and x_0 y_j + x_1 y_{j-1} + x_2 y_{j-2} = 0."""
    x1, x2 = GCPoly.var(ctx, "x1"), GCPoly.var(ctx, "x2")
    y = [GCPoly.const(ctx, 1)]
    for j in range(1, top + 1):
        prev2 = y[j - 2] if j >= 2 else GCPoly.zero(ctx)
        y.append(-(x1 * y[j - 1]) - x2 * prev2)
    return y


def grassmannian_qh(n: int) -> GrassmannianQH:
    if n < 1:
        raise ValueError("n must be at least 1")
    ctx = AlgebraCtx((VariableSpec("x1", 0), VariableSpec("x2", 0)), t_mode="laurent")
    top = 2 * n + 2
    y = chern_recursion(ctx, top)
    t = GCPoly.t(ctx)
    full = RingPresentation(("x1", "x2"), [y[top - 1], y[top] - t], ctx=ctx)
    zctx = AlgebraCtx((VariableSpec("x2", 0),), t_mode="laurent")
    zero = GCPoly.zero(zctx)
    rels = []
    for r in full.relations:
        img = substitute(r, {"x1": zero, "x2": GCPoly.var(zctx, "x2")}, zctx)
        if img:
            rels.append(img)
    zrp = RingPresentation(("x2",), rels, ctx=zctx)
    G = buchberger(Ideal(zctx.with_t(t_mode="polynomial"), rels, RATIONAL_FUNCTION))
    dim = quotient_dimension(G)
    classical = quotient_dimension(buchberger(Ideal(ctx.with_t(t_mode="polynomial"), [y[top - 1], y[top]])))
    return GrassmannianQH(n, y, full, zrp, dim, rels[0] if len(rels) == 1 else None, classical)


# ---------------------------------------------------------------------------
# divisor configurations

Subset = Tuple[int, ...]
Gen = Tuple[Subset, int]       # (subset, component)


@dataclass
class CurveClass:
    name: str
    support: Subset
    intersections: Tuple[int, ...]


@dataclass
class DivisorConfig:
    """Divisors 1..j, their nonempty intersections and GW inputs.

    ``components`` maps each subset I with D_I nonempty to its number of
    connected components.  ``containment`` records, for a multi-component
    stratum, which component of each smaller stratum contains it; missing
    entries default to component 0.
    """

    j: int
    components: Dict[Subset, int]
    classes: Dict[str, CurveClass] = field(default_factory=dict)
    gw: Dict[Tuple[Gen, Gen, Gen, str], Fraction] = field(default_factory=dict)
    containment: Dict[Tuple[Gen, Subset], int] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.components = {tuple(sorted(k)): v for k, v in self.components.items() if v > 0}
        for I in self.components:
            for r in range(1, len(I)):
                for sub in combinations(I, r):
                    if sub not in self.components:
                        raise ValueError(f"intersection table not downward closed: D_{I} nonempty but D_{sub} empty")

    def generators(self) -> List[Gen]:
        out = []
        for I in sorted(self.components, key=lambda s: (len(s), s)):
            for m in range(self.components[I]):
                out.append((I, m))
        return out

    def label(self, g: Gen) -> str:
        I, m = g
        sep = "" if self.j < 10 else "_"
        base = "a" + sep.join(str(i) for i in I)
        return base + (f"_{m}" if self.components[I] > 1 else "")

    def contained_in(self, big: Gen, small: Subset) -> int:
        if self.components[small] == 1:
            return 0
        if big[0] == small:
            return big[1]
        return self.containment.get((big, small), 0)

    def meets(self, a: Gen, b: Gen) -> List[Gen]:
        """Components of D_{I u J} lying in both D_{I,m} and D_{J,m'}."""
        U = tuple(sorted(set(a[0]) | set(b[0])))
        if U not in self.components:
            return []
        out = []
        for m in range(self.components[U]):
            g = (U, m)
            if self.contained_in(g, a[0]) == a[1] and self.contained_in(g, b[0]) == b[1]:
                out.append(g)
        return out

    def vector(self, I: Subset) -> Tuple[int, ...]:
        return tuple(1 if i + 1 in I else 0 for i in range(self.j))

    def to_json(self) -> dict:
        def gen_json(g):
            return {"set": list(g[0]), "component": g[1]}
        return {
            "name": self.name,
            "j": self.j,
            "components": [{"set": list(I), "count": c} for I, c in sorted(self.components.items())],
            "classes": [{"name": c.name, "support": list(c.support), "intersections": list(c.intersections)}
                        for c in sorted(self.classes.values(), key=lambda c: c.name)],
            "gw": [{"K": gen_json(K), "I": gen_json(I), "J": gen_json(J), "B": B, "value": str(v)}
                   for (K, I, J, B), v in sorted(self.gw.items())],
            "containment": [{"stratum": gen_json(g), "in": list(s), "component": m}
                            for (g, s), m in sorted(self.containment.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DivisorConfig":
        def gen(d):
            if isinstance(d, list):
                return (tuple(sorted(d)), 0)
            return (tuple(sorted(d["set"])), int(d.get("component", 0)))
        comps = {tuple(sorted(c["set"])): int(c["count"]) for c in data["components"]}
        classes = {c["name"]: CurveClass(c["name"], tuple(sorted(c.get("support", []))), tuple(c["intersections"]))
                   for c in data.get("classes", [])}
        gw = {}
        for e in data.get("gw", []):
            I, J = sorted([gen(e["I"]), gen(e["J"])])
            gw[(gen(e["K"]), I, J, e["B"])] = Fraction(e["value"])
        cont = {(gen(e["stratum"]), tuple(sorted(e["in"]))): int(e["component"]) for e in data.get("containment", [])}
        return cls(int(data["j"]), comps, classes, gw, cont, data.get("name", ""))


EMPTY: Gen = ((), 0)


@dataclass
class MirrorRing:
    presentation: RingPresentation
    products: Dict[Tuple[str, str], GCPoly]
    undefined: List[Tuple[str, str]]
    plain: FrozenSet[Tuple[str, str]] = frozenset()

    def nontrivial(self) -> List[GCPoly]:
        """Relations other than a_I a_J = a_{I+J} with a single component and no GW term."""
        ctx = self.presentation.ctx
        out = []
        for (a, b), rhs in sorted(self.products.items()):
            if (a, b) in self.plain:
                continue
            out.append(GCPoly.var(ctx, a) * GCPoly.var(ctx, b) - rhs)
        return out


def admissible(cfg: DivisorConfig, I: Gen, J: Gen) -> List[Tuple[Gen, str]]:
    """(K, B) pairs with B supported on D_K and (B.D) + v_K = v_I + v_J."""
    target = tuple(a + b for a, b in zip(cfg.vector(I[0]), cfg.vector(J[0])))
    out = []
    for K in [EMPTY] + cfg.generators():
        if K != EMPTY and cfg.components[K[0]] > 1:
            continue
        vk = cfg.vector(K[0])
        for B in sorted(cfg.classes):
            cl = cfg.classes[B]
            if cl.support != K[0]:
                continue
            if tuple(a + b for a, b in zip(cl.intersections, vk)) == target:
                out.append((K, B))
    return out


def mirror_ring(cfg: DivisorConfig) -> MirrorRing:
    gens = cfg.generators()
    labels = [cfg.label(g) for g in gens]
    ctx = ring_ctx(labels)
    var = {g: GCPoly.var(ctx, cfg.label(g)) for g in gens}
    products: Dict[Tuple[str, str], GCPoly] = {}
    undefined = []
    plain = set()
    for a_idx in range(len(gens)):
        for b_idx in range(a_idx, len(gens)):
            a, b = gens[a_idx], gens[b_idx]
            disjoint = not (set(a[0]) & set(b[0]))
            meet = cfg.meets(a, b)
            if not disjoint and meet:
                undefined.append((cfg.label(a), cfg.label(b)))
                continue
            rhs = GCPoly.zero(ctx)
            if disjoint:
                for g in meet:
                    rhs = rhs + var[g]
            gw_terms = admissible(cfg, a, b)
            if len(meet) == 1 and disjoint and not gw_terms:
                plain.add((cfg.label(a), cfg.label(b)))
            for K, B in gw_terms:
                lo, hi = sorted([a, b])
                key = (K, lo, hi, B)
                if key not in cfg.gw:
                    raise MissingGWInput(f"no GW input for K={K}, I={a}, J={b}, B={B}")
                val = cfg.gw[key]
                term = GCPoly.const(ctx, val) if K == EMPTY else var[K].scale(val)
                rhs = rhs + term
            products[(cfg.label(a), cfg.label(b))] = rhs
    rels = [GCPoly.var(ctx, x) * GCPoly.var(ctx, y) - rhs for (x, y), rhs in sorted(products.items())]
    return MirrorRing(RingPresentation(tuple(labels), rels, ctx=ctx), products, undefined, frozenset(plain))


# ---------------------------------------------------------------------------
# isomorphism certificates

@dataclass
class IsoCertificate:
    ok: bool
    forward_residues: Dict[str, str]
    backward_residues: Dict[str, str] = field(default_factory=dict)
    round_trip: Dict[str, str] = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _images(A: RingPresentation, B: RingPresentation, mapping: Mapping[str, object]) -> Dict[str, GCPoly]:
    out = {}
    for g in A.generators:
        if g not in mapping:
            raise ValueError(f"map does not assign an image to {g}")
        img = mapping[g]
        if isinstance(img, str):
            try:
                img = parse(B.ctx, img)
            except KeyError as exc:
                raise UndeclaredInverse(f"image of {g} uses an undeclared symbol {exc}") from None
        else:
            img = _rebase(img, B.ctx)
        out[g] = img
    for g in A.inverted:
        img = mapping.get(inverse_name(g))
        if isinstance(img, str):
            img = parse(B.ctx, img)
        elif img is not None:
            img = _rebase(img, B.ctx)
        out[inverse_name(g)] = img
    return out


def _apply(p: GCPoly, images: Dict[str, GCPoly], A: RingPresentation, B: RingPresentation,
           GB) -> GCPoly:
    mapping = {}
    for g, img in images.items():
        if img is not None:
            mapping[g] = img
    for g in A.inverted:
        if images[inverse_name(g)] is not None:
            continue
        inv = _invert(images[g], B, GB)
        if inv is None:
            raise UndeclaredInverse(f"image of {g} is not invertible in the target")
        mapping[inverse_name(g)] = inv
    return substitute(p, mapping, B.ctx)


def _invert(x: GCPoly, B: RingPresentation, GB) -> Optional[GCPoly]:
    """Find an inverse among the monomials in declared inverses (a unit of the form c*prod g_inv^k * prod g^l)."""
    if len(x.terms) != 1:
        return None
    (exps, te), c = next(iter(x.terms.items()))
    inv = GCPoly.const(B.ctx, 1 / c)
    for n, k in zip(B.ctx.names, exps):
        if not k:
            continue
        if n in B.inverted:
            inv = inv * GCPoly.var(B.ctx, inverse_name(n)) ** k
        elif n.endswith("_inv") and n[:-4] in B.inverted:
            inv = inv * GCPoly.var(B.ctx, n[:-4]) ** k
        else:
            return None
    return inv


def verify_iso(A: RingPresentation, B: RingPresentation, mapping: Mapping[str, object],
               inverse: Optional[Mapping[str, object]] = None) -> IsoCertificate:
    """Check that ``mapping`` A -> B is well defined and, with ``inverse``, an isomorphism."""
    GA = buchberger(A.ideal())
    GB = buchberger(B.ideal())
    fwd = _images(A, B, mapping)
    residues = {}
    ok = True
    for r in A.relations:
        img = _apply(r, fwd, A, B, GB)
        nf = GB.normal_form(img)
        residues[str(r)] = format_vec(nf, GB.names)
        ok = ok and not nf
    cert = IsoCertificate(ok, residues)
    if inverse is None or not ok:
        return cert
    bwd = _images(B, A, inverse)
    for r in B.relations:
        img = _apply(r, bwd, B, A, GA)
        nf = GA.normal_form(img)
        cert.backward_residues[str(r)] = format_vec(nf, GA.names)
        cert.ok = cert.ok and not nf
    for g in A.generators:
        there = _apply(GCPoly.var(A.ctx, g), fwd, A, B, GB)
        back = _apply(there, bwd, B, A, GA)
        nf = GA.normal_form(back - GCPoly.var(A.ctx, g))
        cert.round_trip[g] = format_vec(nf, GA.names)
        cert.ok = cert.ok and not nf
    for g in B.generators:
        there = _apply(GCPoly.var(B.ctx, g), bwd, B, A, GA)
        back = _apply(there, fwd, A, B, GB)
        nf = GB.normal_form(back - GCPoly.var(B.ctx, g))
        cert.round_trip[g] = format_vec(nf, GB.names)
        cert.ok = cert.ok and not nf
    return cert


# ---------------------------------------------------------------------------
# presets

def _all_subsets(j: int, max_size: Optional[int] = None):
    top = j if max_size is None else max_size
    for r in range(1, top + 1):
        for I in combinations(range(1, j + 1), r):
            yield I


def _splits(full: Subset):
    """Unordered pairs {I, J} of nonempty disjoint sets with union ``full``."""
    items = list(full)
    out = []
    for r in range(1, len(items)):
        for I in combinations(items, r):
            J = tuple(x for x in items if x not in I)
            if I < J:
                out.append((I, J))
    return out


def cpn_toric(n: int) -> DivisorConfig:
    """CP^n with its n+1 toric divisors.

    Each stratum D_K of positive dimension carries its line class, which meets
    every divisor once; the only admissible contributions are K = I n J with
    I u J everything, each with GW number 1.
    """
    j = n + 1
    comps = {I: 1 for I in _all_subsets(j, n)}
    classes = {"line": CurveClass("line", (), (1,) * j)}
    for K in _all_subsets(j, n - 1):
        name = "line_" + "".join(str(k) for k in K)
        classes[name] = CurveClass(name, K, (1,) * j)
    gw = {}
    full = set(range(1, j + 1))
    gens = sorted(comps)
    for I in gens:
        for J in gens:
            if I > J or set(I) | set(J) != full:
                continue
            K = tuple(sorted(set(I) & set(J)))
            name = "line_" + "".join(str(k) for k in K) if K else "line"
            gw[((K, 0), (I, 0), (J, 0), name)] = Fraction(1)
    return DivisorConfig(j, comps, classes, gw, name=f"cpn_toric_{n}")


def pants(n: int) -> DivisorConfig:
    """CP^n with n+2 generic hyperplanes."""
    j = n + 2
    comps = {I: 1 for I in _all_subsets(j, n)}
    classes = {"line": CurveClass("line", (), (1,) * j)}
    gw = {}
    for I, J in _splits(tuple(range(1, j + 1))):
        a, b = sorted([(I, 0), (J, 0)])
        gw[(EMPTY, a, b, "line")] = Fraction(0)
    return DivisorConfig(j, comps, classes, gw, name=f"pants_{n}")


def quadric(n: int) -> DivisorConfig:
    """Quadric Q^n with n generic hyperplane sections; D_[1..n] is two points."""
    full = tuple(range(1, n + 1))
    comps = {I: 1 for I in _all_subsets(n)}
    comps[full] = 2
    classes = {"line": CurveClass("line", (), (1,) * n), "conic": CurveClass("conic", (), (2,) * n)}
    gw = {}
    for I, J in _splits(full):
        a, b = sorted([(I, 0), (J, 0)])
        gw[(EMPTY, a, b, "line")] = Fraction(2)
    gw[(EMPTY, (full, 0), (full, 1), "conic")] = Fraction(1)
    return DivisorConfig(n, comps, classes, gw, name=f"quadric_{n}")


def conic_lines(n: int) -> DivisorConfig:
    """CP^n with a conic D_1 and lines D_2..D_n; D_[1..n] is two points."""
    full = tuple(range(1, n + 1))
    K = tuple(range(2, n + 1))
    comps = {I: 1 for I in _all_subsets(n)}
    comps[full] = 2
    classes = {"line_in_DK": CurveClass("line_in_DK", K, (2,) + (1,) * (n - 1))}
    gw = {(((K, 0)), (full, 0), (full, 1), "line_in_DK"): Fraction(1)}
    return DivisorConfig(n, comps, classes, gw, name=f"conic_lines_{n}")


PRESETS = {"cpn_toric": cpn_toric, "pants": pants, "quadric_n": quadric, "conic_lines": conic_lines}
PRESET_SIZES = {"cpn_toric": 2, "pants": 2, "quadric_n": 3, "conic_lines": 3}


def preset_json(name: str, n: Optional[int] = None) -> dict:
    return PRESETS[name](PRESET_SIZES[name] if n is None else n).to_json()


def load_preset(name: str, n: Optional[int] = None) -> DivisorConfig:
    """Shipped data files hold the default size; other sizes are generated."""
    if n is None or n == PRESET_SIZES[name]:
        path = DATA_DIR / f"{name}.json"
        if path.exists():
            return DivisorConfig.from_json(json.loads(path.read_text()))
    return PRESETS[name](PRESET_SIZES[name] if n is None else n)


def quadric_target(n: int) -> RingPresentation:
    """Q[u_1..u_n, w, w^-1] / (prod u_i - (1+w)^2)."""
    gens = tuple(f"u{i}" for i in range(1, n + 1)) + ("w",)
    ctx = ring_ctx(gens, ("w",))
    prod = GCPoly.const(ctx, 1)
    for i in range(1, n + 1):
        prod = prod * GCPoly.var(ctx, f"u{i}")
    w = GCPoly.var(ctx, "w")
    return RingPresentation(gens, [prod - (w + 1) ** 2], ("w",), ctx)


def quadric_maps(cfg: DivisorConfig) -> Tuple[Dict[str, str], Dict[str, str]]:
    """a_[1..n],0 -> w, a_1 -> u_1/w, a_i -> u_i, and the inverse."""
    n = cfg.j
    full = tuple(range(1, n + 1))
    fwd = {}
    for g in cfg.generators():
        I, m = g
        if I == full:
            fwd[cfg.label(g)] = "w" if m == 0 else "w_inv"
        else:
            fwd[cfg.label(g)] = "*".join(("u1*w_inv" if i == 1 else f"u{i}") for i in I)
    a0 = cfg.label((full, 0))
    a1 = cfg.label((full, 1))
    bwd = {"u1": f"{cfg.label(((1,), 0))}*{a0}", "w": a0, "w_inv": a1}
    for i in range(2, n + 1):
        bwd[f"u{i}"] = cfg.label(((i,), 0))
    return fwd, bwd


def product_maps(cfg: DivisorConfig, names: Sequence[str]) -> Tuple[Dict[str, str], Dict[str, str]]:
    """a_I -> prod_{i in I} x_i and x_i -> a_i for single-component configs."""
    fwd = {cfg.label(g): "*".join(names[i - 1] for i in g[0]) for g in cfg.generators()}
    bwd = {names[i - 1]: cfg.label(((i,), 0)) for i in range(1, cfg.j + 1)}
    return fwd, bwd


def toric_target(n: int) -> RingPresentation:
    gens = tuple(f"z{i}" for i in range(1, n + 2))
    ctx = ring_ctx(gens)
    prod = GCPoly.const(ctx, 1)
    for g in gens:
        prod = prod * GCPoly.var(ctx, g)
    return RingPresentation(gens, [prod - 1], (), ctx)


def jacobian_target(n: int) -> RingPresentation:
    """Jac(Q[z_1..z_{n+2}], prod z_i)."""
    gens = tuple(f"z{i}" for i in range(1, n + 3))
    ctx = ring_ctx(gens)
    prod = GCPoly.const(ctx, 1)
    for g in gens:
        prod = prod * GCPoly.var(ctx, g)
    return RingPresentation(gens, [prod.derive(g) for g in gens], (), ctx)
