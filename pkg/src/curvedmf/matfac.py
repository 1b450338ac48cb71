"""Matrix factorizations of a potential over a polynomial ring.

An MF is a pair d0: R^r -> R^s, d1: R^s -> R^r with d1 d0 = w and d0 d1 = w.
Matrices are lists of rows of GCPoly; d0 therefore has s rows and r columns.

Morphisms f in Hom(M, N) are pairs of blocks.  Even morphisms map M0 -> N0
and M1 -> N1, odd ones M0 -> N1 and M1 -> N0.  The differential is

    D(f) = d_N f - (-1)^|f| f d_M

and the product on cohomology is a.b = (-1)^(|a||b|) a o b, which makes the
generator of Hom(P, P) for P = (q, uq) square to u.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraCtx, GCPoly, parse
from .groebner import (INFINITE, ModuleLifter, MonomialOrder, OddVariableError, Vec,
                       buchberger_vecs, format_vec, module_quotient_dimension,
                       syzygies)

Matrix = List[List[GCPoly]]


class FactorizationError(ValueError):
    pass


class PotentialMismatch(ValueError):
    pass


def _poly(ring: AlgebraCtx, v: Vec) -> GCPoly:
    return GCPoly(ring, {(e, 0): x for (_, e), x in v.items()})


def _zero_matrix(ring: AlgebraCtx, rows: int, cols: int) -> Matrix:
    return [[GCPoly.zero(ring) for _ in range(cols)] for _ in range(rows)]


def matmul(a: Matrix, b: Matrix, ring: AlgebraCtx, inner: Optional[int] = None) -> Matrix:
    rows = len(a)
    cols = len(b[0]) if b else 0
    inner = len(b) if inner is None else inner
    out = _zero_matrix(ring, rows, cols)
    for i in range(rows):
        for j in range(cols):
            acc = GCPoly.zero(ring)
            for k in range(inner):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def _matsub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _matscale(a: Matrix, c) -> Matrix:
    return [[x.scale(c) for x in row] for row in a]


@dataclass
class MatrixFactorization:
    ring: AlgebraCtx
    w: GCPoly
    d0: Matrix
    d1: Matrix
    weights: Optional[Dict[str, List[int]]] = None

    @property
    def r(self) -> int:
        return len(self.d1)

    @property
    def s(self) -> int:
        return len(self.d0)

    def to_json(self) -> dict:
        data = {
            "ring": [{"name": v.name, "degree": v.degree} for v in self.ring.variables],
            "w": str(self.w),
            "d0": [[str(x) for x in row] for row in self.d0],
            "d1": [[str(x) for x in row] for row in self.d1],
        }
        if self.weights is not None:
            data["weights"] = self.weights
        return data

    @classmethod
    def from_json(cls, data: dict) -> "MatrixFactorization":
        ring = AlgebraCtx.build((v["name"], int(v.get("degree", 0))) for v in data["ring"])
        w = parse(ring, data["w"])
        d0 = [[parse(ring, x) for x in row] for row in data["d0"]]
        d1 = [[parse(ring, x) for x in row] for row in data["d1"]]
        return make_mf(ring, w, d0, d1)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _as_matrix(ring: AlgebraCtx, m, rows_hint: Optional[int] = None) -> Matrix:
    if isinstance(m, GCPoly) or isinstance(m, (int, Fraction, str)):
        m = [[m]]
    out = []
    for row in m:
        conv = []
        for x in row:
            if isinstance(x, str):
                x = parse(ring, x)
            elif not isinstance(x, GCPoly):
                x = GCPoly.const(ring, x)
            conv.append(x)
        out.append(conv)
    return out


def identity_check(ring: AlgebraCtx, w: GCPoly, d0: Matrix, d1: Matrix) -> Optional[Tuple[str, int, int, GCPoly]]:
    """First offending entry of d1 d0 - w or d0 d1 - w, or None."""
    r, s = len(d1), len(d0)
    for name, prod, n in (("d1*d0", matmul(d1, d0, ring, s), r), ("d0*d1", matmul(d0, d1, ring, r), s)):
        for i in range(n):
            for j in range(n):
                diff = prod[i][j] - (w if i == j else GCPoly.zero(ring))
                if diff:
                    return name, i, j, diff
    return None


def make_mf(ring: AlgebraCtx, w, d0, d1) -> MatrixFactorization:
    if any(v.parity for v in ring.variables):
        raise OddVariableError("matrix factorizations need an even polynomial ring")
    if isinstance(w, str):
        w = parse(ring, w)
    elif not isinstance(w, GCPoly):
        w = GCPoly.const(ring, w)
    d0 = _as_matrix(ring, d0)
    d1 = _as_matrix(ring, d1)
    s, r = len(d0), len(d1)
    if any(len(row) != r for row in d0) or any(len(row) != s for row in d1):
        raise FactorizationError(f"shapes incompatible: d0 is {s}x?, d1 is {r}x?")
    bad = identity_check(ring, w, d0, d1)
    if bad:
        name, i, j, diff = bad
        raise FactorizationError(f"({name} - w*I)[{i}][{j}] = {diff}")
    return MatrixFactorization(ring, w, d0, d1)


def _subsets_by_parity(k: int):
    from itertools import combinations
    even, odd = [], []
    for size in range(k + 1):
        for c in combinations(range(k), size):
            (even if size % 2 == 0 else odd).append(c)
    return even, odd


def koszul_mf(ring: AlgebraCtx, h: Sequence, w_parts: Sequence, w=None) -> MatrixFactorization:
    """Exterior-algebra MF: contraction by (h_i) plus wedge with sum w_i eps_i."""
    h = [parse(ring, x) if isinstance(x, str) else x for x in h]
    w_parts = [parse(ring, x) if isinstance(x, str) else x for x in w_parts]
    if len(h) != len(w_parts):
        raise FactorizationError("h and w_parts must have equal length")
    total = GCPoly.zero(ring)
    for a, b in zip(h, w_parts):
        total = total + a * b
    if w is not None:
        w = parse(ring, w) if isinstance(w, str) else w
        if w != total:
            raise FactorizationError(f"sum h_i w_i = {total} differs from w = {w}")
    even, odd = _subsets_by_parity(len(h))
    idx_even = {S: i for i, S in enumerate(even)}
    idx_odd = {S: i for i, S in enumerate(odd)}

    def apply(S):
        """d(eps_S) as {subset: coefficient}."""
        out = {}
        for i in range(len(h)):
            before = sum(1 for j in S if j < i)
            sign = -1 if before % 2 else 1
            if i in S:
                T = tuple(j for j in S if j != i)
                out[T] = out.get(T, GCPoly.zero(ring)) + h[i].scale(sign)
            else:
                T = tuple(sorted(S + (i,)))
                out[T] = out.get(T, GCPoly.zero(ring)) + w_parts[i].scale(sign)
        return out

    d0 = _zero_matrix(ring, len(odd), len(even))
    for S, col in idx_even.items():
        for T, c in apply(S).items():
            d0[idx_odd[T]][col] = d0[idx_odd[T]][col] + c
    d1 = _zero_matrix(ring, len(even), len(odd))
    for S, col in idx_odd.items():
        for T, c in apply(S).items():
            d1[idx_even[T]][col] = d1[idx_even[T]][col] + c
    return make_mf(ring, total, d0, d1)


def rank1_mf(ring: AlgebraCtx, a, b) -> MatrixFactorization:
    a = parse(ring, a) if isinstance(a, str) else a
    b = parse(ring, b) if isinstance(b, str) else b
    return make_mf(ring, a * b, [[a]], [[b]])


# ---------------------------------------------------------------------------
# Hom complexes

@dataclass
class HomComplex:
    source: MatrixFactorization
    target: MatrixFactorization
    even_slots: List[Tuple[int, int, int]]   # (block, row, col): block 0 = M0->N0, 1 = M1->N1
    odd_slots: List[Tuple[int, int, int]]    # block 0 = M0->N1, 1 = M1->N0

    @property
    def ring(self) -> AlgebraCtx:
        return self.source.ring

    def slots(self, parity: int):
        return self.odd_slots if parity else self.even_slots

    def to_blocks(self, parity: int, vec: Vec) -> Tuple[Matrix, Matrix]:
        M, N = self.source, self.target
        R = self.ring
        if parity == 0:
            b0, b1 = _zero_matrix(R, N.r, M.r), _zero_matrix(R, N.s, M.s)
        else:
            b0, b1 = _zero_matrix(R, N.s, M.r), _zero_matrix(R, N.r, M.s)
        comps: Dict[int, Vec] = {}
        for (c, e), x in vec.items():
            comps.setdefault(c, {})[(0, e)] = x
        for c, v in comps.items():
            blk, i, j = self.slots(parity)[c]
            target = b0 if blk == 0 else b1
            target[i][j] = _poly(R, v)
        return b0, b1

    def to_vec(self, parity: int, blocks: Tuple[Matrix, Matrix]) -> Vec:
        out: Vec = {}
        for c, (blk, i, j) in enumerate(self.slots(parity)):
            p = blocks[blk][i][j]
            for (e, te), x in p.terms.items():
                if te:
                    raise ValueError("t is not allowed in matrix factorization entries")
                out[(c, e)] = x
        return out

    def differential_blocks(self, parity: int, f: Tuple[Matrix, Matrix]) -> Tuple[Matrix, Matrix]:
        M, N = self.source, self.target
        R = self.ring
        sign = -1 if parity else 1
        f0, f1 = f
        if parity == 0:
            # f0: M0->N0, f1: M1->N1; D f lands in odd blocks (M0->N1, M1->N0)
            g0 = _matsub(matmul(N.d0, f0, R), _matscale(matmul(f1, M.d0, R), sign))
            g1 = _matsub(matmul(N.d1, f1, R), _matscale(matmul(f0, M.d1, R), sign))
        else:
            # f0: M0->N1, f1: M1->N0; D f lands in even blocks
            g0 = _matsub(matmul(N.d1, f0, R), _matscale(matmul(f1, M.d0, R), sign))
            g1 = _matsub(matmul(N.d0, f1, R), _matscale(matmul(f0, M.d1, R), sign))
        return g0, g1

    def differential_columns(self, parity: int) -> List[Vec]:
        """Images of the basis vectors of the given parity (as vectors of the other parity)."""
        cols = []
        n = self.ring.nvars
        for c in range(len(self.slots(parity))):
            unit = {(c, (0,) * n): Fraction(1)}
            img = self.differential_blocks(parity, self.to_blocks(parity, unit))
            cols.append(self.to_vec(1 - parity, img))
        return cols


def hom_complex(M: MatrixFactorization, N: MatrixFactorization) -> HomComplex:
    if M.ring.names != N.ring.names:
        raise ValueError("factorizations live over different rings")
    if M.w != N.w:
        raise PotentialMismatch(f"potentials differ: {M.w} vs {N.w}")
    even = [(0, i, j) for i in range(N.r) for j in range(M.r)] + [(1, i, j) for i in range(N.s) for j in range(M.s)]
    odd = [(0, i, j) for i in range(N.s) for j in range(M.r)] + [(1, i, j) for i in range(N.r) for j in range(M.s)]
    return HomComplex(M, N, even, odd)


@dataclass
class CohomologyPart:
    parity: int
    generators: List[Vec]                 # cocycle representatives in the Hom module
    relations: List[Vec]                  # relation module in R^k (k = len(generators))
    dimension: object                     # int or INFINITE
    annihilators: List[List[Vec]] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.generators)


@dataclass
class HomCohomology:
    complex: HomComplex
    even: CohomologyPart
    odd: CohomologyPart

    def part(self, parity: int) -> CohomologyPart:
        return self.odd if parity else self.even

    @property
    def dimension(self):
        if INFINITE in (self.even.dimension, self.odd.dimension):
            return INFINITE
        return self.even.dimension + self.odd.dimension

    def generator_blocks(self, parity: int, k: int):
        return self.complex.to_blocks(parity, self.part(parity).generators[k])

    def summary(self) -> dict:
        names = self.complex.ring.names
        out = {}
        for label, part in (("even", self.even), ("odd", self.odd)):
            out[label] = {
                "rank": part.rank,
                "dimension": "infinite" if part.dimension == INFINITE else part.dimension,
                "generators": [format_vec(g, names, len(self.complex.slots(part.parity))) for g in part.generators],
                "relations": [format_vec(r, names, part.rank) for r in part.relations],
            }
        return out


def _present(hc: HomComplex, parity: int, order: str) -> CohomologyPart:
    R = hc.ring
    n = R.nvars
    dcols = hc.differential_columns(parity)
    ncod = len(hc.slots(1 - parity))
    nslots = len(hc.slots(parity))
    kernel = syzygies(dcols, ncod, n, order) if dcols else []
    # the kernel generators live in the Hom module of this parity
    gens = [g for g in kernel if g]
    image = [c for c in hc.differential_columns(1 - parity) if c]
    gens = _prune(gens, image, nslots, n, order)
    if image:
        lifter = ModuleLifter(image, nslots, n, order)
        gens = [lifter.normal_form(g) for g in gens]
    rels = _relations(gens, image, nslots, n, order)
    dim = module_quotient_dimension(rels, len(gens), n, order) if gens else 0
    mo = MonomialOrder(order, module="pot")
    anns = []
    for k in range(len(gens)):
        anns.append(_annihilator(gens[k], image, nslots, n, order))
    return CohomologyPart(parity, gens, buchberger_vecs(rels, mo, module=True) if rels else [], dim, anns)


def _relations(gens: List[Vec], image: List[Vec], nslots: int, n: int, order: str) -> List[Vec]:
    if not gens:
        return []
    syz = syzygies(gens + image, nslots, n, order)
    k = len(gens)
    rels = []
    for s in syz:
        r = {(c, e): x for (c, e), x in s.items() if c < k}
        if r:
            rels.append(r)
    return rels


def _annihilator(g: Vec, image: List[Vec], nslots: int, n: int, order: str) -> List[Vec]:
    rels = _relations([g], image, nslots, n, order)
    basis = buchberger_vecs(rels, MonomialOrder(order), module=False) if rels else []
    return basis


def _prune(gens: List[Vec], image: List[Vec], nslots: int, n: int, order: str) -> List[Vec]:
    """Drop generators that are redundant modulo the image and the others."""
    changed = True
    while changed and gens:
        changed = False
        for i in range(len(gens)):
            rest = gens[:i] + gens[i + 1:]
            span = rest + image
            if not span:
                continue
            lifter = ModuleLifter(span, nslots, n, order)
            if lifter.lift(gens[i]) is not None:
                gens = rest
                changed = True
                break
    return gens


def hom_cohomology(M: MatrixFactorization, N: MatrixFactorization, order: str = "grevlex") -> HomCohomology:
    """Cohomology of Hom(M, N) presented as modules over the ring."""
    hc = hom_complex(M, N)
    return HomCohomology(hc, _present(hc, 0, order), _present(hc, 1, order))


def hom_differential_squares_to_zero(M: MatrixFactorization, N: MatrixFactorization) -> bool:
    hc = hom_complex(M, N)
    for parity in (0, 1):
        for col in hc.differential_columns(parity):
            back = hc.differential_blocks(1 - parity, hc.to_blocks(1 - parity, col))
            if hc.to_vec(parity, back):
                return False
    return True


# ---------------------------------------------------------------------------
# products on End cohomology

def compose(hc: HomComplex, pa: int, a: Tuple[Matrix, Matrix], pb: int, b: Tuple[Matrix, Matrix]):
    """a o b for endomorphisms (source == target)."""
    R = hc.ring
    a0, a1 = a
    b0, b1 = b
    # block k of a morphism of parity p maps M_k -> M_{k+p}
    out = [None, None]
    for k in (0, 1):
        mid = (k + pb) % 2
        bk = b0 if k == 0 else b1
        am = a0 if mid == 0 else a1
        out[k] = matmul(am, bk, R)
    return (pa + pb) % 2, (out[0], out[1])


@dataclass
class ProductTable:
    entries: Dict[Tuple[Tuple[int, int], Tuple[int, int]], Tuple[int, List[GCPoly]]]

    def coefficients(self, a: Tuple[int, int], b: Tuple[int, int]) -> Tuple[int, List[GCPoly]]:
        return self.entries[(a, b)]


def express(H: HomCohomology, parity: int, vec: Vec, order: str = "grevlex") -> Optional[List[GCPoly]]:
    """Coefficients of a cocycle in the chosen generators, modulo coboundaries and relations."""
    hc = H.complex
    part = H.part(parity)
    R = hc.ring
    n = R.nvars
    nslots = len(hc.slots(parity))
    if not vec:
        return [GCPoly.zero(R) for _ in part.generators]
    image = [c for c in hc.differential_columns(1 - parity) if c]
    span = part.generators + image
    if not span:
        return None
    lifter = ModuleLifter(span, nslots, n, order)
    coeffs = lifter.lift(vec)
    if coeffs is None:
        return None
    k = len(part.generators)
    head = {(c, e): x for (c, e), x in coeffs.items() if c < k}
    if part.relations:
        mo = MonomialOrder(order, module="pot")
        from .groebner import _Elem, reduce_vec
        tkey = mo.term_key()
        head = reduce_vec(head, [_Elem(r, tkey) for r in part.relations], tkey)
    out = []
    for c in range(k):
        comp = {(0, e): x for (cc, e), x in head.items() if cc == c}
        out.append(_poly(R, comp))
    return out


def cohomology_product(M: MatrixFactorization, H: Optional[HomCohomology] = None,
                       order: str = "grevlex") -> ProductTable:
    """Multiplication table a.b = (-1)^(|a||b|) a o b on the cohomology generators of End(M)."""
    if H is None:
        H = hom_cohomology(M, M, order)
    hc = H.complex
    gens = [(p, k) for p in (0, 1) for k in range(H.part(p).rank)]
    entries = {}
    for pa, ka in gens:
        for pb, kb in gens:
            a = H.generator_blocks(pa, ka)
            b = H.generator_blocks(pb, kb)
            p, prod = compose(hc, pa, a, pb, b)
            if pa * pb % 2:
                prod = (_matscale(prod[0], -1), _matscale(prod[1], -1))
            vec = hc.to_vec(p, prod)
            coeffs = express(H, p, vec, order)
            if coeffs is None:
                raise ValueError(f"product of generators {(pa, ka)} and {(pb, kb)} is not a cocycle combination")
            entries[((pa, ka), (pb, kb))] = (p, coeffs)
    return ProductTable(entries)


def check_cocycle(H: HomCohomology, parity: int, rep: Tuple[Matrix, Matrix]) -> bool:
    hc = H.complex
    return not hc.to_vec(1 - parity, hc.differential_blocks(parity, rep))


def product_is_associative(H: HomCohomology, table: ProductTable) -> bool:
    R = H.complex.ring
    gens = [(p, k) for p in (0, 1) for k in range(H.part(p).rank)]

    def times(x_par, x_coeffs, g):
        """(sum_i x_i g_i) . g  as (parity, coeffs)."""
        out_par = (x_par + g[0]) % 2
        out = [GCPoly.zero(R) for _ in range(H.part(out_par).rank)]
        for i, c in enumerate(x_coeffs):
            if not c:
                continue
            p, coeffs = table.entries[((x_par, i), g)]
            for j, d in enumerate(coeffs):
                out[j] = out[j] + c * d
        return out_par, out

    def left(g, x_par, x_coeffs):
        out_par = (x_par + g[0]) % 2
        out = [GCPoly.zero(R) for _ in range(H.part(out_par).rank)]
        for i, c in enumerate(x_coeffs):
            if not c:
                continue
            p, coeffs = table.entries[(g, (x_par, i))]
            for j, d in enumerate(coeffs):
                out[j] = out[j] + c * d
        return out_par, out

    def reduce(par, coeffs):
        vec: Vec = {}
        for j, c in enumerate(coeffs):
            for (e, te), x in c.terms.items():
                vec[(j, e)] = x
        part = H.part(par)
        if part.relations and vec:
            from .groebner import _Elem, reduce_vec
            tkey = MonomialOrder(module="pot").term_key()
            vec = reduce_vec(vec, [_Elem(r, tkey) for r in part.relations], tkey)
        return vec

    for a in gens:
        for b in gens:
            for c in gens:
                pab, ab = table.entries[(a, b)]
                lhs = times(pab, ab, c)
                pbc, bc = table.entries[(b, c)]
                rhs = left(a, pbc, bc)
                if reduce(*lhs) != reduce(*rhs):
                    return False
    return True


# ---------------------------------------------------------------------------
# equivariant weights

@dataclass
class WeightResult:
    ok: bool
    row_weights: Optional[List[int]] = None     # weights of M0 basis
    col_weights: Optional[List[int]] = None     # weights of M1 basis
    certificate: Optional[str] = None


def _poly_weight(p: GCPoly, action: Dict[str, int]) -> Optional[int]:
    ws = set()
    for (exps, _), _c in p.terms.items():
        ws.add(sum(e * action.get(v.name, 0) for e, v in zip(exps, p.ctx.variables)))
    if len(ws) > 1:
        return None
    return ws.pop() if ws else 0


def equivariant_weights(M: MatrixFactorization, action: Dict[str, int]) -> WeightResult:
    """Weights a_i on M0 and b_j on M1 making d0 of weight 0 and d1 of weight wt(w)."""
    ww = _poly_weight(M.w, action)
    if ww is None:
        raise ValueError(f"potential {M.w} is not homogeneous for the action")
    nodes = [("a", i) for i in range(M.r)] + [("b", j) for j in range(M.s)]
    edges: Dict[Tuple, List[Tuple[Tuple, int, str]]] = {nd: [] for nd in nodes}
    for j in range(M.s):
        for i in range(M.r):
            p = M.d0[j][i]
            if p:
                wt = _poly_weight(p, action)
                if wt is None:
                    return WeightResult(False, certificate=f"d0[{j}][{i}] = {p} is not homogeneous")
                # b_j = a_i + wt
                edges[("a", i)].append((("b", j), wt, f"d0[{j}][{i}]"))
                edges[("b", j)].append((("a", i), -wt, f"d0[{j}][{i}]"))
    for i in range(M.r):
        for j in range(M.s):
            p = M.d1[i][j]
            if p:
                wt = _poly_weight(p, action)
                if wt is None:
                    return WeightResult(False, certificate=f"d1[{i}][{j}] = {p} is not homogeneous")
                # a_i + ww = b_j + wt
                edges[("b", j)].append((("a", i), wt - ww, f"d1[{i}][{j}]"))
                edges[("a", i)].append((("b", j), ww - wt, f"d1[{i}][{j}]"))
    value: Dict[Tuple, int] = {}
    for start in nodes:
        if start in value:
            continue
        value[start] = 0
        queue = deque([start])
        while queue:
            nd = queue.popleft()
            for nxt, delta, label in edges[nd]:
                want = value[nd] + delta
                if nxt not in value:
                    value[nxt] = want
                    queue.append(nxt)
                elif value[nxt] != want:
                    return WeightResult(False, certificate=(
                        f"{label} forces weight {want} on {nxt[0]}{nxt[1]} but it already has {value[nxt]}"))
    return WeightResult(True, [value[("a", i)] for i in range(M.r)], [value[("b", j)] for j in range(M.s)])
