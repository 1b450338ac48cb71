"""The chain quiver algebra on vertices 0..n and its graded Hochschild cohomology.

Arrows go both ways between neighbours.  Paths compose left to right:
(i|j) * (j|k) = (i|j|k).  Relations: every straight path (i-1|i|i+1) and
(i+1|i|i-1) vanishes, the two loops at an inner vertex agree, and with
``kill_first`` the loop (0|1|0) vanishes as well.  What survives is spanned by
the vertices, the arrows and one loop per vertex (none at 0 when killed).

Hochschild cochains are taken relative to the vertex idempotents, on the
reduced bar complex (the radical instead of the whole algebra).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import rank


@dataclass(frozen=True)
class Path:
    vertices: Tuple[int, ...]

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def __str__(self):
        return "(" + "|".join(str(v) for v in self.vertices) + ")"


@dataclass
class QuiverAlgebra:
    n: int
    basis: List[Path]
    degrees: List[int]
    table: Dict[Tuple[int, int], Dict[int, Fraction]]
    kill_first: bool = True
    arrow_degree: int = 1
    loop_degree: int = 2

    def __len__(self):
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def index(self, path) -> int:
        if not isinstance(path, Path):
            path = Path(tuple(path))
        return self.basis.index(path)

    def mul(self, a: int, b: int) -> Dict[int, Fraction]:
        return self.table.get((a, b), {})

    def idempotents(self) -> List[int]:
        return [i for i, p in enumerate(self.basis) if p.length == 0]

    def radical(self) -> List[int]:
        return [i for i, p in enumerate(self.basis) if p.length > 0]

    def is_associative(self) -> bool:
        m = range(len(self.basis))
        for a, b, c in iproduct(m, m, m):
            left: Dict[int, Fraction] = {}
            for x, cx in self.mul(a, b).items():
                for y, cy in self.mul(x, c).items():
                    left[y] = left.get(y, 0) + cx * cy
            right: Dict[int, Fraction] = {}
            for x, cx in self.mul(b, c).items():
                for y, cy in self.mul(a, x).items():
                    right[y] = right.get(y, 0) + cx * cy
            if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
                return False
        return True

    def to_json(self) -> dict:
        return {"n": self.n, "kill_first": self.kill_first,
                "basis": [{"path": list(p.vertices), "degree": d} for p, d in zip(self.basis, self.degrees)]}


def loop_at(n: int, i: int) -> Path:
    """Canonical loop at vertex i: (i|i-1|i) when i > 0, else (0|1|0)."""
    return Path((i, i - 1, i)) if i > 0 else Path((0, 1, 0))


def reduce_path(n: int, vertices: Sequence[int], kill_first: bool = True) -> Optional[Path]:
    """Normal form of a walk modulo the relations, or None when it vanishes."""
    v = tuple(vertices)
    if len(v) <= 2:
        return Path(v)
    if len(v) > 3:
        return None
    a, b, c = v
    if a != c:
        return None
    if a == 0:
        return None if kill_first else Path(v)
    return loop_at(n, a)


def make_quiver(n: int, kill_first: bool = True, arrow_degree: int = 1, loop_degree: int = 2) -> QuiverAlgebra:
    if n < 1:
        raise ValueError("n must be at least 1")
    basis: List[Path] = [Path((i,)) for i in range(n + 1)]
    for i in range(n):
        basis.append(Path((i, i + 1)))
        basis.append(Path((i + 1, i)))
    start = 0 if not kill_first else 1
    for i in range(start, n + 1):
        basis.append(loop_at(n, i))
    degrees = [p.length * arrow_degree if p.length < 2 else loop_degree for p in basis]
    pos = {p: k for k, p in enumerate(basis)}
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a, pa in enumerate(basis):
        for b, pb in enumerate(basis):
            if pa.target != pb.source:
                continue
            walk = pa.vertices + pb.vertices[1:]
            red = reduce_path(n, walk, kill_first)
            if red is not None:
                table[(a, b)] = {pos[red]: Fraction(1)}
    return QuiverAlgebra(n, basis, degrees, table, kill_first, arrow_degree, loop_degree)


def enumerate_paths(n: int, kill_first: bool = True) -> int:
    """Independent count: walks of length <= 2 up to the relations, by hand rules."""
    count = n + 1 + 2 * n          # vertices and arrows
    for i in range(n + 1):
        loops = []
        if i < n:
            loops.append((i, i + 1, i))
        if i > 0:
            loops.append((i, i - 1, i))
        if i == 0 and kill_first:
            loops = []
        count += 1 if loops else 0
    return count


# ---------------------------------------------------------------------------
# Hochschild cochains

def _chains(A: QuiverAlgebra, q: int, elems: Sequence[int]):
    """Composable q-tuples (target of each = source of the next), or vertices for q = 0."""
    if q == 0:
        return [("v", v) for v in range(A.n + 1)]
    by_source: Dict[int, List[int]] = {}
    for e in elems:
        by_source.setdefault(A.basis[e].source, []).append(e)
    out = []

    def rec(prefix):
        if len(prefix) == q:
            out.append(tuple(prefix))
            return
        nxt = by_source.get(A.basis[prefix[-1]].target, [])
        for e in nxt:
            rec(prefix + [e])

    for e in elems:
        rec([e])
    return out


def _ends(A: QuiverAlgebra, chain) -> Tuple[int, int]:
    if chain and chain[0] == "v":
        return chain[1], chain[1]
    return A.basis[chain[0]].source, A.basis[chain[-1]].target


def _chain_degree(A: QuiverAlgebra, chain) -> int:
    if chain and chain[0] == "v":
        return 0
    return sum(A.degrees[c] for c in chain)


def cochain_basis(A: QuiverAlgebra, q: int, shift: int, reduced: bool = True):
    """Pairs (chain, output) with matching endpoints and deg(output) = deg(chain) + shift."""
    elems = A.radical() if reduced else list(range(len(A.basis)))
    out = []
    for ch in _chains(A, q, elems):
        s, t = _ends(A, ch)
        d = _chain_degree(A, ch) + shift
        for b, pb in enumerate(A.basis):
            if pb.source == s and pb.target == t and A.degrees[b] == d:
                out.append((ch, b))
    return out


def hochschild_matrix(A: QuiverAlgebra, q: int, shift: int, reduced: bool = True):
    """Images of the C^q basis under the differential, as sparse vectors over C^{q+1} keys.

    (d phi)(a_1..a_{q+1}) = (-1)^{s |a_1|} a_1 phi(a_2..) + sum_i (-1)^i phi(.., a_i a_{i+1}, ..)
                            + (-1)^{q+1} phi(a_1..a_q) a_{q+1}
    with s the internal degree of phi.  In the reduced complex products that
    land on an idempotent are dropped (they cannot occur for a graded
    connected radical, but the check is kept for the unreduced route).
    """
    src = cochain_basis(A, q, shift, reduced)
    elems = A.radical() if reduced else list(range(len(A.basis)))
    elem_set = set(elems)
    targets = _chains(A, q + 1, elems)
    images: List[Dict] = [dict() for _ in src]

    # group source basis by chain for lookups
    by_chain: Dict[object, List[Tuple[int, int]]] = {}
    for k, (ch, b) in enumerate(src):
        by_chain.setdefault(ch, []).append((k, b))

    def add(k, key, coef):
        if not coef:
            return
        img = images[k]
        v = img.get(key, 0) + coef
        if v:
            img[key] = v
        else:
            img.pop(key)

    for ch in targets:
        a = list(ch)
        # a_1 * phi(a_2..)
        rest = tuple(a[1:]) if q > 0 else ("v", A.basis[a[0]].target)
        for k, b in by_chain.get(rest, []):
            sign = -1 if (shift * A.degrees[a[0]]) % 2 else 1
            for y, c in A.mul(a[0], b).items():
                add(k, (ch, y), sign * c)
        # inner products
        for i in range(q):
            for y, c in A.mul(a[i], a[i + 1]).items():
                if y not in elem_set:
                    continue
                merged = tuple(a[:i]) + (y,) + tuple(a[i + 2:])
                sign = -1 if (i + 1) % 2 else 1
                for k, b in by_chain.get(merged, []):
                    add(k, (ch, b), sign * c)
        # phi(a_1..a_q) * a_{q+1}
        head = tuple(a[:-1]) if q > 0 else ("v", A.basis[a[0]].source)
        for k, b in by_chain.get(head, []):
            sign = -1 if (q + 1) % 2 else 1
            for y, c in A.mul(b, a[-1]).items():
                add(k, (ch, y), sign * c)
    return src, images


@dataclass
class HHResult:
    q: int
    shift: int
    dimension: int
    cochains: int
    rank_in: int
    rank_out: int


def quiver_hh(A: QuiverAlgebra, q: int, shift: int, reduced: bool = True) -> HHResult:
    """dim HH^q(A, A[shift]) relative to the vertex idempotents."""
    if q < 0:
        raise ValueError("q must be non-negative")
    src, out_images = hochschild_matrix(A, q, shift, reduced)
    r_out = rank(out_images)
    if q == 0:
        r_in = 0
    else:
        _, in_images = hochschild_matrix(A, q - 1, shift, reduced)
        r_in = rank(in_images)
    return HHResult(q, shift, len(src) - r_out - r_in, len(src), r_in, r_out)


def differential_squares_to_zero(A: QuiverAlgebra, q: int, shift: int, reduced: bool = True) -> bool:
    src, first = hochschild_matrix(A, q, shift, reduced)
    nxt, second = hochschild_matrix(A, q + 1, shift, reduced)
    col = {key: k for k, key in enumerate(nxt)}
    for img in first:
        total: Dict = {}
        for key, c in img.items():
            for k2, c2 in second[col[key]].items():
                total[k2] = total.get(k2, 0) + c * c2
        if any(total.values()):
            return False
    return True


@dataclass
class FormalityReport:
    n: int
    q_max: int
    dimensions: Dict[int, int]
    hh2: int

    @property
    def obstruction_total(self) -> int:
        return sum(self.dimensions.values())

    @property
    def formal(self) -> bool:
        return self.obstruction_total == 0 and self.hh2 == 0

    def to_json(self) -> dict:
        return {"n": self.n, "q_max": self.q_max, "formal_up_to_q_max": self.formal,
                "dimensions": {str(q): d for q, d in sorted(self.dimensions.items())},
                "hh2_internal_0": self.hh2, "obstruction_total": self.obstruction_total}


def formality(A: QuiverAlgebra, q_max: int = 6) -> FormalityReport:
    """HH^q(A, A[2-q]) for 3 <= q <= q_max (summed: the obstruction space) and HH^2(A, A)."""
    dims = {q: quiver_hh(A, q, 2 - q).dimension for q in range(3, q_max + 1)}
    return FormalityReport(A.n, q_max, dims, quiver_hh(A, 2, 0).dimension)


def closed_arrow_walks(n: int, q: int, kill_first: bool = True) -> int:
    """Closed walks of q arrows starting at a vertex carrying a loop."""
    starts = range(1 if kill_first else 0, n + 1)
    count = 0
    for s in starts:
        layer = {s: 1}
        for _ in range(q):
            new: Dict[int, int] = {}
            for v, c in layer.items():
                for w in (v - 1, v + 1):
                    if 0 <= w <= n:
                        new[w] = new.get(w, 0) + c
            layer = new
        count += layer.get(s, 0)
    return count
