"""Sparse exact linear algebra over any field whose elements support + - * /.

Vectors are dicts ``{key: coef}`` with orderable keys; zero entries are never
stored.  ``Echelon`` keeps an incrementally reduced basis and can record how
each basis vector was built from the inputs, which gives kernels and
solutions of linear systems in one pass.
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

SparseVec = Dict[Hashable, object]


def axpy(y: SparseVec, a, x: SparseVec) -> None:
    """y += a*x in place."""
    for k, c in x.items():
        v = y.get(k)
        v = a * c if v is None else v + a * c
        if v:
            y[k] = v
        else:
            y.pop(k, None)


class Echelon:
    """Row-echelon basis of a subspace, pivot = smallest key of each row."""

    def __init__(self, track: bool = False):
        self.rows: Dict[Hashable, Tuple[SparseVec, Optional[SparseVec]]] = {}
        self.track = track

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: SparseVec, combo: Optional[SparseVec] = None):
        vec = dict(vec)
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                return vec, combo
            k = min(hits)
            row, rc = self.rows[k]
            a = -vec[k] / row[k]
            axpy(vec, a, row)
            if combo is not None and rc is not None:
                axpy(combo, a, rc)

    def add(self, vec: SparseVec, combo: Optional[SparseVec] = None):
        """Insert; returns the reduced vector and combination (zero vector = dependent)."""
        vec, combo = self.reduce(vec, combo)
        if vec:
            self.rows[min(vec)] = (vec, combo)
        return vec, combo

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)[0]


def rank(vectors: Iterable[SparseVec]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def kernel(images: Sequence[SparseVec]) -> Tuple[List[SparseVec], Echelon]:
    """Kernel of the map sending basis vector i to ``images[i]``.

    Returns kernel vectors (dicts over input indices) and the echelon form of
    the image, whose rows remember their input combinations.
    """
    ech = Echelon(track=True)
    ker: List[SparseVec] = []
    for i, img in enumerate(images):
        rem, combo = ech.add(img, {i: 1})
        if not rem:
            ker.append(combo)
    return ker, ech


def solve(ech: Echelon, target: SparseVec) -> Optional[SparseVec]:
    """Combination c of the tracked inputs with sum c_i image_i = target, or None."""
    if not ech.track:
        raise ValueError("echelon was built without tracking")
    rem, combo = ech.reduce(target, {})
    if rem:
        return None
    return {k: -v for k, v in combo.items()}


def quotient_basis(subspace: Echelon, vectors: Iterable[SparseVec]) -> List[SparseVec]:
    """Vectors completing ``subspace`` to the span of ``vectors`` (representatives)."""
    ech = Echelon()
    for rv, _ in subspace.rows.values():
        ech.add(rv)
    out = []
    for v in vectors:
        rem, _ = ech.add(v)
        if rem:
            out.append(v)
    return out
