"""Finite A-infinity structures with coefficients in Q[t] and a Stasheff checker.

Operations are sparse tables ``ops[k][(i_1, ..., i_k)] = {j: {texp: coef}}``
on a graded basis.  The identities checked are

    sum_{r+s+u=N} (-1)^(r + s*u) m_{r+1+u}(1^r (x) m_s (x) 1^u) = 0

with the Koszul sign (-1)^(s * (|a_1|+...+|a_r|)) when m_s passes the first
r inputs.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

TPoly = Dict[int, Fraction]
Table = Dict[Tuple[int, ...], Dict[int, TPoly]]


class GradingError(ValueError):
    pass


def _tp_add(target: TPoly, src: TPoly, scale, max_t: Optional[int], shift: int = 0) -> None:
    for e, c in src.items():
        e2 = e + shift
        if max_t is not None and e2 > max_t:
            continue
        v = target.get(e2, 0) + scale * c
        if v:
            target[e2] = v
        else:
            target.pop(e2, None)


def _tp_str(p: TPoly) -> str:
    parts = []
    for e in sorted(p):
        c = p[e]
        mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


@dataclass
class AInfStructure:
    basis: Tuple[str, ...]
    degrees: Tuple[int, ...]
    ops: Dict[int, Table]
    t_degree: int = 0
    name: str = ""

    def check_grading(self) -> List[str]:
        """Entries whose degree differs from 2 - k + texp * t_degree."""
        bad = []
        for k, table in self.ops.items():
            for ins, outs in table.items():
                d_in = sum(self.degrees[i] for i in ins)
                for j, poly in outs.items():
                    for e in poly:
                        if self.degrees[j] - d_in != 2 - k + e * self.t_degree:
                            bad.append(f"m{k}{self.label(ins)} -> {self.basis[j]} t^{e}")
        return bad

    def label(self, ins: Sequence[int]) -> str:
        return "(" + ", ".join(self.basis[i] for i in ins) + ")"

    def mutated(self, k: int, ins: Tuple[int, ...], out: int, texp: int, delta=1) -> "AInfStructure":
        new = copy.deepcopy(self)
        poly = new.ops.setdefault(k, {}).setdefault(ins, {}).setdefault(out, {})
        v = poly.get(texp, 0) + delta
        if v:
            poly[texp] = Fraction(v)
        else:
            poly.pop(texp)
        return new

    def entries(self, k: int):
        for ins, outs in sorted(self.ops.get(k, {}).items()):
            for j, poly in sorted(outs.items()):
                for e, c in sorted(poly.items()):
                    yield ins, j, e, c

    def to_json(self) -> dict:
        ops = {}
        for k in sorted(self.ops):
            rows = []
            for ins, j, e, c in self.entries(k):
                rows.append({"in": [self.basis[i] for i in ins], "out": self.basis[j], "t": e, "coef": str(c)})
            ops[str(k)] = rows
        return {"name": self.name, "basis": list(self.basis), "degrees": list(self.degrees),
                "t_degree": self.t_degree, "ops": ops}

    @classmethod
    def from_json(cls, data: dict) -> "AInfStructure":
        basis = tuple(data["basis"])
        index = {b: i for i, b in enumerate(basis)}
        ops: Dict[int, Table] = {}
        for k, rows in data.get("ops", {}).items():
            table: Table = {}
            for r in rows:
                ins = tuple(index[b] for b in r["in"])
                if len(ins) != int(k):
                    raise ValueError(f"m{k} entry has {len(ins)} inputs")
                poly = table.setdefault(ins, {}).setdefault(index[r["out"]], {})
                poly[int(r.get("t", 0))] = poly.get(int(r.get("t", 0)), 0) + Fraction(r["coef"])
            ops[int(k)] = table
        return cls(basis, tuple(int(d) for d in data["degrees"]), ops, int(data.get("t_degree", 0)),
                   data.get("name", ""))


@dataclass
class Violation:
    arity: int
    inputs: Tuple[str, ...]
    value: Dict[str, str] = field(default_factory=dict)

    def __str__(self):
        vals = ", ".join(f"{b}: {v}" for b, v in sorted(self.value.items()))
        return f"arity {self.arity} on ({', '.join(self.inputs)}): {vals}"


def ainf_check(S: AInfStructure, max_arity: int, max_t_order: Optional[int] = None) -> List[Violation]:
    """Violated Stasheff identities up to the given arity and t-order, sorted."""
    acc: Dict[Tuple[int, ...], Dict[int, TPoly]] = {}
    _accumulate(S, max_arity, max_t_order, acc)
    out = []
    for ins in sorted(acc, key=lambda z: (len(z), z)):
        vals = {S.basis[y]: _tp_str(p) for y, p in acc[ins].items() if p}
        if vals:
            out.append(Violation(len(ins), tuple(S.basis[i] for i in ins), vals))
    return out


def _accumulate(S: AInfStructure, max_arity: int, max_t_order: Optional[int], acc) -> None:
    deg = S.degrees
    for s, inner in S.ops.items():
        for k_out, outer in S.ops.items():
            N = k_out + s - 1
            if N > max_arity or N < 1:
                continue
            # index inner outputs for lookup
            by_out: Dict[int, List[Tuple[Tuple[int, ...], TPoly]]] = {}
            for c_ins, c_outs in inner.items():
                for x, poly in c_outs.items():
                    by_out.setdefault(x, []).append((c_ins, poly))
            for b_ins, b_outs in outer.items():
                for r in range(k_out):
                    u = k_out - 1 - r
                    x = b_ins[r]
                    if x not in by_out:
                        continue
                    koszul_base = sum(deg[i] for i in b_ins[:r])
                    sign = -1 if (r + s * u + s * koszul_base) % 2 else 1
                    for c_ins, c_poly in by_out[x]:
                        full = b_ins[:r] + c_ins + b_ins[r + 1:]
                        slot = acc.setdefault(full, {})
                        for y, b_poly in b_outs.items():
                            target = slot.setdefault(y, {})
                            for e1, c1 in c_poly.items():
                                _tp_add(target, b_poly, sign * c1, max_t_order, e1)


def associative_structure(basis: Sequence[str], degrees: Sequence[int], mult: Dict[Tuple[int, int], Dict[int, Fraction]]) -> AInfStructure:
    table: Table = {}
    for ins, outs in mult.items():
        table[ins] = {j: {0: Fraction(c)} for j, c in outs.items() if c}
    return AInfStructure(tuple(basis), tuple(degrees), {2: table})


def cpn_fiber_structure(n: int, d: int, variant: str = "carry",
                        complete_arity: Optional[int] = None, complete_t_order: int = 2) -> AInfStructure:
    """Q[e]/e^{n+1} with |e| = 2, deformed by t in arity 2d.

    ``carry``: m_{2d}(e^a_1, ..., e^a_2d) = t e^{sum a - (n+1)d} when every
    consecutive pair satisfies a_{2i-1} + a_{2i} >= n+1 (and the exponent
    stays at most n), the d-fold cup power
    of the carry cocycle of Q[x]/(x^{n+1} - t).

    ``literal``: m_{2d} = t * 1 exactly when sum a_i = (n+1)d.

    The carry variant is then completed (operations of arity above 2d, from
    t^2 on) so the identities hold up to ``complete_arity`` (default 2d+4)
    and ``complete_t_order``; pass ``complete_arity=0`` to skip.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if variant not in ("carry", "literal"):
        raise ValueError(f"unknown variant {variant!r}")
    N = n + 1
    basis = tuple("1" if a == 0 else ("e" if a == 1 else f"e^{a}") for a in range(N))
    degrees = tuple(2 * a for a in range(N))
    t_degree = -2 * n * d - 2
    m2: Table = {}
    for a in range(N):
        for b in range(N):
            if a + b <= n:
                m2[(a, b)] = {a + b: {0: Fraction(1)}}
    ops: Dict[int, Table] = {2: m2}
    top: Table = {}

    def tuples(k):
        if k == 0:
            yield ()
            return
        for rest in tuples(k - 1):
            for a in range(N):
                yield rest + (a,)

    for ins in tuples(2 * d):
        total = sum(ins)
        if variant == "literal":
            if total == N * d:
                top[ins] = {0: {1: Fraction(1)}}
        else:
            if total - N * d <= n and all(ins[2 * i] + ins[2 * i + 1] >= N for i in range(d)):
                top[ins] = {total - N * d: {1: Fraction(1)}}
    if d == 1:
        for ins, outs in top.items():
            m2.setdefault(ins, {}).update(outs)
    else:
        ops[2 * d] = top
    S = AInfStructure(basis, degrees, ops, t_degree, f"cpn_fiber_{n}_{d}_{variant}")
    if variant == "carry":
        arity = 2 * d + 4 if complete_arity is None else complete_arity
        if arity:
            S = complete(S, arity, complete_t_order)
    return S


def _unknowns(S: AInfStructure, k: int, texp: int):
    """Grading-consistent entries of an arity-k operation at t^texp."""
    target = 2 - k + texp * S.t_degree
    by_deg: Dict[int, List[int]] = {}
    for j, dj in enumerate(S.degrees):
        by_deg.setdefault(dj, []).append(j)

    def rec(prefix, total):
        if len(prefix) == k:
            for j in by_deg.get(total + target, []):
                yield prefix, j
            return
        for i, di in enumerate(S.degrees):
            yield from rec(prefix + (i,), total + di)

    yield from rec((), 0)


def complete(S: AInfStructure, max_arity: int, max_t_order: int, max_rounds: int = 16) -> AInfStructure:
    """Add higher operations, order by order in t, until the identities hold.

    The lowest violated identity (t-order e, arity N) is killed by an arity
    N-1 operation at t^e, found by solving the linear equation d(psi) = -R
    where d is the Hochschild differential of the t^0 arity-2 product.
    Raises ValueError when the obstruction does not vanish.
    """
    from .linalg import kernel, solve

    S = copy.deepcopy(S)
    base = AInfStructure(S.basis, S.degrees, {2: {ins: {j: {0: p[0]} for j, p in outs.items() if 0 in p}
                                                  for ins, outs in S.ops.get(2, {}).items()}}, S.t_degree)
    for _ in range(max_rounds):
        bad = ainf_check(S, max_arity, max_t_order)
        if not bad:
            return S
        raw = _residual(S, max_arity, max_t_order)
        e_min = min(e for (ins, y, e) in raw)
        N = min(len(ins) for (ins, y, e) in raw if e == e_min)
        target = {(ins, y): c for (ins, y, e), c in raw.items() if e == e_min and len(ins) == N}
        k = N - 1
        cols = list(_unknowns(S, k, e_min))
        images = []
        for ins, j in cols:
            probe = copy.deepcopy(base)
            probe.ops[k] = {ins: {j: {e_min: Fraction(1)}}}
            img = _residual(probe, N, e_min)
            images.append({(i2, y): c for (i2, y, e), c in img.items() if e == e_min and len(i2) == N})
        _, ech = kernel(images)
        sol = solve(ech, {key: -c for key, c in target.items()})
        if sol is None:
            raise ValueError(f"obstruction at t^{e_min}, arity {N} does not vanish")
        table = S.ops.setdefault(k, {})
        for col, c in sol.items():
            ins, j = cols[col]
            poly = table.setdefault(ins, {}).setdefault(j, {})
            v = poly.get(e_min, 0) + c
            if v:
                poly[e_min] = v
            else:
                poly.pop(e_min, None)
    raise ValueError("completion did not converge")


def _residual(S: AInfStructure, max_arity: int, max_t_order: Optional[int]):
    """Stasheff residual as {(inputs, output, texp): coef}."""
    acc: Dict[Tuple[int, ...], Dict[int, TPoly]] = {}
    _accumulate(S, max_arity, max_t_order, acc)
    out = {}
    for ins, outs in acc.items():
        for y, p in outs.items():
            for e, c in p.items():
                if c:
                    out[(ins, y, e)] = c
    return out


def power_inverse(S: AInfStructure, k: int) -> Optional[Tuple[int, Dict[int, TPoly]]]:
    """For an arity-2 table: an index j with e^k * e^j a unit multiple of 1 (a power of t)."""
    m2 = S.ops.get(2, {})
    for j in range(len(S.basis)):
        out = m2.get((k, j), {})
        if set(out) == {0} and len(out[0]) == 1:
            return j, out
    return None


def rescale_t(S: AInfStructure, c) -> AInfStructure:
    """The structure after t -> c t: every t^e coefficient is multiplied by c^e."""
    new = copy.deepcopy(S)
    c = Fraction(c)
    for table in new.ops.values():
        for outs in table.values():
            for poly in outs.values():
                for e in poly:
                    poly[e] = poly[e] * c ** e
    return new


def mutation_sensitivity(S: AInfStructure, max_arity: int, max_t_order: Optional[int] = None,
                         delta=1) -> List[Tuple[int, Tuple[int, ...], int, int]]:
    """Constants of S whose single mutation by ``delta`` leaves every identity intact."""
    missed = []
    for k in sorted(S.ops):
        for ins, j, e, _ in list(S.entries(k)):
            if not ainf_check(S.mutated(k, ins, j, e, delta), max_arity, max_t_order):
                missed.append((k, ins, j, e))
    return missed
