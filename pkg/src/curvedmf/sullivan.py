"""Pure Sullivan models and their curved deformations.

A model is Q[x_1..x_n] (x)  Lambda(beta_1..beta_m) with d(beta_i) = f_i(x), where
no f_i has a linear term.  Degrees are homological, so deg f_i = deg beta_i - 1.
The dual of beta_i is the even variable u_i and the dual of x_j the odd
variable e_j; the differential becomes the vector field v = sum f_i u_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

from .algebra import AlgebraCtx, GCPoly, VariableSpec, parse
from .groebner import INFINITE, RATIONAL_FUNCTION, CoefficientMode, Ideal, buchberger, quotient_dimension
from .polyvector import PolyCtx, Polyvector, WindowBlock, cohomology_window, gamma_check


class ModelError(ValueError):
    pass


@dataclass
class SullivanModel:
    x_vars: Tuple[VariableSpec, ...]
    beta_vars: Tuple[VariableSpec, ...]
    f: Tuple[GCPoly, ...]
    poly: PolyCtx
    u_names: Tuple[str, ...]
    e_names: Tuple[str, ...]

    @property
    def base(self) -> AlgebraCtx:
        return self.poly.base

    def vector_field(self) -> Polyvector:
        """v = sum_i f_i(x) u_i."""
        full = self.poly.full
        out = GCPoly.zero(full)
        for fi, ui in zip(self.f, self.u_names):
            out = out + fi.embed(full) * GCPoly.var(full, ui)
        return Polyvector(self.poly, out)

    def jacobian_ring_ctx(self) -> AlgebraCtx:
        """Even variables x and u, the home of the superpotential."""
        return AlgebraCtx(tuple(self.x_vars) + tuple(VariableSpec(u, self.poly.full.var(u).degree)
                                                      for u in self.u_names), t_mode="laurent")

    def to_json(self) -> dict:
        return {
            "x": [{"name": v.name, "degree": v.degree} for v in self.x_vars],
            "beta": [{"name": v.name, "degree": v.degree} for v in self.beta_vars],
            "f": {b.name: str(fi) for b, fi in zip(self.beta_vars, self.f)},
        }


def make_model(x_specs: Sequence, beta_specs: Sequence, f, check_degrees: bool = True,
               u_names: Optional[Sequence[str]] = None, e_names: Optional[Sequence[str]] = None) -> SullivanModel:
    """Validate and build a pure Sullivan model.

    ``x_specs`` and ``beta_specs`` are VariableSpecs or (name, degree) pairs;
    ``f`` is a list aligned with the betas or a mapping beta name -> element
    (GCPoly or string).
    """
    xs = tuple(v if isinstance(v, VariableSpec) else VariableSpec(*v) for v in x_specs)
    bs = tuple(v if isinstance(v, VariableSpec) else VariableSpec(*v) for v in beta_specs)
    for v in xs:
        if v.parity:
            raise ModelError(f"x variable {v.name} must be even")
    for v in bs:
        if not v.parity:
            raise ModelError(f"beta variable {v.name} must be odd")
    if u_names is None:
        u_names = [f"u{i + 1}" if len(bs) > 1 else "u" for i in range(len(bs))]
    if e_names is None:
        e_names = [f"e{j + 1}" if len(xs) > 1 else "e" for j in range(len(xs))]
    base = AlgebraCtx(xs + bs)
    duals = {v.name: n for v, n in zip(xs, e_names)}
    duals.update({v.name: n for v, n in zip(bs, u_names)})
    poly = PolyCtx(base, 1, tuple(duals.items()))
    xctx = AlgebraCtx(xs)
    if isinstance(f, Mapping):
        missing = [b.name for b in bs if b.name not in f]
        if missing:
            raise ModelError(f"no differential given for {missing}")
        f = [f[b.name] for b in bs]
    if len(f) != len(bs):
        raise ModelError("one f_i is needed per beta")
    fs = []
    for b, fi in zip(bs, f):
        if isinstance(fi, str):
            try:
                fi = parse(xctx, fi)
            except KeyError as exc:
                raise ModelError(f"f for {b.name} uses a variable outside x: {exc}") from None
        elif isinstance(fi, GCPoly):
            stray = fi.variables_used() - {v.name for v in xs}
            if stray:
                raise ModelError(f"f for {b.name} depends on {sorted(stray)}")
            if fi.ctx != xctx:
                fi = GCPoly(xctx, {(tuple(e[fi.ctx.index(v.name)] if v.name in fi.ctx.names else 0 for v in xs), te): c
                                   for (e, te), c in fi.terms.items()})
        if fi.t_exponents() - {0}:
            raise ModelError("f must not involve t")
        for (exps, _), c in fi.terms.items():
            if sum(exps) == 1:
                raise ModelError(f"f for {b.name} has a linear term: {fi}")
        if check_degrees and fi:
            want = b.degree - 1
            degs = fi.degrees()
            if degs != {want}:
                raise ModelError(f"deg f for {b.name} is {sorted(degs)}, expected {want}")
        fs.append(fi)
    return SullivanModel(xs, bs, tuple(fs), poly, tuple(u_names), tuple(e_names))


def model_from_json(data: dict) -> SullivanModel:
    xs = [(v["name"], int(v["degree"])) for v in data["x"]]
    bs = [(v["name"], int(v["degree"])) for v in data["beta"]]
    return make_model(xs, bs, dict(data["f"]), check_degrees=data.get("check_degrees", True))


def sphere_product(dims: Sequence[int]) -> SullivanModel:
    """Model of S^{2n_1} x ... x S^{2n_k}: x_j of degree -2n_j, beta_j of degree -4n_j+1, f_j = x_j^2."""
    k = len(dims)
    xs = [(f"x{j + 1}" if k > 1 else "x", -2 * n) for j, n in enumerate(dims)]
    bs = [(f"b{j + 1}" if k > 1 else "b", -4 * n + 1) for j, n in enumerate(dims)]
    return make_model(xs, bs, [f"{x}^2" for x, _ in xs])


def projective_space(n: int) -> SullivanModel:
    """Model of CP^n: x of degree -2, beta of degree -2n-1, f = x^(n+1)."""
    return make_model([("x", -2)], [("b", -2 * n - 1)], [f"x^{n + 1}"])


def _potential(model: SullivanModel, w) -> GCPoly:
    ring = model.jacobian_ring_ctx()
    if isinstance(w, str):
        uctx = AlgebraCtx(tuple(VariableSpec(u, ring.var(u).degree) for u in model.u_names), t_mode="laurent")
        try:
            w = parse(uctx, w)
        except KeyError as exc:
            raise ModelError(f"potential uses variables outside the duals u: {exc}") from None
    if w is None or (isinstance(w, int) and w == 0):
        return GCPoly.zero(ring)
    stray = w.variables_used() - set(model.u_names)
    if stray:
        raise ModelError(f"potential depends on {sorted(stray)}; only {list(model.u_names)} are allowed")
    return GCPoly(ring, {(tuple(e[w.ctx.index(n)] if n in w.ctx.names else 0 for n in ring.names), te): c
                         for (e, te), c in w.terms.items()})


def superpotential(model: SullivanModel, w) -> GCPoly:
    """W = t*w(u) + sum_i f_i(x) u_i in Q[t^{+-1}][x, u]."""
    ring = model.jacobian_ring_ctx()
    W = _potential(model, w) * GCPoly.t(ring)
    for fi, ui in zip(model.f, model.u_names):
        W = W + GCPoly(ring, {(e + (0,) * len(model.u_names), te): c for (e, te), c in fi.terms.items()}) \
            * GCPoly.var(ring, ui)
    return W


def jacobian_ideal(model: SullivanModel, w, mode: CoefficientMode = RATIONAL_FUNCTION) -> Ideal:
    W = superpotential(model, w)
    ring = model.jacobian_ring_ctx()
    return Ideal(ring.with_t(t_mode="polynomial"), [W.derive(n) for n in ring.names], mode)


@dataclass
class IsolatedReport:
    isolated: bool
    jacobian_dimension: object
    free_directions: List[str]

    def to_json(self) -> dict:
        dim = "infinite" if self.jacobian_dimension == INFINITE else self.jacobian_dimension
        return {"isolated": self.isolated, "jacobian_dimension": dim, "free_directions": self.free_directions}


def isolated_singularity(model: SullivanModel, w, order: str = "grevlex",
                         mode: CoefficientMode = RATIONAL_FUNCTION) -> IsolatedReport:
    G = buchberger(jacobian_ideal(model, w, mode), order)
    dim = quotient_dimension(G)
    free = G.pure_power_missing() if dim == INFINITE else []
    return IsolatedReport(dim != INFINITE, dim, free)


def u_criterion(model: SullivanModel, w, order: str = "grevlex"):
    """dim Q[u]/(u_i dw/du_i), the sphere-product finiteness test."""
    uctx = AlgebraCtx(tuple(VariableSpec(u, 0) for u in model.u_names))
    wp = _potential(model, w)
    gens = []
    for u in model.u_names:
        g = GCPoly.var(wp.ctx, u) * wp.derive(u)
        gens.append(GCPoly(uctx, {(tuple(e[wp.ctx.index(n)] for n in model.u_names), te): c
                                  for (e, te), c in g.terms.items()}))
    return quotient_dimension(buchberger(Ideal(uctx, gens), order))


@dataclass
class HHReport:
    isolated: bool
    dimension: object
    basis: List[str]
    degrees: List[int]
    even_only: bool
    window: Optional[List[WindowBlock]] = None

    def to_json(self) -> dict:
        data = {"isolated": self.isolated,
                "dimension": "infinite" if self.dimension == INFINITE else self.dimension,
                "basis": self.basis, "degrees": self.degrees, "even_only": self.even_only}
        if self.window is not None:
            data["window"] = [b.to_json() for b in self.window]
        return data


def hh_mf(model: SullivanModel, w, order: str = "grevlex", weight_bound: int = 4,
          mode: CoefficientMode = RATIONAL_FUNCTION) -> HHReport:
    """HH of the curved deformation: the Jacobian ring when isolated, else window data."""
    ring = model.jacobian_ring_ctx()
    G = buchberger(jacobian_ideal(model, w, mode), order)
    st = G.staircase()
    if st is not None:
        names = ring.names
        basis, degrees = [], []
        for exps in st:
            basis.append("*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e) or "1")
            degrees.append(sum(e * v.degree for e, v in zip(exps, ring.variables)))
        return HHReport(True, len(st), basis, degrees, all(d % 2 == 0 for d in degrees))
    v = model.vector_field()
    poly = PolyCtx(model.base.with_t(t_mode="laurent", grading="Z2"), 1, model.poly.dual_names)
    full = poly.full
    bg = GCPoly(full, v.body.terms)
    wp = _potential(model, w)
    pos = [full.index(n) for n in wp.ctx.names]
    tw = {}
    for (exps, te), c in wp.terms.items():
        e = [0] * full.nvars
        for p, k in zip(pos, exps):
            e[p] = k
        tw[(tuple(e), te + 1)] = c
    bg = bg + GCPoly(full, tw)
    window = cohomology_window(Polyvector(poly, bg), (0, 1), weight_bound)
    odd_dims = sum(b.dimension for b in window if b.degree % 2)
    return HHReport(False, INFINITE, [], [], odd_dims == 0, window)


def gamma_traces_vanish(model: SullivanModel) -> bool:
    rep = gamma_check(model.vector_field())
    return rep.all_traces_zero() and rep.nilpotency_order is not None and rep.nilpotency_order <= 2
