"""Command line driver: one computation per invocation, JSON report out.

Exit codes: 0 success, 1 input error, 2 mathematical failure (for example a
non-isolated potential or a violated identity), 3 computation budget exceeded.

Any command also accepts a previous report as its input file; the embedded
inputs and options are then re-run unchanged.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, Optional

from .algebra import AlgebraCtx, ContextMismatch, parse
from .groebner import (INFINITE, RATIONAL_FUNCTION, critical_ideal, local_multiplicity, scheme_length,
                       specialized_length)

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x == INFINITE:
        return "infinite"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _need(data: dict, key: str):
    if key not in data:
        raise InputError(f"input is missing the field {key!r}")
    return data[key]


# ---------------------------------------------------------------------------
# commands

def _model(data: dict):
    from .sullivan import model_from_json, projective_space, sphere_product
    preset = data.get("preset")
    if preset == "sphere_product":
        return sphere_product([int(n) for n in _need(data, "dims")])
    if preset == "projective_space":
        return projective_space(int(_need(data, "n")))
    if preset is not None:
        raise InputError(f"unknown model preset {preset!r}")
    return model_from_json(data)


def _potential_text(data: dict, opts: dict) -> str:
    w = opts.get("w") if opts.get("w") is not None else data.get("w")
    if w is None:
        raise InputError("no potential given (use --w or a 'w' field)")
    return w


def cmd_hh(data, opts):
    from .sullivan import hh_mf
    model = _model(data)
    rep = hh_mf(model, _potential_text(data, opts), order=opts["order"], weight_bound=opts["weight_bound"] or 4)
    return rep.to_json(), rep.isolated


def cmd_isolated(data, opts):
    from .sullivan import isolated_singularity, u_criterion
    model = _model(data)
    w = _potential_text(data, opts)
    rep = isolated_singularity(model, w, order=opts["order"])
    out = rep.to_json()
    if data.get("preset") == "sphere_product":
        out["u_criterion_dimension"] = _jsonable(u_criterion(model, w, order=opts["order"]))
    return out, rep.isolated


def cmd_jacobian(data, opts):
    from .sullivan import isolated_singularity
    model = _model(data)
    rep = isolated_singularity(model, _potential_text(data, opts), order=opts["order"])
    return {"jacobian_dimension": _jsonable(rep.jacobian_dimension),
            "free_directions": rep.free_directions}, True


def cmd_critical_length(data, opts):
    names = [v["name"] if isinstance(v, dict) else v for v in _need(data, "variables")]
    ring = AlgebraCtx.build([(n, 0) for n in names], t_mode="laurent")
    d = opts.get("d") if opts.get("d") is not None else data.get("d")
    if d is None:
        raise InputError("no d given (use --d or a 'd' field)")
    d = int(d)
    num = parse(ring, str(_need(data, "numerator")).replace("{d}", str(d)))
    den = parse(ring, str(_need(data, "denominator")).replace("{d}", str(d)))
    power = data.get("power", "d")
    k = d if power == "d" else int(power)
    out: Dict[str, Any] = {"d": d}
    if opts["t_mode"] == "specialize":
        def make(mode):
            return critical_ideal(num, den, k, names, mode)[0]

        def excluded(mode):
            return [den]
        length, values = specialized_length(make, excluded, seed=opts["seed"])
        out.update(length=length, probabilistic=True, specializations=[str(v) for v in values])
    else:
        I, _ = critical_ideal(num, den, k, names, RATIONAL_FUNCTION)
        out.update(length=_jsonable(scheme_length(I, [den], opts["order"])), probabilistic=False)
        if data.get("local_multiplicity", True):
            try:
                out["local_multiplicity"] = local_multiplicity(I, order=opts["order"])
            except RuntimeError as exc:
                raise BudgetError(str(exc)) from None
    return out, True


def cmd_gauge(data, opts):
    from .polyvector import GaugeBudgetExceeded, PolyCtx, gauge, potential_background
    variables = [(v["name"], int(v.get("degree", 0))) for v in _need(data, "variables")]
    P = PolyCtx.build(variables, data.get("duals"), t_mode="laurent", grading=data.get("grading", "Z2"),
                      t_degree=int(data.get("t_degree", 0)))
    phi = P.parse(_need(data, "phi"))
    mu = P.parse(_need(data, "mu"))
    W = P.parse(_need(data, "potential"))
    order = opts["truncate_t"] if opts["truncate_t"] is not None else int(data.get("order", 2))
    try:
        res = gauge(phi, mu, potential_background(W), order)
    except GaugeBudgetExceeded as exc:
        raise BudgetError(str(exc)) from None
    return {"result": str(res), "order": order}, True


def cmd_mf_hom(data, opts):
    from .matfac import MatrixFactorization, cohomology_product, hom_cohomology
    M = MatrixFactorization.from_json(_need(data, "source"))
    N = MatrixFactorization.from_json(data["target"]) if "target" in data else M
    H = hom_cohomology(M, N, opts["order"])
    out = H.summary()
    out["dimension"] = _jsonable(H.dimension)
    if "target" not in data:
        table = cohomology_product(M, H, opts["order"])
        prods = {}
        for ((pa, ka), (pb, kb)), (p, coeffs) in sorted(table.entries.items()):
            label = f"{'eo'[pa]}{ka}*{'eo'[pb]}{kb}"
            prods[label] = {"parity": "odd" if p else "even", "coefficients": [str(c) for c in coeffs]}
        out["products"] = prods
    return out, True


def cmd_mirror_ring(data, opts):
    from . import mirror
    if "preset" in data:
        name = data["preset"]
        if name not in mirror.PRESETS:
            raise InputError(f"unknown preset {name!r}")
        cfg = mirror.load_preset(name, data.get("n"))
    else:
        cfg = mirror.DivisorConfig.from_json(data)
    M = mirror.mirror_ring(cfg)
    out = {"generators": list(M.presentation.generators),
           "relations": sorted(str(r) for r in M.presentation.relations),
           "nontrivial_relations": sorted(str(r) for r in M.nontrivial()),
           "undefined_products": [list(p) for p in M.undefined]}
    ok = True
    if data.get("preset") == "quadric_n":
        fwd, bwd = mirror.quadric_maps(cfg)
        cert = mirror.verify_iso(M.presentation, mirror.quadric_target(cfg.j), fwd, bwd)
        out["isomorphic_to"] = "Q[u, w, 1/w]/(u1*...*un - (1+w)^2)"
        out["verified"] = cert.ok
        ok = cert.ok
    return out, ok


def cmd_grassmannian(data, opts):
    from .mirror import grassmannian_qh
    n = opts.get("n") if opts.get("n") is not None else data.get("n")
    if n is None:
        raise InputError("no n given")
    G = grassmannian_qh(int(n))
    return {"n": int(n), "zero_eigenspace_dimension": _jsonable(G.dimension),
            "relation": str(G.relation), "classical_dimension": _jsonable(G.classical_dimension),
            "relations": [str(r) for r in G.full.relations]}, True


def cmd_quiver_hh(data, opts):
    from .quiver import formality, make_quiver, quiver_hh
    n = opts.get("n") if opts.get("n") is not None else data.get("n")
    if n is None:
        raise InputError("no n given")
    A = make_quiver(int(n), kill_first=bool(data.get("kill_first", True)))
    if data.get("q") is not None:
        r = quiver_hh(A, int(data["q"]), int(data.get("shift", 2 - int(data["q"]))))
        return {"n": int(n), "q": r.q, "shift": r.shift, "dimension": r.dimension}, True
    q_max = opts["q_max"] or int(data.get("q_max", 6))
    rep = formality(A, q_max)
    return rep.to_json(), rep.formal


def cmd_ainf_check(data, opts):
    from .ainf import AInfStructure, ainf_check, cpn_fiber_structure
    if data.get("preset") == "cpn_fiber":
        n, d = int(_need(data, "n")), int(_need(data, "d"))
        S = cpn_fiber_structure(n, d, data.get("variant", "carry"))
        arity = int(data.get("max_arity", 2 * d + 4))
    else:
        S = AInfStructure.from_json(data)
        arity = int(_need(data, "max_arity"))
    t_order = opts["truncate_t"] if opts["truncate_t"] is not None else int(data.get("max_t_order", 2))
    bad_grading = S.check_grading()
    if bad_grading:
        raise InputError(f"operations violate the grading: {bad_grading[:5]}")
    violations = ainf_check(S, arity, t_order)
    return {"structure": S.name, "max_arity": arity, "max_t_order": t_order,
            "violations": [str(v) for v in violations], "passed": not violations}, not violations


def cmd_gamma_check(data, opts):
    from .polyvector import gamma_check
    model = _model(data)
    rep = gamma_check(model.vector_field())
    ok = rep.all_traces_zero() and rep.nilpotency_order is not None and rep.nilpotency_order <= 2
    return {"variables": list(rep.variables), "nilpotency_order": rep.nilpotency_order,
            "traces": [str(t) for t in rep.traces], "traces_vanish": rep.all_traces_zero(),
            "gamma_squared_zero": rep.nilpotency_order is not None and rep.nilpotency_order <= 2}, ok


COMMANDS: Dict[str, Callable] = {
    "hh": cmd_hh,
    "isolated": cmd_isolated,
    "jacobian": cmd_jacobian,
    "critical-length": cmd_critical_length,
    "gauge": cmd_gauge,
    "mf-hom": cmd_mf_hom,
    "mirror-ring": cmd_mirror_ring,
    "grassmannian": cmd_grassmannian,
    "quiver-hh": cmd_quiver_hh,
    "ainf-check": cmd_ainf_check,
    "gamma-check": cmd_gamma_check,
}

OPTION_KEYS = ("seed", "t_mode", "truncate_t", "order", "weight_bound", "q_max", "w", "d", "n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvedmf", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("input", nargs="?", help="JSON input file (or a previous report)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-mode", choices=["rational-function", "specialize"], default="rational-function")
    p.add_argument("--truncate-t", type=int, default=None)
    p.add_argument("--order", choices=["grevlex", "grlex", "lex"], default="grevlex")
    p.add_argument("--weight-bound", type=int, default=None)
    p.add_argument("--q-max", type=int, default=None)
    p.add_argument("--w", default=None, help="potential in the dual variables u")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    return p


def run(command: str, data: dict, opts: dict):
    """Returns (exit code, report)."""
    report = {"command": command, "inputs": {"data": data, "options": opts}}
    try:
        result, ok = COMMANDS[command](data, opts)
    except BudgetError as exc:
        report["error"] = str(exc)
        return EXIT_BUDGET, report
    except (InputError, ContextMismatch, KeyError, TypeError, ValueError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        return EXIT_INPUT, report
    except RuntimeError as exc:
        report["error"] = str(exc)
        return EXIT_BUDGET, report
    report["result"] = _jsonable(result)
    return (EXIT_OK if ok else EXIT_MATH), report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    opts = {k: getattr(args, k) for k in OPTION_KEYS}
    data: dict = {}
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            sys.stderr.write(f"cannot read {args.input}: {exc}\n")
            return EXIT_INPUT
        if not isinstance(data, dict):
            sys.stderr.write("input must be a JSON object\n")
            return EXIT_INPUT
        if data.get("command") == args.command and "inputs" in data:
            opts = data["inputs"]["options"]
            data = data["inputs"]["data"]
    code, report = run(args.command, data, opts)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        sys.stderr.write(report["error"] + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
