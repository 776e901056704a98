"""Command-line front end.

Every result-producing command re-verifies its certificate (an exact
substitution or membership identity) before printing and reports it as
``verified``.  Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .expr import parse_jet, serialize_jet
from .field import FieldError, parse_field_spec, parse_valuation_spec
from .ift import ImplicitSystem, ift_solve
from .jacobian import (DEFAULT_MAX_DEGREE, determinacy_certificate,
                       milnor_number, verify_determinacy, verify_milnor)
from .jet import CoordinateChange
from .quadform import (QuadNormalForm, QuadraticForm, arf_reduce_solvable,
                       diagonal_signs, normal_form, normalize_squares)
from .split import SplitResult, split, verify_split
from .transport import TransportProblem, normalize_tail_linear, split_shape, transport

# polynomial mode: a precision no term will ever reach
POLYNOMIAL_PRECISION = 10 ** 9


def _parse_vars(text: str):
    names = [v.strip() for v in text.split(",") if v.strip()]
    if not names:
        raise FieldError("empty variable list")
    if len(set(names)) != len(names):
        raise FieldError("repeated variable name")
    return names


def _emit(args, payload: dict, lines):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _bool(b):
    return "true" if b else "false"


def _cmd_split(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    f = parse_jet(args.expr, field, names, args.precision)
    result = split(f, args.precision)
    check = verify_split(f, result)
    verified = check.is_zero()
    payload = {"schema": 1, "command": "split"}
    payload.update(result.to_json(names))
    payload["verified"] = verified
    lines = [
        f"field: {field.spec()}",
        f"precision: {args.precision}",
        f"rank: {result.rank}",
        f"quad: {json.dumps(result.quad.to_json())}",
        f"residual: {serialize_jet(result.residual, names)}",
    ]
    for name, comp in zip(names, result.change.components):
        lines.append(f"change[{name}]: {serialize_jet(comp, names)}")
    lines.append(f"verified: {_bool(verified)}")
    _emit(args, payload, lines)
    return 0 if verified else 1


def _cmd_quadform(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    f = parse_jet(args.expr, field, names, max(2, args.precision))
    q = QuadraticForm.from_jet(f)
    nf = normal_form(q)
    verified = nf.change(2).apply(q.as_jet(2)) == nf.normal_jet(2)
    nf_text = serialize_jet(nf.normal_jet(2), names)
    payload = {"schema": 1, "command": "quadform", "field": field.spec(),
               "normal_form_text": nf_text, "normal_form": nf.to_json()}
    lines = [f"field: {field.spec()}", f"rank: {nf.rank}",
             f"normal_form: {nf_text}",
             f"descriptor: {json.dumps(nf.to_json())}"]
    if field.char == 2:
        reduced = arf_reduce_solvable(nf)
        if reduced is not None:
            ok = reduced.change(2).apply(q.as_jet(2)) == reduced.normal_jet(2)
            verified = verified and ok
            payload["solvable_reduction"] = reduced.to_json()
            lines.append(f"solvable_reduction: {json.dumps(reduced.to_json())}")
        else:
            payload["solvable_reduction"] = None
            lines.append("solvable_reduction: absent")
    else:
        unit = normalize_squares(nf)
        if unit is not None:
            ok = unit.change(2).apply(q.as_jet(2)) == unit.normal_jet(2)
            verified = verified and ok
            payload["unit_diagonal"] = unit.to_json()
            lines.append(f"unit_diagonal: {json.dumps(unit.to_json())}")
        else:
            payload["unit_diagonal"] = None
            lines.append("unit_diagonal: absent")
            if field.spec() == "q":
                signs = "".join(diagonal_signs(nf))
                payload["signs"] = signs
                lines.append(f"signs: {signs}")
    payload["verified"] = verified
    lines.append(f"verified: {_bool(verified)}")
    _emit(args, payload, lines)
    return 0 if verified else 1


def _milnor_input(args, field, names):
    if args.precision is not None:
        return parse_jet(args.expr, field, names, args.precision)
    return parse_jet(args.expr, field, names, POLYNOMIAL_PRECISION)


def _cmd_milnor(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    f = _milnor_input(args, field, names)
    payload = {"schema": 1, "command": "milnor", "field": field.spec(),
               "max_degree_searched": args.max_degree}
    note = None
    if args.precision is not None:
        # a jet is only meaningful once a determinacy bound fits inside it
        k = determinacy_certificate(f, args.max_degree)
        bound = None if k is None else 2 * k - int(f.order()) + 2
        if bound is None or bound > args.precision:
            note = ("no determinacy bound within the jet precision; "
                    "mu of the truncation is not certified")
            payload.update({"mu": None, "stabilization_degree": None,
                            "bound": None,
                            "order": None if f.is_zero() else int(f.order()),
                            "note": note, "verified": True})
            _emit(args, payload, ["mu: unknown", f"note: {note}", "verified: true"])
            return 0
    report = milnor_number(f, args.max_degree)
    verified = verify_milnor(f, report)
    payload.update({
        "mu": report.mu,
        "stabilization_degree": report.stabilization_degree,
        "bound": report.determinacy_bound,
        "order": report.order,
        "verified": verified,
    })
    mu_text = "infinite-or-unknown" if report.mu is None else str(report.mu)
    lines = [
        f"mu: {mu_text}",
        f"stabilization_degree: {report.stabilization_degree}",
        f"bound: {report.determinacy_bound}",
        f"order: {report.order}",
        f"max_degree_searched: {args.max_degree}",
        f"verified: {_bool(verified)}",
    ]
    _emit(args, payload, lines)
    return 0 if verified else 1


def _cmd_determinacy(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    f = _milnor_input(args, field, names)
    k = determinacy_certificate(f, args.max_degree)
    order = None if f.is_zero() else int(f.order())
    bound = None if k is None else 2 * k - order + 2
    verified = verify_determinacy(f, k)
    payload = {"schema": 1, "command": "determinacy", "field": field.spec(),
               "stabilization_degree": k, "bound": bound, "order": order,
               "max_degree_searched": args.max_degree, "verified": verified}
    lines = [
        f"stabilization_degree: {k}",
        f"bound: {'absent' if bound is None else bound}",
        f"order: {order}",
        f"max_degree_searched: {args.max_degree}",
        f"verified: {_bool(verified)}",
    ]
    _emit(args, payload, lines)
    return 0 if verified else 1


def _cmd_norm(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    prec = args.precision if args.precision is not None else POLYNOMIAL_PRECISION
    f = parse_jet(args.expr, field, names, prec)
    valuation = parse_valuation_spec(args.valuation)
    if args.epsilon:
        eps = [Fraction(e.strip()) for e in args.epsilon.split(",")]
    else:
        eps = [Fraction(1)] * f.nvars
    value = f.norm(valuation, eps)
    verified = f.norm(valuation, eps) == value
    if isinstance(value, Fraction):
        rendered = str(value)
    else:
        rendered = repr(value)
    payload = {"schema": 1, "command": "norm", "field": field.spec(),
               "valuation": valuation.kind, "value": rendered, "verified": verified}
    lines = [f"value: {rendered}", f"verified: {_bool(verified)}"]
    _emit(args, payload, lines)
    return 0 if verified else 1


def _cmd_ift(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    unknowns = _parse_vars(args.split_vars)
    for u in unknowns:
        if u not in names:
            raise FieldError(f"unknown variable {u!r} in --split-vars")
    y_idx = [names.index(u) for u in unknowns]
    eqs = [parse_jet(e, field, names, args.precision) for e in args.equation]
    system = ImplicitSystem(eqs, y_idx)
    ys = ift_solve(system, args.precision)
    verified = all(r.is_zero() for r in system.residuals(ys, args.precision))
    x_names = [names[i] for i in system.x_indices]
    payload = {"schema": 1, "command": "ift", "field": field.spec(),
               "precision": args.precision,
               "solution": {u: serialize_jet(y, x_names) for u, y in zip(unknowns, ys)},
               "verified": verified}
    lines = [f"{u}: {serialize_jet(y, x_names)}" for u, y in zip(unknowns, ys)]
    lines.append(f"verified: {_bool(verified)}")
    _emit(args, payload, lines)
    return 0 if verified else 1


def _read_text(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _cmd_transport(args):
    field = parse_field_spec(args.field)
    names = _parse_vars(args.vars)
    N = args.precision
    f0 = parse_jet(_read_text(args.f0), field, names, N)
    f1 = parse_jet(_read_text(args.f1), field, names, N)
    comp_lines = [line for line in _read_text(args.phi).splitlines() if line.strip()]
    phi = CoordinateChange([parse_jet(line, field, names, N) for line in comp_lines])
    quad0, g0 = split_shape(f0)
    quad1, g1 = split_shape(f1)
    if (quad0.variant, quad0.diagonal, quad0.pairs, quad0.tail) != \
            (quad1.variant, quad1.diagonal, quad1.pairs, quad1.tail):
        raise FieldError("f0 and f1 do not share one quadratic normal form")
    problem = TransportProblem(quad0, g0, g1, phi, N)
    if field.char == 2:
        problem = normalize_tail_linear(problem)
    phi_prime = transport(problem)
    verified = phi_prime.apply(problem.g0) == problem.g1
    tail_names = names[problem.rank:]
    payload = {"schema": 1, "command": "transport", "field": field.spec(),
               "precision": N, "rank": problem.rank,
               "g0": serialize_jet(problem.g0, tail_names),
               "g1": serialize_jet(problem.g1, tail_names),
               "change": [serialize_jet(c, tail_names) for c in phi_prime.components],
               "verified": verified}
    lines = [f"rank: {problem.rank}"]
    for name, comp in zip(tail_names, phi_prime.components):
        lines.append(f"change[{name}]: {serialize_jet(comp, tail_names)}")
    lines.append(f"verified: {_bool(verified)}")
    _emit(args, payload, lines)
    return 0 if verified else 1


def _cmd_verify(args):
    with open(args.result, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    field = parse_field_spec(data["field"])
    names = _parse_vars(args.vars)
    N = data["precision"]
    change = CoordinateChange([parse_jet(t, field, names, N) for t in data["change"]])
    residual = parse_jet(data["residual"], field, names, N)
    quad = QuadNormalForm.from_json(field, data["quad"])
    from .jet import Jet

    result = SplitResult(quad, data["rank"], residual, change, N,
                         Jet.zero(field, residual.nvars, N))
    f = parse_jet(args.expr, field, names, N)
    check = verify_split(f, result)
    verified = check.is_zero()
    payload = {"schema": 1, "command": "verify", "verified": verified,
               "difference": serialize_jet(check, names)}
    lines = [f"difference: {serialize_jet(check, names)}",
             f"verified: {_bool(verified)}"]
    _emit(args, payload, lines)
    return 0 if verified else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="jetsplit",
        description="Exact splitting-lemma toolkit for truncated power series.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, precision_default=None, precision_required=False):
        p.add_argument("--field", required=True,
                       help="coefficient field: q | fp:P | f2k:K[:modulus=t..]")
        p.add_argument("--vars", required=True, help="comma-separated variable names")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--precision", type=int, default=precision_default,
                       required=precision_required)

    p = sub.add_parser("split", help="split off the quadratic part")
    common(p, precision_required=True)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("quadform", help="classify the quadratic part")
    common(p, precision_default=2)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_quadform)

    p = sub.add_parser("milnor", help="Milnor number with Nakayama certificate")
    common(p)
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_milnor)

    p = sub.add_parser("determinacy", help="finite determinacy bound")
    common(p)
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_determinacy)

    p = sub.add_parser("norm", help="weighted coefficient norm")
    common(p)
    p.add_argument("--valuation", default="trivial",
                   help="trivial | abs | padic:P")
    p.add_argument("--epsilon", default="", help="comma-separated positive radii")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("ift", help="implicit function theorem solver")
    common(p, precision_required=True)
    p.add_argument("--split-vars", required=True,
                   help="comma-separated names of the unknowns")
    p.add_argument("equation", nargs="+")
    p.set_defaults(func=_cmd_ift)

    p = sub.add_parser("transport", help="move the residual part along an equivalence")
    common(p, precision_required=True)
    p.add_argument("f0", help="file with the source split form")
    p.add_argument("f1", help="file with the target split form")
    p.add_argument("phi", help="file with one change component per line")
    p.set_defaults(func=_cmd_transport)

    p = sub.add_parser("verify", help="re-check a split result file")
    common(p)
    p.add_argument("expr")
    p.add_argument("result", help="JSON file produced by the split command")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AssertionError:
        raise
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
