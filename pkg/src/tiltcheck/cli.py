"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import ptp2
from .bundle_maps import ch3_twist_identity, frobenius_pullback, toric_split_summands
from .chern import (
    ChernVector,
    DegenerateInputError,
    NotDefinedError,
    Polarization,
    beta_bar,
    bg_quantity,
    bms_check,
    delta_bar,
    nabla_bar,
    twist,
    v_vector,
)
from .coh_ring import (
    PRESET_NAMES,
    RingError,
    Threefold,
    load_threefold,
    preset,
)
from .divisor_checks import (
    PreconditionError,
    UndefinedError,
    hodge_chain,
    is_ample,
    neg_divisor_test,
)
from .numbers import QuadExt, format_rational, parse_rational, parse_scalar, to_json_number
from .stability import Grid, central_charge, charge_s, mu_slope, nu_slope, wall_scan
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- parsing

def parse_coords(text: str, n: int, what: str) -> list[Fraction]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        values = [parse_rational(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None
    if len(values) != n:
        raise UsageError(f"{what}: expected {n} coordinates, got {len(values)}")
    return values


_TERM = re.compile(
    r"""\s*(?:
        (?P<pt>pt)
      | O(?:\((?P<twist>[^()]*)\))?(?:\[(?P<shift>-?\d+)\])?
      | ch:(?P<ch>[^+]*)
    )\s*$""",
    re.VERBOSE,
)


def _split_top(text: str) -> list[tuple[int, str]]:
    """Split on '+' outside brackets, keeping each piece's start column."""
    out, depth, start = [], 0, 0
    for i, c in enumerate(text):
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        elif c == "+" and depth == 0:
            out.append((start, text[start:i]))
            start = i + 1
    out.append((start, text[start:]))
    return out


def parse_class(text: str, x: Threefold) -> ChernVector:
    """``O(d1,..)[n]``, ``O``, ``pt``, ``ch:ch0;ch1..;ch2..;ch3`` and sums with '+'."""
    r = x.ring
    total = ChernVector.zero(r)
    for col, piece in _split_top(text):
        m = _TERM.match(piece)
        if not m:
            raise UsageError(f"cannot parse class {text!r} at column {col + 1}")
        if m.group("pt"):
            term = ChernVector.point(r)
        elif m.group("ch") is not None:
            fields = m.group("ch").split(";")
            if len(fields) != 4:
                raise UsageError(f"class {text!r} column {col + 1}: ch: needs 4 ';'-separated parts")
            term = ChernVector.from_coords(
                r,
                parse_coords(fields[0], 1, "ch0")[0],
                parse_coords(fields[1], r.rho, "ch1"),
                parse_coords(fields[2], r.rho_curves, "ch2"),
                parse_coords(fields[3], 1, "ch3")[0],
            )
        else:
            tw = m.group("twist")
            d = r.zero_divisor() if not tw or not tw.strip() else r.divisor(parse_coords(tw, r.rho, "twist"))
            term = ChernVector.exp(d).shift(int(m.group("shift") or 0))
        total = total + term
    return total


def load_ring(spec: str) -> Threefold:
    if spec in PRESET_NAMES:
        return preset(spec)
    if os.path.exists(spec):
        return load_threefold(spec)
    raise UsageError(f"--ring: {spec!r} is neither a preset ({', '.join(PRESET_NAMES)}) nor a file")


def polarization_from(args, x: Threefold) -> Polarization:
    r = x.ring
    if args.H:
        H = r.divisor(parse_coords(args.H, r.rho, "--H"))
    elif x.nef_cone:
        H = r.zero_divisor()
        for g in x.nef_cone:
            H = H + g
    else:
        raise UsageError("--H is required for a ring without a nef cone")
    if x.nef_cone and not is_ample(H, x):
        raise UsageError(f"--H: {H} is not ample on {x.name}")
    B = r.divisor(parse_coords(args.B, r.rho, "--B")) if args.B else r.zero_divisor()
    try:
        alpha = parse_scalar(args.alpha)
    except ValueError as exc:
        raise UsageError(f"--alpha: {exc}") from None
    try:
        return Polarization(H, alpha, B)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------- output

def _num(x):
    if x is None:
        return None
    return to_json_number(x)


def _slope(s):
    return "+inf" if s.is_infinite else _num(s.value)


def _charge(z):
    return {"re": _num(z.re), "im": _num(z.im)}


def emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _echo(args) -> dict:
    keys = ("command", "ring", "H", "alpha", "B", "seed")
    return {k: getattr(args, k, None) for k in keys if getattr(args, k, None) is not None}


# --------------------------------------------------------------- commands

def cmd_presets(args) -> int:
    rows = []
    for name in PRESET_NAMES:
        x = preset(name)
        rows.append({
            "name": name,
            "rho": x.ring.rho,
            "divisor_basis": list(x.ring.divisor_basis),
            "nef_cone": [[format_rational(c) for c in g.coords] for g in x.nef_cone],
            "chi(O_X)": str(x.chi),
        })
    if args.json:
        emit({"command": "presets", "presets": rows}, args)
    else:
        for row in rows:
            print(f"{row['name']:22s} rho={row['rho']}  chi(O_X)={row['chi(O_X)']}  "
                  f"basis={','.join(row['divisor_basis'])}")
    return EXIT_OK


EVAL_QUANTITIES = ("ch", "twist", "v", "mu", "nu", "Z", "Zs", "delta", "nabla", "bg", "beta-bar")


def cmd_eval(args) -> int:
    x = load_ring(args.ring)
    pol = polarization_from(args, x)
    e = parse_class(args.cls, x)
    wanted = args.quantity or list(EVAL_QUANTITIES)
    out = {}
    v = v_vector(e, pol)
    for q in wanted:
        if q == "ch":
            out["ch"] = e.to_dict()
        elif q == "twist":
            out["ch^B"] = twist(e, pol.B).to_dict()
        elif q == "v":
            out["v"] = [_num(c) for c in v.as_tuple()]
        elif q == "mu":
            out["mu"] = _slope(mu_slope(v))
        elif q == "nu":
            out["nu"] = _slope(nu_slope(v))
        elif q == "Z":
            out["Z"] = _charge(central_charge(e, pol))
        elif q == "Zs":
            out["Z_s"] = _charge(charge_s(e, pol.alpha, pol.H, parse_rational(args.s)))
        elif q == "delta":
            out["delta_bar"] = _num(delta_bar(e, pol))
        elif q == "nabla":
            out["nabla_bar"] = _num(nabla_bar(e, pol))
        elif q == "bg":
            out["bg_quantity"] = _num(bg_quantity(e, pol))
        elif q == "beta-bar":
            try:
                out["beta_bar"] = _num(beta_bar(e, pol))
            except (NotDefinedError, DegenerateInputError) as exc:
                out["beta_bar"] = {"error": str(exc)}
    emit({**_echo(args), "class": args.cls, "results": out}, args)
    return EXIT_OK


def cmd_bg_check(args) -> int:
    x = load_ring(args.ring)
    pol = polarization_from(args, x)
    e = parse_class(args.cls, x)
    bg = bg_quantity(e, pol)
    report = {
        **_echo(args),
        "class": args.cls,
        "delta_bar": _num(delta_bar(e, pol)),
        "nabla_bar": _num(nabla_bar(e, pol)),
        "bg_quantity": _num(bg),
        "bg_holds": bg.sign() >= 0,
    }
    ok = report["bg_holds"]
    try:
        res = bms_check(e, pol, exact=not args.interval)
        report["bms"] = {
            "status": res.status,
            "value": _num(res.value),
            "enclosure": _num(res.enclosure),
            "beta_bar": _num(res.beta_bar),
            "note": res.note,
        }
        ok = ok and res.status == "holds"
    except (NotDefinedError, DegenerateInputError) as exc:
        report["bms"] = {"status": "not-defined", "error": str(exc)}
    report["passed"] = ok
    emit(report, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_beta_bar(args) -> int:
    x = load_ring(args.ring)
    pol = polarization_from(args, x)
    e = parse_class(args.cls, x)
    try:
        value = beta_bar(e, pol)
    except (NotDefinedError, DegenerateInputError) as exc:
        emit({**_echo(args), "class": args.cls, "error": str(exc)}, args)
        return EXIT_FAIL
    emit({**_echo(args), "class": args.cls, "beta_bar": _num(value)}, args)
    return EXIT_OK


def _divisor_arg(args, x: Threefold):
    return x.ring.divisor(parse_coords(args.D, x.ring.rho, "--D"))


def cmd_neg_test(args) -> int:
    x = load_ring(args.ring)
    pol = polarization_from(args, x)
    d = _divisor_arg(args, x)
    try:
        res = neg_divisor_test(d, pol.H, x)
    except UndefinedError as exc:
        emit({**_echo(args), "D": args.D, "error": str(exc)}, args)
        return EXIT_FAIL
    emit({
        **_echo(args), "D": args.D, "inequality_holds": res.holds,
        "lhs": format_rational(res.lhs), "rhs": format_rational(res.rhs),
    }, args)
    return EXIT_OK


def cmd_hodge_chain(args) -> int:
    x = load_ring(args.ring)
    pol = polarization_from(args, x)
    d = _divisor_arg(args, x)
    try:
        rep = hodge_chain(d, pol.H, x)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    emit({**_echo(args), "D": args.D, **rep.to_dict()}, args)
    return EXIT_OK if rep.all_hold else EXIT_FAIL


def cmd_frobenius(args) -> int:
    x = load_ring(args.ring)
    e = parse_class(args.cls, x)
    report = {**_echo(args), "class": args.cls, "m": args.m,
              "pullback": frobenius_pullback(e, args.m).to_dict()}
    ok = True
    if args.D:
        ident = ch3_twist_identity(e, _divisor_arg(args, x), args.m, args.q)
        report["twist_identity"] = {
            "q": args.q, "lhs": format_rational(ident.lhs),
            "rhs": format_rational(ident.rhs), "equal": ident.equal,
        }
        ok = ident.equal
    emit(report, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_split(args) -> int:
    degrees = [args.a] if args.b is None else [args.a, args.b]
    res = toric_split_summands(args.case, degrees, args.m)
    emit({"command": "split", **res.to_dict()}, args)
    return EXIT_OK


def cmd_walls(args) -> int:
    x = load_ring(args.ring)
    pol = polarization_from(args, x)
    e, f = parse_class(args.E, x), parse_class(args.F, x)
    grid = Grid(parse_rational(args.alpha_max), parse_rational(args.beta_min),
                parse_rational(args.beta_max), args.steps, args.steps)
    diag = wall_scan(e, f, pol.H, grid)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(diag.to_svg())
    doc = diag.to_dict()
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(diag.to_json() + "\n")
    summary = {
        **_echo(args), "E": args.E, "F": args.F, "conic": doc["conic"],
        "degenerate": diag.degenerate,
        "cells": {str(s): sum(row.count(s) for row in diag.signs) for s in (-1, 0, 1)},
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_ptp2_verify(args) -> int:
    a, b = args.a, args.b
    alpha = parse_scalar(args.alpha)
    s = parse_rational(args.s)
    report = {"command": "ptp2 verify", "a": a, "b": b, "alpha": str(alpha), "s": format_rational(s)}
    report["line_bundle_formulas"] = {
        str(item): [c.to_dict() for c in ptp2.lemma_chcomp_report(a, b, *item.twist)]
        for item in ptp2.COLLECTION
    }
    report["alpha0"] = {
        conv: {
            "value": _num(ptp2.alpha0(a, b, conv)),
            "alpha_below": (alpha * alpha) < ptp2.alpha0_squared(a, b, conv),
        }
        for conv in ptp2.CONVENTIONS
    }
    report["alpha0_bounds"] = {
        conv: {k: format_rational(v) for k, v in ptp2.alpha0_bounds(a, b, conv).items()}
        for conv in ptp2.CONVENTIONS
    }
    verdict = {}
    for conv in ptp2.CONVENTIONS:
        membership = {
            f"O{t}[{n}]": ptp2.heart_membership(*t, n, a, b, alpha, conv)
            for t, n in ptp2.PROOF_PLACEMENT.items()
        }
        cone = ptp2.charge_cone_check(a, b, alpha, s, conv)
        verdict[conv] = {
            "heart_membership": membership,
            "charge_cone": cone.to_dict(),
            "passed": all(v == "in_heart" for v in membership.values()) and cone.holds,
        }
    report["conventions"] = verdict
    report["point_dimension_vector"] = list(ptp2.decompose_skyscraper())
    r = ptp2.threefold().ring
    o = ChernVector.exp(r.zero_divisor())
    report["euler"] = {
        "chi(O)": format_rational(ptp2.euler_pairing(o, o)),
        "chi(O, O(1,0))": format_rational(ptp2.euler_pairing(o, ptp2.ch_line_bundle(1, 0))),
    }
    emit(report, args)
    return EXIT_OK if verdict["ring"]["passed"] else EXIT_FAIL


def cmd_verify_all(args) -> int:
    custom = None
    if args.ring and args.ring not in PRESET_NAMES:
        custom = load_ring(args.ring)
    results = run_suite(args.suite, seed=args.seed, custom=custom)
    stream = sys.stderr if args.json == "-" else sys.stdout
    for res in results:
        print(res.line(), file=stream)
        if res.number == 0 and not res.passed:
            for name, problems in res.details["diagnostics"].items():
                for problem in problems:
                    print(f"      {name}: {problem}", file=stream)
    ok = all(r.ok for r in results)
    doc = {
        "command": "verify-all",
        "suite": args.suite,
        "seed": args.seed,
        "passed": ok,
        "criteria": [r.to_dict() for r in results],
    }
    if args.json:
        text = json.dumps(doc, indent=2, sort_keys=True, default=str)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# ----------------------------------------------------------------- parser

def _common(ring: str | None = "P3", alpha: str = "1") -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default=ring, help="preset name or path to a ring JSON file")
    common.add_argument("--H", help="polarization class, comma-separated coordinates")
    common.add_argument("--alpha", default=alpha, help='"p/q", "sqrt(p/q)" or "li-threshold"')
    common.add_argument("--B", help="B-field, comma-separated coordinates")
    common.add_argument("--json", help="also write the report to this path")
    common.add_argument("--svg", help="write an SVG diagram to this path (walls)")
    common.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiltcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("presets", parents=[_common()], help="list preset threefolds")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("eval", parents=[_common()], help="evaluate slopes, charges and discriminants")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--quantity", action="append", choices=EVAL_QUANTITIES)
    p.add_argument("--s", default="1/18", help="s for Z_{alpha,0,s}")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bg-check", parents=[_common()], help="both BG-type inequalities for a class")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--interval", action="store_true", help="decide the ch3 inequality from an enclosure")
    p.set_defaults(func=cmd_bg_check)

    p = sub.add_parser("beta-bar", parents=[_common()], help="exact beta-bar of a class")
    p.add_argument("--class", dest="cls", required=True)
    p.set_defaults(func=cmd_beta_bar)

    p = sub.add_parser("neg-test", parents=[_common()], help="the negativity inequality for a divisor")
    p.add_argument("--D", required=True)
    p.set_defaults(func=cmd_neg_test)

    p = sub.add_parser("hodge-chain", parents=[_common()], help="inequalities (h1)-(h5) for a nef divisor")
    p.add_argument("--D", required=True)
    p.set_defaults(func=cmd_hodge_chain)

    p = sub.add_parser("frobenius", parents=[_common()], help="pullback action and the ch3 twist identity")
    p.add_argument("--class", dest="cls", default="O")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--D", help="divisor for the twist identity")
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("split", parents=[_common()], help="toric Frobenius splitting summands")
    p.add_argument("--case", required=True, choices=["p1a", "p2c", "p1p1c"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("walls", parents=[_common()], help="wall between two classes in the (alpha, beta)-plane")
    p.add_argument("--E", required=True)
    p.add_argument("--F", required=True)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--alpha-max", default="2")
    p.add_argument("--beta-min", default="-2")
    p.add_argument("--beta-max", default="2")
    p.set_defaults(func=cmd_walls)

    p = sub.add_parser("ptp2", help="checks on P(T_P2)")
    psub = p.add_subparsers(dest="ptp2_command", required=True)
    q = psub.add_parser("verify", parents=[_common(alpha="1/3")], help="hearts, charges and decomposition report")
    q.add_argument("--a", type=int, default=1)
    q.add_argument("--b", type=int, default=2)
    q.add_argument("--s", default="1/18")
    q.set_defaults(func=cmd_ptp2_verify)

    p = sub.add_parser("verify-all", parents=[_common(ring=None)], help="run the regression suite")
    p.add_argument("--suite", default="all", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
