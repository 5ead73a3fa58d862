"""Command-line front end.

Exit status: 0 when every check in the run passes, 1 when a check fails,
2 on a configuration error (bad descriptor, flag or input file).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import checks
from .angles import ArcError, format_angle, parse_angle, rational_in_arc
from .circular import MODELS, density_witness, parse_sample
from .formulas import BUILTIN_TEXT, FormulaError, builtin, evaluate, parse, reduct, to_text
from .fraisse import ef_game, enumerate_up_to_iso, extend_partial_iso, is_ultrahomogeneous
from .random_structures import WitnessQuery, find_witness, parse_presentation, prefix
from .structures import FinStructure, chain, cycle3, empty, from_json, to_dot, to_json, wreath

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _range(text: str) -> list[int]:
    """``"0..7"`` (inclusive) or ``"1,4,5"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"bad integer range {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def load_structure(desc: str) -> FinStructure:
    """Structure descriptors.

    ``C3``, ``chain:<n>``, ``empty:<n>``, ``prefix:<presentation>:<n>``,
    ``order:<model>:<sample>`` / ``arrow:<model>:<sample>`` for circle samples,
    ``wreath:<outer>|<inner>`` or a path to a JSON structure file.
    """
    try:
        if desc == "C3":
            return cycle3()
        if desc.startswith("chain:"):
            return chain(int(desc[6:]))
        if desc.startswith("empty:"):
            return empty(int(desc[6:]))
        if desc.startswith("prefix:"):
            body, _, n = desc[7:].rpartition(":")
            return prefix(parse_presentation(body), int(n))
        if desc.startswith(("order:", "arrow:")):
            kind, model, sample = desc.split(":", 2)
            D = parse_sample(sample, model)
            return D.order_structure() if kind == "order" else D.arrow_structure()
        if desc.startswith("wreath:"):
            outer, inner = desc[7:].split("|")
            return wreath(load_structure(outer), load_structure(inner))
        path = Path(desc)
        if path.exists():
            return from_json(path.read_text())
    except (ValueError, ArcError) as exc:
        raise ConfigError(f"bad structure descriptor {desc!r}: {exc}") from None
    raise ConfigError(f"unknown structure descriptor {desc!r}")


def _load_formula(text: str):
    if text in BUILTIN_TEXT:
        return builtin(text)
    try:
        return parse(text)
    except FormulaError as exc:
        raise ConfigError(str(exc)) from None


def _assignment(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items or []:
        try:
            name, val = item.split("=")
            out[name.strip()] = int(val)
        except ValueError:
            raise ConfigError(f"bad assignment {item!r}; use name=vertex") from None
    return out


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_structure(args, X: FinStructure, name="X"):
    if args.format == "dot":
        _emit(args, to_dot(X, name))
    elif args.format == "text":
        _emit(args, f"{X!r}\n")
    else:
        _emit(args, json.dumps(to_json(X), sort_keys=True) + "\n")


def _emit_report(args, report: dict) -> int:
    _emit(args, checks.dumps(report))
    return EXIT_OK if report.get("pass", True) else EXIT_FAIL


# --- subcommands -------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.what == "prefix":
        if not args.of or args.n is None:
            raise ConfigError("gen prefix needs --of and --n")
        try:
            X = prefix(parse_presentation(args.of), args.n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        _emit_structure(args, X, "P")
    elif args.what == "wreath":
        if not args.outer or not args.inner:
            raise ConfigError("gen wreath needs --outer and --inner")
        try:
            X = wreath(load_structure(args.outer), load_structure(args.inner))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        _emit_structure(args, X, "W")
    else:
        if args.n is None or args.kind is None:
            raise ConfigError("gen enumerate needs --kind and --n")
        try:
            reps = enumerate_up_to_iso(args.n, args.kind)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if args.format == "dot":
            _emit(args, "".join(to_dot(X, f"X{i}") for i, X in enumerate(reps)))
        else:
            _emit(args, json.dumps({"schema": checks.SCHEMA, "kind": args.kind, "n": args.n,
                                    "count": len(reps), "structures": [to_json(X) for X in reps]},
                                   sort_keys=True) + "\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    X = load_structure(args.structure)
    f = _load_formula(args.formula)
    try:
        value = evaluate(X, f, _assignment(args.assign))
    except (FormulaError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    _emit(args, json.dumps({"formula": to_text(f), "value": value}) + "\n")
    return EXIT_OK


def cmd_reduct(args) -> int:
    X = load_structure(args.structure)
    f = _load_formula(args.formula)
    try:
        Y = reduct(X, f)
    except FormulaError as exc:
        raise ConfigError(str(exc)) from None
    _emit_structure(args, Y, "R")
    return EXIT_OK


def cmd_check(args) -> int:
    name = args.suite
    kw: dict = {}
    if name in ("transfer", "roundtrip") and args.graph:
        kw["graph"] = args.graph
    if name == "transfer":
        if args.max_h is not None:
            kw["max_h"] = args.max_h
        if args.universe:
            kw["universe"] = _range(args.universe)
        if args.vmax is not None:
            kw["vmax"] = args.vmax
    if name == "roundtrip" and args.below is not None:
        kw["below"] = args.below
    if name == "extension":
        if args.of:
            kw["presentations"] = tuple(args.of)
        if args.max_h is not None:
            kw["max_h"] = args.max_h
        if args.universe:
            kw["universe"] = _range(args.universe)
        if args.budget is not None:
            kw["budget"] = args.budget
        if args.witnesses is not None:
            kw["witnesses"] = args.witnesses
    if name in ("s2", "s3"):
        if args.sample:
            kw["sample"] = args.sample
        if args.per_case is not None:
            kw["per_case"] = args.per_case
        if args.seed is not None:
            kw["density_seed"] = args.seed
    if name == "fraisse" and args.max_size is not None:
        kw["max_size"] = args.max_size
    if name == "formulas" and args.seed is not None:
        kw["seed"] = args.seed
    if name == "ultrahomogeneous":
        X = load_structure(args.structure or "")
        ok, cex = is_ultrahomogeneous(X)
        return _emit_report(args, {"schema": checks.SCHEMA, "check": "ultrahomogeneous",
                                   "structure": to_json(X), "counterexample": cex, "pass": ok})
    try:
        report = checks.run_suite(name, **kw)
    except (ValueError, ArcError) as exc:
        raise ConfigError(str(exc)) from None
    return _emit_report(args, report)


def cmd_witness(args) -> int:
    if args.what == "extension":
        try:
            P = parse_presentation(args.of or "bit")
            H = _range(args.H or "")
            K = _range(args.K or "")
            q = WitnessQuery.make(H, K, args.budget, args.high)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        rep = find_witness(P, q, args.count)
        _emit(args, json.dumps(rep.to_json(), sort_keys=True) + "\n")
        return EXIT_OK if rep.witness is not None else EXIT_FAIL
    if args.x is None or args.y is None:
        raise ConfigError(f"witness {args.what} needs --x and --y")
    if args.what == "density":
        try:
            z = density_witness(Fraction(args.x), Fraction(args.y), args.target or "A", args.model)
        except (ValueError, ArcError) as exc:
            raise ConfigError(str(exc)) from None
        _emit(args, json.dumps({"model": args.model, "x": args.x, "y": args.y,
                                "target": args.target, "witness": str(z)}) + "\n")
        return EXIT_OK
    try:
        s, t = parse_angle(args.x), parse_angle(args.y)
        flt = (args.model, args.target) if args.target else None
        z = rational_in_arc(s, t, flt)
    except (ValueError, ArcError) as exc:
        raise ConfigError(str(exc)) from None
    _emit(args, json.dumps({"from": format_angle(s), "to": format_angle(t), "witness": str(z)}) + "\n")
    return EXIT_OK


def cmd_game(args) -> int:
    X = load_structure(args.left)
    Y = load_structure(args.right)
    if args.rounds < 0:
        raise ConfigError("rounds must be non-negative")
    winner = ef_game(X, Y, args.rounds)
    _emit(args, json.dumps({"game": "ef", "rounds": args.rounds, "winner": winner}) + "\n")
    return EXIT_OK


def cmd_extend(args) -> int:
    X = load_structure(args.left)
    Y = load_structure(args.right)
    try:
        p = {int(k): v for k, v in _assignment(args.pair).items()}
        q = extend_partial_iso(X, Y, p, args.vertex)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(args, json.dumps({"extension": None if q is None else sorted(q.items())}) + "\n")
    return EXIT_OK if q is not None else EXIT_FAIL


def cmd_export(args) -> int:
    if args.sample:
        try:
            D = parse_sample(args.sample, args.model)
        except (ValueError, ArcError) as exc:
            raise ConfigError(str(exc)) from None
        if args.format == "json":
            _emit(args, json.dumps({"model": D.model, "points": [str(p) for p in D.points],
                                    "classes": list(D.classes),
                                    "order": [str(p) for p in D.sorted_points()]}, sort_keys=True) + "\n")
        else:
            _emit(args, D.to_dot())
        return EXIT_OK
    if not args.structure:
        raise ConfigError("export needs --structure or --sample")
    _emit_structure(args, load_structure(args.structure))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ultrahom", description="Exact experiments with ultrahomogeneous "
                                "tournaments, digraphs and their finite shadows.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="construct structures")
    g.add_argument("what", choices=("prefix", "wreath", "enumerate"))
    g.add_argument("--of", help="presentation descriptor: bit, rand:<seed>, transfer(<desc>)")
    g.add_argument("--n", type=int)
    g.add_argument("--outer")
    g.add_argument("--inner")
    g.add_argument("--kind", choices=("graph", "tournament", "digraph"))
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", parents=[common], help="evaluate a formula on a structure")
    e.add_argument("--structure", required=True)
    e.add_argument("--formula", required=True, help="formula text or builtin name")
    e.add_argument("--assign", nargs="*", help="u=0 v=3 ...")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("reduct", parents=[common], help="definable reduct by a formula in u, v")
    r.add_argument("--structure", required=True)
    r.add_argument("--formula", required=True)
    r.set_defaults(func=cmd_reduct)

    c = sub.add_parser("check", parents=[common], help="run a check suite")
    c.add_argument("suite", choices=sorted(checks.SUITES) + ["ultrahomogeneous"])
    c.add_argument("--graph")
    c.add_argument("--of", action="append", help="presentation (repeatable)")
    c.add_argument("--max-h", type=int)
    c.add_argument("--universe")
    c.add_argument("--vmax", type=_positive)
    c.add_argument("--below", type=_positive)
    c.add_argument("--budget", type=_positive)
    c.add_argument("--witnesses", type=_positive)
    c.add_argument("--sample")
    c.add_argument("--per-case", type=_positive)
    c.add_argument("--seed", type=int)
    c.add_argument("--max-size", type=_positive)
    c.add_argument("--structure")
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("witness", parents=[common], help="extension, density or arc witnesses")
    w.add_argument("what", choices=("extension", "density", "arc"))
    w.add_argument("--of")
    w.add_argument("--H")
    w.add_argument("--K")
    w.add_argument("--budget", type=_positive)
    w.add_argument("--high", action="store_true")
    w.add_argument("--count", type=_positive, default=1)
    w.add_argument("--x", help="angle a+b*pi")
    w.add_argument("--y", help="angle a+b*pi")
    w.add_argument("--model", choices=MODELS, default="S2")
    w.add_argument("--target")
    w.set_defaults(func=cmd_witness)

    gm = sub.add_parser("game", parents=[common], help="back-and-forth games")
    gm.add_argument("which", choices=("ef", "extend"))
    gm.add_argument("--left", required=True)
    gm.add_argument("--right", required=True)
    gm.add_argument("--rounds", type=int, default=3)
    gm.add_argument("--pair", nargs="*", help="partial isomorphism as x=y pairs (extend)")
    gm.add_argument("--vertex", type=int, default=0)
    gm.set_defaults(func=lambda a: cmd_game(a) if a.which == "ef" else cmd_extend(a))

    x = sub.add_parser("export", parents=[common], help="serialise a structure or circle sample")
    x.add_argument("--structure")
    x.add_argument("--sample")
    x.add_argument("--model", choices=MODELS, default="S2")
    x.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        env = os.environ.get("FORGE_PI_PRECISION")
        if env and not (env.isdigit() and int(env) > 0):
            raise ConfigError(f"FORGE_PI_PRECISION must be a positive digit count, got {env!r}")
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": "config", "message": str(exc)}) + "\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
