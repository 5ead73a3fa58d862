"""Check suites behind ``ultrahom check``.

Every suite returns a plain dict that serialises to deterministic JSON: no
timings, no set iteration order, rationals as strings.  The top-level
``"schema"`` field versions the layout.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from .angles import CLASSES, class_of, in_ccw_arc, rotate
from .circular import (
    CircSample,
    density_witness,
    order,
    order_axioms_check,
    parse_sample,
    relation_check,
    seeded_rationals,
)
from .formulas import BUILTIN_TEXT, builtin, compile_formula, parse, reduct, to_text
from .fraisse import (
    FiniteClass,
    are_isomorphic,
    automorphisms,
    canonical_form,
    check_class_properties,
    enumerate_up_to_iso,
    is_ultrahomogeneous,
    parse_class,
)
from .random_structures import (
    check_extension_property,
    graph_to_tournament,
    parse_presentation,
    tournament_to_graph,
    transfer_invariant,
)
from .structures import FinStructure, chain, classify, empty, induced, to_json, unrelated_pairs, wreath

SCHEMA = "ultrahom.report/1"

__all__ = [
    "SCHEMA",
    "SUITES",
    "dumps",
    "run_suite",
    "suite_extension",
    "suite_formulas",
    "suite_fraisse",
    "suite_roundtrip",
    "suite_s2",
    "suite_s3",
    "suite_transfer",
    "suite_wreath",
]


def _report(check: str, params: dict, results: dict) -> dict:
    ok = all(r.get("pass", True) for r in results.values() if isinstance(r, dict))
    return {"schema": SCHEMA, "check": check, "params": params, "results": results, "pass": ok}


def dumps(report: dict) -> str:
    """Canonical JSON text; identical reports give identical bytes."""
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


# --- presentations ---------------------------------------------------------------

def suite_transfer(graph: str = "bit", max_h: int = 3, universe=range(8), vmax: int = 2 ** 11) -> dict:
    G = parse_presentation(graph)
    rep = transfer_invariant(G, universe, max_h, vmax)
    return _report("transfer", {"graph": graph, "max_h": max_h, "universe": list(universe), "vmax": vmax},
                   {"invariant": rep})


def suite_roundtrip(graph: str = "bit", below: int = 2 ** 10) -> dict:
    G = parse_presentation(graph)
    back = tournament_to_graph(graph_to_tournament(G))
    mismatches = []
    pairs = 0
    for m in range(below):
        for n in range(below):
            if m != n:
                pairs += 1
                if back(m, n) != G(m, n):
                    mismatches.append([m, n])
    res = {"pairs": pairs, "mismatches": mismatches[:20], "mismatch_count": len(mismatches),
           "pass": not mismatches}
    return _report("roundtrip", {"graph": graph, "below": below}, {"roundtrip": res})


def suite_extension(presentations=("bit", "transfer(bit)"), max_h: int = 3, universe=range(10),
                    budget: int = 2 ** 12, witnesses: int = 3) -> dict:
    results = {}
    for desc in presentations:
        rep = check_extension_property(parse_presentation(desc), max_h, universe, budget, witnesses)
        results[desc] = rep
    return _report("extension", {"presentations": list(presentations), "max_h": max_h,
                                 "universe": list(universe), "budget": budget, "witnesses": witnesses},
                   results)


# --- circle models ---------------------------------------------------------------

def _matrix_equal(a: np.ndarray, b: np.ndarray) -> dict:
    diff = np.argwhere(a != b)
    return {"mismatches": int(len(diff)), "first": [int(v) for v in diff[0]] if len(diff) else None,
            "pass": len(diff) == 0}


def _class_pairs(model: str, seed: int, per_case: int) -> dict[tuple[str, str], list]:
    """``per_case`` seeded pairs x < y (defined order) for every class pair."""
    rng = random.Random(seed)
    names = CLASSES[model]
    want = {(a, b): [] for a in names for b in names}
    seen = set()
    while any(len(v) < per_case for v in want.values()):
        x = Fraction(rng.randint(-200, 200), rng.randint(1, 32))
        y = Fraction(rng.randint(-200, 200), rng.randint(1, 32))
        if x == y or (x, y) in seen:
            continue
        seen.add((x, y))
        if not order(x, y, model):
            x, y = y, x
        key = (class_of(x, model), class_of(y, model))
        if len(want[key]) < per_case:
            want[key].append((x, y))
    return want


def _density_results(model: str, seed: int, per_case: int) -> dict:
    cases = _class_pairs(model, seed, per_case)
    out = {}
    failures = []
    for (cx, cy), pairs in sorted(cases.items()):
        sample = []
        for x, y in pairs:
            for target in CLASSES[model]:
                try:
                    z = density_witness(x, y, target, model)
                except (AssertionError, ValueError) as exc:
                    failures.append({"x": str(x), "y": str(y), "target": target, "error": str(exc)})
                    continue
                if len(sample) < 3:
                    sample.append({"x": str(x), "y": str(y), "target": target, "z": str(z)})
        out[f"{cx}{cy}"] = {"pairs": len(pairs), "examples": sample}
    return {"cases": out, "failures": failures, "pass": not failures}


def _within_class(D: CircSample) -> dict:
    """The arrow restricted to each class is a linear order."""
    out = {}
    arr = D.arrow_matrix
    for name in CLASSES[D.model]:
        idx = [i for i, c in enumerate(D.classes) if c == name]
        rep = relation_check(arr[np.ix_(idx, idx)])
        out[name] = {"size": len(idx), "pass": rep["pass"], "violation": rep["violation"]}
    return {"classes": out, "pass": all(v["pass"] for v in out.values())}


def _adversarial(model: str, extra: int = 8, seed: int = 0) -> dict:
    pts = (Fraction(0), Fraction(3)) + tuple(p for p in seeded_rationals(seed, extra + 2) if p not in (0, 3))[:extra]
    D = CircSample(pts, model)
    rep = order_axioms_check(D, relation="arrow")
    return {"points": [str(p) for p in pts], "total": rep["total"], "axioms": rep}


def suite_s2(sample: str = "seed:7:200", density_seed: int = 11, per_case: int = 100) -> dict:
    D = parse_sample(sample, "S2")
    axioms = order_axioms_check(D)
    lam = reduct(D.arrow_structure(), builtin("lambda2")).matrix()
    adv2 = _adversarial("S2")
    adv3 = _adversarial("S3")
    adversarial = {"S2": adv2, "S3": adv3, "pass": adv2["total"] and not adv3["total"]}
    results = {
        "order_axioms": axioms,
        "lambda_reduct": _matrix_equal(lam, D.order_matrix),
        "within_class": _within_class(D),
        "density": _density_results("S2", density_seed, per_case),
        "adversarial": adversarial,
    }
    return _report("s2", {"sample": sample, "density_seed": density_seed, "per_case": per_case}, results)


def _partition(D: CircSample) -> dict:
    arr = D.arrow_matrix
    n = len(D)
    eq = np.eye(n, dtype=bool)
    par = ~arr & ~arr.T & ~eq
    counts = eq.astype(int) + arr + arr.T + par
    bad = np.argwhere(counts != 1)
    # (C x A) u (B x C) u (A x B) carries no reversed arrows
    law = {("C", "A"), ("B", "C"), ("A", "B")}
    cls = D.classes
    law_bad = [[i, j] for i in range(n) for j in range(n)
               if (cls[i], cls[j]) in law and arr[j, i]]
    return {"cells": int(n * n), "bad_cells": int(len(bad)), "law_violations": len(law_bad),
            "first_law_violation": law_bad[0] if law_bad else None,
            "pass": len(bad) == 0 and not law_bad}


def _geometry(D: CircSample) -> dict:
    """x -> y iff y lies on the arc from x to r(x); x || y iff y lies on the arc from r(x) to r^2(x)."""
    arr = D.arrow_matrix
    bad = []
    for i, x in enumerate(D.points):
        rx, r2x = rotate(x), rotate(x, 2)
        for j, y in enumerate(D.points):
            if i == j:
                continue
            fwd = in_ccw_arc(y, x, rx)
            par = in_ccw_arc(y, rx, r2x)
            if fwd != bool(arr[i, j]) or par != (not arr[i, j] and not arr[j, i]):
                bad.append([str(x), str(y)])
    return {"violations": len(bad), "first": bad[0] if bad else None, "pass": not bad}


def suite_s3(sample: str = "seed:7:200", density_seed: int = 13, per_case: int = 100) -> dict:
    D = parse_sample(sample, "S3")
    axioms = order_axioms_check(D)
    lam = reduct(D.arrow_structure(), builtin("lambda3")).matrix()
    mu = reduct(D.order_structure(), builtin("mu3")).matrix()
    theta = reduct(D.arrow_structure(), builtin("theta")).matrix()
    arr = D.arrow_matrix
    par = ~arr & ~arr.T & ~np.eye(len(D), dtype=bool)
    results = {
        "order_axioms": axioms,
        "lambda_reduct": _matrix_equal(lam, D.order_matrix),
        "mu_reduct": _matrix_equal(mu, arr),
        "theta_reduct": _matrix_equal(theta, par),
        "partition": _partition(D),
        "geometry": _geometry(D),
        "within_class": _within_class(D),
        "density": _density_results("S3", density_seed, per_case),
    }
    return _report("s3", {"sample": sample, "density_seed": density_seed, "per_case": per_case}, results)


# --- finite structures -------------------------------------------------------------

def suite_fraisse(max_size: int = 3) -> dict:
    counts = {
        "tournament": [len(enumerate_up_to_iso(n, "tournament")) for n in range(1, 5)],
        "graph_3": len(enumerate_up_to_iso(3, "graph")),
    }
    counts["pass"] = counts["tournament"] == [1, 1, 2, 4] and counts["graph_3"] == 4
    tour = check_class_properties(parse_class(f"tournaments:{max_size + 1}"), max_size)
    graphs = check_class_properties(parse_class(f"graphs:{max_size + 1}"), max_size)
    single = check_class_properties(FiniteClass([chain(3)], name="{3-chain}"), 3)
    singleton = {"hereditary": single["hereditary"], "pass": not single["hereditary"]["pass"]}
    uh = {}
    for name, X in (("C3", FinStructure(3, frozenset({(0, 1), (1, 2), (2, 0)}))), ("chain3", chain(3))):
        ok, cex = is_ultrahomogeneous(X)
        uh[name] = {"ultrahomogeneous": ok, "counterexample": cex}
    return _report("fraisse", {"max_size": max_size}, {
        "counts": counts,
        "tournaments": tour,
        "graphs": graphs,
        "singleton_class": singleton,
        "ultrahomogeneity": uh,
    })


def _blocks_preserved(W: FinStructure, block_of) -> dict:
    """Every isomorphism between small induced substructures respects the blocks.

    Each substructure's block partition is pushed onto the representative of
    its isomorphism type along one fixed isomorphism.  All isomorphisms
    respect blocks iff the pushed partitions agree within a type and are
    invariant under the representative's automorphisms.
    """
    by_form: dict = {}
    for k in range(1, 5):
        for sub in combinations(range(W.n), k):
            X, verts = induced(W, sub)
            by_form.setdefault(canonical_form(X), []).append((X, verts))
    maps = 0
    for group in by_form.values():
        R, _ = group[0]
        auts = automorphisms(R)
        maps += len(auts) * len(group) ** 2
        pushed = None
        for X, vx in group:
            sigma = are_isomorphic(X, R)
            same = frozenset((sigma[a], sigma[b]) for a in range(X.n) for b in range(X.n)
                             if block_of(vx[a]) == block_of(vx[b]))
            if pushed is None:
                pushed = same
                bad = next((g for g in auts if {(g[a], g[b]) for a, b in same} != same), None)
                if bad is not None:
                    return {"isomorphisms": maps, "counterexample": {"domain": vx, "automorphism": list(bad)},
                            "pass": False}
            elif same != pushed:
                return {"isomorphisms": maps, "counterexample": {"domain": vx, "image": group[0][1]},
                        "pass": False}
    return {"isomorphisms": maps, "counterexample": None, "pass": True}


def suite_wreath(block: int = 3) -> dict:
    small = [X for n in range(1, 5) for X in enumerate_up_to_iso(n, "tournament")]
    unit = []
    for X in small:
        unit.append({"tournament": to_json(X), "isomorphic": are_isomorphic(wreath(X, empty(1)), X) is not None})
    identity = {"tournaments": len(small), "pass": len(small) == 8 and all(u["isomorphic"] for u in unit),
                "cases": unit}
    wreaths = {}
    for idx, T in enumerate(enumerate_up_to_iso(4, "tournament")):
        W = wreath(T, empty(block))
        pairs = unrelated_pairs(W)
        rel = {(u, v) for u, v in pairs} | {(v, u) for u, v in pairs} | {(u, u) for u in range(W.n)}
        transitive = all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)
        blocks = sorted({tuple(sorted(v for v in range(W.n) if (u, v) in rel)) for u in range(W.n)})
        eq = {"transitive": transitive, "blocks": [list(b) for b in blocks],
              "pass": transitive and len(blocks) == T.n and all(len(b) == block for b in blocks)}
        iso = _blocks_preserved(W, lambda v: v // block)
        wreaths[f"T{idx}"] = {
            "tournament": to_json(T),
            "kind": classify(W),
            "equivalence": eq,
            "block_preservation": iso,
            "pass": eq["pass"] and iso["pass"] and classify(W) == "digraph",
        }
    wreaths["pass"] = all(v["pass"] for v in wreaths.values() if isinstance(v, dict))
    return _report("wreath", {"block": block}, {"unit": identity, "wreaths": wreaths})


def _absoluteness(X: FinStructure, f, subsets: int, rng: random.Random) -> dict:
    g = compile_formula(f)
    checked = 0
    bad = None
    for _ in range(subsets):
        k = rng.randint(1, X.n)
        W = sorted(rng.sample(range(X.n), k))
        Y, verts = induced(X, W)
        for i in range(Y.n):
            for j in range(Y.n):
                checked += 1
                if g(Y, {"u": i, "v": j}) != g(X, {"u": verts[i], "v": verts[j]}):
                    bad = bad or {"subset": W, "u": verts[i], "v": verts[j]}
    return {"subsets": subsets, "assignments": checked, "counterexample": bad, "pass": bad is None}


def suite_formulas(seed: int = 5, size: int = 30, subsets: int = 50) -> dict:
    printed = {}
    for name, text in sorted(BUILTIN_TEXT.items()):
        canon = to_text(parse(text))
        printed[name] = {"text": canon, "pass": to_text(parse(canon)) == canon and parse(canon) == parse(text)}
    printed["pass"] = all(v["pass"] for v in printed.values() if isinstance(v, dict))
    pts = tuple(seeded_rationals(seed, size))
    D2 = CircSample(pts, "S2")
    D3 = CircSample(pts, "S3")
    rng = random.Random(seed)
    absolute = {
        "lambda2": _absoluteness(D2.arrow_structure(), builtin("lambda2"), subsets, rng),
        "lambda3": _absoluteness(D3.arrow_structure(), builtin("lambda3"), subsets, rng),
        "mu3": _absoluteness(D3.order_structure(), builtin("mu3"), subsets, rng),
    }
    absolute["pass"] = all(v["pass"] for v in absolute.values() if isinstance(v, dict))
    return _report("formulas", {"seed": seed, "size": size, "subsets": subsets},
                   {"print_parse": printed, "absoluteness": absolute})


SUITES = {
    "transfer": suite_transfer,
    "roundtrip": suite_roundtrip,
    "extension": suite_extension,
    "s2": suite_s2,
    "s3": suite_s3,
    "fraisse": suite_fraisse,
    "wreath": suite_wreath,
    "formulas": suite_formulas,
}


def run_suite(name: str, **kwargs) -> dict:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown check {name!r}; choose from {sorted(SUITES)}") from None
    return fn(**kwargs)
