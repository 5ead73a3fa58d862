"""The circular digraphs S(2) and S(3) on rational angles, and the linear orders they define.

In S(2) the circle is split into a left part A and a right part B; keeping
the arrow inside a part and reversing it across parts gives the linear
order rho.  In S(3) there are three parts A, B, C and the order tau keeps
the arrow inside a part, reverses it on (A, C), (C, B), (B, A) and uses
incomparability on (C, A), (B, C), (A, B).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .angles import (
    CLASSES,
    GenAngle,
    antipode,
    canonicalize,
    class_of,
    rational_in_arc,
    rotate,
    s2_arrow,
    s3_arrow,
    shorter_arc_ccw,
)
from .formulas import Exists, evaluate, free_variables, is_quantifier_free, parse
from .structures import FinStructure, Signature

__all__ = [
    "CircSample",
    "S2_WITNESS_PATTERNS",
    "S3_WITNESS_PATTERNS",
    "arrow",
    "density_closure",
    "density_witness",
    "order",
    "order_axioms_check",
    "parse_sample",
    "qn_label",
    "relation_check",
    "rho",
    "seeded_rationals",
    "stern_brocot_depth",
    "tarski_vaught_check",
    "tau",
    "trim_endpoints",
]

MODELS = ("S2", "S3")


def _check_model(model: str):
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, not {model!r}")


def arrow(x, y, model: str) -> bool:
    _check_model(model)
    return s2_arrow(x, y) if model == "S2" else s3_arrow(x, y)


def rho(q1, q2) -> bool:
    """The linear order of S(2): arrow kept inside A and B, reversed across."""
    c1, c2 = class_of(q1, "S2"), class_of(q2, "S2")
    if c1 == c2:
        return s2_arrow(q1, q2)
    return s2_arrow(q2, q1)


# (class of x, class of y) -> how tau relates to the arrow of S(3)
_TAU_RULE = {
    ("A", "C"): "reversed", ("C", "B"): "reversed", ("B", "A"): "reversed",
    ("C", "A"): "parallel", ("B", "C"): "parallel", ("A", "B"): "parallel",
}


def tau(q1, q2) -> bool:
    """The linear order of S(3) given by its three-clause definition."""
    c1, c2 = class_of(q1, "S3"), class_of(q2, "S3")
    if c1 == c2:
        return s3_arrow(q1, q2)
    if _TAU_RULE[(c1, c2)] == "reversed":
        return s3_arrow(q2, q1)
    return q1 != q2 and not s3_arrow(q1, q2) and not s3_arrow(q2, q1)


def order(x, y, model: str) -> bool:
    _check_model(model)
    return rho(x, y) if model == "S2" else tau(x, y)


# --- density witnesses ---------------------------------------------------------

def _arc_for_target_a(x: GenAngle, y: GenAngle, model: str) -> tuple[GenAngle, GenAngle]:
    """Endpoints of the shorter arc holding points of A between x and y.

    One row per class pair, read off the case analysis of the density
    argument (a = antipode, r = rotation by 2*pi/3).
    """
    cx, cy = class_of(x, model), class_of(y, model)
    a = antipode
    r = rotate

    def r2(p):
        return rotate(p, 2)

    if model == "S2":
        table = {
            ("A", "A"): (x, y),
            ("B", "B"): (a(x), a(y)),
            ("A", "B"): (x, a(y)),
            ("B", "A"): (a(x), y),
        }
    else:
        table = {
            ("A", "A"): (x, y),
            ("B", "B"): (r2(x), r2(y)),
            ("C", "C"): (r(x), r(y)),
            ("A", "B"): (x, r2(y)),
            ("A", "C"): (x, r(y)),
            ("B", "C"): (r2(x), r(y)),
            ("B", "A"): (r2(x), y),
            ("C", "A"): (r(x), y),
            ("C", "B"): (r(x), r2(y)),
        }
    return table[(cx, cy)]


def _symmetry(model: str, target: str):
    """Circle map sending class A to ``target`` and preserving the defined order."""
    k = CLASSES[model].index(target)
    if model == "S2":
        return (lambda p: antipode(p)) if k else (lambda p: p)
    return lambda p: rotate(p, k)


def density_witness(x, y, target: str, model: str) -> Fraction:
    """A rational z of class ``target`` with x < z < y in the defined order.

    Requires x before y.  The arc comes from the class-pair table for target
    A; other targets are handled by the rotation (S(3)) or antipodal map
    (S(2)) that permutes the classes and preserves the order.
    """
    _check_model(model)
    if target not in CLASSES[model]:
        raise ValueError(f"class {target!r} does not exist in {model}")
    x, y = GenAngle.coerce(x), GenAngle.coerce(y)
    if not order(x, y, model):
        raise ValueError("density_witness needs x before y in the defined order")
    fwd = _symmetry(model, target)
    k = CLASSES[model].index(target)
    if model == "S2":
        back = fwd  # the antipodal map is an involution
    else:
        def back(p):
            return rotate(p, -k)
    s, t = _arc_for_target_a(back(x), back(y), model)
    lo, hi = shorter_arc_ccw(fwd(s), fwd(t))
    z = rational_in_arc(lo, hi, (model, target))
    if not (order(x, z, model) and order(z, y, model) and class_of(z, model) == target):
        raise AssertionError(f"witness {z} failed verification")  # unreachable if the table is right
    return z


# --- samples -------------------------------------------------------------------

def seeded_rationals(seed: int, count: int, max_num: int = 200, max_den: int = 32) -> list[Fraction]:
    """``count`` distinct rationals with |numerator| <= max_num and denominator <= max_den."""
    rng = random.Random(seed)
    out: list[Fraction] = []
    seen = set()
    while len(out) < count:
        q = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def _build_matrix(points: Sequence[Fraction], rel) -> np.ndarray:
    n = len(points)
    m = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            if i != j:
                m[i, j] = rel(points[i], points[j])
    return m


@dataclass(frozen=True, eq=False)
class CircSample:
    """A finite set of points of S together with the model's relations on it."""

    points: tuple[Fraction, ...]
    model: str = "S2"
    checked: bool = field(default=True, repr=False)

    def __post_init__(self):
        _check_model(self.model)
        pts = tuple(Fraction(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("sample points must be distinct")
        object.__setattr__(self, "points", pts)
        if self.checked:
            rep = relation_check(self.order_matrix)
            if not rep["pass"]:
                raise ValueError(f"defined order is not linear on the sample: {rep}")

    def __len__(self):
        return len(self.points)

    @cached_property
    def classes(self) -> tuple[str, ...]:
        return tuple(class_of(p, self.model) for p in self.points)

    @cached_property
    def label_indices(self) -> tuple[int, ...]:
        names = CLASSES[self.model]
        return tuple(names.index(c) for c in self.classes)

    @cached_property
    def arrow_matrix(self) -> np.ndarray:
        return _build_matrix(self.points, lambda x, y: arrow(x, y, self.model))

    @cached_property
    def order_matrix(self) -> np.ndarray:
        """The defined order, evaluated directly from classes and arrows."""
        arr = self.arrow_matrix
        cls = self.classes
        n = len(self.points)
        m = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if cls[i] == cls[j]:
                    m[i, j] = arr[i, j]
                elif self.model == "S2" or _TAU_RULE[(cls[i], cls[j])] == "reversed":
                    m[i, j] = arr[j, i]
                else:
                    m[i, j] = not arr[i, j] and not arr[j, i]
        return m

    @property
    def signature(self) -> Signature:
        return Signature("R", CLASSES[self.model])

    def arrow_structure(self) -> FinStructure:
        """<D, ->, classes> as a labeled structure."""
        return FinStructure.from_matrix(self.arrow_matrix, self.label_indices, self.signature)

    def order_structure(self) -> FinStructure:
        """<D, rho or tau, classes> as a labeled structure."""
        return FinStructure.from_matrix(self.order_matrix, self.label_indices, self.signature)

    def sorted_points(self) -> list[Fraction]:
        """Points listed in increasing defined order."""
        rank = self.order_matrix.sum(axis=0)  # number of predecessors
        return [self.points[i] for i in np.argsort(rank, kind="stable")]

    def subsample(self, points: Iterable) -> "CircSample":
        return CircSample(tuple(points), self.model, checked=False)

    def to_dot(self, name: str = "D") -> str:
        """Points labeled by class; edges are the covering pairs of the order."""
        pts = self.sorted_points()
        idx = {p: i for i, p in enumerate(self.points)}
        lines = [f"digraph {name} {{"]
        for p in self.points:
            i = idx[p]
            lines.append(f'  {i} [label="{p}:{self.classes[i]}"];')
        for p, q in zip(pts, pts[1:]):
            lines.append(f"  {idx[p]} -> {idx[q]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_sample(desc: str, model: str = "S2") -> CircSample:
    """``"seed:<s>:<count>"`` or an explicit comma-separated list of rationals."""
    desc = desc.strip()
    if desc.startswith("seed:"):
        try:
            _, seed, count = desc.split(":")
            pts = seeded_rationals(int(seed), int(count))
        except ValueError:
            raise ValueError(f"malformed sample descriptor {desc!r}") from None
        return CircSample(tuple(pts), model)
    if not desc:
        return CircSample((), model)
    try:
        pts = [Fraction(t.strip()) for t in desc.split(",")]
    except ValueError:
        raise ValueError(f"malformed sample descriptor {desc!r}") from None
    return CircSample(tuple(pts), model)


def trim_endpoints(D: CircSample) -> CircSample:
    """Drop the least and the greatest point of the defined order."""
    if len(D) <= 2:
        return D.subsample(())
    pts = D.sorted_points()
    keep = set(pts[1:-1])
    return D.subsample(p for p in D.points if p in keep)


def relation_check(m: np.ndarray) -> dict:
    """Strict-linear-order axioms of a boolean matrix, over all pairs and triples."""
    m = np.asarray(m, dtype=bool)
    n = m.shape[0]
    off = ~np.eye(n, dtype=bool)
    out = {"size": n}
    refl = np.flatnonzero(np.diag(m))
    out["irreflexive"] = refl.size == 0
    both = np.argwhere(m & m.T & off)
    out["asymmetric"] = both.size == 0
    neither = np.argwhere(~m & ~m.T & off)
    out["total"] = neither.size == 0
    mi = m.astype(np.int64)
    two_step = (mi @ mi) > 0
    bad = np.argwhere(two_step & ~m)
    out["transitive"] = bad.size == 0
    violation = None
    if refl.size:
        violation = {"axiom": "irreflexive", "tuple": [int(refl[0])]}
    elif both.size:
        violation = {"axiom": "asymmetric", "tuple": [int(v) for v in both[0]]}
    elif neither.size:
        violation = {"axiom": "total", "tuple": [int(v) for v in neither[0]]}
    elif bad.size:
        x, z = (int(v) for v in bad[0])
        y = int(np.flatnonzero(m[x] & m[:, z])[0])
        violation = {"axiom": "transitive", "tuple": [x, y, z]}
    out["violation"] = violation
    out["pass"] = violation is None
    return out


def order_axioms_check(D: CircSample, relation: str = "order") -> dict:
    """Check ``relation`` ("order" or "arrow") on D for being a strict linear order.

    The violating tuple, if any, is reported with the sample's rationals.
    """
    m = D.order_matrix if relation == "order" else D.arrow_matrix
    rep = relation_check(m)
    if rep["violation"]:
        rep["violation"]["points"] = [str(D.points[i]) for i in rep["violation"]["tuple"]]
    rep["model"] = D.model
    rep["relation"] = relation
    return rep


# --- elementary-substructure probes ----------------------------------------------

_PAR = "({a}!={b} & !R({a},{b}) & !R({b},{a}))"


def _par(a, b):
    return _PAR.format(a=a, b=b)


S2_WITNESS_PATTERNS = {
    ("A", "A"): "E w. R(u,w) & R(w,v)",
    ("B", "B"): "E w. R(v,w) & R(w,u)",
    ("A", "B"): "E w. R(v,w) & R(u,w)",
    ("B", "A"): "E w. R(w,u) & R(w,v)",
}

S3_WITNESS_PATTERNS = {
    ("A", "A"): "E w. R(u,w) & R(w,v)",
    ("B", "B"): f"E w. R(w,u) & {_par('v', 'w')}",
    ("C", "C"): f"E w. {_par('u', 'w')} & R(v,w)",
    ("A", "B"): f"E w. R(u,w) & {_par('w', 'v')}",
    ("A", "C"): "E w. R(u,w) & R(v,w)",
    ("B", "C"): "E w. R(w,u) & R(v,w)",
    ("B", "A"): "E w. R(w,u) & R(w,v)",
    ("C", "A"): f"E w. {_par('u', 'w')} & R(w,v)",
    ("C", "B"): f"E w. {_par('u', 'w')} & {_par('v', 'w')}",
}


def _patterns(model: str) -> dict:
    return S2_WITNESS_PATTERNS if model == "S2" else S3_WITNESS_PATTERNS


def _split_exists(f):
    if not isinstance(f, Exists) or not is_quantifier_free(f.body):
        raise ValueError("witness formulas must have the form 'E w. <quantifier-free>'")
    if not set(free_variables(f)) <= {"u", "v"}:
        raise ValueError("witness formulas may only have u and v free")
    return f.var, f.body


def _circle_candidates(x: Fraction, y: Fraction, model: str) -> list[Fraction]:
    """One rational from every region on which atomic facts about (x, y, s) are constant.

    Regions are cut by x, y, their arrow-boundary images and the class
    boundaries, so the list certifies existence over all of S.
    """
    if model == "S2":
        cuts = [x, y, antipode(x), antipode(y)]
        bounds = [GenAngle(0, Fraction(1, 2)), GenAngle(0, Fraction(3, 2))]
    else:
        cuts = [x, y, rotate(x), rotate(x, 2), rotate(y), rotate(y, 2)]
        bounds = [GenAngle(0, Fraction(k, 6)) for k in (3, 7, 11)]
    pts = sorted({canonicalize(p) for p in cuts + bounds})
    out = [Fraction(x), Fraction(y)]
    for i, p in enumerate(pts):
        q = pts[(i + 1) % len(pts)]
        out.append(rational_in_arc(p, q))
    return out


def _small_structure(points: Sequence[Fraction], model: str) -> FinStructure:
    sample = CircSample(tuple(points), model, checked=False)
    return sample.arrow_structure()


def tarski_vaught_check(D: CircSample, witness_formulas: Iterable[str] | dict | None = None,
                        params: Iterable | None = None, case_matched: bool = False) -> dict:
    """Probe whether D reflects existential witnesses of the ambient S.

    For each ordered pair (x, y) of parameters and each formula ``E w. body``:
    if some s in S satisfies the body, some z in D must as well.  Existence
    in S is decided on one rational per region of constancy.  With
    ``case_matched`` only pairs x < y are used, each with the formula of
    its class pair.
    """
    model = D.model
    if witness_formulas is None:
        witness_formulas = _patterns(model)
    if isinstance(witness_formulas, dict):
        table = {k: parse(v) for k, v in witness_formulas.items()}
        formulas = list(witness_formulas.values())
    else:
        formulas = list(witness_formulas)
        table = None
        if case_matched:
            raise ValueError("case_matched needs a class-pair table of formulas")
    parsed = {t: parse(t) for t in formulas}
    for f in parsed.values():
        _split_exists(f)
    params = list(D.points) if params is None else [Fraction(p) for p in params]
    Dstruct = D.arrow_structure()
    index = {p: i for i, p in enumerate(D.points)}
    checks = 0
    failures = []
    for x in params:
        for y in params:
            if x == y:
                continue
            if case_matched:
                if not order(x, y, model):
                    continue
                key = (class_of(x, model), class_of(y, model))
                todo = [(witness_formulas[key], table[key])]
            else:
                todo = list(parsed.items())
            cands = None
            for text, f in todo:
                w, body = _split_exists(f)
                if cands is None:
                    cands = []
                    for s in _circle_candidates(x, y, model):
                        pts = list(dict.fromkeys([x, y, s]))
                        cands.append((s, _small_structure(pts, model), pts.index(s)))
                in_s = None
                for s, small, at in cands:
                    if evaluate(small, body, {"u": 0, "v": 1, w: at}):
                        in_s = s
                        break
                if in_s is None:
                    continue
                checks += 1
                if not evaluate(Dstruct, f, {"u": index[x], "v": index[y]}):
                    failures.append({"x": str(x), "y": str(y), "formula": text, "witness_in_S": str(in_s)})
    return {"model": model, "size": len(D), "checks": checks, "failures": failures, "pass": not failures}


def density_closure(D: CircSample, targets: Sequence[str] | None = None) -> CircSample:
    """D together with a density witness of each class between every ordered pair."""
    targets = CLASSES[D.model] if targets is None else targets
    pts = list(D.points)
    seen = set(pts)
    for x in D.points:
        for y in D.points:
            if x != y and order(x, y, D.model):
                for t in targets:
                    z = density_witness(x, y, t, D.model)
                    if z not in seen:
                        seen.add(z)
                        pts.append(z)
    return CircSample(tuple(pts), D.model)


# --- dense n-partitions of Q ---------------------------------------------------

def stern_brocot_depth(q) -> int:
    """Depth of |q| in the Stern-Brocot tree (1 is the root); 0 maps to 0."""
    q = abs(Fraction(q))
    if q == 0:
        return 0
    p, d = q.numerator, q.denominator
    total = 0
    while d:
        total += p // d
        p, d = d, p % d
    return total - 1


def qn_label(q, n: int) -> int:
    """Label in a dense n-partition of Q: Stern-Brocot depth modulo n."""
    if n < 1:
        raise ValueError("n must be positive")
    return stern_brocot_depth(q) % n


def qn_structure(points: Sequence, n: int) -> FinStructure:
    """<points, <, labels> as an n-labeled linear order."""
    pts = [Fraction(p) for p in points]
    arrows = {(i, j) for i, a in enumerate(pts) for j, b in enumerate(pts) if a < b}
    labels = tuple(qn_label(p, n) for p in pts)
    names = tuple(f"l{i}" for i in range(n))
    return FinStructure(len(pts), frozenset(arrows), labels, Signature("R", names))
