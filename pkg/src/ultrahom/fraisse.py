"""Small-structure model theory: isomorphism, back-and-forth games, ultrahomogeneity
and the hereditary / joint-embedding / amalgamation properties of finite classes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Sequence

from .structures import FinStructure, empty, induced, kinds, to_json

__all__ = [
    "AmalgamInstance",
    "FiniteClass",
    "are_isomorphic",
    "automorphisms",
    "canonical_form",
    "check_class_properties",
    "ef_game",
    "embeddings",
    "enumerate_up_to_iso",
    "extend_partial_iso",
    "is_partial_iso",
    "is_ultrahomogeneous",
    "isomorphisms",
    "parse_class",
]

MAX_CANONICAL = 8


def _compatible(X: FinStructure, Y: FinStructure, pairs: Sequence[tuple[int, int]], x: int, y: int) -> bool:
    if X.label_of(x) != Y.label_of(y):
        return False
    if X.has(x, x) != Y.has(y, y):
        return False
    for a, b in pairs:
        if a == x or b == y:
            return False
        if X.has(a, x) != Y.has(b, y) or X.has(x, a) != Y.has(y, b):
            return False
    return True


def is_partial_iso(X: FinStructure, Y: FinStructure, p: dict[int, int]) -> bool:
    """Injective, label-preserving, and preserving/reflecting the relation on dom(p)."""
    items = list(p.items())
    if len(set(p.values())) != len(items):
        return False
    for i, (x, y) in enumerate(items):
        if not _compatible(X, Y, items[:i], x, y):
            return False
    return True


def embeddings(A: FinStructure, B: FinStructure) -> Iterator[tuple[int, ...]]:
    """All embeddings of A into B, as image tuples, in lexicographic order."""
    images: list[int] = []
    pairs: list[tuple[int, int]] = []

    def extend(i):
        if i == A.n:
            yield tuple(images)
            return
        for y in range(B.n):
            if _compatible(A, B, pairs, i, y):
                images.append(y)
                pairs.append((i, y))
                yield from extend(i + 1)
                images.pop()
                pairs.pop()

    yield from extend(0)


def _vertex_invariant(X: FinStructure, v: int):
    return (X.label_of(v), X.has(v, v), X.out_degrees[v], X.in_degrees[v])


def isomorphisms(X: FinStructure, Y: FinStructure) -> Iterator[tuple[int, ...]]:
    """All isomorphisms X -> Y by backtracking, pruned by degree/label invariants."""
    if X.n != Y.n or len(X.arrows) != len(Y.arrows):
        return
    if sorted(map(repr, (_vertex_invariant(X, v) for v in range(X.n)))) != sorted(
        map(repr, (_vertex_invariant(Y, v) for v in range(Y.n)))
    ):
        return
    inv_y = [_vertex_invariant(Y, v) for v in range(Y.n)]
    images: list[int] = []
    pairs: list[tuple[int, int]] = []

    def extend(i):
        if i == X.n:
            yield tuple(images)
            return
        want = _vertex_invariant(X, i)
        for y in range(Y.n):
            if inv_y[y] == want and _compatible(X, Y, pairs, i, y):
                images.append(y)
                pairs.append((i, y))
                yield from extend(i + 1)
                images.pop()
                pairs.pop()

    yield from extend(0)


def are_isomorphic(X: FinStructure, Y: FinStructure) -> tuple[int, ...] | None:
    """The lexicographically first isomorphism, or None."""
    return next(isomorphisms(X, Y), None)


def automorphisms(X: FinStructure) -> list[tuple[int, ...]]:
    return list(isomorphisms(X, X))


def extend_partial_iso(X: FinStructure, Y: FinStructure, p: dict[int, int], v: int) -> dict[int, int] | None:
    """Extend ``p`` by (v, w) for the least w that keeps it a partial isomorphism."""
    if v in p:
        raise ValueError(f"{v} is already in the domain")
    pairs = list(p.items())
    for w in range(Y.n):
        if _compatible(X, Y, pairs, v, w):
            out = dict(p)
            out[v] = w
            return out
    return None


# --- back-and-forth --------------------------------------------------------------

def _atomic_type(X: FinStructure, tup: Sequence[int]):
    return tuple(
        (X.label_of(a),)
        + tuple((a == b, X.has(a, b)) for b in tup)
        for a in tup
    )


class _TypeTable:
    """Interns rank-k types of tuples so both structures share identifiers."""

    def __init__(self):
        self.ids: dict = {}

    def intern(self, key) -> int:
        return self.ids.setdefault(key, len(self.ids))

    def rank_type(self, X: FinStructure, tup: tuple[int, ...], rounds: int, memo: dict) -> int:
        key = (tup, rounds)
        if key in memo:
            return memo[key]
        atomic = _atomic_type(X, tup)
        if rounds == 0:
            t = self.intern(("atomic", atomic))
        else:
            succ = frozenset(self.rank_type(X, tup + (b,), rounds - 1, memo) for b in range(X.n))
            t = self.intern((rounds, atomic, succ))
        memo[key] = t
        return t


def ef_game(X: FinStructure, Y: FinStructure, rounds: int) -> str:
    """Winner ("duplicator" or "spoiler") of the ``rounds``-round game on X and Y.

    Exhaustive: Duplicator wins exactly when the empty tuples have the same
    rank-``rounds`` type, where the type of a tuple records its atomic type
    and the set of types of its one-point extensions.
    """
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    table = _TypeTable()
    tx = table.rank_type(X, (), rounds, {})
    ty = table.rank_type(Y, (), rounds, {})
    return "duplicator" if tx == ty else "spoiler"


def ef_minimax(X: FinStructure, Y: FinStructure, rounds: int, position: tuple = ()) -> str:
    """Direct game-tree search; exponential, for cross-checking ``ef_game`` on tiny inputs."""
    xs = tuple(a for a, _ in position)
    ys = tuple(b for _, b in position)
    if _atomic_type(X, xs) != _atomic_type(Y, ys):
        return "spoiler"
    if rounds == 0:
        return "duplicator"
    for a in range(X.n):
        if all(ef_minimax(X, Y, rounds - 1, position + ((a, b),)) == "spoiler" for b in range(Y.n)):
            return "spoiler"
    for b in range(Y.n):
        if all(ef_minimax(X, Y, rounds - 1, position + ((a, b),)) == "spoiler" for a in range(X.n)):
            return "spoiler"
    return "duplicator"


# --- ultrahomogeneity ------------------------------------------------------------

def is_ultrahomogeneous(X: FinStructure) -> tuple[bool, dict | None]:
    """Whether every isomorphism between induced substructures extends to an automorphism.

    Returns ``(True, None)`` or ``(False, counterexample)``, the
    counterexample being a partial isomorphism with no extension.
    """
    auts = automorphisms(X)
    for k in range(1, X.n + 1):
        for dom in combinations(range(X.n), k):
            restrictions = {tuple(g[a] for a in dom) for g in auts}
            sub = _atomic_type(X, dom)
            for img in permutations(range(X.n), k):
                if _atomic_type(X, img) == sub and img not in restrictions:
                    return False, {"domain": list(dom), "image": list(img)}
    return True, None


# --- canonical forms and enumeration ---------------------------------------------

def canonical_form(X: FinStructure) -> tuple:
    """Minimum (labels, adjacency bits) over all vertex orderings; n <= 8."""
    if X.n > MAX_CANONICAL:
        raise ValueError(f"canonical forms are exhaustive and limited to n <= {MAX_CANONICAL}")
    best = None
    n = X.n
    for perm in permutations(range(n)):
        labels = () if X.labels is None else tuple(X.labels[p] for p in perm)
        bits = tuple(X.has(perm[i], perm[j]) for i in range(n) for j in range(n))
        code = (labels, bits)
        if best is None or code < best:
            best = code
    return (n,) + best


def _from_code(code: tuple) -> FinStructure:
    n, labels, bits = code
    arrows = frozenset((i, j) for i in range(n) for j in range(n) if bits[i * n + j])
    return FinStructure(n, arrows, labels or None)


def _all_structures(n: int, kind: str) -> Iterator[FinStructure]:
    pairs = list(combinations(range(n), 2))
    if kind == "tournament":
        for bits in product((0, 1), repeat=len(pairs)):
            yield FinStructure(n, frozenset((i, j) if b else (j, i) for (i, j), b in zip(pairs, bits)))
    elif kind == "graph":
        for bits in product((0, 1), repeat=len(pairs)):
            arrows = set()
            for (i, j), b in zip(pairs, bits):
                if b:
                    arrows.update({(i, j), (j, i)})
            yield FinStructure(n, frozenset(arrows))
    elif kind == "digraph":
        for states in product((0, 1, 2), repeat=len(pairs)):
            arrows = set()
            for (i, j), s in zip(pairs, states):
                if s == 1:
                    arrows.add((i, j))
                elif s == 2:
                    arrows.add((j, i))
            yield FinStructure(n, frozenset(arrows))
    else:
        raise ValueError(f"unknown kind {kind!r}")


def enumerate_up_to_iso(n: int, kind: str) -> list[FinStructure]:
    """One representative per isomorphism class, ordered by canonical form."""
    if n < 1:
        raise ValueError("n must be at least 1")
    codes = {canonical_form(X) for X in _all_structures(n, kind)}
    return [_from_code(c) for c in sorted(codes)]


# --- class properties ------------------------------------------------------------

@dataclass
class FiniteClass:
    """A class of finite structures: explicit members up to iso, plus optional predicate.

    Without a predicate, membership means isomorphism to a listed member.
    """

    members: list[FinStructure]
    predicate: Callable[[FinStructure], bool] | None = None
    name: str = "class"

    def __post_init__(self):
        self._codes = {canonical_form(X) for X in self.members}
        self.max_n = max((X.n for X in self.members), default=0)

    def __contains__(self, X: FinStructure) -> bool:
        if self.predicate is not None:
            return self.predicate(X)
        return X.n <= MAX_CANONICAL and canonical_form(X) in self._codes

    def up_to(self, size: int) -> list[FinStructure]:
        return [X for X in self.members if X.n <= size]


def parse_class(desc: str) -> FiniteClass:
    """``"tournaments:<n>"`` / ``"graphs:<n>"`` / ``"digraphs:<n>"``: all members up to size n."""
    try:
        kind, n = desc.split(":")
        n = int(n)
    except ValueError:
        raise ValueError(f"malformed class descriptor {desc!r}") from None
    single = {"tournaments": "tournament", "graphs": "graph", "digraphs": "digraph"}
    if kind not in single:
        raise ValueError(f"unknown class kind {kind!r}")
    k = single[kind]
    members = [X for m in range(1, n + 1) for X in enumerate_up_to_iso(m, k)]
    return FiniteClass(members, lambda X: k in kinds(X), f"{kind}")


@dataclass
class AmalgamInstance:
    A: FinStructure
    B: FinStructure
    C: FinStructure
    f: tuple[int, ...]
    g: tuple[int, ...]

    def to_json(self) -> dict:
        return {"A": to_json(self.A), "B": to_json(self.B), "C": to_json(self.C),
                "f": list(self.f), "g": list(self.g)}


def _pair_options(cls: FiniteClass, lu, lv) -> list[tuple[bool, bool]]:
    """Arrow patterns (u->v, v->u) allowed between two points, read off 2-point members."""
    out = []
    for fwd, bwd in ((False, False), (True, False), (False, True), (True, True)):
        arrows = frozenset(p for p, on in (((0, 1), fwd), ((1, 0), bwd)) if on)
        labels = None if lu is None else (lu, lv)
        if FinStructure(2, arrows, labels) in cls:
            out.append((fwd, bwd))
    return out or [(False, False), (True, False), (False, True), (True, True)]


def find_amalgam(inst: AmalgamInstance, cls: FiniteClass) -> tuple[FinStructure, tuple, tuple] | None:
    """A member D with embeddings of B and C agreeing on A, or None.

    D lives on B's vertices followed by the new vertices of C.  Disjoint
    amalgams are tried first, then amalgams identifying points of B and C.
    """
    B, C, f, g = inst.B, inst.C, inst.f, inst.g
    g_inv = {c: a for a, c in enumerate(g)}
    b_new = [b for b in range(B.n) if b not in set(f)]
    c_new = [c for c in range(C.n) if c not in g_inv]
    for size in range(len(c_new) + 1):
        for c_glued in combinations(c_new, size):
            for b_glued in permutations(b_new, size):
                found = _amalgam_with(inst, cls, dict(zip(c_glued, b_glued)), c_new, b_new, g_inv)
                if found is not None:
                    return found
    return None


def _amalgam_with(inst, cls, glue, c_new, b_new, g_inv):
    B, C, f = inst.B, inst.C, inst.f
    cmap: dict[int, int] = {}
    nxt = B.n
    for c in range(C.n):
        if c in g_inv:
            cmap[c] = f[g_inv[c]]
        elif c in glue:
            cmap[c] = glue[c]
        else:
            cmap[c] = nxt
            nxt += 1
    n = nxt
    if cls.predicate is None and n > cls.max_n:
        return None  # listed classes have no larger members
    labels = None
    if B.labels is not None and C.labels is not None:
        lab = list(B.labels) + [None] * (n - B.n)
        for c in range(C.n):
            if lab[cmap[c]] is None:
                lab[cmap[c]] = C.labels[c]
            elif lab[cmap[c]] != C.labels[c]:
                return None
        labels = tuple(lab)
    fixed: dict[tuple[int, int], bool] = {}
    for u in range(B.n):
        for v in range(B.n):
            fixed[(u, v)] = B.has(u, v)
    for u in range(C.n):
        for v in range(C.n):
            key = (cmap[u], cmap[v])
            val = C.has(u, v)
            if fixed.get(key, val) != val:
                return None
            fixed[key] = val
    free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in fixed]
    options = [_pair_options(cls, None if labels is None else labels[u],
                             None if labels is None else labels[v]) for u, v in free]
    base = {p for p, on in fixed.items() if on}
    for choice in product(*options):
        arrows = set(base)
        for (u, v), (fwd, bwd) in zip(free, choice):
            if fwd:
                arrows.add((u, v))
            if bwd:
                arrows.add((v, u))
        D = FinStructure(n, frozenset(arrows), labels)
        if D in cls:
            return D, tuple(range(B.n)), tuple(cmap[c] for c in range(C.n))
    return None


def check_class_properties(cls: FiniteClass | Sequence[FinStructure], max_size: int) -> dict:
    """Hereditary, joint-embedding and amalgamation properties up to ``max_size``.

    HP: every induced substructure of a member is a member.  JEP and AP:
    for members B, C (|B|, |C| <= max_size) over a common A (empty for JEP)
    some member amalgamates them; amalgams have at most |B| + |C| - |A|
    points.  The first failing instance of each property is reported.
    """
    if not isinstance(cls, FiniteClass):
        cls = FiniteClass(list(cls))
    small = cls.up_to(max_size)
    report: dict = {"class": cls.name, "max_size": max_size}

    hp_fail = None
    for X in small:
        for k in range(1, X.n):
            for sub in combinations(range(X.n), k):
                Y, _ = induced(X, sub)
                if Y not in cls:
                    hp_fail = {"structure": to_json(X), "subset": list(sub), "missing": to_json(Y)}
                    break
            if hp_fail:
                break
        if hp_fail:
            break
    report["hereditary"] = {"pass": hp_fail is None, "counterexample": hp_fail}

    jep_fail = None
    jep_count = 0
    E = empty(0)
    for B in small:
        for C in small:
            jep_count += 1
            inst = AmalgamInstance(E, B, C, (), ())
            if find_amalgam(inst, cls) is None:
                jep_fail = inst.to_json()
                break
        if jep_fail:
            break
    report["joint_embedding"] = {"pass": jep_fail is None, "instances": jep_count, "counterexample": jep_fail}

    ap_fail = None
    ap_count = 0
    for A in small:
        for B in small:
            if B.n < A.n:
                continue
            for C in small:
                if C.n < A.n:
                    continue
                for f in embeddings(A, B):
                    for g in embeddings(A, C):
                        ap_count += 1
                        inst = AmalgamInstance(A, B, C, f, g)
                        if find_amalgam(inst, cls) is None:
                            ap_fail = inst.to_json()
                            break
                    if ap_fail:
                        break
                if ap_fail:
                    break
            if ap_fail:
                break
        if ap_fail:
            break
    report["amalgamation"] = {"pass": ap_fail is None, "instances": ap_count, "counterexample": ap_fail}
    report["pass"] = hp_fail is None and jep_fail is None and ap_fail is None
    return report
