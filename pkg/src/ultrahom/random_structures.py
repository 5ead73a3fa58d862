"""Presentations of the Rado graph and the random tournament on the natural numbers.

A presentation is a pure pair oracle.  The graph-to-tournament transfer
orients ``m -> n`` when ``m < n`` and ``m ~ n``, or when ``m > n`` and
``m !~ n``; its inverse recovers the graph.  Above ``max H`` the two
extension conditions pick out exactly the same vertices, which is what
makes the sets of copies coincide.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .structures import FinStructure

__all__ = [
    "Presentation",
    "WitnessQuery",
    "WitnessReport",
    "bit_graph",
    "check_extension_property",
    "default_budget",
    "find_witness",
    "graph_to_tournament",
    "one_extension",
    "parse_presentation",
    "prefix",
    "rado_bit",
    "random_tournament",
    "tournament_to_graph",
    "transfer",
    "transfer_invariant",
]


@dataclass(frozen=True)
class Presentation:
    """A countable graph or tournament on 0, 1, 2, ... given by a pair oracle."""

    kind: str
    oracle: Callable[[int, int], bool] = field(repr=False, compare=False)
    tag: str

    def __post_init__(self):
        if self.kind not in ("graph", "tournament"):
            raise ValueError(f"kind must be 'graph' or 'tournament', not {self.kind!r}")

    def __call__(self, m: int, n: int) -> bool:
        if m == n:
            raise ValueError("the relation is only queried on distinct vertices")
        return self.oracle(m, n)


def rado_bit(m: int, n: int) -> bool:
    """m ~ n iff bit min(m, n) of max(m, n) is set."""
    if m == n:
        raise ValueError("rado_bit is undefined on the diagonal")
    i, j = (m, n) if m < n else (n, m)
    return bool((j >> i) & 1)


def bit_graph() -> Presentation:
    return Presentation("graph", rado_bit, "bit")


def random_tournament(seed: int) -> Presentation:
    """Seeded random tournament; the orientation of {i, j} is a hash of (seed, i, j)."""

    @lru_cache(maxsize=1 << 16)
    def forward(i: int, j: int) -> bool:
        digest = hashlib.blake2b(f"{seed}:{i}:{j}".encode(), digest_size=8).digest()
        return bool(digest[0] & 1)

    def oracle(m: int, n: int) -> bool:
        if m < n:
            return forward(m, n)
        return not forward(n, m)

    return Presentation("tournament", oracle, f"rand:{seed}")


def graph_to_tournament(G: Presentation) -> Presentation:
    if G.kind != "graph":
        raise ValueError("graph_to_tournament needs a graph presentation")

    def oracle(m: int, n: int) -> bool:
        if m < n:
            return G(m, n)
        return not G(m, n)

    return Presentation("tournament", oracle, f"transfer({G.tag})")


def tournament_to_graph(T: Presentation) -> Presentation:
    if T.kind != "tournament":
        raise ValueError("tournament_to_graph needs a tournament presentation")

    def oracle(m: int, n: int) -> bool:
        if m < n:
            return T(m, n)
        return T(n, m)

    return Presentation("graph", oracle, f"transfer({T.tag})")


def transfer(P: Presentation) -> Presentation:
    return graph_to_tournament(P) if P.kind == "graph" else tournament_to_graph(P)


def parse_presentation(desc: str) -> Presentation:
    """``"bit"``, ``"rand:<seed>"`` or ``"transfer(<desc>)"``."""
    desc = desc.strip()
    if desc == "bit":
        return bit_graph()
    if desc.startswith("rand:"):
        try:
            return random_tournament(int(desc[5:]))
        except ValueError:
            raise ValueError(f"bad seed in {desc!r}") from None
    if desc.startswith("transfer(") and desc.endswith(")"):
        return transfer(parse_presentation(desc[9:-1]))
    raise ValueError(f"unknown presentation descriptor {desc!r}")


def prefix(P: Presentation, n: int) -> FinStructure:
    """The finite structure induced on {0, ..., n}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    arrows = set()
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j and P(i, j):
                arrows.add((i, j))
    return FinStructure(n + 1, frozenset(arrows))


# --- extension property ------------------------------------------------------

def default_budget(H: Iterable[int]) -> int:
    H = list(H)
    return 2 ** ((max(H) if H else -1) + 2)


@dataclass(frozen=True)
class WitnessQuery:
    H: tuple[int, ...]
    K: tuple[int, ...]
    budget: int
    high: bool = False

    def __post_init__(self):
        H = tuple(sorted(set(self.H)))
        K = tuple(sorted(set(self.K)))
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "K", K)
        if not set(K) <= set(H):
            raise ValueError("K must be a subset of H")
        if H and self.budget < max(H):
            raise ValueError("budget must be at least max H")

    @classmethod
    def make(cls, H, K, budget=None, high=False) -> "WitnessQuery":
        return cls(tuple(H), tuple(K), default_budget(H) if budget is None else budget, high)

    def to_json(self) -> dict:
        return {"H": list(self.H), "K": list(self.K), "high": self.high}


@dataclass(frozen=True)
class WitnessReport:
    query: WitnessQuery
    witnesses: tuple[int, ...]
    scanned: int

    @property
    def witness(self) -> int | None:
        return self.witnesses[0] if self.witnesses else None

    def to_json(self) -> dict:
        out = {"query": self.query.to_json()}
        if self.witnesses:
            out["witness"] = self.witness
            if len(self.witnesses) > 1:
                out["witnesses"] = list(self.witnesses)
        else:
            out["absent"] = True
        out["budget"] = self.query.budget
        return out


def _satisfies(P: Presentation, v: int, K: Sequence[int], rest: Sequence[int]) -> bool:
    if P.kind == "graph":
        return all(P(v, k) for k in K) and not any(P(v, h) for h in rest)
    return all(P(k, v) for k in K) and all(P(v, h) for h in rest)


def find_witness(P: Presentation, q: WitnessQuery, count: int = 1) -> WitnessReport:
    """The ``count`` smallest vertices ``v <= budget`` outside H realising (H, K).

    For a graph that means ``v ~ k`` for k in K and ``v !~ h`` for h in H \\ K;
    for a tournament ``k -> v`` and ``v -> h``.  With ``high`` set only
    ``v > max H`` is considered.
    """
    H = set(q.H)
    K = q.K
    rest = tuple(h for h in q.H if h not in set(K))
    start = max(q.H) + 1 if (q.high and q.H) else 0
    found = []
    scanned = 0
    for v in range(start, q.budget + 1):
        scanned += 1
        if v in H:
            continue
        if _satisfies(P, v, K, rest):
            found.append(v)
            if len(found) == count:
                break
    return WitnessReport(q, tuple(found), scanned)


def _subsets(universe: Sequence[int], max_size: int):
    for r in range(max_size + 1):
        yield from combinations(universe, r)


def check_extension_property(P: Presentation, max_h_size: int, h_universe: Iterable[int],
                             budget: int | None = None, witnesses: int = 1) -> dict:
    """Run every query K <= H <= h_universe with |H| <= max_h_size.

    ``witnesses=3`` asks for several distinct witnesses per query, the
    finite shadow of the witness sets being infinite.
    """
    universe = sorted(set(h_universe))
    failures = []
    queries = 0
    for H in _subsets(universe, max_h_size):
        for K in _subsets(H, len(H)):
            queries += 1
            q = WitnessQuery.make(H, K, budget)
            rep = find_witness(P, q, witnesses)
            if len(rep.witnesses) < witnesses:
                failures.append(rep.to_json())
    return {
        "presentation": P.tag,
        "kind": P.kind,
        "max_h_size": max_h_size,
        "h_universe": universe,
        "budget": budget,
        "witnesses_per_query": witnesses,
        "queries": queries,
        "failures": failures,
        "pass": not failures,
    }


def _rows(P: Presentation, sources: Sequence[int], vmax: int, reverse: bool = False) -> np.ndarray:
    out = np.zeros((len(sources), vmax + 1), dtype=bool)
    for r, h in enumerate(sources):
        row = out[r]
        for v in range(vmax + 1):
            if v != h:
                row[v] = P(v, h) if reverse else P(h, v)
    return out


def transfer_invariant(G: Presentation, universe: Iterable[int], max_h_size: int, vmax: int,
                       T: Presentation | None = None) -> dict:
    """Compare high witnesses of G and its transfer T on every query.

    For every K <= H <= universe with |H| <= max_h_size and every v with
    max H < v <= vmax, checks that v realises (H, K) in G exactly when it
    does in T.  Both sides are read from the lazy oracles.
    """
    if G.kind != "graph":
        raise ValueError("transfer_invariant starts from a graph presentation")
    T = graph_to_tournament(G) if T is None else T
    universe = sorted(set(universe))
    g = _rows(G, universe, vmax)
    t_out = _rows(T, universe, vmax)                # [h][v]: h -> v
    t_in = _rows(T, universe, vmax, reverse=True)   # [h][v]: v -> h
    row = {h: i for i, h in enumerate(universe)}
    queries = []
    violations = 0
    for H in _subsets(universe, max_h_size):
        lo = (max(H) + 1) if H else 0
        for K in _subsets(H, len(H)):
            in_g = np.ones(vmax + 1, dtype=bool)
            in_t = np.ones(vmax + 1, dtype=bool)
            for h in H:
                if h in K:
                    in_g &= g[row[h]]
                    in_t &= t_out[row[h]]
                else:
                    in_g &= ~g[row[h]]
                    in_t &= t_in[row[h]]
            in_g, in_t = in_g[lo:], in_t[lo:]
            bad = int(np.count_nonzero(in_g != in_t))
            violations += bad
            first = np.flatnonzero(in_g)
            queries.append({
                "H": list(H),
                "K": list(K),
                "witness": int(first[0]) + lo if first.size else None,
                "count": int(np.count_nonzero(in_g)),
                "violations": bad,
            })
    return {
        "graph": G.tag,
        "tournament": T.tag,
        "universe": universe,
        "max_h_size": max_h_size,
        "vmax": vmax,
        "queries": queries,
        "violations": violations,
        "pass": violations == 0,
    }


def one_extension(T: Presentation, phi: dict[int, int], v: int, budget: int | None = None) -> int | None:
    """A vertex w making ``phi + {v: w}`` a partial isomorphism of the tournament T.

    Asks for a witness of (phi[H], phi[K]) where K collects the h with h -> v.
    """
    if T.kind != "tournament":
        raise ValueError("one_extension is stated for tournaments")
    if v in phi:
        raise ValueError("v is already in the domain")
    K = [phi[h] for h in phi if T(h, v)]
    H = list(phi.values())
    q = WitnessQuery.make(H, K, budget)
    return find_witness(T, q).witness
