"""Finite structures with one binary relation and an optional unary label partition."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FinStructure",
    "Signature",
    "chain",
    "classify",
    "cycle3",
    "disjoint_sum",
    "empty",
    "from_json",
    "induced",
    "kinds",
    "to_dot",
    "to_json",
    "unrelated_pairs",
    "wreath",
]


@dataclass(frozen=True)
class Signature:
    """One binary symbol plus ordered unary label names."""

    binary: str = "R"
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate label names in {self.labels}")
        if self.binary in self.labels:
            raise ValueError("label name clashes with the binary symbol")


@dataclass(frozen=True, eq=False)
class FinStructure:
    """A structure on the universe ``0..n-1``.

    ``arrows`` holds the ordered pairs of the binary relation.  ``labels``, if
    present, gives each vertex its label index, so the label classes
    partition the universe.
    """

    n: int
    arrows: frozenset = field(default_factory=frozenset)
    labels: tuple[int, ...] | None = None
    signature: Signature = Signature()

    def __post_init__(self):
        arrows = frozenset((int(u), int(v)) for u, v in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        for u, v in arrows:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"pair ({u}, {v}) outside universe of size {self.n}")
        if self.labels is not None:
            labels = tuple(int(x) for x in self.labels)
            if len(labels) != self.n:
                raise ValueError("label assignment must cover every vertex")
            if self.signature.labels:
                bad = [x for x in labels if not 0 <= x < len(self.signature.labels)]
                if bad:
                    raise ValueError(f"label index {bad[0]} outside signature")
            object.__setattr__(self, "labels", labels)

    @cached_property
    def _adj(self) -> tuple[tuple[bool, ...], ...]:
        rows = [[False] * self.n for _ in range(self.n)]
        for u, v in self.arrows:
            rows[u][v] = True
        return tuple(tuple(r) for r in rows)

    def has(self, u: int, v: int) -> bool:
        return self._adj[u][v]

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.arrows:
            m[u, v] = True
        return m

    @classmethod
    def from_matrix(cls, m, labels=None, signature: Signature = Signature()) -> "FinStructure":
        m = np.asarray(m, dtype=bool)
        us, vs = np.nonzero(m)
        return cls(m.shape[0], frozenset(zip(us.tolist(), vs.tolist())), labels, signature)

    def label_of(self, v: int) -> int | None:
        return None if self.labels is None else self.labels[v]

    @cached_property
    def out_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, _ in self.arrows:
            deg[u] += 1
        return tuple(deg)

    @cached_property
    def in_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for _, v in self.arrows:
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def kinds(self) -> frozenset[str]:
        return kinds(self)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, FinStructure):
            return NotImplemented
        return self.n == other.n and self.arrows == other.arrows and self.labels == other.labels

    def __hash__(self):
        return hash((self.n, self.arrows, self.labels))

    def __repr__(self):
        arrows = sorted(self.arrows)
        lab = "" if self.labels is None else f", labels={list(self.labels)}"
        return f"FinStructure(n={self.n}, arrows={arrows}{lab})"


def empty(n: int) -> FinStructure:
    """The edgeless structure I_n."""
    return FinStructure(n)


def chain(n: int) -> FinStructure:
    """The transitive tournament 0 -> 1 -> ... -> n-1."""
    return FinStructure(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle3() -> FinStructure:
    return FinStructure(3, frozenset({(0, 1), (1, 2), (2, 0)}))


def kinds(X: FinStructure) -> frozenset[str]:
    irreflexive = all(u != v for u, v in X.arrows)
    symmetric = all((v, u) in X.arrows for u, v in X.arrows)
    asymmetric = all((v, u) not in X.arrows for u, v in X.arrows)
    out = set()
    if irreflexive and symmetric:
        out.add("graph")
    if irreflexive and asymmetric:
        out.add("digraph")
        if len(X.arrows) == X.n * (X.n - 1) // 2:
            out.add("tournament")
    return frozenset(out)


def classify(X: FinStructure) -> str:
    """The strongest applicable kind: tournament, graph, digraph or other."""
    ks = X.kinds
    for k in ("tournament", "graph", "digraph"):
        if k in ks:
            return k
    return "other"


def induced(X: FinStructure, subset: Iterable[int]) -> tuple[FinStructure, list[int]]:
    """Substructure on ``subset``, renumbered in increasing order.

    Returns the structure and the list mapping new vertices to old ones.
    """
    verts = sorted(set(subset))
    for v in verts:
        if not 0 <= v < X.n:
            raise ValueError(f"vertex {v} outside universe of size {X.n}")
    index = {v: i for i, v in enumerate(verts)}
    arrows = frozenset((index[u], index[v]) for u, v in X.arrows if u in index and v in index)
    labels = None if X.labels is None else tuple(X.labels[v] for v in verts)
    return FinStructure(len(verts), arrows, labels, X.signature), verts


def wreath(T: FinStructure, I: FinStructure) -> FinStructure:
    """T[I]: each vertex of T replaced by a copy of I.

    Vertex (t, i) is numbered ``t * |I| + i``.
    """
    if T.labels is not None or I.labels is not None:
        raise ValueError("wreath products are defined for label-free structures")
    m = I.n
    arrows = set()
    for t1, t2 in T.arrows:
        for i1 in range(m):
            for i2 in range(m):
                arrows.add((t1 * m + i1, t2 * m + i2))
    for t in range(T.n):
        for i1, i2 in I.arrows:
            arrows.add((t * m + i1, t * m + i2))
    return FinStructure(T.n * m, frozenset(arrows))


def disjoint_sum(structures: Sequence[FinStructure]) -> FinStructure:
    arrows = set()
    labels: list[int] | None = [] if all(s.labels is not None for s in structures) else None
    offset = 0
    for s in structures:
        arrows.update((u + offset, v + offset) for u, v in s.arrows)
        if labels is not None:
            labels.extend(s.labels)
        offset += s.n
    return FinStructure(offset, frozenset(arrows), None if labels is None else tuple(labels))


def unrelated_pairs(X: FinStructure) -> frozenset[tuple[int, int]]:
    """Pairs ``(u, v)``, ``u < v``, with no arrow in either direction."""
    return frozenset(
        (u, v)
        for u in range(X.n)
        for v in range(u + 1, X.n)
        if not X.has(u, v) and not X.has(v, u)
    )


def to_json(X: FinStructure) -> dict:
    return {
        "n": X.n,
        "arrows": [list(p) for p in sorted(X.arrows)],
        "labels": None if X.labels is None else list(X.labels),
    }


def from_json(data) -> FinStructure:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        n = int(data["n"])
        arrows = frozenset(tuple(p) for p in data["arrows"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed structure: {exc}") from None
    if any(len(p) != 2 for p in arrows):
        raise ValueError("arrows must be pairs")
    labels = data.get("labels")
    return FinStructure(n, arrows, None if labels is None else tuple(labels))


def to_dot(X: FinStructure, name: str = "X", label_names: Sequence[str] | None = None) -> str:
    """Graphviz text.  Graphs are written undirected; unrelated pairs are omitted."""
    is_graph = classify(X) == "graph" and X.arrows
    lines = [f"{'graph' if is_graph else 'digraph'} {name} {{"]
    for v in range(X.n):
        if X.labels is None:
            lines.append(f"  {v};")
        else:
            lab = X.labels[v]
            text = label_names[lab] if label_names else str(lab)
            lines.append(f'  {v} [label="{v}:{text}"];')
    for u, v in sorted(X.arrows):
        if is_graph:
            if u < v:
                lines.append(f"  {u} -- {v};")
        else:
            lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
