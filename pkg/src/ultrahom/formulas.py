"""First-order formulas over one binary symbol ``R`` and unary labels ``a, b, c, ...``.

Text grammar (whitespace insignificant)::

    atom    := "R(" var "," var ")" | label "(" var ")" | var "=" var | var "!=" var
    formula := atom | "!" formula | formula "&" formula | formula "|" formula
             | "E" var "." formula | "A" var "." formula | "(" formula ")"

``!`` binds tightest, then ``&``, then ``|``; both binary connectives are
left-associative and a quantifier body extends as far right as possible.
Labels are single lowercase letters mapped positionally: ``a`` is label 0.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping

from .structures import FinStructure

__all__ = [
    "And",
    "BUILTIN_TEXT",
    "Eq",
    "Exists",
    "Forall",
    "FormulaError",
    "FormulaSyntaxError",
    "Label",
    "Neq",
    "Not",
    "Or",
    "Rel",
    "UnboundVariableError",
    "builtin",
    "compile_formula",
    "evaluate",
    "free_variables",
    "is_quantifier_free",
    "parse",
    "reduct",
    "to_text",
]


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnboundVariableError(FormulaError):
    pass


@dataclass(frozen=True)
class Rel:
    left: str
    right: str


@dataclass(frozen=True)
class Label:
    index: int
    var: str

    @property
    def symbol(self) -> str:
        return chr(ord("a") + self.index)


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Neq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>!=|[()!&|=,.]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("ident") if m.group("ident") else m.start("op")
        if m.group("ident"):
            tokens.append(("ident", m.group("ident"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n_labels: int | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.n_labels = n_labels

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise FormulaSyntaxError(f"expected {op!r}", pos)

    def var(self) -> str:
        kind, val, pos = self.take()
        if kind != "ident":
            raise FormulaSyntaxError("expected variable", pos)
        return val

    def parse(self):
        f = self.disjunction()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {val!r}", pos)
        return f

    def disjunction(self):
        f = self.conjunction()
        while self.peek()[:2] == ("op", "|"):
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek()[:2] == ("op", "&"):
            self.take()
            f = And(f, self.unary())
        return f

    def _quantifier(self):
        kind, val, _ = self.peek()
        if kind != "ident":
            return None
        nxt = self.peek(1)
        if val in ("E", "A") and nxt[0] == "ident" and self.peek(2)[:2] == ("op", "."):
            self.take()
            return val, self.take()[1]
        # compact form "Eu. ..."
        if len(val) > 1 and val[0] in "EA" and nxt[:2] == ("op", "."):
            self.take()
            return val[0], val[1:]
        return None

    def unary(self):
        kind, val, pos = self.peek()
        if (kind, val) == ("op", "!"):
            self.take()
            return Not(self.unary())
        if (kind, val) == ("op", "("):
            self.take()
            f = self.disjunction()
            self.expect_op(")")
            return f
        q = self._quantifier()
        if q is not None:
            self.expect_op(".")
            body = self.disjunction()
            return Exists(q[1], body) if q[0] == "E" else Forall(q[1], body)
        return self.atom()

    def atom(self):
        kind, val, pos = self.take()
        if kind != "ident":
            raise FormulaSyntaxError("expected atom", pos)
        if self.peek()[:2] == ("op", "("):
            self.take()
            if val == "R":
                u = self.var()
                self.expect_op(",")
                v = self.var()
                self.expect_op(")")
                return Rel(u, v)
            if len(val) == 1 and val.islower():
                index = ord(val) - ord("a")
                if self.n_labels is not None and index >= self.n_labels:
                    raise FormulaSyntaxError(f"unknown label symbol {val!r}", pos)
                u = self.var()
                self.expect_op(")")
                return Label(index, u)
            raise FormulaSyntaxError(f"unknown label symbol {val!r}", pos)
        kind2, op, pos2 = self.take()
        if kind2 == "op" and op in ("=", "!="):
            other = self.var()
            return Eq(val, other) if op == "=" else Neq(val, other)
        raise FormulaSyntaxError("expected '=', '!=' or '('", pos2)


def parse(text: str, n_labels: int | None = None):
    """Parse formula text.  With ``n_labels`` set, label letters are range-checked."""
    return _Parser(text, n_labels).parse()


# --- printing ----------------------------------------------------------------

def _prec(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 0
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    return 3


def _show(f, need: int) -> str:
    if isinstance(f, Rel):
        s = f"R({f.left},{f.right})"
    elif isinstance(f, Label):
        s = f"{f.symbol}({f.var})"
    elif isinstance(f, Eq):
        s = f"{f.left}={f.right}"
    elif isinstance(f, Neq):
        s = f"{f.left}!={f.right}"
    elif isinstance(f, Not):
        s = "!" + _show(f.body, 3)
    elif isinstance(f, Or):
        s = f"{_show(f.left, 1)} | {_show(f.right, 2)}"
    elif isinstance(f, And):
        s = f"{_show(f.left, 2)} & {_show(f.right, 3)}"
    elif isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        s = f"{q} {f.var}. {_show(f.body, 0)}"
    else:
        raise TypeError(f"not a formula node: {f!r}")
    if _prec(f) < need:
        return f"({s})"
    return s


def to_text(f) -> str:
    """Canonical text; ``parse(to_text(f)) == f``."""
    return _show(f, 0)


# --- analysis ----------------------------------------------------------------

def free_variables(f) -> tuple[str, ...]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def walk(g, bound):
        if isinstance(g, (Rel, Eq, Neq)):
            names = (g.left, g.right)
        elif isinstance(g, Label):
            names = (g.var,)
        elif isinstance(g, Not):
            walk(g.body, bound)
            return
        elif isinstance(g, (And, Or)):
            walk(g.left, bound)
            walk(g.right, bound)
            return
        else:
            walk(g.body, bound | {g.var})
            return
        for x in names:
            if x not in bound and x not in out:
                out.append(x)

    walk(f, frozenset())
    return tuple(out)


def is_quantifier_free(f) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


# --- evaluation --------------------------------------------------------------

Compiled = Callable[[FinStructure, dict], bool]


def compile_formula(f) -> Compiled:
    """Turn an AST into a closure ``(structure, env) -> bool``."""
    if isinstance(f, Rel):
        u, v = f.left, f.right
        return lambda X, env: X.has(env[u], env[v])
    if isinstance(f, Label):
        idx, u = f.index, f.var

        def label(X, env):
            if X.labels is None:
                raise FormulaError("label atom evaluated on an unlabeled structure")
            return X.labels[env[u]] == idx

        return label
    if isinstance(f, Eq):
        u, v = f.left, f.right
        return lambda X, env: env[u] == env[v]
    if isinstance(f, Neq):
        u, v = f.left, f.right
        return lambda X, env: env[u] != env[v]
    if isinstance(f, Not):
        g = compile_formula(f.body)
        return lambda X, env: not g(X, env)
    if isinstance(f, And):
        l, r = compile_formula(f.left), compile_formula(f.right)
        return lambda X, env: l(X, env) and r(X, env)
    if isinstance(f, Or):
        l, r = compile_formula(f.left), compile_formula(f.right)
        return lambda X, env: l(X, env) or r(X, env)
    if isinstance(f, (Exists, Forall)):
        g = compile_formula(f.body)
        x = f.var
        test = any if isinstance(f, Exists) else all

        def quant(X, env):
            inner = dict(env)

            def at(w):
                inner[x] = w
                return g(X, inner)

            return test(at(w) for w in range(X.n))

        return quant
    raise TypeError(f"not a formula node: {f!r}")


def evaluate(X: FinStructure, f, assignment: Mapping[str, int]) -> bool:
    """Satisfaction of ``f`` in ``X`` under ``assignment``."""
    missing = [x for x in free_variables(f) if x not in assignment]
    if missing:
        raise UnboundVariableError(f"unbound free variable {missing[0]!r}")
    for x, v in assignment.items():
        if not 0 <= v < X.n:
            raise ValueError(f"{x} = {v} is outside the universe")
    return compile_formula(f)(X, dict(assignment))


def reduct(X: FinStructure, f, u: str = "u", v: str = "v") -> FinStructure:
    """Structure on X's universe whose relation is defined by ``f(u, v)``; labels kept."""
    fv = set(free_variables(f))
    if not fv <= {u, v}:
        raise FormulaError(f"formula must have free variables among ({u}, {v}), has {sorted(fv)}")
    g = compile_formula(f)
    arrows = set()
    env = {}
    for x in range(X.n):
        env[u] = x
        for y in range(X.n):
            env[v] = y
            if g(X, env):
                arrows.add((x, y))
    return FinStructure(X.n, frozenset(arrows), X.labels, X.signature)


_SAME2 = "(a(u) & a(v) | b(u) & b(v))"
_SAME3 = "(a(u) & a(v) | b(u) & b(v) | c(u) & c(v))"
_THETA = "u!=v & !R(u,v) & !R(v,u)"

BUILTIN_TEXT = {
    "lambda2": f"{_SAME2} & R(u,v) | (a(u) & b(v) | b(u) & a(v)) & R(v,u)",
    "lambda3": (
        f"{_SAME3} & R(u,v)"
        " | (a(u) & c(v) | c(u) & b(v) | b(u) & a(v)) & R(v,u)"
        f" | (c(u) & a(v) | b(u) & c(v) | a(u) & b(v)) & ({_THETA})"
    ),
    "mu3": f"{_SAME3} & R(u,v) | (c(u) & a(v) | b(u) & c(v) | a(u) & b(v)) & !R(u,v)",
    "theta": _THETA,
    "phi": "!R(u,v) & !R(v,u)",
}


def builtin(name: str):
    """The defining formulas used for S(2)/S(3) reducts and incomparability."""
    try:
        text = BUILTIN_TEXT[name]
    except KeyError:
        raise FormulaError(f"unknown builtin formula {name!r}") from None
    return parse(text)
