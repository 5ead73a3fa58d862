from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ultrahom.formulas import (
    BUILTIN_TEXT,
    And,
    Eq,
    Exists,
    Forall,
    FormulaError,
    FormulaSyntaxError,
    Label,
    Neq,
    Not,
    Or,
    Rel,
    UnboundVariableError,
    builtin,
    evaluate,
    free_variables,
    is_quantifier_free,
    parse,
    reduct,
    to_text,
)
from ultrahom.structures import FinStructure, chain, cycle3, induced

from .test_structures import digraphs

VARS = ["u", "v", "w", "x"]
var = st.sampled_from(VARS)
atoms = st.one_of(
    st.builds(Rel, var, var),
    st.builds(Label, st.integers(0, 2), var),
    st.builds(Eq, var, var),
    st.builds(Neq, var, var),
)
formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Exists, var, sub),
        st.builds(Forall, var, sub),
    ),
    max_leaves=8,
)
qf_formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(st.builds(Not, sub), st.builds(And, sub, sub), st.builds(Or, sub, sub)),
    max_leaves=8,
)


def naive(X, f, env):
    """Reference semantics, written out directly."""
    if isinstance(f, Rel):
        return (env[f.left], env[f.right]) in X.arrows
    if isinstance(f, Label):
        return X.labels[env[f.var]] == f.index
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Neq):
        return env[f.left] != env[f.right]
    if isinstance(f, Not):
        return not naive(X, f.body, env)
    if isinstance(f, And):
        return naive(X, f.left, env) and naive(X, f.right, env)
    if isinstance(f, Or):
        return naive(X, f.left, env) or naive(X, f.right, env)
    vals = [naive(X, f.body, {**env, f.var: w}) for w in range(X.n)]
    return any(vals) if isinstance(f, Exists) else all(vals)


def test_phi_ast():
    assert parse("!R(u,v) & !R(v,u)") == And(Not(Rel("u", "v")), Not(Rel("v", "u")))


def test_precedence_and_associativity():
    f = parse("R(u,v) | R(v,u) & u=v")
    assert isinstance(f, Or) and isinstance(f.right, And)
    g = parse("R(u,v) & R(v,w) & R(w,u)")
    assert isinstance(g.left, And)
    h = parse("E w. R(u,w) & R(w,v)")
    assert isinstance(h, Exists) and isinstance(h.body, And)
    assert parse("Ew.R(u,w)") == Exists("w", Rel("u", "w"))


@pytest.mark.parametrize("name", sorted(BUILTIN_TEXT))
def test_builtin_print_parse_identity(name):
    f = builtin(name)
    text = to_text(f)
    assert parse(text) == f
    assert to_text(parse(text)) == text


@pytest.mark.parametrize("name", sorted(BUILTIN_TEXT))
def test_builtins_are_quantifier_free(name):
    assert is_quantifier_free(builtin(name))
    assert set(free_variables(builtin(name))) == {"u", "v"}


@given(formulas)
def test_print_parse_identity(f):
    assert parse(to_text(f)) == f


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("R(u,")
    assert info.value.position == 4
    assert "offset 4" in str(info.value)


@pytest.mark.parametrize("bad", ["", "R(u v)", "u", "E . R(u,v)", "R(u,v) &", "(R(u,v)", "foo(u)", "Q(u)"])
def test_syntax_errors(bad):
    with pytest.raises(FormulaError):
        parse(bad)


def test_unknown_label_when_bounded():
    with pytest.raises(FormulaError):
        parse("c(u)", n_labels=2)
    assert parse("b(u)", n_labels=2) == Label(1, "u")


def test_free_variables_order():
    assert free_variables(parse("R(v,u) & E v. R(v,w)")) == ("v", "u", "w")


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        evaluate(cycle3(), parse("R(u,v)"), {"u": 0})


@settings(max_examples=150)
@given(digraphs(max_n=4, labels=3), formulas, st.data())
def test_evaluate_matches_naive(X, f, data):
    env = {x: data.draw(st.integers(0, X.n - 1)) for x in VARS} if X.n else None
    if env is None:
        return
    assert evaluate(X, f, env) == naive(X, f, env)


@settings(max_examples=150)
@given(digraphs(max_n=6, labels=3), qf_formulas, st.data())
def test_quantifier_free_formulas_are_absolute(X, f, data):
    if X.n == 0:
        return
    W = sorted(data.draw(st.sets(st.integers(0, X.n - 1), min_size=1)))
    Y, verts = induced(X, W)
    for env in product(range(Y.n), repeat=len(VARS)):
        sub = dict(zip(VARS, env))
        assert evaluate(Y, f, sub) == evaluate(X, f, {k: verts[i] for k, i in sub.items()})


def test_existential_formula_is_not_absolute():
    # "u has a successor" holds in the 2-chain but not in its substructure on {0}
    f = parse("E w. R(u,w)")
    X = chain(2)
    Y, _ = induced(X, [0])
    assert evaluate(X, f, {"u": 0}) and not evaluate(Y, f, {"u": 0})


def test_reduct_theta_on_unrelated_pairs():
    X = FinStructure(3, frozenset({(0, 1)}))
    Y = reduct(X, builtin("theta"))
    assert Y.arrows == {(0, 2), (2, 0), (1, 2), (2, 1)}
    Z = reduct(X, builtin("phi"))
    assert Z.arrows == Y.arrows | {(0, 0), (1, 1), (2, 2)}


def test_reduct_needs_u_v():
    with pytest.raises(FormulaError):
        reduct(cycle3(), parse("R(u,w)"))


def test_label_on_unlabeled_structure():
    with pytest.raises(FormulaError):
        evaluate(cycle3(), parse("a(u)"), {"u": 0})
