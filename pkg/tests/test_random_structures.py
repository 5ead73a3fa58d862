from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ultrahom.fraisse import is_partial_iso
from ultrahom.random_structures import (
    WitnessQuery,
    bit_graph,
    check_extension_property,
    default_budget,
    find_witness,
    graph_to_tournament,
    one_extension,
    parse_presentation,
    prefix,
    rado_bit,
    random_tournament,
    tournament_to_graph,
    transfer,
    transfer_invariant,
)
from ultrahom.structures import classify

naturals = st.integers(0, 5000)


def test_bit_predicate_values():
    assert rado_bit(0, 1)          # 1 = 0b1
    assert not rado_bit(0, 2)      # 2 = 0b10
    assert rado_bit(1, 2)
    assert not rado_bit(2, 3)      # 3 = 0b011
    with pytest.raises(ValueError):
        rado_bit(4, 4)


def test_bit_predicate_reads_binary_digits():
    # independent of the implementation: spell the binary expansion out
    for j in range(1, 64):
        digits = bin(j)[2:][::-1]
        for i in range(j):
            expected = i < len(digits) and digits[i] == "1"
            assert rado_bit(i, j) == expected == rado_bit(j, i)


def test_prefix_of_bit_graph():
    P = prefix(bit_graph(), 3)
    assert P.n == 4
    edges = {(u, v) for u, v in P.arrows if u < v}
    assert edges == {(0, 1), (0, 3), (1, 3), (1, 2)}
    assert classify(P) == "graph"


def test_prefix_of_transfer_is_tournament():
    assert classify(prefix(graph_to_tournament(bit_graph()), 8)) == "tournament"
    assert classify(prefix(random_tournament(3), 10)) == "tournament"


@given(naturals, naturals)
def test_transfer_definition(m, n):
    if m == n:
        return
    T = graph_to_tournament(bit_graph())
    expected = (m < n and rado_bit(m, n)) or (m > n and not rado_bit(m, n))
    assert T(m, n) == expected
    assert T(m, n) != T(n, m)


@given(naturals, naturals)
def test_round_trip(m, n):
    if m == n:
        return
    G = bit_graph()
    assert tournament_to_graph(graph_to_tournament(G))(m, n) == G(m, n)


@given(st.integers(0, 10**6), naturals, naturals)
def test_random_tournament_is_deterministic(seed, m, n):
    if m == n:
        return
    a, b = random_tournament(seed), random_tournament(seed)
    assert a(m, n) == b(m, n) != a(n, m)


def test_descriptors():
    assert parse_presentation("bit").tag == "bit"
    assert parse_presentation("rand:5").kind == "tournament"
    T = parse_presentation("transfer(bit)")
    assert T.kind == "tournament" and T.tag == "transfer(bit)"
    assert parse_presentation("transfer(transfer(bit))").kind == "graph"
    for bad in ("bits", "rand:x", "transfer(bit"):
        with pytest.raises(ValueError):
            parse_presentation(bad)
    with pytest.raises(ValueError):
        graph_to_tournament(random_tournament(1))
    with pytest.raises(ValueError):
        tournament_to_graph(bit_graph())


def test_witness_examples():
    G = bit_graph()
    q = WitnessQuery.make([0, 1], [0])
    assert q.budget == default_budget([0, 1]) == 8
    assert find_witness(G, q).witness == 5
    T = transfer(G)
    assert find_witness(T, WitnessQuery.make([0, 1], [0], high=True)).witness == 5
    rep = find_witness(G, WitnessQuery.make([0, 1, 2], [0, 1, 2], budget=3))
    assert rep.witness is None and rep.to_json()["absent"]


def test_query_validation():
    with pytest.raises(ValueError):
        WitnessQuery.make([0], [1])
    with pytest.raises(ValueError):
        WitnessQuery.make([0, 9], [], budget=3)


@settings(max_examples=60)
@given(st.sets(st.integers(0, 12), max_size=4), st.data())
def test_bit_graph_witness_formula(H, data):
    # v = 2^(max H + 1) + sum_{k in K} 2^k realises (H, K) in the bit graph
    K = data.draw(st.sets(st.sampled_from(sorted(H)))) if H else set()
    top = max(H) + 1 if H else 0
    v = 2 ** top + sum(2 ** k for k in K)
    assert all(rado_bit(v, k) for k in K)
    assert not any(rado_bit(v, h) for h in H - K)
    q = WitnessQuery.make(H, K, budget=v)
    w = find_witness(bit_graph(), q).witness
    assert w is not None and w <= v


def brute_transfer(universe, max_h, vmax):
    G = bit_graph()
    T = graph_to_tournament(G)
    bad = 0
    for r in range(max_h + 1):
        for H in combinations(universe, r):
            for s in range(len(H) + 1):
                for K in combinations(H, s):
                    rest = [h for h in H if h not in K]
                    for v in range((max(H) + 1) if H else 0, vmax + 1):
                        in_g = all(G(v, k) for k in K) and not any(G(v, h) for h in rest)
                        in_t = all(T(k, v) for k in K) and all(T(v, h) for h in rest)
                        bad += in_g != in_t
    return bad


def test_transfer_invariant_matches_brute_force():
    rep = transfer_invariant(bit_graph(), range(5), 2, 64)
    assert rep["violations"] == brute_transfer(range(5), 2, 64) == 0
    assert rep["pass"]
    q = next(q for q in rep["queries"] if q["H"] == [0, 1] and q["K"] == [0])
    assert q["witness"] == 5


def test_transfer_invariant_detects_a_wrong_tournament():
    # a tournament unrelated to the graph must break the invariant
    rep = transfer_invariant(bit_graph(), range(4), 2, 64, T=random_tournament(1))
    assert rep["violations"] > 0 and not rep["pass"]


@pytest.mark.parametrize("desc", ["bit", "transfer(bit)", "rand:7"])
def test_extension_property_small(desc):
    rep = check_extension_property(parse_presentation(desc), 2, range(6), budget=2 ** 9, witnesses=2)
    assert rep["pass"], rep["failures"][:3]


def test_extension_property_reports_failures():
    rep = check_extension_property(bit_graph(), 2, range(6), budget=6)
    assert not rep["pass"] and rep["failures"]


@settings(max_examples=60)
@given(st.data())
def test_one_extension_builds_partial_isomorphisms(data):
    T = graph_to_tournament(bit_graph())
    n = 12
    P = prefix(T, n)
    dom = data.draw(st.lists(st.integers(0, n), unique=True, max_size=3))
    img = data.draw(st.lists(st.integers(0, n), unique=True, min_size=len(dom), max_size=len(dom)))
    phi = dict(zip(dom, img))
    if not is_partial_iso(P, P, phi):
        return
    v = data.draw(st.integers(0, n).filter(lambda x: x not in phi))
    w = one_extension(T, phi, v)
    assert w is not None and w not in phi.values()
    for h, k in phi.items():
        assert T(h, v) == T(k, w)
