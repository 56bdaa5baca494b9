import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aisemi.constructions import catalog, hypergraph_semiring, word_semiring
from aisemi.hypergraphs import Hypergraph, NotThreeUniform, disjoint_edges, fano_plane, single_edge
from aisemi.semiring import Exhausted
from aisemi.terms import (
    EmptyProduct,
    Identity,
    ParseError,
    Term,
    TermError,
    TooFewVertices,
    TooManyVariables,
    content,
    delta,
    evaluate,
    identity_from_json,
    identity_to_json,
    nfb_identity,
    occ,
    parse_identity,
    parse_term,
    q_of_hypergraph,
    render,
    s7_satisfies,
    s7zero_sufficient,
    satisfies,
    t_of_hypergraph,
    two_in_three_delta_equivalence,
)
from aisemi.verify import random_identity, random_s7zero_pair

VARS = ["x", "y", "z", "w"]
words = st.lists(st.sampled_from(VARS), min_size=1, max_size=4).map(tuple)
terms = st.lists(words, min_size=1, max_size=3).map(lambda ws: Term(tuple(ws)))


def naive_satisfies(S, idt):
    xs = idt.variables()
    for vals in product(range(S.size), repeat=len(xs)):
        a = dict(zip(xs, vals))
        if evaluate(S, idt.lhs, a) != evaluate(S, idt.rhs, a):
            return False, {x: S.elements[v] for x, v in a.items()}
    return True, None


def naive_delta(u):
    xs = sorted(content(u))
    out = set()
    for r in range(1, len(xs) + 1):
        for Z in combinations(xs, r):
            if all(sum(1 for x in Z if x in w) == 1 and
                   all(occ(x, w) == 1 for x in Z if x in w) for w in u.summands):
                out.add(frozenset(Z))
    return out


# parsing -------------------------------------------------------------------


def test_parse_and_render():
    t = parse_term("y.x + x.y.y +  y.x")
    assert t.summands == (("x", "y", "y"), ("y", "x"))
    assert render(t) == "x.y.y + y.x"
    assert t.variables() == ["x", "y"]


def test_parse_identity_both_signs():
    a = parse_identity("x.x.x ≈ x.x")
    b = parse_identity("x.x.x = x.x")
    assert a == b
    assert str(a) == "x.x.x ≈ x.x"


@pytest.mark.parametrize("text,exc,pos", [
    ("", ParseError, 0),
    ("x + ", EmptyProduct, 4),
    ("x..y", EmptyProduct, 2),
    ("x * y", ParseError, 2),
    ("x + .y", EmptyProduct, 4),
])
def test_parse_errors(text, exc, pos):
    with pytest.raises(exc) as info:
        parse_term(text)
    assert info.value.pos == pos


def test_identity_error_positions_are_absolute():
    with pytest.raises(EmptyProduct) as info:
        parse_identity("x = y + ")
    assert info.value.pos == 8
    with pytest.raises(ParseError):
        parse_identity("x = y = z")


def test_identity_json_roundtrip():
    idt = parse_identity("x + y.y = x.x.y.y")
    assert identity_from_json(identity_to_json(idt)) == idt
    assert identity_from_json('{"lhs": "x", "rhs": "x.x"}') == parse_identity("x=x.x")


def test_term_invariants():
    with pytest.raises(TermError):
        Term(())
    with pytest.raises(TermError):
        Term(((),))
    t = Term.of("xy", "z")
    assert (t * t).summands == (("x", "y", "x", "y"), ("x", "y", "z"), ("z", "x", "y"), ("z", "z"))


@given(terms)
def test_render_parse_roundtrip(t):
    assert parse_term(render(t)) == t


# delta ---------------------------------------------------------------------


def test_delta_examples():
    assert delta(parse_term("x.y.z")) == {frozenset("x"), frozenset("y"), frozenset("z")}
    assert delta(parse_term("x.x")) == frozenset()
    assert delta(parse_term("x.y + y.z")) == {frozenset("y"), frozenset("xz")}


@given(terms)
def test_delta_matches_definition(t):
    assert delta(t) == naive_delta(t)


def test_delta_cap():
    t = Term((tuple(f"v{i}" for i in range(21)),))
    with pytest.raises(TooManyVariables):
        delta(t)


# satisfaction --------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(terms, terms, st.sampled_from(["S7", "S53", "S4_84", "S4_173", "S7_0", "M2"]))
def test_satisfies_matches_naive_enumeration(u, v, name):
    S = catalog(name)
    idt = Identity(u, v)
    r = satisfies(S, idt)
    holds, witness = naive_satisfies(S, idt)
    assert r.holds == holds
    # memoised search still reports the lexicographically first failure
    assert r.witness == witness


def test_satisfies_cap_and_budget():
    S = catalog("S7")
    idt = parse_identity("x1.x2.x3.x4.x5.x6.x7.x8.x9 = x1")
    with pytest.raises(TooManyVariables):
        satisfies(S, idt)
    with pytest.raises(Exhausted):
        satisfies(S, parse_identity("x.y = y.x"), budget=3)


def test_s7_identities_by_brute_force():
    S = catalog("S7")
    for text in ["x.x.x = x.x", "x.y = y.x", "x + x.y = x.y.y", "x + y.y = x.x.y.y"]:
        assert satisfies(S, parse_identity(text))
    assert not satisfies(S, parse_identity("x.x = x"))
    assert not satisfies(S, parse_identity("x.x.y = x.x"))


@settings(max_examples=300, deadline=None)
@given(terms, terms)
def test_s7_criterion_matches_brute_force(u, v):
    idt = Identity(u, v)
    assert s7_satisfies(idt) == satisfies(catalog("S7"), idt).holds


def test_s7_criterion_random_mix():
    rng = random.Random(7)
    S7 = catalog("S7")
    seen = set()
    for _ in range(300):
        idt = random_identity(rng)
        r = satisfies(S7, idt).holds
        assert s7_satisfies(idt) == r
        seen.add(r)
    assert seen == {True, False}


def test_s7zero_sufficient_condition():
    rng = random.Random(3)
    S = catalog("S7_0")
    for _ in range(100):
        u, q = random_s7zero_pair(rng)
        assert s7zero_sufficient(u, q)
        assert satisfies(S, Identity(u, u + Term((q,))))
    assert not s7zero_sufficient(parse_term("x.y"), ("x", "y"))   # delta nonempty
    assert not s7zero_sufficient(parse_term("x.x"), ("x", "y"))   # content differs


def test_word_semiring_n4_identity():
    S = word_semiring(["abc"])
    assert satisfies(S, parse_identity("x1.x2.x3.x4 = y1.y2.y3.y4"), cap=None)
    assert not satisfies(S, parse_identity("x1.x2.x3 = y1.y2.y3"), cap=None)


# hypergraph terms ----------------------------------------------------------


def test_t_and_q_of_hypergraph():
    H = disjoint_edges(2)
    assert render(t_of_hypergraph(H)) == "x1.x2.x3 + x4.x5.x6"
    assert q_of_hypergraph(H) == ("x1", "x2", "x3", "x4", "x5", "x6")
    odd = Hypergraph.from_names(["p-1", "p-2", "p-3"], [["p-1", "p-2", "p-3"]])
    assert render(t_of_hypergraph(odd)) == "x1.x2.x3"


def test_nfb_identity_variants():
    H = disjoint_edges(2)
    full = nfb_identity(H)
    assert render(full.rhs) == "x1.x2.x3 + x1.x2.x3.x4.x5.x6 + x4.x5.x6"
    sq = nfb_identity(H, "square")
    assert len(sq.rhs.summands) == 2 + 4
    single = nfb_identity(H, "single_variable", "4")
    assert ("x4",) in single.rhs.summands
    with pytest.raises(TooFewVertices):
        nfb_identity(single_edge())
    with pytest.raises(ValueError):
        nfb_identity(H, "cube")


def test_nfb_identity_fails_on_hypergraph_semiring():
    H = disjoint_edges(2)
    S = hypergraph_semiring(H)
    idt = nfb_identity(H)
    phi = {f"x{v}": f"a_{v}" for v in H.vertices}
    assert S.elements[evaluate(S, idt.lhs, phi)] == "a"
    assert S.elements[evaluate(S, idt.rhs, phi)] == "inf"
    assert not satisfies(S, idt)


def test_two_in_three_delta_equivalence():
    assert two_in_three_delta_equivalence(fano_plane()).agree
    assert two_in_three_delta_equivalence(single_edge()).delta_nonempty
    with pytest.raises(NotThreeUniform):
        two_in_three_delta_equivalence(Hypergraph.from_names("ab", ["ab"]))
