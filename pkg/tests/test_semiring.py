from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aisemi.constructions import catalog
from aisemi.semiring import (
    Budget,
    Congruence,
    Exhausted,
    MalformedTable,
    NoZeroElement,
    NotAssociative,
    NotACongruence,
    NotCommutativeAdd,
    NotDistributive,
    NotFlat,
    NotIdempotentAdd,
    TrivialAlgebra,
    check_congruence,
    direct_product,
    find_homomorphism,
    flat_top,
    idempotent_set,
    is_flat,
    is_subdirect_embedding,
    is_subdirectly_irreducible,
    is_zero_cancellative,
    isomorphic,
    least_nonzero_ideal,
    nilpotency_index,
    principal_congruence,
    projections,
    quotient,
    satisfies_Nk,
    subalgebra_generated,
    trivial_semiring,
    validate,
)

S7_ELEMS = ["inf", "a", "1"]
S7_ADD = [["inf", "inf", "inf"], ["inf", "a", "inf"], ["inf", "inf", "1"]]
S7_MUL = [["inf", "inf", "inf"], ["inf", "inf", "a"], ["inf", "a", "1"]]


def all_maps(A, B):
    for img in product(range(B.size), repeat=A.size):
        ok = all(img[A.add[x][y]] == B.add[img[x]][img[y]] and img[A.mul[x][y]] == B.mul[img[x]][img[y]]
                 for x in range(A.size) for y in range(A.size))
        if ok:
            yield img


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def all_congruences(S):
    out = []
    for part in set_partitions(list(range(S.size))):
        theta = Congruence.from_blocks(S.size, part)
        try:
            check_congruence(S, theta)
        except NotACongruence:
            continue
        out.append(theta)
    return out


# validation ----------------------------------------------------------------


def test_validate_s7_from_names():
    S = validate(S7_ELEMS, S7_ADD, S7_MUL, "inf")
    assert S.size == 3
    assert S.elements[S.top] == "inf"
    assert S.mul_table_names() == S7_MUL


def test_validate_accepts_indices():
    S = validate(["x", "y"], [[0, 1], [1, 1]], [[0, 1], [1, 1]])
    assert S.add[0][1] == 1


@pytest.mark.parametrize("add,mul,exc", [
    ([[0, 1], [1, 0]], [[0, 0], [0, 0]], NotIdempotentAdd),
    ([[0, 0], [1, 1]], [[0, 0], [0, 0]], NotCommutativeAdd),
])
def test_validate_additive_failures(add, mul, exc):
    with pytest.raises(exc):
        validate(["p", "q"], add, mul)


def test_validate_reports_associativity_witness():
    # right-zero-ish product that is not associative on 3 elements
    add = [[0, 0, 0], [0, 1, 0], [0, 0, 2]]
    mul = [[0, 0, 0], [0, 2, 1], [0, 1, 0]]
    with pytest.raises(NotAssociative) as info:
        validate(["t", "p", "q"], add, mul)
    assert info.value.op == "*"
    x, y, z = info.value.witness
    S = {"t": 0, "p": 1, "q": 2}
    x, y, z = S[x], S[y], S[z]
    assert mul[mul[x][y]][z] != mul[x][mul[y][z]]


def test_validate_distributivity_failure():
    # chain 0 < 1 under max, multiplication constant 1 except 0*0 = 0
    add = [[0, 1], [1, 1]]
    mul = [[1, 1], [1, 0]]
    with pytest.raises((NotDistributive, NotAssociative)):
        validate(["p", "q"], add, mul)


def test_validate_malformed():
    with pytest.raises(MalformedTable):
        validate(["a", "a"], [[0, 0], [0, 0]], [[0, 0], [0, 0]])
    with pytest.raises(MalformedTable):
        validate(["a b"], [[0]], [[0]])
    with pytest.raises(MalformedTable):
        validate(["a", "b"], [[0, 0]], [[0, 0], [0, 0]])
    with pytest.raises(MalformedTable):
        validate(["a", "b"], [[0, "z"], ["z", 1]], [[0, 0], [0, 0]])
    with pytest.raises(MalformedTable):
        validate([], [], [])


def test_validate_rejects_non_absorbing_top():
    with pytest.raises(MalformedTable):
        validate(S7_ELEMS, S7_ADD, S7_MUL, "a")


# products, subalgebras, homomorphisms --------------------------------------


def test_direct_product_and_projections():
    S7, S53 = catalog("S7"), catalog("S53")
    P = direct_product(S7, S53)
    assert P.size == 9
    validate(P.elements, P.add, P.mul)
    p1, p2 = projections(S7, S53, P)
    assert p1.surjective and p2.surjective
    assert p1.preserves_operations() and p2.preserves_operations()


def test_subalgebra_generated_by_one():
    S7 = catalog("S7")
    sub, inc = subalgebra_generated(S7, ["1"])
    assert sub.elements == ("1",)
    assert inc.preserves_operations()
    sub, _ = subalgebra_generated(S7, ["a"])
    assert set(sub.elements) == {"a", "inf"}


def test_find_homomorphism_matches_brute_force(small_semirings):
    names = ["S7", "S53", "M2", "Sc_a", "S4_84", "S4_359", "Mc_a"]
    for an in names:
        for bn in names:
            A, B = small_semirings[an], small_semirings[bn]
            homs = list(all_maps(A, B))
            f = find_homomorphism(A, B)
            if homs:
                assert f is not None and f.image == min(homs)
                assert f.preserves_operations()
            else:
                assert f is None
            inj = [h for h in homs if len(set(h)) == len(h)]
            g = find_homomorphism(A, B, require_injective=True)
            assert (g is None) == (not inj)
            if g is not None:
                assert g.image == min(inj)


def test_isomorphic_is_symmetric_and_exact(small_semirings):
    S = small_semirings
    assert isomorphic(S["Mc_a"], S["S7"]) is not None
    assert isomorphic(S["S7"], S["S53"]) is None
    assert isomorphic(S["S4_94"], S["S4_117"]) is None
    f = isomorphic(S["S7"], S["S7"].rename(["z", "p", "e"]))
    assert f is not None and f.as_names() == {"inf": "z", "a": "p", "1": "e"}


def test_search_budget():
    with pytest.raises(Exhausted):
        find_homomorphism(catalog("S4_84"), catalog("S7"), budget=Budget(2))


def test_subdirect_embeddings():
    S7, S53 = catalog("S7"), catalog("S53")
    for name in ("S4_123", "S4_359"):
        f = is_subdirect_embedding(catalog(name), S7, S53)
        assert f is not None and f.injective and f.preserves_operations()
        p1 = {x.split(",")[0] for x in f.as_names().values()}
        assert len(p1) == 3
    # a 3-element algebra cannot map onto both factors and be a copy of S7 x S53
    assert is_subdirect_embedding(catalog("M2"), S7, S53) is None


# congruences ---------------------------------------------------------------


def test_principal_congruence_is_least(small_semirings):
    for name in ("S7", "S53", "S4_84", "S4_173", "Sc_ab", "S7_0"):
        S = small_semirings[name]
        congs = all_congruences(S)
        for a in range(S.size):
            for b in range(a + 1, S.size):
                theta = principal_congruence(S, a, b)
                check_congruence(S, theta)
                assert theta.relates(a, b)
                containing = [c for c in congs if c.relates(a, b)]
                assert theta in containing
                assert all(theta.leq(c) for c in containing)


def test_si_matches_congruence_lattice(small_semirings):
    for name, S in small_semirings.items():
        if S.size > 7:
            continue
        nontrivial = [c for c in all_congruences(S) if not c.is_identity()]
        meet = nontrivial[0]
        for c in nontrivial[1:]:
            meet = meet.meet(c)
        r = is_subdirectly_irreducible(S)
        assert r.irreducible == (not meet.is_identity()), name
        if r.irreducible:
            assert r.monolith == meet


def test_s7_is_si_with_monolith_inf_a():
    r = is_subdirectly_irreducible(catalog("S7"))
    assert r.irreducible
    assert r.monolith.named_blocks(catalog("S7")) == [["inf", "a"], ["1"]]


def test_trivial_algebra_rejected():
    with pytest.raises(TrivialAlgebra):
        is_subdirectly_irreducible(trivial_semiring())


def test_quotient_and_bad_congruence():
    S = catalog("S7")
    Q, f = quotient(S, principal_congruence(S, "inf", "a"))
    assert Q.size == 2 and f.surjective and f.preserves_operations()
    with pytest.raises(NotACongruence):
        quotient(S, Congruence.from_blocks(3, [[1, 2]]))


# flatness, ideals, idempotents, nilpotency ---------------------------------


def test_flatness():
    assert is_flat(catalog("S7"))
    assert flat_top(catalog("S7")) == 0
    assert not is_flat(catalog("S53"))
    assert not is_flat(catalog("S7_0"))
    with pytest.raises(NotFlat):
        least_nonzero_ideal(catalog("S53"))


def test_zero_cancellative():
    assert is_zero_cancellative(catalog("S7"))
    # S4_173: a*b = a*1 = a with b != 1
    assert not is_zero_cancellative(catalog("S4_173"))
    # x*y = max on the chain p < q: q is the zero and p*p = p the only other product
    chain = validate(["p", "q"], [[0, 1], [1, 1]], [[0, 1], [1, 1]])
    assert is_zero_cancellative(chain)
    assert nilpotency_index(chain) is None


def test_no_zero_element():
    # additive semilattice {p < q}, multiplication = projection to the first factor
    S = validate(["p", "q"], [[0, 1], [1, 1]], [[0, 0], [1, 1]])
    with pytest.raises(NoZeroElement):
        is_zero_cancellative(S)
    with pytest.raises(NoZeroElement):
        nilpotency_index(S)


def test_s7_ideal_and_idempotents():
    S = catalog("S7")
    I = least_nonzero_ideal(S)
    assert I.size == 2 and S.names(sorted(I.ideal)) == ["inf", "a"]
    E = idempotent_set(S)
    assert S.names(sorted(E.E)) == ["inf", "1"]
    assert E.equals_squares and E.is_subalgebra


def test_nilpotency():
    from aisemi.constructions import word_semiring
    assert nilpotency_index(word_semiring(["abc"])) == 4
    assert nilpotency_index(word_semiring(["a"])) == 2
    assert nilpotency_index(catalog("S7")) is None
    S = word_semiring(["abc"])
    assert satisfies_Nk(S, 4) and not satisfies_Nk(S, 3)
    with pytest.raises(ValueError):
        satisfies_Nk(S, 0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["S7", "S53", "S4_84", "S4_123", "S4_359", "S7_0"]),
       st.sampled_from(["S7", "S53", "M2"]))
def test_product_is_valid_and_projections_are_homs(an, bn):
    A, B = catalog(an), catalog(bn)
    P = direct_product(A, B)
    validate(P.elements, P.add, P.mul)
    for p in projections(A, B, P):
        assert p.preserves_operations()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["S7", "S53", "S4_84", "S4_94", "S4_117", "S4_173", "S4_282", "S7_0"]),
       st.data())
def test_quotient_map_is_homomorphism(name, data):
    S = catalog(name)
    a = data.draw(st.integers(0, S.size - 1))
    b = data.draw(st.integers(0, S.size - 1))
    Q, f = quotient(S, principal_congruence(S, a, b))
    validate(Q.elements, Q.add, Q.mul)
    assert f.preserves_operations() and f.surjective
