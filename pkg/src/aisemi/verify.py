"""Named, scripted checks reproducing the desk-scale facts about these semirings.

Each check is a plain function ``check(budget, seed) -> details`` that raises
``CheckFailed`` with a concrete counterexample when the fact does not hold.
``budget`` is a step limit for the searches a check runs (``None`` keeps each
check's own default); exhausting it turns the result into ``exhausted``.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Any, Callable, Optional

from .constructions import (
    A1_SWAPPED,
    FOUR_ELEMENT_AS_PRINTED,
    TABLE_NAMES,
    block_semiring,
    catalog,
    hypergraph_semiring,
    multiplicative_partial,
    partition_system,
    partition_systems_up_to_iso,
    subsemiring_quotient_model,
    word_semiring,
)
from .hypergraphs import (
    DEFAULT_HOM_BUDGET,
    Hypergraph,
    block_hypergraph,
    disjoint_edges,
    fano_plane,
    find_hom,
    girth,
    hypergraph_isomorphic,
    is_hom,
    k_subsets_system,
    kneser,
    recognize_block,
    strong_chromatic_number,
    two_colourable,
    two_in_three_satisfiable,
)
from .semiring import (
    Budget,
    Exhausted,
    ValidationError,
    find_homomorphism,
    idempotent_set,
    is_flat,
    is_subdirect_embedding,
    is_subdirectly_irreducible,
    is_zero_cancellative,
    isomorphic,
    least_nonzero_ideal,
    nilpotency_index,
    validate,
)
from .terms import (
    Identity,
    Term,
    delta,
    evaluate,
    nfb_identity,
    parse_identity,
    render,
    s7_satisfies,
    s7zero_sufficient,
    satisfies,
    t_of_hypergraph,
)


class UnknownCheck(KeyError):
    pass


class CheckFailed(Exception):
    def __init__(self, witness: Any, **extra):
        self.witness = witness
        self.extra = extra
        super().__init__(str(witness))


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | exhausted
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _budget(budget: Optional[int], default: Optional[int] = None) -> Budget:
    return Budget(default if budget is None else budget)


def _fail_unless(cond: bool, witness, **extra):
    if not cond:
        raise CheckFailed(witness, **extra)


# ---------------------------------------------------------------------------
# the checks


def check_tables_valid(budget, seed):
    names = list(TABLE_NAMES) + ["S7_0"]
    sizes = {}
    for name in names:
        try:
            sizes[name] = catalog(name).size
        except ValidationError as exc:
            raise CheckFailed({"semiring": name, "error": str(exc)}) from None
    printed_failures = {}
    for name in A1_SWAPPED:
        add, mul = FOUR_ELEMENT_AS_PRINTED[name]
        try:
            validate(["inf", "a", "1", "b"], add, mul)
        except ValidationError as exc:
            printed_failures[name] = str(exc)
    return {"validated": sizes, "corrected_from_printed": printed_failures}


S7_HOLDS = ["x.x.x = x.x", "x.y = y.x", "x + x.y = x.y.y", "x + y.y = x.x.y.y"]
S7_FAILS = ["x.x = x", "x.x.y = x.x"]


def check_s7_identities(budget, seed):
    S7 = catalog("S7")
    b = _budget(budget)
    out = {}
    for text in S7_HOLDS:
        r = satisfies(S7, parse_identity(text), budget=b)
        _fail_unless(r.holds, {"identity": text, "assignment": r.witness})
        out[text] = "holds"
    for text in S7_FAILS:
        r = satisfies(S7, parse_identity(text), budget=b)
        _fail_unless(not r.holds, {"identity": text, "expected": "fails", "got": "holds"})
        out[text] = {"fails_at": r.witness}
    return out


VARS4 = ("x", "y", "z", "w")


def _random_word(rng: random.Random, letters, max_len=4):
    return tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))


def _random_term(rng: random.Random, letters, max_summands=3, max_len=4) -> Term:
    return Term(tuple(_random_word(rng, letters, max_len) for _ in range(rng.randint(1, max_summands))))


def random_identity(rng: random.Random) -> Identity:
    """Mix of independent sides and near-miss perturbations so both outcomes occur."""
    letters = VARS4[: rng.randint(1, 4)]
    u = _random_term(rng, letters)
    mode = rng.randrange(4)
    if mode == 0:
        v = _random_term(rng, letters)
    elif mode == 1:
        # reorder letters inside each word: holds in every commutative model
        v = Term(tuple(tuple(rng.sample(w, len(w))) for w in u.summands))
    elif mode == 2:
        cu = sorted({x for w in u.summands for x in w})
        v = u + Term((_random_word(rng, cu),))
    else:
        # square one letter of one word
        ws = list(u.summands)
        i = rng.randrange(len(ws))
        j = rng.randrange(len(ws[i]))
        ws[i] = ws[i][: j + 1] + ws[i][j:]
        v = Term(tuple(ws))
    return Identity(u, v)


def check_s7_delta_criterion(budget, seed, count=1000):
    rng = random.Random(seed)
    S7 = catalog("S7")
    b = _budget(budget)
    holds = 0
    for _ in range(count):
        idt = random_identity(rng)
        syn = s7_satisfies(idt)
        sem = satisfies(S7, idt, budget=b)
        _fail_unless(syn == sem.holds, {"identity": str(idt), "criterion": syn,
                                        "brute_force": sem.holds, "assignment": sem.witness})
        holds += sem.holds
    return {"identities": count, "holding": holds, "failing": count - holds, "seed": seed}


def random_s7zero_pair(rng: random.Random):
    """Rejection-sample (u, q) with c(q) = c(u) and delta(u) empty."""
    while True:
        letters = VARS4[: rng.randint(1, 4)]
        u = _random_term(rng, letters)
        if delta(u):
            continue
        cu = sorted({x for w in u.summands for x in w})
        q = list(cu) + [rng.choice(cu) for _ in range(rng.randint(0, 2))]
        rng.shuffle(q)
        if s7zero_sufficient(u, q):
            return u, tuple(q)


def check_s7zero_sufficiency(budget, seed, count=500):
    rng = random.Random(seed)
    S = catalog("S7_0")
    b = _budget(budget)
    for _ in range(count):
        u, q = random_s7zero_pair(rng)
        idt = Identity(u, u + Term((q,)))
        r = satisfies(S, idt, budget=b)
        _fail_unless(r.holds, {"identity": str(idt), "assignment": r.witness})
    return {"pairs": count, "seed": seed}


def all_three_uniform(n: int):
    triples = [frozenset(t) for t in combinations(range(n), 3)]
    names = tuple(str(i + 1) for i in range(n))
    for bits in range(1, 1 << len(triples)):
        yield Hypergraph(names, tuple(t for i, t in enumerate(triples) if bits >> i & 1))


def random_three_uniform(rng: random.Random, max_vertices=8) -> Hypergraph:
    n = rng.randint(3, max_vertices)
    triples = [frozenset(t) for t in combinations(range(n), 3)]
    k = rng.randint(1, min(len(triples), 3 * n))
    return Hypergraph(tuple(str(i + 1) for i in range(n)), tuple(rng.sample(triples, k)))


def check_two_in_three_iff_delta(budget, seed):
    rng = random.Random(seed)
    b = _budget(budget)
    tally = {"exhaustive": 0, "random": 0, "satisfiable": 0}

    def one(H, kind):
        nonempty = bool(delta(t_of_hypergraph(H)))
        sat = two_in_three_satisfiable(H, b) is not None
        _fail_unless(nonempty == sat, {"vertices": list(H.vertices), "edges": H.named_edges(),
                                       "delta_nonempty": nonempty, "two_in_three": sat})
        tally[kind] += 1
        tally["satisfiable"] += sat

    for n in range(3, 6):
        for H in all_three_uniform(n):
            one(H, "exhaustive")
    for _ in range(200):
        one(random_three_uniform(rng), "random")
    tally["seed"] = seed
    return tally


EMBED_TARGETS = ("S4_84", "S4_94", "S4_117", "S4_123", "S4_173", "S4_282")


def check_embeddings(budget, seed):
    S7 = catalog("S7")
    b = _budget(budget)
    out = {}
    for name in EMBED_TARGETS:
        f = find_homomorphism(S7, catalog(name), require_injective=True, budget=b)
        _fail_unless(f is not None, {"target": name, "embedding": None})
        out[name] = f.as_names()
    return out


def check_subdirect_products(budget, seed):
    S7, S53 = catalog("S7"), catalog("S53")
    b = _budget(budget)
    out = {}
    for name in ("S4_123", "S4_359"):
        f = is_subdirect_embedding(catalog(name), S7, S53, b)
        _fail_unless(f is not None, {"semiring": name, "subdirect_embedding": None})
        out[name] = f.as_names()
    return out


def _systems():
    return [F for n in range(1, 5) for F in partition_systems_up_to_iso(n)]


def check_si_structure(budget, seed):
    b = _budget(budget)
    count = 0
    for F in _systems():
        b.tick()
        S = block_semiring(F)
        wit = {"system": F.named_blocks()}
        _fail_unless(is_flat(S), dict(wit, property="flat"))
        si = is_subdirectly_irreducible(S)
        _fail_unless(si.irreducible, dict(wit, property="subdirectly irreducible"))
        ideal = least_nonzero_ideal(S)
        _fail_unless(ideal.size == 2, dict(wit, property="least nonzero ideal of size 2",
                                           ideal=None if ideal.ideal is None else S.names(sorted(ideal.ideal))))
        E = idempotent_set(S)
        _fail_unless(len(E.E) <= 2 and E.equals_squares and E.is_subalgebra,
                     dict(wit, property="E(S) = squares, at most 2, subalgebra", E=S.names(sorted(E.E))))
        count += 1
    return {"systems": count}


def check_subsemi_quotient(budget, seed):
    b = _budget(budget)
    count = 0
    for F in _systems():
        A, B = block_semiring(F), subsemiring_quotient_model(F)
        iso = isomorphic(A, B, b)
        _fail_unless(iso is not None, {"system": F.named_blocks(), "sizes": [A.size, B.size]})
        count += 1
    return {"systems": count}


def check_block_roundtrip(budget, seed):
    b = _budget(budget)
    count = 0
    for F in _systems():
        H = block_hypergraph(F)
        rec = recognize_block(H, budget=b)
        wit = {"system": F.named_blocks()}
        _fail_unless(bool(rec), dict(wit, reason=rec.reason))
        iso = hypergraph_isomorphic(block_hypergraph(rec.system), H, b)
        _fail_unless(iso is not None, dict(wit, rebuilt=rec.system.named_blocks()))
        count += 1
    fano = recognize_block(fano_plane(), budget=b)
    _fail_unless(not fano, {"fano": "recognized as block hypergraph",
                            "system": fano.system and fano.system.named_blocks()})
    return {"systems": count, "fano": fano.reason}


def check_word_semiring_identities(budget, seed):
    b = _budget(budget)
    Mca = word_semiring(["a"], with_identity=True)
    iso = isomorphic(Mca, catalog("S7"), b)
    _fail_unless(iso is not None, {"M_c(a)": Mca.elements, "isomorphic_to_S7": False})
    S = word_semiring(["abc"])
    _fail_unless(S.size == 8, {"S_c(abc)": list(S.elements)})
    n4 = satisfies(S, parse_identity("x1.x2.x3.x4 = y1.y2.y3.y4"), cap=None, budget=b)
    _fail_unless(n4.holds, {"identity": "x1.x2.x3.x4 = y1.y2.y3.y4", "assignment": n4.witness})
    n3 = satisfies(S, parse_identity("x1.x2.x3 = y1.y2.y3"), cap=None, budget=b)
    _fail_unless(not n3.holds, {"identity": "x1.x2.x3 = y1.y2.y3", "expected": "fails"})
    k = nilpotency_index(S)
    _fail_unless(k == 4, {"nilpotency_index": k})
    return {"M_c(a)~S7": iso.as_names(), "size": S.size, "N3_counterexample": n3.witness,
            "nilpotency_index": k}


def check_nfb_mechanism(budget, seed):
    b = _budget(budget)
    H = disjoint_edges(2)
    g = girth(H)
    _fail_unless(g is None, {"girth": g})
    S = hypergraph_semiring(H)
    idt = nfb_identity(H, "full_product")
    phi = {f"x{v}": f"a_{v}" for v in H.vertices}
    lhs = S.elements[evaluate(S, idt.lhs, phi)]
    rhs = S.elements[evaluate(S, idt.rhs, phi)]
    _fail_unless((lhs, rhs) == ("a", "inf"), {"identity": str(idt), "assignment": phi,
                                             "lhs": lhs, "rhs": rhs})
    r = satisfies(S, idt, budget=b)
    _fail_unless(not r.holds, {"identity": str(idt), "expected": "fails"})
    return {"size": S.size, "identity": str(idt), "assignment": phi, "lhs": lhs, "rhs": rhs,
            "first_failure": r.witness}


def check_kneser_facts(budget, seed):
    b = _budget(budget)
    K2 = kneser(2, 5, 2)
    _fail_unless((K2.n, len(K2.edges)) == (10, 15), {"KG2(5,2)": [K2.n, len(K2.edges)]})
    K3 = kneser(3, 6, 2)
    B = block_hypergraph(k_subsets_system(2, 3))
    _fail_unless((B.n, len(B.edges)) == (15, 15), {"H_F23": [B.n, len(B.edges)]})
    iso = hypergraph_isomorphic(K3, B, b)
    _fail_unless(iso is not None, {"KG3(6,2)~H_F23": False})
    chi = strong_chromatic_number(K3, cap=K3.n, budget=b)
    k, l = 2, 3
    _fail_unless(chi == k * l - 2 * k + 2, {"strong_chromatic_number": chi, "expected": k * l - 2 * k + 2})
    return {"KG2(5,2)": [10, 15], "KG3(6,2)": [K3.n, len(K3.edges)], "strong_chromatic_number": chi}


def hyperhom_family():
    return {
        "single_edge": partition_system("123", [["1"], ["2"], ["3"]]),
        "two_disjoint_edges": recognize_block(disjoint_edges(2)).system,
        "F23": k_subsets_system(2, 3),
    }


def check_hyperhomom_equivalence(budget, seed):
    b = _budget(budget)
    fam = hyperhom_family()
    table = {}
    for gn, FG in fam.items():
        G = block_hypergraph(FG)
        tG = t_of_hypergraph(G)
        idt = Identity(tG, tG.square())
        for hn, FH in fam.items():
            H = block_hypergraph(FH)
            sat = satisfies(block_semiring(FH), idt, cap=None, budget=b)
            phi = find_hom(G, H, b)
            _fail_unless(sat.holds == (phi is None),
                         {"G": gn, "H": hn, "identity_holds": sat.holds, "hom": phi,
                          "assignment": sat.witness})
            if phi is not None:
                _fail_unless(is_hom(G, H, phi), {"G": gn, "H": hn, "bad_hom": phi})
            table[f"{gn}->{hn}"] = "hom" if phi is not None else "none"
    return table


def check_kneser_independence_p2_p3(budget, seed):
    A, B = kneser(3, 6, 2), kneser(3, 9, 3)
    out = {}
    for label, G, H in (("KG3(6,2)->KG3(9,3)", A, B), ("KG3(9,3)->KG3(6,2)", B, A)):
        b = _budget(budget, DEFAULT_HOM_BUDGET)
        phi = find_hom(G, H, b)
        _fail_unless(phi is None, {"direction": label, "hom": phi})
        out[label] = {"hom": None, "steps": b.steps}
    return out


def check_flatness_criteria(budget, seed):
    wit = {}
    for name, want in (("S7", True), ("S53", False), ("S7_0", False)):
        got = is_flat(catalog(name))
        wit[name] = got
        _fail_unless(got == want, {"semiring": name, "is_flat": got})
    words = {
        "S_c(a)": word_semiring(["a"]),
        "M_c(a)": word_semiring(["a"], with_identity=True),
        "M2": catalog("M2"),
        "S_c(abc)": word_semiring(["abc"]),
        "S_c(abcd)": word_semiring(["abcd"]),
        "S(ab)": word_semiring(["ab"], commutative=False),
        "M(ab)": word_semiring(["ab"], commutative=False, with_identity=True),
    }
    for name, S in words.items():
        _fail_unless(is_zero_cancellative(S), {"word_semiring": name, "zero_cancellative": False})
        # the multiplicative reduct must also strip down to a partial groupoid
        multiplicative_partial(S)
    wit["zero_cancellative"] = sorted(words)
    return wit


def check_fano_not_2colourable(budget, seed):
    b = _budget(budget)
    H = fano_plane()
    col = two_colourable(H, b)
    _fail_unless(col is None, {"colouring": col})
    # independent oracle: all 2^7 colourings
    for bits in range(1 << H.n):
        b.tick()
        ok = all(len({bits >> v & 1 for v in e}) == 2 for e in H.edges)
        _fail_unless(not ok, {"colouring": {H.vertices[v]: bits >> v & 1 for v in range(H.n)}})
    return {"colourings_tried": 1 << H.n}


CHECKS: dict[str, Callable] = {
    "tables_valid": check_tables_valid,
    "s7_identities": check_s7_identities,
    "s7_delta_criterion": check_s7_delta_criterion,
    "s7zero_sufficiency": check_s7zero_sufficiency,
    "two_in_three_iff_delta": check_two_in_three_iff_delta,
    "embeddings": check_embeddings,
    "subdirect_products": check_subdirect_products,
    "si_structure": check_si_structure,
    "subsemi_quotient": check_subsemi_quotient,
    "block_roundtrip": check_block_roundtrip,
    "word_semiring_identities": check_word_semiring_identities,
    "nfb_mechanism": check_nfb_mechanism,
    "kneser_facts": check_kneser_facts,
    "hyperhomom_equivalence": check_hyperhomom_equivalence,
    "kneser_independence_p2_p3": check_kneser_independence_p2_p3,
    "flatness_criteria": check_flatness_criteria,
    "fano_not_2colourable": check_fano_not_2colourable,
}


def list_checks() -> list[str]:
    return list(CHECKS)


def run_check(name: str, budget: Optional[int] = None, seed: int = 0) -> CheckResult:
    if name not in CHECKS:
        raise UnknownCheck(name)
    start = time.perf_counter()
    try:
        details = CHECKS[name](budget, seed)
        status = "pass"
    except CheckFailed as exc:
        status = "fail"
        details = {"counterexample": exc.witness, **exc.extra}
    except Exhausted as exc:
        status = "exhausted"
        details = {"budget": exc.steps}
    return CheckResult(name, status, _jsonable(details), time.perf_counter() - start)


def run_all(budget: Optional[int] = None, seed: int = 0) -> tuple[list[CheckResult], dict]:
    results = [run_check(name, budget, seed) for name in CHECKS]
    summary = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "exhausted")}
    summary["total"] = len(results)
    return results, summary


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=str) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, Term):
        return render(obj)
    return obj


def report_to_json(results: list[CheckResult], timings: bool = True) -> str:
    rows = []
    for r in results:
        row = asdict(r)
        if not timings:
            row.pop("elapsed")
        rows.append(row)
    return json.dumps(rows, ensure_ascii=False, indent=2)


def read_report(text: str) -> list[CheckResult]:
    return [CheckResult(r["name"], r["status"], r.get("details", {}), r.get("elapsed", 0.0))
            for r in json.loads(text)]
