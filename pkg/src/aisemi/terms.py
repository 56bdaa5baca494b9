"""ai-semiring terms in sum-of-words normal form, identities and their checks."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .semiring import FiniteSemiring, SemiringError, as_budget

Word = tuple[str, ...]

VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

DEFAULT_DELTA_CAP = 20
DEFAULT_VAR_CAP = 8


class ParseError(ValueError):
    def __init__(self, msg, pos):
        self.pos = pos
        super().__init__(f"{msg} at position {pos}")


class EmptyProduct(ParseError):
    def __init__(self, pos):
        super().__init__("empty product", pos)


class TooManyVariables(SemiringError):
    pass


class TermError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    """A finite nonempty set of words, kept sorted and duplicate free."""

    summands: tuple[Word, ...]

    def __post_init__(self):
        if not self.summands:
            raise TermError("a term needs at least one summand")
        if any(not w for w in self.summands):
            raise TermError("words must be nonempty")
        canon = tuple(sorted(set(self.summands)))
        if canon != self.summands:
            object.__setattr__(self, "summands", canon)

    @classmethod
    def of(cls, *words: Iterable[str]) -> "Term":
        return cls(tuple(tuple(w) for w in words))

    def __add__(self, other: "Term") -> "Term":
        return Term(self.summands + other.summands)

    def __mul__(self, other: "Term") -> "Term":
        return Term(tuple(p + q for p in self.summands for q in other.summands))

    def square(self) -> "Term":
        return self * self

    def variables(self) -> list[str]:
        """Variables in order of first appearance."""
        seen: dict[str, None] = {}
        for w in self.summands:
            for x in w:
                seen.setdefault(x)
        return list(seen)

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def variables(self) -> list[str]:
        out = dict.fromkeys(self.lhs.variables())
        out.update(dict.fromkeys(self.rhs.variables()))
        return list(out)

    def __str__(self):
        return f"{render(self.lhs)} ≈ {render(self.rhs)}"


def render(t: Term) -> str:
    return " + ".join(".".join(w) for w in t.summands)


# ---------------------------------------------------------------------------
# parsing


def parse_term(text: str) -> Term:
    """Parse ``product ("+" product)*`` where ``product := var ("." var)*``."""
    if not text or not text.strip():
        raise ParseError("empty term", 0)
    pos = 0
    n = len(text)
    words: list[Word] = []

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def product():
        nonlocal pos
        word = []
        while True:
            skip()
            m = VAR_RE.match(text, pos)
            if m is None:
                if pos >= n or text[pos] in "+.":
                    raise EmptyProduct(pos)
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            word.append(m.group())
            pos = m.end()
            skip()
            if pos < n and text[pos] == ".":
                pos += 1
                continue
            return tuple(word)

    while True:
        words.append(product())
        skip()
        if pos == n:
            break
        if text[pos] != "+":
            raise ParseError(f"expected '+' or '.', got {text[pos]!r}", pos)
        pos += 1
    return Term(tuple(words))


def parse_identity(text: str) -> Identity:
    """Parse ``LHS ≈ RHS`` (``=`` also accepted)."""
    parts = re.split(r"≈|=", text)
    if len(parts) != 2:
        raise ParseError("identity needs exactly one '≈' or '='", 0)
    left, right = parts
    try:
        lhs = parse_term(left)
    except ParseError as e:
        raise type(e)(*_reargs(e, 0)) from None
    offset = len(left) + 1
    try:
        rhs = parse_term(right)
    except ParseError as e:
        raise type(e)(*_reargs(e, offset)) from None
    return Identity(lhs, rhs)


def _reargs(e: ParseError, offset: int):
    if isinstance(e, EmptyProduct):
        return (e.pos + offset,)
    msg = str(e).rsplit(" at position", 1)[0]
    return (msg, e.pos + offset)


def identity_from_json(obj) -> Identity:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Identity(parse_term(obj["lhs"]), parse_term(obj["rhs"]))


def identity_to_json(idt: Identity) -> dict:
    return {"lhs": render(idt.lhs), "rhs": render(idt.rhs)}


# ---------------------------------------------------------------------------
# syntax: content, occurrences, delta


def content(u: Term) -> frozenset[str]:
    return frozenset(x for w in u.summands for x in w)


def occ(x: str, p: Sequence[str]) -> int:
    return sum(1 for y in p if y == x)


def delta(u: Term, cap: int = DEFAULT_DELTA_CAP) -> frozenset[frozenset[str]]:
    """All nonempty Z within c(u) meeting each summand in exactly one variable,
    which must occur exactly once in that summand."""
    xs = sorted(content(u))
    if len(xs) > cap:
        raise TooManyVariables(f"{len(xs)} variables exceed the delta cap of {cap}")
    bit = {x: 1 << i for i, x in enumerate(xs)}
    rows = []
    for w in u.summands:
        counts = Counter(w)
        cmask = once = 0
        for x, c in counts.items():
            cmask |= bit[x]
            if c == 1:
                once |= bit[x]
        rows.append((cmask, once))
    out = []
    for Z in range(1, 1 << len(xs)):
        for cmask, once in rows:
            hit = Z & cmask
            if hit & (hit - 1) or not hit & once:
                break
        else:
            out.append(frozenset(x for x in xs if Z & bit[x]))
    return frozenset(out)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(S: FiniteSemiring, u: Term, assignment: Mapping[str, int | str]) -> int:
    val = {x: (S.index(v) if isinstance(v, str) else v) for x, v in assignment.items()}
    total = None
    for w in u.summands:
        acc = val[w[0]]
        for x in w[1:]:
            acc = S.mul[acc][val[x]]
        total = acc if total is None else S.add[total][acc]
    return total


@dataclass(frozen=True)
class SatResult:
    holds: bool
    witness: Optional[dict[str, str]] = None

    def __bool__(self):
        return self.holds


def satisfies(S: FiniteSemiring, idt: Identity, cap: Optional[int] = DEFAULT_VAR_CAP,
              budget=None) -> SatResult:
    """Brute force over all assignments, in carrier order.

    Variables are ordered by first appearance (lhs, then rhs) and assignments
    are enumerated lexicographically; the witness is the first failing one.
    Subtrees on which both sides have already been absorbed by the additive
    top are skipped, since no completion can separate them. A subtree is
    determined by the partial sums and the values of variables still used by
    unfinished words, so subtrees already found to hold are not revisited.
    """
    xs = idt.variables()
    if cap is not None and len(xs) > cap:
        raise TooManyVariables(f"{len(xs)} variables exceed the brute-force cap of {cap}")
    b = as_budget(budget)
    pos = {x: i for i, x in enumerate(xs)}
    n = len(xs)
    # completing[d] lists (side, word as positions) finished once variable d is set
    completing: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(n)]
    last_use = [-1] * n
    for side, t in enumerate((idt.lhs, idt.rhs)):
        for w in t.summands:
            ps = tuple(pos[x] for x in w)
            done = max(ps)
            completing[done].append((side, ps))
            for p in ps:
                last_use[p] = max(last_use[p], done)
    live = [tuple(p for p in range(d) if last_use[p] >= d) for d in range(n)]
    top = S.additive_top()
    A, M = S.add, S.mul
    m = S.size
    val = [0] * n
    settled: set = set()

    def rec(d, left, right):
        if d == n:
            return left != right
        key = (d, left, right, tuple(val[p] for p in live[d]))
        if key in settled:
            return False
        for c in range(m):
            b.tick()
            val[d] = c
            lo, ro = left, right
            for side, ps in completing[d]:
                acc = val[ps[0]]
                for p in ps[1:]:
                    acc = M[acc][val[p]]
                if side == 0:
                    lo = acc if lo is None else A[lo][acc]
                else:
                    ro = acc if ro is None else A[ro][acc]
            if top is not None and lo == top and ro == top:
                continue
            if rec(d + 1, lo, ro):
                return True
        settled.add(key)
        return False

    if rec(0, None, None):
        return SatResult(False, {x: S.elements[val[i]] for i, x in enumerate(xs)})
    return SatResult(True, None)


# ---------------------------------------------------------------------------
# S_7 and S_7^0 criteria


def s7_satisfies(idt: Identity, cap: int = DEFAULT_DELTA_CAP) -> bool:
    """Decide S_7 |= u ≈ v syntactically: same content and same delta-sets."""
    return content(idt.lhs) == content(idt.rhs) and delta(idt.lhs, cap) == delta(idt.rhs, cap)


def s7zero_sufficient(u: Term, q: Sequence[str]) -> bool:
    """Sufficient condition for S_7^0 |= u ≈ u + q."""
    return content(u) == frozenset(q) and not delta(u)


# ---------------------------------------------------------------------------
# hypergraph terms


def vertex_variables(H) -> list[str]:
    """Variable name for each vertex: ``x<name>`` when the names allow it."""
    if all(re.fullmatch(r"[A-Za-z0-9_]+", v) for v in H.vertices):
        return [f"x{v}" for v in H.vertices]
    return [f"x{i + 1}" for i in range(len(H.vertices))]


def t_of_hypergraph(H) -> Term:
    if not H.edges:
        raise TermError("hypergraph has no hyperedges")
    xs = vertex_variables(H)
    return Term(tuple(tuple(xs[v] for v in sorted(e)) for e in H.edges))


def q_of_hypergraph(H) -> Word:
    return tuple(vertex_variables(H))


class TooFewVertices(TermError):
    pass


def nfb_identity(H, w_choice: str = "full_product", vertex=None) -> Identity:
    """t_H ≈ t_H + w for w one of ``square``, ``single_variable``, ``full_product``."""
    t = t_of_hypergraph(H)
    xs = vertex_variables(H)
    if w_choice == "square":
        w = t.square()
    elif w_choice == "single_variable":
        if vertex is None:
            v = 0
        elif isinstance(vertex, int):
            v = vertex
        else:
            v = H.vertices.index(vertex)
        w = Term(((xs[v],),))
    elif w_choice == "full_product":
        if len(H.vertices) <= 3:
            raise TooFewVertices("the full product is a non-hyperedge term only beyond 3 vertices")
        w = Term((q_of_hypergraph(H),))
    else:
        raise ValueError(f"unknown choice {w_choice!r}")
    return Identity(t, t + w)


@dataclass(frozen=True)
class DeltaEquivalence:
    delta_nonempty: bool
    satisfiable: bool

    @property
    def agree(self) -> bool:
        return self.delta_nonempty == self.satisfiable


def two_in_three_delta_equivalence(H) -> DeltaEquivalence:
    from .hypergraphs import NotThreeUniform, two_in_three_satisfiable

    if any(len(e) != 3 for e in H.edges):
        raise NotThreeUniform("hypergraph is not 3-uniform")
    nonempty = bool(delta(t_of_hypergraph(H)))
    sat = two_in_three_satisfiable(H) is not None
    return DeltaEquivalence(nonempty, sat)
