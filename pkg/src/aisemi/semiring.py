"""Finite additively idempotent semirings.

A semiring is stored as a tuple of element names plus two index tables.
Everything here is immutable; searches are deterministic and walk the
carrier in its stored order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence


class SemiringError(Exception):
    pass


class ValidationError(SemiringError):
    """Raised by :func:`validate`; ``witness`` holds the offending element names."""

    axiom = "axiom"

    def __init__(self, *witness, detail: str = ""):
        self.witness = tuple(witness)
        msg = f"{self.axiom} fails at {self.witness}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class MalformedTable(ValidationError):
    axiom = "malformed table"


class NotIdempotentAdd(ValidationError):
    axiom = "x+x=x"


class NotCommutativeAdd(ValidationError):
    axiom = "x+y=y+x"


class NotAssociative(ValidationError):
    axiom = "associativity"

    def __init__(self, op, a, b, c):
        self.op = op
        super().__init__(a, b, c, detail=f"op {op}")


class NotDistributive(ValidationError):
    axiom = "distributivity"

    def __init__(self, side, a, b, c):
        self.side = side
        super().__init__(a, b, c, detail=f"{side} law")


class TrivialAlgebra(SemiringError):
    pass


class NotFlat(SemiringError):
    pass


class NoZeroElement(SemiringError):
    pass


class NotACongruence(SemiringError):
    def __init__(self, a, b, c, op):
        self.witness = (a, b, c, op)
        super().__init__(f"{a}~{b} but not compatible under {op} with {c}")


class Exhausted(SemiringError):
    """A search ran out of its step budget."""

    def __init__(self, steps):
        self.steps = steps
        super().__init__(f"step budget of {steps} exhausted")


class Budget:
    """Step counter shared by backtracking searches; ``limit=None`` means unbounded."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.steps = 0

    def tick(self, n: int = 1):
        self.steps += n
        if self.limit is not None and self.steps > self.limit:
            raise Exhausted(self.limit)


def as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FiniteSemiring:
    elements: tuple[str, ...]
    add: Table
    mul: Table
    top: Optional[int] = None

    def __len__(self):
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(name) from None

    def plus(self, x: int, y: int) -> int:
        return self.add[x][y]

    def times(self, x: int, y: int) -> int:
        return self.mul[x][y]

    def names(self, idxs: Iterable[int]) -> list[str]:
        return [self.elements[i] for i in idxs]

    def add_table_names(self) -> list[list[str]]:
        return [[self.elements[v] for v in row] for row in self.add]

    def mul_table_names(self) -> list[list[str]]:
        return [[self.elements[v] for v in row] for row in self.mul]

    def additive_top(self) -> Optional[int]:
        """The absorbing element of the semilattice reduct, if any."""
        n = self.size
        for z in range(n):
            if all(self.add[z][x] == z for x in range(n)):
                return z
        return None

    def multiplicative_zero(self) -> Optional[int]:
        n = self.size
        for z in range(n):
            if all(self.mul[z][x] == z and self.mul[x][z] == z for x in range(n)):
                return z
        return None

    def rename(self, names: Sequence[str]) -> "FiniteSemiring":
        if len(names) != self.size or len(set(names)) != self.size:
            raise ValueError("rename needs one unique name per element")
        return FiniteSemiring(tuple(names), self.add, self.mul, self.top)

    def __repr__(self):
        return f"FiniteSemiring({list(self.elements)})"


def _check_name(name):
    if not isinstance(name, str) or not name or any(ch.isspace() for ch in name):
        raise MalformedTable(name, detail="element names must be nonempty strings without whitespace")


def validate(elements: Sequence[str], add, mul, top=None) -> FiniteSemiring:
    """Check every ai-semiring axiom and return the semiring.

    ``add`` and ``mul`` may hold indices or element names. ``top`` may be a
    name or an index. The first failing axiom raises a ``ValidationError``
    subclass carrying a witness.
    """
    elements = tuple(elements)
    n = len(elements)
    if n == 0:
        raise MalformedTable(detail="empty carrier")
    for name in elements:
        _check_name(name)
    if len(set(elements)) != n:
        raise MalformedTable(detail="duplicate element names")
    pos = {name: i for i, name in enumerate(elements)}

    def conv(table, label):
        if len(table) != n or any(len(row) != n for row in table):
            raise MalformedTable(label, detail="table is not square of carrier size")
        out = []
        for row in table:
            new = []
            for v in row:
                if isinstance(v, str):
                    if v not in pos:
                        raise MalformedTable(label, v, detail="unknown element")
                    v = pos[v]
                elif not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                    raise MalformedTable(label, v, detail="index out of range")
                new.append(v)
            out.append(tuple(new))
        return tuple(out)

    A = conv(add, "add")
    M = conv(mul, "mul")
    name = elements.__getitem__
    r = range(n)

    for x in r:
        if A[x][x] != x:
            raise NotIdempotentAdd(name(x))
    for x in r:
        for y in r:
            if A[x][y] != A[y][x]:
                raise NotCommutativeAdd(name(x), name(y))
    for label, T in (("+", A), ("*", M)):
        for x, y, z in product(r, r, r):
            if T[T[x][y]][z] != T[x][T[y][z]]:
                raise NotAssociative(label, name(x), name(y), name(z))
    for x, y, z in product(r, r, r):
        if M[A[x][y]][z] != A[M[x][z]][M[y][z]]:
            raise NotDistributive("right", name(x), name(y), name(z))
        if M[z][A[x][y]] != A[M[z][x]][M[z][y]]:
            raise NotDistributive("left", name(x), name(y), name(z))

    if isinstance(top, str):
        if top not in pos:
            raise MalformedTable(top, detail="unknown top element")
        top = pos[top]
    if top is not None:
        if not all(A[top][x] == top for x in r):
            raise MalformedTable(name(top), detail="top is not additively absorbing")
    return FiniteSemiring(elements, A, M, top)


def trivial_semiring(name: str = "e") -> FiniteSemiring:
    return FiniteSemiring((name,), ((0,),), ((0,),), 0)


# ---------------------------------------------------------------------------
# congruences and maps


@dataclass(frozen=True)
class Congruence:
    """Partition of ``range(n)``; ``labels[i]`` is the least index in i's block."""

    labels: tuple[int, ...]

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Congruence":
        labels = list(range(n))
        for block in blocks:
            block = sorted(block)
            for x in block:
                labels[x] = block[0]
        return cls(tuple(labels))

    @classmethod
    def identity(cls, n: int) -> "Congruence":
        return cls(tuple(range(n)))

    @classmethod
    def full(cls, n: int) -> "Congruence":
        return cls((0,) * n)

    def relates(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def blocks(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, lab in enumerate(self.labels):
            out.setdefault(lab, []).append(i)
        return [tuple(b) for _, b in sorted(out.items())]

    def is_identity(self) -> bool:
        return all(lab == i for i, lab in enumerate(self.labels))

    def meet(self, other: "Congruence") -> "Congruence":
        seen: dict[tuple[int, int], int] = {}
        labels = []
        for i, pair in enumerate(zip(self.labels, other.labels)):
            labels.append(seen.setdefault(pair, i))
        return Congruence(tuple(labels))

    def leq(self, other: "Congruence") -> bool:
        return all(other.relates(i, lab) for i, lab in enumerate(self.labels))

    def named_blocks(self, S: FiniteSemiring) -> list[list[str]]:
        return [S.names(b) for b in self.blocks()]


@dataclass(frozen=True)
class SemiringMap:
    source: FiniteSemiring = field(repr=False)
    target: FiniteSemiring = field(repr=False)
    image: tuple[int, ...]

    @property
    def injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    @property
    def surjective(self) -> bool:
        return set(self.image) == set(range(self.target.size))

    def as_names(self) -> dict[str, str]:
        return {self.source.elements[i]: self.target.elements[j] for i, j in enumerate(self.image)}

    def preserves_operations(self) -> bool:
        """Table-by-table check, independent of the search that produced the map."""
        S, T, f = self.source, self.target, self.image
        for x in range(S.size):
            for y in range(S.size):
                if f[S.add[x][y]] != T.add[f[x]][f[y]]:
                    return False
                if f[S.mul[x][y]] != T.mul[f[x]][f[y]]:
                    return False
        return True

    def __repr__(self):
        return f"SemiringMap({self.as_names()})"


# ---------------------------------------------------------------------------
# constructions on semirings


def direct_product(A: FiniteSemiring, B: FiniteSemiring) -> FiniteSemiring:
    pairs = [(x, y) for x in range(A.size) for y in range(B.size)]
    pos = {p: i for i, p in enumerate(pairs)}
    names = tuple(f"({A.elements[x]},{B.elements[y]})" for x, y in pairs)

    def table(opA, opB):
        return tuple(
            tuple(pos[(opA[p[0]][q[0]], opB[p[1]][q[1]])] for q in pairs) for p in pairs
        )

    top = None
    if A.top is not None and B.top is not None:
        top = pos[(A.top, B.top)]
    return FiniteSemiring(names, table(A.add, B.add), table(A.mul, B.mul), top)


def projections(A: FiniteSemiring, B: FiniteSemiring, P: FiniteSemiring):
    """The two coordinate maps out of ``P = direct_product(A, B)``."""
    first = tuple(i // B.size for i in range(P.size))
    second = tuple(i % B.size for i in range(P.size))
    return SemiringMap(P, A, first), SemiringMap(P, B, second)


def closure(S: FiniteSemiring, gens: Iterable[int]) -> list[int]:
    """Indices of the subsemiring generated by ``gens``, in carrier order."""
    have = set(gens)
    frontier = list(have)
    while frontier:
        new = []
        cur = list(have)
        for x in frontier:
            for y in cur:
                for z in (S.add[x][y], S.mul[x][y], S.mul[y][x]):
                    if z not in have:
                        have.add(z)
                        new.append(z)
        # pairs among the new elements themselves are handled next round
        frontier = new
    return sorted(have)


def restrict(S: FiniteSemiring, keep: Sequence[int]) -> FiniteSemiring:
    keep = list(keep)
    pos = {x: i for i, x in enumerate(keep)}
    try:
        add = tuple(tuple(pos[S.add[x][y]] for y in keep) for x in keep)
        mul = tuple(tuple(pos[S.mul[x][y]] for y in keep) for x in keep)
    except KeyError:
        raise ValueError("subset is not closed under the operations") from None
    top = pos.get(S.top) if S.top is not None else None
    return FiniteSemiring(tuple(S.elements[x] for x in keep), add, mul, top)


def subalgebra_generated(S: FiniteSemiring, gens) -> tuple[FiniteSemiring, SemiringMap]:
    idx = [S.index(g) if isinstance(g, str) else g for g in gens]
    if not idx:
        raise ValueError("generating set must be nonempty")
    keep = closure(S, idx)
    sub = restrict(S, keep)
    return sub, SemiringMap(sub, S, tuple(keep))


# ---------------------------------------------------------------------------
# homomorphism search


def _search_homs(A: FiniteSemiring, B: FiniteSemiring, injective: bool, budget: Budget,
                 allowed=None):
    """Yield every homomorphism A -> B in lexicographic order of image vectors.

    Elements of A are assigned in carrier order. Each table entry
    ``p op q = r`` is checked as soon as the largest of p, q, r is assigned.
    ``allowed`` optionally restricts the candidate images per source element.
    """
    n, m = A.size, B.size
    if injective and n > m:
        return
    checks: list[list[tuple]] = [[] for _ in range(n)]
    for S_op, T_op in ((A.add, B.add), (A.mul, B.mul)):
        for p in range(n):
            for q in range(n):
                r = S_op[p][q]
                checks[max(p, q, r)].append((T_op, p, q, r))
    f = [-1] * n
    used = [False] * m

    def rec(x):
        if x == n:
            yield tuple(f)
            return
        cands = range(m) if allowed is None else allowed[x]
        for c in cands:
            if injective and used[c]:
                continue
            budget.tick()
            f[x] = c
            if all(T_op[f[p]][f[q]] == f[r] for T_op, p, q, r in checks[x]):
                used[c] = True
                yield from rec(x + 1)
                used[c] = False
        f[x] = -1

    yield from rec(0)


def find_homomorphism(A: FiniteSemiring, B: FiniteSemiring, require_injective: bool = False,
                      budget=None) -> Optional[SemiringMap]:
    b = as_budget(budget)
    for img in _search_homs(A, B, require_injective, b):
        return SemiringMap(A, B, img)
    return None


def isomorphic(A: FiniteSemiring, B: FiniteSemiring, budget=None) -> Optional[SemiringMap]:
    if A.size != B.size:
        return None
    # cheap invariants before the search
    if _profile(A) != _profile(B):
        return None
    b = as_budget(budget)
    pa, pb = _element_profiles(A), _element_profiles(B)
    allowed = [[c for c in range(B.size) if pb[c] == pa[x]] for x in range(A.size)]
    for img in _search_homs(A, B, True, b, allowed):
        return SemiringMap(A, B, img)
    return None


def _element_profiles(S: FiniteSemiring):
    n = S.size
    out = []
    for x in range(n):
        out.append((
            S.mul[x][x] == x,
            sum(S.add[x][y] == x for y in range(n)),
            sum(S.add[x][y] == y for y in range(n)),
            sum(S.mul[x][y] == x for y in range(n)),
            sum(S.mul[y][x] == x for y in range(n)),
            sum(S.mul[x][y] == S.mul[x][x] for y in range(n)),
        ))
    return out


def _profile(S: FiniteSemiring):
    return sorted(_element_profiles(S))


def is_subdirect_embedding(S: FiniteSemiring, A: FiniteSemiring, B: FiniteSemiring,
                           budget=None) -> Optional[SemiringMap]:
    """Injective S -> A x B with both projections onto, or None."""
    P = direct_product(A, B)
    if S.size > P.size or S.size < max(A.size, B.size):
        return None
    b = as_budget(budget)
    for img in _search_homs(S, P, True, b):
        firsts = {i // B.size for i in img}
        seconds = {i % B.size for i in img}
        if len(firsts) == A.size and len(seconds) == B.size:
            return SemiringMap(S, P, img)
    return None


# ---------------------------------------------------------------------------
# congruences


def principal_congruence(S: FiniteSemiring, a, b) -> Congruence:
    """Least congruence identifying ``a`` and ``b`` (union-find + pair queue)."""
    if isinstance(a, str):
        a = S.index(a)
    if isinstance(b, str):
        b = S.index(b)
    n = S.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for c in range(n):
            queue.append((S.add[x][c], S.add[y][c]))
            queue.append((S.mul[x][c], S.mul[y][c]))
            queue.append((S.mul[c][x], S.mul[c][y]))
    # joining x~y for each queued pair is enough: translations of every
    # generating pair are queued, and the equivalence closure is transitive.
    return Congruence(tuple(min(i for i in range(n) if find(i) == find(x)) for x in range(n)))


def check_congruence(S: FiniteSemiring, theta: Congruence):
    n = S.size
    for a in range(n):
        for b in range(a + 1, n):
            if not theta.relates(a, b):
                continue
            for c in range(n):
                if not theta.relates(S.add[a][c], S.add[b][c]):
                    raise NotACongruence(S.elements[a], S.elements[b], S.elements[c], "+")
                if not theta.relates(S.mul[a][c], S.mul[b][c]):
                    raise NotACongruence(S.elements[a], S.elements[b], S.elements[c], "x*c")
                if not theta.relates(S.mul[c][a], S.mul[c][b]):
                    raise NotACongruence(S.elements[a], S.elements[b], S.elements[c], "c*x")


def quotient(S: FiniteSemiring, theta: Congruence) -> tuple[FiniteSemiring, SemiringMap]:
    check_congruence(S, theta)
    reps = sorted(set(theta.labels))
    pos = {r: i for i, r in enumerate(reps)}
    cls = [pos[theta.labels[x]] for x in range(S.size)]
    names = []
    for r in reps:
        block = [S.elements[x] for x in range(S.size) if theta.labels[x] == r]
        names.append(block[0] if len(block) == 1 else "[" + ",".join(block) + "]")
    add = tuple(tuple(cls[S.add[r][s]] for s in reps) for r in reps)
    mul = tuple(tuple(cls[S.mul[r][s]] for s in reps) for r in reps)
    top = cls[S.top] if S.top is not None else None
    Q = FiniteSemiring(tuple(names), add, mul, top)
    return Q, SemiringMap(S, Q, tuple(cls))


@dataclass(frozen=True)
class SIResult:
    irreducible: bool
    monolith: Optional[Congruence]


def is_subdirectly_irreducible(S: FiniteSemiring) -> SIResult:
    n = S.size
    if n < 2:
        raise TrivialAlgebra("a one-element algebra is not subdirectly irreducible")
    meet = None
    for a in range(n):
        for b in range(a + 1, n):
            cg = principal_congruence(S, a, b)
            meet = cg if meet is None else meet.meet(cg)
            if meet.is_identity():
                return SIResult(False, None)
    return SIResult(True, meet)


# ---------------------------------------------------------------------------
# flatness, ideals, idempotents, nilpotency


def flat_top(S: FiniteSemiring) -> Optional[int]:
    n = S.size
    for t in range(n):
        if all(S.mul[t][x] == t and S.mul[x][t] == t for x in range(n)) and all(
            S.add[x][y] == (x if x == y else t) for x in range(n) for y in range(n)
        ):
            return t
    return None


def is_flat(S: FiniteSemiring) -> bool:
    return flat_top(S) is not None


def is_zero_cancellative(S: FiniteSemiring) -> bool:
    """ab = ac != 0 implies b = c, and dually, for the multiplicative reduct."""
    z = S.multiplicative_zero()
    if z is None:
        raise NoZeroElement("multiplicative reduct has no zero")
    n = S.size
    M = S.mul
    for a in range(n):
        left: dict[int, int] = {}
        right: dict[int, int] = {}
        for b in range(n):
            v = M[a][b]
            if v != z:
                if left.setdefault(v, b) != b:
                    return False
            v = M[b][a]
            if v != z:
                if right.setdefault(v, b) != b:
                    return False
    return True


@dataclass(frozen=True)
class IdempotentInfo:
    E: frozenset[int]
    equals_squares: bool
    is_subalgebra: bool


def idempotent_set(S: FiniteSemiring) -> IdempotentInfo:
    n = S.size
    E = frozenset(x for x in range(n) if S.mul[x][x] == x)
    squares = frozenset(S.mul[x][x] for x in range(n))
    closed = all(S.add[x][y] in E and S.mul[x][y] in E for x in E for y in E)
    return IdempotentInfo(E, E == squares, closed)


@dataclass(frozen=True)
class IdealInfo:
    ideal: Optional[frozenset[int]]
    size: int


def principal_ideal(S: FiniteSemiring, a: int) -> frozenset[int]:
    """{a} u Sa u aS u SaS -- the multiplicative ideal generated by a."""
    n = S.size
    left = {S.mul[s][a] for s in range(n)}
    right = {S.mul[a][s] for s in range(n)}
    both = {S.mul[s][y] for s in range(n) for y in right}
    return frozenset({a} | left | right | both)


def least_nonzero_ideal(S: FiniteSemiring) -> IdealInfo:
    top = flat_top(S)
    if top is None:
        raise NotFlat("least_nonzero_ideal needs a flat semiring")
    ideals = [principal_ideal(S, a) for a in range(S.size) if a != top]
    for I in ideals:
        if all(I <= J for J in ideals):
            return IdealInfo(I, len(I))
    return IdealInfo(None, 0)


def product_sets(S: FiniteSemiring, k: int) -> list[frozenset[int]]:
    """``out[m-1]`` is the set of values of all length-m products, m = 1..k."""
    cur = frozenset(range(S.size))
    out = [cur]
    for _ in range(k - 1):
        cur = frozenset(S.mul[x][y] for x in cur for y in range(S.size))
        out.append(cur)
    return out


def nilpotency_index(S: FiniteSemiring) -> Optional[int]:
    z = S.multiplicative_zero()
    if z is None:
        raise NoZeroElement("multiplicative reduct has no zero")
    cap = S.size + 1
    for k, values in enumerate(product_sets(S, cap), start=1):
        if values == {z}:
            return k
    return None


def satisfies_Nk(S: FiniteSemiring, k: int) -> bool:
    """Whether x1...xk = y1...yk holds, i.e. all length-k products coincide."""
    if k < 1:
        raise ValueError("k must be positive")
    return len(product_sets(S, k)[-1]) == 1
