"""Hypergraphs, partition systems and the searches run over them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .semiring import Budget, Exhausted, SemiringError, as_budget

BudgetExhausted = Exhausted

DEFAULT_HOM_BUDGET = 10**8


class HypergraphError(SemiringError):
    pass


class NotThreeUniform(HypergraphError):
    pass


class IsolatedVertex(HypergraphError):
    def __init__(self, v):
        self.vertex = v
        super().__init__(f"vertex {v!r} lies in no hyperedge")


class NotATransversal(HypergraphError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"family member {index} is not a transversal")


class ExceedsCap(HypergraphError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"no strong colouring with at most {cap} colours")


class Infeasible(HypergraphError):
    pass


def set_name(items: Iterable) -> str:
    return "{" + ",".join(str(x) for x in items) + "}"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(idxs: Iterable[int]) -> int:
    m = 0
    for i in idxs:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Hypergraph:
    """Vertices are names; hyperedges are frozensets of vertex indices."""

    vertices: tuple[str, ...]
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise HypergraphError("duplicate vertex names")
        canon = []
        seen = set()
        for e in self.edges:
            e = frozenset(e)
            if not e:
                raise HypergraphError("hyperedges must be nonempty")
            if any(not 0 <= v < n for v in e):
                raise HypergraphError("hyperedge mentions an unknown vertex")
            if e not in seen:
                seen.add(e)
                canon.append(e)
        canon.sort(key=lambda e: sorted(e))
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_names(cls, vertices: Sequence, edges: Iterable[Iterable]) -> "Hypergraph":
        vertices = tuple(str(v) for v in vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        try:
            es = tuple(frozenset(pos[str(v)] for v in e) for e in edges)
        except KeyError as exc:
            raise HypergraphError(f"unknown vertex {exc.args[0]!r}") from None
        return cls(vertices, es)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def named_edges(self) -> list[list[str]]:
        return [[self.vertices[v] for v in sorted(e)] for e in self.edges]

    def edge_sizes(self) -> set[int]:
        return {len(e) for e in self.edges}

    def is_uniform(self, k: Optional[int] = None) -> bool:
        sizes = self.edge_sizes()
        if k is None:
            return len(sizes) <= 1
        return sizes <= {k}

    def incidence(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    def isolated(self) -> list[int]:
        return [v for v, es in enumerate(self.incidence()) if not es]

    def __repr__(self):
        return f"Hypergraph({self.n} vertices, {len(self.edges)} edges)"


def single_edge(k: int = 3) -> Hypergraph:
    return Hypergraph.from_names(range(1, k + 1), [range(1, k + 1)])


def disjoint_edges(count: int = 2, k: int = 3) -> Hypergraph:
    vs = range(1, count * k + 1)
    return Hypergraph.from_names(vs, [range(i * k + 1, (i + 1) * k + 1) for i in range(count)])


def fano_plane() -> Hypergraph:
    lines = [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)]
    return Hypergraph.from_names(range(1, 8), lines)


def loose_cycle(length: int) -> Hypergraph:
    """``length`` 3-edges, consecutive edges sharing exactly one vertex."""
    n = 2 * length
    edges = [(2 * i, 2 * i + 1, (2 * i + 2) % n) for i in range(length)]
    return Hypergraph.from_names(range(n), edges)


# ---------------------------------------------------------------------------
# exact covers and partition systems


def exact_covers(universe: int, sets: Sequence[int], budget=None) -> Iterator[tuple[int, ...]]:
    """All ways to partition the bitmask ``universe`` by members of ``sets``.

    Branches on the lowest uncovered element, trying the sets containing it
    in index order; each cover is produced once, as a sorted index tuple.
    """
    b = as_budget(budget)
    by_low: dict[int, list[int]] = {}
    for i, s in enumerate(sets):
        if s and s & ~universe == 0:
            by_low.setdefault((s & -s).bit_length() - 1, []).append(i)
    # a set can only be chosen when its lowest element is the lowest uncovered one
    chosen: list[int] = []

    def rec(covered):
        if covered == universe:
            yield tuple(sorted(chosen))
            return
        rest = universe & ~covered
        low = (rest & -rest).bit_length() - 1
        for i in by_low.get(low, ()):
            s = sets[i]
            if s & covered:
                continue
            b.tick()
            chosen.append(i)
            yield from rec(covered | s)
            chosen.pop()

    yield from rec(0)


@dataclass(frozen=True)
class PartitionSystem:
    """Blocks over a named ground set; blocks are frozensets of ground indices."""

    ground: tuple[str, ...]
    blocks: tuple[frozenset[int], ...]

    def block_mask(self, i: int) -> int:
        return _mask(self.blocks[i])

    def full_mask(self) -> int:
        return (1 << len(self.ground)) - 1

    def block_names(self) -> list[str]:
        return [set_name(self.ground[j] for j in sorted(B)) for B in self.blocks]

    def named_blocks(self) -> list[list[str]]:
        return [[self.ground[j] for j in sorted(B)] for B in self.blocks]

    def partitions(self, budget=None) -> list[tuple[int, ...]]:
        masks = [self.block_mask(i) for i in range(len(self.blocks))]
        return list(exact_covers(self.full_mask(), masks, budget))

    def __repr__(self):
        return f"PartitionSystem(ground={list(self.ground)}, blocks={self.block_names()})"


def block_hypergraph(F: PartitionSystem) -> Hypergraph:
    """Vertices are the blocks; hyperedges are the partitions of the ground set."""
    return Hypergraph(tuple(F.block_names()), tuple(frozenset(c) for c in F.partitions()))


def k_subsets_system(k: int, l: int) -> PartitionSystem:
    """F_{k,l}: all k-subsets of {1,...,kl}."""
    ground = tuple(str(i) for i in range(1, k * l + 1))
    blocks = tuple(frozenset(c) for c in combinations(range(k * l), k))
    return PartitionSystem(ground, blocks)


# ---------------------------------------------------------------------------
# girth


ACYCLIC = None


def girth(H: Hypergraph) -> Optional[int]:
    """Length of the shortest Berge cycle, or None when there is none.

    A Berge cycle of length n is a cycle of length 2n in the vertex/edge
    incidence graph, so this is half the girth of that bipartite graph.
    """
    nv = H.n
    adj: list[list[int]] = [[] for _ in range(nv + len(H.edges))]
    for i, e in enumerate(H.edges):
        for v in e:
            adj[v].append(nv + i)
            adj[nv + i].append(v)
    best = None
    for root in range(len(adj)):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif parent[u] != w:
                        cyc = dist[u] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
            frontier = nxt
    return None if best is None else best // 2


# ---------------------------------------------------------------------------
# colourings


def _named(H: Hypergraph, values: Sequence[int]) -> dict[str, int]:
    return {H.vertices[v]: values[v] for v in range(H.n)}


def two_colourable(H: Hypergraph, budget=None) -> Optional[dict[str, int]]:
    """First 2-colouring (lexicographic, vertex order) with no monochromatic hyperedge."""
    b = as_budget(budget)
    n = H.n
    last: list[list[frozenset[int]]] = [[] for _ in range(n)]
    for e in H.edges:
        last[max(e)].append(e)
    col = [0] * n

    def rec(v):
        if v == n:
            return True
        for c in (0, 1):
            b.tick()
            col[v] = c
            if all(len({col[u] for u in e}) == 2 for e in last[v]) and rec(v + 1):
                return True
        return False

    return _named(H, col) if rec(0) else None


def _hitting_sets(H: Hypergraph, budget: Budget, edges=None) -> Iterator[frozenset[int]]:
    """Vertex sets meeting every edge exactly once, drawn from non-isolated vertices.

    Branches on the first edge not yet hit, choosing its hitting vertex in
    ascending order; the other vertices of that edge are then excluded.
    """
    edges = [ _mask(e) for e in (H.edges if edges is None else edges)]
    chosen = 0
    excluded = 0

    def rec(chosen, excluded):
        for em in edges:
            if em & chosen == 0:
                break
        else:
            yield frozenset(_bits(chosen))
            return
        for v in _bits(em & ~excluded):
            budget.tick()
            bit = 1 << v
            new_chosen = chosen | bit
            new_excluded = excluded | (em & ~bit)
            # every edge through v must not contain another chosen vertex
            ok = True
            for other in edges:
                if other & bit and other & chosen:
                    ok = False
                    break
                if other & ~new_excluded == 0:
                    ok = False
                    break
            if ok:
                yield from rec(new_chosen, new_excluded)

    yield from rec(chosen, excluded)


def two_in_three_satisfiable(H: Hypergraph, budget=None) -> Optional[dict[str, int]]:
    """A map to {0,1} with exactly one 0 in every hyperedge (3-uniform only)."""
    if not H.is_uniform(3):
        raise NotThreeUniform("2-in-3 satisfiability is defined for 3-uniform hypergraphs")
    for T in _hitting_sets(H, as_budget(budget)):
        return _named(H, [0 if v in T else 1 for v in range(H.n)])
    return None


def cooccurrence_graph(H: Hypergraph) -> list[int]:
    """Adjacency bitmasks: u ~ v iff they share a hyperedge."""
    adj = [0] * H.n
    for e in H.edges:
        m = _mask(e)
        for v in e:
            adj[v] |= m & ~(1 << v)
    return adj


def strong_colouring(H: Hypergraph, n: int, budget=None) -> Optional[dict[str, int]]:
    """Colouring with ``n`` colours, pairwise distinct inside every hyperedge."""
    if n < 1:
        raise ValueError("need at least one colour")
    b = as_budget(budget)
    adj = cooccurrence_graph(H)
    nv = H.n
    col = [-1] * nv

    # DSATUR-style order: most constrained vertex next, ties by index
    def rec(done, used):
        if done == nv:
            return True
        best = None
        best_key = None
        for v in range(nv):
            if col[v] >= 0:
                continue
            sat = {col[u] for u in _bits(adj[v]) if col[u] >= 0}
            key = (-len(sat), -bin(adj[v]).count("1"), v)
            if best_key is None or key < best_key:
                best, best_key, best_sat = v, key, sat
        v = best
        for c in range(min(used + 1, n)):
            if c in best_sat:
                continue
            b.tick()
            col[v] = c
            if rec(done + 1, max(used, c + 1)):
                return True
            col[v] = -1
        return False

    return _named(H, col) if rec(0, 0) else None


def strong_chromatic_number(H: Hypergraph, cap: int, budget=None) -> int:
    b = as_budget(budget)
    lower = max((len(e) for e in H.edges), default=1)
    for n in range(1, cap + 1):
        if n < lower:
            continue
        if strong_colouring(H, n, b) is not None:
            return n
    raise ExceedsCap(cap)


# ---------------------------------------------------------------------------
# transversals and block recognition


def transversals(H: Hypergraph, limit: Optional[int] = None, budget=None) -> list[frozenset[int]]:
    out = []
    for T in _hitting_sets(H, as_budget(budget)):
        out.append(T)
        if limit is not None and len(out) >= limit:
            break
    return out


def _revalidate(H: Hypergraph, family: Sequence[frozenset[int]]):
    for i, T in enumerate(family):
        if any(len(T & e) != 1 for e in H.edges):
            raise NotATransversal(i)


def is_T0(H: Hypergraph, family: Sequence[frozenset[int]]) -> bool:
    _revalidate(H, family)
    for v in range(H.n):
        if not any(v in T for T in family):
            return False
    for u, v in combinations(range(H.n), 2):
        if not any((u in T) != (v in T) for T in family):
            return False
    return True


def is_transversal_complete(H: Hypergraph, family: Sequence[frozenset[int]], budget=None) -> bool:
    """Every vertex set hit exactly once by each family member is a hyperedge."""
    _revalidate(H, family)
    edges = set(H.edges)
    covered = set().union(*family) if family else set()
    free = [v for v in range(H.n) if v not in covered]
    b = as_budget(budget)
    if not family:
        candidates: Iterable[frozenset[int]] = [frozenset()]
    else:
        dual = Hypergraph(H.vertices, tuple(family))
        candidates = _hitting_sets(dual, b, edges=family)
    for X in candidates:
        for r in range(len(free) + 1):
            for extra in combinations(free, r):
                Y = X | frozenset(extra)
                if Y and Y not in edges:
                    return False
    return True


@dataclass(frozen=True)
class BlockRecognition:
    system: Optional[PartitionSystem]
    transversals: tuple[frozenset[int], ...] = ()
    reason: str = ""

    def __bool__(self):
        return self.system is not None


def recognize_block(H: Hypergraph, limit: Optional[int] = None, budget=None) -> BlockRecognition:
    """Decide whether ``H`` is a block hypergraph, returning a witnessing system.

    Adding transversals never breaks T0 separation or transversal
    completeness, so the full family decides the question. It is then
    thinned greedily (earliest members first) to keep the ground set small.
    """
    iso = H.isolated()
    if iso:
        raise IsolatedVertex(H.vertices[iso[0]])
    b = as_budget(budget)
    family = transversals(H, limit, b)
    if not family:
        return BlockRecognition(None, (), "no transversal exists")
    if not is_T0(H, family):
        return BlockRecognition(None, tuple(family), "not T0 with respect to its transversals")
    if not is_transversal_complete(H, family, b):
        return BlockRecognition(None, tuple(family), "not transversal complete")
    i = 0
    while i < len(family):
        trial = family[:i] + family[i + 1:]
        if trial and is_T0(H, trial) and is_transversal_complete(H, trial, b):
            family = trial
        else:
            i += 1
    ground = tuple(f"t{j + 1}" for j in range(len(family)))
    blocks = tuple(frozenset(j for j, T in enumerate(family) if v in T) for v in range(H.n))
    F = PartitionSystem(ground, blocks)
    rebuilt = {frozenset(c) for c in F.partitions(b)}
    if rebuilt != set(H.edges):
        return BlockRecognition(None, tuple(family), "reconstruction mismatch")
    return BlockRecognition(F, tuple(family), "")


# ---------------------------------------------------------------------------
# Kneser hypergraphs


def kneser(r: int, n: int, k: int) -> Hypergraph:
    """KG^r(n,k): k-subsets of {1..n}; hyperedges are r pairwise disjoint ones."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if n < r * k:
        raise Infeasible(f"KG^{r}({n},{k}) needs n >= r*k")
    subsets = list(combinations(range(1, n + 1), k))
    masks = [_mask(s) for s in subsets]
    edges = []

    def rec(start, used, chosen):
        if len(chosen) == r:
            edges.append(frozenset(chosen))
            return
        for i in range(start, len(masks)):
            if masks[i] & used == 0:
                chosen.append(i)
                rec(i + 1, used | masks[i], chosen)
                chosen.pop()

    rec(0, 0, [])
    return Hypergraph(tuple(set_name(s) for s in subsets), tuple(edges))


# ---------------------------------------------------------------------------
# homomorphisms


class _HomSearch:
    """CSP for hypergraph homomorphisms with bitmask domains.

    Propagation after each choice: edge-level forward checking (the images
    already fixed inside a hyperedge must extend to an H-edge of admissible
    size) and arc consistency on the pairwise projection of those edge
    constraints. Variables are chosen smallest-domain-first, ties by index.
    """

    def __init__(self, G: Hypergraph, H: Hypergraph, injective: bool, budget: Budget):
        self.G, self.H = G, H
        self.injective = injective
        self.budget = budget
        nG, nH = G.n, H.n
        self.nG = nG
        self.h_edges = [_mask(f) for f in H.edges]
        self.h_edge_set = set(self.h_edges)
        self.g_edges = [(_mask(e), sorted(e), len(e)) for e in G.edges]
        sizes = sorted({len(e) for e in G.edges})
        # pair_ok[s][c]: partners d of c inside one H-edge of size <= s
        # (d == c needs an H-edge of size <= s - 1 through c)
        self.pair_ok = {}
        self.unary = {}
        for s in sizes:
            rows = [0] * nH
            for f in self.h_edges:
                size = bin(f).count("1")
                if size > s:
                    continue
                for c in _bits(f):
                    rows[c] |= f if size < s else f & ~(1 << c)
            self.pair_ok[s] = rows
            u = 0
            for f in self.h_edges:
                if bin(f).count("1") <= s:
                    u |= f
            self.unary[s] = u
        full = (1 << nH) - 1
        self.full = full
        self.dom0 = [full] * nG
        self.neigh: list[dict[int, int]] = [dict() for _ in range(nG)]
        self.edges_of: list[list[int]] = [[] for _ in range(nG)]
        for i, (m, vs, s) in enumerate(self.g_edges):
            for v in vs:
                self.dom0[v] &= self.unary[s]
                self.edges_of[v].append(i)
                for w in vs:
                    if w != v:
                        prev = self.neigh[v].get(w)
                        self.neigh[v][w] = s if prev is None else min(prev, s)
        self.ext_cache: dict[tuple[int, int], int] = {}
        self.sup_cache: dict[tuple[int, int], int] = {}

    def extension(self, fixed: int, s: int) -> int:
        key = (fixed, s)
        got = self.ext_cache.get(key)
        if got is None:
            got = 0
            for f in self.h_edges:
                if f & fixed == fixed and bin(f).count("1") <= s:
                    got |= f
            self.ext_cache[key] = got
        return got

    def support(self, dom: int, s: int) -> int:
        key = (dom, s)
        got = self.sup_cache.get(key)
        if got is None:
            rows = self.pair_ok[s]
            got = 0
            for c in _bits(dom):
                got |= rows[c]
            if len(self.sup_cache) > 500_000:
                self.sup_cache.clear()
            self.sup_cache[key] = got
        return got

    def propagate(self, dom: list[int], queue: list[int]) -> bool:
        neigh, edges_of, g_edges = self.neigh, self.edges_of, self.g_edges
        in_queue = set(queue)
        while queue:
            u = queue.pop()
            in_queue.discard(u)
            du = dom[u]
            single = du & (du - 1) == 0
            for w, s in neigh[u].items():
                dw = dom[w]
                new = dw & self.support(du, s)
                if new != dw:
                    if not new:
                        return False
                    dom[w] = new
                    if w not in in_queue:
                        queue.append(w)
                        in_queue.add(w)
            if single:
                if self.injective:
                    for w in range(self.nG):
                        if w != u and dom[w] & du:
                            new = dom[w] & ~du
                            if not new:
                                return False
                            dom[w] = new
                            if w not in in_queue:
                                queue.append(w)
                                in_queue.add(w)
                for ei in edges_of[u]:
                    m, vs, s = g_edges[ei]
                    fixed = 0
                    open_vs = []
                    for v in vs:
                        dv = dom[v]
                        if dv & (dv - 1) == 0:
                            fixed |= dv
                        else:
                            open_vs.append(v)
                    if not open_vs:
                        if fixed not in self.h_edge_set:
                            return False
                        continue
                    allowed = self.extension(fixed, s)
                    if not allowed:
                        return False
                    for v in open_vs:
                        new = dom[v] & allowed
                        if new != dom[v]:
                            if not new:
                                return False
                            dom[v] = new
                            if v not in in_queue:
                                queue.append(v)
                                in_queue.add(v)
        return True

    def run(self) -> Optional[list[int]]:
        dom = list(self.dom0)
        if any(d == 0 for d in dom):
            return None
        if self.injective and self.nG > self.H.n:
            return None
        if not self.propagate(dom, list(range(self.nG))):
            return None
        branched = [False] * self.nG
        result = self._rec(dom, branched)
        if result is None:
            return None
        return [d.bit_length() - 1 for d in result]

    def _rec(self, dom, branched):
        best = -1
        best_size = None
        for v in range(self.nG):
            if branched[v]:
                continue
            size = bin(dom[v]).count("1")
            if best_size is None or size < best_size:
                best, best_size = v, size
                if size == 1:
                    break
        if best < 0:
            return dom
        branched[best] = True
        for c in _bits(dom[best]):
            self.budget.tick()
            trial = list(dom)
            trial[best] = 1 << c
            if self.propagate(trial, [best]):
                got = self._rec(trial, branched)
                if got is not None:
                    return got
        branched[best] = False
        return None


def find_hom(G: Hypergraph, H: Hypergraph, budget=DEFAULT_HOM_BUDGET,
             injective: bool = False) -> Optional[dict[str, str]]:
    """A vertex map sending every hyperedge of G onto a hyperedge of H (as sets)."""
    b = as_budget(budget)
    img = _HomSearch(G, H, injective, b).run()
    if img is None:
        return None
    return {G.vertices[v]: H.vertices[img[v]] for v in range(G.n)}


def is_hom(G: Hypergraph, H: Hypergraph, phi: dict[str, str]) -> bool:
    """Independent edge-image check."""
    pos = {v: i for i, v in enumerate(H.vertices)}
    edges = set(H.edges)
    if set(phi) != set(G.vertices):
        return False
    for e in G.named_edges():
        if frozenset(pos[phi[v]] for v in e) not in edges:
            return False
    return True


def hom_independence(family: Sequence[Hypergraph], budget=DEFAULT_HOM_BUDGET) -> list[list[Optional[str]]]:
    """Pairwise ``hom`` / ``none`` / ``exhausted`` matrix; diagonal left as None."""
    out: list[list[Optional[str]]] = []
    for i, G in enumerate(family):
        row: list[Optional[str]] = []
        for j, H in enumerate(family):
            if i == j:
                row.append(None)
                continue
            try:
                row.append("hom" if find_hom(G, H, budget) is not None else "none")
            except Exhausted:
                row.append("exhausted")
        out.append(row)
    return out


def hypergraph_isomorphic(G: Hypergraph, H: Hypergraph, budget=DEFAULT_HOM_BUDGET) -> Optional[dict[str, str]]:
    if G.n != H.n or len(G.edges) != len(H.edges):
        return None
    if sorted(len(e) for e in G.edges) != sorted(len(e) for e in H.edges):
        return None
    # an injective hom maps distinct edges to distinct edges; equal counts
    # then make it a bijection on edges, so the inverse is a hom as well
    return find_hom(G, H, budget, injective=True)
