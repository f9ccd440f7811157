"""Parameterized algorithms for the edge extension problems.

* Ext EM with the standard parameter: try every subset of U.
* Ext EM with the dual parameter: enumerate the minimal vertex covers S of
  the forbidden edges A and ask for a matching of E minus A saturating S.
* Ext r-DCPS with the dual parameter: the same idea with degree bound r.
* Ext r-EC with the standard parameter: guess the independent set of G[U]
  whose vertices may exceed degree r, then solve a lower/upper degree
  cover problem on the remaining edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import networkx as nx

from .errors import PreconditionError
from .framework import Direction, ProblemId, Verdict, from_mask, make_set_problem, register, to_mask
from .graphs import Graph


# -- r-generalisations as monotone problems ----------------------------------


def _r_dcps_checker(g: Graph, r):
    inc = [to_mask(g.incident_edges(v)) for v in range(g.n)]
    return lambda mask: all((mask & i).bit_count() <= r for i in inc)


def _r_ec_checker(g: Graph, r):
    inc = [to_mask(g.incident_edges(v)) for v in range(g.n)]
    return lambda mask: all((mask & i).bit_count() >= r for i in inc)


R_DCPS = register(
    make_set_problem(
        ProblemId.R_DCPS, Direction.SUPERSET_SHRINKING, _r_dcps_checker, lambda g: g.m, uses_r=True
    )
)
R_EC = register(
    make_set_problem(
        ProblemId.R_EC, Direction.SUBSET_GROWING, _r_ec_checker, lambda g: g.m, uses_r=True
    )
)


@dataclass(frozen=True)
class WeightedGraph:
    base: Graph
    edge_weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.edge_weights) != self.base.m:
            raise ValueError("need exactly one weight per edge")
        if any(w < 0 for w in self.edge_weights):
            raise ValueError("edge weights must be non-negative")


# -- minimal vertex covers ---------------------------------------------------


def enumerate_minimal_vertex_covers(g: Graph) -> Iterator[frozenset[int]]:
    """Every inclusion-minimal vertex cover of g, once each.

    Branch on an endpoint u of the first uncovered edge: either u joins the
    cover, or u stays out and all of N(u) joins. Distinct leaves differ on
    some branching vertex, so no cover is produced twice.
    """
    adj = g.adjacency

    def rec(inside: frozenset[int], outside: frozenset[int]) -> Iterator[frozenset[int]]:
        edge = next(((u, v) for u, v in g.edges if u not in inside and v not in inside), None)
        if edge is None:
            if all(any(w not in inside for w in adj[v]) for v in inside):
                yield inside
            return
        u = edge[0]
        yield from rec(inside | {u}, outside)
        nu = frozenset(adj[u])
        if not nu & outside:
            yield from rec(inside | nu, outside | {u})

    yield from rec(frozenset(), frozenset())


# -- weighted subgraph optimisation ------------------------------------------


def max_weight_matching(wg: WeightedGraph) -> tuple[int, frozenset[int]]:
    """Exact maximum-weight matching (blossom algorithm from networkx)."""
    g = wg.base
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for k, (u, v) in enumerate(g.edges):
        if wg.edge_weights[k] > 0:
            h.add_edge(u, v, weight=wg.edge_weights[k])
    pairs = nx.max_weight_matching(h, maxcardinality=False)
    chosen = frozenset(g.edge_index(u, v) for u, v in pairs)
    return sum(wg.edge_weights[k] for k in chosen), chosen


def max_weight_degree_bounded_subgraph(wg: WeightedGraph, r: int) -> tuple[int, frozenset[int]]:
    """Maximum-weight edge set with every degree at most r.

    Exact branch over edges, memoised on the residual degrees of vertices
    that still have undecided edges.
    """
    if r < 1:
        raise PreconditionError("r must be a positive integer")
    g = wg.base
    m = g.m
    w = wg.edge_weights
    # vertices that still matter after position i
    last = [-1] * g.n
    for k, (u, v) in enumerate(g.edges):
        last[u] = last[v] = k
    live = [tuple(v for v in range(g.n) if last[v] >= i) for i in range(m + 1)]

    @lru_cache(maxsize=None)
    def best(i: int, key: tuple[int, ...]) -> tuple[int, int]:
        if i == m:
            return 0, 0
        deg = dict(zip(live[i], key))
        u, v = g.edges[i]
        nxt = live[i + 1]
        skip_w, skip_mask = best(i + 1, tuple(deg[x] for x in nxt))
        if w[i] > 0 and deg[u] < r and deg[v] < r:
            deg[u] += 1
            deg[v] += 1
            take_w, take_mask = best(i + 1, tuple(deg[x] for x in nxt))
            if take_w + w[i] > skip_w:
                return take_w + w[i], take_mask | 1 << i
        return skip_w, skip_mask

    total, mask = best(0, tuple(0 for _ in live[0]))
    best.cache_clear()
    return total, from_mask(mask)


# -- Ext EM -------------------------------------------------------------------


def _is_maximal_matching(g: Graph, chosen: frozenset[int]) -> bool:
    used: set[int] = set()
    for k in chosen:
        u, v = g.edges[k]
        if u in used or v in used:
            return False
        used.update((u, v))
    return all(u in used or v in used for u, v in g.edges)


def ext_em_standard(g: Graph, U: frozenset[int]) -> Verdict:
    """Some subset of U is a maximal matching of g (2^|U| candidates).

    Subsets are visited in lexicographic order; branches that stop being a
    matching are cut, which leaves the first hit unchanged.
    """
    cand = sorted(U)

    def rec(start: int, chosen: list[int], used: int) -> frozenset[int] | None:
        s = frozenset(chosen)
        if _is_maximal_matching(g, s):
            return s
        for i in range(start, len(cand)):
            u, v = g.edges[cand[i]]
            if not used >> u & 1 and not used >> v & 1:
                chosen.append(cand[i])
                hit = rec(i + 1, chosen, used | 1 << u | 1 << v)
                chosen.pop()
                if hit is not None:
                    return hit
        return None

    hit = rec(0, [], 0)
    return Verdict(False) if hit is None else Verdict(True, hit)


def _greedy_extend(g: Graph, chosen: frozenset[int], allowed: Sequence[int], r: int = 1) -> frozenset[int]:
    deg = [0] * g.n
    for k in chosen:
        for x in g.edges[k]:
            deg[x] += 1
    out = set(chosen)
    for k in allowed:
        u, v = g.edges[k]
        if k not in out and deg[u] < r and deg[v] < r:
            out.add(k)
            deg[u] += 1
            deg[v] += 1
    return frozenset(out)


def cover_weight(g: Graph, safe: bool = True) -> int:
    """In-cover vertex weight W_S; the safe value 2|E|+1 forces saturation."""
    return 2 * g.m + 1 if safe else g.m + 1


def matching_threshold_test(
    g: Graph, A: frozenset[int], S: frozenset[int], safe: bool = True
) -> tuple[bool, frozenset[int]]:
    """Weighted test for one minimal cover S of (V, A).

    Vertices of S weigh W_S, the others 1; an edge of E minus A weighs the
    sum of its endpoints. Returns (weight >= |S| * W_S, optimal matching).
    """
    big = cover_weight(g, safe)
    dw = [big if v in S else 1 for v in range(g.n)]
    weights = tuple(0 if k in A else dw[u] + dw[v] for k, (u, v) in enumerate(g.edges))
    total, chosen = max_weight_matching(WeightedGraph(g, weights))
    return total >= len(S) * big, chosen


def ext_em_dual(g: Graph, A: frozenset[int], safe: bool = True) -> Verdict:
    """Is there a maximal matching of g avoiding every edge of A?

    With ``safe=False`` the smaller constant |E|+1 is used instead; that
    variant is kept for experiments only and may accept wrongly.
    """
    A = frozenset(A)
    rest = [k for k in range(g.m) if k not in A]
    for S in enumerate_minimal_vertex_covers(g.partial_graph(A)):
        ok, chosen = matching_threshold_test(g, A, S, safe)
        if ok:
            return Verdict(True, _greedy_extend(g, chosen, rest))
    return Verdict(False)


# -- Ext r-DCPS ---------------------------------------------------------------


def ext_r_dcps_dual(g: Graph, A: frozenset[int], r: int) -> Verdict:
    """Is there a maximal degree-<=r edge set of g avoiding A?

    For a minimal cover V' of (V, A) weigh vertices 1 on V' and 0 elsewhere;
    a degree-bounded subgraph of (V, E minus A) reaches |V'| * r exactly
    when it saturates every vertex of V'.
    """
    if r < 1:
        raise PreconditionError("r must be a positive integer")
    A = frozenset(A)
    rest = [k for k in range(g.m) if k not in A]
    for cover in enumerate_minimal_vertex_covers(g.partial_graph(A)):
        weights = tuple(
            0 if k in A else (u in cover) + (v in cover) for k, (u, v) in enumerate(g.edges)
        )
        total, chosen = max_weight_degree_bounded_subgraph(WeightedGraph(g, weights), r)
        if total >= len(cover) * r:
            return Verdict(True, _greedy_extend(g, chosen, rest, r))
    return Verdict(False)


# -- lower/upper degree covers ------------------------------------------------


@dataclass(frozen=True)
class LucpVoid:
    """Bounds with some a(v) > b(v) or b(v) > d(v); no cover can exist."""

    vertex: int
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class LucpInstance:
    base: Graph
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != self.base.n or len(self.upper) != self.base.n:
            raise ValueError("need one lower and one upper bound per vertex")

    @property
    def void(self) -> LucpVoid | None:
        for v in range(self.base.n):
            a, b = self.lower[v], self.upper[v]
            if a < 0:
                return LucpVoid(v, f"a({v}) = {a} < 0")
            if a > b:
                return LucpVoid(v, f"a({v}) = {a} > b({v}) = {b}")
            if b > self.base.degree(v):
                return LucpVoid(v, f"b({v}) = {b} > d({v}) = {self.base.degree(v)}")
        return None


def lucp_feasible(li: LucpInstance) -> frozenset[int] | None | LucpVoid:
    """Some M with a(v) <= deg_M(v) <= b(v) everywhere, or None.

    Void bounds give a falsy :class:`LucpVoid`. Exact backtracking over the
    edges, memoised on residual degrees of vertices with undecided edges.
    """
    bad = li.void
    if bad is not None:
        return bad
    g = li.base
    m = g.m
    lo, hi = li.lower, li.upper
    last = [-1] * g.n
    for k, (u, v) in enumerate(g.edges):
        last[u] = last[v] = k
    # a vertex with no edges left must already be within bounds
    if any(last[v] < 0 and lo[v] > 0 for v in range(g.n)):
        return None
    live = [tuple(v for v in range(g.n) if last[v] >= i) for i in range(m + 1)]
    remaining = [[0] * g.n for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        remaining[i] = remaining[i + 1][:]
        for x in g.edges[i]:
            remaining[i][x] += 1

    @lru_cache(maxsize=None)
    def search(i: int, key: tuple[int, ...]) -> int | None:
        if i == m:
            return 0
        deg = dict(zip(live[i], key))
        u, v = g.edges[i]
        for take in (False, True):
            d = dict(deg)
            if take:
                if d[u] >= hi[u] or d[v] >= hi[v]:
                    continue
                d[u] += 1
                d[v] += 1
            ok = True
            for x in (u, v):
                if d[x] + remaining[i + 1][x] < lo[x]:
                    ok = False
            if not ok:
                continue
            # vertices leaving the live set are final now
            sub = search(i + 1, tuple(d[x] for x in live[i + 1]))
            if sub is not None:
                return sub | (1 << i) if take else sub
        return None

    mask = search(0, tuple(0 for _ in live[0]))
    search.cache_clear()
    return None if mask is None else from_mask(mask)


# -- Ext r-EC -----------------------------------------------------------------


def independent_sets_in_u(g: Graph, U: Sequence[int]) -> list[frozenset[int]]:
    """Independent sets of G[U] inside V(U), via the 3-way choice per edge.

    For each edge xy of U: x in and y out, y in and x out, or both out.
    Choices must agree on shared vertices; duplicates are dropped.
    """
    edges = [g.edges[k] for k in sorted(U)]
    seen: dict[frozenset[int], None] = {}

    def rec(i: int, status: dict[int, bool]) -> None:
        if i == len(edges):
            seen.setdefault(frozenset(v for v, s in status.items() if s), None)
            return
        x, y = edges[i]
        for sx, sy in ((False, False), (True, False), (False, True)):
            if status.get(x, sx) != sx or status.get(y, sy) != sy:
                continue
            nxt = dict(status)
            nxt[x], nxt[y] = sx, sy
            rec(i + 1, nxt)

    rec(0, {})
    return list(seen)


def _shrink_r_ec(g: Graph, edges: frozenset[int], keep: frozenset[int], r: int) -> frozenset[int]:
    # degrees only fall, so one pass in index order yields a minimal set
    deg = [0] * g.n
    for k in edges:
        for x in g.edges[k]:
            deg[x] += 1
    out = set(edges)
    for k in sorted(edges - keep):
        u, v = g.edges[k]
        if deg[u] > r and deg[v] > r:
            out.discard(k)
            deg[u] -= 1
            deg[v] -= 1
    return frozenset(out)


def ext_r_ec_standard(g: Graph, U: frozenset[int], r: int) -> Verdict:
    """Is there a minimal r-edge cover of g containing U?"""
    if r < 1:
        raise PreconditionError("r must be a positive integer")
    low = [v for v in range(g.n) if g.degree(v) < r]
    if low:
        raise PreconditionError(f"vertex {low[0]} has degree {g.degree(low[0])} < r = {r}")
    U = frozenset(U)
    rest = [k for k in range(g.m) if k not in U]
    gbar = g.partial_graph(rest)
    du = [0] * g.n
    for k in U:
        for x in g.edges[k]:
            du[x] += 1
    in_vu = [du[v] > 0 for v in range(g.n)]
    for S in independent_sets_in_u(g, sorted(U)):
        lower, upper = [], []
        for v in range(g.n):
            if not in_vu[v]:
                lower.append(r)
                upper.append(gbar.degree(v))
            else:
                lower.append(max(0, r - du[v]))
                # unbounded above for S; clamp to the degree available in E minus U
                upper.append(gbar.degree(v) if v in S else r - du[v])
        if any(b < 0 for b in upper):
            continue
        found = lucp_feasible(LucpInstance(gbar, tuple(lower), tuple(upper)))
        if isinstance(found, frozenset):
            estar = frozenset(rest[k] for k in found)
            return Verdict(True, _shrink_r_ec(g, estar | U, U, r))
    return Verdict(False)
