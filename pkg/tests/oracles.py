"""Brute-force reference deciders, written without touching extkit internals.

Every predicate here works on plain Python sets of vertices or edge pairs
and compares against *all* subsets (not single-step moves), so agreement
with the package is a genuinely independent check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import networkx as nx

from extkit.graphs import Graph


def subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, k))


def _nbrs(g: Graph) -> dict[int, set[int]]:
    out = {v: set() for v in range(g.n)}
    for u, v in g.edges:
        out[u].add(v)
        out[v].add(u)
    return out


def is_vc(g: Graph, S) -> bool:
    return all(u in S or v in S for u, v in g.edges)


def is_is(g: Graph, S) -> bool:
    return not any(u in S and v in S for u, v in g.edges)


def is_ds(g: Graph, S) -> bool:
    nb = _nbrs(g)
    return all(v in S or nb[v] & S for v in range(g.n))


def is_ec(g: Graph, K) -> bool:
    covered = {x for k in K for x in g.edges[k]}
    return len(covered) == g.n


def is_matching(g: Graph, K) -> bool:
    ends = [x for k in K for x in g.edges[k]]
    return len(ends) == len(set(ends))


def is_eds(g: Graph, K) -> bool:
    touched = {x for k in K for x in g.edges[k]}
    return all(u in touched or v in touched for u, v in g.edges)


# (feasible, ground, minimise?)
PROBLEMS = {
    "vc": (is_vc, "V", True),
    "is": (is_is, "V", False),
    "ds": (is_ds, "V", True),
    "ec": (is_ec, "E", True),
    "em": (is_matching, "E", False),
    "eds": (is_eds, "E", True),
}


def ground(g: Graph, kind: str) -> range:
    return range(g.n) if kind == "V" else range(g.m)


def extremal_solutions(problem: str, g: Graph) -> list[frozenset[int]]:
    feas, kind, minimise = PROBLEMS[problem]
    sols = [S for S in subsets(ground(g, kind)) if feas(g, S)]
    if minimise:
        return [S for S in sols if not any(T < S for T in sols)]
    return [S for S in sols if not any(T > S for T in sols)]


def ext(problem: str, g: Graph, U) -> bool:
    """Growing problems: some minimal S contains U. Shrinking: some maximal S inside U."""
    U = frozenset(U)
    _, _, minimise = PROBLEMS[problem]
    sols = extremal_solutions(problem, g)
    return any(U <= S if minimise else S <= U for S in sols)


def is_r_dcps(g: Graph, K, r: int) -> bool:
    deg = [0] * g.n
    for k in K:
        for x in g.edges[k]:
            deg[x] += 1
    return max(deg, default=0) <= r


def is_r_ec(g: Graph, K, r: int) -> bool:
    deg = [0] * g.n
    for k in K:
        for x in g.edges[k]:
            deg[x] += 1
    return min(deg, default=r) >= r


def ext_r_dcps(g: Graph, A, r: int) -> bool:
    """Some maximal r-DCPS avoids every edge of A."""
    sols = [S for S in subsets(range(g.m)) if is_r_dcps(g, S, r)]
    maximal = [S for S in sols if not any(T > S for T in sols)]
    return any(not (S & frozenset(A)) for S in maximal)


def ext_r_ec(g: Graph, U, r: int) -> bool:
    sols = [S for S in subsets(range(g.m)) if is_r_ec(g, S, r)]
    minimal = [S for S in sols if not any(T < S for T in sols)]
    return any(frozenset(U) <= S for S in minimal)


def ext_hs(n: int, hyperedges, U) -> bool:
    hs = [frozenset(h) for h in hyperedges]
    sols = [S for S in subsets(range(n)) if all(h & S for h in hs)]
    minimal = [S for S in sols if not any(T < S for T in sols)]
    return any(frozenset(U) <= S for S in minimal)


def all_matchings(g: Graph):
    for K in subsets(range(g.m)):
        if is_matching(g, K):
            yield K


def max_matching_weight(g: Graph, weights) -> int:
    return max(sum(weights[k] for k in K) for K in all_matchings(g))


# -- partitions ---------------------------------------------------------------


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def _refines(fine, coarse) -> bool:
    return all(any(set(b) <= set(c) for c in coarse) for b in fine)


def minimal_bp(weights, blocks) -> bool:
    """Feasible and no strictly coarser partition is feasible (checked over all partitions)."""
    w = [Fraction(x) for x in weights]
    if any(sum(w[i] for i in b) > 1 for b in blocks):
        return False
    for q in set_partitions(range(len(w))):
        if len(q) < len(blocks) and _refines(blocks, q) and all(sum(w[i] for i in c) <= 1 for c in q):
            return False
    return True


def ext_bp(weights, blocks_u) -> bool:
    """Some feasible partition refining pi_U has no strictly coarser feasible partition."""
    w = [Fraction(x) for x in weights]
    n = len(w)
    feas = [p for p in set_partitions(range(n)) if all(sum(w[i] for i in b) <= 1 for b in p)]
    for p in feas:
        if not _refines(p, blocks_u):
            continue
        if not any(len(q) < len(p) and _refines(p, q) for q in feas):
            return True
    return False


def three_partition(values, b) -> bool:
    vals = list(values)
    if not vals:
        return True
    first = vals[0]
    rest = vals[1:]
    for i, j in itertools.combinations(range(len(rest)), 2):
        if first + rest[i] + rest[j] == b:
            left = [x for k, x in enumerate(rest) if k not in (i, j)]
            if three_partition(left, b):
                return True
    return False


# -- CNF ------------------------------------------------------------------------


def satisfiable(n: int, clauses) -> bool:
    for bits in itertools.product([False, True], repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


# -- generators -------------------------------------------------------------------


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph(n, tuple((u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p))


def small_graphs(max_n: int = 5):
    """One graph per isomorphism class with at most ``max_n`` vertices."""
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() <= max_n:
            yield Graph(h.number_of_nodes(), tuple(h.edges()))


def pre_solutions(g: Graph, kind: str):
    return subsets(ground(g, kind))
