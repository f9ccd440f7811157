"""Dynamic programs over nice tree decompositions for the extension problems.

Tables map a row (one state per bag vertex, in sorted vertex order) to a
back-pointer chain from which a witness is rebuilt at the root. Vertices
left in the root bag are forgotten after the root is processed, so every
vertex passes through exactly one forget step.

Ext VC follows the three-state rules with private-edge bookkeeping done at
introduce time. The edge problems and Ext DS use a different layout: each
vertex commits to a final class when introduced, and each edge is settled
exactly once, at the forget node of whichever endpoint leaves first. At
that point the other endpoint is still in the bag, and the forgotten
vertex has seen all of its edges, so its class can be validated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..errors import DecompositionError
from ..framework import Verdict
from ..graphs import Graph
from .decomposition import NiceTreeDecomposition, NodeKind, compute_tree_decomposition, to_nice

# back-pointer chains: None, ("+", element, rest) or ("&", left, right)
Chain = tuple | None


def _add(chain: Chain, element: int) -> Chain:
    return ("+", element, chain)


def _collect(chain: Chain) -> frozenset[int]:
    out: set[int] = set()
    stack = [chain]
    while stack:
        c = stack.pop()
        if c is None:
            continue
        if c[0] == "+":
            out.add(c[1])
            stack.append(c[2])
        else:
            stack.append(c[1])
            stack.append(c[2])
    return frozenset(out)


@dataclass
class DpStats:
    """Row counts per processed node: (bag size, rows after clean-up)."""

    rows: list[tuple[int, int]] = field(default_factory=list)

    @property
    def max_rows(self) -> int:
        return max((r for _, r in self.rows), default=0)

    def over_bound(self, base: int) -> list[tuple[int, int]]:
        return [(b, r) for b, r in self.rows if r > base**b]


def _insert(row: tuple, bag: tuple[int, ...], v: int, state) -> tuple:
    # position of v in the sorted bag that includes it
    p = sum(1 for x in bag if x < v)
    return row[:p] + (state,) + row[p:]


class _BagDP:
    """Interface shared by the problem-specific programs."""

    def __init__(self, g: Graph):
        self.g = g

    def leaf(self, v: int) -> dict:
        return self.introduce({(): None}, (), v, (v,))

    def introduce(self, table: dict, bag: tuple, v: int, new_bag: tuple) -> dict:
        raise NotImplementedError

    def forget(self, table: dict, bag: tuple, v: int, new_bag: tuple) -> dict:
        raise NotImplementedError

    def join(self, left: dict, right: dict, bag: tuple) -> dict:
        raise NotImplementedError

    def cleanup(self, table: dict, bag: tuple) -> dict:
        return table


def run_dp(dp: _BagDP, g: Graph, ntd: NiceTreeDecomposition, stats: DpStats | None = None) -> Verdict:
    if ntd.root is None:
        if g.n:
            raise DecompositionError("empty decomposition for a non-empty graph")
        return Verdict(True, frozenset())
    tables: list[dict | None] = [None] * len(ntd.nodes)
    bags = [tuple(sorted(x.bag)) for x in ntd.nodes]
    for i, node in enumerate(ntd.nodes):
        if node.kind is NodeKind.LEAF:
            t = dp.leaf(node.vertex)
        elif node.kind is NodeKind.INTRODUCE:
            c = node.children[0]
            t = dp.introduce(tables[c], bags[c], node.vertex, bags[i])
        elif node.kind is NodeKind.FORGET:
            c = node.children[0]
            t = dp.forget(tables[c], bags[c], node.vertex, bags[i])
        else:
            a, b = node.children
            t = dp.join(tables[a], tables[b], bags[i])
        t = dp.cleanup(t, bags[i])
        for c in node.children:
            tables[c] = None
        tables[i] = t
        if stats is not None:
            stats.rows.append((len(bags[i]), len(t)))
    table, bag = tables[ntd.root], bags[ntd.root]
    for v in sorted(bag):
        rest = tuple(x for x in bag if x != v)
        table = dp.cleanup(dp.forget(table, bag, v, rest), rest)
        bag = rest
        if stats is not None:
            stats.rows.append((len(bag), len(table)))
    if () in table:
        return Verdict(True, _collect(table[()]))
    return Verdict(False)


def _prepare(g: Graph, ntd: NiceTreeDecomposition | None) -> NiceTreeDecomposition:
    if ntd is None:
        return to_nice(compute_tree_decomposition(g))
    ntd.validate(g)
    return ntd


# -- Ext VC -------------------------------------------------------------------


class VertexCoverDP(_BagDP):
    """States: 0 outside the cover, 1 in the cover without a private edge
    yet, 2 in the cover with a private edge."""

    def __init__(self, g: Graph, U: Iterable[int]):
        super().__init__(g)
        self.U = frozenset(U)

    def introduce(self, table, bag, v, new_bag):
        adj = set(self.g.neighbors(v))
        idx = [j for j, x in enumerate(bag) if x in adj]
        out: dict = {}
        for row, wit in table.items():
            nbr = [row[j] for j in idx]
            if all(s != 0 for s in nbr):
                if v not in self.U:
                    lifted = list(row)
                    for j in idx:
                        lifted[j] = 2
                    out.setdefault(_insert(tuple(lifted), bag, v, 0), wit)
                out.setdefault(_insert(row, bag, v, 1), wit)
            if any(s == 0 for s in nbr):
                out.setdefault(_insert(row, bag, v, 2), wit)
        return out

    def forget(self, table, bag, v, new_bag):
        p = bag.index(v)
        out: dict = {}
        for row, wit in table.items():
            s = row[p]
            if s == 1:
                continue
            key = row[:p] + row[p + 1 :]
            if key not in out:
                out[key] = _add(wit, v) if s == 2 else wit
        return out

    def join(self, left, right, bag):
        groups: dict[tuple, list] = {}
        for row, wit in right.items():
            groups.setdefault(tuple(s > 0 for s in row), []).append((row, wit))
        out: dict = {}
        for row, wit in left.items():
            for other, owit in groups.get(tuple(s > 0 for s in row), ()):
                key = tuple(max(a, b) for a, b in zip(row, other))
                out.setdefault(key, ("&", wit, owit))
        return out

    def cleanup(self, table, bag):
        # drop a row when another one agrees except for some 1 -> 2 upgrades
        groups: dict[tuple, list] = {}
        for row in table:
            groups.setdefault(tuple(s > 0 for s in row), []).append(row)
        out = {}
        for row, wit in table.items():
            dominated = any(
                other != row and all(a == b or (a == 2 and b == 1) for a, b in zip(other, row))
                for other in groups[tuple(s > 0 for s in row)]
            )
            if not dominated:
                out[row] = wit
        return out


# -- edge-at-forget programs ---------------------------------------------------


class _ForgetEdgeDP(_BagDP):
    """Vertices pick a class at introduce; edges are settled at forget."""

    def states(self, v: int) -> list:
        raise NotImplementedError

    def before_edges(self, u: int, su, nbrs: list[tuple[int, object]]):
        """Hook run once per forget; returns (su, nbr states) or None."""
        return su, [s for _, s in nbrs]

    def edge(self, u: int, su, w: int, sw, k: int) -> list[tuple[object, object, int | None]]:
        raise NotImplementedError

    def final_ok(self, u: int, su) -> bool:
        raise NotImplementedError

    def merge(self, a, b):
        raise NotImplementedError

    def element(self, u: int, su) -> int | None:
        return None

    def introduce(self, table, bag, v, new_bag):
        opts = self.states(v)
        out: dict = {}
        for row, wit in table.items():
            for s in opts:
                out.setdefault(_insert(row, bag, v, s), wit)
        return out

    def forget(self, table, bag, v, new_bag):
        p = bag.index(v)
        adj = set(self.g.neighbors(v))
        nbr_pos = [j for j, x in enumerate(bag) if x in adj]
        out: dict = {}
        for row, wit in table.items():
            pre = self.before_edges(v, row[p], [(bag[j], row[j]) for j in nbr_pos])
            if pre is None:
                continue
            su, nstates = pre
            base = list(row)
            base[p] = su
            for j, s in zip(nbr_pos, nstates):
                base[j] = s
            partial = [(tuple(base), wit)]
            for j in nbr_pos:
                w = bag[j]
                k = self.g.edge_index(v, w)
                nxt = []
                for r, c in partial:
                    for nu, nw, chosen in self.edge(v, r[p], w, r[j], k):
                        rr = list(r)
                        rr[p], rr[j] = nu, nw
                        nxt.append((tuple(rr), c if chosen is None else _add(c, chosen)))
                partial = nxt
            for r, c in partial:
                if not self.final_ok(v, r[p]):
                    continue
                e = self.element(v, r[p])
                key = r[:p] + r[p + 1 :]
                if key not in out:
                    out[key] = c if e is None else _add(c, e)
        return out

    def join(self, left, right, bag):
        # merge() never combines different classes, so pair rows by class
        groups: dict[tuple, list] = {}
        for other, owit in right.items():
            groups.setdefault(tuple(s[0] for s in other), []).append((other, owit))
        out: dict = {}
        for row, wit in left.items():
            for other, owit in groups.get(tuple(s[0] for s in row), ()):
                merged = []
                for a, b in zip(row, other):
                    m = self.merge(a, b)
                    if m is None:
                        break
                    merged.append(m)
                else:
                    out.setdefault(tuple(merged), ("&", wit, owit))
        return out


class MatchingDP(_ForgetEdgeDP):
    """Classes: F (unmatched) or M (matched, with a 'paired' flag)."""

    def __init__(self, g: Graph, allowed: Iterable[int]):
        super().__init__(g)
        self.allowed = frozenset(allowed)

    def states(self, v):
        return [("F",), ("M", False)]

    def edge(self, u, su, w, sw, k):
        if su[0] == "F" and sw[0] == "F":
            return []  # the edge could still be added
        out = [(su, sw, None)]
        if su == ("M", False) and sw == ("M", False) and k in self.allowed:
            out.append((("M", True), ("M", True), k))
        return out

    def final_ok(self, u, su):
        return su[0] == "F" or su[1]

    def merge(self, a, b):
        if a[0] != b[0]:
            return None
        if a[0] == "F":
            return a
        if a[1] and b[1]:
            return None
        return ("M", a[1] or b[1])


def _bump(s, limit_one: bool):
    # counts are capped at 2; class-1 vertices may not exceed 1
    c = s[1] + 1
    if limit_one and c > 1:
        return None
    return (s[0], min(c, 2)) + s[2:]


class EdgeCoverDP(_ForgetEdgeDP):
    """Classes: 1 (exactly one cover edge, private to it) or 2 (at least two)."""

    def __init__(self, g: Graph, U: Iterable[int]):
        super().__init__(g)
        self.U = frozenset(U)

    def states(self, v):
        return [(1, 0), (2, 0)]

    def edge(self, u, su, w, sw, k):
        out = []
        if k not in self.U:
            out.append((su, sw, None))
        if su[0] == 1 or sw[0] == 1:
            nu, nw = _bump(su, su[0] == 1), _bump(sw, sw[0] == 1)
            if nu is not None and nw is not None:
                out.append((nu, nw, k))
        return out

    def final_ok(self, u, su):
        return su[1] == su[0]

    def merge(self, a, b):
        if a[0] != b[0]:
            return None
        c = a[1] + b[1]
        if a[0] == 1 and c > 1:
            return None
        return (a[0], min(c, 2))


class EdgeDominationDP(_ForgetEdgeDP):
    """Classes by final degree in D: 0, 1 or 2 (meaning at least two).

    Class-1 vertices carry (count, has0, need0): has0 records a class-0
    neighbour; need0 records that a D-edge relies on one for minimality.
    An edge xz of D is justified iff both ends have D-degree 1, or an end
    of D-degree 1 has a neighbour of D-degree 0.
    """

    def __init__(self, g: Graph, U: Iterable[int]):
        super().__init__(g)
        self.U = frozenset(U)
        self.touched = g.vertices_of(self.U)

    def states(self, v):
        out = [] if v in self.touched else [(0,)]
        return out + [(1, 0, False, False), (2, 0)]

    def before_edges(self, u, su, nbrs):
        states = []
        for _, sw in nbrs:
            if su[0] == 0 and sw[0] == 0:
                return None  # undominated edge
            if su[0] == 1 and sw[0] == 0:
                su = (1, su[1], True, su[3])
            if sw[0] == 1 and su[0] == 0:
                sw = (1, sw[1], True, sw[3])
            states.append(sw)
        return su, states

    def edge(self, u, su, w, sw, k):
        out = []
        if k not in self.U:
            out.append((su, sw, None))
        if su[0] == 0 or sw[0] == 0:
            return out
        nu, nw = _bump(su, su[0] == 1), _bump(sw, sw[0] == 1)
        if nu is None or nw is None:
            return out
        if su[0] == 1 and sw[0] == 1:
            pass
        elif su[0] == 1 and su[2]:
            pass
        elif sw[0] == 1:
            nw = (1, nw[1], nw[2], True)
        else:
            return out
        out.append((nu, nw, k))
        return out

    def final_ok(self, u, su):
        if su[0] == 0:
            return True
        if su[0] == 2:
            return su[1] == 2
        return su[1] == 1 and (su[2] or not su[3])

    def merge(self, a, b):
        if a[0] != b[0]:
            return None
        if a[0] == 0:
            return a
        c = a[1] + b[1]
        if a[0] == 2:
            return (2, min(c, 2))
        if c > 1:
            return None
        return (1, c, a[2] or b[2], a[3] or b[3])


class DominationDP(_ForgetEdgeDP):
    """Classes: I (in D, no D-neighbour, private to itself), D (in D with
    flags seenD, priv), O1 (exactly one D-neighbour), O2 (at least two).

    A D vertex becomes priv when an O1 vertex is attached to it; the O1
    count is checked when that vertex is forgotten.
    """

    def __init__(self, g: Graph, U: Iterable[int]):
        super().__init__(g)
        self.U = frozenset(U)

    def states(self, v):
        out = [("I",), ("D", False, False)]
        if v not in self.U:
            out += [("O1", 0), ("O2", 0)]
        return out

    @staticmethod
    def _in(s) -> bool:
        return s[0] in ("I", "D")

    def _attach(self, d, o):
        # o (outside D) gains the D-neighbour d
        no = _bump(o, o[0] == "O1")
        if no is None:
            return None
        if o[0] == "O1" and d[0] == "D":
            d = ("D", d[1], True)
        return d, no

    def edge(self, u, su, w, sw, k):
        if self._in(su) and self._in(sw):
            if su[0] == "I" or sw[0] == "I":
                return []
            return [(("D", True, su[2]), ("D", True, sw[2]), None)]
        if self._in(su):
            r = self._attach(su, sw)
            return [] if r is None else [(r[0], r[1], None)]
        if self._in(sw):
            r = self._attach(sw, su)
            return [] if r is None else [(r[1], r[0], None)]
        return [(su, sw, None)]

    def final_ok(self, u, su):
        if su[0] == "I":
            return True
        if su[0] == "D":
            return su[1] and su[2]
        return su[1] == (1 if su[0] == "O1" else 2)

    def element(self, u, su):
        return u if self._in(su) else None

    def merge(self, a, b):
        if a[0] != b[0]:
            return None
        if a[0] == "I":
            return a
        if a[0] == "D":
            return ("D", a[1] or b[1], a[2] or b[2])
        c = a[1] + b[1]
        if a[0] == "O1" and c > 1:
            return None
        return (a[0], min(c, 2))


# -- public entry points -------------------------------------------------------


def ext_vc_treewidth(g: Graph, U: Iterable[int], ntd: NiceTreeDecomposition | None = None,
                     stats: DpStats | None = None) -> Verdict:
    return run_dp(VertexCoverDP(g, U), g, _prepare(g, ntd), stats)


def ext_em_treewidth(g: Graph, U_allowed: Iterable[int], ntd: NiceTreeDecomposition | None = None,
                     stats: DpStats | None = None) -> Verdict:
    return run_dp(MatchingDP(g, U_allowed), g, _prepare(g, ntd), stats)


def ext_ec_treewidth(g: Graph, U: Iterable[int], ntd: NiceTreeDecomposition | None = None,
                     stats: DpStats | None = None) -> Verdict:
    return run_dp(EdgeCoverDP(g, U), g, _prepare(g, ntd), stats)


def ext_eds_treewidth(g: Graph, U: Iterable[int], ntd: NiceTreeDecomposition | None = None,
                      stats: DpStats | None = None) -> Verdict:
    return run_dp(EdgeDominationDP(g, U), g, _prepare(g, ntd), stats)


def ext_ds_treewidth(g: Graph, U: Iterable[int], ntd: NiceTreeDecomposition | None = None,
                     stats: DpStats | None = None) -> Verdict:
    return run_dp(DominationDP(g, U), g, _prepare(g, ntd), stats)
