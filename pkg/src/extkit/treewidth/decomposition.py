"""Tree decompositions, their validation, and conversion to nice form."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from ..errors import DecompositionError, MalformedLineError
from ..graphs import Graph, _content_lines, _ints


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags plus parent links; ``parent[root] is None``."""

    bags: tuple[frozenset[int], ...]
    parent: tuple[int | None, ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def root(self) -> int:
        return self.parent.index(None)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.bags]
        for i, p in enumerate(self.parent):
            if p is not None:
                ch[p].append(i)
        return ch

    def validate(self, g: Graph) -> None:
        """Raise :class:`DecompositionError` unless this decomposes g."""
        k = len(self.bags)
        if len(self.parent) != k:
            raise DecompositionError("bags and parent links differ in length")
        if g.n == 0:
            return
        if k == 0 or self.parent.count(None) != 1:
            raise DecompositionError("decomposition needs exactly one root")
        # parent links must form a tree: every node reaches the root
        for i in range(k):
            seen, j = set(), i
            while self.parent[j] is not None:
                if j in seen:
                    raise DecompositionError("parent links contain a cycle")
                seen.add(j)
                j = self.parent[j]
                if not 0 <= j < k:
                    raise DecompositionError(f"parent index {j} out of range")
        for b in self.bags:
            if any(not 0 <= v < g.n for v in b):
                raise DecompositionError("bag contains a vertex outside the graph")
        covered = set().union(*self.bags)
        if covered != set(range(g.n)):
            missing = min(set(range(g.n)) - covered)
            raise DecompositionError(f"vertex {missing} lies in no bag")
        for u, v in g.edges:
            if not any(u in b and v in b for b in self.bags):
                raise DecompositionError(f"edge ({u}, {v}) lies in no bag")
        for v in range(g.n):
            holders = [i for i, b in enumerate(self.bags) if v in b]
            # connected iff exactly one holder has its parent outside the set
            tops = [i for i in holders if self.parent[i] is None or v not in self.bags[self.parent[i]]]
            if len(tops) != 1:
                raise DecompositionError(f"bags holding vertex {v} are not connected")


def compute_tree_decomposition(g: Graph) -> TreeDecomposition:
    """Min-fill heuristic decomposition; valid, not necessarily optimal."""
    if g.n == 0:
        return TreeDecomposition((), ())
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    _, tree = treewidth_min_fill_in(h)
    nodes = sorted(tree.nodes(), key=lambda b: (-len(b), sorted(b)))
    index = {b: i for i, b in enumerate(nodes)}
    parent: list[int | None] = [None] * len(nodes)
    for a, b in nx.bfs_edges(tree, nodes[0]):
        parent[index[b]] = index[a]
    td = TreeDecomposition(tuple(frozenset(b) for b in nodes), tuple(parent))
    td.validate(g)
    return td


def parse_td(text: str | bytes, g: Graph | None = None) -> TreeDecomposition:
    """PACE-style file: ``s td N w n``, bag lines ``b i v..``, edge lines ``[t] i j``.

    Bag 1 becomes the root. Vertices are 1-based in the file.
    """
    if isinstance(text, bytes):
        text = text.decode()
    lines = [(no, toks) for no, toks in _content_lines(text) if toks[0] != "c"]
    if not lines or lines[0][1][:2] != ["s", "td"] or len(lines[0][1]) != 5:
        raise MalformedLineError("missing 's td <bags> <width+1> <n>' header", lines[0][0] if lines else None)
    hno, head = lines[0]
    nbags, _, nverts = _ints(head[2:], hno)
    bags: list[frozenset[int] | None] = [None] * nbags
    adj: list[list[int]] = [[] for _ in range(nbags)]
    for no, toks in lines[1:]:
        if toks[0] == "b":
            vals = _ints(toks[1:], no)
            if not vals or not 1 <= vals[0] <= nbags:
                raise MalformedLineError("bad bag line", no)
            if any(not 1 <= v <= nverts for v in vals[1:]):
                raise MalformedLineError("bag vertex out of range", no)
            bags[vals[0] - 1] = frozenset(v - 1 for v in vals[1:])
        else:
            vals = _ints(toks[1:] if toks[0] == "t" else toks, no)
            if len(vals) != 2 or not all(1 <= x <= nbags for x in vals):
                raise MalformedLineError("bad tree edge line", no)
            a, b = vals[0] - 1, vals[1] - 1
            adj[a].append(b)
            adj[b].append(a)
    if any(b is None for b in bags):
        raise MalformedLineError(f"expected {nbags} bag lines")
    parent: list[int | None] = [None] * nbags
    seen = {0} if nbags else set()
    stack = [0] if nbags else []
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                parent[b] = a
                stack.append(b)
    if len(seen) != nbags:
        raise DecompositionError("tree edges do not connect all bags")
    td = TreeDecomposition(tuple(bags), tuple(parent))  # type: ignore[arg-type]
    if g is not None:
        td.validate(g)
    return td


def serialize_td(td: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags):
        out.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(b)]))
    for i, p in enumerate(td.parent):
        if p is not None:
            out.append(f"{p + 1} {i + 1}")
    return "\n".join(out) + "\n"


class NodeKind(Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: NodeKind
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None  # leaf, introduced or forgotten vertex


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes listed children-first, so index order is a valid bottom-up order."""

    nodes: tuple[NiceNode, ...]
    root: int | None

    @property
    def width(self) -> int:
        return max((len(x.bag) for x in self.nodes), default=0) - 1

    def validate(self, g: Graph) -> None:
        for i, x in enumerate(self.nodes):
            if any(c >= i for c in x.children):
                raise DecompositionError("nodes must be listed children-first")
            kids = [self.nodes[c].bag for c in x.children]
            if x.kind is NodeKind.LEAF:
                ok = not kids and x.bag == {x.vertex}
            elif x.kind is NodeKind.INTRODUCE:
                ok = len(kids) == 1 and x.vertex not in kids[0] and x.bag == kids[0] | {x.vertex}
            elif x.kind is NodeKind.FORGET:
                ok = len(kids) == 1 and x.vertex in kids[0] and x.bag == kids[0] - {x.vertex}
            else:
                ok = len(kids) == 2 and kids[0] == kids[1] == x.bag
            if not ok:
                raise DecompositionError(f"node {i} violates the {x.kind.value} shape")
        as_td = self.as_tree_decomposition()
        as_td.validate(g)

    def as_tree_decomposition(self) -> TreeDecomposition:
        parent: list[int | None] = [None] * len(self.nodes)
        for i, x in enumerate(self.nodes):
            for c in x.children:
                parent[c] = i
        return TreeDecomposition(tuple(x.bag for x in self.nodes), tuple(parent))


def to_nice(td: TreeDecomposition, g: Graph | None = None) -> NiceTreeDecomposition:
    """Standard normalisation: introduce/forget chains and binary joins.

    The root keeps the bag of the original root; solvers forget what is
    left there themselves.
    """
    if g is not None:
        td.validate(g)
    if not td.bags:
        return NiceTreeDecomposition((), None)
    nodes: list[NiceNode] = []
    children = td.children()

    def add(node: NiceNode) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def chain(top: int, target: frozenset[int]) -> int:
        bag = nodes[top].bag
        for v in sorted(bag - target):
            bag = bag - {v}
            top = add(NiceNode(NodeKind.FORGET, bag, (top,), v))
        for v in sorted(target - bag):
            bag = bag | {v}
            top = add(NiceNode(NodeKind.INTRODUCE, bag, (top,), v))
        return top

    def build_from_scratch(target: frozenset[int]) -> int:
        order = sorted(target)
        top = add(NiceNode(NodeKind.LEAF, frozenset({order[0]}), (), order[0]))
        return chain(top, target)

    # iterative post-order over the original tree
    built: dict[int, int] = {}
    stack: list[tuple[int, bool]] = [(td.root, False)]
    while stack:
        i, done = stack.pop()
        if not done:
            stack.append((i, True))
            stack.extend((c, False) for c in reversed(children[i]))
            continue
        bag = td.bags[i]
        tops = [chain(built[c], bag) if bag else built[c] for c in children[i]]
        if not bag:
            # an empty bag only glues subtrees; forget everything below it
            tops = [chain(t, frozenset()) for t in tops]
            if not tops:
                raise DecompositionError("empty leaf bag")
        elif not tops:
            tops = [build_from_scratch(bag)]
        while len(tops) > 1:
            a, b = tops.pop(0), tops.pop(0)
            if nodes[a].bag == nodes[b].bag:
                tops.append(add(NiceNode(NodeKind.JOIN, bag, (a, b))))
            else:
                # only possible under an empty glue bag: stack via forgetting
                raise DecompositionError("cannot join subtrees with different bags")
        built[i] = tops[0]
    return NiceTreeDecomposition(tuple(nodes), built[td.root])
