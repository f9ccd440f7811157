"""Undirected simple graphs, their queries, and the plain-text file formats.

Files use 1-based vertex indices; everything in memory is 0-based. The
conversion happens only in :func:`parse_graph`, :func:`parse_presolution`
and their ``serialize_*`` counterparts.

Graph file::

    # comment
    n m
    u v          (m lines, 1-based)

Pre-solution file::

    V k                      E k
    v1 v2 ... vk             u1 v1
                             ...  (k lines)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    CountMismatchError,
    DuplicateEdgeError,
    IndexRangeError,
    MalformedLineError,
    SelfLoopError,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edge ``k`` is the k-th pair of ``edges``; pairs are stored with the
    smaller endpoint first. ``names`` optionally labels vertices (used by
    the reduction generators so emitted files stay readable).
    """

    n: int
    edges: tuple[Edge, ...] = ()
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[Edge] = set()
        norm = []
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise IndexRangeError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise DuplicateEdgeError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))
        if self.names is not None and len(self.names) != self.n:
            raise ValueError("names must have one entry per vertex")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def _incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for k, (u, v) in enumerate(self.edges):
            inc[u].append(k)
            inc[v].append(k)
        return tuple(tuple(i) for i in inc)

    @cached_property
    def _edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check(v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return frozenset(self.neighbors(v)) | {v}

    def incident_edges(self, v: int) -> tuple[int, ...]:
        """Indices of the edges touching ``v``."""
        self._check(v)
        return self._incidence[v]

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_index(u, v) is not None

    def edge_index(self, u: int, v: int) -> int | None:
        return self._edge_index.get((u, v) if u < v else (v, u))

    def vertices_of(self, edge_ids: Iterable[int]) -> frozenset[int]:
        """V(X): endpoints of the given edges."""
        out: set[int] = set()
        for k in edge_ids:
            out.update(self.edges[k])
        return frozenset(out)

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """G[S], relabelled to 0..|S|-1. Returns the subgraph and the old labels."""
        keep = sorted(set(vertices))
        for v in keep:
            self._check(v)
        pos = {v: i for i, v in enumerate(keep)}
        edges = tuple((pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos)
        names = tuple(self.names[v] for v in keep) if self.names else None
        return Graph(len(keep), edges, names), tuple(keep)

    def partial_graph(self, edge_ids: Iterable[int]) -> "Graph":
        """G[X] = (V, X), keeping the relative order of the selected edges."""
        chosen = sorted(set(edge_ids))
        for k in chosen:
            if not 0 <= k < self.m:
                raise IndexError(f"edge index {k} out of range for m={self.m}")
        return Graph(self.n, tuple(self.edges[k] for k in chosen), self.names)

    def is_bipartite(self) -> tuple[int, ...] | None:
        """A proper 2-colouring (tuple of 0/1 per vertex), or None."""
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] != -1:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if color[w] == -1:
                        color[w] = 1 - color[u]
                        stack.append(w)
                    elif color[w] == color[u]:
                        return None
        return tuple(color)

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v + 1)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((no, line.split()))
    return out


def _ints(tokens: Sequence[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MalformedLineError(f"expected integers, got {' '.join(tokens)!r}", line) from None


def parse_graph(text: str | bytes) -> Graph:
    """Read the ``n m`` + edge-list format (1-based) into a :class:`Graph`."""
    if isinstance(text, bytes):
        text = text.decode()
    lines = _content_lines(text)
    if not lines:
        raise MalformedLineError("missing 'n m' header")
    hno, head = lines[0]
    nums = _ints(head, hno)
    if len(nums) != 2 or min(nums) < 0:
        raise MalformedLineError("header must be 'n m' with non-negative integers", hno)
    n, m = nums
    body = lines[1:]
    if len(body) != m:
        raise CountMismatchError(f"header declares {m} edges, found {len(body)}", hno)
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for no, toks in body:
        pair = _ints(toks, no)
        if len(pair) != 2:
            raise MalformedLineError("edge line must be 'u v'", no)
        u, v = pair
        if not (1 <= u <= n and 1 <= v <= n):
            raise IndexRangeError(f"vertex index out of range 1..{n}", no)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", no)
        e = (min(u, v) - 1, max(u, v) - 1)
        if e in seen:
            raise DuplicateEdgeError(f"duplicate edge {u} {v}", no)
        seen.add(e)
        edges.append((u - 1, v - 1))
    names = _parse_names(text, n)
    return Graph(n, tuple(edges), names)


def _parse_names(text: str, n: int) -> tuple[str, ...] | None:
    names: dict[int, str] = {}
    for raw in text.splitlines():
        toks = raw.strip().split()
        if len(toks) == 4 and toks[0] == "#" and toks[1] == "v" and toks[2].isdigit():
            names[int(toks[2]) - 1] = toks[3]
    if names and len(names) == n and set(names) == set(range(n)):
        return tuple(names[i] for i in range(n))
    return None


def serialize_graph(g: Graph, header: str | None = None) -> str:
    """Canonical text form; ``parse_graph(serialize_graph(g)) == g``."""
    out = []
    if header:
        out.append(f"# {header}")
    if g.names:
        out.extend(f"# v {i + 1} {name}" for i, name in enumerate(g.names))
    out.append(f"{g.n} {g.m}")
    out.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class PreSolution:
    """A vertex set (``kind == 'V'``) or edge-index set (``kind == 'E'``)."""

    kind: str
    elements: frozenset[int]


def parse_presolution(text: str | bytes, g: Graph) -> PreSolution:
    if isinstance(text, bytes):
        text = text.decode()
    lines = _content_lines(text)
    if not lines:
        raise MalformedLineError("missing 'V k' or 'E k' header")
    hno, head = lines[0]
    if len(head) != 2 or head[0] not in ("V", "E"):
        raise MalformedLineError("header must be 'V k' or 'E k'", hno)
    kind = head[0]
    (k,) = _ints(head[1:], hno)
    if kind == "V":
        tokens: list[int] = []
        for no, toks in lines[1:]:
            for t in _ints(toks, no):
                if not 1 <= t <= g.n:
                    raise IndexRangeError(f"vertex {t} out of range 1..{g.n}", no)
                tokens.append(t - 1)
        if len(tokens) != k:
            raise CountMismatchError(f"declared {k} vertices, found {len(tokens)}", hno)
        return PreSolution("V", frozenset(tokens))
    body = lines[1:]
    if len(body) != k:
        raise CountMismatchError(f"declared {k} edges, found {len(body)}", hno)
    ids: set[int] = set()
    for no, toks in body:
        pair = _ints(toks, no)
        if len(pair) != 2:
            raise MalformedLineError("edge line must be 'u v'", no)
        u, v = pair
        if not (1 <= u <= g.n and 1 <= v <= g.n):
            raise IndexRangeError(f"vertex index out of range 1..{g.n}", no)
        idx = g.edge_index(u - 1, v - 1)
        if idx is None:
            raise IndexRangeError(f"{u} {v} is not an edge of the graph", no)
        ids.add(idx)
    return PreSolution("E", frozenset(ids))


def serialize_presolution(kind: str, elements: Iterable[int], g: Graph) -> str:
    items = sorted(elements)
    if kind == "V":
        body = " ".join(str(v + 1) for v in items)
        return f"V {len(items)}\n" + (body + "\n" if body else "")
    lines = [f"E {len(items)}"]
    lines.extend(f"{g.edges[k][0] + 1} {g.edges[k][1] + 1}" for k in items)
    return "\n".join(lines) + "\n"
