import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from extkit.graphs import Graph  # noqa: E402


def named(spec: str, n: int | None = None) -> Graph:
    """Graph from 'ab bc' style edge list over letters a, b, c, ..."""
    pairs = [(ord(e[0]) - 97, ord(e[1]) - 97) for e in spec.split()]
    size = n if n is not None else max((max(p) for p in pairs), default=-1) + 1
    return Graph(size, tuple(pairs))


def eid(g: Graph, *names: str) -> frozenset[int]:
    return frozenset(g.edge_index(ord(s[0]) - 97, ord(s[1]) - 97) for s in names)


def vid(*names: str) -> frozenset[int]:
    return frozenset(ord(s) - 97 for s in names)


@pytest.fixture
def p3():
    return named("ab bc")


@pytest.fixture
def p4():
    return named("ab bc cd")


@pytest.fixture
def k3():
    return named("ab ac bc")
