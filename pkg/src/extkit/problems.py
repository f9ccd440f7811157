"""Feasibility and extremality for the graph problems and Hitting Set.

Vertex problems (VC, IS, DS) take vertex sets; edge problems (EC, EM, EDS)
take sets of edge indices; HS takes sets of ground elements. All checks are
done on bitmasks so the exhaustive oracles stay fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import (
    CandidateError,
    CountMismatchError,
    IndexRangeError,
    MalformedLineError,
    PreconditionError,
)
from .framework import (
    Direction,
    ExtensionInstance,
    MonotoneProblem,
    ProblemId,
    get_problem,
    make_set_problem,
    register,
    to_mask,
)
from .graphs import Graph, _content_lines, _ints

VERTEX_PROBLEMS = frozenset({ProblemId.VC, ProblemId.IS, ProblemId.DS})
EDGE_PROBLEMS = frozenset(
    {ProblemId.EC, ProblemId.EM, ProblemId.EDS, ProblemId.R_DCPS, ProblemId.R_EC}
)


@dataclass(frozen=True)
class HittingSetInstance:
    ground_size: int
    hyperedges: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        norm = []
        for i, s in enumerate(self.hyperedges):
            s = frozenset(s)
            if not s:
                raise ValueError(f"hyperedge {i} is empty")
            if any(not 0 <= x < self.ground_size for x in s):
                raise IndexRangeError(f"hyperedge {i} has an element outside 0..{self.ground_size - 1}")
            norm.append(s)
        object.__setattr__(self, "hyperedges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.hyperedges)


def parse_hitting_set(text: str | bytes) -> HittingSetInstance:
    """``n m`` then m lines ``k e1 .. ek`` with 1-based elements."""
    if isinstance(text, bytes):
        text = text.decode()
    lines = _content_lines(text)
    if not lines:
        raise MalformedLineError("missing 'n m' header")
    hno, head = lines[0]
    nums = _ints(head, hno)
    if len(nums) != 2 or min(nums) < 0:
        raise MalformedLineError("header must be 'n m'", hno)
    n, m = nums
    if len(lines) - 1 != m:
        raise CountMismatchError(f"header declares {m} hyperedges, found {len(lines) - 1}", hno)
    edges = []
    for no, toks in lines[1:]:
        vals = _ints(toks, no)
        if not vals or vals[0] != len(vals) - 1:
            raise CountMismatchError("hyperedge line must be 'k e1 .. ek'", no)
        if vals[0] == 0:
            raise MalformedLineError("hyperedges must be nonempty", no)
        for x in vals[1:]:
            if not 1 <= x <= n:
                raise IndexRangeError(f"element {x} out of range 1..{n}", no)
        edges.append(frozenset(x - 1 for x in vals[1:]))
    return HittingSetInstance(n, tuple(edges))


def serialize_hitting_set(h: HittingSetInstance) -> str:
    out = [f"{h.ground_size} {h.m}"]
    for s in h.hyperedges:
        out.append(" ".join([str(len(s))] + [str(x + 1) for x in sorted(s)]))
    return "\n".join(out) + "\n"


# -- bitmask checkers --------------------------------------------------------


def _edge_masks(g: Graph) -> list[int]:
    return [(1 << u) | (1 << v) for u, v in g.edges]


def _incidence_masks(g: Graph) -> list[int]:
    return [to_mask(g.incident_edges(v)) for v in range(g.n)]


def _vc_checker(g: Graph, r=None):
    ems = _edge_masks(g)
    return lambda mask: all(mask & em for em in ems)


def _is_checker(g: Graph, r=None):
    ems = _edge_masks(g)
    return lambda mask: all(mask & em != em for em in ems)


def _ds_checker(g: Graph, r=None):
    nbs = [to_mask(g.closed_neighborhood(v)) for v in range(g.n)]
    return lambda mask: all(mask & nb for nb in nbs)


def _ec_checker(g: Graph, r=None):
    inc = _incidence_masks(g)
    return lambda mask: all(mask & i for i in inc)


def _em_checker(g: Graph, r=None):
    inc = [i for i in _incidence_masks(g) if i]
    return lambda mask: all((mask & i).bit_count() <= 1 for i in inc)


def _eds_checker(g: Graph, r=None):
    inc = _incidence_masks(g)
    ne = [inc[u] | inc[v] for u, v in g.edges]
    return lambda mask: all(mask & x for x in ne)


def _hs_checker(h: HittingSetInstance, r=None):
    hm = [to_mask(s) for s in h.hyperedges]
    return lambda mask: all(mask & x for x in hm)


CHECKERS = {
    ProblemId.VC: _vc_checker,
    ProblemId.IS: _is_checker,
    ProblemId.DS: _ds_checker,
    ProblemId.EC: _ec_checker,
    ProblemId.EM: _em_checker,
    ProblemId.EDS: _eds_checker,
    ProblemId.HS: _hs_checker,
}


def _n(g: Graph) -> int:
    return g.n


def _m(g: Graph) -> int:
    return g.m


VC = register(make_set_problem(ProblemId.VC, Direction.SUBSET_GROWING, _vc_checker, _n))
IS = register(make_set_problem(ProblemId.IS, Direction.SUPERSET_SHRINKING, _is_checker, _n))
DS = register(make_set_problem(ProblemId.DS, Direction.SUBSET_GROWING, _ds_checker, _n))
EC = register(make_set_problem(ProblemId.EC, Direction.SUBSET_GROWING, _ec_checker, _m))
EM = register(make_set_problem(ProblemId.EM, Direction.SUPERSET_SHRINKING, _em_checker, _m))
EDS = register(make_set_problem(ProblemId.EDS, Direction.SUBSET_GROWING, _eds_checker, _m))
HS = register(
    make_set_problem(
        ProblemId.HS, Direction.SUBSET_GROWING, _hs_checker, lambda h: h.ground_size
    )
)


def feasibility(problem_id: ProblemId | str, payload: Any, candidate: Iterable[int]) -> bool:
    p = get_problem(problem_id)
    return p.feasible(payload, frozenset(candidate), None)


# -- privacy reports ---------------------------------------------------------


@dataclass(frozen=True)
class PrivacyReport:
    """Per-element certificates of extremality.

    For minimisation problems ``witnesses[x]`` is the private item of ``x``
    (an edge index for VC, a vertex for DS and EC, an edge index for EDS, a
    hyperedge index for HS), or None when ``x`` has none. For maximisation
    problems it is a candidate element blocking the addition of ``x`` and
    ``addable`` names one element that could be added, if any.
    """

    problem_id: ProblemId
    witnesses: dict[int, int | None] = field(default_factory=dict)
    addable: int | None = None

    @property
    def complete(self) -> bool:
        return self.addable is None and all(w is not None for w in self.witnesses.values())


def _private_vc(g: Graph, cand: frozenset[int]) -> dict[int, int | None]:
    out: dict[int, int | None] = {}
    for v in sorted(cand):
        out[v] = next(
            (k for k in g.incident_edges(v) if (set(g.edges[k]) - {v}).pop() not in cand), None
        )
    return out


def _private_ds(g: Graph, cand: frozenset[int]) -> dict[int, int | None]:
    out: dict[int, int | None] = {}
    for d in sorted(cand):
        out[d] = next(
            (
                w
                for w in sorted(g.closed_neighborhood(d))
                if len(g.closed_neighborhood(w) & cand) == 1
            ),
            None,
        )
    return out


def _private_ec(g: Graph, cand: frozenset[int]) -> dict[int, int | None]:
    out: dict[int, int | None] = {}
    for k in sorted(cand):
        out[k] = next(
            (
                v
                for v in g.edges[k]
                if sum(1 for e in g.incident_edges(v) if e in cand) == 1
            ),
            None,
        )
    return out


def _dominators(g: Graph, f: int, cand: frozenset[int]) -> set[int]:
    u, v = g.edges[f]
    return {e for e in g.incident_edges(u) + g.incident_edges(v) if e in cand}


def _private_eds(g: Graph, cand: frozenset[int]) -> dict[int, int | None]:
    # e is justified iff some edge (possibly e itself) is dominated only by e
    out: dict[int, int | None] = {}
    for k in sorted(cand):
        u, v = g.edges[k]
        around = sorted(set(g.incident_edges(u) + g.incident_edges(v)))
        out[k] = next((f for f in around if _dominators(g, f, cand) == {k}), None)
    return out


def _private_hs(h: HittingSetInstance, cand: frozenset[int]) -> dict[int, int | None]:
    out: dict[int, int | None] = {}
    for x in sorted(cand):
        out[x] = next(
            (i for i, s in enumerate(h.hyperedges) if s & cand == {x}), None
        )
    return out


def _blockers_is(g: Graph, cand: frozenset[int]) -> tuple[dict[int, int | None], int | None]:
    out: dict[int, int | None] = {}
    for v in range(g.n):
        if v not in cand:
            out[v] = next((w for w in g.neighbors(v) if w in cand), None)
    addable = next((v for v, b in out.items() if b is None), None)
    return out, addable


def _blockers_em(g: Graph, cand: frozenset[int]) -> tuple[dict[int, int | None], int | None]:
    out: dict[int, int | None] = {}
    for k in range(g.m):
        if k not in cand:
            hit = sorted(_dominators(g, k, cand))
            out[k] = hit[0] if hit else None
    addable = next((k for k, b in out.items() if b is None), None)
    return out, addable


def extremality_with_privacy(
    problem_id: ProblemId | str, payload: Any, candidate: Iterable[int]
) -> tuple[bool, PrivacyReport]:
    pid = ProblemId(problem_id)
    cand = frozenset(candidate)
    p = get_problem(pid)
    if not p.feasible(payload, cand, None):
        raise PreconditionError(f"{pid.value}: candidate is not feasible")
    if pid in (ProblemId.IS, ProblemId.EM):
        blockers, addable = (_blockers_is if pid is ProblemId.IS else _blockers_em)(payload, cand)
        return addable is None, PrivacyReport(pid, blockers, addable)
    fn = {
        ProblemId.VC: _private_vc,
        ProblemId.DS: _private_ds,
        ProblemId.EC: _private_ec,
        ProblemId.EDS: _private_eds,
        ProblemId.HS: _private_hs,
    }.get(pid)
    if fn is None:
        raise CandidateError(f"no privacy report for {pid.value}")
    wit = fn(payload, cand)
    return all(w is not None for w in wit.values()), PrivacyReport(pid, wit)


# -- instance helpers --------------------------------------------------------


def hs_to_instance(h: HittingSetInstance, U: Iterable[int]) -> ExtensionInstance:
    return ExtensionInstance(HS, h, frozenset(U))


def graph_instance(
    problem_id: ProblemId | str, g: Graph, presolution: Iterable[int], r: int | None = None
) -> ExtensionInstance:
    return ExtensionInstance(get_problem(problem_id), g, frozenset(presolution), r)


def complement_is_to_vc(inst: ExtensionInstance) -> ExtensionInstance:
    """Ext IS (G, U) is Ext VC (G, V minus U): complements of maximal
    independent sets are exactly the minimal vertex covers."""
    if inst.problem.problem_id is not ProblemId.IS:
        raise CandidateError("expected an Ext IS instance")
    g: Graph = inst.payload
    return ExtensionInstance(VC, g, frozenset(range(g.n)) - inst.presolution)


def kind_of(problem_id: ProblemId | str) -> str:
    """'V' for vertex problems, 'E' for edge problems, 'X' for HS elements."""
    pid = ProblemId(problem_id)
    if pid in VERTEX_PROBLEMS:
        return "V"
    if pid in EDGE_PROBLEMS:
        return "E"
    if pid is ProblemId.HS:
        return "X"
    raise CandidateError(f"{pid.value} is not a set problem")
