"""Hardness reductions as instance generators, plus small exhaustive solvers
for the source problems so that equivalences can be tested end to end.

Gadget vertices get deterministic names (``x3.l``, ``c2.3c``); they are
written as ``# v i name`` comments when a graph is serialised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .binpacking import BP, BpInstance, Partition
from .errors import (
    CountMismatchError,
    IndexRangeError,
    InvalidInstanceError,
    MalformedLineError,
    PreconditionError,
    SizeLimitError,
)
from .framework import (
    Direction,
    ExtensionInstance,
    MonotoneProblem,
    ProblemId,
    Verdict,
    decide_extension_oracle,
    from_mask,
    get_problem,
    register,
    to_mask,
)
from .graphs import Graph, _content_lines
from .problems import HittingSetInstance

SAT_CAP = 20


# -- CNF formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Cnf:
    """Variables 1..n; a clause is a tuple of nonzero ints (DIMACS literals)."""

    n: int
    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInstanceError("variable count must be non-negative")
        cl = tuple(tuple(int(x) for x in c) for c in self.clauses)
        for j, c in enumerate(cl):
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise InvalidInstanceError(f"clause {j + 1}: literal {lit} out of range 1..{self.n}")
        object.__setattr__(self, "clauses", cl)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def _masks(self) -> list[tuple[int, int]]:
        out = []
        for c in self.clauses:
            pos = to_mask(lit - 1 for lit in c if lit > 0)
            neg = to_mask(-lit - 1 for lit in c if lit < 0)
            out.append((pos, neg))
        return out

    def satisfied_by(self, true_vars: Iterable[int]) -> bool:
        """``true_vars`` holds 0-based indices of the variables set to true."""
        a = to_mask(true_vars)
        return all(a & pos or ~a & neg for pos, neg in self._masks())


@dataclass(frozen=True)
class Cnf3B2Instance(Cnf):
    """Every clause has 3 literals on distinct variables, and each variable
    occurs exactly twice positively and twice negatively."""

    def __post_init__(self) -> None:
        super().__post_init__()
        problems = _b2_diagnostics(self)
        if problems:
            raise InvalidInstanceError("not a (3,B2) instance: " + "; ".join(problems))

    def occurrences(self, var: int) -> tuple[list[int], list[int]]:
        """Clause indices (0-based) where ``var`` occurs positively / negatively."""
        pos = [j for j, c in enumerate(self.clauses) if var in c]
        neg = [j for j, c in enumerate(self.clauses) if -var in c]
        return pos, neg


def _b2_diagnostics(f: Cnf) -> list[str]:
    out = []
    for j, c in enumerate(f.clauses):
        if len(c) != 3:
            out.append(f"clause {j + 1} has {len(c)} literals, expected 3")
        if len({abs(x) for x in c}) != len(c):
            out.append(f"clause {j + 1} repeats a variable")
    for v in range(1, f.n + 1):
        p = sum(c.count(v) for c in f.clauses)
        q = sum(c.count(-v) for c in f.clauses)
        if (p, q) != (2, 2):
            out.append(f"variable {v} occurs {p}x positive and {q}x negative, expected 2+2")
    return out


def validate_3b2sat(f: Cnf) -> Cnf3B2Instance:
    return Cnf3B2Instance(f.n, f.clauses)


def parse_dimacs(text: str | bytes) -> Cnf:
    """``p cnf n m`` header, clauses terminated by 0, ``c`` comment lines."""
    if isinstance(text, bytes):
        text = text.decode()
    lines = [(no, t) for no, t in _content_lines(text) if t[0] != "c"]
    if not lines or lines[0][1][:2] != ["p", "cnf"] or len(lines[0][1]) != 4:
        raise MalformedLineError("missing 'p cnf <vars> <clauses>' header", lines[0][0] if lines else None)
    hno, head = lines[0]
    try:
        n, m = int(head[2]), int(head[3])
    except ValueError:
        raise MalformedLineError("header counts must be integers", hno) from None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for no, toks in lines[1:]:
        for t in toks:
            try:
                lit = int(t)
            except ValueError:
                raise MalformedLineError(f"bad literal {t!r}", no) from None
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            elif abs(lit) > n:
                raise IndexRangeError(f"literal {lit} out of range 1..{n}", no)
            else:
                cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    if len(clauses) != m:
        raise CountMismatchError(f"header declares {m} clauses, found {len(clauses)}", hno)
    return Cnf(n, tuple(clauses))


def serialize_dimacs(f: Cnf) -> str:
    out = [f"p cnf {f.n} {f.m}"]
    out.extend(" ".join(str(x) for x in c) + " 0" for c in f.clauses)
    return "\n".join(out) + "\n"


def _assignments(n: int) -> Iterator[int]:
    return iter(range(1 << n))


def sat_oracle(f: Cnf, cap: int = SAT_CAP) -> dict[int, bool] | None:
    """First satisfying assignment in counting order (variable 1 is the low bit)."""
    if f.n > cap:
        raise SizeLimitError(f"sat: {f.n} variables exceed cap {cap}")
    masks = f._masks()
    for a in _assignments(f.n):
        if all(a & pos or ~a & neg for pos, neg in masks):
            return {v + 1: bool(a >> v & 1) for v in range(f.n)}
    return None


def gen_3b2sat(n: int, seed: int | None = None) -> Cnf3B2Instance:
    """Random (3,B2) formula: shuffle the 4n literal slots into triples,
    retrying until no triple repeats a variable."""
    if n < 3 or n % 3:
        raise InvalidInstanceError(f"n must be a positive multiple of 3, got {n}")
    rng = random.Random(seed)
    slots = [s * v for v in range(1, n + 1) for s in (1, 1, -1, -1)]
    while True:
        rng.shuffle(slots)
        clauses = [tuple(slots[i : i + 3]) for i in range(0, len(slots), 3)]
        if all(len({abs(x) for x in c}) == 3 for c in clauses):
            return Cnf3B2Instance(n, tuple(clauses))


# -- the tautology example --------------------------------------------------------


def _tau_step_extremal(f: Cnf, psi, r=None) -> bool:
    # psi is minimal unless it satisfies F and some assignment does not
    if not f.satisfied_by(psi):
        return True
    masks = f._masks()
    return all(all(a & p or ~a & q for p, q in masks) for a in _assignments(f.n))


def _tau_leq(f: Cnf, a, b) -> bool:
    return a == b or (f.satisfied_by(b) and not f.satisfied_by(a))


def _tau_validate(f: Cnf, cand) -> None:
    if not isinstance(f, Cnf):
        raise InvalidInstanceError("sat-tau: payload must be a CNF formula")
    if any(not 0 <= v < f.n for v in cand):
        raise InvalidInstanceError("sat-tau: assignment names a variable out of range")


SAT_TAU = register(
    MonotoneProblem(
        problem_id=ProblemId.SAT_TAU,
        direction=Direction.SATISFACTION,
        feasible=lambda f, psi, r=None: True,
        step_extremal=_tau_step_extremal,
        leq=_tau_leq,
        presolutions=lambda f: (from_mask(a) for a in _assignments(f.n)),
        above=lambda f, u: (from_mask(a) for a in _assignments(f.n) if _tau_leq(f, u, from_mask(a))),
        ground_size=lambda f: f.n,
        validate=_tau_validate,
        value=lambda f, psi: Fraction(1),
    )
)


def ext_tautology_demo(f: Cnf) -> Verdict:
    """Ext of the all-ones assignment; YES exactly when F is a tautology."""
    ones = frozenset(range(f.n))
    if not f.satisfied_by(ones):
        raise PreconditionError("the all-ones assignment must satisfy the formula")
    return decide_extension_oracle(ExtensionInstance(SAT_TAU, f, ones), cap=SAT_CAP)


# -- (3,B2)-SAT gadgets -------------------------------------------------------------


class Target(str, Enum):
    EXT_EC = "ext-ec"
    EXT_EM = "ext-em"
    EXT_DS = "ext-ds"
    EXT_EDS = "ext-eds"
    # planar variants are reserved; no generator is provided for them
    PLANAR_EXT_EC = "planar-ext-ec"
    PLANAR_EXT_EM = "planar-ext-em"
    PLANAR_EXT_DS = "planar-ext-ds"
    PLANAR_EXT_EDS = "planar-ext-eds"


_TARGET_PROBLEM = {
    Target.EXT_EC: ProblemId.EC,
    Target.EXT_EM: ProblemId.EM,
    Target.EXT_DS: ProblemId.DS,
    Target.EXT_EDS: ProblemId.EDS,
}


class _Builder:
    def __init__(self) -> None:
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.edges: list[tuple[int, int]] = []
        self.marked: list[int] = []

    def v(self, name: str) -> int:
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]

    def e(self, a: str, b: str, mark: bool = False) -> None:
        if mark:
            self.marked.append(len(self.edges))
        self.edges.append((self.v(a), self.v(b)))

    def graph(self) -> Graph:
        return Graph(len(self.names), tuple(self.edges), tuple(self.names))


def _lit(x: int) -> str:
    return f"x{abs(x)}.pos" if x > 0 else f"x{abs(x)}.neg"


def _ec_gadget(f: Cnf3B2Instance) -> tuple[Graph, frozenset[int]]:
    b = _Builder()
    for j in range(1, f.m + 1):
        b.v(f"c{j}")
    for i in range(1, f.n + 1):
        b.e(f"x{i}.pos", f"x{i}.l", mark=True)
        b.e(f"x{i}.l", f"x{i}.m")
        b.e(f"x{i}.m", f"x{i}.r")
        b.e(f"x{i}.r", f"x{i}.neg", mark=True)
    for j, c in enumerate(f.clauses, 1):
        for lit in c:
            b.e(f"c{j}", _lit(lit))
    return b.graph(), frozenset(b.marked)


def _em_gadget(f: Cnf3B2Instance) -> tuple[Graph, frozenset[int]]:
    # marked edges are the forbidden ones; U is their complement
    b = _Builder()
    for j in range(1, f.m + 1):
        c = f"c{j}"
        for i in (1, 2, 3):
            b.e(f"{c}.lit{i}", f"{c}.{i}c", mark=True)
        b.e(f"{c}.1c", f"{c}.e")
        b.e(f"{c}.2c", f"{c}.e")
        b.e(f"{c}.2c", f"{c}.f")
        b.e(f"{c}.3c", f"{c}.f")
    for i in range(1, f.n + 1):
        x = f"x{i}"
        pos, neg = f.occurrences(i)
        for j in pos:
            b.e(f"{x}.1x", f"{x}.1x.c{j + 1}", mark=True)
            b.e(f"{x}.1x.c{j + 1}", f"{x}.pos.c{j + 1}")
        for j in neg:
            b.e(f"{x}.2x", f"{x}.2x.c{j + 1}", mark=True)
            b.e(f"{x}.2x.c{j + 1}", f"{x}.neg.c{j + 1}")
        b.e(f"{x}.1x", f"{x}.3x")  # e_x
        b.e(f"{x}.2x", f"{x}.3x")  # e_not_x
        b.e(f"{x}.3x", f"{x}.4x", mark=True)
    for j, c in enumerate(f.clauses, 1):
        for i, lit in enumerate(c, 1):
            b.e(f"x{abs(lit)}.{'pos' if lit > 0 else 'neg'}.c{j}", f"c{j}.lit{i}")
    g = b.graph()
    return g, frozenset(range(g.m)) - frozenset(b.marked)


def _ds_like_gadget(f: Cnf3B2Instance, edges: bool) -> tuple[Graph, frozenset[int]]:
    b = _Builder()
    forced: list[int] = []
    for j in range(1, f.m + 1):
        c = f"c{j}"
        b.e(f"{c}.1p", f"{c}.1c")
        b.e(f"{c}.1c", f"{c}.3c")
        b.e(f"{c}.2p", f"{c}.2c")
        b.e(f"{c}.2c", f"{c}.3c")
        b.e(f"{c}.3c", f"{c}.4c", mark=edges)
        b.e(f"{c}.4c", f"{c}.5c", mark=edges)
        if edges:
            b.e(f"{c}.5c", f"{c}.6c")
        else:
            forced += [b.v(f"{c}.3c"), b.v(f"{c}.4c")]
    for i in range(1, f.n + 1):
        x = f"x{i}"
        b.e(f"{x}.pos", f"{x}.1x")
        b.e(f"{x}.neg", f"{x}.1x")
        if edges:
            b.e(f"{x}.1x", f"{x}.2x", mark=True)
            b.e(f"{x}.2x", f"{x}.3x", mark=True)
            b.e(f"{x}.3x", f"{x}.4x")
        else:
            forced.append(b.v(f"{x}.1x"))
    for j, c in enumerate(f.clauses, 1):
        b.e(f"c{j}.1p", _lit(c[0]))
        b.e(f"c{j}.1p", _lit(c[1]))
        b.e(f"c{j}.2p", _lit(c[2]))
    return b.graph(), frozenset(b.marked if edges else forced)


def reduce_3b2sat(inst: Cnf, target: Target | str) -> ExtensionInstance:
    """Build the extension instance for ``target``; satisfiable iff YES.

    For EXT_EM the pre-solution is the set of permitted edges (maximal
    matchings inside it are sought); for the others it is the forced set.
    """
    target = Target(target)
    if target not in _TARGET_PROBLEM:
        raise NotImplementedError(f"{target.value}: planar gadgets are not implemented")
    f = inst if isinstance(inst, Cnf3B2Instance) else validate_3b2sat(inst)
    if target is Target.EXT_EC:
        g, u = _ec_gadget(f)
    elif target is Target.EXT_EM:
        g, u = _em_gadget(f)
    else:
        g, u = _ds_like_gadget(f, edges=target is Target.EXT_EDS)
    return ExtensionInstance(
        get_problem(_TARGET_PROBLEM[target]), g, u, meta={"target": target.value, "source": f}
    )


def assignment_from_witness(inst: ExtensionInstance, witness: Iterable[int]) -> dict[int, bool]:
    """Read a truth assignment back off an extension witness."""
    g: Graph = inst.payload
    target = Target(inst.meta["target"])
    f: Cnf = inst.meta["source"]
    w = frozenset(witness)
    idx = {name: i for i, name in enumerate(g.names or ())}
    out = {}
    for i in range(1, f.n + 1):
        x = f"x{i}"
        if target is Target.EXT_EC:
            out[i] = g.edge_index(idx[f"{x}.m"], idx[f"{x}.r"]) in w
        elif target is Target.EXT_EM:
            out[i] = g.edge_index(idx[f"{x}.1x"], idx[f"{x}.3x"]) in w
        elif target is Target.EXT_DS:
            out[i] = idx[f"{x}.pos"] in w
        else:
            out[i] = g.edge_index(idx[f"{x}.pos"], idx[f"{x}.1x"]) in w
    return out


# -- Hitting Set to Dominating Set ------------------------------------------------


def reduce_hs_to_ext_ds(h: HittingSetInstance, U: Iterable[int]) -> ExtensionInstance:
    """Incidence graph plus a pendant-guarded hub y over the elements and a
    path z1..z4 whose end z1 sees every hyperedge vertex."""
    U = frozenset(U)
    if any(not 0 <= x < h.ground_size for x in U):
        raise InvalidInstanceError("pre-solution names an element outside the ground set")
    b = _Builder()
    for x in range(h.ground_size):
        b.v(f"e{x + 1}")
    for i in range(h.m):
        b.v(f"s{i + 1}")
    for i, s in enumerate(h.hyperedges):
        for x in sorted(s):
            b.e(f"e{x + 1}", f"s{i + 1}")
    b.e("y'", "y")
    for x in range(h.ground_size):
        b.e(f"e{x + 1}", "y")
    b.e("z1", "z2")
    b.e("z2", "z3")
    b.e("z3", "z4")
    for i in range(h.m):
        b.e("z1", f"s{i + 1}")
    u2 = U | {b.index["y"], b.index["z2"], b.index["z3"]}
    return ExtensionInstance(get_problem(ProblemId.DS), b.graph(), frozenset(u2))


# -- Ext VC to Ext EDS ---------------------------------------------------------------


def reduce_extvc_to_exteds(
    g: Graph, U: Iterable[int], bipartition: Sequence[int] | None = None
) -> ExtensionInstance:
    """``bipartition[v]`` in {0, 1} names the side of v; computed if omitted."""
    U = frozenset(U)
    if bipartition is None:
        bipartition = g.is_bipartite()
        if bipartition is None:
            raise InvalidInstanceError("graph is not bipartite")
    side = tuple(bipartition)
    if len(side) != g.n or any(s not in (0, 1) for s in side):
        raise InvalidInstanceError("bipartition must give side 0 or 1 for every vertex")
    if any(side[u] == side[v] for u, v in g.edges):
        raise InvalidInstanceError("bipartition has an edge inside one side")
    if any(not 0 <= u < g.n for u in U):
        raise InvalidInstanceError("pre-solution names a vertex outside the graph")
    names = [g.name(v) for v in range(g.n)]
    extra = [f"{t}{i}" for i in (1, 2) for t in "xyz"]
    clash = set(names) & set(extra)
    if clash:
        names = [f"v.{s}" for s in names]
    idx = {s: g.n + k for k, s in enumerate(extra)}
    edges = list(g.edges)
    marked = []
    for i in (1, 2):
        x, y, z = idx[f"x{i}"], idx[f"y{i}"], idx[f"z{i}"]
        marked.append(len(edges))
        edges.append((x, y))
        edges.append((y, z))
        for v in range(g.n):
            if side[v] == i - 1:
                if v in U:
                    marked.append(len(edges))
                edges.append((v, x))
    h = Graph(g.n + 6, tuple(edges), tuple(names + extra))
    return ExtensionInstance(get_problem(ProblemId.EDS), h, frozenset(marked))


# -- 3-Partition to Ext BP --------------------------------------------------------------


@dataclass(frozen=True)
class ThreePartitionInstance:
    values: tuple[int, ...]
    bound: int
    m: int = field(init=False)

    def __post_init__(self) -> None:
        vals = tuple(int(s) for s in self.values)
        object.__setattr__(self, "values", vals)
        b = self.bound
        if len(vals) % 3:
            raise InvalidInstanceError(f"need 3m values, got {len(vals)}")
        m = len(vals) // 3
        if b <= 0 or any(s <= 0 for s in vals):
            raise InvalidInstanceError("values and bound must be positive")
        for i, s in enumerate(vals):
            if not (b < 4 * s and 2 * s < b):
                raise InvalidInstanceError(f"value {s} (item {i + 1}) violates b/4 < s < b/2")
        if sum(vals) != m * b:
            raise InvalidInstanceError(f"values sum to {sum(vals)}, expected m*b = {m * b}")
        object.__setattr__(self, "m", m)


def three_partition_solve(tp: ThreePartitionInstance) -> list[tuple[int, ...]] | None:
    """Exhaustive search for m triples of sum b (0-based indices), or None."""
    vals, b = tp.values, tp.bound

    def rec(left: tuple[int, ...]) -> list[tuple[int, ...]] | None:
        if not left:
            return []
        first, rest = left[0], left[1:]
        for a, c in combinations(rest, 2):
            if vals[first] + vals[a] + vals[c] == b:
                sub = rec(tuple(i for i in rest if i not in (a, c)))
                if sub is not None:
                    return [(first, a, c)] + sub
        return None

    return rec(tuple(range(len(vals))))


def reduce_3partition_to_ext_bp(tp: ThreePartitionInstance) -> ExtensionInstance:
    """Item 0 weighs m/(m+1), item i weighs s_i/b; pi_U = {{0}, {1..3m}}."""
    m = tp.m
    weights = (Fraction(m, m + 1),) + tuple(Fraction(s, tp.bound) for s in tp.values)
    bi = BpInstance(weights)
    blocks = [[0]] + ([list(range(1, 3 * m + 1))] if m else [])
    return ExtensionInstance(BP, bi, Partition.of(blocks, bi.n))
