"""Monotone problems, extension instances and the brute-force deciders.

A monotone problem pairs a feasibility predicate with a partial order on
pre-solutions under which the feasible set is upward closed. Extremality
can therefore be tested with single steps: for set orders, removing (or
adding) one element; for partitions, merging two blocks. Any strictly
smaller feasible candidate S' < S lies above some immediate predecessor
of S, which is then feasible too.

The deciders here enumerate candidates and are the ground truth that every
specialised algorithm in the package is tested against.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterator

from .errors import (
    CandidateError,
    PreconditionError,
    SizeLimitError,
    UnsupportedDirectionError,
)


class ProblemId(str, Enum):
    VC = "vc"
    IS = "is"
    EC = "ec"
    EM = "em"
    DS = "ds"
    EDS = "eds"
    HS = "hs"
    BP = "bp"
    SAT_TAU = "sat-tau"
    R_DCPS = "r-dcps"
    R_EC = "r-ec"


class Direction(Enum):
    SUBSET_GROWING = "subset"  # U <= S iff U is a subset of S
    SUPERSET_SHRINKING = "superset"  # U <= S iff U is a superset of S
    PARTITION_REFINING = "refine"  # U <= S iff S refines U
    SATISFACTION = "satisfaction"  # assignment order of the tautology example


CheckerFactory = Callable[[Any, "int | None"], Callable[[int], bool]]

DEFAULT_CAP = 16
DEFAULT_BP_CAP = 10


def default_cap() -> int:
    return int(os.environ.get("EXTKIT_CAP", DEFAULT_CAP))


def default_bp_cap() -> int:
    return int(os.environ.get("EXTKIT_CAP", DEFAULT_BP_CAP))


@dataclass(frozen=True)
class MonotoneProblem:
    """Everything the generic deciders need to know about one problem.

    ``feasible``/``step_extremal`` take ``(payload, candidate, r)``.
    ``presolutions`` enumerates presol(I) in the canonical order and
    ``above`` enumerates only the candidates above a pre-solution, in the
    same relative order.
    """

    problem_id: ProblemId
    direction: Direction
    feasible: Callable[[Any, Any, int | None], bool]
    step_extremal: Callable[[Any, Any, int | None], bool]
    leq: Callable[[Any, Any, Any], bool]
    presolutions: Callable[[Any], Iterator[Any]]
    above: Callable[[Any, Any], Iterator[Any]]
    ground_size: Callable[[Any], int]
    validate: Callable[[Any, Any], None]
    value: Callable[[Any, Any], Fraction] = lambda payload, cand: Fraction(len(cand))
    uses_r: bool = False
    mask_checker: "CheckerFactory | None" = None

    def __repr__(self) -> str:
        return f"MonotoneProblem({self.problem_id.value})"


@dataclass(frozen=True)
class ExtensionInstance:
    problem: MonotoneProblem
    payload: Any
    presolution: Any
    r: int | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.problem.uses_r:
            if self.r is None or self.r < 1:
                raise PreconditionError("this problem needs a positive integer r")
        self.problem.validate(self.payload, self.presolution)


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.answer


# -- registry ---------------------------------------------------------------

_REGISTRY: dict[ProblemId, MonotoneProblem] = {}


def register(problem: MonotoneProblem) -> MonotoneProblem:
    _REGISTRY[problem.problem_id] = problem
    return problem


def get_problem(pid: ProblemId | str) -> MonotoneProblem:
    pid = ProblemId(pid)
    if pid not in _REGISTRY:
        # registration happens on import of the defining modules
        from . import binpacking, fpt_solvers, problems, reductions  # noqa: F401
    return _REGISTRY[pid]


# -- set-valued problems -----------------------------------------------------


def to_mask(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def from_mask(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def lex_masks(n: int, required: int = 0, allowed: int | None = None) -> Iterator[int]:
    """Subsets of range(n) as bitmasks, in lexicographic order of sorted tuples.

    Only sets containing ``required`` and contained in ``allowed`` are
    produced; pruning keeps the order identical to filtering the full
    enumeration.
    """
    if allowed is None:
        allowed = (1 << n) - 1
    if required & ~allowed:
        return
    req = [i for i in range(n) if required >> i & 1]

    def rec(mask: int, start: int, ri: int) -> Iterator[int]:
        # ri: index of the first required element not yet placed
        if ri == len(req):
            yield mask
        limit = req[ri] if ri < len(req) else n - 1
        for i in range(start, limit + 1):
            if allowed >> i & 1:
                yield from rec(mask | 1 << i, i + 1, ri + (ri < len(req) and i == req[ri]))

    yield from rec(0, 0, 0)


def make_set_problem(
    pid: ProblemId,
    direction: Direction,
    checker: CheckerFactory,
    ground_size: Callable[[Any], int],
    uses_r: bool = False,
) -> MonotoneProblem:
    """Build a :class:`MonotoneProblem` over subsets of ``range(ground_size)``."""

    def validate(payload, cand) -> None:
        n = ground_size(payload)
        if not isinstance(cand, (set, frozenset)):
            raise CandidateError(f"{pid.value}: candidate must be a set of element indices")
        for e in cand:
            if not isinstance(e, int) or isinstance(e, bool) or not 0 <= e < n:
                raise CandidateError(f"{pid.value}: element {e!r} outside 0..{n - 1}")

    def feasible(payload, cand, r=None) -> bool:
        validate(payload, cand)
        return checker(payload, r)(to_mask(cand))

    def step_extremal(payload, cand, r=None) -> bool:
        check = checker(payload, r)
        return _mask_extremal(check, to_mask(cand), ground_size(payload), direction)

    def leq(payload, a, b) -> bool:
        if direction is Direction.SUBSET_GROWING:
            return set(a) <= set(b)
        return set(a) >= set(b)

    def presolutions(payload) -> Iterator[frozenset[int]]:
        return (from_mask(m) for m in lex_masks(ground_size(payload)))

    def above(payload, u) -> Iterator[frozenset[int]]:
        n = ground_size(payload)
        if direction is Direction.SUBSET_GROWING:
            masks = lex_masks(n, required=to_mask(u))
        else:
            masks = lex_masks(n, allowed=to_mask(u))
        return (from_mask(m) for m in masks)

    return MonotoneProblem(
        problem_id=pid,
        direction=direction,
        feasible=feasible,
        step_extremal=step_extremal,
        leq=leq,
        presolutions=presolutions,
        above=above,
        ground_size=ground_size,
        validate=validate,
        uses_r=uses_r,
        mask_checker=checker,
    )


def _mask_extremal(check: Callable[[int], bool], mask: int, n: int, direction: Direction) -> bool:
    if direction is Direction.SUBSET_GROWING:
        for i in range(n):
            if mask >> i & 1 and check(mask & ~(1 << i)):
                return False
        return True
    for i in range(n):
        if not mask >> i & 1 and check(mask | 1 << i):
            return False
    return True


# -- generic operations -----------------------------------------------------


def is_extremal(problem: MonotoneProblem, payload, candidate, r: int | None = None) -> bool:
    """True iff no feasible S' != candidate lies below it in the order.

    Uses single-step moves, which is sufficient by upward closure.
    """
    if not problem.feasible(payload, candidate, r):
        raise PreconditionError("is_extremal requires a feasible candidate")
    return problem.step_extremal(payload, candidate, r)


def is_extremal_full(problem: MonotoneProblem, payload, candidate, r: int | None = None) -> bool:
    """Definition-level check over every pre-solution. Exponential; for tests."""
    if not problem.feasible(payload, candidate, r):
        raise PreconditionError("is_extremal_full requires a feasible candidate")
    for other in problem.presolutions(payload):
        if other != candidate and problem.leq(payload, other, candidate) and problem.feasible(
            payload, other, r
        ):
            return False
    return True


def _check_cap(problem: MonotoneProblem, payload, cap: int | None) -> None:
    size = problem.ground_size(payload)
    if problem.direction is Direction.PARTITION_REFINING:
        limit = default_bp_cap() if cap is None else cap
    else:
        limit = default_cap() if cap is None else cap
    if size > limit:
        raise SizeLimitError(
            f"{problem.problem_id.value}: ground set of size {size} exceeds cap {limit}"
        )


@lru_cache(maxsize=256)
def _extremal_masks(problem: MonotoneProblem, payload, r: int | None) -> tuple[int, ...]:
    """All extremal solutions of a set problem, in canonical (lexicographic) order.

    One pass fills a feasibility table over every subset; extremality is
    then a lookup per single-element move.
    """
    n = problem.ground_size(payload)
    check = problem.mask_checker(payload, r)
    full = 1 << n
    feas = bytearray(full)
    for mask in range(full):
        feas[mask] = check(mask)
    bits = [1 << i for i in range(n)]
    out = []
    growing = problem.direction is Direction.SUBSET_GROWING
    for mask in range(full):
        if not feas[mask]:
            continue
        if growing:
            ok = not any(mask & b and feas[mask ^ b] for b in bits)
        else:
            ok = not any(not mask & b and feas[mask | b] for b in bits)
        if ok:
            out.append(mask)
    out.sort(key=lambda m: [i for i in range(n) if m >> i & 1])
    return tuple(out)


def decide_extension_oracle(inst: ExtensionInstance, cap: int | None = None) -> Verdict:
    """Exhaustive decider: scan all pre-solutions, keep those above U.

    The first feasible extremal candidate in canonical order is the witness.
    For set problems the scan is tabulated once per payload and reused.
    """
    p = inst.problem
    _check_cap(p, inst.payload, cap)
    if p.mask_checker is not None:
        u = to_mask(inst.presolution)
        growing = p.direction is Direction.SUBSET_GROWING
        for mask in _extremal_masks(p, inst.payload, inst.r):
            if (mask & u == u) if growing else (mask | u == u):
                return Verdict(True, from_mask(mask))
        return Verdict(False)
    for cand in p.presolutions(inst.payload):
        if not p.leq(inst.payload, inst.presolution, cand):
            continue
        if p.feasible(inst.payload, cand, inst.r) and p.step_extremal(inst.payload, cand, inst.r):
            return Verdict(True, cand)
    return Verdict(False)


def decide_extension_dual_fpt(inst: ExtensionInstance, cap: int | None = None) -> Verdict:
    """List only supersets (refinements) of U; cost grows with the dual parameter."""
    p = inst.problem
    if p.direction not in (Direction.SUBSET_GROWING, Direction.PARTITION_REFINING):
        raise UnsupportedDirectionError(
            f"dual enumeration needs a growing or refining order, not {p.direction.value}"
        )
    if cap is not None:
        _check_cap(p, inst.payload, cap)
    for cand in p.above(inst.payload, inst.presolution):
        if p.feasible(inst.payload, cand, inst.r) and p.step_extremal(inst.payload, cand, inst.r):
            return Verdict(True, cand)
    return Verdict(False)


def check_witness(inst: ExtensionInstance, verdict: Verdict) -> bool:
    """Soundness of a positive verdict: feasible, extremal, above U."""
    if not verdict.answer:
        return verdict.witness is None
    w = verdict.witness
    p = inst.problem
    return (
        w is not None
        and p.feasible(inst.payload, w, inst.r)
        and p.step_extremal(inst.payload, w, inst.r)
        and p.leq(inst.payload, inst.presolution, w)
    )
