"""Ext Bin Packing: partitions of weighted items ordered by refinement.

A partition is feasible when every block weighs at most 1, and minimal
when no two blocks can be merged; by sorting it suffices to look at the
two lightest blocks. Weights are exact fractions throughout.

File format::

    n
    w1 w2 ... wn          (p/q or decimal strings, each strictly in (0, 1))
    i j k                 (one line per block of pi_U, 1-based items)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import (
    CandidateError,
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
    default_bp_cap,
    register,
)
from .graphs import _content_lines


@dataclass(frozen=True)
class BpInstance:
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        for i, w in enumerate(ws):
            if not 0 < w < 1:
                raise InvalidInstanceError(f"weight of item {i} is {w}, not strictly between 0 and 1")
        object.__setattr__(self, "weights", ws)

    @property
    def n(self) -> int:
        return len(self.weights)

    def weight(self, items: Iterable[int]) -> Fraction:
        return sum((self.weights[i] for i in items), Fraction(0))


@dataclass(frozen=True)
class Partition:
    """Blocks in canonical order (by least element)."""

    blocks: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        bs = [frozenset(b) for b in blocks]
        if any(not b for b in bs):
            raise CandidateError("partition blocks must be nonempty")
        seen: set[int] = set()
        for b in bs:
            if seen & b:
                raise CandidateError(f"item {min(seen & b)} appears in two blocks")
            seen |= b
        if n is not None and seen != set(range(n)):
            raise CandidateError(f"blocks must cover items 0..{n - 1} exactly once")
        return cls(tuple(sorted(bs, key=min)))

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "Partition":
        blocks: dict[int, list[int]] = {}
        for i, b in enumerate(rgs):
            blocks.setdefault(b, []).append(i)
        return cls(tuple(frozenset(blocks[k]) for k in sorted(blocks)))

    def block_of(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def refines(self, coarser: "Partition") -> bool:
        where = coarser.block_of()
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)


def _check_partition(bi: BpInstance, pi: Partition) -> None:
    items = set().union(*pi.blocks) if pi.blocks else set()
    if items != set(range(bi.n)) or sum(len(b) for b in pi.blocks) != bi.n:
        raise CandidateError(f"partition must cover items 0..{bi.n - 1} exactly once")


def is_feasible_partition(bi: BpInstance, pi: Partition) -> bool:
    _check_partition(bi, pi)
    return all(bi.weight(b) <= 1 for b in pi.blocks)


def _minimal_unchecked(bi: BpInstance, pi: Partition) -> bool:
    if len(pi) < 2:
        return True
    a, b = sorted(bi.weight(x) for x in pi.blocks)[:2]
    return a + b > 1


def _minimal_all_pairs(bi: BpInstance, pi: Partition) -> bool:
    ws = [bi.weight(x) for x in pi.blocks]
    return all(a + b > 1 for a, b in combinations(ws, 2))


def is_minimal_partition(bi: BpInstance, pi: Partition) -> bool:
    """Two-lightest-blocks test; single-block partitions are minimal."""
    if not is_feasible_partition(bi, pi):
        raise PreconditionError("minimality is only defined for feasible partitions")
    return _minimal_unchecked(bi, pi)


def is_minimal_partition_all_pairs(bi: BpInstance, pi: Partition) -> bool:
    if not is_feasible_partition(bi, pi):
        raise PreconditionError("minimality is only defined for feasible partitions")
    return _minimal_all_pairs(bi, pi)


# -- enumeration ----------------------------------------------------------------


def refinements(pi_u: Partition, n: int) -> Iterator[Partition]:
    """All partitions refining pi_u, in restricted-growth-string order."""
    where = pi_u.block_of()
    rgs = [0] * n
    firsts: list[int] = []  # first item of each open block

    def rec(i: int) -> Iterator[Partition]:
        if i == n:
            yield Partition.from_rgs(rgs)
            return
        for j, f in enumerate(firsts):
            if where[f] == where[i]:
                rgs[i] = j
                yield from rec(i + 1)
        rgs[i] = len(firsts)
        firsts.append(i)
        yield from rec(i + 1)
        firsts.pop()

    yield from rec(0)


def all_partitions(n: int) -> Iterator[Partition]:
    return refinements(Partition.of([range(n)]) if n else Partition(()), n)


def ext_bp_oracle(bi: BpInstance, pi_u: Partition, cap: int | None = None) -> Verdict:
    """Exhaustive scan of the refinements of pi_u (merge test over all pairs)."""
    _check_partition(bi, pi_u)
    limit = default_bp_cap() if cap is None else cap
    if bi.n > limit:
        raise SizeLimitError(f"bp: {bi.n} items exceed cap {limit}")
    for pi in refinements(pi_u, bi.n):
        if all(bi.weight(b) <= 1 for b in pi.blocks) and _minimal_all_pairs(bi, pi):
            return Verdict(True, pi)
    return Verdict(False)


# -- the subset DP --------------------------------------------------------------


def delta_candidates(bi: BpInstance) -> list[Fraction]:
    """{1 - s : s a subset sum with 1/2 < s <= 1}, ascending."""
    sums = {Fraction(0)}
    for w in bi.weights:
        sums |= {s + w for s in sums if s + w <= 1}
    half = Fraction(1, 2)
    return sorted({1 - s for s in sums if half < s <= 1})


@dataclass
class DeltaTable:
    """Reachable (Y, L, final) states for one delta, as bitmasks.

    ``parent`` maps each state to its predecessor (None for the start).
    """

    delta: Fraction
    parent: dict[tuple[int, int, bool], tuple[int, int, bool] | None]

    def reachable(self, y: int, l: int) -> bool:
        return (y, l, False) in self.parent or (y, l, True) in self.parent

    def __len__(self) -> int:
        return len(self.parent)


def _scaled(bi: BpInstance) -> tuple[list[int], int]:
    # integer weights over a common denominator keep the inner loop exact and fast
    den = 1
    for w in bi.weights:
        den = den * w.denominator // _gcd(den, w.denominator)
    return [int(w * den) for w in bi.weights], den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def fill_delta_table(bi: BpInstance, pi_u: Partition, delta: Fraction) -> DeltaTable:
    """Forward reachability of T_delta over (packed set Y, open bin L).

    Items enter the open bin in increasing index order and only from the
    pi_u block of its current items. The open bin may be closed once it
    weighs at least 1 - delta; bins that will be closed again are opened
    in increasing order of their least item, while the final bin (flag
    set) may start anywhere. Both restrictions only fix the order in which
    a packing is produced, so no packing is lost.
    """
    n = bi.n
    w, den = _scaled(bi)
    close_at = (1 - delta) * den  # exact: may be fractional
    block = pi_u.block_of()
    full = (1 << n) - 1
    wt: dict[int, int] = {0: 0}

    def weight(mask: int) -> int:
        v = wt.get(mask)
        if v is None:
            low = mask & -mask
            v = weight(mask ^ low) + w[low.bit_length() - 1]
            wt[mask] = v
        return v

    start = (0, 0, False)
    parent: dict[tuple[int, int, bool], tuple[int, int, bool] | None] = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            y, l, fin = state
            free = full & ~y
            wl = weight(l)
            if l:
                top = l.bit_length() - 1
                lo = (l & -l).bit_length() - 1
                b = block[lo]
            for i in range(n):
                bit = 1 << i
                if not free & bit:
                    continue
                moves = []
                if not l or (i > top and block[i] == b and wl + w[i] <= den):
                    moves.append((y | bit, l | bit, fin))
                if l and not fin and wl >= close_at:
                    if i > lo:
                        moves.append((y | bit, bit, False))
                    moves.append((y | bit, bit, True))
                for s in moves:
                    if s not in parent:
                        parent[s] = state
                        nxt.append(s)
        frontier = nxt
    return DeltaTable(delta, parent)


def _rebuild(table: DeltaTable, end: tuple[int, int, bool], n: int) -> Partition:
    blocks = []
    state: tuple[int, int, bool] | None = end
    last_l = end[1]
    while state is not None:
        prev = table.parent[state]
        if prev is not None and prev[1] and state[1] == (state[0] ^ prev[0]):
            # the open bin was closed on this step
            blocks.append(prev[1])
        state = prev
    blocks.append(last_l)
    return Partition.of([[i for i in range(n) if m >> i & 1] for m in blocks], n)


def ext_bp_dp(bi: BpInstance, pi_u: Partition, stats: dict | None = None) -> Verdict:
    """Decide Ext BP by one reachability table per delta candidate."""
    _check_partition(bi, pi_u)
    n = bi.n
    if n == 0:
        return Verdict(True, Partition(()))
    if len(pi_u) == 1 and bi.weight(range(n)) <= 1:
        return Verdict(True, pi_u)
    full = (1 << n) - 1
    w, den = _scaled(bi)
    for delta in delta_candidates(bi):
        table = fill_delta_table(bi, pi_u, delta)
        if stats is not None:
            stats.setdefault("states", []).append((delta, len(table)))
        ends = sorted(s for s in table.parent if s[0] == full and s[1])
        for end in ends:
            if sum(w[i] for i in range(n) if end[1] >> i & 1) > delta * den:
                return Verdict(True, _rebuild(table, end, n))
    return Verdict(False)


# -- file format ------------------------------------------------------------------


def parse_bp(text: str | bytes) -> tuple[BpInstance, Partition]:
    if isinstance(text, bytes):
        text = text.decode()
    lines = _content_lines(text)
    if len(lines) < 2:
        raise MalformedLineError("expected 'n', a weight line, and block lines")
    no, toks = lines[0]
    if len(toks) != 1 or not toks[0].isdigit():
        raise MalformedLineError("first line must be the item count n", no)
    n = int(toks[0])
    no, toks = lines[1]
    if len(toks) != n:
        raise MalformedLineError(f"expected {n} weights, found {len(toks)}", no)
    try:
        weights = tuple(Fraction(t) for t in toks)
    except (ValueError, ZeroDivisionError):
        raise MalformedLineError("weights must be p/q or decimal numbers", no) from None
    try:
        bi = BpInstance(weights)
    except InvalidInstanceError as e:
        raise MalformedLineError(str(e), no) from None
    blocks = []
    for no, toks in lines[2:]:
        try:
            items = [int(t) for t in toks]
        except ValueError:
            raise MalformedLineError("block lines list 1-based item indices", no) from None
        for x in items:
            if not 1 <= x <= n:
                raise IndexRangeError(f"item {x} out of range 1..{n}", no)
        blocks.append([x - 1 for x in items])
    try:
        pi = Partition.of(blocks, n)
    except CandidateError as e:
        raise MalformedLineError(str(e)) from None
    return bi, pi


def serialize_bp(bi: BpInstance, pi: Partition, header: str | None = None) -> str:
    out = [f"# {header}"] if header else []
    out.append(str(bi.n))
    out.append(" ".join(str(w) for w in bi.weights))
    out.extend(" ".join(str(x + 1) for x in sorted(b)) for b in pi.blocks)
    return "\n".join(out) + "\n"


def serialize_partition(pi: Partition) -> str:
    lines = [f"P {len(pi)}"]
    lines.extend(" ".join(str(x + 1) for x in sorted(b)) for b in pi.blocks)
    return "\n".join(lines) + "\n"


# -- framework binding ------------------------------------------------------------


def _validate(bi: BpInstance, cand) -> None:
    if not isinstance(cand, Partition):
        raise CandidateError("bp: candidate must be a Partition")
    _check_partition(bi, cand)


BP = register(
    MonotoneProblem(
        problem_id=ProblemId.BP,
        direction=Direction.PARTITION_REFINING,
        feasible=lambda bi, pi, r=None: is_feasible_partition(bi, pi),
        step_extremal=lambda bi, pi, r=None: _minimal_all_pairs(bi, pi),
        leq=lambda bi, a, b: b.refines(a),
        presolutions=lambda bi: all_partitions(bi.n),
        above=lambda bi, u: refinements(u, bi.n),
        ground_size=lambda bi: bi.n,
        validate=_validate,
        value=lambda bi, pi: Fraction(len(pi)),
    )
)


def bp_instance(bi: BpInstance, pi_u: Partition) -> ExtensionInstance:
    return ExtensionInstance(BP, bi, pi_u)
