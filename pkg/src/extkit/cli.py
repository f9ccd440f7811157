"""Command-line front end: ``extkit {solve,verify,reduce,gen,bench}``.

Exit codes: 0 YES (or success), 1 NO, 2 usage or input error, 3 size cap.
The first stdout line of ``solve`` is always YES or NO.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

from .binpacking import (
    BpInstance,
    Partition,
    ext_bp_dp,
    ext_bp_oracle,
    is_feasible_partition,
    is_minimal_partition_all_pairs,
    parse_bp,
    serialize_bp,
    serialize_partition,
)
from .errors import ExtkitError, SizeLimitError
from .framework import (
    ExtensionInstance,
    ProblemId,
    Verdict,
    decide_extension_dual_fpt,
    decide_extension_oracle,
    get_problem,
    is_extremal,
)
from .fpt_solvers import (
    enumerate_minimal_vertex_covers,
    ext_em_dual,
    ext_r_dcps_dual,
    ext_r_ec_standard,
)
from .graphs import Graph, parse_graph, parse_presolution, serialize_graph, serialize_presolution
from .problems import (
    HittingSetInstance,
    extremality_with_privacy,
    kind_of,
    parse_hitting_set,
)
from .reductions import (
    Cnf,
    ThreePartitionInstance,
    Target,
    ext_tautology_demo,
    gen_3b2sat,
    parse_dimacs,
    reduce_3b2sat,
    reduce_3partition_to_ext_bp,
    reduce_extvc_to_exteds,
    reduce_hs_to_ext_ds,
    serialize_dimacs,
)
from .treewidth import (
    ext_ds_treewidth,
    ext_ec_treewidth,
    ext_eds_treewidth,
    ext_em_treewidth,
    ext_vc_treewidth,
    parse_td,
    to_nice,
)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ExtkitError):
    pass


# -- solver dispatch -------------------------------------------------------------


def _vc_fpt(g: Graph, U, r, ntd) -> Verdict:
    for cover in enumerate_minimal_vertex_covers(g):
        if U <= cover:
            return Verdict(True, cover)
    return Verdict(False)


def _complement(fn: Callable) -> Callable:
    # Ext IS (G, U) is Ext VC (G, V minus U)
    def run(g: Graph, U, r, ntd) -> Verdict:
        v = fn(g, frozenset(range(g.n)) - U, r, ntd)
        return Verdict(True, frozenset(range(g.n)) - v.witness) if v.answer else v

    return run


def _tw(fn: Callable) -> Callable:
    return lambda g, U, r, ntd: fn(g, U, ntd)


def _generic(decider: Callable) -> Callable:
    def run(payload, U, r, ntd, problem: ProblemId) -> Verdict:
        return decider(ExtensionInstance(get_problem(problem), payload, U, r))

    return run


_SPECIAL: dict[tuple[ProblemId, str], Callable] = {
    (ProblemId.VC, "fpt"): _vc_fpt,
    (ProblemId.VC, "treewidth"): _tw(ext_vc_treewidth),
    (ProblemId.IS, "fpt"): _complement(_vc_fpt),
    (ProblemId.IS, "treewidth"): _complement(_tw(ext_vc_treewidth)),
    (ProblemId.EC, "fpt"): lambda g, U, r, ntd: ext_r_ec_standard(g, U, 1),
    (ProblemId.EC, "treewidth"): _tw(ext_ec_treewidth),
    (ProblemId.EM, "fpt"): lambda g, U, r, ntd: ext_em_dual(g, frozenset(range(g.m)) - U),
    (ProblemId.EM, "treewidth"): _tw(ext_em_treewidth),
    (ProblemId.DS, "treewidth"): _tw(ext_ds_treewidth),
    (ProblemId.EDS, "treewidth"): _tw(ext_eds_treewidth),
    (ProblemId.R_DCPS, "fpt"): lambda g, U, r, ntd: ext_r_dcps_dual(g, frozenset(range(g.m)) - U, r),
    (ProblemId.R_EC, "fpt"): lambda g, U, r, ntd: ext_r_ec_standard(g, U, r),
    (ProblemId.BP, "dp"): lambda bi, U, r, ntd: ext_bp_dp(bi, U),
}

_DUAL = {ProblemId.VC, ProblemId.EC, ProblemId.DS, ProblemId.EDS, ProblemId.HS, ProblemId.BP, ProblemId.R_EC}

ALGORITHMS: dict[ProblemId, tuple[str, ...]] = {
    pid: ("oracle",)
    + (("dual-fpt",) if pid in _DUAL else ())
    + tuple(a for (p, a) in _SPECIAL if p is pid)
    for pid in ProblemId
}

GRAPH_PROBLEMS = frozenset(
    {ProblemId.VC, ProblemId.IS, ProblemId.EC, ProblemId.EM, ProblemId.DS, ProblemId.EDS,
     ProblemId.R_DCPS, ProblemId.R_EC}
)


def solve(problem: ProblemId | str, algo: str, payload: Any, presolution: Any,
          r: int | None = None, ntd=None) -> Verdict:
    """Run one named algorithm on one extension instance."""
    pid = ProblemId(problem)
    if algo not in ALGORITHMS[pid]:
        raise UsageError(
            f"algorithm {algo!r} does not apply to {pid.value}; choose from {', '.join(ALGORITHMS[pid])}"
        )
    if algo == "oracle":
        if pid is ProblemId.SAT_TAU:
            return ext_tautology_demo(payload)
        if pid is ProblemId.BP:
            return ext_bp_oracle(payload, presolution)
        return _generic(decide_extension_oracle)(payload, presolution, r, ntd, pid)
    if algo == "dual-fpt":
        return _generic(decide_extension_dual_fpt)(payload, presolution, r, ntd, pid)
    return _SPECIAL[(pid, algo)](payload, frozenset(presolution) if pid is not ProblemId.BP else presolution, r, ntd)


# -- file handling -----------------------------------------------------------------


def _read(path: str | None, what: str) -> str:
    if path is None:
        raise UsageError(f"--{what} is required here")
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> str:
    """Write to a file; for ``-`` hand the text back for stdout instead."""
    if path is None or path == "-":
        return text
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None
    return ""


def _load(args) -> tuple[ProblemId, Any, Any]:
    """Payload and pre-solution for ``--problem`` from the given files."""
    pid = ProblemId(args.problem)
    if pid in GRAPH_PROBLEMS:
        g = parse_graph(_read(args.graph, "graph"))
        if args.presolution is None:
            return pid, g, frozenset()
        pre = parse_presolution(_read(args.presolution, "presolution"), g)
        want = kind_of(pid)
        if pre.kind != want:
            raise UsageError(f"{pid.value} needs a '{want}' pre-solution, got '{pre.kind}'")
        return pid, g, pre.elements
    if pid is ProblemId.HS:
        h = parse_hitting_set(_read(args.instance, "instance"))
        if args.presolution is None:
            return pid, h, frozenset()
        pre = parse_presolution(_read(args.presolution, "presolution"), Graph(h.ground_size))
        return pid, h, pre.elements
    if pid is ProblemId.BP:
        bi, pi = parse_bp(_read(args.instance, "instance"))
        return pid, bi, pi
    f = parse_dimacs(_read(args.instance, "instance"))
    return pid, f, frozenset(range(f.n))


def _witness_text(pid: ProblemId, payload: Any, w: Any) -> str:
    if pid is ProblemId.BP:
        return serialize_partition(w)
    if pid in GRAPH_PROBLEMS:
        return serialize_presolution(kind_of(pid), w, payload)
    n = payload.ground_size if pid is ProblemId.HS else payload.n
    return serialize_presolution("V", w, Graph(n))


def _witness_json(pid: ProblemId, payload: Any, w: Any) -> Any:
    if w is None:
        return None
    if pid is ProblemId.BP:
        return [sorted(x + 1 for x in b) for b in w.blocks]
    if pid in GRAPH_PROBLEMS and kind_of(pid) == "E":
        return [[payload.edges[k][0] + 1, payload.edges[k][1] + 1] for k in sorted(w)]
    return sorted(x + 1 for x in w)


# -- commands -------------------------------------------------------------------------


def cmd_solve(args, out: dict) -> tuple[int, str]:
    pid, payload, pre = _load(args)
    ntd = None
    if args.td is not None:
        if args.algo != "treewidth":
            raise UsageError("--td only applies to --algo treewidth")
        ntd = to_nice(parse_td(_read(args.td, "td"), payload), payload)
    v = solve(pid, args.algo, payload, pre, args.r, ntd)
    out.update(answer="YES" if v.answer else "NO", witness=_witness_json(pid, payload, v.witness))
    text = "YES\n" + _witness_text(pid, payload, v.witness) if v.answer else "NO\n"
    return (EXIT_YES if v.answer else EXIT_NO), text


def cmd_verify(args, out: dict) -> tuple[int, str]:
    pid, payload, cand = _load(args)
    if pid is ProblemId.BP:
        feas = is_feasible_partition(payload, cand)
        ext = feas and is_minimal_partition_all_pairs(payload, cand)
        out.update(feasible=feas, extremal=ext)
        lines = [f"feasible {'yes' if feas else 'no'}", f"extremal {'yes' if ext else 'no'}"]
        return (EXIT_YES if ext else EXIT_NO), "\n".join(lines) + "\n"
    problem = get_problem(pid)
    feas = problem.feasible(payload, cand, args.r)
    lines = [f"feasible {'yes' if feas else 'no'}"]
    out["feasible"] = feas
    if not feas:
        out["extremal"] = False
        return EXIT_NO, "\n".join(lines + ["extremal no"]) + "\n"
    if pid in (ProblemId.R_DCPS, ProblemId.R_EC, ProblemId.SAT_TAU):
        ext = is_extremal(problem, payload, cand, args.r)
        out["extremal"] = ext
        lines.append(f"extremal {'yes' if ext else 'no'}")
        return (EXIT_YES if ext else EXIT_NO), "\n".join(lines) + "\n"
    ext, report = extremality_with_privacy(pid, payload, cand)
    out["extremal"] = ext
    lines.append(f"extremal {'yes' if ext else 'no'}")
    label = "blocker" if pid in (ProblemId.IS, ProblemId.EM) else "private"
    edge_elems = pid in GRAPH_PROBLEMS and kind_of(pid) == "E"

    def show(x: int) -> str:
        if edge_elems:
            u, v = payload.edges[x]
            return f"{u + 1}-{v + 1}"
        return str(x + 1)

    def show_w(x: int) -> str:
        # witnesses are edge indices for VC, EDS, EM and HS hyperedge indices
        if pid in (ProblemId.VC, ProblemId.EDS, ProblemId.EM):
            u, v = payload.edges[x]
            return f"{u + 1}-{v + 1}"
        return str(x + 1)

    rep = {}
    for x, w in sorted(report.witnesses.items()):
        rep[show(x)] = None if w is None else show_w(w)
        lines.append(f"{label} {show(x)} {'none' if w is None else show_w(w)}")
    if report.addable is not None:
        lines.append(f"addable {show(report.addable)}")
    out.update(privacy=rep, addable=None if report.addable is None else show(report.addable))
    return (EXIT_YES if ext else EXIT_NO), "\n".join(lines) + "\n"


def _pre_out(args) -> str | None:
    if args.pre_out:
        return args.pre_out
    if args.out and args.out != "-":
        return args.out + ".pre"
    return None


def cmd_reduce(args, out: dict) -> tuple[int, str]:
    src, tgt = args.source, args.target
    text = _read(args.input, "in")
    if src == "3b2sat":
        if tgt == "ext-bp":
            raise UsageError("3b2sat reduces to ext-ec, ext-em, ext-ds or ext-eds")
        inst = reduce_3b2sat(parse_dimacs(text), Target(tgt))
    elif src == "3partition":
        if tgt != "ext-bp":
            raise UsageError("3partition reduces to ext-bp only")
        inst = reduce_3partition_to_ext_bp(parse_3partition(text))
    elif src == "hs":
        if tgt != "ext-ds":
            raise UsageError("hs reduces to ext-ds only")
        h = parse_hitting_set(text)
        U = frozenset()
        if args.presolution:
            U = parse_presolution(_read(args.presolution, "presolution"), Graph(h.ground_size)).elements
        inst = reduce_hs_to_ext_ds(h, U)
    else:
        if tgt != "ext-eds":
            raise UsageError("vc reduces to ext-eds only")
        g = parse_graph(text)
        U = frozenset()
        if args.presolution:
            U = parse_presolution(_read(args.presolution, "presolution"), g).elements
        inst = reduce_extvc_to_exteds(g, U)
    if tgt == "ext-bp":
        shown = _write(args.out, serialize_bp(inst.payload, inst.presolution, header=tgt))
        out.update(target=tgt, items=inst.payload.n)
        return EXIT_YES, shown
    g = inst.payload
    shown = _write(args.out, serialize_graph(g, header=tgt))
    kind = "E" if tgt in ("ext-ec", "ext-em", "ext-eds") else "V"
    pre_text = serialize_presolution(kind, inst.presolution, g)
    pre_path = _pre_out(args)
    # without a file for it, the pre-solution follows the graph on stdout
    shown += _write(pre_path or "-", pre_text)
    out.update(target=tgt, vertices=g.n, edges=g.m, presolution_size=len(inst.presolution),
               presolution_file=pre_path)
    return EXIT_YES, shown


def parse_3partition(text: str) -> ThreePartitionInstance:
    """First line ``b``; the remaining tokens are the values s_1..s_3m."""
    toks = text.split()
    try:
        nums = [int(t) for t in toks]
    except ValueError:
        raise UsageError("3-partition file must contain integers only") from None
    if not nums:
        raise UsageError("3-partition file is empty")
    return ThreePartitionInstance(tuple(nums[1:]), nums[0])


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, tuple(edges))


def random_bp(n: int, rng: random.Random) -> tuple[BpInstance, Partition]:
    from fractions import Fraction

    den = rng.choice([3, 4, 5, 6, 10, 12])
    bi = BpInstance(tuple(Fraction(rng.randint(1, den - 1), den) for _ in range(n)))
    k = rng.randint(1, max(1, n))
    lab = [rng.randrange(k) for _ in range(n)]
    return bi, Partition.of([[i for i in range(n) if lab[i] == j] for j in sorted(set(lab))], n)


def cmd_gen(args, out: dict) -> tuple[int, str]:
    rng = random.Random(args.seed)
    if args.kind == "3b2sat":
        f = gen_3b2sat(args.n, args.seed)
        shown = _write(args.out, serialize_dimacs(f))
        out.update(kind="3b2sat", variables=f.n, clauses=f.m)
    elif args.kind == "graph":
        g = random_graph(args.n, args.p, rng)
        shown = _write(args.out, serialize_graph(g))
        if args.pre_out:
            kind = args.pre_kind
            pool = range(g.n) if kind == "V" else range(g.m)
            shown += _write(args.pre_out, serialize_presolution(kind, [x for x in pool if rng.random() < 0.3], g))
        out.update(kind="graph", vertices=g.n, edges=g.m)
    else:
        bi, pi = random_bp(args.n, rng)
        shown = _write(args.out, serialize_bp(bi, pi))
        out.update(kind="bp", items=bi.n)
    return EXIT_YES, shown


def _bench_one(job: tuple) -> dict:
    name, pid, algo, payload, pre, r = job
    t0 = time.perf_counter()
    try:
        v = solve(pid, algo, payload, pre, r)
        answer = "YES" if v.answer else "NO"
    except SizeLimitError:
        answer = "CAP"
    ms = (time.perf_counter() - t0) * 1000
    return {"instance": name, "algo": algo, "answer": answer, "wall_time_ms": f"{ms:.3f}"}


def cmd_bench(args, out: dict) -> tuple[int, str]:
    pid = ProblemId(args.problem)
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ALGORITHMS[pid]:
            raise UsageError(f"algorithm {a!r} does not apply to {pid.value}")
    rng = random.Random(args.seed)
    instances = []
    if args.graph or args.instance:
        args_list = args.graph or args.instance
        pres = args.presolution_list or [None] * len(args_list)
        if len(pres) != len(args_list):
            raise UsageError("give one --presolution per input file")
        for path, pre in zip(args_list, pres):
            ns = argparse.Namespace(problem=pid.value, graph=path, instance=path, presolution=pre)
            _, payload, u = _load(ns)
            instances.append((Path(path).name, payload, u))
    else:
        for i in range(args.count):
            if pid is ProblemId.BP:
                payload, u = random_bp(args.n, rng)
            elif pid in GRAPH_PROBLEMS:
                payload = random_graph(args.n, args.p, rng)
                pool = range(payload.n) if kind_of(pid) == "V" else range(payload.m)
                u = frozenset(x for x in pool if rng.random() < 0.3)
                if pid in (ProblemId.IS, ProblemId.EM, ProblemId.R_DCPS):
                    u = frozenset(pool) - u
            else:
                raise UsageError(f"bench cannot generate {pid.value} instances; pass --instance")
            instances.append((f"{pid.value}-n{args.n}-s{args.seed}-{i}", payload, u))
    jobs = [(name, pid, a, payload, u, args.r) for name, payload, u in instances for a in algos]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["instance", "algo", "answer", "wall_time_ms"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    out["rows"] = rows
    return EXIT_YES, buf.getvalue()


# -- argument parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="extkit", description="Extension problems for monotone optimisation problems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    problems = [x.value for x in ProblemId]

    def common(sp, presolution=True):
        sp.add_argument("--problem", required=True, choices=problems)
        sp.add_argument("--graph")
        sp.add_argument("--instance")
        if presolution:
            sp.add_argument("--presolution")
        sp.add_argument("--r", type=int)
        sp.add_argument("--json", action="store_true")

    s = sub.add_parser("solve", help="decide an extension instance")
    common(s)
    s.add_argument("--algo", default="oracle", choices=["oracle", "dual-fpt", "fpt", "treewidth", "dp"])
    s.add_argument("--td", help="tree decomposition file (PACE td format)")

    v = sub.add_parser("verify", help="check feasibility and extremality of a candidate")
    common(v)

    r = sub.add_parser("reduce", help="emit a reduced extension instance")
    r.add_argument("--from", dest="source", required=True, choices=["3b2sat", "3partition", "hs", "vc"])
    r.add_argument("--to", dest="target", required=True,
                   choices=["ext-ec", "ext-em", "ext-ds", "ext-eds", "ext-bp"])
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--out", default="-")
    r.add_argument("--presolution", help="source pre-solution (hs, vc)")
    r.add_argument("--pre-out", help="where to write the target pre-solution (default OUT.pre)")
    r.add_argument("--json", action="store_true")

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--kind", required=True, choices=["3b2sat", "graph", "bp"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.add_argument("--pre-out")
    g.add_argument("--pre-kind", choices=["V", "E"], default="V")
    g.add_argument("--json", action="store_true")

    b = sub.add_parser("bench", help="time algorithms; CSV on stdout")
    b.add_argument("--problem", required=True, choices=problems)
    b.add_argument("--algos", default="oracle")
    b.add_argument("--graph", nargs="*")
    b.add_argument("--instance", nargs="*")
    b.add_argument("--presolution", dest="presolution_list", nargs="*")
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--n", type=int, default=8)
    b.add_argument("--p", type=float, default=0.4)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--r", type=int)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--json", action="store_true")
    return p


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Returns (exit status, stdout text, stderr text) without touching sys.exit."""
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    out: dict = {}
    try:
        args = build_parser().parse_args(argv)
        out["command"] = args.command
        code, text = COMMANDS[args.command](args, out)
        err = ""
    except SizeLimitError as e:
        code, text, err = EXIT_CAP, "", f"extkit: size cap exceeded: {e}\n"
        out["error"] = str(e)
    except (ExtkitError, ValueError) as e:
        code, text, err = EXIT_USAGE, "", f"extkit: error: {e}\n"
        out["error"] = str(e)
    if want_json:
        out["exit"] = code
        return code, json.dumps(out, sort_keys=True) + "\n", err
    return code, text, err


def main(argv: Sequence[str] | None = None) -> int:
    code, text, err = run(argv)
    sys.stdout.write(text)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
