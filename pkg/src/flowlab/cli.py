"""``flowlab`` command line: generate formulas, build gadgets, run flow queries, verify, benchmark.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 size guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import dimacs, multipair
from .cnf import CnfFormula, plan_partition, random_formula
from .driver import BRUTE_FORCE_VAR_LIMIT, verify_lemma
from .flow import max_flow_value
from .gadgets import VARIANTS, GadgetGraph, GadgetTooLarge, build_gadget, expected_counts, mlec_partition

EXIT_FAIL, EXIT_USAGE, EXIT_SIZE = 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/2, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _partition_for(variant: str, formula: CnfFormula, c1: Fraction, c2: Fraction, shuffle: int | None):
    if variant == "mlec":
        return mlec_partition(formula.num_vars)
    return plan_partition(c1, c2, formula.num_vars, seed=shuffle)


def cmd_gen(args) -> int:
    if args.vars < 1 or args.clauses < 0 or args.width < 1:
        raise UsageError("--vars and --width must be positive, --clauses non-negative")
    formula = random_formula(args.vars, args.clauses, args.width, random.Random(args.seed))
    comment = f"random formula vars={args.vars} clauses={args.clauses} width={args.width} seed={args.seed}"
    _emit(dimacs.write_cnf(formula, [comment]), args.out)
    return 0


def cmd_build(args) -> int:
    formula = dimacs.read_cnf(Path(args.cnf).read_text())
    if args.variant != "mlec":
        if args.p is None:
            raise UsageError("--p is required for the uncap and cap variants")
    partition = _partition_for(args.variant, formula, args.c1, args.c2, args.shuffle)
    g = build_gadget(args.variant, formula, partition, args.p)
    _emit(dimacs.write_gadget(g), args.out)
    counts = expected_counts(args.variant, formula, partition, args.p)
    print(f"nodes {g.net.node_count} (formula {counts.nodes}) edges {g.net.edge_count} (formula {counts.edges})",
          file=sys.stderr)
    return 0


def _load_graph(path: str) -> tuple:
    text = Path(path).read_text()
    if dimacs.is_gadget_text(text):
        g = dimacs.read_gadget(text)
        return g.net, g
    return dimacs.read_network(text), None


def _node_args(values: list[str], count: int, net) -> list[int]:
    if len(values) != count:
        raise UsageError(f"expected {count} node argument(s), got {len(values)}")
    nodes = [int(v) - 1 for v in values]
    for v in nodes:
        if not 0 <= v < net.node_count:
            raise UsageError(f"node {v + 1} outside 1..{net.node_count}")
    return nodes


def cmd_query(args) -> int:
    net, gadget = _load_graph(args.graph)
    mode, rest = args.mode, args.args
    if mode != "gomoryhu" and net.undirected:
        raise UsageError(f"mode {mode!r} expects a directed network")
    if mode == "maxflow":
        s, t = _node_args(rest, 2, net)
        if s == t:
            raise UsageError("source and sink must differ")
        print(max_flow_value(net, s, t))
    elif mode == "st":
        if args.sources is None and args.sinks is None and gadget is not None:
            sources, sinks = gadget.sources, gadget.sinks
        elif args.sources is None or args.sinks is None:
            raise UsageError("st mode needs --sources and --sinks (or a gadget file)")
        else:
            sources = _node_args([str(x) for x in args.sources], len(args.sources), net)
            sinks = _node_args([str(x) for x in args.sinks], len(args.sinks), net)
        _node_args(rest, 0, net)
        sys.stdout.write(multipair.st_max_flow(net, sources, sinks).to_csv(base=1))
    elif mode == "allpairs":
        _node_args(rest, 0, net)
        sys.stdout.write(multipair.all_pairs_max_flow(net).to_csv(base=1))
    elif mode in ("global", "mlec"):
        _node_args(rest, 0, net)
        if net.node_count < 2:
            raise UsageError("need at least two nodes")
        if mode == "mlec":
            if any(c != 1 for _, _, c in net.edges):
                raise UsageError("mlec mode needs unit capacities")
            value, (u, v) = multipair.max_local_edge_connectivity(net)
        else:
            value, (u, v) = multipair.global_max_flow(net)
        sys.stdout.write(f"value,source,sink\n{value},{u + 1},{v + 1}\n")
    elif mode == "kpmf":
        if len(rest) != 1:
            raise UsageError("kpmf needs exactly one threshold argument")
        k = int(rest[0])
        if k < 0:
            raise UsageError("k must be non-negative")
        found = multipair.kpmf(net, k)
        if args.list:
            lines = ["source,sink,value"] + [f"{u + 1},{v + 1},{x}" for u, v, x in found]
            sys.stdout.write("\n".join(lines) + "\n")
        else:
            sys.stdout.write(_kpmf_matrix(net.node_count, found).to_csv(base=1, keep=lambda x: x >= 0))
    elif mode == "gomoryhu":
        if not net.undirected:
            raise UsageError("gomoryhu needs an undirected network (a 'c undirected' line)")
        _node_args(rest, 0, net)
        tree = multipair.gomory_hu_tree(net)
        lines = ["node,parent,weight"] + [f"{v + 1},{p + 1},{w}" for v, p, w in tree.edges()]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _kpmf_matrix(n: int, found) -> multipair.FlowMatrix:
    # pairs above the threshold carry a sentinel that to_csv blanks out
    cells = [[None if u == v else -1 for v in range(n)] for u in range(n)]
    for u, v, x in found:
        cells[u][v] = x
    nodes = tuple(range(n))
    return multipair.FlowMatrix(nodes, nodes, tuple(tuple(r) for r in cells))


def drop_first_source_edge(g: GadgetGraph) -> GadgetGraph:
    """Fault injection: remove the first edge leaving the first source node."""
    a = g.sources[0]
    for e, (u, _, _) in enumerate(g.net.edges):
        if u == a:
            edges = g.net.edges[:e] + g.net.edges[e + 1 :]
            return g.replace_net(g.net.with_edges(edges), g.colors[:e] + g.colors[e + 1 :])
    return g


def cmd_verify(args) -> int:
    formula = dimacs.read_cnf(Path(args.cnf).read_text())
    if formula.num_vars > BRUTE_FORCE_VAR_LIMIT:
        raise GadgetTooLarge(f"verification enumerates 2^{formula.num_vars} assignments")
    partition = _partition_for(args.variant, formula, args.c1, args.c2, args.shuffle)
    tamper = drop_first_source_edge if args.corrupt else None
    report = verify_lemma(formula, partition, args.variant, tamper=tamper, witnesses=not args.no_witnesses)
    _emit(report.to_text(), args.out)
    return 0 if report.passed else EXIT_FAIL


BENCH_FIELDS = ["variant", "n", "m", "p", "node_count", "edge_count", "wall_time", "flow_queries"]


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_FIELDS)
    for n in args.sizes:
        m = args.clauses if args.clauses is not None else n
        formula = random_formula(n, m, args.width, rng)
        if args.variant == "mlec":
            p = 0
        else:
            p = args.p if args.p is not None else m
            if not 1 <= p <= m:
                raise UsageError(f"--p {p} outside 1..{m}")
        partition = _partition_for(args.variant, formula, args.c1, args.c2, None)
        g = build_gadget(args.variant, formula, partition, p or None)
        start = time.perf_counter()
        matrix = multipair.st_max_flow(g.net, g.sources, g.sinks)
        elapsed = round((time.perf_counter() - start) * 1e6)
        queries = sum(x is not None for row in matrix.values for x in row)
        w.writerow([args.variant, n, m, p, g.net.node_count, g.net.edge_count, elapsed, queries])
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def gadget_opts(p, with_p=True):
        p.add_argument("--variant", choices=VARIANTS, default="cap", help="gadget construction (default: cap)")
        if with_p:
            p.add_argument("--p", type=int, help="clause threshold p (uncap/cap)")
        p.add_argument("--c1", type=_rational, default=Fraction(1), help="source-set exponent, as num/den (default: 1)")
        p.add_argument("--c2", type=_rational, default=Fraction(1), help="sink-set exponent, as num/den (default: 1)")

    g = sub.add_parser("gen", help="write a random DIMACS CNF formula")
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--clauses", type=int, required=True)
    g.add_argument("--width", type=int, default=3, help="literals per clause (default: 3)")
    g.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    g.add_argument("--out", help="output path (default: stdout)")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build a gadget from a CNF file and export it as annotated DIMACS")
    b.add_argument("cnf")
    gadget_opts(b)
    b.add_argument("--shuffle", type=int, metavar="SEED", help="seeded shuffle of the variable placement")
    b.add_argument("--out", help="output path (default: stdout)")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="flow queries on a DIMACS max-flow file")
    q.add_argument("graph")
    q.add_argument("mode", choices=["maxflow", "st", "allpairs", "global", "kpmf", "gomoryhu", "mlec"])
    q.add_argument("args", nargs="*", help="maxflow: S T; kpmf: K")
    q.add_argument("--sources", type=_int_list, help="st mode: comma-separated source ids")
    q.add_argument("--sinks", type=_int_list, help="st mode: comma-separated sink ids")
    q.add_argument("--list", action="store_true", help="kpmf: print source,sink,value rows instead of a matrix")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="check the gadget thresholds against exhaustive MAX-SAT")
    v.add_argument("cnf")
    gadget_opts(v, with_p=False)
    v.add_argument("--shuffle", type=int, metavar="SEED", help="seeded shuffle of the variable placement")
    v.add_argument("--corrupt", action="store_true", help="fault injection: drop one source edge per gadget")
    v.add_argument("--no-witnesses", action="store_true", help="skip witness cut/flow checks")
    v.add_argument("--out", help="report path (default: stdout)")
    v.set_defaults(func=cmd_verify)

    bn = sub.add_parser("bench", help="time ST queries over a size sweep and emit CSV records")
    gadget_opts(bn)
    bn.add_argument("--sizes", type=_int_list, required=True, help="comma-separated variable counts")
    bn.add_argument("--clauses", type=int, help="clauses per formula (default: n)")
    bn.add_argument("--width", type=int, default=3)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--out", help="CSV path (default: stdout)")
    bn.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GadgetTooLarge as exc:
        print(f"flowlab: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (UsageError, ValueError, OSError) as exc:
        print(f"flowlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
