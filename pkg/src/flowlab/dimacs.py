"""DIMACS text formats: max-flow networks, CNF formulas and annotated gadgets.

Writers emit one canonical layout, so ``write(read(text)) == text`` for any
text a writer produced.  Node and edge ids in files are 1-based.
"""

from __future__ import annotations

from fractions import Fraction

from .cnf import CnfFormula, Partition
from .gadgets import GadgetGraph, Role
from .network import FlowNetwork


class DimacsError(ValueError):
    pass


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise DimacsError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def write_network(net: FlowNetwork, comments: list[str] = (), trailer: list[str] = ()) -> str:
    """``p max`` network; an undirected network is flagged by a ``c undirected`` line."""
    lines = [f"c {c}" if c else "c" for c in comments]
    if net.undirected:
        lines.append("c undirected")
    lines.append(f"p max {net.node_count} {net.edge_count}")
    lines += [f"a {u + 1} {v + 1} {c}" for u, v, c in net.edges]
    lines += [f"c {c}" for c in trailer]
    return "\n".join(lines) + "\n"


def _parse_network(text: str) -> tuple[FlowNetwork, list[list[str]]]:
    """Network plus the token lists of every comment line (leading ``c`` stripped)."""
    header = None
    edges = []
    comments = []
    undirected = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok:
            continue
        kind = tok[0]
        if kind == "c":
            if tok[1:] == ["undirected"]:
                undirected = True
            else:
                comments.append(tok[1:])
        elif kind == "p":
            if header is not None or len(tok) != 4 or tok[1] != "max":
                raise DimacsError(f"line {lineno}: bad problem line {raw!r}")
            header = _ints(tok[2:], lineno)
        elif kind == "a":
            if header is None:
                raise DimacsError(f"line {lineno}: arc before problem line")
            if len(tok) != 4:
                raise DimacsError(f"line {lineno}: arcs need 'a <u> <v> <cap>'")
            u, v, c = _ints(tok[1:], lineno)
            edges.append((u - 1, v - 1, c))
        elif kind == "n":
            continue  # source/sink designators; queries name their own endpoints
        else:
            raise DimacsError(f"line {lineno}: unknown line type {kind!r}")
    if header is None:
        raise DimacsError("missing 'p max' line")
    n, m = header
    if len(edges) != m:
        raise DimacsError(f"problem line announces {m} arcs, found {len(edges)}")
    try:
        net = FlowNetwork(n, tuple(edges), undirected)
    except ValueError as exc:
        raise DimacsError(str(exc)) from None
    return net, comments


def read_network(text: str) -> FlowNetwork:
    return _parse_network(text)[0]


def write_cnf(formula: CnfFormula, comments: list[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_vars} {formula.m}")
    lines += [" ".join([*map(str, c), "0"]) for c in formula.clauses]
    return "\n".join(lines) + "\n"


def read_cnf(text: str) -> CnfFormula:
    """Parse ``p cnf``; clauses are 0-terminated and may span lines."""
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c" or tok[0] == "%":
            continue
        if tok[0] == "p":
            if header is not None or len(tok) != 4 or tok[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad problem line {raw!r}")
            header = _ints(tok[2:], lineno)
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before problem line")
        for lit in _ints(tok, lineno):
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' line")
    if current:
        clauses.append(tuple(current))
    n, m = header
    if len(clauses) != m:
        raise DimacsError(f"problem line announces {m} clauses, found {len(clauses)}")
    try:
        return CnfFormula(n, tuple(clauses))
    except ValueError as exc:
        raise DimacsError(str(exc)) from None


def write_gadget(g: GadgetGraph) -> str:
    """Network body plus header comments carrying the formula and partition,
    and trailing ``c role`` / ``c color`` lines."""
    a, b = g.partition.targets
    head = [f"gadget {g.variant} {g.p if g.p is not None else '-'}", f"targets {a} {b}"]
    for k, block in enumerate(g.partition.blocks, start=1):
        head.append(" ".join(["block", str(k), *map(str, block)]))
    head.append(f"cnf {g.formula.num_vars} {g.formula.m}")
    head += [" ".join(["clause", *map(str, c), "0"]) for c in g.formula.clauses]
    tail = [f"role {v + 1} {r}" for v, r in enumerate(g.roles)]
    tail += [f"color {e + 1} {col}" for e, col in enumerate(g.colors) if col is not None]
    return write_network(g.net, head, tail)


def read_gadget(text: str) -> GadgetGraph:
    net, comments = _parse_network(text)
    variant = p = None
    targets = (Fraction(0), Fraction(0))
    blocks: dict[int, tuple[int, ...]] = {}
    num_vars = None
    clauses = []
    roles: dict[int, Role] = {}
    colors: list[str | None] = [None] * net.edge_count
    for tok in comments:
        if not tok:
            continue
        key, rest = tok[0], tok[1:]
        if key == "gadget":
            variant, p = rest[0], (None if rest[1] == "-" else int(rest[1]))
        elif key == "targets":
            targets = (Fraction(rest[0]), Fraction(rest[1]))
        elif key == "block":
            blocks[int(rest[0])] = tuple(int(x) for x in rest[1:])
        elif key == "cnf":
            num_vars = int(rest[0])
        elif key == "clause":
            clauses.append(tuple(int(x) for x in rest[:-1]))
        elif key == "role":
            roles[int(rest[0]) - 1] = Role.parse(rest[1])
        elif key == "color":
            colors[int(rest[0]) - 1] = rest[1]
    if variant is None or num_vars is None:
        raise DimacsError("not a gadget file: missing 'c gadget' or 'c cnf' header")
    if sorted(roles) != list(range(net.node_count)):
        raise DimacsError("every node needs a 'c role' line")
    partition = Partition(blocks.get(1, ()), blocks.get(2, ()), blocks.get(3, ()), targets)
    formula = CnfFormula(num_vars, tuple(clauses))
    return GadgetGraph(net, tuple(roles[v] for v in range(net.node_count)), tuple(colors), variant, p, partition, formula)


def is_gadget_text(text: str) -> bool:
    return any(line.startswith("c gadget ") for line in text.splitlines())
