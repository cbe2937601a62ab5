"""Symbolic semantics: register terms along a path and the path condition.

Register ``j`` at step ``i`` holds a term over the input variables
``x0..x{n-1}``. Predicate nodes leave the terms alone and contribute the
node's formula (or its negation) with those terms substituted in.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Hashable, Iterator, Sequence

from .executor import ExecState, Output, initial_state, run, step
from .logic import DISPLAY_LIMIT, Formula, Not, Term, Var, format_formula, free_vars, subst_term, substitute, term_vars
from .scheme import FunctionNode, Label, Node, PredicateNode, Scheme, TerminalNode, used_registers
from .structures import Element, Structure, assignment, eval_formula


@dataclass(frozen=True)
class SymbolicState:
    n: int
    terms: tuple[tuple[int, Term], ...]

    @classmethod
    def initial(cls, S: Scheme) -> "SymbolicState":
        return cls(S.n, tuple((i, Var(min(i, S.n - 1))) for i in sorted(used_registers(S))))

    def get(self, i: int) -> Term:
        for j, t in self.terms:
            if j == i:
                return t
        return Var(min(i, self.n - 1))

    def as_dict(self) -> dict[int, Term]:
        return dict(self.terms)

    def set(self, i: int, t: Term) -> "SymbolicState":
        d = self.as_dict()
        d[i] = t
        return SymbolicState(self.n, tuple(sorted(d.items())))


def symbolic_step(sym: SymbolicState, node: Node, edge_label: Label) -> tuple[SymbolicState, Formula | None]:
    if isinstance(node, FunctionNode):
        if edge_label is not None:
            raise ValueError("function node edges are unlabeled")
        s = {i: sym.get(i) for i in term_vars(node.term)}
        return sym.set(node.register, subst_term(node.term, s)), None
    if isinstance(node, PredicateNode):
        if edge_label not in (0, 1):
            raise ValueError(f"predicate edge label must be 1 or 0, got {edge_label!r}")
        phi = substitute(node.formula, {i: sym.get(i) for i in free_vars(node.formula)})
        return sym, (phi if edge_label == 1 else Not(phi))
    raise ValueError("terminal nodes have no outgoing step")


def expand(S: Scheme, nid: str, sym: SymbolicState):
    """Children of a path ending at ``nid``: (edge label, child id, child state, emitted formula)."""
    node = S.nodes[nid]
    out = []
    for label, target in S.edges.get(nid, ()):
        nxt, phi = symbolic_step(sym, node, label)
        out.append((label, target, nxt, phi))
    return out


# --------------------------------------------------------------------------
# path records

PathItem = tuple[Node, Label]


@dataclass(frozen=True)
class PathRecord:
    steps: tuple[tuple[str, Node, Label], ...]
    pi: tuple[Formula, ...]
    terminal_value: int | None
    # index where the repeating part starts, for eventually periodic paths
    lasso_start: int | None = None

    @property
    def finite(self) -> bool:
        return self.terminal_value is not None

    def items(self) -> list[PathItem]:
        return [(node, label) for _, node, label in self.steps]


def path_from_trace(S: Scheme, trace: Sequence[tuple[str, Label]],
                    lasso_start: int | None = None) -> PathRecord:
    sym = SymbolicState.initial(S)
    steps, pi = [], []
    value = None
    for nid, label in trace:
        node = S.nodes[nid]
        steps.append((nid, node, label))
        if isinstance(node, TerminalNode):
            value = node.value
            break
        sym, phi = symbolic_step(sym, node, label)
        if phi is not None:
            pi.append(phi)
    return PathRecord(tuple(steps), tuple(pi), value, lasso_start)


def path_of_run(S: Scheme, U: Structure, a: Sequence[Element]) -> PathRecord:
    out = run(S, U, a)
    if isinstance(out, Output):
        return path_from_trace(S, out.trace)
    return path_from_trace(S, out.trace, lasso_start=len(out.prefix))


def replay(S: Scheme, U: Structure, a: Sequence[Element]) -> Iterator[tuple[ExecState, SymbolicState]]:
    """Concrete and symbolic states side by side, one pair per node visited."""
    out = run(S, U, a)
    st = initial_state(S, a)
    sym = SymbolicState.initial(S)
    for nid, label in out.trace:
        assert st.node == nid
        yield st, sym
        if isinstance(S.nodes[nid], TerminalNode):
            return
        st, _ = step(S, U, st)
        sym, _ = symbolic_step(sym, S.nodes[nid], label)


# --------------------------------------------------------------------------
# isomorphism

def _primitive_root(cycle: Sequence[Hashable]) -> list:
    k = len(cycle)
    for p in range(1, k + 1):
        if k % p == 0 and all(cycle[i] == cycle[i % p] for i in range(k)):
            return list(cycle[:p])
    return list(cycle)


def normalize_lasso(prefix: Sequence[Hashable], cycle: Sequence[Hashable]) -> tuple[tuple, tuple]:
    """Shortest (prefix, cycle) describing the same infinite sequence prefix·cycle^ω."""
    if not cycle:
        raise ValueError("lasso cycle must be nonempty")
    prefix = list(prefix)
    cycle = _primitive_root(cycle)
    while prefix and prefix[-1] == cycle[-1]:
        prefix.pop()
        cycle = [cycle[-1]] + cycle[:-1]
    return tuple(prefix), tuple(cycle)


def _lasso_of(p: PathRecord) -> tuple[tuple, tuple]:
    items = p.items()
    return normalize_lasso(items[:p.lasso_start], items[p.lasso_start:])


def paths_isomorphic(p: PathRecord, q: PathRecord) -> bool:
    if p.finite != q.finite:
        return False
    if p.finite:
        return p.items() == q.items()
    if p.lasso_start is None or q.lasso_start is None:
        raise ValueError("infinite path records need a lasso form")
    return _lasso_of(p) == _lasso_of(q)


def _item_at(p: PathRecord, i: int):
    items = p.items()
    if i < len(items):
        return items[i]
    if p.finite:
        return None
    start = p.lasso_start
    period = len(items) - start
    return items[start + (i - start) % period]


def first_mismatch(p: PathRecord, q: PathRecord) -> int | None:
    """Index of the first position where the label sequences differ, or None."""
    if p.finite and q.finite:
        horizon = max(len(p.steps), len(q.steps))
    else:
        def span(r):
            return (len(r.steps), 1) if r.finite else (r.lasso_start, len(r.steps) - r.lasso_start)
        (a0, a1), (b0, b1) = span(p), span(q)
        horizon = max(len(p.steps), len(q.steps)) + lcm(a1, b1) + max(a0, b0)
    for i in range(horizon):
        if _item_at(p, i) != _item_at(q, i):
            return i
    return None


# --------------------------------------------------------------------------
# path enumeration

def complete_paths(S: Scheme, max_len: int) -> Iterator[PathRecord]:
    """Every path from the initial node of at most ``max_len`` nodes that ends at a
    terminal, plus every path cut off at exactly ``max_len`` nodes (those carry
    ``terminal_value=None`` and no lasso)."""
    stack = [((), (), S.initial, SymbolicState.initial(S))]
    while stack:
        steps, pi, nid, sym = stack.pop()
        node = S.nodes[nid]
        if isinstance(node, TerminalNode):
            yield PathRecord(steps + ((nid, node, None),), pi, node.value)
            continue
        if len(steps) + 1 >= max_len:
            yield PathRecord(steps + ((nid, node, None),), pi, None)
            continue
        for label, target, nxt, phi in reversed(expand(S, nid, sym)):
            stack.append((steps + ((nid, node, label),),
                          pi + ((phi,) if phi is not None else ()), target, nxt))


def satisfiable_paths(S: Scheme, U: Structure, a: Sequence[Element], max_len: int) -> list[PathRecord]:
    """All paths as in :func:`complete_paths` whose path condition holds on ``a``.

    Branches are cut as soon as one emitted formula is false, which loses
    nothing: a path is satisfiable only if every prefix is.
    """
    v = assignment(a)
    found = []
    stack = [((), (), S.initial, SymbolicState.initial(S))]
    while stack:
        steps, pi, nid, sym = stack.pop()
        node = S.nodes[nid]
        if isinstance(node, TerminalNode):
            found.append(PathRecord(steps + ((nid, node, None),), pi, node.value))
            continue
        if len(steps) + 1 >= max_len:
            found.append(PathRecord(steps + ((nid, node, None),), pi, None))
            continue
        for label, target, nxt, phi in expand(S, nid, sym):
            if phi is not None and not eval_formula(phi, U, v):
                continue
            stack.append((steps + ((nid, node, label),),
                          pi + ((phi,) if phi is not None else ()), target, nxt))
    return found


def format_path(p: PathRecord) -> str:
    lines = []
    for i, (nid, node, label) in enumerate(p.steps):
        edge = "" if label is None else f" --{label}-->"
        mark = "  <- lasso start" if p.lasso_start == i else ""
        lines.append(f"  {i:3d} {nid}: {node}{edge}{mark}")
    lines.append("path condition:")
    for i, phi in enumerate(p.pi):
        lines.append(f"  [{i}] {format_formula(phi, DISPLAY_LIMIT)}")
    if p.finite:
        lines.append(f"terminal value: {p.terminal_value}")
    return "\n".join(lines) + "\n"
