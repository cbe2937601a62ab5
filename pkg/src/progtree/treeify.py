"""Unrolling a scheme into a tree and cutting it down to a finite tree-scheme.

The tree keeps exactly the branches whose path condition is satisfiable in
the target class. A predicate node left with a single branch gets a fresh
terminal labeled 0 on the missing edge. On a total scheme over a compact
class the result is finite and strongly equivalent to the input; the
expansion is breadth-first so that one infinite branch cannot starve the
finite ones.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .logic import DISPLAY_LIMIT, Formula, format_formula, free_vars
from .oracle import ClassOracle, Sat, SatQuery, Unknown, Unsat, check_sat_class
from .scheme import (
    Label, Node, PredicateNode, Scheme, TerminalNode, validate,
)
from .structures import Signature, Structure
from .symbolic import PathRecord, SymbolicState, complete_paths, expand

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_DEPTH = 10_000
COMPLETION_VALUE = 0


@dataclass
class UnrollNode:
    scheme_node: str
    sym: SymbolicState
    pi_prefix: tuple[Formula, ...]
    depth: int
    status: str = "open"  # open | expanded | pruned | completed-terminal
    parent: "UnrollNode | None" = field(default=None, repr=False)
    edge: Label = None  # label of the edge from the parent


def unroll(S: Scheme) -> Iterator[UnrollNode]:
    """Breadth-first stream of the (possibly infinite) unrolled tree of ``S``."""
    queue = deque([UnrollNode(S.initial, SymbolicState.initial(S), (), 0)])
    while queue:
        node = queue.popleft()
        children = expand(S, node.scheme_node, node.sym)
        node.status = "expanded" if children else "completed-terminal"
        yield node
        for label, target, sym, phi in children:
            pi = node.pi_prefix + ((phi,) if phi is not None else ())
            queue.append(UnrollNode(target, sym, pi, node.depth + 1, parent=node, edge=label))


@dataclass
class TreeifyReport:
    result: Scheme | None
    nodes_explored: int = 0
    leaves: int = 0
    max_depth: int = 0
    unresolved: int = 0
    completions: int = 0
    completion_ids: list[str] = field(default_factory=list)
    pruned: int = 0
    failure: str | None = None
    deepest_pi: tuple[Formula, ...] = ()

    @property
    def ok(self) -> bool:
        return self.result is not None

    def format(self) -> str:
        lines = [
            f"status: {'success' if self.ok else 'failure'}",
            f"nodes_explored: {self.nodes_explored}",
            f"leaves: {self.leaves}",
            f"completion_terminals: {self.completions}",
            f"pruned_branches: {self.pruned}",
            f"max_depth: {self.max_depth}",
            f"unresolved: {self.unresolved}",
        ]
        if self.failure:
            lines.append(f"failure: {self.failure}")
            for phi in self.deepest_pi:
                lines.append(f"deepest_pi: {format_formula(phi, DISPLAY_LIMIT)}")
        return "\n".join(lines) + "\n"


def treeify(S: Scheme, oracle: ClassOracle, max_nodes: int = DEFAULT_MAX_NODES,
            max_depth: int = DEFAULT_MAX_DEPTH, name: str | None = None) -> TreeifyReport:
    nodes: dict[str, Node] = {}
    edges: dict[str, list[tuple[Label, str]]] = {}
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"t{counter - 1}"

    report = TreeifyReport(result=None)
    root = fresh()
    queue = deque([(root, S.initial, SymbolicState.initial(S), (), 0, oracle.root())])
    while queue:
        tid, nid, sym, pi, depth, wit = queue.popleft()
        if depth > max_depth or report.nodes_explored >= max_nodes:
            limit = "max_depth" if depth > max_depth else "max_nodes"
            report.failure = (f"{limit} exceeded: scheme not total relative to the class, "
                              f"class not compact, or limits too small")
            report.deepest_pi = _deepest(queue, pi, depth)
            return report
        report.nodes_explored += 1
        report.max_depth = max(report.max_depth, depth)
        node = S.nodes[nid]
        nodes[tid] = node
        if isinstance(node, TerminalNode):
            report.leaves += 1
            continue
        kept: list[Label] = []
        for label, target, child_sym, phi in expand(S, nid, sym):
            child_pi, child_wit = pi, wit
            if phi is not None:
                child_pi = pi + (phi,)
                child_wit = oracle.refine(wit, phi)
                verdict = oracle.verdict(child_wit)
                if isinstance(verdict, Unsat):
                    report.pruned += 1
                    continue
                if isinstance(verdict, Unknown):
                    report.unresolved += 1
                    report.deepest_pi = child_pi
                    kept.append(label)
                    continue
            cid = fresh()
            edges.setdefault(tid, []).append((label, cid))
            kept.append(label)
            queue.append((cid, target, child_sym, child_pi, depth + 1, child_wit))
        if isinstance(node, PredicateNode):
            if not kept:
                raise AssertionError(f"both branches of {nid} unsatisfiable under a satisfiable prefix")
            for missing in {0, 1} - set(kept):
                cid = fresh()
                nodes[cid] = TerminalNode(COMPLETION_VALUE)
                edges.setdefault(tid, []).append((missing, cid))
                report.completions += 1
                report.completion_ids.append(cid)
                report.leaves += 1
    if report.unresolved:
        report.failure = (f"{report.unresolved} branch(es) unresolved by the family oracle; "
                          f"raise the bound or use a finite class")
        return report
    tree = Scheme(name=name or f"{S.name}_tree", n=S.n, signature=S.signature,
                  nodes=nodes, edges={k: tuple(v) for k, v in edges.items()},
                  initial=root, sigref=S.sigref)
    report.result = validate(tree)
    report.deepest_pi = ()
    return report


def _deepest(queue, pi, depth):
    best_pi, best_depth = pi, depth
    for _, _, _, qpi, qdepth, _ in queue:
        if qdepth > best_depth:
            best_pi, best_depth = qpi, qdepth
    return best_pi


def satisfiable_complete_paths(S: Scheme, K: Sequence[Structure], max_len: int) -> list[PathRecord]:
    """Brute force: every complete path of at most ``max_len`` nodes whose whole
    path condition is satisfiable in ``K``, each queried from scratch."""
    return [p for p in complete_paths(S, max_len)
            if p.finite and isinstance(check_sat_class(SatQuery(S.n, p.pi), K), Sat)]


# --------------------------------------------------------------------------
# counterexample chain

def counterexample_scheme(formulas: Callable[[int], Formula] | Sequence[Formula], prefix_len: int,
                          n: int, signature: Signature, name: str = "chain") -> Scheme:
    """Finite prefix of a predicate chain over ``phi_1, phi_2, ...``.

    ``phi_i`` branches on 1 to ``phi_{i+1}`` and on 0 to a terminal 0; the last
    predicate's 1-edge goes to a terminal 0 marking the truncation.
    """
    if prefix_len < 1:
        raise ValueError("prefix_len must be at least 1")
    get = formulas if callable(formulas) else (lambda k: formulas[k - 1])
    nodes: dict[str, Node] = {}
    edges: dict[str, tuple] = {}
    for k in range(1, prefix_len + 1):
        phi = get(k)
        bad = sorted(i for i in free_vars(phi) if i >= n)
        if bad:
            raise ValueError(f"formula {k} has free variables {bad} outside x0..x{n - 1}")
        nodes[f"phi{k}"] = PredicateNode(phi)
        nodes[f"out{k}"] = TerminalNode(0)
        nxt = f"phi{k + 1}" if k < prefix_len else "end"
        edges[f"phi{k}"] = ((1, nxt), (0, f"out{k}"))
    nodes["end"] = TerminalNode(0)
    return validate(Scheme(name=name, n=n, signature=signature, nodes=nodes,
                           edges=edges, initial="phi1"))
