"""Program schemes: directed graphs of function, predicate and terminal nodes.

Document format::

    scheme loop arity 2 signature ring.sig
    node p predicate (= x0 zero)
    node f function x0 <= (add x0 x1)
    node t terminal 1
    edge p -> t label 1
    edge p -> f label 0
    edge f -> p
    initial p
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Union

from .logic import (
    Formula, ParseError, Term, format_formula, format_term, free_vars,
    is_primitive_formula, is_primitive_term, parse_formula, parse_term, term_vars,
)
from .structures import FormatError, Signature, load_signature


@dataclass(frozen=True)
class FunctionNode:
    register: int
    term: Term

    def __str__(self):
        return f"x{self.register} <= {format_term(self.term)}"


@dataclass(frozen=True)
class PredicateNode:
    formula: Formula

    def __str__(self):
        return format_formula(self.formula)


@dataclass(frozen=True)
class TerminalNode:
    value: int

    def __str__(self):
        return str(self.value)


Node = Union[FunctionNode, PredicateNode, TerminalNode]
Label = Union[int, None]  # 1, 0, or None for the unlabeled function edge


def id_key(nid: str):
    """Natural sort key: ``n2`` before ``n10``."""
    return [(0, int(part), "") if part.isdigit() else (1, 0, part)
            for part in re.split(r"(\d+)", nid) if part]


@dataclass(frozen=True)
class Scheme:
    name: str
    n: int
    signature: Signature
    nodes: Mapping[str, Node]
    edges: Mapping[str, tuple[tuple[Label, str], ...]]
    initial: str | None
    sigref: str | None = field(default=None, compare=False)

    def node_ids(self) -> list[str]:
        return sorted(self.nodes, key=id_key)

    def successor(self, nid: str, label: Label = None) -> str:
        for lab, target in self.edges.get(nid, ()):
            if lab == label:
                return target
        raise KeyError(f"node {nid} has no edge labeled {label}")

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class SchemeClass:
    is_computation: bool
    is_tree: bool
    is_finite_tree: bool


class SchemeValidationError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


# --------------------------------------------------------------------------
# validation

def _label_order(label: Label) -> int:
    return {1: 0, 0: 1, None: 2}[label]


def validate(S: Scheme) -> Scheme:
    """Check every well-formedness rule; return ``S`` with edges in canonical order."""
    errors: list[str] = []
    if not isinstance(S.n, int) or S.n < 1:
        errors.append(f"input arity must be a positive integer, got {S.n}")
    if not S.nodes:
        errors.append("scheme has no nodes")
    for src in S.edges:
        if src not in S.nodes:
            errors.append(f"edge from unknown node {src}")
    for nid in sorted(S.nodes, key=id_key):
        node = S.nodes[nid]
        out = S.edges.get(nid, ())
        labels = [lab for lab, _ in out]
        for _, target in out:
            if target not in S.nodes:
                errors.append(f"node {nid}: edge to unknown node {target}")
        if isinstance(node, FunctionNode):
            if len(out) != 1:
                errors.append(f"node {nid}: function node has out-degree {len(out)}, expected 1")
            elif labels[0] is not None:
                errors.append(f"node {nid}: function node edge must be unlabeled")
            errors += [f"node {nid}: {e}" for e in S.signature.check_term(node.term)]
            if node.register < 0:
                errors.append(f"node {nid}: bad register x{node.register}")
        elif isinstance(node, PredicateNode):
            if len(labels) != len(set(labels)):
                errors.append(f"node {nid}: duplicate edge label")
            elif len(out) != 2:
                errors.append(f"node {nid}: predicate node has out-degree {len(out)}, expected 2")
            elif set(labels) != {0, 1}:
                errors.append(f"node {nid}: predicate edges must be labeled 1 and 0")
            errors += [f"node {nid}: {e}" for e in S.signature.check_formula(node.formula)]
        elif isinstance(node, TerminalNode):
            if out:
                errors.append(f"node {nid}: terminal node has outgoing edge (out-degree {len(out)})")
            if not isinstance(node.value, int) or node.value < 0:
                errors.append(f"node {nid}: terminal label must be a natural number")
        else:
            errors.append(f"node {nid}: unknown node type {type(node).__name__}")
    if S.initial is None:
        errors.append("no initial node")
    elif S.initial not in S.nodes:
        errors.append(f"initial node {S.initial} does not exist")
    elif not errors:
        seen = _reachable(S)
        for nid in S.node_ids():
            if nid not in seen:
                errors.append(f"node {nid}: unreachable from initial node {S.initial}")
    if errors:
        raise SchemeValidationError(errors)
    edges = {nid: tuple(sorted(S.edges.get(nid, ()), key=lambda e: _label_order(e[0])))
             for nid in S.node_ids()}
    return replace(S, edges=edges)


def _reachable(S: Scheme) -> set[str]:
    seen = {S.initial}
    stack = [S.initial]
    while stack:
        nid = stack.pop()
        for _, target in S.edges.get(nid, ()):
            if target not in seen:
                seen.add(target)
                stack.append(target)
    return seen


# --------------------------------------------------------------------------
# queries

def classify(S: Scheme) -> SchemeClass:
    computation = True
    for node in S.nodes.values():
        if isinstance(node, FunctionNode) and not is_primitive_term(node.term):
            computation = False
        elif isinstance(node, PredicateNode) and not is_primitive_formula(node.formula):
            computation = False
    indegree = {nid: 0 for nid in S.nodes}
    for out in S.edges.values():
        for _, target in out:
            indegree[target] += 1
    tree = indegree.get(S.initial) == 0 and all(
        d == 1 for nid, d in indegree.items() if nid != S.initial)
    if tree:
        # every node has one parent and the root none; with every node
        # reachable from the root this already rules out cycles
        tree = len(_reachable(S)) == len(S.nodes)
    # graphs here are always finite
    return SchemeClass(is_computation=computation, is_tree=tree, is_finite_tree=tree)


def used_registers(S: Scheme) -> frozenset[int]:
    regs = set(range(S.n))
    for node in S.nodes.values():
        if isinstance(node, FunctionNode):
            regs.add(node.register)
            regs |= term_vars(node.term)
        elif isinstance(node, PredicateNode):
            regs |= free_vars(node.formula)
    return frozenset(regs)


def terminals(S: Scheme) -> list[str]:
    return [nid for nid in S.node_ids() if isinstance(S.nodes[nid], TerminalNode)]


# --------------------------------------------------------------------------
# text format

_NODE = re.compile(r"^node\s+(\S+)\s+(function|predicate|terminal)\s+(.*)$")
_FUNC = re.compile(r"^x(\d+)\s*<=\s*(.+)$")
_EDGE = re.compile(r"^edge\s+(\S+)\s*->\s*(\S+)(?:\s+label\s+(\S+))?$")


def parse_scheme(text: str, path="<scheme>", signature: Signature | None = None,
                 base: Path | None = None) -> Scheme:
    """Parse a scheme document. Structural rules are left to :func:`validate`."""
    name = n = sigref = initial = None
    nodes: dict[str, Node] = {}
    edges: dict[str, list] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "scheme":
                if len(words) != 6 or words[2] != "arity" or words[4] != "signature":
                    raise ValueError("header is 'scheme <name> arity <n> signature <sigfile>'")
                if not words[3].isdigit():
                    raise ValueError(f"arity must be a natural number, got {words[3]!r}")
                name, n, sigref = words[1], int(words[3]), words[5]
            elif words[0] == "node":
                m = _NODE.match(line)
                if not m:
                    raise ValueError("node lines look like 'node <id> function|predicate|terminal ...'")
                nid, kind, rest = m.groups()
                if nid in nodes:
                    raise ValueError(f"duplicate node id {nid}")
                if kind == "terminal":
                    if not rest.strip().isdigit():
                        raise ValueError(f"terminal label must be a natural number, got {rest.strip()!r}")
                    nodes[nid] = TerminalNode(int(rest))
                elif kind == "predicate":
                    nodes[nid] = PredicateNode(parse_formula(rest))
                else:
                    fm = _FUNC.match(rest.strip())
                    if not fm:
                        raise ValueError("function nodes look like 'x<j> <= <term>'")
                    nodes[nid] = FunctionNode(int(fm.group(1)), parse_term(fm.group(2)))
            elif words[0] == "edge":
                m = _EDGE.match(line)
                if not m:
                    raise ValueError("edge lines look like 'edge <from> -> <to> [label 1|0]'")
                src, dst, lab = m.groups()
                if lab is not None and lab not in ("0", "1"):
                    raise ValueError(f"edge label must be 1 or 0, got {lab!r}")
                edges.setdefault(src, []).append((None if lab is None else int(lab), dst))
            elif words[0] == "initial":
                if len(words) != 2:
                    raise ValueError("initial line is 'initial <id>'")
                if initial is not None:
                    raise ValueError("more than one initial node")
                initial = words[1]
            else:
                raise ValueError(f"unrecognized line: {line!r}")
        except (ValueError, ParseError) as e:
            raise FormatError(path, lineno, str(e)) from None
    if name is None:
        raise FormatError(path, 1, "missing 'scheme' header")
    if signature is None:
        if base is None:
            raise FormatError(path, 1, f"cannot resolve signature {sigref!r}")
        signature = load_signature(base / sigref)
    return Scheme(name=name, n=n, signature=signature, nodes=nodes,
                  edges={k: tuple(v) for k, v in edges.items()}, initial=initial, sigref=sigref)


def format_scheme(S: Scheme) -> str:
    sigref = S.sigref or f"{S.signature.name}.sig"
    out = [f"scheme {S.name} arity {S.n} signature {sigref}"]
    for nid in S.node_ids():
        node = S.nodes[nid]
        kind = {FunctionNode: "function", PredicateNode: "predicate", TerminalNode: "terminal"}[type(node)]
        out.append(f"node {nid} {kind} {node}")
    for nid in S.node_ids():
        for lab, target in S.edges.get(nid, ()):
            out.append(f"edge {nid} -> {target}" + ("" if lab is None else f" label {lab}"))
    out.append(f"initial {S.initial}")
    return "\n".join(out) + "\n"


def load_scheme(path: str | Path, signature: Signature | None = None) -> Scheme:
    path = Path(path)
    S = parse_scheme(path.read_text(), path, signature=signature, base=path.parent)
    return validate(S)


def save_scheme(S: Scheme, path: str | Path) -> None:
    Path(path).write_text(format_scheme(S))


def scheme_from_text(text: str, signature: Signature) -> Scheme:
    """Parse and validate an inline document against ``signature``."""
    return validate(parse_scheme(text, signature=signature))


# --------------------------------------------------------------------------
# DOT

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(S: Scheme) -> str:
    cls = classify(S)
    out = [f"digraph {_dot_quote(S.name)} {{"]
    if cls.is_computation:
        out.append('  comment="computation";')
    for nid in S.node_ids():
        node = S.nodes[nid]
        shape = {FunctionNode: "box", PredicateNode: "diamond", TerminalNode: "doublecircle"}[type(node)]
        label = str(node) + (" *" if nid == S.initial else "")
        out.append(f"  {_dot_quote(nid)} [shape={shape}, label={_dot_quote(label)}];")
    for nid in S.node_ids():
        for lab, target in S.edges.get(nid, ()):
            attr = "" if lab is None else f" [label={_dot_quote(str(lab))}]"
            out.append(f"  {_dot_quote(nid)} -> {_dot_quote(target)}{attr};")
    out.append("}")
    return "\n".join(out) + "\n"
