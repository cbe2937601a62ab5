"""Concrete execution of a program (S, U) as a register machine."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .scheme import FunctionNode, Label, PredicateNode, Scheme, TerminalNode, used_registers
from .structures import Element, Structure, eval_formula, eval_term

Step = tuple[str, Label]  # (node id, label of the edge taken; None at terminals)


@dataclass(frozen=True)
class ExecState:
    node: str
    registers: tuple[tuple[int, Element], ...]  # sorted by register index

    @property
    def regs(self) -> dict[int, Element]:
        return dict(self.registers)


@dataclass(frozen=True)
class Output:
    value: int
    trace: tuple[Step, ...]


@dataclass(frozen=True)
class Diverges:
    prefix: tuple[Step, ...]
    lasso: tuple[Step, ...]

    @property
    def trace(self) -> tuple[Step, ...]:
        return self.prefix + self.lasso


Outcome = Union[Output, Diverges]


@dataclass(frozen=True)
class Total:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotTotal:
    witness: tuple[Element, ...]
    outcome: Diverges
    structure: str | None = None

    def __bool__(self):
        return False


def initial_state(S: Scheme, a: Sequence[Element]) -> ExecState:
    if len(a) != S.n:
        raise ValueError(f"scheme {S.name} takes {S.n} inputs, got {len(a)}")
    regs = tuple((i, a[i] if i < S.n else a[S.n - 1]) for i in sorted(used_registers(S)))
    return ExecState(S.initial, regs)


def step(S: Scheme, U: Structure, st: ExecState) -> tuple[ExecState, Label] | Output:
    """One transition. Returns (next state, label of the edge taken), or Output at a terminal."""
    node = S.nodes[st.node]
    if isinstance(node, TerminalNode):
        return Output(node.value, ((st.node, None),))
    regs = st.regs
    if isinstance(node, FunctionNode):
        regs[node.register] = eval_term(node.term, U, regs)
        return ExecState(S.successor(st.node), tuple(sorted(regs.items()))), None
    label = 1 if eval_formula(node.formula, U, regs) else 0
    return ExecState(S.successor(st.node, label), st.registers), label


def divergence_bound(S: Scheme, U: Structure) -> int:
    return len(S.nodes) * len(U.universe) ** len(used_registers(S)) + 1


def states(S: Scheme, U: Structure, a: Sequence[Element]) -> Iterator[tuple[ExecState, Label]]:
    """The (state, edge label taken) sequence of the run; unbounded if it diverges."""
    st = initial_state(S, a)
    while True:
        res = step(S, U, st)
        if isinstance(res, Output):
            yield st, None
            return
        nxt, label = res
        yield st, label
        st = nxt


def run(S: Scheme, U: Structure, a: Sequence[Element], budget: int | None = None) -> Outcome:
    """Run to a terminal or to the first repeated state.

    ``budget`` only guards against misuse; on a finite structure a repeat is
    certain within :func:`divergence_bound` steps.
    """
    seen: dict[ExecState, int] = {}
    trace: list[Step] = []
    for st, label in states(S, U, a):
        if st in seen:
            k = seen[st]
            return Diverges(tuple(trace[:k]), tuple(trace[k:]))
        node = S.nodes[st.node]
        if isinstance(node, TerminalNode):
            trace.append((st.node, None))
            return Output(node.value, tuple(trace))
        seen[st] = len(trace)
        trace.append((st.node, label))
        if budget is not None and len(trace) > budget:
            raise RuntimeError(f"run exceeded budget of {budget} steps")
    raise AssertionError("unreachable")


def check_totality(S: Scheme, U: Structure) -> Total | NotTotal:
    for a in U.tuples(S.n):
        out = run(S, U, a)
        if isinstance(out, Diverges):
            return NotTotal(a, out, U.name)
    return Total()


def check_totality_class(S: Scheme, K: Sequence[Structure]) -> Total | NotTotal:
    for U in K:
        verdict = check_totality(S, U)
        if not verdict:
            return verdict
    return Total()


def implemented_function(S: Scheme, U: Structure) -> dict[tuple[Element, ...], int | None]:
    """The graph of the implemented function; ``None`` marks undefined inputs."""
    table = {}
    for a in U.tuples(S.n):
        out = run(S, U, a)
        table[a] = out.value if isinstance(out, Output) else None
    return table


def format_table(table: dict[tuple[Element, ...], int | None]) -> str:
    rows = [f"{','.join(a)}\t{'⊥' if v is None else v}" for a, v in table.items()]
    return "\n".join(rows) + "\n"


def format_outcome(S: Scheme, out: Outcome) -> str:
    lines = []
    if isinstance(out, Output):
        lines.append(f"output {out.value}")
        steps = out.trace
    else:
        lines.append(f"diverges (lasso of {len(out.lasso)} steps after {len(out.prefix)})")
        steps = out.trace
    for i, (nid, label) in enumerate(steps):
        mark = ""
        if isinstance(out, Diverges) and i == len(out.prefix):
            mark = "  <- lasso start"
        edge = "" if label is None else f" --{label}-->"
        lines.append(f"  {i:3d} {nid}: {S.nodes[nid]}{edge}{mark}")
    return "\n".join(lines) + "\n"
