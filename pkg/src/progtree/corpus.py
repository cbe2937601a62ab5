"""Hand-written example schemes and a seeded random scheme generator."""
from __future__ import annotations

import random

from .logic import (
    And, App, Atom, Const, Equal, ForAll, Formula, Not, Term, Var, distinct_elements,
)
from .scheme import (
    FunctionNode, Node, PredicateNode, Scheme, TerminalNode, scheme_from_text, validate,
)
from .structures import RING, Signature, gf, modular_ring

LOOP = """\
scheme loop arity 2 signature ring.sig
node p predicate (= x0 zero)
node t terminal 1
node f function x0 <= (add x0 x1)
edge p -> t label 1
edge p -> f label 0
edge f -> p
initial p
"""

GUARDED = """\
scheme guarded arity 2 signature ring.sig
node g predicate (= x1 zero)
node z terminal 0
node p predicate (= x0 zero)
node t terminal 1
node f function x0 <= (add x0 x1)
edge g -> z label 1
edge g -> p label 0
edge p -> t label 1
edge p -> f label 0
edge f -> p
initial g
"""

SELFLOOP = """\
scheme selfloop arity 1 signature ring.sig
node p predicate (= x0 x0)
node t terminal 0
edge p -> p label 1
edge p -> t label 0
initial p
"""

CONTRADICTION = """\
scheme contradiction arity 1 signature ring.sig
node p predicate (not (= x0 x0))
node a terminal 1
node b terminal 2
edge p -> a label 1
edge p -> b label 0
initial p
"""

TERMINAL_ONLY = """\
scheme const arity 1 signature ring.sig
node t terminal 0
initial t
"""

DIAMOND = """\
scheme diamond arity 1 signature ring.sig
node p predicate (unit x0)
node f1 function x0 <= (add x0 one)
node f2 function x0 <= (mul x0 x0)
node t terminal 3
edge p -> f1 label 1
edge p -> f2 label 0
edge f1 -> t
edge f2 -> t
initial p
"""

# x0 doubles each pass: symbolic terms stay small only with sharing
DOUBLING = """\
scheme doubling arity 2 signature ring.sig
node p predicate (= x0 x1)
node t terminal 1
node f function x0 <= (add x0 x0)
edge p -> t label 1
edge p -> f label 0
edge f -> p
initial p
"""

# counts down x1 by repeated addition of x0 until hitting zero, then
# reports whether a quantified property holds of the final register
QUANTIFIED = """\
scheme quantified arity 2 signature ring.sig
node g predicate (forall x1 (not (= (mul x0 x1) one)))
node z terminal 2
node p predicate (= x1 zero)
node q predicate (exists x2 (= (mul x2 x2) x0))
node a terminal 1
node b terminal 0
node f function x1 <= (add x1 one)
edge g -> z label 1
edge g -> p label 0
edge p -> q label 1
edge p -> f label 0
edge f -> p
edge q -> a label 1
edge q -> b label 0
initial g
"""

HAND_WRITTEN = {
    "loop": LOOP,
    "guarded": GUARDED,
    "selfloop": SELFLOOP,
    "contradiction": CONTRADICTION,
    "const": TERMINAL_ONLY,
    "diamond": DIAMOND,
    "doubling": DOUBLING,
    "quantified": QUANTIFIED,
}


def hand_written(name: str, signature: Signature = RING) -> Scheme:
    return scheme_from_text(HAND_WRITTEN[name], signature)


def standard_structures():
    """GF(2), GF(3) and Z4 over the ring signature."""
    return [gf(2), gf(3), modular_ring(4)]


def distinct_family(n: int = 1):
    """phi_k = "at least k distinct elements", bound variables above the inputs."""
    return lambda k: distinct_elements(k, offset=n)


# --------------------------------------------------------------------------
# random schemes

_FUNCS = [("add", 2), ("mul", 2)]
_CONSTS = ["zero", "one"]


def _random_term(rng: random.Random, regs: list[int], primitive: bool, depth: int = 0) -> Term:
    roll = rng.random()
    if roll < 0.35 or depth >= 2:
        return Var(rng.choice(regs)) if rng.random() < 0.75 else Const(rng.choice(_CONSTS))
    f, arity = rng.choice(_FUNCS)
    if primitive:
        return App(f, [Var(rng.choice(regs)) for _ in range(arity)])
    return App(f, [_random_term(rng, regs, False, depth + 1) for _ in range(arity)])


def _random_formula(rng: random.Random, regs: list[int], primitive: bool, depth: int = 0) -> Formula:
    if primitive:
        if rng.random() < 0.7:
            return Equal(Var(rng.choice(regs)), Var(rng.choice(regs)))
        return Atom("unit", (Var(rng.choice(regs)),))
    roll = rng.random()
    if roll < 0.4 or depth >= 2:
        if rng.random() < 0.7:
            return Equal(_random_term(rng, regs, False, 1), _random_term(rng, regs, False, 1))
        return Atom("unit", (_random_term(rng, regs, False, 1),))
    if roll < 0.6:
        return Not(_random_formula(rng, regs, False, depth + 1))
    if roll < 0.8:
        return And(_random_formula(rng, regs, False, depth + 1),
                   _random_formula(rng, regs, False, depth + 1))
    bound = rng.choice(regs + [max(regs) + 1])
    return ForAll(bound, _random_formula(rng, regs + [bound], False, depth + 1))


def random_scheme(rng: random.Random, n: int | None = None, max_nodes: int = 8,
                  primitive: bool | None = None, name: str = "rand") -> Scheme:
    """A random valid scheme over the ring signature with at most ``max_nodes`` nodes.

    Registers range over ``x0..x{n}`` (one scratch register). Nodes not
    reachable from the initial node are dropped.
    """
    n = n if n is not None else rng.choice([1, 2])
    primitive = rng.random() < 0.5 if primitive is None else primitive
    size = rng.randint(1, max_nodes)
    regs = list(range(n + 1))
    ids = [f"n{i}" for i in range(size)]
    nodes: dict[str, Node] = {}
    kinds = [rng.choices(["function", "predicate", "terminal"], [3, 4, 2])[0] for _ in ids]
    if "terminal" not in kinds:
        kinds[rng.randrange(size)] = "terminal"
    for nid, kind in zip(ids, kinds):
        if kind == "terminal":
            nodes[nid] = TerminalNode(rng.randint(0, 3))
        elif kind == "predicate":
            nodes[nid] = PredicateNode(_random_formula(rng, regs[:n] if primitive else regs, primitive))
        else:
            nodes[nid] = FunctionNode(rng.choice(regs), _random_term(rng, regs, primitive))
    edges = {}
    for i, nid in enumerate(ids):
        node = nodes[nid]
        # bias edges forward so that a fair share of schemes terminate
        def pick():
            if rng.random() < 0.7 and i + 1 < size:
                return rng.choice(ids[i + 1:])
            return rng.choice(ids)
        if isinstance(node, FunctionNode):
            edges[nid] = ((None, pick()),)
        elif isinstance(node, PredicateNode):
            edges[nid] = ((1, pick()), (0, pick()))
    initial = ids[0]
    seen, stack = {initial}, [initial]
    while stack:
        for _, t in edges.get(stack.pop(), ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    nodes = {k: v for k, v in nodes.items() if k in seen}
    edges = {k: v for k, v in edges.items() if k in seen}
    return validate(Scheme(name=name, n=n, signature=RING, nodes=nodes, edges=edges, initial=initial))


def random_corpus(seed: int, count: int, **kw) -> list[Scheme]:
    rng = random.Random(seed)
    return [random_scheme(rng, name=f"rand{seed}_{i}", **kw) for i in range(count)]
