"""Signatures, finite structures, Tarskian evaluation and the text formats.

Signature file::

    signature ring
    function add/2
    constant zero
    predicate unit/1

Structure file::

    structure GF3 signature ring.sig
    universe 0 1 2
    constant zero = 0
    function add/2
      (0,0) -> 0
      ...
    predicate unit/1
      (1)
      (2)
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .logic import (
    And, App, Atom, Const, Equal, ForAll, Formula, Not, Term, Var,
    formula_symbols, term_symbols,
)

Element = str
Assignment = Mapping[int, Element]


class StructureError(ValueError):
    """Malformed signature or structure, or a symbol it cannot interpret."""


class FormatError(ValueError):
    def __init__(self, path, lineno: int, msg: str):
        self.path, self.lineno, self.msg = path, lineno, msg
        super().__init__(f"{path}:{lineno}: {msg}")


@dataclass(frozen=True)
class Signature:
    name: str
    predicates: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        symbols = [p for p, _ in self.predicates] + [f for f, _ in self.functions] + list(self.constants)
        dupes = {s for s in symbols if symbols.count(s) > 1}
        if dupes:
            raise StructureError(f"signature {self.name}: duplicate symbols {sorted(dupes)}")
        if "=" in symbols:
            raise StructureError("'=' is built in and cannot be declared")
        for sym, arity in self.predicates + self.functions:
            if not isinstance(arity, int) or arity < 1:
                raise StructureError(f"symbol {sym}: arity must be a positive integer, got {arity}")

    @cached_property
    def function_arity(self) -> dict[str, int]:
        return dict(self.functions)

    @cached_property
    def predicate_arity(self) -> dict[str, int]:
        return dict(self.predicates)

    def _check_symbols(self, terms, preds=()) -> list[str]:
        errors = []
        funcs, parity = self.function_arity, self.predicate_arity
        for sym, arity in sorted(terms):
            if arity == 0:
                if sym not in self.constants:
                    errors.append(f"unknown constant {sym!r}")
            elif sym not in funcs:
                errors.append(f"unknown function symbol {sym!r}")
            elif funcs[sym] != arity:
                errors.append(f"function {sym!r} has arity {funcs[sym]}, used with {arity}")
        for sym, arity in sorted(preds):
            if sym not in parity:
                errors.append(f"unknown predicate symbol {sym!r}")
            elif parity[sym] != arity:
                errors.append(f"predicate {sym!r} has arity {parity[sym]}, used with {arity}")
        return errors

    def check_term(self, t: Term) -> list[str]:
        return self._check_symbols(term_symbols(t))

    def check_formula(self, phi: Formula) -> list[str]:
        return self._check_symbols(*formula_symbols(phi))


@dataclass(frozen=True)
class Structure:
    name: str
    signature: Signature
    universe: tuple[Element, ...]
    constants: Mapping[str, Element] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple[Element, ...], Element]] = field(default_factory=dict)
    predicates: Mapping[str, frozenset[tuple[Element, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.universe:
            raise StructureError(f"structure {self.name}: universe must be nonempty")
        if len(set(self.universe)) != len(self.universe):
            raise StructureError(f"structure {self.name}: repeated universe element")
        elems = set(self.universe)
        sig = self.signature
        if set(self.constants) != set(sig.constants):
            raise StructureError(f"structure {self.name}: constants {sorted(self.constants)} "
                                 f"do not match signature {sorted(sig.constants)}")
        for c, e in self.constants.items():
            if e not in elems:
                raise StructureError(f"structure {self.name}: constant {c} -> {e!r} outside universe")
        if set(self.functions) != {f for f, _ in sig.functions}:
            raise StructureError(f"structure {self.name}: function tables do not match signature")
        for f, arity in sig.functions:
            table = self.functions[f]
            for args in itertools.product(self.universe, repeat=arity):
                if args not in table:
                    raise StructureError(f"structure {self.name}: {f}{args} undefined")
                if table[args] not in elems:
                    raise StructureError(f"structure {self.name}: {f}{args} -> {table[args]!r} outside universe")
            if len(table) != len(self.universe) ** arity:
                raise StructureError(f"structure {self.name}: {f} has rows outside the universe")
        if set(self.predicates) != {p for p, _ in sig.predicates}:
            raise StructureError(f"structure {self.name}: predicate tables do not match signature")
        for p, arity in sig.predicates:
            for row in self.predicates[p]:
                if len(row) != arity or not set(row) <= elems:
                    raise StructureError(f"structure {self.name}: bad row {row} for {p}/{arity}")

    def __hash__(self):
        return hash((self.name, self.universe))

    def tuples(self, n: int):
        """All of ``A^n`` in lexicographic order of universe file order."""
        return itertools.product(self.universe, repeat=n)


# --------------------------------------------------------------------------
# evaluation

def eval_term(t: Term, U: Structure, v: Assignment, memo: dict[Term, Element] | None = None) -> Element:
    """Value of ``t`` under ``v``.

    ``memo`` may be shared between calls that use the same ``U`` and ``v``;
    subterms already in it are not visited again, which keeps evaluation of
    a growing chain of substituted terms linear overall.
    """
    if isinstance(t, Var) and t.index in v:
        return v[t.index]
    cache = memo if memo is not None else {}
    if t in cache:
        return cache[t]
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        sub, ready = stack.pop()
        if sub in cache:
            continue
        if isinstance(sub, Var):
            try:
                cache[sub] = v[sub.index]
            except KeyError:
                raise StructureError(f"variable x{sub.index} is unassigned") from None
        elif isinstance(sub, Const):
            try:
                cache[sub] = U.constants[sub.symbol]
            except KeyError:
                raise StructureError(f"unknown constant {sub.symbol!r} in {U.name}") from None
        elif not ready:
            stack.append((sub, True))
            stack.extend((a, False) for a in reversed(sub.args) if a not in cache)
        else:
            table = U.functions.get(sub.symbol)
            if table is None:
                raise StructureError(f"unknown function symbol {sub.symbol!r} in {U.name}")
            args = tuple(cache[a] for a in sub.args)
            try:
                cache[sub] = table[args]
            except KeyError:
                raise StructureError(f"arity mismatch: {sub.symbol} applied to {len(args)} arguments") from None
    return cache[t]


def eval_formula(phi: Formula, U: Structure, v: Assignment, memo: dict[Term, Element] | None = None) -> bool:
    """Truth of ``phi`` under ``v``; ``memo`` as for :func:`eval_term`."""
    match phi:
        case Equal(l, r):
            return eval_term(l, U, v, memo) == eval_term(r, U, v, memo)
        case Atom(p, args):
            rel = U.predicates.get(p)
            if rel is None:
                raise StructureError(f"unknown predicate symbol {p!r} in {U.name}")
            if U.signature.predicate_arity[p] != len(args):
                raise StructureError(f"arity mismatch: {p} applied to {len(args)} arguments")
            return tuple(eval_term(a, U, v, memo) for a in args) in rel
        case Not(b):
            return not eval_formula(b, U, v, memo)
        case And(l, r):
            return eval_formula(l, U, v, memo) and eval_formula(r, U, v, memo)
        case ForAll(i, b):
            # the assignment changes below a quantifier, so the memo stays out
            inner = dict(v)
            for e in U.universe:
                inner[i] = e
                if not eval_formula(b, U, inner):
                    return False
            return True
    raise TypeError(f"not a formula: {phi!r}")


def assignment(tup: Sequence[Element]) -> dict[int, Element]:
    return dict(enumerate(tup))


# --------------------------------------------------------------------------
# builders

RING = Signature(
    name="ring",
    predicates=(("unit", 1),),
    functions=(("add", 2), ("mul", 2)),
    constants=("zero", "one"),
)


def modular_ring(m: int, name: str | None = None) -> Structure:
    """Z/mZ over ``RING``; ``unit`` holds for invertible elements."""
    if m < 1:
        raise ValueError("modulus must be positive")
    elems = tuple(str(i) for i in range(m))
    add = {(str(a), str(b)): str((a + b) % m) for a in range(m) for b in range(m)}
    mul = {(str(a), str(b)): str((a * b) % m) for a in range(m) for b in range(m)}
    units = frozenset((str(a),) for a in range(m) if any((a * b) % m == 1 % m for b in range(m)))
    return Structure(
        name=name or f"Z{m}",
        signature=RING,
        universe=elems,
        constants={"zero": "0", "one": str(1 % m)},
        functions={"add": add, "mul": mul},
        predicates={"unit": units},
    )


def gf(p: int) -> Structure:
    return modular_ring(p, name=f"GF{p}")


def cyclic_family(index: int) -> Structure:
    """Member ``index`` (1-based) of the cyclic family Z_1, Z_2, ..."""
    return modular_ring(index)


FAMILIES: dict[str, Callable[[int], Structure]] = {"cyclic": cyclic_family}


# --------------------------------------------------------------------------
# text formats

_SYM_ARITY = re.compile(r"^(\S+)/(\d+)$")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield lineno, line


def parse_signature(text: str, path="<signature>") -> Signature:
    name = None
    preds, funcs, consts = [], [], []
    for lineno, line in _lines(text):
        words = line.split()
        kind = words[0]
        if kind == "signature" and len(words) == 2:
            name = words[1]
        elif kind in ("function", "predicate") and len(words) == 2:
            m = _SYM_ARITY.match(words[1])
            if not m:
                raise FormatError(path, lineno, f"expected <symbol>/<arity>, got {words[1]!r}")
            (funcs if kind == "function" else preds).append((m.group(1), int(m.group(2))))
        elif kind == "constant" and len(words) == 2:
            consts.append(words[1])
        else:
            raise FormatError(path, lineno, f"unrecognized line: {line.strip()!r}")
    if name is None:
        raise FormatError(path, 1, "missing 'signature <name>' header")
    try:
        return Signature(name, tuple(preds), tuple(funcs), tuple(consts))
    except StructureError as e:
        raise FormatError(path, 1, str(e)) from None


def format_signature(sig: Signature) -> str:
    out = [f"signature {sig.name}"]
    out += [f"function {f}/{a}" for f, a in sig.functions]
    out += [f"constant {c}" for c in sig.constants]
    out += [f"predicate {p}/{a}" for p, a in sig.predicates]
    return "\n".join(out) + "\n"


def _parse_tuple(text: str) -> tuple[str, ...]:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"expected a parenthesized tuple, got {text!r}")
    return tuple(x.strip() for x in text[1:-1].split(","))


def parse_structure(text: str, path="<structure>",
                    resolve_signature: Callable[[str], Signature] | None = None,
                    signature: Signature | None = None) -> Structure:
    name = sigref = None
    universe: tuple[str, ...] | None = None
    consts: dict[str, str] = {}
    funcs: dict[str, dict] = {}
    preds: dict[str, set] = {}
    current = None  # (kind, symbol, arity)
    for lineno, line in _lines(text):
        indented = line[0].isspace()
        words = line.split()
        try:
            if indented:
                if current is None:
                    raise ValueError("table row outside a function/predicate block")
                kind, sym, arity = current
                if kind == "function":
                    lhs, arrow, rhs = line.partition("->")
                    if not arrow:
                        raise ValueError("function rows look like '(a,b) -> c'")
                    args = _parse_tuple(lhs)
                    if len(args) != arity:
                        raise ValueError(f"{sym}/{arity} row has {len(args)} arguments")
                    if args in funcs[sym]:
                        raise ValueError(f"duplicate row {args} for {sym}")
                    funcs[sym][args] = rhs.strip()
                else:
                    row = _parse_tuple(line)
                    if len(row) != arity:
                        raise ValueError(f"{sym}/{arity} row has {len(row)} entries")
                    preds[sym].add(row)
                continue
            current = None
            if words[0] == "structure":
                if len(words) not in (2, 4) or (len(words) == 4 and words[2] != "signature"):
                    raise ValueError("header is 'structure <name> signature <sigfile>'")
                name = words[1]
                sigref = words[3] if len(words) == 4 else None
            elif words[0] == "universe":
                universe = tuple(words[1:])
            elif words[0] == "constant":
                if len(words) != 4 or words[2] != "=":
                    raise ValueError("constant lines look like 'constant <sym> = <elem>'")
                consts[words[1]] = words[3]
            elif words[0] in ("function", "predicate") and len(words) == 2:
                m = _SYM_ARITY.match(words[1])
                if not m:
                    raise ValueError(f"expected <symbol>/<arity>, got {words[1]!r}")
                current = (words[0], m.group(1), int(m.group(2)))
                if words[0] == "function":
                    funcs.setdefault(m.group(1), {})
                else:
                    preds.setdefault(m.group(1), set())
            else:
                raise ValueError(f"unrecognized line: {line.strip()!r}")
        except ValueError as e:
            raise FormatError(path, lineno, str(e)) from None
    if name is None:
        raise FormatError(path, 1, "missing 'structure' header")
    if universe is None:
        raise FormatError(path, 1, "missing 'universe' line")
    if signature is not None:
        sig = signature
    elif sigref is not None and resolve_signature is not None:
        sig = resolve_signature(sigref)
    else:
        raise FormatError(path, 1, "cannot resolve the structure's signature")
    try:
        return Structure(
            name=name, signature=sig, universe=universe, constants=consts,
            functions=funcs, predicates={p: frozenset(r) for p, r in preds.items()},
        )
    except StructureError as e:
        raise FormatError(path, 1, str(e)) from None


def format_structure(U: Structure, sigref: str | None = None) -> str:
    sigref = sigref or f"{U.signature.name}.sig"
    out = [f"structure {U.name} signature {sigref}", "universe " + " ".join(U.universe)]
    for c in U.signature.constants:
        out.append(f"constant {c} = {U.constants[c]}")
    for f, arity in U.signature.functions:
        out.append(f"function {f}/{arity}")
        for args in U.tuples(arity):
            out.append(f"  ({','.join(args)}) -> {U.functions[f][args]}")
    for p, arity in U.signature.predicates:
        out.append(f"predicate {p}/{arity}")
        for row in U.tuples(arity):
            if row in U.predicates[p]:
                out.append(f"  ({','.join(row)})")
    return "\n".join(out) + "\n"


def load_signature(path: str | Path) -> Signature:
    path = Path(path)
    return parse_signature(path.read_text(), path)


def load_structure(path: str | Path) -> Structure:
    path = Path(path)
    return parse_structure(path.read_text(), path,
                           resolve_signature=lambda ref: load_signature(path.parent / ref))


def load_class(path: str | Path) -> list[Structure]:
    """A class manifest lists structure files, one per line, in order."""
    path = Path(path)
    out = []
    for lineno, line in _lines(path.read_text()):
        ref = line.strip()
        target = path.parent / ref
        if not target.exists():
            raise FormatError(path, lineno, f"structure file {ref!r} not found")
        out.append(load_structure(target))
    if not out:
        raise FormatError(path, 1, "class manifest lists no structures")
    return out


def parse_family(text: str, path="<family>") -> tuple[str, int]:
    """``family cyclic max <bound>`` -> ("cyclic", bound)."""
    for lineno, line in _lines(text):
        words = line.split()
        if len(words) == 4 and words[0] == "family" and words[2] == "max" and words[3].isdigit():
            if words[1] not in FAMILIES:
                raise FormatError(path, lineno, f"unknown family {words[1]!r}")
            return words[1], int(words[3])
        raise FormatError(path, lineno, "expected 'family <name> max <bound>'")
    raise FormatError(path, 1, "empty family spec")
