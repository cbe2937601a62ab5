"""Terms and formulas of a first-order language, with a prefix-notation parser.

Terms are hash-consed: two terms are structurally equal iff they are the same
object. Substitution along a loop (``x0 <= add(x0, x0)``) would otherwise
produce terms whose tree size doubles on each pass; with interning they stay
DAGs and every traversal here memoizes on object identity.
"""
from __future__ import annotations

import re
import weakref
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

# Fresh bound-variable indices start here so they never collide with the
# small register indices a scheme uses.
FRESH_WATERMARK = 8192

# subterm length cap for human-facing output (reports, path listings)
DISPLAY_LIMIT = 240


class Term:
    __slots__ = ("__weakref__",)
    _table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()

    def __repr__(self) -> str:
        return format_term(self, max_len=200)


class Var(Term):
    __slots__ = ("index",)

    def __new__(cls, index: int) -> "Var":
        if not isinstance(index, int) or index < 0:
            raise ValueError(f"variable index must be a natural number, got {index!r}")
        key = ("var", index)
        obj = Term._table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.index = index
            Term._table[key] = obj
        return obj

    def __reduce__(self):
        return (Var, (self.index,))


class Const(Term):
    __slots__ = ("symbol",)

    def __new__(cls, symbol: str) -> "Const":
        key = ("const", symbol)
        obj = Term._table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.symbol = symbol
            Term._table[key] = obj
        return obj

    def __reduce__(self):
        return (Const, (self.symbol,))


class App(Term):
    __slots__ = ("symbol", "args")

    def __new__(cls, symbol: str, args: Iterable[Term]) -> "App":
        args = tuple(args)
        if not args:
            raise ValueError(f"function symbol {symbol!r} applied to no arguments")
        key = ("app", symbol, args)
        obj = Term._table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.symbol = symbol
            obj.args = args
            Term._table[key] = obj
        return obj

    def __reduce__(self):
        return (App, (self.symbol, self.args))


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term


@dataclass(frozen=True)
class Atom:
    symbol: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: int
    body: "Formula"


Formula = Union[Equal, Atom, Not, And, ForAll]


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Exists(var: int, body: Formula) -> Formula:
    return Not(ForAll(var, Not(body)))


def conjoin(formulas: Iterable[Formula]) -> Formula | None:
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return result


# --------------------------------------------------------------------------
# traversal helpers

def _postorder(root: Term) -> list[Term]:
    """Distinct subterms of ``root``, children before parents."""
    order: list[Term] = []
    seen: set[int] = set()
    stack: list[tuple[Term, bool]] = [(root, False)]
    while stack:
        t, done = stack.pop()
        if done:
            order.append(t)
            continue
        if id(t) in seen:
            continue
        seen.add(id(t))
        stack.append((t, True))
        if isinstance(t, App):
            for a in reversed(t.args):
                if id(a) not in seen:
                    stack.append((a, False))
    return order


_TERM_VARS: "weakref.WeakKeyDictionary[Term, frozenset[int]]" = weakref.WeakKeyDictionary()


def term_vars(t: Term) -> frozenset[int]:
    # cached per interned subterm: a term built from an old one costs only its new part
    got = _TERM_VARS.get(t)
    if got is not None:
        return got
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        sub, ready = stack.pop()
        if sub in _TERM_VARS:
            continue
        if isinstance(sub, Var):
            _TERM_VARS[sub] = frozenset((sub.index,))
        elif isinstance(sub, Const):
            _TERM_VARS[sub] = frozenset()
        elif not ready:
            stack.append((sub, True))
            stack.extend((a, False) for a in sub.args if a not in _TERM_VARS)
        else:
            _TERM_VARS[sub] = frozenset().union(*(_TERM_VARS[a] for a in sub.args))
    return _TERM_VARS[t]


def term_symbols(t: Term) -> set[tuple[str, int]]:
    """(symbol, arity) pairs used in ``t``; constants get arity 0."""
    out = set()
    for s in _postorder(t):
        if isinstance(s, Const):
            out.add((s.symbol, 0))
        elif isinstance(s, App):
            out.add((s.symbol, len(s.args)))
    return out


def term_size(t: Term) -> int:
    """Number of distinct subterms (DAG size)."""
    return len(_postorder(t))


def subst_term(t: Term, s: Mapping[int, Term]) -> Term:
    if not s:
        return t
    done: dict[int, Term] = {}
    for sub in _postorder(t):
        if isinstance(sub, Var):
            done[id(sub)] = s.get(sub.index, sub)
        elif isinstance(sub, Const):
            done[id(sub)] = sub
        else:
            done[id(sub)] = App(sub.symbol, [done[id(a)] for a in sub.args])
    return done[id(t)]


def free_vars(phi: Formula) -> frozenset[int]:
    match phi:
        case Equal(l, r):
            return term_vars(l) | term_vars(r)
        case Atom(_, args):
            return frozenset().union(*(term_vars(a) for a in args))
        case Not(b):
            return free_vars(b)
        case And(l, r):
            return free_vars(l) | free_vars(r)
        case ForAll(i, b):
            return free_vars(b) - {i}
    raise TypeError(f"not a formula: {phi!r}")


def all_vars(phi: Formula) -> frozenset[int]:
    """Every variable index occurring in ``phi``, bound or free."""
    match phi:
        case Equal() | Atom():
            return free_vars(phi)
        case Not(b):
            return all_vars(b)
        case And(l, r):
            return all_vars(l) | all_vars(r)
        case ForAll(i, b):
            return all_vars(b) | {i}
    raise TypeError(f"not a formula: {phi!r}")


def formula_symbols(phi: Formula) -> tuple[set[tuple[str, int]], set[tuple[str, int]]]:
    """Return (term symbols, predicate symbols) used by ``phi``."""
    terms: set[tuple[str, int]] = set()
    preds: set[tuple[str, int]] = set()

    def walk(f: Formula) -> None:
        match f:
            case Equal(l, r):
                terms.update(term_symbols(l), term_symbols(r))
            case Atom(p, args):
                preds.add((p, len(args)))
                for a in args:
                    terms.update(term_symbols(a))
            case Not(b) | ForAll(_, b):
                walk(b)
            case And(l, r):
                walk(l)
                walk(r)

    walk(phi)
    return terms, preds


def substitute(phi: Formula, s: Mapping[int, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables.

    A bound variable that would capture a variable of an inserted term is
    renamed to a fresh index at or above ``FRESH_WATERMARK``. The fresh index
    is chosen deterministically from the indices already in play.
    """
    s = {i: t for i, t in s.items() if i in free_vars(phi)}
    if not s:
        return phi
    match phi:
        case Equal(l, r):
            return Equal(subst_term(l, s), subst_term(r, s))
        case Atom(p, args):
            return Atom(p, tuple(subst_term(a, s) for a in args))
        case Not(b):
            return Not(substitute(b, s))
        case And(l, r):
            return And(substitute(l, s), substitute(r, s))
        case ForAll(i, b):
            inner = {k: t for k, t in s.items() if k != i}
            incoming = frozenset().union(*(term_vars(t) for t in inner.values()))
            if i in incoming:
                used = all_vars(b) | incoming | set(inner)
                fresh = max(FRESH_WATERMARK, max(used) + 1)
                b = substitute(b, {i: Var(fresh)})
                i = fresh
            return ForAll(i, substitute(b, inner))
    raise TypeError(f"not a formula: {phi!r}")


def is_primitive_term(t: Term) -> bool:
    if isinstance(t, (Var, Const)):
        return True
    return all(isinstance(a, Var) for a in t.args)


def is_primitive_formula(phi: Formula) -> bool:
    match phi:
        case Equal(l, r):
            return isinstance(l, Var) and isinstance(r, Var)
        case Atom(_, args):
            return all(isinstance(a, Var) for a in args)
    return False


def is_core(phi) -> bool:
    """True iff ``phi`` is built only from =, atoms, not, and, forall."""
    match phi:
        case Equal(l, r):
            return isinstance(l, Term) and isinstance(r, Term)
        case Atom(_, args):
            return all(isinstance(a, Term) for a in args)
        case Not(b) | ForAll(_, b):
            return is_core(b)
        case And(l, r):
            return is_core(l) and is_core(r)
    return False


# --------------------------------------------------------------------------
# prefix notation

class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_VAR = re.compile(r"x(\d+)$")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"cannot tokenize at {text[pos:pos + 10]!r}")
        out.append(m.group(0).strip())
        pos = m.end()
    return out


def _read_sexpr(tokens: list[str]):
    if not tokens:
        raise ParseError("unexpected end of input")
    tok = tokens.pop(0)
    if tok == "(":
        items = []
        while tokens and tokens[0] != ")":
            items.append(_read_sexpr(tokens))
        if not tokens:
            raise ParseError("missing ')'")
        tokens.pop(0)
        if not items:
            raise ParseError("empty list '()'")
        return items
    if tok == ")":
        raise ParseError("unexpected ')'")
    return tok


def parse_sexpr(text: str):
    tokens = _tokenize(text)
    expr = _read_sexpr(tokens)
    if tokens:
        raise ParseError(f"trailing input: {' '.join(tokens)}")
    return expr


def _term_of(x) -> Term:
    if isinstance(x, str):
        m = _VAR.match(x)
        if m:
            return Var(int(m.group(1)))
        return Const(x)
    head, *args = x
    if not isinstance(head, str):
        raise ParseError(f"function position must be a symbol: {head!r}")
    return App(head, [_term_of(a) for a in args])


def _bound_index(tok) -> int:
    m = _VAR.match(tok) if isinstance(tok, str) else None
    if m is None:
        raise ParseError(f"expected a variable after quantifier, got {tok!r}")
    return int(m.group(1))


def _formula_of(x) -> Formula:
    if isinstance(x, str):
        # a bare symbol is a nullary atom, which the language does not have
        raise ParseError(f"expected a formula, got symbol {x!r}")
    head, *args = x
    if head == "=":
        if len(args) != 2:
            raise ParseError("'=' takes two terms")
        return Equal(_term_of(args[0]), _term_of(args[1]))
    if head == "not":
        if len(args) != 1:
            raise ParseError("'not' takes one formula")
        return Not(_formula_of(args[0]))
    if head in ("and", "or"):
        if len(args) < 2:
            raise ParseError(f"'{head}' takes at least two formulas")
        parts = [_formula_of(a) for a in args]
        out = parts[0]
        for p in parts[1:]:
            out = And(out, p) if head == "and" else Or(out, p)
        return out
    if head == "implies":
        if len(args) != 2:
            raise ParseError("'implies' takes two formulas")
        return Implies(_formula_of(args[0]), _formula_of(args[1]))
    if head in ("forall", "exists"):
        if len(args) != 2:
            raise ParseError(f"'{head}' takes a variable and a formula")
        i = _bound_index(args[0])
        body = _formula_of(args[1])
        return ForAll(i, body) if head == "forall" else Exists(i, body)
    if not isinstance(head, str):
        raise ParseError(f"predicate position must be a symbol: {head!r}")
    if not args:
        raise ParseError(f"predicate {head!r} applied to no arguments")
    return Atom(head, tuple(_term_of(a) for a in args))


def parse_term(text: str) -> Term:
    return _term_of(parse_sexpr(text))


def parse_formula(text: str) -> Formula:
    return _formula_of(parse_sexpr(text))


def format_term(t: Term, max_len: int | None = None) -> str:
    """Prefix text of ``t``. With ``max_len``, every subterm longer than that
    is cut and marked with an ellipsis, so shared DAG terms stay printable."""
    memo: dict[int, str] = {}
    for sub in _postorder(t):
        if isinstance(sub, Var):
            text = f"x{sub.index}"
        elif isinstance(sub, Const):
            text = sub.symbol
        else:
            text = "(" + " ".join([sub.symbol] + [memo[id(a)] for a in sub.args]) + ")"
        if max_len is not None and len(text) > max_len:
            text = text[:max_len] + "…"
        memo[id(sub)] = text
    return memo[id(t)]


def format_formula(phi: Formula, max_len: int | None = None) -> str:
    def term(t):
        return format_term(t, max_len)

    def go(f):
        match f:
            case Equal(l, r):
                return f"(= {term(l)} {term(r)})"
            case Atom(p, args):
                return "(" + " ".join([p] + [term(a) for a in args]) + ")"
            case Not(b):
                return f"(not {go(b)})"
            case And(l, r):
                return f"(and {go(l)} {go(r)})"
            case ForAll(i, b):
                return f"(forall x{i} {go(b)})"
        raise TypeError(f"not a formula: {f!r}")
    return go(phi)


def distinct_elements(k: int, offset: int = 1) -> Formula:
    """Sentence saying the universe has at least ``k`` distinct elements.

    Bound variables are ``x{offset}``..``x{offset+k-1}``; keep ``offset`` at
    or above the scheme arity so they never shadow an input variable.
    """
    if k < 1:
        raise ValueError("k must be positive")
    idx = list(range(offset, offset + k))
    # each variable's inequalities sit right under its quantifier, so
    # short-circuit evaluation only walks injective partial assignments
    body = None
    for n in reversed(range(k)):
        guard = conjoin(Not(Equal(Var(idx[n]), Var(b))) for b in idx[:n])
        parts = [f for f in (guard, body) if f is not None]
        body = Exists(idx[n], conjoin(parts) if parts else Equal(Var(idx[n]), Var(idx[n])))
    return body
