"""Strong equivalence of schemes relative to a finite class of finite structures."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .executor import implemented_function
from .scheme import Scheme
from .structures import Element, Structure
from .symbolic import PathRecord, first_mismatch, format_path, path_of_run, paths_isomorphic


@dataclass(frozen=True)
class Equivalent:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotEquivalent:
    structure: str
    tuple: tuple[Element, ...]
    position: int
    path_a: PathRecord
    path_b: PathRecord

    def __bool__(self):
        return False


@dataclass(frozen=True)
class ArityMismatch:
    n_a: int
    n_b: int

    def __bool__(self):
        return False


EquivVerdict = Union[Equivalent, NotEquivalent, ArityMismatch]


def strongly_equivalent(S1: Scheme, S2: Scheme, K: Sequence[Structure]) -> EquivVerdict:
    if S1.n != S2.n:
        return ArityMismatch(S1.n, S2.n)
    for U in K:
        for a in U.tuples(S1.n):
            p, q = path_of_run(S1, U, a), path_of_run(S2, U, a)
            if not paths_isomorphic(p, q):
                pos = first_mismatch(p, q)
                assert pos is not None
                return NotEquivalent(U.name, a, pos, p, q)
    return Equivalent()


@dataclass(frozen=True)
class FunctionMismatch:
    structure: str
    tuple: tuple[Element, ...]
    value_a: int | None
    value_b: int | None


def same_function(S1: Scheme, S2: Scheme, K: Sequence[Structure]) -> tuple[bool, FunctionMismatch | None]:
    """Compare implemented functions, undefinedness included."""
    if S1.n != S2.n:
        raise ValueError(f"arity mismatch: {S1.n} vs {S2.n}")
    for U in K:
        f, g = implemented_function(S1, U), implemented_function(S2, U)
        for a in f:
            if f[a] != g[a]:
                return False, FunctionMismatch(U.name, a, f[a], g[a])
    return True, None


def format_verdict(v: EquivVerdict) -> str:
    if isinstance(v, Equivalent):
        return "equivalent\n"
    if isinstance(v, ArityMismatch):
        return f"not equivalent: arity mismatch ({v.n_a} vs {v.n_b})\n"
    return (f"not equivalent: structure {v.structure}, input {','.join(v.tuple)}, "
            f"first mismatch at step {v.position}\n"
            f"path in a:\n{format_path(v.path_a)}path in b:\n{format_path(v.path_b)}")
