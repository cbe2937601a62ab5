"""Satisfiability of finite formula sets over finite structures, by enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from .logic import Formula, format_formula, free_vars
from .structures import Element, Structure, StructureError, assignment, eval_formula


@dataclass(frozen=True)
class SatQuery:
    n: int
    formulas: tuple[Formula, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("arity must be positive")
        deduped = tuple(dict.fromkeys(self.formulas))
        object.__setattr__(self, "formulas", deduped)
        for phi in deduped:
            extra = sorted(i for i in free_vars(phi) if i >= self.n)
            if extra:
                raise ValueError(f"{format_formula(phi)} has free variables "
                                 f"{['x%d' % i for i in extra]} outside x0..x{self.n - 1}")


@dataclass(frozen=True)
class Sat:
    structure: str
    witness: tuple[Element, ...]


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Unknown:
    bound: int

    @property
    def reason(self) -> str:
        return f"no member among the first {self.bound} of the family satisfies the query"


SatVerdict = Union[Sat, Unsat, Unknown]


def _check_symbols(q: SatQuery, U: Structure) -> None:
    for phi in q.formulas:
        errors = U.signature.check_formula(phi)
        if errors:
            raise StructureError(f"{U.name}: {'; '.join(errors)}")


def holds_all(formulas: Iterable[Formula], U: Structure, a: Sequence[Element]) -> bool:
    v = assignment(a)
    return all(eval_formula(phi, U, v) for phi in formulas)


@lru_cache(maxsize=4096)
def sentence_holds(phi: Formula, U: Structure) -> bool:
    """Truth of a formula without free variables; independent of the input tuple."""
    return eval_formula(phi, U, {})


def check_sat_structure(q: SatQuery, U: Structure) -> Sat | Unsat:
    _check_symbols(q, U)
    closed = [phi for phi in q.formulas if not free_vars(phi)]
    if not all(sentence_holds(phi, U) for phi in closed):
        return Unsat()
    rest = [phi for phi in q.formulas if free_vars(phi)]
    for a in U.tuples(q.n):
        if holds_all(rest, U, a):
            return Sat(U.name, a)
    return Unsat()


def check_sat_class(q: SatQuery, K: Sequence[Structure]) -> Sat | Unsat:
    for U in K:
        verdict = check_sat_structure(q, U)
        if isinstance(verdict, Sat):
            return verdict
    return Unsat()


def check_sat_family(q: SatQuery, gen: Callable[[int], Structure], bound: int) -> Sat | Unknown:
    """Sound for Sat only: members past ``bound`` are never examined."""
    for i in range(1, bound + 1):
        try:
            U = gen(i)
        except Exception as e:
            raise RuntimeError(f"family generator failed at index {i}: {e}") from e
        verdict = check_sat_structure(q, U)
        if isinstance(verdict, Sat):
            return verdict
    return Unknown(bound)


# --------------------------------------------------------------------------
# incremental use by the treeifier

WitnessSet = tuple[tuple[Element, ...], ...]


class ClassOracle:
    """Tracks, per structure, the input tuples satisfying a growing formula list.

    A branch's state is refined by each new formula instead of re-scanning
    ``A^n`` against the whole list.
    """

    exact = True

    def __init__(self, K: Sequence[Structure], n: int):
        if not K:
            raise ValueError("class of structures must be nonempty")
        self.K = list(K)
        self.n = n
        # term values per (structure index, tuple), shared by all branches
        self._memo: dict[tuple[int, tuple[Element, ...]], dict] = {}

    def root(self) -> tuple[WitnessSet, ...]:
        return tuple(tuple(U.tuples(self.n)) for U in self.K)

    def refine(self, state: tuple[WitnessSet, ...], phi: Formula) -> tuple[WitnessSet, ...]:
        out = []
        for k, (U, survivors) in enumerate(zip(self.K, state)):
            if survivors and not free_vars(phi):
                survivors = survivors if sentence_holds(phi, U) else ()
            elif survivors:
                survivors = tuple(a for a in survivors if eval_formula(
                    phi, U, assignment(a), self._memo.setdefault((k, a), {})))
            out.append(survivors)
        return tuple(out)

    def verdict(self, state: tuple[WitnessSet, ...]) -> SatVerdict:
        for U, survivors in zip(self.K, state):
            if survivors:
                return Sat(U.name, survivors[0])
        return Unsat()

    def describe(self) -> str:
        return "class " + ",".join(U.name for U in self.K)


class FamilyOracle(ClassOracle):
    """Finite prefix of an infinite family; an empty witness set means Unknown."""

    exact = False

    def __init__(self, gen: Callable[[int], Structure], bound: int, n: int):
        if bound < 1:
            raise ValueError("family bound must be positive")
        super().__init__([gen(i) for i in range(1, bound + 1)], n)
        self.bound = bound

    def verdict(self, state):
        v = super().verdict(state)
        return Unknown(self.bound) if isinstance(v, Unsat) else v

    def describe(self) -> str:
        return f"family prefix of {self.bound} members"
