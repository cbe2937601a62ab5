import itertools

import pytest
from hypothesis import given, strategies as st

from progtree.logic import distinct_elements, parse_formula
from progtree.oracle import (
    ClassOracle, FamilyOracle, Sat, SatQuery, Unknown, Unsat, check_sat_class,
    check_sat_family, check_sat_structure, holds_all,
)
from progtree.structures import StructureError, cyclic_family, gf, modular_ring

from strategies import formulas

K3 = [gf(2), gf(3), modular_ring(4)]


def q(n, *texts):
    return SatQuery(n, tuple(parse_formula(t) for t in texts))


def test_tautology_over_gf2(gf2):
    assert check_sat_structure(q(1, "(= x0 x0)"), gf2) == Sat("GF2", ("0",))


def test_contradiction(gf2):
    assert check_sat_structure(q(1, "(= x0 x0)", "(not (= x0 x0))"), gf2) == Unsat()


def test_square_equals_double(gf3):
    verdict = check_sat_structure(q(1, "(= (mul x0 x0) (add x0 x0))"), gf3)
    assert verdict == Sat("GF3", ("0",))
    # x^2 = 2x mod 3 holds for x in {0, 2}
    assert [x for x in range(3) if (x * x) % 3 == (2 * x) % 3] == [0, 2]


def test_distinct_elements_over_class(gf2, gf3):
    query = SatQuery(1, (distinct_elements(3),))
    assert check_sat_class(query, [gf2, gf3]) == Sat("GF3", ("0",))
    assert check_sat_class(query, [gf2]) == Unsat()


def test_empty_query_picks_first_tuple(gf3):
    assert check_sat_class(SatQuery(2, ()), [gf3, gf(2)]) == Sat("GF3", ("0", "0"))


def test_duplicates_are_dropped():
    assert len(q(1, "(= x0 x0)", "(= x0 x0)").formulas) == 1


def test_free_variable_out_of_range():
    with pytest.raises(ValueError, match="x2"):
        q(2, "(= x0 x2)")


def test_unknown_symbol_rejected(gf2):
    with pytest.raises(StructureError):
        check_sat_structure(q(1, "(= (sub x0 x0) x0)"), gf2)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_family_finds_large_enough_member(k):
    verdict = check_sat_family(SatQuery(1, (distinct_elements(k),)), cyclic_family, 10)
    assert verdict == Sat(f"Z{k}", ("0",))


def test_family_prefix_too_short():
    verdict = check_sat_family(SatQuery(1, (distinct_elements(5),)), cyclic_family, 3)
    assert verdict == Unknown(3) and "3" in verdict.reason


def test_family_never_answers_unsat():
    assert check_sat_family(q(1, "(not (= x0 x0))"), cyclic_family, 6) == Unknown(6)


# ---------------------------------------------------------------- properties

formula_lists = st.lists(formulas, max_size=4)


@given(formula_lists)
def test_witness_really_satisfies(phis):
    verdict = check_sat_class(SatQuery(4, tuple(phis)), K3[:2])
    if isinstance(verdict, Sat):
        U = {u.name: u for u in K3}[verdict.structure]
        assert holds_all(phis, U, verdict.witness)
    else:
        for U in K3[:2]:
            assert not any(holds_all(phis, U, a) for a in U.tuples(4))


@given(formula_lists, formulas)
def test_adding_formulas_only_removes_models(phis, extra):
    before = check_sat_class(SatQuery(4, tuple(phis)), [gf(2)])
    after = check_sat_class(SatQuery(4, tuple(phis) + (extra,)), [gf(2)])
    if isinstance(before, Unsat):
        assert isinstance(after, Unsat)


@given(formula_lists)
def test_prefix_coherence(phis):
    verdicts = [check_sat_class(SatQuery(4, tuple(phis[:i])), [gf(2)]) for i in range(len(phis) + 1)]
    # once unsatisfiable, every longer prefix stays so
    seen_unsat = False
    for v in verdicts:
        seen_unsat = seen_unsat or isinstance(v, Unsat)
        assert isinstance(v, Unsat) == seen_unsat


@given(formula_lists)
def test_incremental_refinement_matches_batch(phis):
    K = [gf(2), gf(3)]
    oracle = ClassOracle(K, 4)
    state = oracle.root()
    for i, phi in enumerate(phis):
        state = oracle.refine(state, phi)
        assert oracle.verdict(state) == check_sat_class(SatQuery(4, tuple(phis[:i + 1])), K)


def test_class_oracle_witness_sets(gf3):
    oracle = ClassOracle([gf3], 2)
    state = oracle.refine(oracle.root(), parse_formula("(= (add x0 x1) zero)"))
    expected = tuple((str(a), str(b)) for a, b in itertools.product(range(3), repeat=2) if (a + b) % 3 == 0)
    assert state == (expected,)


def test_family_oracle_reports_unknown():
    oracle = FamilyOracle(cyclic_family, 4, 1)
    state = oracle.refine(oracle.root(), distinct_elements(5))
    assert oracle.verdict(state) == Unknown(4)
    state = oracle.refine(oracle.root(), distinct_elements(4))
    assert oracle.verdict(state) == Sat("Z4", ("0",))
    assert not oracle.exact and ClassOracle([gf(2)], 1).exact


def test_empty_class_rejected():
    with pytest.raises(ValueError):
        ClassOracle([], 1)
