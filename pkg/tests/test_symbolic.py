import itertools

import pytest
from hypothesis import given

from progtree.corpus import hand_written
from progtree.executor import divergence_bound, run
from progtree.logic import Not, Var, format_formula, parse_formula, parse_term
from progtree.scheme import FunctionNode, PredicateNode, TerminalNode, scheme_from_text
from progtree.structures import RING, assignment, eval_formula, eval_term, gf, modular_ring
from progtree.symbolic import (
    PathRecord, SymbolicState, complete_paths, first_mismatch, normalize_lasso, path_of_run,
    paths_isomorphic, replay, satisfiable_paths, symbolic_step,
)

from strategies import schemes


def _state(n, regs):
    return SymbolicState(n, tuple((i, Var(min(i, n - 1))) for i in regs))


def test_function_step_substitutes():
    sym = _state(2, [0, 1])
    node = FunctionNode(0, parse_term("(add x0 x1)"))
    sym, phi = symbolic_step(sym, node, None)
    assert phi is None and sym.get(0) is parse_term("(add x0 x1)")
    sym2, phi = symbolic_step(sym, PredicateNode(parse_formula("(= x0 x1)")), 0)
    assert sym2 == sym
    assert phi == Not(parse_formula("(= (add x0 x1) x1)"))


def test_defaults_to_last_input():
    sym = _state(1, [0, 2])
    sym, _ = symbolic_step(sym, FunctionNode(2, Var(0)), None)
    assert sym.get(2) is Var(0)
    assert _state(1, [0]).get(7) is Var(0)
    assert _state(3, [0]).get(1) is Var(1)


def test_terminal_has_no_step():
    with pytest.raises(ValueError):
        symbolic_step(_state(1, [0]), TerminalNode(0), None)


def test_guarded_path_condition(gf3):
    p = path_of_run(hand_written("guarded"), gf3, ("1", "1"))
    assert [format_formula(f) for f in p.pi] == [
        "(not (= x1 zero))",
        "(not (= x0 zero))",
        "(not (= (add x0 x1) zero))",
        "(= (add (add x0 x1) x1) zero)",
    ]
    assert p.terminal_value == 1
    assert all(eval_formula(f, gf3, {0: "1", 1: "1"}) for f in p.pi)


def test_terminal_only_path(gf3):
    p = path_of_run(hand_written("const"), gf3, ("0",))
    assert p.pi == () and p.terminal_value == 0


def test_diverging_path_record(gf3):
    p = path_of_run(hand_written("loop"), gf3, ("1", "0"))
    assert not p.finite and p.lasso_start == 0 and len(p.steps) == 2
    assert all(eval_formula(f, gf3, {0: "1", 1: "0"}) for f in p.pi)


CORPUS_STRUCTURES = [gf(2), gf(3), modular_ring(4)]


@given(schemes)
def test_pi_soundness(S):
    for U in CORPUS_STRUCTURES:
        for a in U.tuples(S.n):
            p = path_of_run(S, U, a)
            assert all(eval_formula(f, U, assignment(a)) for f in p.pi)
            assert len(p.pi) == sum(isinstance(node, PredicateNode) for _, node, _ in p.steps
                                    if not isinstance(node, TerminalNode))


@given(schemes)
def test_concrete_symbolic_bisimulation(S):
    for U in CORPUS_STRUCTURES:
        for a in U.tuples(S.n):
            v = assignment(a)
            for st, sym in replay(S, U, a):
                for j, value in st.registers:
                    assert eval_term(sym.get(j), U, v) == value


@given(schemes)
def test_predicate_step_leaves_state(S):
    sym = SymbolicState.initial(S)
    for nid, node in S.nodes.items():
        if isinstance(node, PredicateNode):
            for label in (0, 1):
                assert symbolic_step(sym, node, label)[0] == sym


@given(schemes)
def test_unique_satisfiable_path(S):
    for U in CORPUS_STRUCTURES:
        bound = divergence_bound(S, U)
        for a in U.tuples(S.n):
            found = satisfiable_paths(S, U, a, bound)
            assert len(found) == 1
            out = run(S, U, a)
            assert [(nid, lab) for nid, _, lab in found[0].steps][:len(out.trace)] == list(out.trace)[:len(found[0].steps)]


def test_pruned_search_agrees_with_full_enumeration():
    """On small bounds, filtering every enumerated path gives the same answer."""
    for name in ("loop", "guarded", "diamond", "quantified", "selfloop"):
        S = hand_written(name)
        for U in (gf(2), gf(3)):
            for a in U.tuples(S.n):
                full = [p for p in complete_paths(S, 12)
                        if all(eval_formula(f, U, assignment(a)) for f in p.pi)]
                assert full == sorted(satisfiable_paths(S, U, a, 12), key=full.index)
                assert len(full) == 1


def test_diamond_enumeration():
    paths = list(complete_paths(hand_written("diamond"), 10))
    assert len(paths) == 2 and all(p.finite and p.terminal_value == 3 for p in paths)


# ---------------------------------------------------------------- isomorphism

def test_isomorphic_reflexive(gf3):
    p = path_of_run(hand_written("guarded"), gf3, ("2", "1"))
    assert paths_isomorphic(p, p)


def test_terminal_numbers_matter(gf2):
    text = hand_written("contradiction")
    relabeled = scheme_from_text(
        "scheme c arity 1 signature r\nnode p predicate (not (= x0 x0))\nnode a terminal 1\n"
        "node b terminal 3\nedge p -> a label 1\nedge p -> b label 0\ninitial p\n", RING)
    p, q = path_of_run(text, gf2, ("0",)), path_of_run(relabeled, gf2, ("0",))
    assert not paths_isomorphic(p, q)
    assert first_mismatch(p, q) == 1


def _lasso(prefix, cycle):
    steps = tuple(("n", x, None) for x in prefix + cycle)
    return PathRecord(steps, (), None, lasso_start=len(prefix))


def test_normalize_lasso():
    assert normalize_lasso("AB", "CDCD") == (tuple("AB"), tuple("CD"))
    assert normalize_lasso("ABCD", "CD") == (tuple("AB"), tuple("CD"))
    assert normalize_lasso("", "AA") == ((), ("A",))
    assert normalize_lasso("XAB", "AB") == (("X",), ("A", "B"))


def test_lasso_comparison():
    # ABCDCDCD... vs ABCDDCDC...: differ at position 4
    p, q = _lasso(list("AB"), list("CD")), _lasso(list("ABCD"), list("DC"))
    assert not paths_isomorphic(p, q)
    assert first_mismatch(p, q) == 4
    r = _lasso(list("ABCDC"), list("DC"))
    assert paths_isomorphic(p, r) and first_mismatch(p, r) is None


def test_finite_vs_infinite(gf3):
    S = hand_written("loop")
    p, q = path_of_run(S, gf3, ("1", "1")), path_of_run(S, gf3, ("1", "0"))
    # (1,1): p/0 f p/0 f p/1 t ; (1,0): (p/0 f)^w
    assert not paths_isomorphic(p, q)
    assert first_mismatch(p, q) == 4


@given(schemes)
def test_lasso_forms_of_same_run_agree(S):
    U = gf(3)
    for a in itertools.islice(U.tuples(S.n), 3):
        p = path_of_run(S, U, a)
        if not p.finite:
            # unroll one more lap: same infinite sequence
            lap = p.steps[p.lasso_start:]
            q = PathRecord(p.steps + lap, p.pi, None, p.lasso_start + len(lap))
            assert paths_isomorphic(p, q) and first_mismatch(p, q) is None
