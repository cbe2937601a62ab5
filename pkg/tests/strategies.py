"""Hypothesis strategies for terms, formulas and schemes over the ring signature."""
import random

import hypothesis.strategies as st

from progtree.corpus import random_scheme
from progtree.logic import And, App, Atom, Const, Equal, ForAll, Not, Var

variables = st.integers(min_value=0, max_value=3).map(Var)
constants = st.sampled_from(["zero", "one"]).map(Const)

terms = st.recursive(
    st.one_of(variables, constants),
    lambda sub: st.builds(lambda f, a, b: App(f, (a, b)), st.sampled_from(["add", "mul"]), sub, sub),
    max_leaves=6,
)

atoms = st.one_of(
    st.builds(Equal, terms, terms),
    st.builds(lambda t: Atom("unit", (t,)), terms),
)

formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(ForAll, st.integers(min_value=0, max_value=3), sub),
    ),
    max_leaves=5,
)

# substitution targets: maps from some of x0..x3 to terms over x0..x3
substitutions = st.dictionaries(st.integers(min_value=0, max_value=3), terms, max_size=4)

schemes = st.integers(min_value=0, max_value=2**32 - 1).map(
    lambda seed: random_scheme(random.Random(seed), name=f"h{seed}"))
