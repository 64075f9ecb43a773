"""Random syntax for tests: plain ``random`` generators and hypothesis strategies."""
from __future__ import annotations

import random
from typing import List, Optional, Sequence

from hypothesis import strategies as st

from truthlab.semantics import BoundedStructure
from truthlab.syntax import (
    Add,
    Eq,
    Exists,
    Formula,
    Mul,
    Not,
    Or,
    P,
    Succ,
    Term,
    Var,
    ZERO,
    numeral,
)


# ---------------------------------------------------------------------------
# random module


def rand_term(rng: random.Random, height: int, scope: Sequence[int] = (), max_num: int = 3) -> Term:
    """A term of height <= height whose variables come from scope."""
    if height <= 0 or rng.random() < 0.35:
        if scope and rng.random() < 0.5:
            return Var(rng.choice(scope))
        return numeral(rng.randint(0, max_num))
    r = rng.random()
    if r < 0.4:
        return Succ(rand_term(rng, height - 1, scope, max_num))
    op = Add if r < 0.75 else Mul
    return op(rand_term(rng, height - 1, scope, max_num), rand_term(rng, height - 1, scope, max_num))


def rand_formula(
    rng: random.Random,
    depth: int,
    scope: Sequence[int] = (),
    allow_p: bool = False,
    var_pool: Sequence[int] = (0, 1, 2),
    term_height: int = 2,
    max_num: int = 3,
) -> Formula:
    """A formula of logical depth <= depth with free variables inside scope."""
    if depth <= 0 or rng.random() < 0.2:
        if allow_p and rng.random() < 0.35:
            return P(rand_term(rng, 1, scope, max_num))
        return Eq(rand_term(rng, term_height, scope, max_num), rand_term(rng, term_height, scope, max_num))
    r = rng.random()
    if r < 0.3:
        return Not(rand_formula(rng, depth - 1, scope, allow_p, var_pool, term_height, max_num))
    if r < 0.6:
        return Or(
            rand_formula(rng, depth - 1, scope, allow_p, var_pool, term_height, max_num),
            rand_formula(rng, depth - 1, scope, allow_p, var_pool, term_height, max_num),
        )
    v = rng.choice(var_pool)
    inner = tuple(sorted(set(scope) | {v}))
    return Exists(v, rand_formula(rng, depth - 1, inner, allow_p, var_pool, term_height, max_num))


def rand_sentence(rng: random.Random, depth: int, allow_p: bool = False, **kw) -> Formula:
    return rand_formula(rng, depth, (), allow_p, **kw)


def rand_structure(rng: random.Random, max_bound: int = 6, partial_p: bool = False) -> BoundedStructure:
    n = rng.randint(1, max_bound)
    if not partial_p:
        return BoundedStructure(n)
    pos, neg = set(), set()
    for x in range(n + 2):
        r = rng.random()
        if r < 0.35:
            pos.add(x)
        elif r < 0.7:
            neg.add(x)
    return BoundedStructure(n, frozenset(pos), frozenset(neg))


def rand_tree(rng: random.Random, height: int, allow_p: bool = True):
    """Any term or formula, free variables and vacuous binders allowed."""
    if rng.random() < 0.3:
        return rand_term(rng, height, tuple(range(4)), max_num=2)
    return rand_formula(rng, max(0, height - 2), tuple(range(4)), allow_p, var_pool=range(4), term_height=2, max_num=2)


# ---------------------------------------------------------------------------
# hypothesis strategies

variables = st.integers(min_value=0, max_value=3)

terms = st.recursive(
    st.one_of(st.just(ZERO), variables.map(Var)),
    lambda kids: st.one_of(
        kids.map(Succ),
        st.tuples(kids, kids).map(lambda p: Add(*p)),
        st.tuples(kids, kids).map(lambda p: Mul(*p)),
    ),
    max_leaves=6,
)

closed_terms = st.recursive(
    st.just(ZERO),
    lambda kids: st.one_of(
        kids.map(Succ),
        st.tuples(kids, kids).map(lambda p: Add(*p)),
        st.tuples(kids, kids).map(lambda p: Mul(*p)),
    ),
    max_leaves=4,
)


def formulas(allow_p: bool = True, max_leaves: int = 6):
    atoms = st.tuples(terms, terms).map(lambda p: Eq(*p))
    if allow_p:
        atoms = st.one_of(atoms, terms.map(P))
    return st.recursive(
        atoms,
        lambda kids: st.one_of(
            kids.map(Not),
            st.tuples(kids, kids).map(lambda p: Or(*p)),
            st.tuples(variables, kids).map(lambda p: Exists(*p)),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def sentences(draw, allow_p: bool = False, max_depth: int = 3):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    depth = draw(st.integers(min_value=0, max_value=max_depth))
    return rand_sentence(random.Random(seed), depth, allow_p)


@st.composite
def structures(draw, max_bound: int = 4, partial_p: bool = True):
    n = draw(st.integers(min_value=0, max_value=max_bound))
    if not partial_p:
        return BoundedStructure(n)
    labels = draw(st.lists(st.sampled_from("+-?"), min_size=n + 1, max_size=n + 1))
    pos = {i for i, c in enumerate(labels) if c == "+"}
    neg = {i for i, c in enumerate(labels) if c == "-"}
    return BoundedStructure(n, frozenset(pos), frozenset(neg))


def rand_universe(rng: random.Random, max_depth: int = 4, partial_p: bool = False, negation_closed: bool = False,
                  max_bound: int = 6, max_seed: int = 15):
    """(structure, universe) from a random seed of sentences."""
    from truthlab.fixpoint import build_universe

    M = rand_structure(rng, max_bound, partial_p)
    seed = [rand_sentence(rng, rng.randint(0, max_depth), allow_p=partial_p) for _ in range(rng.randint(1, max_seed))]
    return M, build_universe(seed, M, negation_closed=negation_closed)
