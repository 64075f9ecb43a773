"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every test records one ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary of the run.
"""
import itertools
import random
import time
from itertools import product

import pytest

from conftest import ACCEPTANCE_LINES
from randgen import rand_formula, rand_structure, rand_tree, rand_universe
from truthlab.axioms import check_int, check_neg, check_pt_minus, check_utb, check_wpt_minus
from truthlab.coding import decode, encode
from truthlab.constructions import TauFamily, check_stopping_semantics, instantiate, listing, stopping_disjunction
from truthlab.fixpoint import TemplateClass, build_universe, gamma, least_fixpoint, tr_construction
from truthlab.semantics import BoundedStructure, F, Scheme, T, U as UNDEF, eval3, eval_classical, val
from truthlab.syntax import (
    Add,
    Eq,
    Exists,
    Mul,
    Not,
    Or,
    P,
    Succ,
    Var,
    ZERO,
    apply_assignment,
    depth,
    mentions_p,
    numeral,
    subst_predicate,
    subst_term,
    to_semirelational,
)


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def logical_nodes(phi):
    if isinstance(phi, (Eq, P)):
        return 0
    if isinstance(phi, Or):
        return 1 + logical_nodes(phi.left) + logical_nodes(phi.right)
    return 1 + logical_nodes(phi.body)


def criterion_universes():
    """The universes shared by criteria 1, 2 and 8."""
    rng = random.Random(2024)
    out = []
    for k in range(24):
        out.append(rand_universe(rng, max_depth=4, partial_p=k % 2 == 1, negation_closed=k % 4 == 0,
                                 max_bound=6, max_seed=15))
    return out


@pytest.fixture(scope="module")
def universes():
    return criterion_universes()


# ---------------------------------------------------------------------------


def test_criterion_1_fixpoint_is_strong_kleene():
    start = time.perf_counter()
    universes = criterion_universes()
    mismatches = checked = 0
    for M, U in universes:
        fix, _ = least_fixpoint(U, M)
        for phi in U:
            checked += 1
            if (phi in fix) != (eval3(phi, M, Scheme.STRONG) is T):
                mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 30
    record(1, ok, f"{len(universes)} universes, {checked} sentences, {mismatches} mismatches, {elapsed:.2f}s (< 30s)")
    assert ok


def test_criterion_2_pt_on_fixpoints(universes):
    violations = 0
    for M, U in universes:
        fix, _ = least_fixpoint(U, M)
        violations += check_pt_minus(M, fix, U).violation_count
    ok = violations == 0
    record(2, ok, f"{len(universes)} universes, {violations} PT- violations")
    assert ok


def _atoms(c):
    return [P(numeral(k)) for k in range(c + 1)], [P(numeral(c + 1 + k)) for k in range(c + 1)]


def _pattern_structure(pattern):
    pos = {k for k, v in enumerate(pattern) if v == "T"}
    neg = {k for k, v in enumerate(pattern) if v == "F"}
    return BoundedStructure(0, pos, neg)


def test_criterion_3_stopping_disjunction():
    """Stated precondition only: some alpha True and betas decided up to it.

    Undefined alphas before the first true one make the disjunction Undefined
    while the reported beta is decided, so this criterion fails as stated.
    """
    start = time.perf_counter()
    applicable = disagree = 0
    example = None
    for c in range(5):
        alphas, betas = _atoms(c)
        D = stopping_disjunction(alphas, betas)
        for pat in itertools.product("TFU", repeat=2 * c + 2):
            r = check_stopping_semantics(alphas, betas, _pattern_structure(pat), disjunction=D)
            if r.applicable:
                applicable += 1
                if not r.agrees:
                    disagree += 1
                    example = example or "".join(pat)
    rng = random.Random(3)
    for _ in range(200):
        c = rng.randint(0, 8)
        alphas, betas = _atoms(c)
        pat = [rng.choice("TFU") for _ in range(2 * c + 2)]
        r = check_stopping_semantics(alphas, betas, _pattern_structure(pat))
        if r.applicable:
            applicable += 1
            disagree += not r.agrees
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and elapsed < 10
    record(3, ok, f"{applicable} applicable cases, {disagree} disagree (first: alphas+betas {example}), {elapsed:.2f}s (< 10s)")
    assert ok


def test_criterion_4_generalized_commutativity():
    start = time.perf_counter()
    rng = random.Random(4)
    pairs = mismatches = instances = 0
    while pairs < 200:
        M = rand_structure(rng, max_bound=6, partial_p=True)
        eta = rand_formula(rng, 3, (0, 1), allow_p=True, var_pool=(0, 1, 2))
        if logical_nodes(eta) > 3:
            continue
        eta = to_semirelational(eta)
        xi = rand_formula(rng, rng.randint(0, 2), (7,), allow_p=True, var_pool=(8, 9))
        if xi._fv != {7}:
            continue
        xvals = {x: eval3(subst_term(xi, 7, numeral(x)), M) for x in M.domain}
        if not all(v.decided for v in xvals.values()):
            continue  # xi must be total on the domain
        ext = {x for x, v in xvals.items() if v is T}
        body = subst_predicate(eta, xi)
        fv = sorted(eta._fv)
        sigmas = [dict(zip(fv, xs)) for xs in product(M.domain, repeat=len(fv))]
        sents = [apply_assignment(body, s) for s in sigmas]
        U = build_universe(sents, M)
        fix, _ = least_fixpoint(U, M)
        for s, sent in zip(sigmas, sents):
            instances += 1
            if (sent in fix) != eval_classical(eta, M, s, p_ext=ext):
                mismatches += 1
        pairs += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 30
    record(4, ok, f"{pairs} pairs, {instances} instances, {mismatches} mismatches, {elapsed:.2f}s (< 30s)")
    assert ok


LISTED = [
    Eq(Var(0), Mul(Var(1), Var(1))),
    Exists(2, Eq(Add(Var(0), Var(2)), numeral(3))),
    Eq(ZERO, numeral(1)),
    Or(Eq(Var(0), ZERO), Exists(1, Eq(Var(0), Succ(Var(1))))),
    Not(Eq(Var(0), Var(1))),
    Exists(0, Eq(Mul(Var(0), numeral(2)), Var(1))),
]


def test_criterion_5_tau_disquotation():
    """Both the literal code enumeration and a curated listing of formulas."""
    start = time.perf_counter()
    rng = random.Random(5)
    closed = [numeral(0), numeral(1), numeral(2), Add(numeral(1), numeral(1))]
    checked = mismatches = 0
    for enumeration, name in [(None, "literal"), (listing(LISTED), "listing")]:
        for b, c in [(0, 0), (5, 5), (8, 8), (2, 7), (7, 2), (5, 8)]:
            fam = TauFamily(b, c, cap=10**6) if enumeration is None else TauFamily(b, c, enumeration, cap=10**6)
            M = BoundedStructure(rng.randint(0, 6))
            for i in range(min(5, b, c) + 1):
                phi = fam.phi(i)
                for _ in range(2):
                    ts = [rng.choice(closed) for _ in phi._fv]
                    tau = fam.tau_at(instantiate(phi, ts), ts)
                    sigma = {v: val(t) for v, t in zip(sorted(phi._fv), ts)}
                    expect = T if eval_classical(phi, M, sigma) else F
                    checked += 1
                    mismatches += eval3(tau, M) is not expect
    elapsed = time.perf_counter() - start
    ok = mismatches == 0
    record(5, ok, f"{checked} coded instances (literal and listed enumerations), {mismatches} mismatches, {elapsed:.2f}s")
    assert ok


def tr_universes():
    rng = random.Random(6)
    return [rand_universe(rng, max_depth=2, partial_p=k % 2 == 1, negation_closed=True) for k in range(20)]


def test_criterion_6_wpt_and_int_on_tr():
    violations = induction = 0
    templates = TemplateClass(3, 2)
    for M, U in tr_universes():
        Tr = tr_construction(M, templates, U)
        violations += check_wpt_minus(M, Tr, U).violation_count
        induction += check_int(M, Tr, U).violation_count
    ok = violations == 0 and induction == 0
    record(6, ok, f"20 universes, {violations} WPT- violations, {induction} induction violations")
    assert ok


def test_criterion_7_sk_wk_separation():
    M = BoundedStructure(2)
    phi = Or(Eq(ZERO, ZERO), P(ZERO))
    sk, wk = eval3(phi, M, Scheme.STRONG), eval3(phi, M, Scheme.WEAK)
    U = build_universe([phi], M, negation_closed=True)
    fix, _ = least_fixpoint(U, M)
    wpt_fails = phi in check_wpt_minus(M, fix, U).clause("2a").violations
    neg_fails = not check_neg(M, fix, U).passed
    ok = sk is T and wk is UNDEF and wpt_fails and neg_fails
    record(7, ok, f"SK {sk}, WK {wk}, WPT- disjunction clause fails: {wpt_fails}, NEG fails: {neg_fails}")
    assert ok


def test_criterion_8_monotone_consistent_fixed(universes):
    rng = random.Random(8)
    bad_mono = bad_cons = bad_fix = 0
    for M, U in universes:
        members = list(U)
        for _ in range(100):
            B = {phi for phi in members if rng.random() < 0.5}
            A = {phi for phi in B if rng.random() < 0.5}
            bad_mono += not gamma(A, M, U) <= gamma(B, M, U)
        fix, _ = least_fixpoint(U, M)
        bad_cons += sum(1 for phi in fix if Not(phi) in fix)
        bad_fix += gamma(fix, M, U) != fix
    ok = bad_mono == bad_cons == bad_fix == 0
    record(8, ok, f"{100 * len(universes)} pairs: {bad_mono} non-monotone, {bad_cons} inconsistent, {bad_fix} not fixed")
    assert ok


def test_criterion_9_utb():
    rng = random.Random(9)
    failures = checked = 0
    for _ in range(10):
        M = BoundedStructure(rng.randint(1, 4))
        templates = []
        while len(templates) < 4:
            phi = rand_formula(rng, rng.randint(0, 3), (0, 1), var_pool=(0, 1, 2))
            if depth(phi) <= 3 and len(phi._fv) <= 2:
                templates.append(phi)
        terms = [numeral(x) for x in M.domain] + [Add(numeral(1), numeral(1))]
        seed = [instantiate(t, c) for t in templates for c in product(terms, repeat=len(t._fv))]
        U = build_universe(seed, M)
        fix, _ = least_fixpoint(U, M)
        Tr = tr_construction(M, TemplateClass(3, 2), U)
        for A in (fix, Tr):
            report = check_utb(M, A, templates, terms, U)
            checked += sum(c.checked for c in report.clauses)
            failures += report.violation_count
    ok = failures == 0
    record(9, ok, f"{checked} template instances on fixpoint and Tr, {failures} violations")
    assert ok


def _children(x):
    for name in ("arg", "body", "left", "right"):
        if hasattr(x, name):
            yield getattr(x, name)


def test_criterion_10_coding_round_trip():
    rng = random.Random(10)
    trees = [rand_tree(rng, rng.randint(0, 6)) for _ in range(10**5)]
    start = time.perf_counter()
    round_trip = monotone = 0
    for x in trees:
        code = encode(x)
        round_trip += decode(code) != x
        stack = [(x, code)]
        while stack:
            node, nc = stack.pop()
            for ch in _children(node):
                cc = encode(ch)
                if cc >= nc:
                    monotone += 1
                stack.append((ch, cc))
    elapsed = time.perf_counter() - start
    ok = round_trip == 0 and monotone == 0 and elapsed < 10
    record(10, ok, f"{len(trees)} trees, {round_trip} round-trip failures, {monotone} subterm order failures, {elapsed:.2f}s (< 10s)")
    assert ok
