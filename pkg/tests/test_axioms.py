import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randgen import rand_universe, sentences, structures
from truthlab.axioms import (
    CC,
    GC,
    INT,
    NEG,
    PT,
    TIND,
    UTB,
    WPT,
    assignments,
    check_cc,
    check_cc_all,
    check_gc,
    check_gc_all,
    check_int,
    check_int_tot,
    check_neg,
    check_pt_minus,
    check_regularity,
    check_truth_of_induction,
    check_utb,
    check_wpt_minus,
    induction_sentence,
    recheck,
    regularity_pairs,
)
from truthlab.errors import NotInUniverse, TooManyFreeVars
from truthlab.fixpoint import TemplateClass, build_universe, least_fixpoint, tr_construction
from truthlab.grammar import parse_formula as pf
from truthlab.semantics import BoundedStructure, Scheme, T, U as UNDEF, eval3
from truthlab.syntax import Add, Eq, Mul, Not, Or, P, Var, ZERO, numeral, universal_closure


def fixpoint_of(seed, M, negation_closed=False):
    U = build_universe(seed, M, negation_closed=negation_closed)
    fix, _ = least_fixpoint(U, M)
    return U, fix


def replay_all(report, M, A, U):
    for clause in report.clauses:
        for w in clause.violations:
            assert recheck(report.theory, clause.clause_id, w, M, A, U) is False


# ---------------------------------------------------------------------------
# PT- and WPT-


def test_pt_passes_on_random_fixpoints():
    rng = random.Random(11)
    for k in range(15):
        M, U = rand_universe(rng, partial_p=k % 2 == 0, negation_closed=k % 3 == 0)
        fix, _ = least_fixpoint(U, M)
        report = check_pt_minus(M, fix, U)
        assert report.passed, report.summary()
        assert sum(c.checked for c in report.clauses) > 0


@settings(max_examples=60)
@given(structures(), st.lists(sentences(allow_p=True), min_size=1, max_size=4))
def test_pt_passes_on_fixpoints_property(M, seed):
    U, fix = fixpoint_of(seed, M)
    assert check_pt_minus(M, fix, U).passed


def test_pt_detects_false_equation():
    M = BoundedStructure(2)
    U, fix = fixpoint_of([pf("(0 = S(0))"), pf("(0 = 0)")], M)
    A = fix | {pf("(0 = S(0))")}
    report = check_pt_minus(M, A, U)
    assert report.failed() == ["1a"]
    assert report.clause("1a").violations == (pf("(0 = S(0))"),)
    replay_all(report, M, A, U)


def test_pt_detects_double_negation():
    M = BoundedStructure(2)
    U = build_universe([pf("~~(0 = 0)")], M)
    A = {pf("~~(0 = 0)")}
    report = check_pt_minus(M, A, U)
    assert "4" in report.failed() and "1a" in report.failed()
    replay_all(report, M, A, U)


def test_derived_connectives_are_audited():
    M = BoundedStructure(2)
    conj = pf("((0 = 0) & (S(0) = S(0)))")
    every = pf("A v0 (v0 = v0)")
    U, fix = fixpoint_of([conj, every, Not(conj), Not(every)], M)
    report = check_pt_minus(M, fix, U)
    assert report.passed
    assert report.clause("and").checked >= 1 and report.clause("all").checked >= 1
    broken = fix - {conj}
    assert "and" in check_pt_minus(M, broken, U).failed()


def test_wpt_on_tr_construction():
    rng = random.Random(12)
    for _ in range(8):
        M, U = rand_universe(rng, max_depth=2, negation_closed=True)
        Tr = tr_construction(M, TemplateClass(3), U)
        report = check_wpt_minus(M, Tr, U)
        assert report.passed, report.summary()
        assert check_int(M, Tr, U).passed


def test_sk_wk_separation_witness():
    M = BoundedStructure(2)  # P undetermined everywhere
    phi = Or(pf("(0 = 0)"), P(ZERO))
    assert eval3(phi, M, Scheme.STRONG) is T
    assert eval3(phi, M, Scheme.WEAK) is UNDEF
    U, fix = fixpoint_of([phi], M, negation_closed=True)
    assert phi in fix
    assert check_pt_minus(M, fix, U).passed
    wpt = check_wpt_minus(M, fix, U)
    assert wpt.clause("2a").violations == (phi,)
    neg = check_neg(M, fix, U)
    assert not neg.passed and Not(P(ZERO)) in neg.clause("neg").violations
    replay_all(wpt, M, fix, U)
    replay_all(neg, M, fix, U)


def test_wpt_skips_undeterminable_totality():
    M = BoundedStructure(1)
    phi = Or(pf("(0 = 0)"), P(ZERO))
    U, fix = fixpoint_of([phi], M)  # ~P(0) is not in U
    clause = check_wpt_minus(M, fix, U).clause("2a")
    assert clause.checked == 0 and clause.skipped == 1


# ---------------------------------------------------------------------------
# NEG and regularity


def test_neg_holds_on_total_fixpoints():
    rng = random.Random(13)
    for _ in range(8):
        M, U = rand_universe(rng, negation_closed=True)
        fix, _ = least_fixpoint(U, M)
        assert check_neg(M, fix, U).passed


def test_neg_fails_on_partial_p():
    M = BoundedStructure(1, frozenset({0}), frozenset())
    U, fix = fixpoint_of([P(numeral(1)), P(ZERO)], M, negation_closed=True)
    report = check_neg(M, fix, U)
    assert report.clause("neg").violations == (Not(P(numeral(1))),)


def test_regularity_pairs_and_violation():
    M = BoundedStructure(2)
    a = Eq(Add(numeral(1), numeral(1)), numeral(2))
    b = Eq(numeral(2), numeral(2))
    c = Eq(Mul(numeral(1), numeral(2)), numeral(2))
    U, fix = fixpoint_of([a, b, c, pf("(0 = S(0))")], M)
    pairs = regularity_pairs(U)
    assert len(pairs) == 3
    assert check_regularity(M, fix, U).passed
    A = fix - {b}
    report = check_regularity(M, A, U)
    assert len(report.clause("5").violations) == 2
    replay_all(report, M, A, U)


# ---------------------------------------------------------------------------
# UTB-


def test_utb_on_fixpoint_and_tr():
    M = BoundedStructure(3)
    templates = [Eq(Var(0), Mul(Var(1), Var(1))), pf("E v2 ((v0 + v2) = S(S(0)))")]
    terms = [numeral(k) for k in range(4)] + [Add(numeral(1), numeral(1))]
    from truthlab.constructions import instantiate
    from itertools import product

    seed = [instantiate(t, c) for t in templates for c in product(terms, repeat=len(t._fv))]
    U, fix = fixpoint_of(seed, M)
    assert check_utb(M, fix, templates, terms).passed
    Tr = tr_construction(M, templates, U)
    report = check_utb(M, Tr, templates, terms, U)
    assert report.passed
    assert report.clause("utb0").checked == 25
    bad = fix - {Eq(numeral(1), Mul(numeral(1), numeral(1)))}
    report = check_utb(M, bad, templates, terms, U)
    assert not report.passed
    replay_all(report, M, bad, U)


def test_utb_skips_outside_universe_and_rejects_p():
    M = BoundedStructure(1)
    U = build_universe([Eq(ZERO, ZERO)], M)
    report = check_utb(M, frozenset(), [Eq(Var(0), ZERO)], [ZERO, numeral(1)], U)
    assert report.clause("utb0").skipped == 1
    assert not report.passed
    with pytest.raises(ValueError):
        check_utb(M, frozenset(), [P(Var(0))], [ZERO])


# ---------------------------------------------------------------------------
# CC and GC


def test_cc_sweep_on_p_free_fixpoints():
    rng = random.Random(14)
    for _ in range(10):
        M, U = rand_universe(rng)
        fix, _ = least_fixpoint(U, M)
        for d in range(4):
            report = check_cc_all(M, fix, U, max_depth=d)
            assert report.passed and report.clause("cc").checked > 0


def test_cc_single_sentence():
    M = BoundedStructure(2)
    U, fix = fixpoint_of([pf("~(0 = S(0))")], M)
    assert check_cc(M, fix, U, pf("~(0 = S(0))"))
    # the equation itself is outside U, so its arithmetic value stands in
    assert not check_cc(M, frozenset(), U, pf("~(0 = S(0))"))
    U, fix = fixpoint_of([pf("~(0 = S(0))")], M, negation_closed=True)
    assert check_cc(M, fix, U, pf("~(0 = S(0))"))
    assert not check_cc(M, fix | {pf("(0 = S(0))")}, U, pf("~(0 = S(0))"))
    with pytest.raises(NotInUniverse):
        check_cc(M, fix, U, pf("(0 = 0)"))


def test_cc_fails_on_partial_p_negation():
    M = BoundedStructure(1)
    U, fix = fixpoint_of([Not(P(ZERO))], M, negation_closed=True)
    report = check_cc_all(M, fix, U)
    assert report.clause("cc").violations == (Not(P(ZERO)),)
    replay_all(report, M, fix, U)


def test_gc_two_free_variables():
    M = BoundedStructure(2)
    phi = Eq(Var(0), Var(1))
    assert len(assignments(phi, M)) == 9
    U, fix = fixpoint_of([universal_closure(phi)], M)
    assert check_gc(M, fix, U, phi)
    report = check_gc_all(M, fix, U)
    assert report.passed and report.clause("gc").checked >= 1
    A = fix | {universal_closure(phi)}
    assert not check_gc(M, A, U, phi)
    with pytest.raises(NotInUniverse):
        check_gc(M, fix, U, Eq(Var(0), ZERO))


# ---------------------------------------------------------------------------
# induction


def test_truth_of_induction():
    M = BoundedStructure(3)
    phis = [Eq(Var(0), Var(0)), pf("E v1 (v0 = (v1 + v1))")]
    U, fix = fixpoint_of([induction_sentence(phi) for phi in phis], M)
    assert check_truth_of_induction(M, fix, U, phis).passed
    report = check_truth_of_induction(M, frozenset(), U, phis)
    assert report.clause("ind").violations == tuple(phis)
    replay_all(report, M, frozenset(), U)
    with pytest.raises(NotInUniverse):
        check_truth_of_induction(M, fix, U, [Eq(Var(0), ZERO)])
    with pytest.raises(TooManyFreeVars):
        induction_sentence(Eq(Var(0), Var(1)))


def test_int_and_int_tot_on_fixpoints():
    rng = random.Random(15)
    for k in range(10):
        M, U = rand_universe(rng, partial_p=k % 2 == 0, negation_closed=True)
        fix, _ = least_fixpoint(U, M)
        r = check_int(M, fix, U)
        assert r.passed and r.theory == INT
        assert check_int_tot(M, fix, U).passed


# ---------------------------------------------------------------------------
# soundness of reports


def test_reports_replay_and_are_deterministic():
    rng = random.Random(16)
    for k in range(12):
        M, U = rand_universe(rng, max_depth=3, partial_p=k % 2 == 0, negation_closed=k % 3 != 0)
        members = list(U)
        A = frozenset(phi for phi in members if rng.random() < 0.5)
        reports = [
            check_pt_minus(M, A, U),
            check_wpt_minus(M, A, U),
            check_neg(M, A, U),
            check_cc_all(M, A, U),
            check_gc_all(M, A, U),
            check_int(M, A, U),
        ]
        for r in reports:
            replay_all(r, M, A, U)
        again = [check_pt_minus(M, A, U), check_wpt_minus(M, A, U)]
        assert [r.to_dict() for r in again] == [r.to_dict() for r in reports[:2]]


def test_report_shape():
    M = BoundedStructure(1)
    U, fix = fixpoint_of([pf("(0 = 0)")], M)
    d = check_pt_minus(M, fix, U).to_dict()
    assert set(d) == {"theory", "passed", "violations", "clauses"}
    assert d["theory"] == PT and d["passed"] is True
    assert {"clause", "description", "checked", "skipped", "passed", "violations"} == set(d["clauses"][0])
    assert {PT, WPT, UTB, NEG, CC, GC, TIND}  # tags are importable constants


def test_recheck_rejects_unknown_clause():
    M = BoundedStructure(1)
    U, fix = fixpoint_of([pf("(0 = 0)")], M)
    with pytest.raises(KeyError):
        recheck(PT, "9z", pf("(0 = 0)"), M, fix, U)
    with pytest.raises(ValueError):
        recheck(PT, "2a", pf("(0 = 0)"), M, fix, U)
