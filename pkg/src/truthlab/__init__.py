"""Partial truth predicates over bounded arithmetic structures.

Syntax and coding of arithmetic with an optional oracle predicate P,
classical and three-valued evaluation, the monotone truth operator and its
least fixpoint, formula families, and audits of truth sets against the
positive truth theories.
"""
from .axioms import (
    AuditReport,
    ClauseResult,
    check_cc,
    check_gc,
    check_int,
    check_int_tot,
    check_neg,
    check_pt_minus,
    check_truth_of_induction,
    check_utb,
    check_wpt_minus,
    recheck,
)
from .coding import INVALID, decode, encode, ind_instance, is_closed_term, is_formula_le1, is_sentence
from .constructions import (
    InductionResult,
    InductionStatus,
    check_stopping_semantics,
    enumerate_formula,
    internal_induction_check,
    omission_family,
    stopping_disjunction,
    tau_family,
    theta_chain,
)
from .fixpoint import (
    FixpointTrace,
    SentenceUniverse,
    TemplateClass,
    build_universe,
    gamma,
    least_fixpoint,
    theta,
    tr_construction,
)
from .grammar import parse_formula, parse_term, unparse
from .semantics import (
    BoundedStructure,
    Scheme,
    TruthValue3,
    eval3,
    eval_classical,
    eval_term,
    is_total,
    val,
)
from .syntax import (
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
    Zero,
    alpha_eq,
    and_,
    apply_assignment,
    depth,
    forall,
    free_vars,
    implies,
    numeral,
    subst_predicate,
    subst_term,
    to_semirelational,
    universal_closure,
)

__version__ = "0.1.0"
