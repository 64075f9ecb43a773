"""Audits of a candidate truth set against the truth-theoretic axiom families.

A truth set A is a set of sentences inside a finite :class:`SentenceUniverse`;
membership in A plays the role of T.  Each clause is checked on every member
of U whose shape it concerns.  When a clause needs a sentence outside U the
instance is skipped and counted, never guessed.

Clause ids, shared by both positive theories::

    1a  T(s=t)        iff  val s = val t
    1b  T(~s=t)       iff  val s != val t
    2a  T(a|b)        iff  T a or T b                  (guarded by tot a, tot b in WPT)
    2b  T(~(a|b))     iff  T ~a and T ~b
    3a  T(E v f)      iff  some x: T f(x)              (guarded by tot f(v) in WPT)
    3b  T(~E v f)     iff  every x: T ~f(x)
    4   T(~~f)        iff  T f
    5   val s = val t  implies  T f(s) iff T f(t)
    and / nand / all / nall   the derived clauses for the defined connectives
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .coding import ind_instance
from .constructions import InductionStatus, instantiate, internal_induction_check
from .errors import NotInUniverse, TooManyFreeVars
from .fixpoint import SentenceUniverse, instances, match_template, template_truth
from .grammar import unparse
from .semantics import BoundedStructure, eval_classical, val
from .syntax import (
    Eq,
    Exists,
    Formula,
    Not,
    Or,
    P,
    Term,
    Var,
    apply_assignment,
    depth,
    mentions_p,
    numeral,
    subst_term,
    universal_closure,
)

PT = "PT-"
WPT = "WPT-"
UTB = "UTB-"
NEG = "NEG"
INT = "INT"
INT_TOT = "INT_TOT"
CC = "CC"
GC = "GC"
REG = "REG"
TIND = "T(IND)"


# ---------------------------------------------------------------------------
# reports


def describe(witness) -> object:
    if isinstance(witness, tuple):
        return [describe(w) for w in witness]
    if isinstance(witness, (Formula, Term)):
        return unparse(witness)
    return witness


@dataclass(frozen=True)
class ClauseResult:
    clause_id: str
    description: str
    checked: int
    skipped: int = 0
    violations: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "clause": self.clause_id,
            "description": self.description,
            "checked": self.checked,
            "skipped": self.skipped,
            "passed": self.passed,
            "violations": [describe(w) for w in self.violations],
        }


@dataclass(frozen=True)
class AuditReport:
    theory: str
    clauses: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def violation_count(self) -> int:
        return sum(len(c.violations) for c in self.clauses)

    def clause(self, clause_id: str) -> ClauseResult:
        for c in self.clauses:
            if c.clause_id == clause_id:
                return c
        raise KeyError(clause_id)

    def failed(self) -> List[str]:
        return [c.clause_id for c in self.clauses if not c.passed]

    def to_dict(self) -> dict:
        return {
            "theory": self.theory,
            "passed": self.passed,
            "violations": self.violation_count,
            "clauses": [c.to_dict() for c in self.clauses],
        }

    def summary(self) -> str:
        lines = [f"{self.theory}: {'pass' if self.passed else 'FAIL'}"]
        for c in self.clauses:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(
                f"  {mark} {c.clause_id:<6} checked={c.checked} skipped={c.skipped} violations={len(c.violations)}"
            )
            for w in c.violations[:5]:
                lines.append(f"         {describe(w)}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# evaluation context


class _Ctx:
    def __init__(self, M: BoundedStructure, A, U: SentenceUniverse):
        self.M = M
        self.A = A
        self.U = U

    def T(self, phi: Formula) -> bool:
        return phi in self.A

    def has(self, *phis: Formula) -> bool:
        return all(phi in self.U for phi in phis)

    def tot(self, phi: Formula) -> Optional[bool]:
        """phi or ~phi true; None when it cannot be read off A within U."""
        if phi in self.A or Not(phi) in self.A:
            return True
        if Not(phi) in self.U:
            return False
        return None

    def tot_all(self, phis: Iterable[Formula]) -> Optional[bool]:
        unknown = False
        for phi in phis:
            t = self.tot(phi)
            if t is False:
                return False
            if t is None:
                unknown = True
        return None if unknown else True


Check = Callable[[Formula, _Ctx], Optional[bool]]


def _is_and(phi) -> bool:
    return (
        isinstance(phi, Not)
        and isinstance(phi.body, Or)
        and isinstance(phi.body.left, Not)
        and isinstance(phi.body.right, Not)
    )


def _is_forall(phi) -> bool:
    return isinstance(phi, Not) and isinstance(phi.body, Exists) and isinstance(phi.body.body, Not)


def _c_eq(phi, ctx):
    if not isinstance(phi, Eq):
        return None
    return ctx.T(phi) == (val(phi.left) == val(phi.right))


def _c_neq(phi, ctx):
    if not (isinstance(phi, Not) and isinstance(phi.body, Eq)):
        return None
    return ctx.T(phi) == (val(phi.body.left) != val(phi.body.right))


def _c_or_sk(phi, ctx):
    if not ctx.has(phi.left, phi.right):
        return None
    return ctx.T(phi) == (ctx.T(phi.left) or ctx.T(phi.right))


def _c_or_wk(phi, ctx):
    if not ctx.has(phi.left, phi.right):
        return None
    tl, tr = ctx.tot(phi.left), ctx.tot(phi.right)
    if tl is None or tr is None:
        return None
    return ctx.T(phi) == (tl and tr and (ctx.T(phi.left) or ctx.T(phi.right)))


def _c_nor(phi, ctx):
    a, b = Not(phi.body.left), Not(phi.body.right)
    if not ctx.has(a, b):
        return None
    return ctx.T(phi) == (ctx.T(a) and ctx.T(b))


def _c_ex_sk(phi, ctx):
    inst = instances(phi, ctx.M.bound)
    if not ctx.has(*inst):
        return None
    return ctx.T(phi) == any(ctx.T(x) for x in inst)


def _c_ex_wk(phi, ctx):
    inst = instances(phi, ctx.M.bound)
    if not ctx.has(*inst):
        return None
    tot = ctx.tot_all(inst)
    if tot is None:
        return None
    return ctx.T(phi) == (tot and any(ctx.T(x) for x in inst))


def _c_nex(phi, ctx):
    neg = [Not(x) for x in instances(phi.body, ctx.M.bound)]
    if not ctx.has(*neg):
        return None
    return ctx.T(phi) == all(ctx.T(x) for x in neg)


def _c_dneg(phi, ctx):
    inner = phi.body.body
    if inner not in ctx.U:
        return None
    return ctx.T(phi) == ctx.T(inner)


def _c_and(phi, ctx):
    a, b = phi.body.left.body, phi.body.right.body
    if not ctx.has(a, b):
        return None
    return ctx.T(phi) == (ctx.T(a) and ctx.T(b))


def _nand_parts(phi):
    inner = phi.body.body
    return Not(inner.left.body), Not(inner.right.body), inner.left.body, inner.right.body


def _c_nand_sk(phi, ctx):
    na, nb, _, _ = _nand_parts(phi)
    if not ctx.has(na, nb):
        return None
    return ctx.T(phi) == (ctx.T(na) or ctx.T(nb))


def _c_nand_wk(phi, ctx):
    na, nb, a, b = _nand_parts(phi)
    if not ctx.has(na, nb, a, b):
        return None
    ta, tb = ctx.tot(a), ctx.tot(b)
    if ta is None or tb is None:
        return None
    return ctx.T(phi) == (ta and tb and (ctx.T(na) or ctx.T(nb)))


def _forall_body_instances(phi, bound):
    ex = phi.body
    return instances(Exists(ex.var, ex.body.body), bound)


def _c_all(phi, ctx):
    inst = _forall_body_instances(phi, ctx.M.bound)
    if not ctx.has(*inst):
        return None
    return ctx.T(phi) == all(ctx.T(x) for x in inst)


def _c_nall_sk(phi, ctx):
    neg = [Not(x) for x in _forall_body_instances(phi.body, ctx.M.bound)]
    if not ctx.has(*neg):
        return None
    return ctx.T(phi) == any(ctx.T(x) for x in neg)


def _c_nall_wk(phi, ctx):
    inst = _forall_body_instances(phi.body, ctx.M.bound)
    neg = [Not(x) for x in inst]
    if not ctx.has(*neg):
        return None
    tot = ctx.tot_all(inst)
    if tot is None:
        return None
    return ctx.T(phi) == (tot and any(ctx.T(x) for x in neg))


def _c_neg(phi, ctx):
    if not isinstance(phi, Not) or phi.body not in ctx.U:
        return None
    return ctx.T(phi) == (not ctx.T(phi.body))


@dataclass(frozen=True)
class Clause:
    clause_id: str
    description: str
    applies: Callable[[Formula], bool]
    check: Check


def _is_nor(phi):
    return isinstance(phi, Not) and isinstance(phi.body, Or)


def _is_nex(phi):
    return isinstance(phi, Not) and isinstance(phi.body, Exists)


def _is_dneg(phi):
    return isinstance(phi, Not) and isinstance(phi.body, Not)


def _is_nand(phi):
    return _is_dneg(phi) and _is_and(phi.body)


def _is_nall(phi):
    return _is_dneg(phi) and _is_forall(phi.body)


_COMMON_HEAD = [
    Clause("1a", "T(s=t) iff val s = val t", lambda f: isinstance(f, Eq), _c_eq),
    Clause("1b", "T(~s=t) iff val s != val t", lambda f: isinstance(f, Not) and isinstance(f.body, Eq), _c_neq),
]

PT_CLAUSES = _COMMON_HEAD + [
    Clause("2a", "T(a|b) iff T a or T b", lambda f: isinstance(f, Or), _c_or_sk),
    Clause("2b", "T(~(a|b)) iff T ~a and T ~b", _is_nor, _c_nor),
    Clause("3a", "T(E v f) iff some x: T f(x)", lambda f: isinstance(f, Exists), _c_ex_sk),
    Clause("3b", "T(~E v f) iff every x: T ~f(x)", _is_nex, _c_nex),
    Clause("4", "T(~~f) iff T f", _is_dneg, _c_dneg),
    Clause("and", "T(a&b) iff T a and T b", _is_and, _c_and),
    Clause("nand", "T(~(a&b)) iff T ~a or T ~b", _is_nand, _c_nand_sk),
    Clause("all", "T(A v f) iff every x: T f(x)", _is_forall, _c_all),
    Clause("nall", "T(~A v f) iff some x: T ~f(x)", _is_nall, _c_nall_sk),
]

WPT_CLAUSES = _COMMON_HEAD + [
    Clause("2a", "T(a|b) iff tot a and tot b and (T a or T b)", lambda f: isinstance(f, Or), _c_or_wk),
    Clause("2b", "T(~(a|b)) iff T ~a and T ~b", _is_nor, _c_nor),
    Clause("3a", "T(E v f) iff tot f(v) and some x: T f(x)", lambda f: isinstance(f, Exists), _c_ex_wk),
    Clause("3b", "T(~E v f) iff every x: T ~f(x)", _is_nex, _c_nex),
    Clause("4", "T(~~f) iff T f", _is_dneg, _c_dneg),
    Clause("and", "T(a&b) iff T a and T b", _is_and, _c_and),
    Clause("nand", "T(~(a&b)) iff tot a and tot b and (T ~a or T ~b)", _is_nand, _c_nand_wk),
    Clause("all", "T(A v f) iff every x: T f(x)", _is_forall, _c_all),
    Clause("nall", "T(~A v f) iff tot f(v) and some x: T ~f(x)", _is_nall, _c_nall_wk),
]

NEG_CLAUSES = [Clause("neg", "T(~f) iff not T f", lambda f: isinstance(f, Not), _c_neg)]

REGULARITY_ID = "5"
REGULARITY_DESCRIPTION = "val s = val t implies (T f(s) iff T f(t))"

_TABLES: Dict[str, List[Clause]] = {PT: PT_CLAUSES, WPT: WPT_CLAUSES, NEG: NEG_CLAUSES}


def _run_clauses(theory: str, clauses: Sequence[Clause], ctx: _Ctx) -> List[ClauseResult]:
    out = []
    for cl in clauses:
        checked = skipped = 0
        bad = []
        for phi in ctx.U:
            if not cl.applies(phi):
                continue
            r = cl.check(phi, ctx)
            if r is None:
                skipped += 1
                continue
            checked += 1
            if not r:
                bad.append(phi)
        out.append(ClauseResult(cl.clause_id, cl.description, checked, skipped, tuple(bad)))
    return out


# ---------------------------------------------------------------------------
# regularity


def _skeleton(phi: Formula):
    """(shape with closed terms abstracted, values of those terms, the terms)."""
    terms: List[Term] = []

    def term(t):
        if not t._fv:
            terms.append(t)
            return "*"
        if isinstance(t, Var):
            return ("v", t.index)
        if hasattr(t, "arg"):
            return ("S", term(t.arg))
        return (type(t).__name__, term(t.left), term(t.right))

    def form(f):
        if isinstance(f, Eq):
            return ("=", term(f.left), term(f.right))
        if isinstance(f, P):
            return ("P", term(f.arg))
        if isinstance(f, Not):
            return ("~", form(f.body))
        if isinstance(f, Or):
            return ("|", form(f.left), form(f.right))
        return ("E", f.var, form(f.body))

    shape = form(phi)
    return shape, tuple(val(t) for t in terms), terms


def regularity_pairs(U: SentenceUniverse) -> List[Tuple[Formula, Formula]]:
    """Members f(s), f(t) of U from one template f(x) with val s = val t, s != t.

    Two sentences are such a pair exactly when they agree except at maximal
    closed-term positions, all differing positions carry the same pair (s, t),
    and val s = val t.
    """
    buckets: Dict[tuple, List[Tuple[Formula, List[Term]]]] = {}
    for phi in U:
        shape, values, terms = _skeleton(phi)
        buckets.setdefault((shape, values), []).append((phi, terms))
    pairs = []
    for members in buckets.values():
        for i in range(len(members)):
            fi, ti = members[i]
            for j in range(i + 1, len(members)):
                fj, tj = members[j]
                diff = {(a, b) for a, b in zip(ti, tj) if a != b}
                if len(diff) == 1:
                    pairs.append((fi, fj))
    return pairs


def _regularity_result(ctx: _Ctx) -> ClauseResult:
    pairs = regularity_pairs(ctx.U)
    bad = tuple((a, b) for a, b in pairs if ctx.T(a) != ctx.T(b))
    return ClauseResult(REGULARITY_ID, REGULARITY_DESCRIPTION, len(pairs), 0, bad)


# ---------------------------------------------------------------------------
# the theories


def check_pt_minus(M: BoundedStructure, A, U: SentenceUniverse) -> AuditReport:
    ctx = _Ctx(M, A, U)
    return AuditReport(PT, tuple(_run_clauses(PT, PT_CLAUSES, ctx) + [_regularity_result(ctx)]))


def check_wpt_minus(M: BoundedStructure, A, U: SentenceUniverse) -> AuditReport:
    ctx = _Ctx(M, A, U)
    return AuditReport(WPT, tuple(_run_clauses(WPT, WPT_CLAUSES, ctx) + [_regularity_result(ctx)]))


def check_neg(M: BoundedStructure, A, U: SentenceUniverse) -> AuditReport:
    return AuditReport(NEG, tuple(_run_clauses(NEG, NEG_CLAUSES, _Ctx(M, A, U))))


def check_regularity(M: BoundedStructure, A, U: SentenceUniverse) -> AuditReport:
    return AuditReport(REG, (_regularity_result(_Ctx(M, A, U)),))


def check_utb(
    M: BoundedStructure,
    A,
    templates: Sequence[Formula],
    terms: Sequence[Term],
    U: Optional[SentenceUniverse] = None,
) -> AuditReport:
    """T(f(t0..tn)) iff f(val t0..val tn) for every template and term tuple.

    With a universe, instances outside it are skipped.
    """
    results = []
    for k, phi in enumerate(templates):
        if mentions_p(phi):
            raise ValueError("UTB templates must be P-free")
        fv = sorted(phi._fv)
        checked = skipped = 0
        bad = []
        for combo in product(terms, repeat=len(fv)):
            inst = instantiate(phi, combo)
            if U is not None and inst not in U:
                skipped += 1
                continue
            checked += 1
            sigma = {v: val(t) for v, t in zip(fv, combo)}
            if (inst in A) != eval_classical(phi, M, sigma):
                bad.append((inst, phi))
        results.append(ClauseResult(f"utb{k}", f"T({unparse(phi)}) iff its value", checked, skipped, tuple(bad)))
    return AuditReport(UTB, tuple(results))


# ---------------------------------------------------------------------------
# per-sentence compositionality and commutation with universal closure


def _cc_value(phi: Formula, ctx: _Ctx) -> Tuple[Optional[bool], List[Formula]]:
    M = ctx.M
    if isinstance(phi, Eq):
        return ctx.T(phi) == (val(phi.left) == val(phi.right)), []
    if isinstance(phi, P):
        return ctx.T(phi) == (val(phi.arg) in M.p_positive), []
    if isinstance(phi, Or):
        missing = [x for x in (phi.left, phi.right) if x not in ctx.U]
        if missing:
            return None, missing
        return ctx.T(phi) == (ctx.T(phi.left) or ctx.T(phi.right)), []
    if isinstance(phi, Not):
        if phi.body not in ctx.U:
            if isinstance(phi.body, Eq):
                # the atomic clause fixes T(s=t) to the arithmetic value
                return ctx.T(phi) == (val(phi.body.left) != val(phi.body.right)), []
            return None, [phi.body]
        return ctx.T(phi) == (not ctx.T(phi.body)), []
    inst = instances(phi, M.bound)
    missing = [x for x in inst if x not in ctx.U]
    if missing:
        return None, missing
    return ctx.T(phi) == any(ctx.T(x) for x in inst), []


def check_cc(M: BoundedStructure, A, U: SentenceUniverse, phi: Formula) -> bool:
    """Whether T is classically compositional at the sentence phi.

    The compositional disjunct matching phi's main connective decides; the
    regularity disjunct concerns formulas with a free variable and is not
    consulted for sentences.
    """
    if phi not in U:
        raise NotInUniverse("sentence not in universe", [phi])
    ok, missing = _cc_value(phi, _Ctx(M, A, U))
    if ok is None:
        raise NotInUniverse("compositional clause needs sentences outside the universe", missing)
    return ok


def check_cc_all(M: BoundedStructure, A, U: SentenceUniverse, max_depth: Optional[int] = None) -> AuditReport:
    ctx = _Ctx(M, A, U)
    checked = skipped = 0
    bad = []
    for phi in U:
        if max_depth is not None and depth(phi) > max_depth:
            continue
        ok, _ = _cc_value(phi, ctx)
        if ok is None:
            skipped += 1
        else:
            checked += 1
            if not ok:
                bad.append(phi)
    return AuditReport(CC, (ClauseResult("cc", "T classically compositional at the sentence", checked, skipped, tuple(bad)),))


def assignments(phi: Formula, M: BoundedStructure) -> List[Dict[int, int]]:
    fv = sorted(phi._fv)
    return [dict(zip(fv, xs)) for xs in product(M.domain, repeat=len(fv))]


def check_gc(M: BoundedStructure, A, U: SentenceUniverse, phi: Formula) -> bool:
    """T(ucl phi) iff T(phi[sigma]) for every assignment sigma over the domain."""
    closure = universal_closure(phi)
    insts = [apply_assignment(phi, s) for s in assignments(phi, M)]
    missing = [x for x in [closure, *insts] if x not in U]
    if missing:
        raise NotInUniverse("universal closure instances outside the universe", missing)
    return (closure in A) == all(x in A for x in insts)


def _strip_closure(phi: Formula) -> Optional[Formula]:
    """A matrix whose universal closure is phi, preferring the longest forall block."""
    cands = []
    cur = phi
    while _is_forall(cur):
        cur = cur.body.body.body
        cands.append(cur)
    for cand in reversed(cands):
        if cand._fv and universal_closure(cand) == phi:
            return cand
    return None


def check_gc_all(M: BoundedStructure, A, U: SentenceUniverse, formulas: Optional[Sequence[Formula]] = None) -> AuditReport:
    if formulas is None:
        formulas = [m for m in (_strip_closure(phi) for phi in U) if m is not None]
    checked = skipped = 0
    bad = []
    for phi in formulas:
        try:
            ok = check_gc(M, A, U, phi)
        except NotInUniverse:
            skipped += 1
            continue
        checked += 1
        if not ok:
            bad.append(phi)
    return AuditReport(GC, (ClauseResult("gc", "T(ucl f) iff every instance f[sigma] is true", checked, skipped, tuple(bad)),))


# ---------------------------------------------------------------------------
# induction


def induction_candidates(U: SentenceUniverse) -> List[Tuple[Formula, int]]:
    """One-variable formulas whose numeral instances all lie in U."""
    seen = set()
    out = []
    for phi in U:
        if isinstance(phi, Exists):
            cand = (phi.body, phi.var)
        elif _is_nex(phi):
            cand = (Not(phi.body.body), phi.body.var)
        else:
            continue
        if cand not in seen:
            seen.add(cand)
            out.append(cand)
    return out


def _int_report(theory: str, M, A, U, total_only: bool) -> AuditReport:
    ctx = _Ctx(M, A, U)
    checked = skipped = 0
    bad = []
    for body, v in induction_candidates(U):
        if total_only:
            inst = [subst_term(body, v, numeral(x)) for x in M.domain]
            tot = ctx.tot_all(inst)
            if tot is None:
                skipped += 1
                continue
            if not tot:
                continue
        checked += 1
        res = internal_induction_check(body, M, truth=A, var=v)
        if res.status is InductionStatus.VIOLATED:
            bad.append(body)
    desc = "internal induction" + (" for total formulas" if total_only else "")
    return AuditReport(theory, (ClauseResult(theory.lower(), desc, checked, skipped, tuple(bad)),))


def check_int(M: BoundedStructure, A, U: SentenceUniverse) -> AuditReport:
    return _int_report(INT, M, A, U, False)


def check_int_tot(M: BoundedStructure, A, U: SentenceUniverse) -> AuditReport:
    return _int_report(INT_TOT, M, A, U, True)


def induction_sentence(phi: Formula) -> Formula:
    fv = sorted(phi._fv)
    if len(fv) > 1:
        raise TooManyFreeVars(f"expected at most one free variable, found {fv}")
    return ind_instance(phi, fv[0] if fv else 0)


def check_truth_of_induction(M: BoundedStructure, A, U: SentenceUniverse, phis: Sequence[Formula]) -> AuditReport:
    sentences = [induction_sentence(phi) for phi in phis]
    missing = [s for s in sentences if s not in U]
    if missing:
        raise NotInUniverse("induction sentences outside the universe", missing)
    bad = tuple(phi for phi, s in zip(phis, sentences) if s not in A)
    return AuditReport(TIND, (ClauseResult("ind", "T(ind f)", len(phis), 0, bad),))


# ---------------------------------------------------------------------------
# replay


def recheck(theory: str, clause_id: str, witness, M: BoundedStructure, A, U: SentenceUniverse) -> bool:
    """Re-run one clause on one witness; True when the clause holds there."""
    ctx = _Ctx(M, A, U)
    if clause_id == REGULARITY_ID:
        a, b = witness
        return ctx.T(a) == ctx.T(b)
    if theory in _TABLES:
        for cl in _TABLES[theory]:
            if cl.clause_id == clause_id:
                if not cl.applies(witness):
                    raise ValueError(f"clause {clause_id} does not concern {unparse(witness)}")
                r = cl.check(witness, ctx)
                if r is None:
                    raise NotInUniverse("clause needs sentences outside the universe", [witness])
                return r
        raise KeyError(clause_id)
    if theory == UTB:
        inst, template = witness
        binding = match_template(template, inst)
        if binding is None:
            raise ValueError("witness is not an instance of the template")
        return (inst in A) == template_truth(template, binding, M)
    if theory == CC:
        return check_cc(M, A, U, witness)
    if theory == GC:
        return check_gc(M, A, U, witness)
    if theory in (INT, INT_TOT):
        fv = sorted(witness._fv)
        res = internal_induction_check(witness, M, truth=A, var=fv[0] if fv else None)
        return res.status is not InductionStatus.VIOLATED
    if theory == TIND:
        return induction_sentence(witness) in A
    raise KeyError(theory)
