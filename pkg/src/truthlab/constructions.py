"""Formula families: stopping-condition disjunctions, the tau family,
theta-chains, type-omission families, and internal induction checks.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Set

from .coding import decode, decode_term_sequence, encode, encode_term_sequence
from .errors import CapExceeded, EmptyList, IndexOutOfRange, LengthMismatch, TooManyFreeVars
from .semantics import BoundedStructure, Scheme, TruthValue3, eval3
from .syntax import (
    Add,
    Eq,
    Formula,
    Not,
    Or,
    Term,
    Var,
    ZERO,
    all_vars,
    and_,
    big_and,
    big_or,
    binary_numeral,
    lt,
    mentions_p,
    numeral,
    rename_free,
    size,
    subst_many,
    subst_term,
)

DEFAULT_FORMULA_CAP = 10**5

FALLBACK = Eq(ZERO, ZERO)


# ---------------------------------------------------------------------------
# stopping-condition disjunction


def stopping_disjunction(alphas: Sequence[Formula], betas: Sequence[Formula], i0: int = 0) -> Formula:
    """Nested disjunction reporting the beta at the first true alpha.

    Built backwards from ``and(alpha_c, beta_c)``; each earlier step is
    ``~(a & ~b) & ((a & b) | (~a & rest))``.
    """
    if len(alphas) != len(betas):
        raise LengthMismatch(f"{len(alphas)} alphas but {len(betas)} betas")
    if not alphas:
        raise EmptyList("at least one (alpha, beta) pair is needed")
    c = len(alphas) - 1
    if not 0 <= i0 <= c:
        raise IndexOutOfRange(f"start index {i0} outside 0..{c}")
    out = and_(alphas[c], betas[c])
    for k in range(c - 1, i0 - 1, -1):
        a, b = alphas[k], betas[k]
        out = and_(Not(and_(a, Not(b))), Or(and_(a, b), and_(Not(a), out)))
    return out


@dataclass(frozen=True)
class StoppingCheck:
    value: TruthValue3
    negation_value: TruthValue3
    first_true: Optional[int]
    beta_value: Optional[TruthValue3]
    negated_beta_value: Optional[TruthValue3]
    applicable: bool
    prefix_refuted: bool

    @property
    def status(self) -> str:
        if not self.applicable:
            return "NotApplicable"
        return "Agrees" if self.agrees else "Disagrees"

    @property
    def agrees(self) -> Optional[bool]:
        """Equivalence of both biconditionals; None when not applicable."""
        if not self.applicable:
            return None
        return self.value is self.beta_value and self.negation_value is self.negated_beta_value


def check_stopping_semantics(
    alphas: Sequence[Formula],
    betas: Sequence[Formula],
    M: BoundedStructure,
    scheme: Scheme = Scheme.STRONG,
    disjunction: Optional[Formula] = None,
) -> StoppingCheck:
    """Evaluate the disjunction and, independently, the beta at the first true alpha.

    ``applicable`` is the stated precondition: some alpha is True and every
    beta up to that index is decided.  ``prefix_refuted`` records whether all
    earlier alphas are False, which the equivalence needs in addition.
    A prebuilt ``disjunction`` of the same lists may be passed to save work.
    """
    disj = disjunction if disjunction is not None else stopping_disjunction(alphas, betas, 0)
    value = eval3(disj, M, scheme)
    negation = eval3(Not(disj), M, scheme)
    avals = [eval3(a, M, scheme) for a in alphas]
    j0 = next((j for j, v in enumerate(avals) if v is TruthValue3.TRUE), None)
    if j0 is None:
        return StoppingCheck(value, negation, None, None, None, False, False)
    bvals = [eval3(b, M, scheme) for b in betas[: j0 + 1]]
    bj = bvals[j0]
    nbj = eval3(Not(betas[j0]), M, scheme)
    applicable = all(v.decided for v in bvals)
    prefix = all(v is TruthValue3.FALSE for v in avals[:j0])
    return StoppingCheck(value, negation, j0, bj, nbj, applicable, prefix)


# ---------------------------------------------------------------------------
# enumeration and the tau family


def enumerate_formula(i: int) -> Formula:
    """The formula coded by i if it is P-free, otherwise 0 = 0."""
    x = decode(i)
    if isinstance(x, Formula) and not mentions_p(x):
        return x
    return FALLBACK


def instantiate(phi: Formula, terms: Sequence[Term]) -> Formula:
    """phi with its free variables, in ascending order, replaced by terms."""
    fv = sorted(phi._fv)
    if len(fv) != len(terms):
        raise LengthMismatch(f"{len(fv)} free variables but {len(terms)} terms")
    return subst_many(phi, dict(zip(fv, terms)))


def le_numerals(i: int, b: int) -> Formula:
    """i <= b between numerals, as the bounded search  OR_{w <= b} (i + w = b)."""
    nb = numeral(b)
    ni = numeral(i)
    return big_or([Eq(Add(ni, numeral(w)), nb) for w in range(b + 1)])


@dataclass(frozen=True)
class TauFamily:
    """The tau family for a fixed bound b and shape parameter c.

    tau is built per closed instance: ``tau(p, q)`` fixes the formula code p
    and the term-sequence code q.  The arithmetized side conditions ("q codes
    a sequence of closed terms of the right length", "p codes phi_i(q)") are
    decided here and written into the formula as equations between binary
    numerals, so the result stays a small standard sentence.
    """

    b: int
    c: int
    enumeration: Callable[[int], Formula] = enumerate_formula
    cap: int = DEFAULT_FORMULA_CAP

    def __post_init__(self):
        if self.b < 0 or self.c < 0:
            raise ValueError("b and c must be natural numbers")

    def phi(self, i: int) -> Formula:
        return self.enumeration(i)

    def _terms(self, i: int, q: int):
        terms = decode_term_sequence(q)
        if terms is None or len(terms) != len(self.phi(i)._fv):
            return None
        return terms

    def target_code(self, i: int, q: int) -> int:
        """Code of phi_i at the terms coded by q, or 0 (no formula has code 0)."""
        terms = self._terms(i, q)
        return 0 if terms is None else encode(instantiate(self.phi(i), terms))

    def alpha_prime(self, i: int, p: int, q: int) -> Formula:
        return Eq(binary_numeral(p), binary_numeral(self.target_code(i, q)))

    def beta_prime(self, i: int, q: int) -> Formula:
        terms = self._terms(i, q)
        ok = Eq(binary_numeral(0 if terms is None else 1), numeral(1))
        if terms is None:
            return and_(ok, ok)
        return and_(ok, instantiate(self.phi(i), terms))

    def alpha(self, i: int, p: int, q: int) -> Formula:
        self._index(i)
        return Or(self.alpha_prime(i, p, q), Not(le_numerals(i, self.b)))

    def beta(self, i: int, q: int) -> Formula:
        self._index(i)
        return and_(self.beta_prime(i, q), le_numerals(i, self.b))

    def tau(self, p: int, q: int) -> Formula:
        alphas = [self.alpha(i, p, q) for i in range(self.c + 1)]
        betas = [self.beta(i, q) for i in range(self.c + 1)]
        out = stopping_disjunction(alphas, betas, 0)
        n = size(out)
        if n > self.cap:
            raise CapExceeded(f"tau has {n} nodes, cap is {self.cap}")
        return out

    def tau_at(self, phi: Formula, terms: Sequence[Term]) -> Formula:
        """tau at the codes of phi and of the term sequence."""
        return self.tau(encode(phi), encode_term_sequence(terms))

    def _index(self, i: int):
        if not 0 <= i <= self.c:
            raise IndexOutOfRange(f"index {i} outside 0..{self.c}")


def tau_family(b: int, c: int, enumeration: Callable[[int], Formula] = enumerate_formula) -> TauFamily:
    return TauFamily(b, c, enumeration)


def listing(formulas: Sequence[Formula]) -> Callable[[int], Formula]:
    """An enumeration that lists the given formulas first, then falls back."""
    items = list(formulas)

    def enum(i: int) -> Formula:
        return items[i] if i < len(items) else FALLBACK

    return enum


# ---------------------------------------------------------------------------
# theta chains and omission families


def theta_chain(psis: Sequence[Formula], x: int = 0) -> Formula:
    """psi_0 | (psi_1 | ... (psi_last | ~(x = x)))."""
    if not psis:
        raise EmptyList("theta chain needs at least one formula")
    out: Formula = Not(Eq(Var(x), Var(x)))
    for psi in reversed(psis):
        out = Or(psi, out)
    return out


@dataclass(frozen=True)
class OmissionFamily:
    """alpha_j(x) measures how far x < a realises phi_0, phi_1, ...; beta_j(y) likewise for y."""

    phis: tuple
    a_bound: int
    x: int = 0
    y: int = 1
    witness: int = 2

    def _lt(self, v: int) -> Formula:
        return lt(Var(v), numeral(self.a_bound), self.witness)

    def alpha(self, j: int) -> Formula:
        if not 0 <= j < len(self.phis):
            raise IndexOutOfRange(f"alpha index {j} outside 0..{len(self.phis) - 1}")
        if j == 0:
            return Or(Not(self._lt(self.x)), Not(self.phis[0]))
        return big_and([self._lt(self.x), *self.phis[:j], Not(self.phis[j])])

    def beta(self, j: int) -> Formula:
        if not 0 <= j <= len(self.phis) - 2:
            raise IndexOutOfRange(f"beta index {j} outside 0..{len(self.phis) - 2}")
        moved = [rename_free(phi, self.x, self.y) for phi in self.phis[: j + 2]]
        return big_and([self._lt(self.y), *moved])


def omission_family(phis: Sequence[Formula], a_bound: int, x: int = 0, y: int = 1) -> OmissionFamily:
    if not phis:
        raise EmptyList("omission family needs at least one formula")
    used: Set[int] = {x, y}
    for phi in phis:
        used |= all_vars(phi)
    return OmissionFamily(tuple(phis), a_bound, x, y, max(used) + 1)


# ---------------------------------------------------------------------------
# internal induction


class InductionStatus(enum.Enum):
    HOLDS = "Holds"
    PREMISE_FAILS = "PremiseFails"
    VIOLATED = "Violated"


@dataclass(frozen=True)
class InductionResult:
    status: InductionStatus
    witness: Optional[int] = None


def internal_induction_check(
    phi: Formula,
    M: BoundedStructure,
    scheme: Scheme = Scheme.STRONG,
    truth=None,
    var: Optional[int] = None,
) -> InductionResult:
    """Induction for phi stated through the truth predicate.

    T(psi) is ``eval3(psi) is True`` unless a truth set is supplied, in which
    case it is membership.  Violated carries the least x with T(phi(x)) failing.
    """
    fv = phi._fv
    if len(fv) > 1:
        raise TooManyFreeVars(f"expected at most one free variable, found {sorted(fv)}")
    if var is not None and fv - {var}:
        raise TooManyFreeVars(f"free variables {sorted(fv)} besides v{var}")
    v = var if var is not None else (next(iter(fv)) if fv else 0)

    def true_at(x: int) -> bool:
        inst = subst_term(phi, v, numeral(x))
        if truth is None:
            return eval3(inst, M, scheme) is TruthValue3.TRUE
        return inst in truth

    vals = [true_at(x) for x in M.domain]
    progressive = all(not vals[x] or vals[x + 1] for x in range(M.bound))
    if not (vals[0] and progressive):
        return InductionResult(InductionStatus.PREMISE_FAILS)
    for x, ok in enumerate(vals):
        if not ok:
            return InductionResult(InductionStatus.VIOLATED, x)
    return InductionResult(InductionStatus.HOLDS)
