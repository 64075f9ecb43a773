"""The one-step truth operator, its stage iteration and the least fixpoint.

Everything is restricted to a finite :class:`SentenceUniverse`, closed under
exactly the sentences the operator consults.  Over such a universe the
iteration ``G_0 = Gamma({})``, ``G_{n+1} = Gamma(G_n)`` reaches its least
fixpoint after finitely many full passes.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import NotInUniverse, UniverseTooLarge
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
    alpha_key,
    depth,
    mentions_p,
    numeral,
    subst_term,
)

DEFAULT_UNIVERSE_CAP = 10**6
CAP_ENV = "TRUTHLAB_CAP_UNIVERSE"

# clause kinds of the one-step operator
EQ, NEQ, PPOS, PNEG, DNEG, OR, NOR, EX, NEX = range(9)


def universe_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw:
        cap = int(raw)
        if cap <= 0:
            raise ValueError(f"{CAP_ENV} must be positive")
        return cap
    return DEFAULT_UNIVERSE_CAP


def instances(phi: Exists, bound: int) -> List[Formula]:
    """body[v := x] for every x in {0..bound}."""
    return [subst_term(phi.body, phi.var, numeral(x)) for x in range(bound + 1)]


def _classify(phi: Formula, bound: int):
    """(kind, sentences consulted by the operator) for one sentence."""
    if isinstance(phi, Eq):
        return EQ, ()
    if isinstance(phi, P):
        return PPOS, ()
    if isinstance(phi, Or):
        return OR, (phi.left, phi.right)
    if isinstance(phi, Exists):
        return EX, tuple(instances(phi, bound))
    body = phi.body
    if isinstance(body, Eq):
        return NEQ, ()
    if isinstance(body, P):
        return PNEG, ()
    if isinstance(body, Not):
        return DNEG, (body.body,)
    if isinstance(body, Or):
        return NOR, (Not(body.left), Not(body.right))
    return NEX, tuple(Not(x) for x in instances(body, bound))


class SentenceUniverse:
    """A finite set of sentences closed under what the operator consults.

    With ``negation_closed`` the universe also contains the negation of every
    member that is not itself a negation, and the negatum of every negation,
    so that totality (phi or ~phi true) can be read off a truth set.
    """

    def __init__(self, structure: BoundedStructure, members, clauses, order, negation_closed):
        self.structure = structure
        self.members: FrozenSet[Formula] = frozenset(members)
        self._clauses = clauses
        self._order = order
        self.negation_closed = negation_closed
        self._atoms: Dict[Formula, bool] = {}

    def __contains__(self, phi) -> bool:
        return phi in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self._order)

    def clause(self, phi: Formula):
        try:
            return self._clauses[phi]
        except KeyError:
            raise NotInUniverse(f"sentence not in universe", [phi]) from None

    def atom_true(self, phi: Formula) -> bool:
        """Truth of the atomic Theta clause for an (in)equation or P-literal."""
        cached = self._atoms.get(phi)
        if cached is not None:
            return cached
        kind, _ = self.clause(phi)
        M = self.structure
        if kind == EQ:
            out = val(phi.left) == val(phi.right)
        elif kind == NEQ:
            out = val(phi.body.left) != val(phi.body.right)
        elif kind == PPOS:
            out = val(phi.arg) in M.p_positive
        elif kind == PNEG:
            out = val(phi.body.arg) in M.p_negative
        else:
            raise ValueError("not an atomic clause")
        self._atoms[phi] = out
        return out


def build_universe(
    seed: Iterable[Formula],
    structure: BoundedStructure,
    cap: Optional[int] = None,
    negation_closed: bool = False,
) -> SentenceUniverse:
    """Least set containing the seed and closed under the operator's lookups."""
    cap = universe_cap() if cap is None else cap
    clauses: Dict[Formula, tuple] = {}
    order: List[Formula] = []
    queue = deque()

    def add(phi: Formula):
        if phi not in clauses:
            if phi._fv:
                raise ValueError("universe members must be sentences")
            if len(clauses) >= cap:
                raise UniverseTooLarge(f"universe exceeds the cap of {cap} sentences")
            clauses[phi] = None
            order.append(phi)
            queue.append(phi)

    for phi in seed:
        add(phi)
    while queue:
        phi = queue.popleft()
        kind, deps = _classify(phi, structure.bound)
        clauses[phi] = (kind, deps)
        for d in deps:
            add(d)
        if negation_closed:
            if isinstance(phi, Not):
                add(phi.body)
            else:
                add(Not(phi))
    return SentenceUniverse(structure, clauses.keys(), clauses, order, negation_closed)


# ---------------------------------------------------------------------------
# the operator


def _check(M: Optional[BoundedStructure], U: SentenceUniverse):
    if M is not None and M != U.structure:
        raise ValueError("structure differs from the one the universe was built over")


def _theta(phi: Formula, A, U: SentenceUniverse) -> bool:
    kind, deps = U.clause(phi)
    if kind <= PNEG:
        return U.atom_true(phi)
    if kind == DNEG:
        return deps[0] in A
    if kind in (OR, EX):
        return any(d in A for d in deps)
    return all(d in A for d in deps)


def theta(phi: Formula, A, M: Optional[BoundedStructure], U: SentenceUniverse) -> bool:
    """Whether phi enters the next stage given the current truth set A."""
    _check(M, U)
    return _theta(phi, A, U)


def gamma(A, M: Optional[BoundedStructure], U: SentenceUniverse) -> FrozenSet[Formula]:
    _check(M, U)
    return frozenset(phi for phi in U if _theta(phi, A, U))


@dataclass(frozen=True)
class FixpointTrace:
    entry_stage: Mapping[Formula, int]
    total_stages: int

    def stage_sets(self) -> List[FrozenSet[Formula]]:
        """G_0, ..., G_total as cumulative sets."""
        out = []
        for n in range(self.total_stages + 1):
            out.append(frozenset(phi for phi, s in self.entry_stage.items() if s <= n))
        return out


def least_fixpoint(U: SentenceUniverse, M: Optional[BoundedStructure] = None):
    """Iterate full passes of the operator from the empty set until stable.

    Returns (fixpoint, trace); ``trace.total_stages`` is the least n with
    G_{n+1} = G_n.
    """
    _check(M, U)
    entry: Dict[Formula, int] = {}
    current = frozenset()
    stage = 0
    while True:
        nxt = frozenset(phi for phi in U if _theta(phi, current, U))
        if stage > 0 and nxt == current:
            return current, FixpointTrace(entry, stage - 1)
        for phi in nxt:
            if phi not in entry:
                entry[phi] = stage
        if stage == 0 and not nxt:
            return nxt, FixpointTrace(entry, 0)
        current = nxt
        stage += 1


# ---------------------------------------------------------------------------
# template matching and the Tr construction


def match_template(template: Formula, psi: Formula) -> Optional[Dict[int, Term]]:
    """Closed terms t with template[x := t] == psi (syntactically), or None."""
    binding: Dict[int, Term] = {}

    def terms(a: Term, b: Term, bound: FrozenSet[int]) -> bool:
        if isinstance(a, Var) and a.index not in bound:
            if b._fv:
                return False
            prev = binding.get(a.index)
            if prev is None:
                binding[a.index] = b
                return True
            return prev == b
        if not a._fv - bound:
            return a == b
        if type(a) is not type(b):
            return False
        if isinstance(a, Var):
            return a == b
        if hasattr(a, "arg"):
            return terms(a.arg, b.arg, bound)
        return terms(a.left, b.left, bound) and terms(a.right, b.right, bound)

    def forms(a: Formula, b: Formula, bound: FrozenSet[int]) -> bool:
        if type(a) is not type(b):
            return False
        if not a._fv:
            return a == b
        if isinstance(a, Eq):
            return terms(a.left, b.left, bound) and terms(a.right, b.right, bound)
        if isinstance(a, P):
            return terms(a.arg, b.arg, bound)
        if isinstance(a, Not):
            return forms(a.body, b.body, bound)
        if isinstance(a, Or):
            return forms(a.left, b.left, bound) and forms(a.right, b.right, bound)
        return a.var == b.var and forms(a.body, b.body, bound | {a.var})

    if forms(template, psi, frozenset()):
        return binding
    return None


@dataclass(frozen=True)
class TemplateClass:
    """All P-free formulas of depth <= max_depth with <= max_free_vars free variables.

    Depth is invariant under substituting terms, and every sentence is a
    template for itself, so psi instantiates some member of the class exactly
    when psi is P-free with depth <= max_depth.
    """

    max_depth: int
    max_free_vars: int = 2

    def admits(self, psi: Formula) -> bool:
        return not mentions_p(psi) and depth(psi) <= self.max_depth


Templates = Union[TemplateClass, Sequence[Formula]]


def template_truth(template: Formula, binding: Mapping[int, Term], M: BoundedStructure) -> bool:
    """Classical value of the template at the values of the matched terms."""
    sigma = {v: val(t) for v, t in binding.items()}
    return eval_classical(template, M, sigma)


def tr_prime(M: BoundedStructure, templates: Templates, U: SentenceUniverse) -> FrozenSet[Formula]:
    out = set()
    for psi in U:
        if mentions_p(psi):
            continue
        if isinstance(templates, TemplateClass):
            if templates.admits(psi) and eval_classical(psi, M):
                out.add(psi)
            continue
        for phi in templates:
            binding = match_template(phi, psi)
            if binding is not None and set(binding) == set(phi._fv) and template_truth(phi, binding, M):
                out.add(psi)
                break
    return frozenset(out)


def tr_construction(M: BoundedStructure, templates: Templates, U: SentenceUniverse) -> FrozenSet[Formula]:
    """True template instances in U, closed under alpha-conversion within U."""
    _check(M, U)
    base = tr_prime(M, templates, U)
    keys = {alpha_key(psi) for psi in base}
    return frozenset(psi for psi in U if psi in base or alpha_key(psi) in keys)
