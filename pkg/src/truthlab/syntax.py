"""Terms and formulas of the language of PA, optionally with one unary predicate P.

The core grammar is ``0 | S(t) | t + t | t * t | v_k`` for terms and
``t = t | P(t) | ~f | f | f | E v_k f`` for formulas.  Conjunction, the
universal quantifier and implication are contextual abbreviations that
expand into the core grammar at construction time.

Nodes are immutable and hashable.  Every node caches its hash and its set of
free variables, so those lookups are O(1) regardless of the node's size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, Mapping, Union

from .errors import AssignmentMismatch, CaptureError, NotSemirelational

_EMPTY: FrozenSet[int] = frozenset()


class Node:
    """Shared hashing/equality for syntax nodes (structural, hash-checked)."""

    __slots__ = ()

    def _parts(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        return self._h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._h != other._h:
            return False
        return self._parts() == other._parts()

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def _finish(self, fv: FrozenSet[int]) -> None:
        object.__setattr__(self, "_fv", fv)
        object.__setattr__(self, "_h", hash((type(self).__name__,) + self._parts()))


# ---------------------------------------------------------------------------
# terms


class Term(Node):
    __slots__ = ()

    @property
    def is_closed(self) -> bool:
        return not self._fv


@dataclass(frozen=True, eq=False, repr=False)
class Zero(Term):
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)

    def __post_init__(self):
        self._finish(_EMPTY)

    def _parts(self):
        return ()

    def __repr__(self):
        return "Zero()"


@dataclass(frozen=True, eq=False, repr=False)
class Succ(Term):
    arg: Term
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)

    def __post_init__(self):
        self._finish(self.arg._fv)

    def _parts(self):
        return (self.arg,)

    def __repr__(self):
        return f"Succ({self.arg!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Add(Term):
    left: Term
    right: Term
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)

    def __post_init__(self):
        self._finish(self.left._fv | self.right._fv)

    def _parts(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Add({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Mul(Term):
    left: Term
    right: Term
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)

    def __post_init__(self):
        self._finish(self.left._fv | self.right._fv)

    def _parts(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Mul({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    index: int
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be a natural number")
        self._finish(frozenset((self.index,)))

    def _parts(self):
        return (self.index,)

    def __repr__(self):
        return f"Var({self.index})"


ZERO = Zero()


# ---------------------------------------------------------------------------
# formulas


class Formula(Node):
    __slots__ = ()

    @property
    def is_sentence(self) -> bool:
        return not self._fv


@dataclass(frozen=True, eq=False, repr=False)
class Eq(Formula):
    left: Term
    right: Term
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    _has_p: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_depth", 0)
        object.__setattr__(self, "_has_p", False)
        self._finish(self.left._fv | self.right._fv)

    def _parts(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Eq({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class P(Formula):
    arg: Term
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    _has_p: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_depth", 0)
        object.__setattr__(self, "_has_p", True)
        self._finish(self.arg._fv)

    def _parts(self):
        return (self.arg,)

    def __repr__(self):
        return f"P({self.arg!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Not(Formula):
    body: Formula
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    _has_p: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_depth", self.body._depth + 1)
        object.__setattr__(self, "_has_p", self.body._has_p)
        self._finish(self.body._fv)

    def _parts(self):
        return (self.body,)

    def __repr__(self):
        return f"Not({self.body!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    _has_p: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_depth", max(self.left._depth, self.right._depth) + 1)
        object.__setattr__(self, "_has_p", self.left._has_p or self.right._has_p)
        self._finish(self.left._fv | self.right._fv)

    def _parts(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Formula):
    var: int
    body: Formula
    _h: int = field(init=False, compare=False)
    _fv: FrozenSet[int] = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    _has_p: bool = field(init=False, compare=False)

    def __post_init__(self):
        if self.var < 0:
            raise ValueError("variable index must be a natural number")
        object.__setattr__(self, "_depth", self.body._depth + 1)
        object.__setattr__(self, "_has_p", self.body._has_p)
        self._finish(self.body._fv - {self.var})

    def _parts(self):
        return (self.var, self.body)

    def __repr__(self):
        return f"Exists({self.var}, {self.body!r})"


Syntax = Union[Term, Formula]
Assignment = Mapping[int, int]


# ---------------------------------------------------------------------------
# basic measures


def numeral(n: int) -> Term:
    """The standard numeral S(S(...S(0)...)) with n successors."""
    if n < 0:
        raise ValueError("numerals denote natural numbers")
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def _small_binary(n: int) -> Term:
    if n == 0:
        return ZERO
    two = Succ(Succ(ZERO))
    t: Term = Succ(ZERO)
    for bit in bin(n)[3:]:
        t = Mul(two, t)
        if bit == "1":
            t = Succ(t)
    return t


_BLOCK_BITS = 32


def _power_of_two(k: int) -> Term:
    if k <= _BLOCK_BITS:
        return _small_binary(1 << k)
    half = _power_of_two(k // 2)
    out = Mul(half, half)
    return Mul(numeral(2), out) if k % 2 else out


@lru_cache(maxsize=4096)
def binary_numeral(n: int) -> Term:
    """A closed term with value n, shallow even for huge n.

    Up to 32 bits this is the Horner scheme over 2*x and 2*x + 1.  Longer
    values split as n = hi * 2^k + lo at half their bit length, with 2^k
    built by repeated squaring, so depth grows like log^2 of the bit length
    and size like bits * log(bits).  Goedel codes stay representable as terms.
    """
    if n < 0:
        raise ValueError("numerals denote natural numbers")
    bits = n.bit_length()
    if bits <= _BLOCK_BITS:
        return _small_binary(n)
    k = bits // 2
    hi, lo = n >> k, n & ((1 << k) - 1)
    return Add(Mul(_power_of_two(k), binary_numeral(hi)), binary_numeral(lo))


def numeral_value(t: Term):
    """n if t is exactly the standard numeral for n, else None."""
    n = 0
    while isinstance(t, Succ):
        t = t.arg
        n += 1
    return n if isinstance(t, Zero) else None


def free_vars(x: Syntax) -> FrozenSet[int]:
    return x._fv


def depth(phi: Formula) -> int:
    """Longest chain of logical nodes (~, |, E); atoms have depth 0."""
    return phi._depth


def mentions_p(phi: Formula) -> bool:
    return phi._has_p


def iter_subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, Succ):
            stack.append(cur.arg)
        elif isinstance(cur, (Add, Mul)):
            stack.append(cur.right)
            stack.append(cur.left)


def iter_subformulas(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, (Not, Exists)):
            stack.append(cur.body)
        elif isinstance(cur, Or):
            stack.append(cur.right)
            stack.append(cur.left)


def atom_terms(phi: Formula) -> Iterator[Term]:
    for sub in iter_subformulas(phi):
        if isinstance(sub, Eq):
            yield sub.left
            yield sub.right
        elif isinstance(sub, P):
            yield sub.arg


def all_vars(phi: Formula) -> FrozenSet[int]:
    """Every variable index occurring in phi, free or bound (binders included)."""
    out = set()
    for sub in iter_subformulas(phi):
        if isinstance(sub, Exists):
            out.add(sub.var)
        elif isinstance(sub, (Eq, P)):
            out |= sub._fv
    return frozenset(out)


def size(x: Syntax) -> int:
    """Number of nodes, terms included."""
    if isinstance(x, Term):
        return sum(1 for _ in iter_subterms(x))
    n = 0
    for sub in iter_subformulas(x):
        n += 1
        if isinstance(sub, Eq):
            n += size(sub.left) + size(sub.right)
        elif isinstance(sub, P):
            n += size(sub.arg)
    return n


def height(x: Syntax) -> int:
    """Height of the full syntax tree (terms included); a leaf has height 1."""
    if isinstance(x, (Zero, Var)):
        return 1
    if isinstance(x, Succ):
        h = 0
        while isinstance(x, Succ):
            x = x.arg
            h += 1
        return h + height(x)
    if isinstance(x, (Add, Mul, Eq, Or)):
        return 1 + max(height(x.left), height(x.right))
    if isinstance(x, (P,)):
        return 1 + height(x.arg)
    if isinstance(x, Exists):
        return 1 + max(1, height(x.body))
    return 1 + height(x.body)


# ---------------------------------------------------------------------------
# contextual abbreviations


def and_(phi: Formula, psi: Formula) -> Formula:
    return Not(Or(Not(phi), Not(psi)))


def forall(v: int, phi: Formula) -> Formula:
    return Not(Exists(v, Not(phi)))


def implies(phi: Formula, psi: Formula) -> Formula:
    return Or(Not(phi), psi)


def neq(s: Term, t: Term) -> Formula:
    return Not(Eq(s, t))


def lt(s: Term, t: Term, witness: int) -> Formula:
    """s < t as E w (s + S(w) = t); ``witness`` must not occur in s or t."""
    if witness in s._fv or witness in t._fv:
        raise CaptureError(f"witness variable v{witness} occurs in the compared terms")
    return Exists(witness, Eq(Add(s, Succ(Var(witness))), t))


def big_and(parts) -> Formula:
    """Right-nested conjunction of a nonempty sequence."""
    parts = list(parts)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = and_(p, out)
    return out


def big_or(parts) -> Formula:
    parts = list(parts)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


# ---------------------------------------------------------------------------
# substitution


def _subst_in_term(t: Term, v: int, s: Term) -> Term:
    if v not in t._fv:
        return t
    if isinstance(t, Var):
        return s
    if isinstance(t, Succ):
        return Succ(_subst_in_term(t.arg, v, s))
    return type(t)(_subst_in_term(t.left, v, s), _subst_in_term(t.right, v, s))


def subst_term(phi: Formula, v: int, t: Term) -> Formula:
    """Replace the free occurrences of v in phi by t.

    Raises CaptureError when a variable of t would fall under a binder.
    """
    if v not in phi._fv:
        return phi
    if isinstance(phi, Eq):
        return Eq(_subst_in_term(phi.left, v, t), _subst_in_term(phi.right, v, t))
    if isinstance(phi, P):
        return P(_subst_in_term(phi.arg, v, t))
    if isinstance(phi, Not):
        return Not(subst_term(phi.body, v, t))
    if isinstance(phi, Or):
        return Or(subst_term(phi.left, v, t), subst_term(phi.right, v, t))
    # Exists with v free in the body, so the body really gets rewritten
    if phi.var in t._fv:
        raise CaptureError(f"substituting for v{v} would capture v{phi.var}")
    return Exists(phi.var, subst_term(phi.body, v, t))


def subst_many(phi: Formula, mapping: Mapping[int, Term]) -> Formula:
    """Simultaneous substitution of closed terms for variables."""
    for t in mapping.values():
        if t._fv:
            raise CaptureError("simultaneous substitution requires closed terms")
    relevant = {v: t for v, t in mapping.items() if v in phi._fv}
    if not relevant:
        return phi
    return _subst_closed(phi, relevant)


def _subst_closed_term(t: Term, mapping) -> Term:
    if not (t._fv & mapping.keys()):
        return t
    if isinstance(t, Var):
        return mapping[t.index]
    if isinstance(t, Succ):
        return Succ(_subst_closed_term(t.arg, mapping))
    return type(t)(_subst_closed_term(t.left, mapping), _subst_closed_term(t.right, mapping))


def _subst_closed(phi: Formula, mapping) -> Formula:
    if not (phi._fv & mapping.keys()):
        return phi
    if isinstance(phi, Eq):
        return Eq(_subst_closed_term(phi.left, mapping), _subst_closed_term(phi.right, mapping))
    if isinstance(phi, P):
        return P(_subst_closed_term(phi.arg, mapping))
    if isinstance(phi, Not):
        return Not(_subst_closed(phi.body, mapping))
    if isinstance(phi, Or):
        return Or(_subst_closed(phi.left, mapping), _subst_closed(phi.right, mapping))
    if phi.var in mapping:
        mapping = {k: t for k, t in mapping.items() if k != phi.var}
    return Exists(phi.var, _subst_closed(phi.body, mapping))


def apply_assignment(phi: Formula, sigma: Assignment) -> Formula:
    """phi[sigma]: replace each free variable by the numeral of its value."""
    if set(sigma) != set(phi._fv):
        raise AssignmentMismatch(
            f"assignment domain {sorted(sigma)} differs from free variables {sorted(phi._fv)}"
        )
    return subst_many(phi, {v: numeral(n) for v, n in sigma.items()})


def rename_free(phi: Formula, old: int, new: int) -> Formula:
    """Rename free occurrences of variable ``old`` to ``new``, renaming binders of ``new`` first."""
    if old == new or old not in phi._fv:
        return phi
    phi = rename_bound_away(phi, {new})
    return subst_term(phi, old, Var(new))


def rename_bound_away(phi: Formula, avoid) -> Formula:
    """Alpha-rename every binder whose variable is in ``avoid``."""
    avoid = set(avoid)
    if not avoid:
        return phi
    fresh = [max(all_vars(phi) | avoid | {-1}) + 1]

    def go(f: Formula) -> Formula:
        if isinstance(f, (Eq, P)):
            return f
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, Or):
            return Or(go(f.left), go(f.right))
        body = go(f.body)
        if f.var in avoid:
            w = fresh[0]
            fresh[0] += 1
            return Exists(w, subst_term(body, f.var, Var(w)))
        return Exists(f.var, body)

    return go(phi)


# ---------------------------------------------------------------------------
# alpha-equivalence


def _term_key(t: Term, env: Dict[int, int], level: int):
    if isinstance(t, Var):
        if t.index in env:
            return ("b", level - env[t.index])
        return ("f", t.index)
    if isinstance(t, Zero):
        return ("0",)
    if not t._fv:
        # closed subterms need no renaming; the term itself is a canonical key
        return ("c", t)
    if isinstance(t, Succ):
        return ("S", _term_key(t.arg, env, level))
    return (type(t).__name__, _term_key(t.left, env, level), _term_key(t.right, env, level))


def alpha_key(phi: Formula, _env=None, _level: int = 0):
    """Locally-nameless canonical form: bound variables become binder distances."""
    env = {} if _env is None else _env
    if isinstance(phi, Eq):
        return ("=", _term_key(phi.left, env, _level), _term_key(phi.right, env, _level))
    if isinstance(phi, P):
        return ("P", _term_key(phi.arg, env, _level))
    if isinstance(phi, Not):
        return ("~", alpha_key(phi.body, env, _level))
    if isinstance(phi, Or):
        return ("|", alpha_key(phi.left, env, _level), alpha_key(phi.right, env, _level))
    inner = dict(env)
    inner[phi.var] = _level + 1
    return ("E", alpha_key(phi.body, inner, _level + 1))


def alpha_eq(phi: Formula, psi: Formula) -> bool:
    """Equality up to consistent renaming of bound variables."""
    if phi._fv != psi._fv or phi._depth != psi._depth:
        return False
    return alpha_key(phi) == alpha_key(psi)


# ---------------------------------------------------------------------------
# closures and P-related rewriting


def universal_closure(phi: Formula) -> Formula:
    """Bind every free variable; the outermost binder takes the least index."""
    out = phi
    for v in sorted(phi._fv, reverse=True):
        out = forall(v, out)
    return out


def is_semirelational(eta: Formula) -> bool:
    return all(isinstance(sub.arg, Var) for sub in iter_subformulas(eta) if isinstance(sub, P))


def to_semirelational(eta: Formula) -> Formula:
    """Rewrite each P(t) with t not a variable as E f (f = t & P(f)), f fresh."""
    if is_semirelational(eta):
        return eta
    f = max(all_vars(eta) | {-1}) + 1

    def go(x: Formula) -> Formula:
        if isinstance(x, P):
            if isinstance(x.arg, Var):
                return x
            return Exists(f, and_(Eq(Var(f), x.arg), P(Var(f))))
        if isinstance(x, Eq) or not x._has_p:
            return x
        if isinstance(x, Not):
            return Not(go(x.body))
        if isinstance(x, Or):
            return Or(go(x.left), go(x.right))
        return Exists(x.var, go(x.body))

    return go(eta)


def subst_predicate(eta: Formula, xi: Formula) -> Formula:
    """eta[xi/P]: put xi(v) in place of every P(v) of a semirelational eta.

    xi has at most one free variable; P occurring inside xi is left alone.
    """
    if len(xi._fv) > 1:
        raise ValueError("xi must have at most one free variable")
    if not is_semirelational(eta):
        raise NotSemirelational("P is applied to a non-variable term")
    (u,) = tuple(xi._fv) or (None,)
    cache: Dict[int, Formula] = {}

    def instance(v: int) -> Formula:
        if v not in cache:
            cache[v] = xi if u is None else rename_free(xi, u, v)
        return cache[v]

    def go(x: Formula) -> Formula:
        if isinstance(x, P):
            return instance(x.arg.index)
        if isinstance(x, Eq) or not x._has_p:
            return x
        if isinstance(x, Not):
            return Not(go(x.body))
        if isinstance(x, Or):
            return Or(go(x.left), go(x.right))
        return Exists(x.var, go(x.body))

    return go(eta)
