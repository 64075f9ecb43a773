"""Term valuation and classical / Strong Kleene / Weak Kleene evaluation.

Structures are finite stand-ins for models of PA: quantifiers range over
``{0..N}`` while terms evaluate exactly over the naturals.  The only source
of partiality is the oracle predicate P, given by disjoint positive and
negative extensions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Container, FrozenSet, Iterable, Mapping, Optional, Union

from .errors import OracleInClassical, TooManyFreeVars, UnassignedVariable
from .syntax import Add, Eq, Exists, Formula, Mul, Not, Or, P, Succ, Term, Var, Zero, mentions_p


class TruthValue3(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNDEFINED = "Undefined"

    def __str__(self):
        return self.value

    @property
    def decided(self) -> bool:
        return self is not TruthValue3.UNDEFINED

    @classmethod
    def of(cls, b: bool) -> "TruthValue3":
        return cls.TRUE if b else cls.FALSE


T, F, U = TruthValue3.TRUE, TruthValue3.FALSE, TruthValue3.UNDEFINED


class Scheme(enum.Enum):
    STRONG = "sk"
    WEAK = "wk"


STRONG_KLEENE = Scheme.STRONG
WEAK_KLEENE = Scheme.WEAK


def tv_not(a: TruthValue3) -> TruthValue3:
    return F if a is T else T if a is F else U


def tv_or(a: TruthValue3, b: TruthValue3, scheme: Scheme) -> TruthValue3:
    if scheme is Scheme.WEAK:
        if a is U or b is U:
            return U
        return T if (a is T or b is T) else F
    if a is T or b is T:
        return T
    if a is F and b is F:
        return F
    return U


def tv_and(a: TruthValue3, b: TruthValue3, scheme: Scheme) -> TruthValue3:
    return tv_not(tv_or(tv_not(a), tv_not(b), scheme))


@dataclass(frozen=True)
class BoundedStructure:
    """Quantifier domain {0..bound}; P true on p_positive, false on p_negative."""

    bound: int
    p_positive: FrozenSet[int] = field(default_factory=frozenset)
    p_negative: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("the quantifier bound must be a natural number")
        object.__setattr__(self, "p_positive", frozenset(self.p_positive))
        object.__setattr__(self, "p_negative", frozenset(self.p_negative))
        clash = self.p_positive & self.p_negative
        if clash:
            raise ValueError(f"P extension and anti-extension overlap on {sorted(clash)}")

    @property
    def domain(self) -> range:
        return range(self.bound + 1)

    def p_value(self, n: int) -> TruthValue3:
        if n in self.p_positive:
            return T
        if n in self.p_negative:
            return F
        return U

    def extend(self, positive: Iterable[int] = (), negative: Iterable[int] = ()) -> "BoundedStructure":
        return BoundedStructure(self.bound, self.p_positive | set(positive), self.p_negative | set(negative))


# ---------------------------------------------------------------------------
# terms


@lru_cache(maxsize=1 << 16)
def _closed_value(t: Term) -> int:
    return _walk(t, {})


def _value(t: Term, env: Mapping[int, int]) -> int:
    if not t._fv:
        return _closed_value(t)
    return _walk(t, env)


def _walk(t: Term, env: Mapping[int, int]) -> int:
    succs = 0
    while isinstance(t, Succ):
        succs += 1
        t = t.arg
    if isinstance(t, Zero):
        base = 0
    elif isinstance(t, Var):
        try:
            base = env[t.index]
        except KeyError:
            raise UnassignedVariable(f"v{t.index} is not assigned") from None
    elif isinstance(t, Add):
        base = _value(t.left, env) + _value(t.right, env)
    else:
        base = _value(t.left, env) * _value(t.right, env)
    return base + succs


def eval_term(t: Term, sigma: Optional[Mapping[int, int]] = None) -> int:
    """Exact value of t under 0, S, +, * with variables read from sigma."""
    return _value(t, sigma or {})


def val(t: Term) -> int:
    """Value of a closed term."""
    return eval_term(t)


# ---------------------------------------------------------------------------
# formulas


PExtension = Union[Container[int], Callable[[int], bool]]


def eval_classical(
    phi: Formula,
    structure: BoundedStructure,
    sigma: Optional[Mapping[int, int]] = None,
    p_ext: Optional[PExtension] = None,
) -> bool:
    """Tarskian truth with quantifiers over {0..N}.

    P-free input only, unless ``p_ext`` supplies a total interpretation of P
    (a container of naturals or a predicate).
    """
    if p_ext is None:
        if mentions_p(phi):
            raise OracleInClassical("classical evaluation needs a total interpretation of P")
        holds = None
    elif callable(p_ext):
        holds = p_ext
    else:
        holds = p_ext.__contains__
    env = dict(sigma or {})
    dom = structure.domain

    def go(f: Formula) -> bool:
        if isinstance(f, Eq):
            return _value(f.left, env) == _value(f.right, env)
        if isinstance(f, Not):
            return not go(f.body)
        if isinstance(f, Or):
            return go(f.left) or go(f.right)
        if isinstance(f, Exists):
            v = f.var
            saved = env.get(v, _MISSING)
            try:
                for x in dom:
                    env[v] = x
                    if go(f.body):
                        return True
                return False
            finally:
                _restore(env, v, saved)
        return bool(holds(_value(f.arg, env)))

    return go(phi)


_MISSING = object()


def _restore(env, v, saved):
    if saved is _MISSING:
        env.pop(v, None)
    else:
        env[v] = saved


def eval3(
    phi: Formula,
    structure: BoundedStructure,
    scheme: Scheme = Scheme.STRONG,
    sigma: Optional[Mapping[int, int]] = None,
) -> TruthValue3:
    """Three-valued value of phi; P-atoms supply the only undefinedness."""
    env = dict(sigma or {})
    dom = structure.domain
    pos, neg = structure.p_positive, structure.p_negative
    strong = scheme is Scheme.STRONG

    def go(f: Formula) -> TruthValue3:
        if isinstance(f, Eq):
            return T if _value(f.left, env) == _value(f.right, env) else F
        if isinstance(f, P):
            n = _value(f.arg, env)
            return T if n in pos else F if n in neg else U
        if isinstance(f, Not):
            a = go(f.body)
            return F if a is T else T if a is F else U
        if isinstance(f, Or):
            a = go(f.left)
            if strong:
                if a is T:
                    return T
                b = go(f.right)
                if b is T:
                    return T
                return F if (a is F and b is F) else U
            if a is U:
                return U
            b = go(f.right)
            if b is U:
                return U
            return T if (a is T or b is T) else F
        # Exists
        v = f.var
        saved = env.get(v, _MISSING)
        seen_true = seen_undef = False
        try:
            for x in dom:
                env[v] = x
                r = go(f.body)
                if r is T:
                    if strong:
                        return T
                    seen_true = True
                elif r is U:
                    if not strong:
                        return U
                    seen_undef = True
        finally:
            _restore(env, v, saved)
        if seen_true:
            return T
        return U if seen_undef else F

    return go(phi)


def is_total(phi: Formula, structure: BoundedStructure, scheme: Scheme = Scheme.STRONG) -> bool:
    """Every numeral instance of phi (at most one free variable) is decided."""
    fv = phi._fv
    if len(fv) > 1:
        raise TooManyFreeVars(f"expected at most one free variable, found {sorted(fv)}")
    if not fv:
        return eval3(phi, structure, scheme) is not U
    (v,) = fv
    return all(eval3(phi, structure, scheme, {v: x}) is not U for x in structure.domain)
