"""Goedel coding of terms and formulas by tagged Cantor pairing.

Every node is coded as ``pair(tag, payload)`` where ``pair`` is the Cantor
pairing function ``pair(x, y) = (x + y)(x + y + 1)/2 + y``::

    tag  node          payload
    0    0             0
    1    S(t)          code(t)
    2    t + s         pair(code(t), code(s))
    3    t * s         pair(code(t), code(s))
    4    v_k           k
    5    t = s         pair(code(t), code(s))
    6    P(t)          code(t)
    7    ~f            code(f)
    8    f | g         pair(code(f), code(g))
    9    E v_k f       pair(k, code(f))

``pair(x, y) >= max(x, y)`` and ``pair(tag, p) > p`` for ``tag >= 1``, so
every child code is strictly below its parent's code.  Naturals outside the
image decode to :data:`INVALID`.  See docs/coding.md; values are frozen by
tests/golden/codes.json.
"""
from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Sequence, Union

from gmpy2 import isqrt, mpz

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
    Zero,
    ZERO,
    forall,
    implies,
    mentions_p,
    subst_term,
    universal_closure,
)

TAG_ZERO, TAG_SUCC, TAG_ADD, TAG_MUL, TAG_VAR = 0, 1, 2, 3, 4
TAG_EQ, TAG_P, TAG_NOT, TAG_OR, TAG_EXISTS = 5, 6, 7, 8, 9


class _Invalid:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INVALID"

    def __bool__(self):
        return False


INVALID = _Invalid()


def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int):
    """Inverse of :func:`pair`; returns plain ints."""
    x, y = _unpair(mpz(z))
    return int(x), int(y)


def _unpair(z):
    # stays in gmpy2 integers; decoding unpairs every node of huge codes
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


@lru_cache(maxsize=1 << 16)
def encode(x: Union[Term, Formula]) -> int:
    """Goedel code of a term or formula."""
    if isinstance(x, Succ):
        n = 0
        while isinstance(x, Succ):
            x = x.arg
            n += 1
        code = encode(x)
        for _ in range(n):
            code = pair(TAG_SUCC, code)
        return code
    if isinstance(x, Zero):
        return 0
    if isinstance(x, Var):
        return pair(TAG_VAR, x.index)
    if isinstance(x, Add):
        return pair(TAG_ADD, pair(encode(x.left), encode(x.right)))
    if isinstance(x, Mul):
        return pair(TAG_MUL, pair(encode(x.left), encode(x.right)))
    if isinstance(x, Eq):
        return pair(TAG_EQ, pair(encode(x.left), encode(x.right)))
    if isinstance(x, P):
        return pair(TAG_P, encode(x.arg))
    if isinstance(x, Not):
        return pair(TAG_NOT, encode(x.body))
    if isinstance(x, Or):
        return pair(TAG_OR, pair(encode(x.left), encode(x.right)))
    if isinstance(x, Exists):
        return pair(TAG_EXISTS, pair(x.var, encode(x.body)))
    raise TypeError(f"cannot encode {type(x).__name__}")


@lru_cache(maxsize=1 << 16)
def _decode_term(c):
    succs = 0
    tag, payload = _unpair(c)
    while tag == TAG_SUCC:
        succs += 1
        tag, payload = _unpair(payload)
    if tag == TAG_ZERO:
        t = ZERO if payload == 0 else None
    elif tag == TAG_VAR:
        t = Var(int(payload))
    elif tag in (TAG_ADD, TAG_MUL):
        a, b = _unpair(payload)
        left, right = _decode_term(a), _decode_term(b)
        if left is None or right is None:
            return None
        t = (Add if tag == TAG_ADD else Mul)(left, right)
    else:
        return None
    if t is None:
        return None
    for _ in range(succs):
        t = Succ(t)
    return t


@lru_cache(maxsize=1 << 16)
def _decode_formula(c):
    tag, payload = _unpair(c)
    if tag == TAG_EQ:
        a, b = _unpair(payload)
        left, right = _decode_term(a), _decode_term(b)
        if left is None or right is None:
            return None
        return Eq(left, right)
    if tag == TAG_P:
        t = _decode_term(payload)
        return None if t is None else P(t)
    if tag == TAG_NOT:
        body = _decode_formula(payload)
        return None if body is None else Not(body)
    if tag == TAG_OR:
        a, b = _unpair(payload)
        left, right = _decode_formula(a), _decode_formula(b)
        if left is None or right is None:
            return None
        return Or(left, right)
    if tag == TAG_EXISTS:
        v, b = _unpair(payload)
        body = _decode_formula(b)
        return None if body is None else Exists(int(v), body)
    return None


def decode(c: int):
    """Inverse of :func:`encode`; :data:`INVALID` outside its image."""
    if c < 0:
        return INVALID
    c = mpz(c)
    tag, _ = _unpair(c)
    if tag <= TAG_VAR:
        out = _decode_term(c)
    elif tag <= TAG_EXISTS:
        out = _decode_formula(c)
    else:
        out = None
    return INVALID if out is None else out


def is_sentence(c: int) -> bool:
    x = decode(c)
    return isinstance(x, Formula) and not mentions_p(x) and not x._fv


def is_formula_le1(c: int) -> bool:
    x = decode(c)
    return isinstance(x, Formula) and not mentions_p(x) and len(x._fv) <= 1


def is_closed_term(c: int) -> bool:
    x = decode(c)
    return isinstance(x, Term) and not x._fv


# ---------------------------------------------------------------------------
# finite sequences


def seq_encode(items: Sequence[int]) -> int:
    """Length-prefixed sequence code ``pair(n, pair(x1, pair(x2, ... 0)))``."""
    chain = 0
    for x in reversed(items):
        chain = pair(x, chain) + 1
    return pair(len(items), chain)


def seq_decode(q: int) -> Optional[List[int]]:
    n, chain = unpair(q)
    out = []
    for _ in range(n):
        if chain == 0:
            return None
        x, chain = unpair(chain - 1)
        out.append(x)
    return out if chain == 0 else None


def encode_term_sequence(terms: Sequence[Term]) -> int:
    return seq_encode([encode(t) for t in terms])


def decode_term_sequence(q: int) -> Optional[List[Term]]:
    """The closed terms coded by q, or None if q codes no such sequence."""
    items = seq_decode(q)
    if items is None:
        return None
    out = []
    for c in items:
        t = decode(c)
        if not isinstance(t, Term) or t._fv:
            return None
        out.append(t)
    return out


# ---------------------------------------------------------------------------
# induction axioms


def ind_instance(phi: Formula, v: int) -> Formula:
    """Universal closure of  A v (phi -> phi[v+1]) -> (phi[0] -> A v phi)."""
    step = implies(phi, subst_term(phi, v, Succ(Var(v))))
    body = implies(forall(v, step), implies(subst_term(phi, v, ZERO), forall(v, phi)))
    return universal_closure(body)
