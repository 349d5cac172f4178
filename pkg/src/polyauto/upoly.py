"""Dense univariate polynomials as coefficient tuples, lowest degree first.

The helpers only use ``+ - * /`` and comparison with ``0``, so they work for
``Fraction`` coefficients as well as for elements of the extension fields in
:mod:`polyauto.scalar`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p) -> int:
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] + q[i])
        elif i < len(p):
            out.append(p[i])
        else:
            out.append(q[i])
    return trim(out)


def neg(p):
    return tuple(-c for c in p)


def sub(p, q):
    return add(p, neg(q))


def scale(p, c):
    if c == 0:
        return ()
    return trim(a * c for a in p)


def mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(p) <= dq:
        return (), trim(p)
    quot = [0] * (len(p) - dq)
    for k in range(len(p) - 1, dq - 1, -1):
        c = p[k]
        if c == 0:
            continue
        c = c / lead
        quot[k - dq] = c
        for i in range(dq + 1):
            p[k - dq + i] = p[k - dq + i] - c * q[i]
    return trim(quot), trim(p[:dq])


def monic(p):
    if not p:
        return ()
    lead = p[-1]
    if lead == 1:
        return tuple(p)
    return tuple(c / lead for c in p)


def gcd(p, q):
    """Monic greatest common divisor (``()`` when both are zero)."""
    p, q = trim(p), trim(q)
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def xgcd(p, q):
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return (), (), ()
    lead = r0[-1]
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)


def derivative(p):
    return trim(p[i] * i for i in range(1, len(p)))


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_part(p):
    p = trim(p)
    if len(p) <= 1:
        return monic(p)
    g = gcd(p, derivative(p))
    return monic(divmod_(p, g)[0])


def to_fractions(p):
    return trim(Fraction(c) for c in p)


@lru_cache(maxsize=None)
def int_cyclotomic(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = list(divmod_(tuple(Fraction(c) for c in num),
                               tuple(Fraction(c) for c in int_cyclotomic(d)))[0])
    return tuple(int(c) for c in num)
