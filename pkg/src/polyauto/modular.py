"""Reduction of polynomials modulo a large prime.

Used only as a one-sided filter: a statement that fails after reducing
mod p (order of a point orbit, rank of a linear system) certifies the
corresponding exact statement, never the other way round.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt

from .poly import MASK, MultiPoly, PolyRing


class ModularImage:
    """A ring homomorphism from the coefficient field onto ``Z/p``."""

    def __init__(self, field, seed: int = 0, attempts: int = 8):
        self.field = field
        self._rng = random.Random(seed)
        self._attempts = attempts
        self._pick()

    def _pick(self):
        self.p, self.phi = self.field.modular_image(self._rng)

    def retry(self, fn):
        """Call ``fn(self)``, re-drawing the prime when a denominator vanishes."""
        for _ in range(self._attempts):
            try:
                return fn(self)
            except ZeroDivisionError:
                self._pick()
        raise ZeroDivisionError("could not find a good reduction")

    def poly(self, f: MultiPoly) -> dict:
        p, phi = self.p, self.phi
        out = {}
        for k, c in f.terms.items():
            v = phi(c) % p
            if v:
                out[k] = v
        return out


def mul(a: dict, b: dict, p: int) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = (get(k, 0) + ca * cb) % p
    return {k: v for k, v in out.items() if v}


def add(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = (out.get(k, 0) + v) % p
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def scale(a: dict, c: int, p: int) -> dict:
    c %= p
    return {k: v * c % p for k, v in a.items()} if c else {}


def power(a: dict, e: int, p: int) -> dict:
    result, base = {0: 1}, a
    while e:
        if e & 1:
            result = mul(result, base, p)
        e >>= 1
        if e:
            base = mul(base, base, p)
    return result


def substitute(ring: PolyRing, f: dict, images: list[dict], p: int) -> dict:
    """Modular analogue of :func:`polyauto.poly.substitute`."""
    cache: dict = {}
    out: dict = {}
    for k, c in f.items():
        term = {0: c}
        for i, s in enumerate(ring._shifts):
            e = (k >> s) & MASK
            if e:
                if (i, e) not in cache:
                    cache[(i, e)] = power(images[i], e, p)
                term = mul(term, cache[(i, e)], p)
        out = add(out, term, p)
    return out


def evaluate(ring: PolyRing, f: dict, point: list[int], p: int) -> int:
    total = 0
    for k, c in f.items():
        term = c
        for i, s in enumerate(ring._shifts):
            e = (k >> s) & MASK
            if e:
                term = term * pow(point[i], e, p) % p
        total += term
    return total % p


def rank(vectors: list[dict], p: int) -> int:
    """Rank over ``Z/p`` of sparse vectors given as ``{index: value}`` dicts."""
    pivots: dict = {}
    r = 0
    for v in vectors:
        v = dict(v)
        while v:
            k = max(v)
            if k not in pivots:
                inv = pow(v[k], -1, p)
                pivots[k] = {i: x * inv % p for i, x in v.items()}
                r += 1
                break
            c = v[k]
            for i, x in pivots[k].items():
                s = (v.get(i, 0) - c * x) % p
                if s:
                    v[i] = s
                else:
                    v.pop(i, None)
    return r


def kernel(vectors: list[dict], p: int) -> list[dict]:
    """Relations ``{vector index: coefficient}`` spanning the kernel over ``Z/p``."""
    pivots: dict = {}
    relations = []
    for idx, vec in enumerate(vectors):
        v, combo = dict(vec), {idx: 1}
        while v:
            k = max(v)
            if k not in pivots:
                inv = pow(v[k], -1, p)
                pivots[k] = ({i: x * inv % p for i, x in v.items()},
                             {i: x * inv % p for i, x in combo.items()})
                break
            row, row_combo = pivots[k]
            c = v[k]
            for target, src in ((v, row), (combo, row_combo)):
                for i, x in src.items():
                    s = (target.get(i, 0) - c * x) % p
                    if s:
                        target[i] = s
                    else:
                        target.pop(i, None)
        else:
            relations.append(combo)
    return relations


def rref(rows: list[dict], p: int, key) -> list[dict]:
    """Reduced echelon form over ``Z/p``; pivots are the ``key``-largest entries."""
    basis: dict = {}
    for row in rows:
        v = {k: x % p for k, x in row.items() if x % p}
        for q in sorted(basis, key=key, reverse=True):
            if q in v:
                c = v[q]
                for i, x in basis[q].items():
                    s = (v.get(i, 0) - c * x) % p
                    if s:
                        v[i] = s
                    else:
                        v.pop(i, None)
        if not v:
            continue
        q = max(v, key=key)
        inv = pow(v[q], -1, p)
        v = {i: x * inv % p for i, x in v.items()}
        for other in list(basis):
            c = basis[other].get(q)
            if c:
                r = dict(basis[other])
                for i, x in v.items():
                    s = (r.get(i, 0) - c * x) % p
                    if s:
                        r[i] = s
                    else:
                        r.pop(i, None)
                basis[other] = r
        basis[q] = v
    return [basis[q] for q in sorted(basis, key=key)]


def rational_reconstruction(a: int, p: int):
    """The fraction r/s with ``r = a*s (mod p)`` and ``|r|, |s| <= sqrt(p/2)``, or None."""
    bound = isqrt(p // 2)
    r0, r1, s0, s1 = p, a % p, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)
