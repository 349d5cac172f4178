"""Sparse multivariate polynomials over the exact fields of :mod:`polyauto.scalar`.

Monomials are stored packed into a single Python int, 32 bits per variable
with the first variable in the most significant slot.  Multiplying monomials
is then integer addition, and lex comparison is integer comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property

from .errors import ArityMismatch, DivisionByZero, InputError, ParseError, RingMismatch
from .scalar import QQ, Field, field_from_json

BITS = 32
MASK = (1 << BITS) - 1
MAX_EXPONENT = (1 << (BITS - 1)) - 1

ORDERS = ("lex", "degrevlex")


class PolyRing:
    """Polynomial ring ``field[vars]`` with a monomial order."""

    def __init__(self, field: Field, vars, order: str = "lex"):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise InputError(f"duplicate variable names in {vars}")
        for v in vars:
            if not isinstance(v, str) or not v.isidentifier():
                raise InputError(f"bad variable name {v!r}")
            if field.atom(v) is not None:
                raise InputError(f"variable {v!r} clashes with a field constant")
        if order not in ORDERS:
            raise InputError(f"unknown monomial order {order!r}")
        self.field = field
        self.vars = vars
        self.order = order
        self.nvars = len(vars)
        self._shifts = tuple(BITS * (self.nvars - 1 - i) for i in range(self.nvars))

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.vars == other.vars and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.vars, self.order))

    def __repr__(self):
        return f"PolyRing({self.field.to_json()}, {list(self.vars)}, {self.order!r})"

    # monomial packing

    def pack(self, exps) -> int:
        if len(exps) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} exponents, got {len(exps)}")
        key = 0
        for e, s in zip(exps, self._shifts):
            if e < 0 or e > MAX_EXPONENT:
                raise InputError(f"exponent {e} out of range")
            key |= e << s
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & MASK for s in self._shifts)

    def mono_degree(self, key: int) -> int:
        d = 0
        while key:
            d += key & MASK
            key >>= BITS
        return d

    def divides(self, a: int, b: int) -> bool:
        """Whether monomial ``a`` divides monomial ``b``."""
        for s in self._shifts:
            if (a >> s) & MASK > (b >> s) & MASK:
                return False
        return True

    def mono_lcm(self, a: int, b: int) -> int:
        key = 0
        for s in self._shifts:
            key |= max((a >> s) & MASK, (b >> s) & MASK) << s
        return key

    def order_key(self, key: int, order: str | None = None):
        order = order or self.order
        if order == "lex":
            return key
        exps = self.unpack(key)
        return (sum(exps), tuple(-e for e in reversed(exps)))

    # construction helpers

    def with_order(self, order: str) -> "PolyRing":
        return self if order == self.order else PolyRing(self.field, self.vars, order)

    def extend(self, names) -> "PolyRing":
        return PolyRing(self.field, self.vars + tuple(names), self.order)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r} in ring {list(self.vars)}") from None

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {}, _clean=False)

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = self.field(c)
        return MultiPoly(self, {0: c} if c else {}, _clean=False)

    def var(self, name_or_index) -> "MultiPoly":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return MultiPoly(self, {1 << self._shifts[i]: self.field.one}, _clean=False)

    def gens(self) -> list["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "MultiPoly":
        c = self.field(coeff)
        return MultiPoly(self, {self.pack(exps): c} if c else {}, _clean=False)

    def from_dict(self, terms: dict) -> "MultiPoly":
        out = {}
        for exps, c in terms.items():
            c = self.field(c)
            if c:
                k = self.pack(exps)
                out[k] = out[k] + c if k in out else c
        return MultiPoly(self, out)

    def coerce(self, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            if value.ring != self:
                raise RingMismatch(f"{value.ring} vs {self}")
            return value
        return self.const(value)

    def parse(self, text: str) -> "MultiPoly":
        return _Parser(self, text).parse()

    def embed(self, f: "MultiPoly") -> "MultiPoly":
        """Move ``f`` into this ring, matching variables by name."""
        if f.ring == self:
            return f
        if f.ring.field != self.field:
            raise RingMismatch("fields differ")
        idx = [self.index(v) for v in f.ring.vars]
        out = {}
        for k, c in f.terms.items():
            exps = [0] * self.nvars
            for i, e in zip(idx, f.ring.unpack(k)):
                exps[i] = e
            out[self.pack(exps)] = c
        return MultiPoly(self, out, _clean=False)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "vars": list(self.vars), "order": self.order}

    @classmethod
    def from_json(cls, doc: dict) -> "PolyRing":
        field = field_from_json(doc.get("field", {"kind": "rationals"}))
        return cls(field, doc["vars"], doc.get("order", "lex"))


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps packed monomials to coefficients."""

    def __init__(self, ring: PolyRing, terms: dict, _clean: bool = True):
        self.ring = ring
        if _clean:
            terms = {k: c for k, c in terms.items() if c}
        self.terms = terms

    # basic protocol

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or other is not None:
            try:
                return self.terms == self.ring.const(other).terms
            except InputError:
                return NotImplemented
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"

    def __str__(self):
        return format_poly(self)

    def items(self):
        """``(exponent tuple, coefficient)`` pairs in decreasing monomial order."""
        unpack = self.ring.unpack
        for k in self.sorted_keys():
            yield unpack(k), self.terms[k]

    def sorted_keys(self, order: str | None = None):
        ok = self.ring.order_key
        return sorted(self.terms, key=lambda k: ok(k, order), reverse=True)

    # arithmetic

    def _other(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{other.ring} vs {self.ring}")
            return other
        try:
            return self.ring.const(other)
        except InputError:
            return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for k, c in b.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return MultiPoly(self.ring, out, _clean=False)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {k: -c for k, c in self.terms.items()}, _clean=False)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    @cached_property
    def _max_exponent(self) -> int:
        m = 0
        for k in self.terms:
            while k:
                m = max(m, k & MASK)
                k >>= BITS
        return m

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return self.ring.zero()
        if len(other.terms) == 1 and 0 in other.terms:
            return self.scale(other.terms[0])
        if len(self.terms) == 1 and 0 in self.terms:
            return other.scale(self.terms[0])
        if self._max_exponent + other._max_exponent > MAX_EXPONENT:
            raise InputError("exponent overflow in polynomial product")
        out: dict = {}
        get = out.get
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        return MultiPoly(self.ring, {k: v * c for k, v in self.terms.items()}, _clean=False)

    def mul_term(self, key: int, c) -> "MultiPoly":
        """Multiply by the monomial ``key`` (packed) times scalar ``c``."""
        return MultiPoly(self.ring, {k + key: v * c for k, v in self.terms.items()}, _clean=False)

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if not other.is_constant():
            raise InputError("division by a non-constant polynomial")
        c = other.constant_value()
        if not c:
            raise DivisionByZero("polynomial division by zero")
        return self.scale(self.ring.field.one / c)

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise InputError("polynomial exponent must be a non-negative integer")
        if self._max_exponent * e > MAX_EXPONENT:
            raise InputError("exponent overflow in polynomial power")
        result, base = self.ring.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # inspection

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """The constant coefficient."""
        return self.terms.get(0, self.ring.field.zero)

    def coefficient(self, exps):
        return self.terms.get(self.ring.pack(exps), self.ring.field.zero)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        md = self.ring.mono_degree
        return max(md(k) for k in self.terms)

    def degree_in(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        s = self.ring._shifts[i]
        return max(((k >> s) & MASK for k in self.terms), default=-1)

    def variables_used(self) -> set[int]:
        used = set()
        for k in self.terms:
            for i, s in enumerate(self.ring._shifts):
                if (k >> s) & MASK:
                    used.add(i)
        return used

    def leading_key(self, order: str | None = None) -> int:
        ok = self.ring.order_key
        return max(self.terms, key=lambda k: ok(k, order))

    def leading_coefficient(self, order: str | None = None):
        return self.terms[self.leading_key(order)]

    def monic(self, order: str | None = None) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(self.ring.field.one / self.leading_coefficient(order))

    def map_coeffs(self, fn, ring: PolyRing | None = None) -> "MultiPoly":
        return MultiPoly(ring or self.ring, {k: fn(c) for k, c in self.terms.items()})

    # calculus and evaluation

    def derivative(self, var) -> "MultiPoly":
        i = var if isinstance(var, int) else self.ring.index(var)
        s = self.ring._shifts[i]
        one = 1 << s
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & MASK
            if e:
                out[k - one] = c * e
        return MultiPoly(self.ring, out, _clean=False)

    def evaluate(self, point):
        """Value at ``point`` (one field element per variable)."""
        if len(point) != self.ring.nvars:
            raise ArityMismatch(f"point has {len(point)} entries, ring has {self.ring.nvars}")
        field = self.ring.field
        point = [field(p) for p in point]
        powers = [dict() for _ in point]
        total = field.zero
        for k, c in self.terms.items():
            term = c
            for i, e in enumerate(self.ring.unpack(k)):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = point[i] ** e
                    term = term * cache[e]
            total = total + term
        return total

    def substitute(self, images) -> "MultiPoly":
        return substitute(self, images)


def substitute(f: MultiPoly, images) -> MultiPoly:
    """Pull back ``f`` along ``images``: replace variable i by ``images[i]``.

    Horner evaluation in each variable, with the variable order of ``f``'s ring.
    """
    images = list(images)
    if len(images) != f.ring.nvars:
        raise ArityMismatch(f"{len(images)} images for {f.ring.nvars} variables")
    if not images:
        return f
    target = images[0].ring
    for g in images:
        if not isinstance(g, MultiPoly) or g.ring != target:
            raise RingMismatch("substitution images must share one ring")
    if target.field != f.ring.field:
        raise RingMismatch("substitution across different fields")
    if not f.terms:
        return target.zero()
    power_cache: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = images[i] ** e
        return power_cache[key]

    ring = f.ring
    shifts = ring._shifts

    def horner(terms: dict, var: int) -> MultiPoly:
        # terms: packed monomials restricted to variables >= var
        if var == ring.nvars:
            return target.const(terms[0]) if terms else target.zero()
        s = shifts[var]
        groups: dict[int, dict] = {}
        for k, c in terms.items():
            e = (k >> s) & MASK
            groups.setdefault(e, {})[k - (e << s)] = c
        exps = sorted(groups, reverse=True)
        acc = None
        prev = None
        for e in exps:
            part = horner(groups[e], var + 1)
            if acc is None:
                acc = part
            else:
                acc = acc * power(var, prev - e) + part
            prev = e
        if prev:
            acc = acc * power(var, prev)
        return acc

    return horner(f.terms, 0)


# printing


def _mono_str(ring: PolyRing, key: int) -> str:
    parts = []
    for name, e in zip(ring.vars, ring.unpack(key)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: MultiPoly) -> str:
    """Canonical string, terms in decreasing monomial order; re-parseable."""
    if not f.terms:
        return "0"
    field = f.ring.field
    pieces = []
    for k in f.sorted_keys():
        c = f.terms[k]
        mono = _mono_str(f.ring, k)
        if field.is_rational(c):
            r = field.to_rational(c)
            sign = "-" if r < 0 else "+"
            r = abs(r)
            if not mono:
                body = str(r)
            elif r == 1:
                body = mono
            else:
                body = f"{r}*{mono}"
        else:
            sign = "+"
            body = f"({field.format(c)})"
            if mono:
                body += "*" + mono
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        tokens, pos = [], 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character at {pos} in {text!r}")
            num, ident, op = m.groups()
            if num is not None:
                tokens.append(("num", int(num)))
            elif ident is not None:
                tokens.append(("id", ident))
            else:
                tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> MultiPoly:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"unexpected token {self.peek()[1]!r} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            e = self.exponent()
            if e < 0:
                if not base.is_constant() or not base:
                    raise ParseError("negative exponent on a non-constant")
                return self.ring.const(self.ring.field.power(base.constant_value(), e))
            return base ** e
        return base

    def exponent(self):
        sign = 1
        paren = False
        if self.peek() == ("op", "("):
            self.take()
            paren = True
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        kind, val = self.take()
        if kind != "num":
            raise ParseError("exponent must be an integer literal")
        if paren:
            self.expect(")")
        return sign * val

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            if val in self.ring.vars:
                return self.ring.var(val)
            a = self.ring.field.atom(val)
            if a is None:
                raise ParseError(f"unknown identifier {val!r}")
            return self.ring.const(a)
        if (kind, val) == ("op", "("):
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_scalar(field: Field, text: str):
    """Parse a scalar literal such as ``-3/4``, ``zeta^2+1`` or ``1/(x^2+1)``."""
    if not isinstance(text, str):
        return field(text)
    f = PolyRing(field, ()).parse(text)
    return f.constant_value()


def ring(vars, field: Field = QQ, order: str = "lex"):
    """Convenience constructor returning ``(R, *generators)``."""
    if isinstance(vars, str):
        vars = [v for v in re.split(r"[\s,]+", vars) if v]
    R = PolyRing(field, vars, order)
    return (R, *R.gens())
