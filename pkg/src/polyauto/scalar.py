"""Exact coefficient fields: Q, cyclotomic fields Q(zeta_m) and Q(t).

Rational numbers are plain :class:`fractions.Fraction` objects.  Elements of
the two extension fields are small immutable classes that support the usual
arithmetic operators and mix freely with ``int`` and ``Fraction``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache

from . import upoly
from .errors import DivisionByZero, FieldMismatch, InputError, ZeroInput

_RATIONAL_TYPES = (int, Fraction)


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set (deterministic below 3.3e24)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rational_root(c: Fraction, k: int) -> Fraction | None:
    if c == 0:
        return Fraction(0)
    sign = 1
    if c < 0:
        if k % 2 == 0:
            return None
        sign, c = -1, -c

    def iroot(n):
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo <= hi:
            mid = (lo + hi) // 2
            v = mid ** k
            if v == n:
                return mid
            if v < n:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    num, den = iroot(c.numerator), iroot(c.denominator)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def _order_from_bound(is_one, power, a, bound: int) -> int | None:
    """Exact multiplicative order of ``a`` given that it divides ``bound``."""
    if not is_one(power(a, bound)):
        return None
    order = bound
    for p in _prime_factors(bound):
        while order % p == 0 and is_one(power(a, order // p)):
            order //= p
    return order


class Field:
    """Common interface of the three coefficient fields."""

    kind = ""

    zero: object
    one: object

    def __call__(self, value):
        raise NotImplementedError

    def atom(self, name: str):
        """Element denoted by identifier ``name``, or None."""
        return None

    def is_rational(self, a) -> bool:
        raise NotImplementedError

    def to_rational(self, a) -> Fraction:
        raise NotImplementedError

    def is_root_of_unity(self, a) -> int | None:
        raise NotImplementedError

    def nth_root(self, a, k: int):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def modular_image(self, rng: random.Random):
        """Return ``(p, phi)`` where ``phi`` maps field elements to ``Z/p``.

        ``phi`` is a ring homomorphism on the elements it accepts and raises
        ``ZeroDivisionError`` when a denominator vanishes mod ``p``.
        """
        raise NotImplementedError

    def power(self, a, e: int):
        if e < 0:
            return (self.one / a) ** (-e)
        return a ** e

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Field) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(tuple(sorted(self.to_json().items())))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json()})"


_BIG_PRIME_BASE = 2**61


def _prime_near(modulus: int, rng: random.Random) -> int:
    """A prime ``p = 1 (mod modulus)`` somewhat above 2**61."""
    k = _BIG_PRIME_BASE // modulus + rng.randrange(1, 2**20)
    while True:
        p = k * modulus + 1
        if is_probable_prime(p):
            return p
        k += 1


def _rat_mod(c: Fraction, p: int) -> int:
    den = c.denominator % p
    if den == 0:
        raise ZeroDivisionError("denominator vanishes mod p")
    return c.numerator * pow(den, -1, p) % p


class RationalField(Field):
    kind = "rationals"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, value):
        if isinstance(value, _RATIONAL_TYPES):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise FieldMismatch(f"cannot convert {value!r} to a rational")

    def is_rational(self, a):
        return True

    def to_rational(self, a):
        return Fraction(a)

    def is_root_of_unity(self, a):
        if a == 0:
            raise ZeroInput("zero is not a unit")
        if a == 1:
            return 1
        if a == -1:
            return 2
        return None

    def nth_root(self, a, k):
        return _rational_root(Fraction(a), k)

    def format(self, a):
        return str(Fraction(a))

    def to_json(self):
        return {"kind": self.kind}

    def modular_image(self, rng):
        p = _prime_near(2, rng)
        return p, lambda c: _rat_mod(Fraction(c), p)


QQ = RationalField()


class CyclotomicElement:
    """Polynomial in zeta of degree < phi(m) with rational coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "CyclotomicField", coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, CyclotomicElement):
            if other.field.m != self.field.m:
                raise FieldMismatch(
                    f"Q(zeta_{self.field.m}) vs Q(zeta_{other.field.m})")
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicElement(self.field, upoly.add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.field, upoly.neg(self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicElement(self.field, upoly.sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.field._reduce(upoly.mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise DivisionByZero("inverse of zero")
        g, s, _ = upoly.xgcd(self.coeffs, self.field.modulus)
        # modulus is irreducible so g == 1
        return self.field._reduce(s)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.field.m == other.field.m and self.coeffs == other.coeffs
        if isinstance(other, _RATIONAL_TYPES):
            return self.coeffs == upoly.trim((Fraction(other),))
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash((self.field.m, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return self.field.format(self)


class CyclotomicField(Field):
    kind = "cyclotomic"

    def __init__(self, m: int):
        if not isinstance(m, int) or m < 1:
            raise InputError("cyclotomic index must be a positive integer")
        self.m = m
        self.modulus = tuple(Fraction(c) for c in upoly.int_cyclotomic(m))
        self.degree = len(self.modulus) - 1
        self.zero = CyclotomicElement(self, ())
        self.one = CyclotomicElement(self, (Fraction(1),))
        self.torsion_order = math.lcm(2, m)

    def _reduce(self, coeffs):
        if len(coeffs) > self.degree:
            coeffs = upoly.divmod_(coeffs, self.modulus)[1]
        return CyclotomicElement(self, coeffs)

    def __call__(self, value):
        if isinstance(value, CyclotomicElement):
            if value.field.m != self.m:
                raise FieldMismatch("cyclotomic fields differ")
            return value
        if isinstance(value, _RATIONAL_TYPES):
            return CyclotomicElement(self, upoly.trim((Fraction(value),)))
        if isinstance(value, str):
            return CyclotomicElement(self, upoly.trim((Fraction(value),)))
        raise FieldMismatch(f"cannot convert {value!r} to Q(zeta_{self.m})")

    @property
    def zeta(self):
        return self._reduce((Fraction(0), Fraction(1)))

    def atom(self, name):
        return self.zeta if name == "zeta" else None

    def is_rational(self, a):
        return len(a.coeffs) <= 1

    def to_rational(self, a):
        return a.coeffs[0] if a.coeffs else Fraction(0)

    def is_root_of_unity(self, a):
        if not a:
            raise ZeroInput("zero is not a unit")
        return _order_from_bound(lambda v: v == 1, lambda v, e: v ** e,
                                 a, self.torsion_order)

    def torsion(self):
        """All roots of unity of the field."""
        z = self.zeta
        base = z if self.m % 2 == 0 else -z
        return [base ** j for j in range(self.torsion_order)]

    def nth_root(self, a, k):
        if not a:
            return self.zero
        for w in self.torsion():
            q = a / w
            if self.is_rational(q):
                r = _rational_root(self.to_rational(q), k)
                if r is None:
                    continue
                for v in self.torsion():
                    if v ** k == w:
                        return v * r
        return None

    def format(self, a):
        if not a.coeffs:
            return "0"
        parts = []
        for i in range(len(a.coeffs) - 1, -1, -1):
            c = a.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")
            parts.append(_signed_term(c, mono))
        return _join_terms(parts)

    def to_json(self):
        return {"kind": self.kind, "m": self.m}

    def modular_image(self, rng):
        p = _prime_near(self.m, rng)
        factors = _prime_factors(self.m)
        while True:
            w = pow(rng.randrange(2, p - 1), (p - 1) // self.m, p)
            if all(pow(w, self.m // q, p) != 1 for q in factors):
                break

        def phi(c):
            acc = 0
            for coeff in reversed(c.coeffs):
                acc = (acc * w + _rat_mod(coeff, p)) % p
            return acc

        return p, phi


def _signed_term(c: Fraction, mono: str) -> str:
    """Format ``c*mono`` with an explicit leading sign."""
    sign = "-" if c < 0 else "+"
    c = abs(c)
    if not mono:
        return f"{sign} {c}"
    if c == 1:
        return f"{sign} {mono}"
    return f"{sign} {c}*{mono}"


def _join_terms(parts: list[str]) -> str:
    s = " ".join(parts)
    if s.startswith("+ "):
        return s[2:]
    return "-" + s[2:]


class RationalFunction:
    """Reduced quotient num/den of polynomials in one parameter, den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "RationalFunctionField", num, den):
        self.field = field
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field.param != self.field.param:
                raise FieldMismatch("rational function fields differ")
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return self.field._make(upoly.add(self.num, other.num), self.den)
        num = upoly.add(upoly.mul(self.num, other.den), upoly.mul(other.num, self.den))
        return self.field._make(num, upoly.mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, upoly.neg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return self.field.zero
        return self.field._make(upoly.mul(self.num, other.num),
                                upoly.mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return self.field._make(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        num, den = (Fraction(1),), (Fraction(1),)
        for _ in range(e):
            num, den = upoly.mul(num, self.num), upoly.mul(den, self.den)
        return RationalFunction(self.field, num, den)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return (self.field.param == other.field.param
                    and self.num == other.num and self.den == other.den)
        if isinstance(other, _RATIONAL_TYPES):
            return self.den == (1,) and self.num == upoly.trim((Fraction(other),))
        return NotImplemented

    def __hash__(self):
        if self.den == (1,) and len(self.num) <= 1:
            return hash(self.num[0] if self.num else Fraction(0))
        return hash((self.field.param, self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return self.field.format(self)


class RationalFunctionField(Field):
    kind = "rational_functions"

    def __init__(self, param: str = "x"):
        if not param.isidentifier():
            raise InputError(f"bad parameter name {param!r}")
        self.param = param
        self.zero = RationalFunction(self, (), (Fraction(1),))
        self.one = RationalFunction(self, (Fraction(1),), (Fraction(1),))

    def _make(self, num, den):
        num, den = upoly.trim(num), upoly.trim(den)
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return self.zero
        if len(den) > 1:
            g = upoly.gcd(num, den)
            if len(g) > 1:
                num = upoly.divmod_(num, g)[0]
                den = upoly.divmod_(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        return RationalFunction(self, num, den)

    def __call__(self, value):
        if isinstance(value, RationalFunction):
            if value.field.param != self.param:
                raise FieldMismatch("rational function fields differ")
            return value
        if isinstance(value, (int, Fraction, str)):
            return RationalFunction(self, upoly.trim((Fraction(value),)), (Fraction(1),))
        raise FieldMismatch(f"cannot convert {value!r} to Q({self.param})")

    def from_polys(self, num, den=(1,)):
        return self._make(upoly.to_fractions(num), upoly.to_fractions(den))

    @property
    def generator(self):
        return RationalFunction(self, (Fraction(0), Fraction(1)), (Fraction(1),))

    def atom(self, name):
        return self.generator if name == self.param else None

    def is_rational(self, a):
        return a.den == (1,) and len(a.num) <= 1

    def to_rational(self, a):
        return a.num[0] if a.num else Fraction(0)

    def is_root_of_unity(self, a):
        if not a:
            raise ZeroInput("zero is not a unit")
        if a == 1:
            return 1
        if a == -1:
            return 2
        return None

    def nth_root(self, a, k):
        if not self.is_rational(a):
            return None
        r = _rational_root(self.to_rational(a), k)
        return None if r is None else self(r)

    def _format_upoly(self, p):
        parts = []
        for i in range(len(p) - 1, -1, -1):
            c = p[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.param if i == 1 else f"{self.param}^{i}")
            parts.append(_signed_term(c, mono))
        return _join_terms(parts) if parts else "0"

    def format(self, a):
        num = self._format_upoly(a.num)
        if a.den == (1,):
            return num
        den = self._format_upoly(a.den)
        if len([c for c in a.num if c != 0]) > 1:
            num = f"({num})"
        if len([c for c in a.den if c != 0]) > 1 or a.den[-1] != 1:
            den = f"({den})"
        return f"{num}/{den}"

    def to_json(self):
        return {"kind": self.kind, "param": self.param}

    def modular_image(self, rng):
        p = _prime_near(2, rng)
        t = rng.randrange(1, p)

        def ev(poly):
            acc = 0
            for c in reversed(poly):
                acc = (acc * t + _rat_mod(c, p)) % p
            return acc

        def phi(c):
            den = ev(c.den)
            if den == 0:
                raise ZeroDivisionError("denominator vanishes at the sample point")
            return ev(c.num) * pow(den, -1, p) % p

        return p, phi


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> CyclotomicField:
    return CyclotomicField(m)


@lru_cache(maxsize=None)
def rational_functions(param: str = "x") -> RationalFunctionField:
    return RationalFunctionField(param)


def field_from_json(doc: dict) -> Field:
    kind = doc.get("kind")
    if kind == "rationals":
        return QQ
    if kind == "cyclotomic":
        return cyclotomic(int(doc["m"]))
    if kind == "rational_functions":
        return rational_functions(doc.get("param", "x"))
    raise InputError(f"unknown field kind {kind!r}")


def is_root_of_unity(a, field: Field | None = None) -> int | None:
    """Exact multiplicative order of ``a`` if it is a root of unity."""
    return (field or field_of(a)).is_root_of_unity(a)


def field_of(a) -> Field:
    if isinstance(a, (CyclotomicElement, RationalFunction)):
        return a.field
    return QQ
