"""Locally nilpotent derivations and their exponential flows."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .endo import PolyMap
from .errors import ArityMismatch, InputError, NotLocallyNilpotent, NotUnipotentWithinBound, RingMismatch
from .linalg import solve
from .poly import MultiPoly, PolyRing, substitute


class Derivation:
    """k-derivation of ``ring`` determined by the images of the variables."""

    def __init__(self, ring: PolyRing, images):
        images = [ring.parse(g) if isinstance(g, str) else ring.coerce(g) for g in images]
        if len(images) != ring.nvars:
            raise ArityMismatch(f"{len(images)} images for {ring.nvars} variables")
        self.ring = ring
        self.images = tuple(images)

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Derivation({[str(g) for g in self.images]})"

    def __call__(self, f: MultiPoly) -> MultiPoly:
        return apply(self, f)

    def is_zero(self) -> bool:
        return not any(self.images)

    def to_json(self) -> dict:
        return {"images": [str(g) for g in self.images]}


def apply(D: Derivation, f: MultiPoly) -> MultiPoly:
    if f.ring != D.ring:
        raise RingMismatch("derivation and polynomial live in different rings")
    out = D.ring.zero()
    for i, g in enumerate(D.images):
        if g:
            df = f.derivative(i)
            if df:
                out = out + df * g
    return out


def nilpotency_index(D: Derivation, f: MultiPoly, bound: int) -> int | None:
    """Smallest k <= bound with D^k(f) = 0, or None."""
    g = f
    for k in range(bound + 1):
        if not g:
            return k
        g = apply(D, g)
    return None


@dataclass(frozen=True)
class Nilpotence:
    """Outcome of :func:`is_locally_nilpotent`: status is 'yes', 'no' or 'unknown'."""

    status: str
    max_index: int | None = None
    witness_var: str | None = None

    def __bool__(self):
        return self.status == "yes"


def is_locally_nilpotent(D: Derivation, bound: int, strict: bool = True) -> Nilpotence:
    """Check that D^k kills every variable for some k <= bound.

    Exhausting the bound proves nothing, so the answer is 'unknown' unless
    ``strict`` is turned off, in which case it is reported as 'no' with the
    first variable that survived.
    """
    if bound < 1:
        raise InputError("bound must be positive")
    worst = 0
    for i, name in enumerate(D.ring.vars):
        k = nilpotency_index(D, D.ring.var(i), bound)
        if k is None:
            if strict:
                return Nilpotence("unknown")
            return Nilpotence("no", witness_var=name)
        worst = max(worst, k)
    return Nilpotence("yes", max_index=worst)


class ParametricMap:
    """Family of maps ``psi_u`` with coordinates in ``ring[u]``, divided by ``u^shift``.

    ``shift`` > 0 encodes negative powers of the parameter (multiplicative
    flows); additive flows always have ``shift == 0``.
    """

    def __init__(self, ring: PolyRing, param: str, coords, shift: int = 0):
        self.ring = ring
        self.param = param
        self.ext_ring = ring.extend([param])
        coords = [self.ext_ring.parse(c) if isinstance(c, str) else c for c in coords]
        if len(coords) != ring.nvars:
            raise ArityMismatch("wrong number of coordinates")
        for c in coords:
            if c.ring != self.ext_ring:
                raise RingMismatch("coordinates must live in ring[param]")
        if shift < 0:
            raise InputError("shift must be non-negative")
        self.coords = tuple(coords)
        self.shift = shift

    def __repr__(self):
        return f"ParametricMap({self.param}, {[str(c) for c in self.coords]}, shift={self.shift})"

    def __eq__(self, other):
        return (isinstance(other, ParametricMap) and self.ring == other.ring
                and self.param == other.param and self.coords == other.coords
                and self.shift == other.shift)

    def at(self, value) -> PolyMap:
        """Specialize the parameter."""
        field = self.ring.field
        value = field(value)
        images = list(self.ring.gens()) + [self.ring.const(value)]
        coords = [substitute(c, images) for c in self.coords]
        if self.shift:
            if not value:
                raise InputError("multiplicative flow specialized at 0")
            inv = field.power(value, -self.shift)
            coords = [c.scale(inv) for c in coords]
        return PolyMap(self.ring, coords)

    def in_ring(self, target: PolyRing, param_image: MultiPoly) -> list[MultiPoly]:
        """Numerator coordinates moved to ``target`` with the parameter replaced."""
        images = [target.var(v) for v in self.ring.vars] + [param_image]
        return [substitute(c, images) for c in self.coords]

    def to_json(self) -> dict:
        out = {"param": self.param, "coords": [str(c) for c in self.coords]}
        if self.shift:
            out["denominator"] = f"{self.param}^{self.shift}"
        return out


def exp_flow(D: Derivation, param: str = "u", bound: int = 256) -> ParametricMap:
    """``exp(uD)``: coordinates ``sum_j D^j(x_i) u^j / j!``."""
    if not is_locally_nilpotent(D, bound):
        raise NotLocallyNilpotent(f"D^k does not vanish on every variable within {bound} steps")
    ring = D.ring
    ext = ring.extend([param])
    u = ext.var(param)
    coords = []
    for i in range(ring.nvars):
        g = ring.var(i)
        total = ext.zero()
        j = 0
        upow = ext.one()
        while g:
            total = total + ext.embed(g) * upow.scale(Fraction(1, math.factorial(j)))
            g = apply(D, g)
            upow = upow * u
            j += 1
        coords.append(total)
    return ParametricMap(ring, param, coords)


def log_unipotent(F: PolyMap, bound: int = 64, max_terms: int | None = None) -> Derivation:
    """Derivation D with ``exp(D) = F``, via ``log F* = sum (-1)^(k+1) (F* - Id)^k / k``.

    ``max_terms`` cuts the series off early (as NotUnipotentWithinBound) once
    an iterate grows past that many terms.
    """
    images = []
    for i in range(F.ring.nvars):
        term = F.ring.var(i)
        total = F.ring.zero()
        for k in range(1, bound + 2):
            term = F.pullback(term) - term
            if not term:
                break
            if max_terms is not None and len(term) > max_terms:
                raise NotUnipotentWithinBound(f"(F* - Id)^k grew past {max_terms} terms")
            coef = Fraction((-1) ** (k + 1), k)
            total = total + term.scale(coef)
        else:
            raise NotUnipotentWithinBound(
                f"(F* - Id)^k({F.ring.vars[i]}) did not vanish within {bound} steps")
        images.append(total)
    D = Derivation(F.ring, images)
    if exp_flow(D, bound=bound * 4 + 4).at(1) != F:
        raise NotUnipotentWithinBound("logarithm does not exponentiate back to F")
    return D


def psi_degree(D: Derivation, f: MultiPoly, bound: int = 256):
    """u-degree of ``exp(uD)(f)``: largest j with D^j(f) != 0; -inf for f = 0."""
    if not is_locally_nilpotent(D, bound):
        raise NotLocallyNilpotent("degree function needs a locally nilpotent derivation")
    if not f:
        return -math.inf
    j, g = -1, f
    while g:
        g = apply(D, g)
        j += 1
    return j


def interpolate_powers(F: PolyMap, f: MultiPoly, r: int) -> list[MultiPoly]:
    """Recover ``D^j(f)``, j = 0..r, from the iterates ``(F^i)*(f)``, i = 0..r.

    Valid when F = exp(D) and D^(r+1)(f) = 0: then
    ``(F^i)*(f) = sum_j D^j(f) i^j / j!`` and the matrix ``(i^j / j!)`` is
    invertible.
    """
    field = F.ring.field
    values = [f]
    for _ in range(r):
        values.append(F.pullback(values[-1]))
    M = [[field(Fraction(i ** j, math.factorial(j))) for j in range(r + 1)] for i in range(r + 1)]
    return solve(field, M, values)


def _two_parameter_ring(psi: ParametricMap, names=("u_1", "u_2")):
    base = psi.ring
    names = list(names)
    while any(n in base.vars for n in names):
        names = [n + "_" for n in names]
    return base.extend(names), names


def flow_law_additive(psi: ParametricMap) -> bool:
    """Check ``psi_u o psi_v = psi_{u+v}`` as an identity in two parameters."""
    if psi.shift:
        raise InputError("additive flows carry no parameter denominator")
    ring2, (u, v) = _two_parameter_ring(psi)
    U, V = ring2.var(u), ring2.var(v)
    inner = psi.in_ring(ring2, V)
    lhs = [substitute(c, inner + [U]) for c in psi.coords]
    return lhs == psi.in_ring(ring2, U + V)


def compose_flow_with_map(psi: ParametricMap, F: PolyMap, side: str) -> list[MultiPoly]:
    """Numerators of ``psi_u o F`` (side='left') or ``F o psi_u`` (side='right').

    Only for flows without a parameter denominator.
    """
    if psi.shift:
        raise InputError("use the torus module for flows with a denominator")
    ext = psi.ext_ring
    if side == "left":
        images = [ext.embed(c) for c in F.coords] + [ext.var(psi.param)]
        return [substitute(c, images) for c in psi.coords]
    return [substitute(ext.embed(c), list(psi.coords)) for c in F.coords]
