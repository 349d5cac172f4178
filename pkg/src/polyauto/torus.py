"""Multiplicative one-parameter actions and the finite-part decomposition.

A semisimple automorphism F with eigenvalue base ``a`` (not a root of unity)
splits each polynomial into weight components ``f_i`` with
``F*(f_i) = a^i f_i``.  The components are recovered by solving the
Vandermonde system ``(F^j)*(f) = sum_i a^(j*i) f_i`` and then assembled into
a G_m-flow ``psi_v`` with ``psi_a = F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .endo import PolyMap, compose
from .errors import (FinitePartNotOrder, InputError, NoRootInField, NotSemisimple,
                     PowerMismatch, RangeTooSmall, RingMismatch, RootOfUnityScalar, ZeroInput)
from .linalg import solve
from .lnd import ParametricMap
from .poly import MultiPoly


@dataclass
class WeightDecomposition:
    base: MultiPoly
    weights: list
    components: dict = dc_field(default_factory=dict)

    def nonzero(self) -> dict:
        return {w: c for w, c in self.components.items() if c}

    def to_json(self) -> dict:
        return {str(w): str(c) for w, c in sorted(self.nonzero().items(), reverse=True)}


@dataclass(frozen=True)
class GroupElement:
    """An element h of G_a (``kind='additive'``) or G_m (``kind='multiplicative'``)."""

    kind: str
    value: object

    def __post_init__(self):
        if self.kind not in ("additive", "multiplicative"):
            raise InputError(f"unknown group kind {self.kind!r}")


def _check_scalar(field, a):
    a = field(a)
    if not a:
        raise ZeroInput("weight base must be nonzero")
    if field.is_root_of_unity(a) is not None:
        raise RootOfUnityScalar(f"{field.format(a)} is a root of unity")
    return a


def weight_split(F: PolyMap, a, f: MultiPoly, weight_range) -> WeightDecomposition:
    """Split ``f`` into eigencomponents of ``F*`` with eigenvalues ``a^i``, r <= i <= s."""
    field = F.ring.field
    a = _check_scalar(field, a)
    if f.ring != F.ring:
        raise RingMismatch("polynomial and map live in different rings")
    r, s = weight_range
    if r > s:
        raise InputError("empty weight range")
    n = s - r + 1
    values = [f]
    for _ in range(n - 1):
        values.append(F.pullback(values[-1]))
    weights = list(range(r, s + 1))
    matrix = [[field.power(a, j * i) for i in weights] for j in range(n)]
    comps = solve(field, matrix, values)
    decomposition = WeightDecomposition(f, weights, dict(zip(weights, comps)))
    total = F.ring.zero()
    for i, c in decomposition.components.items():
        if F.pullback(c) != c.scale(field.power(a, i)):
            raise RangeTooSmall(f"component of weight {i} is not an eigenvector")
        total = total + c
    if total != f:
        raise RangeTooSmall("components do not sum back to f")
    return decomposition


def build_gm_flow(F: PolyMap, a, param: str = "v", max_weight: int = 32) -> ParametricMap:
    """G_m-flow ``psi_v`` with ``psi_a = F``, built from the weight components of the variables."""
    field = F.ring.field
    a = _check_scalar(field, a)
    ring = F.ring
    per_var = []
    for j in range(ring.nvars):
        x = ring.var(j)
        d = max(1, F.coords[j].total_degree())
        while True:
            try:
                per_var.append(weight_split(F, a, x, (-d, d)).nonzero())
                break
            except RangeTooSmall:
                if d >= max_weight:
                    raise NotSemisimple(
                        f"{ring.vars[j]} has no weight decomposition with |weight| <= {max_weight}"
                    ) from None
                d = min(2 * d, max_weight)
    low = min((w for comps in per_var for w in comps), default=0)
    shift = max(0, -low)
    ext = ring.extend([param])
    v = ext.var(param)
    coords = []
    for comps in per_var:
        c = ext.zero()
        for w, part in comps.items():
            c = c + ext.embed(part) * v ** (w + shift)
        coords.append(c)
    psi = ParametricMap(ring, param, coords, shift)
    if psi.at(a) != F:
        raise NotSemisimple("assembled flow does not specialize back to F")
    return psi


def _substitute_scaled(f: MultiPoly, images, extra, den: MultiPoly, shift: int):
    """Return ``(num, e)`` with ``f(images/den^shift, extra) = num / den^e``.

    ``f``'s ring is the base ring (``len(images)`` variables) optionally
    followed by parameter variables mapped to ``extra``.
    """
    target = den.ring
    nb = len(images)
    deg = max((sum(exps[:nb]) for exps, _ in f.items()), default=0)
    cache = {}

    def pw(key, base, e):
        if (key, e) not in cache:
            cache[(key, e)] = base ** e
        return cache[(key, e)]

    bases = list(images) + list(extra)
    num = target.zero()
    for exps, c in f.items():
        term = target.const(c)
        for k, e in enumerate(exps):
            if e:
                term = term * pw(k, bases[k], e)
        pad = shift * (deg - sum(exps[:nb]))
        if pad:
            term = term * pw("den", den, pad)
        num = num + term
    return num, shift * deg


def flow_law_multiplicative(psi: ParametricMap) -> bool:
    """Check ``psi_v o psi_w = psi_{vw}`` as an identity of Laurent polynomials."""
    base = psi.ring
    names = ["v_1", "v_2"]
    while any(n in base.vars for n in names):
        names = [n + "_" for n in names]
    ring2 = base.extend(names)
    V, W = ring2.var(names[0]), ring2.var(names[1])
    inner = psi.in_ring(ring2, W)
    N = psi.shift
    for C in psi.coords:
        L, e = _substitute_scaled(C, inner, [V], W, N)
        rhs = _substitute_scaled(C, [ring2.var(x) for x in base.vars], [V * W], W, 0)[0]
        # lhs = L / (v^N w^e), rhs = C(x, vw) / (vw)^N
        if L * W ** N != rhs * W ** e:
            return False
    return True


def commutes_with_flow(F: PolyMap, psi: ParametricMap) -> bool:
    """Whether ``F o psi_u = psi_u o F`` identically in the parameter."""
    if F.ring != psi.ring:
        raise RingMismatch("map and flow live in different rings")
    ext = psi.ext_ring
    u = ext.var(psi.param)
    N = psi.shift
    F_ext = [ext.embed(c) for c in F.coords]
    for Fj, Cj in zip(F.coords, psi.coords):
        # F_j(C/u^N) = A / u^e ;  C_j(F, u) / u^N
        A, e = _substitute_scaled(Fj, list(psi.coords), [], u, N)
        B = _substitute_scaled(Cj, F_ext, [u], u, 0)[0]
        if A * u ** N != B * u ** e:
            return False
    return True


@dataclass
class Decomposition:
    """``F = delta o psi_b`` with ``delta`` of finite order commuting with psi."""

    delta: PolyMap
    b: object
    r: int
    delta_order: int

    def to_json(self) -> dict:
        field = self.delta.ring.field
        return {"delta": self.delta.to_json(), "b": field.format(self.b),
                "r": self.r, "delta_order": self.delta_order}


def finite_part_decompose(F: PolyMap, psi: ParametricMap, r: int, h: GroupElement) -> Decomposition:
    """Split F with ``F^r = psi_h`` into a finite part and a flow element."""
    if r < 1:
        raise InputError("r must be a positive integer")
    field = F.ring.field
    hv = field(h.value)
    if h.kind == "multiplicative" and not hv:
        raise ZeroInput("multiplicative element must be nonzero")
    if F.power(r) != psi.at(hv):
        raise PowerMismatch(f"F^{r} differs from psi at {field.format(hv)}")
    if not commutes_with_flow(F, psi):
        raise InputError("F does not commute with the flow")
    if h.kind == "additive":
        b = hv / r
        delta = compose(F, psi.at(-b))
    else:
        b = field.nth_root(hv, r)
        if b is None:
            raise NoRootInField(f"no {r}-th root of {field.format(hv)} in the field")
        delta = compose(F, psi.at(field.one / b))
    delta = PolyMap(F.ring, delta.coords)
    order = None
    power = PolyMap.identity(F.ring)
    for k in range(1, r + 1):
        power = compose(delta, power)
        if power.is_identity():
            order = k
            break
    if order is None or r % order:
        raise FinitePartNotOrder(f"finite part does not satisfy delta^{r} = Id")
    if compose(delta, psi.at(b)) != F or not commutes_with_flow(delta, psi):
        raise FinitePartNotOrder("decomposition checks failed")
    return Decomposition(delta, b, r, order)
