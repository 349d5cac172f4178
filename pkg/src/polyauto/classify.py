"""Polynomial invariants and the transcendence-degree classifier for plane maps.

``n(F)`` is the transcendence degree of the field of rational invariants of
F.  For an automorphism of the plane it is 2 exactly when F has finite
order; otherwise a nonconstant invariant forces 1, and a unique fixpoint
with unipotent, nontrivial differential forces 0.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field

from . import modular
from .endo import PolyMap, compose, is_unipotent, jacobian_at, order_up_to
from .errors import (ArityMismatch, BudgetExceeded, InputError, InvalidFormParameters,
                     NotUnipotentWithinBound, ZeroInput)
from .ideal import buchberger, fixpoint_ideal, rational_fixpoint_candidate
from .linalg import rref_rows, sparse_kernel
from .lnd import log_unipotent
from .modular import ModularImage
from .poly import MultiPoly, PolyRing
from .scalar import QQ

log = logging.getLogger(__name__)

DEFAULT_ORDER_BOUND = 64
DEFAULT_INVARIANT_DEGREE_BOUND = 8


# invariants


def _monomials(ring: PolyRing, D: int) -> list[int]:
    keys = []
    for d in range(D + 1):
        for combo in itertools.combinations_with_replacement(range(ring.nvars), d):
            exps = [0] * ring.nvars
            for i in combo:
                exps[i] += 1
            keys.append(ring.pack(exps))
    return sorted(set(keys), key=lambda k: ring.order_key(k, "degrevlex"))


def _pullbacks(ring: PolyRing, monos, images, mul, one):
    """``m o F`` for every monomial, each built from a smaller one by one factor."""
    cache = {0: one}
    order = min(range(ring.nvars), key=lambda i: len(images[i]))
    for k in monos:
        if k in cache:
            continue
        exps = ring.unpack(k)
        i = next(j for j in sorted(range(ring.nvars), key=lambda j: (j != order, j)) if exps[j])
        smaller = list(exps)
        smaller[i] -= 1
        cache[k] = mul(cache[ring.pack(smaller)], images[i])
    return cache


def _modular_kernel(F: PolyMap, monos, seed: int):
    mi = ModularImage(F.ring.field, seed=seed)

    def run(mi):
        p = mi.p
        images = [mi.poly(c) for c in F.coords]
        pbs = _pullbacks(F.ring, monos, images, lambda a, b: modular.mul(a, b, p), {0: 1})
        vectors = [modular.add(pbs[k], {k: p - 1}, p) for k in monos]
        return p, modular.kernel(vectors, p)

    return mi.retry(run)


def _lift_rational(F: PolyMap, monos, rows, p):
    """Rational reconstruction of modular basis rows; None if any entry fails."""
    ring = F.ring
    out = []
    for row in rows:
        terms = {}
        for idx, c in row.items():
            q = modular.rational_reconstruction(c, p)
            if q is None:
                return None
            terms[monos[idx]] = q
        out.append(MultiPoly(ring, terms))
    return out


def invariant_basis(F: PolyMap, D: int, seed: int = 11) -> list[MultiPoly]:
    """Echelon basis of ``{f : deg f <= D, f o F = f}``, ascending by leading monomial.

    The kernel is first found mod p.  A one-dimensional modular kernel
    certifies that only constants are invariant.  Over QQ the modular echelon
    form is lifted by rational reconstruction and every lifted polynomial is
    checked exactly; the lift is complete because its size matches the
    modular dimension, an upper bound for the exact one.  Anything else falls
    back to exact elimination.
    """
    if D < 0:
        raise InputError("degree bound must be non-negative")
    ring = F.ring
    monos = _monomials(ring, D)
    key = lambda idx: ring.order_key(monos[idx], "degrevlex")
    p, relations = _modular_kernel(F, monos, seed)
    if len(relations) == 1:
        return [ring.one()]
    if ring.field == QQ:
        lifted = _lift_rational(F, monos, modular.rref(relations, p, key), p)
        if lifted is not None and all(F.pullback(f) == f for f in lifted):
            return lifted
        log.info("modular lift failed; solving exactly")
    return _exact_invariants(F, monos, key)


def _exact_invariants(F: PolyMap, monos, key):
    ring = F.ring
    pbs = _pullbacks(ring, monos, list(F.coords), lambda a, b: a * b, ring.one())
    vectors = []
    for k in monos:
        v = dict(pbs[k].terms)
        c = v.get(k, ring.field.zero) - ring.field.one
        if c:
            v[k] = c
        else:
            v.pop(k, None)
        vectors.append(v)
    relations = sparse_kernel(ring.field, vectors)
    rows = rref_rows(ring.field, relations, key)
    basis = [MultiPoly(ring, {monos[i]: c for i, c in row.items()}) for row in rows]
    for f in basis:
        if F.pullback(f) != f:
            raise AssertionError("kernel vector is not invariant")
    return basis


def diag_invariant_monomials(n: int, m: int, a, b, bound: int, field=QQ) -> list[tuple[int, int]]:
    """Exponents (p, q) with x^p y^q invariant under ``(a^n x, a^m b y)``."""
    if (n, m) == (0, 0):
        raise InvalidFormParameters("(n, m) must not both vanish")
    a, b = field(a), field(b)
    try:
        if field.is_root_of_unity(a) is not None:
            raise InvalidFormParameters("a must not be a root of unity")
        order_b = field.is_root_of_unity(b)
    except ZeroInput:
        raise InvalidFormParameters("a and b must be nonzero") from None
    if order_b is None:
        raise InvalidFormParameters("b must be a root of unity")
    out = []
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if (p, q) != (0, 0) and n * p + m * q == 0 and q % order_b == 0:
                out.append((p, q))
    return out


# normal forms


@dataclass(frozen=True)
class NormalForm:
    """``Phi1``: (a^n x, a^m b y); ``Phi2``: (a x, b y + P(x))."""

    kind: str
    a: object
    b: object
    n: int | None = None
    m: int | None = None
    P: MultiPoly | None = None

    def to_json(self, field) -> dict:
        out = {"kind": self.kind, "a": field.format(self.a), "b": field.format(self.b)}
        if self.kind == "Phi1":
            out.update(n=self.n, m=self.m)
        else:
            out["P"] = str(self.P)
        return out


def _single_term(f: MultiPoly, key: int):
    return f.terms[key] if len(f.terms) == 1 and key in f.terms else None


def _phi1_parameters(field, alpha, beta, search: int = 12):
    def torsion(c):
        return field.is_root_of_unity(c) is not None

    if torsion(alpha):
        if alpha != field.one or torsion(beta):
            return None
        return 0, 1, beta, field.one
    for k in range(1, search + 1):
        a = alpha if k == 1 else field.nth_root(alpha, k)
        if a is None:
            continue
        for m in sorted(range(-search, search + 1), key=lambda t: (abs(t), t < 0)):
            b = beta / field.power(a, m)
            if torsion(b):
                return k, m, a, b
    return None


def recognize_normal_form(F: PolyMap) -> NormalForm | None:
    """Literal pattern match of the coordinates against Phi1 and Phi2."""
    ring = F.ring
    if ring.nvars != 2:
        raise ArityMismatch("normal forms are defined for plane maps")
    field = ring.field
    kx, ky = ring.pack((1, 0)), ring.pack((0, 1))
    alpha = _single_term(F.coords[0], kx)
    if alpha is None:
        return None
    beta = _single_term(F.coords[1], ky)
    if beta is not None:
        params = _phi1_parameters(field, alpha, beta)
        if params is None:
            return None
        n, m, a, b = params
        return NormalForm("Phi1", a, b, n=n, m=m)
    if field.is_root_of_unity(alpha) is None:
        return None
    rest = dict(F.coords[1].terms)
    b = rest.pop(ky, None)
    if b is None or field.is_root_of_unity(b) is None or not rest:
        return None
    if any(ring.unpack(k)[1] for k in rest):
        return None
    t_ring = PolyRing(field, ["t"])
    P = MultiPoly(t_ring, {t_ring.pack((ring.unpack(k)[0],)): c for k, c in rest.items()})
    return NormalForm("Phi2", alpha, b, P=P)


def _rational_witness(F: PolyMap, nf: NormalForm, bound: int = 12):
    """Smallest invariant monomial x^p y^q of a Phi1 form, as (numerator, denominator)."""
    pairs = diag_invariant_monomials(nf.n, nf.m, nf.a, nf.b, bound, F.ring.field)
    if not pairs:
        return None
    p, q = min(pairs, key=lambda pq: (abs(pq[0]) + abs(pq[1]), -pq[0], -pq[1]))
    ring = F.ring
    num = ring.monomial((max(p, 0), max(q, 0)))
    den = ring.monomial((max(-p, 0), max(-q, 0)))
    if F.pullback(num) * den != F.pullback(den) * num:
        raise AssertionError("diagonal monomial is not invariant")
    return num, den


# infinite order


def _matrix_certificate(M, field) -> str | None:
    if M.is_unipotent() and not M.is_identity():
        return "differential at a fixpoint is unipotent and not the identity"
    det = M.determinant()
    if det and field.is_root_of_unity(det) is None:
        return "differential at a fixpoint has determinant of infinite order"
    trace = sum((M[i, i] for i in range(M.n)), field.zero)
    if field.kind == "rationals" and abs(trace) > M.n:
        return "differential at a fixpoint has a trace no finite-order matrix can have"
    if field.kind == "rational_functions" and not field.is_rational(trace):
        return "differential at a fixpoint has a non-constant trace"
    return None


def _log_certificate(F: PolyMap, exponents=(1, 2, 3, 4, 6), max_terms: int = 2000) -> str | None:
    power = PolyMap.identity(F.ring)
    done = 0
    for e in exponents:
        try:
            for _ in range(done, e):
                power = compose(F, power, max_terms=max_terms)
            done = e
            D = log_unipotent(power, bound=32, max_terms=max_terms)
        except (BudgetExceeded, NotUnipotentWithinBound):
            continue
        if not D.is_zero():
            return f"F^{e} is the exponential of a nonzero locally nilpotent derivation"
    return None


def infinite_order_certificate(F: PolyMap, nf: NormalForm | None = None, point=None) -> str | None:
    """A reason why F has infinite order, or None if none of the tests applies."""
    field = F.ring.field
    det = F.jacobian_determinant()
    if det.is_constant() and det:
        c = det.constant_value()
        if field.is_root_of_unity(c) is None:
            return "Jacobian determinant is not a root of unity"
    if nf is not None and nf.kind == "Phi1":
        return "diagonal normal form with a of infinite order"
    if point is not None:
        reason = _matrix_certificate(jacobian_at(F, point), field)
        if reason:
            return reason
    return _log_certificate(F)


# classifier


@dataclass
class ClassificationReport:
    verdict: str
    n: int | None = None
    matched_form: NormalForm | None = None
    witnesses: list = dc_field(default_factory=list)
    rational_witnesses: list = dc_field(default_factory=list)
    evidence: list = dc_field(default_factory=list)
    field: object = QQ

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "n": self.n,
            "matched_form": self.matched_form.to_json(self.field) if self.matched_form else None,
            "witnesses": [str(f) for f in self.witnesses],
            "rational_witnesses": [f"({num})/({den})" for num, den in self.rational_witnesses],
            "evidence": self.evidence,
        }


def classify_plane(F: PolyMap, order_bound: int = DEFAULT_ORDER_BOUND,
                   invariant_degree_bound: int = DEFAULT_INVARIANT_DEGREE_BOUND) -> ClassificationReport:
    """Decide n(F) for a plane map, recording the evidence for every step.

    The steps run in a fixed order: finite order, invariants (polynomial up
    to the degree bound, or rational for a diagonal normal form), then the
    unique-fixpoint criterion.  A verdict of 1 also needs a certificate of
    infinite order; without one the result is inconclusive.
    """
    ring = F.ring
    if ring.nvars != 2:
        raise ArityMismatch("classify_plane expects a map of the plane")
    field = ring.field
    report = ClassificationReport("inconclusive", field=field)
    ev = report.evidence

    d = order_up_to(F, order_bound)
    ev.append({"step": "order", "bound": order_bound, "order": d})
    if d is not None:
        report.verdict, report.n = "n_equals", 2
        return report

    nf = recognize_normal_form(F)
    report.matched_form = nf
    ev.append({"step": "normal_form", "form": nf.to_json(field) if nf else None})
    basis = invariant_basis(F, invariant_degree_bound)
    report.witnesses = [f for f in basis if not f.is_constant()]
    ev.append({"step": "invariants", "degree_bound": invariant_degree_bound,
               "basis": [str(f) for f in basis]})
    if nf is not None and nf.kind == "Phi1" and not report.witnesses:
        rw = _rational_witness(F, nf)
        if rw is not None:
            report.rational_witnesses.append(rw)

    fixpoint_gb = buchberger(fixpoint_ideal(F))
    ev.append({"step": "fixpoint_locus", "groebner_basis": fixpoint_gb.to_json()["basis"]})
    point = rational_fixpoint_candidate(F)
    ev.append({"step": "unique_fixpoint",
               "point": None if point is None else [field.format(c) for c in point]})

    if report.witnesses or report.rational_witnesses:
        reason = infinite_order_certificate(F, nf, point)
        ev.append({"step": "infinite_order", "certificate": reason})
        if reason is not None:
            report.verdict, report.n = "n_equals", 1
        return report

    if point is not None and not F.is_identity():
        M = jacobian_at(F, point)
        unip = is_unipotent(M)
        ev.append({"step": "differential", "jacobian": M.to_json(), "unipotent": unip})
        if unip:
            report.verdict, report.n = "n_equals", 0
            return report

    reason = infinite_order_certificate(F, nf, point)
    ev.append({"step": "infinite_order", "certificate": reason})
    if reason is not None:
        report.verdict, report.n = "n_at_most", 1
    return report
