"""Buchberger's algorithm, normal forms and fixpoint-locus analysis."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from . import upoly
from .endo import PolyMap
from .errors import BudgetExceeded, RingMismatch
from .poly import MultiPoly, PolyRing

DEFAULT_MAX_PAIRS = 10_000
DEFAULT_MAX_TERMS = 100_000


class Ideal:
    """Ideal of ``ring`` given by generators; zero generators are dropped."""

    def __init__(self, ring: PolyRing, generators):
        gens = []
        for g in generators:
            g = ring.parse(g) if isinstance(g, str) else g
            if g.ring != ring:
                raise RingMismatch("generator outside the ideal's ring")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch("ideals live in different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def to_json(self) -> dict:
        return {"generators": [str(g) for g in self.generators]}


def _heap_key(ring: PolyRing, order: str):
    if order == "lex":
        return lambda k: -k
    unpack = ring.unpack
    return lambda k: (-sum(unpack(k)), tuple(reversed(unpack(k))))


class _Reducer:
    """Normal forms modulo a list of monic polynomials in a fixed order."""

    def __init__(self, ring: PolyRing, order: str, max_terms: int):
        self.ring = ring
        self.order = order
        self.hkey = _heap_key(ring, order)
        self.max_terms = max_terms
        self.polys: list[MultiPoly] = []
        self.lms: list[int] = []

    def lead(self, f: MultiPoly) -> int:
        return f.leading_key(self.order)

    def add(self, g: MultiPoly):
        self.polys.append(g)
        self.lms.append(self.lead(g))

    def normal_form(self, f: MultiPoly, active=None) -> MultiPoly:
        ring = self.ring
        divides = ring.divides
        idx = range(len(self.polys)) if active is None else active
        cands = [(self.lms[i], self.polys[i]) for i in idx]
        p = dict(f.terms)
        rem = {}
        hkey = self.hkey
        heap = [(hkey(k), k) for k in p]
        heapq.heapify(heap)
        while heap:
            _, k = heapq.heappop(heap)
            c = p.get(k)
            if c is None:
                continue
            for lm, g in cands:
                if divides(lm, k):
                    q = k - lm
                    for kg, cg in g.terms.items():
                        kk = kg + q
                        old = p.get(kk)
                        if old is None:
                            p[kk] = -c * cg
                            heapq.heappush(heap, (hkey(kk), kk))
                        else:
                            s = old - c * cg
                            if s:
                                p[kk] = s
                            else:
                                del p[kk]
                    if len(p) > self.max_terms:
                        raise BudgetExceeded(f"reduction exceeded {self.max_terms} terms")
                    break
            else:
                rem[k] = p.pop(k)
            # skip stale heap entries for keys removed above
            while heap and heap[0][1] not in p:
                heapq.heappop(heap)
        return MultiPoly(ring, rem, _clean=False)


@dataclass
class GroebnerBasis:
    ideal: Ideal
    order: str
    basis: list
    pairs_processed: int = 0

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring.with_order(self.order)

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return reduce(f, self)

    def contains(self, f: MultiPoly) -> bool:
        return not self.reduce(f)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def to_json(self) -> dict:
        return {"order": self.order, "basis": [str(_restore(g, self.ideal.ring)) for g in self.basis]}


def _restore(f: MultiPoly, ring: PolyRing) -> MultiPoly:
    return f if f.ring == ring else MultiPoly(ring, f.terms, _clean=False)


def _reorder(f: MultiPoly, ring: PolyRing) -> MultiPoly:
    if f.ring.vars != ring.vars or f.ring.field != ring.field:
        raise RingMismatch("polynomial outside the basis ring")
    return MultiPoly(ring, f.terms, _clean=False)


def buchberger(I: Ideal, order: str = "lex", max_pairs: int = DEFAULT_MAX_PAIRS,
               max_terms: int = DEFAULT_MAX_TERMS) -> GroebnerBasis:
    """Reduced Groebner basis of ``I``.

    Pairs are selected by smallest lcm degree (then the monomial order), ties
    broken by generator index.
    """
    ring = I.ring.with_order(order)
    red = _Reducer(ring, order, max_terms)
    one = ring.one()
    unit = GroebnerBasis(I, order, [one])
    for g in I.generators:
        g = _reorder(g, ring)
        if g.is_constant():
            return unit
        red.add(g.monic(order))
    okey = lambda k: (ring.mono_degree(k), ring.order_key(k, order))
    pairs = []
    for j in range(len(red.polys)):
        for i in range(j):
            heapq.heappush(pairs, (okey(ring.mono_lcm(red.lms[i], red.lms[j])), i, j))
    done = set()
    processed = 0
    while pairs:
        _, i, j = heapq.heappop(pairs)
        done.add((i, j))
        li, lj = red.lms[i], red.lms[j]
        lcm = ring.mono_lcm(li, lj)
        if lcm == li + lj:
            continue  # coprime leading monomials
        if _chain_criterion(red.lms, i, j, lcm, done, ring):
            continue
        processed += 1
        if processed > max_pairs:
            raise BudgetExceeded(f"more than {max_pairs} S-pairs")
        fi, fj = red.polys[i], red.polys[j]
        s = fi.mul_term(lcm - li, ring.field.one) - fj.mul_term(lcm - lj, ring.field.one)
        h = red.normal_form(s)
        if not h:
            continue
        if h.is_constant():
            return GroebnerBasis(I, order, [one], processed)
        h = h.monic(order)
        red.add(h)
        k = len(red.polys) - 1
        for m in range(k):
            heapq.heappush(pairs, (okey(ring.mono_lcm(red.lms[m], red.lms[k])), m, k))
    basis = _reduce_basis(red, ring, order, max_terms)
    return GroebnerBasis(I, order, basis, processed)


def _chain_criterion(lms, i, j, lcm, done, ring) -> bool:
    for k in range(len(lms)):
        if k in (i, j):
            continue
        if ring.divides(lms[k], lcm) and _key(i, k) in done and _key(j, k) in done:
            return True
    return False


def _key(a, b):
    return (a, b) if a < b else (b, a)


def _reduce_basis(red: _Reducer, ring, order, max_terms) -> list[MultiPoly]:
    n = len(red.polys)
    keep = []
    for i in range(n):
        dominated = False
        for j in range(n):
            if i == j:
                continue
            if ring.divides(red.lms[j], red.lms[i]):
                if red.lms[j] != red.lms[i] or j < i:
                    dominated = True
                    break
        if not dominated:
            keep.append(i)
    out = []
    for i in keep:
        others = [j for j in keep if j != i]
        g = red.polys[i]
        lm = red.lms[i]
        tail = MultiPoly(ring, {k: c for k, c in g.terms.items() if k != lm}, _clean=False)
        tail = red.normal_form(tail, active=others)
        out.append(MultiPoly(ring, {**tail.terms, lm: g.terms[lm]}, _clean=False).monic(order))
    okey = lambda f: ring.order_key(f.leading_key(order), order)
    out.sort(key=okey, reverse=True)
    return out


def reduce(f: MultiPoly, G: GroebnerBasis) -> MultiPoly:
    """Normal form of ``f`` modulo the basis ``G``."""
    ring = G.ring
    f = _reorder(f, ring)
    red = _Reducer(ring, G.order, DEFAULT_MAX_TERMS * 10)
    for g in G.basis:
        red.add(g)
    return _restore(red.normal_form(f), G.ideal.ring)


def ideals_equal(I: Ideal, J: Ideal, order: str = "lex", **budgets) -> bool:
    """Equality by mutual reduction to zero."""
    GI, GJ = buchberger(I, order, **budgets), buchberger(J, order, **budgets)
    return all(GJ.contains(g) for g in I.generators) and all(GI.contains(g) for g in J.generators)


def fixpoint_ideal(F: PolyMap) -> Ideal:
    return Ideal(F.ring, [c - x for c, x in zip(F.coords, F.ring.gens())])


def _fresh_name(ring: PolyRing, base: str = "w") -> str:
    name = base
    while name in ring.vars or ring.field.atom(name) is not None:
        name += "_"
    return name


def radical_member(f: MultiPoly, I: Ideal, **budgets) -> bool:
    """``f in sqrt(I)`` iff ``1 in I + <1 - w f>`` (Rabinowitsch)."""
    if f.ring != I.ring:
        raise RingMismatch("polynomial and ideal live in different rings")
    if not f:
        return True
    ext = I.ring.extend([_fresh_name(I.ring)]).with_order("degrevlex")
    w = ext.var(ext.nvars - 1)
    gens = [ext.embed(g) for g in I.generators]
    gens.append(ext.one() - w * ext.embed(f))
    return buchberger(Ideal(ext, gens), "degrevlex", **budgets).is_unit()


def unique_fixpoint(F: PolyMap, point, **budgets) -> bool:
    """Whether ``point`` is the only fixpoint of F over the algebraic closure."""
    I = fixpoint_ideal(F)
    field = F.ring.field
    point = [field(c) for c in point]
    if any(g.evaluate(point) for g in I.generators):
        return False
    for x, c in zip(F.ring.gens(), point):
        if not radical_member(x - c, I, **budgets):
            return False
    return True


def univariate_eliminant(I: Ideal, var: int, **budgets) -> MultiPoly | None:
    """Monic generator of ``I ∩ k[x_var]``, or None when that intersection is zero."""
    ring = I.ring
    names = [v for i, v in enumerate(ring.vars) if i != var] + [ring.vars[var]]
    perm_ring = PolyRing(ring.field, names, "lex")
    G = buchberger(Ideal(perm_ring, [perm_ring.embed(g) for g in I.generators]), "lex", **budgets)
    last = perm_ring.nvars - 1
    for g in G.basis:
        if g.variables_used() <= {last}:
            return ring.embed(g)
    return None


def rational_fixpoint_candidate(F: PolyMap, **budgets):
    """The fixpoint of F if the fixpoint locus is a single rational point, else None.

    Each coordinate is read off the square-free part of the univariate
    eliminant; the candidate still has to pass :func:`unique_fixpoint`.
    """
    I = fixpoint_ideal(F)
    if not I.generators:
        return None
    point = []
    for i in range(F.ring.nvars):
        g = univariate_eliminant(I, i, **budgets)
        if g is None:
            return None
        coeffs = [g.ring.field.zero] * (g.degree_in(i) + 1)
        for exps, c in g.items():
            coeffs[exps[i]] = c
        sf = upoly.squarefree_part(tuple(coeffs))
        if len(sf) != 2:
            return None
        point.append(-sf[0] / sf[1])
    return point if unique_fixpoint(F, point, **budgets) else None
