"""Polynomial self-maps of affine space and their tame factorizations."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import modular
from .errors import ArityMismatch, BudgetExceeded, InputError, NoWordFactorization, RingMismatch
from .linalg import SquareMatrix, inverse as matrix_inverse
from .modular import ModularImage
from .poly import MultiPoly, PolyRing, parse_scalar, substitute

log = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 100_000


# elementary factors


@dataclass(frozen=True)
class Affine:
    """x -> matrix @ x + shift."""

    matrix: tuple
    shift: tuple

    def coords(self, ring: PolyRing) -> list[MultiPoly]:
        gens = ring.gens()
        out = []
        for row, s in zip(self.matrix, self.shift):
            f = ring.const(s)
            for a, g in zip(row, gens):
                if a:
                    f = f + g.scale(a)
            out.append(f)
        return out

    def inverse(self, ring: PolyRing) -> "Affine":
        inv = matrix_inverse(ring.field, self.matrix)
        shift = tuple(-sum((a * s for a, s in zip(row, self.shift)), ring.field.zero)
                      for row in inv)
        return Affine(tuple(tuple(r) for r in inv), shift)

    def to_json(self, ring):
        fmt = ring.field.format
        return {"affine": {"matrix": [[fmt(a) for a in r] for r in self.matrix],
                           "shift": [fmt(s) for s in self.shift]}}


@dataclass(frozen=True)
class Elementary:
    """x_var -> x_var + poly, where poly does not involve x_var."""

    var: int
    poly: MultiPoly

    def coords(self, ring: PolyRing) -> list[MultiPoly]:
        gens = ring.gens()
        gens[self.var] = gens[self.var] + self.poly
        return gens

    def inverse(self, ring: PolyRing) -> "Elementary":
        return Elementary(self.var, -self.poly)

    def to_json(self, ring):
        return {"elem": {"var": ring.vars[self.var], "P": str(self.poly)}}


@dataclass(frozen=True)
class Permutation:
    """Coordinate i of the image is x_{perm[i]}."""

    perm: tuple

    def coords(self, ring: PolyRing) -> list[MultiPoly]:
        gens = ring.gens()
        return [gens[j] for j in self.perm]

    def inverse(self, ring: PolyRing) -> "Permutation":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return Permutation(tuple(inv))

    def to_json(self, ring):
        return {"perm": [ring.vars[j] for j in self.perm]}


def affine(ring: PolyRing, matrix, shift=None) -> Affine:
    field = ring.field
    n = ring.nvars
    m = tuple(tuple(field(a) for a in row) for row in matrix)
    if len(m) != n or any(len(r) != n for r in m):
        raise ArityMismatch(f"affine matrix must be {n}x{n}")
    if not SquareMatrix(field, m).determinant():
        raise InputError("affine matrix is singular")
    s = tuple(field(c) for c in (shift or [0] * n))
    if len(s) != n:
        raise ArityMismatch("affine shift has the wrong length")
    return Affine(m, s)


def elementary(ring: PolyRing, var, poly) -> Elementary:
    i = var if isinstance(var, int) else ring.index(var)
    if isinstance(poly, str):
        poly = ring.parse(poly)
    poly = ring.coerce(poly)
    if i in poly.variables_used():
        raise InputError(f"elementary factor polynomial involves {ring.vars[i]}")
    return Elementary(i, poly)


def permutation(ring: PolyRing, perm) -> Permutation:
    idx = tuple(p if isinstance(p, int) else ring.index(p) for p in perm)
    if sorted(idx) != list(range(ring.nvars)):
        raise InputError(f"{perm} is not a permutation of the variables")
    return Permutation(idx)


def factor_from_json(ring: PolyRing, doc: dict):
    if set(doc) == {"affine"}:
        a = doc["affine"]
        extra = set(a) - {"matrix", "shift"}
        if extra:
            raise InputError(f"unknown affine keys {sorted(extra)}")
        matrix = [[parse_scalar(ring.field, c) for c in row] for row in a["matrix"]]
        shift = [parse_scalar(ring.field, c) for c in a.get("shift", [0] * ring.nvars)]
        return affine(ring, matrix, shift)
    if set(doc) == {"elem"}:
        e = doc["elem"]
        if set(e) != {"var", "P"}:
            raise InputError("elem factor needs exactly 'var' and 'P'")
        return elementary(ring, e["var"], e["P"])
    if set(doc) == {"perm"}:
        return permutation(ring, doc["perm"])
    raise InputError(f"unknown word factor {doc!r}")


# maps


class PolyMap:
    """A polynomial self-map ``x -> (coords[0](x), ..., coords[n-1](x))``.

    ``word`` (optional) lists elementary factors ``f1, ..., fk`` with
    ``self = f1 o ... o fk``; it is what makes :func:`invert` possible.
    """

    def __init__(self, ring: PolyRing, coords, word=None):
        coords = [c if isinstance(c, MultiPoly) else ring.parse(c) if isinstance(c, str)
                  else ring.const(c) for c in coords]
        if len(coords) != ring.nvars:
            raise ArityMismatch(f"{len(coords)} coordinates for {ring.nvars} variables")
        for c in coords:
            if c.ring != ring:
                raise RingMismatch("coordinate outside the map's ring")
        self.ring = ring
        self.coords = tuple(coords)
        self.word = tuple(word) if word is not None else None

    @classmethod
    def identity(cls, ring: PolyRing) -> "PolyMap":
        return cls(ring, ring.gens(), word=())

    @classmethod
    def from_word(cls, ring: PolyRing, word, check_jacobian: bool = True) -> "PolyMap":
        F = cls.identity(ring)
        for factor in word:
            F = compose(F, cls(ring, factor.coords(ring), word=(factor,)))
        if check_jacobian:
            det = F.jacobian_determinant()
            if not det.is_constant() or not det:
                raise AssertionError("word-built map has non-constant Jacobian determinant")
        return F

    @classmethod
    def from_json(cls, ring: PolyRing, doc: dict) -> "PolyMap":
        keys = set(doc)
        if keys - {"coords", "word"} or not keys:
            raise InputError("map descriptor needs 'coords' and/or 'word'")
        word = None
        if "word" in doc:
            word = [factor_from_json(ring, f) for f in doc["word"]]
            F = cls.from_word(ring, word)
            if "coords" in doc:
                G = cls(ring, doc["coords"])
                if G.coords != F.coords:
                    raise InputError("coords do not match the expanded word")
            return F
        return cls(ring, doc["coords"])

    def to_json(self) -> dict:
        out = {"coords": [str(c) for c in self.coords]}
        if self.word is not None:
            out["word"] = [f.to_json(self.ring) for f in self.word]
        return out

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.ring == other.ring and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"PolyMap({[str(c) for c in self.coords]})"

    def __call__(self, point):
        return [c.evaluate(point) for c in self.coords]

    def pullback(self, f: MultiPoly) -> MultiPoly:
        """``f o self``."""
        return substitute(f, self.coords)

    def is_identity(self) -> bool:
        return self.coords == tuple(self.ring.gens())

    def term_count(self) -> int:
        return sum(len(c) for c in self.coords)

    def degree(self) -> int:
        return max(c.total_degree() for c in self.coords)

    def jacobian_matrix(self) -> list[list[MultiPoly]]:
        return [[c.derivative(j) for j in range(self.ring.nvars)] for c in self.coords]

    def jacobian_determinant(self) -> MultiPoly:
        return _poly_det(self.jacobian_matrix(), self.ring)

    def check_jacobian(self) -> bool:
        """Whether det dF is a nonzero constant; a warning, not a proof, for raw maps."""
        det = self.jacobian_determinant()
        ok = bool(det) and det.is_constant()
        if not ok and self.word is None:
            log.warning("Jacobian determinant of raw map is not a nonzero constant")
        return ok

    def power(self, n: int, max_terms: int = DEFAULT_MAX_TERMS) -> "PolyMap":
        if n < 0:
            return invert(self).power(-n, max_terms)
        result = PolyMap.identity(self.ring)
        for _ in range(n):
            result = compose(self, result, max_terms=max_terms)
        return result


def _poly_det(m, ring):
    n = len(m)
    if n == 0:
        return ring.one()
    if n == 1:
        return m[0][0]
    total = ring.zero()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _poly_det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def compose(F: PolyMap, G: PolyMap, max_terms: int | None = None) -> PolyMap:
    """``F o G``: first apply G, then F."""
    if F.ring != G.ring:
        raise RingMismatch("maps live in different rings")
    coords = [substitute(c, G.coords) for c in F.coords]
    if max_terms is not None and sum(len(c) for c in coords) > max_terms:
        raise BudgetExceeded(f"composition exceeds {max_terms} terms")
    word = F.word + G.word if F.word is not None and G.word is not None else None
    return PolyMap(F.ring, coords, word)


def invert(F: PolyMap) -> PolyMap:
    if F.word is None:
        raise NoWordFactorization("map has no elementary factorization")
    word = [f.inverse(F.ring) for f in reversed(F.word)]
    return PolyMap.from_word(F.ring, word, check_jacobian=False)


def verify_conjugacy(h: PolyMap, A: PolyMap, B: PolyMap) -> bool:
    """Whether ``B = h o A o h^-1``, checked as ``h o A == B o h``."""
    if h.word is None:
        raise NoWordFactorization("conjugator must carry a word")
    if not (h.ring == A.ring == B.ring):
        raise RingMismatch("maps live in different rings")
    return compose(h, A).coords == compose(B, h).coords


def conjugate(h: PolyMap, F: PolyMap) -> PolyMap:
    """``h o F o h^-1``."""
    return compose(compose(h, F), invert(h))


# degree growth


def _degree_upper_bounds(F: PolyMap, prev: list[int]) -> list[int]:
    out = []
    for c in F.coords:
        best = -1
        for exps, _ in c.items():
            best = max(best, sum(e * d for e, d in zip(exps, prev)))
        out.append(best)
    return out


def _line_degrees(F: PolyMap, N: int, seed: int = 1, lines: int = 3) -> list[list[int]]:
    """Degrees of ``F^n`` restricted to random lines, computed mod p.

    Each value is a lower bound for the total degree of the matching
    coordinate of ``F^n``.
    """
    img = ModularImage(F.ring.field, seed=seed)
    def run(mi):
        p = mi.p
        Fm = [mi.poly(c) for c in F.coords]
        best = [[-1] * F.ring.nvars for _ in range(N)]
        for _ in range(lines):
            cur = []
            for _j in range(F.ring.nvars):
                a, b = mi._rng.randrange(1, p), mi._rng.randrange(0, p)
                cur.append({k: v for k, v in ((1, a), (0, b)) if v})
            for n in range(N):
                cur = [modular.substitute(F.ring, c, cur, p) for c in Fm]
                for j, c in enumerate(cur):
                    d = max(c) if c else -1
                    best[n][j] = max(best[n][j], d)
        return best

    return img.retry(run)


def iterate_degrees(F: PolyMap, N: int, max_terms: int = DEFAULT_MAX_TERMS,
                    exact_threshold: int = 200) -> list[int]:
    """``d(n) = max_i deg (F^n)_i`` for ``n = 1..N``.

    Iterates are expanded while they stay below ``exact_threshold`` terms.
    Past that, a degree is accepted only when the propagated upper bound
    matches the degree seen on a line (computed mod p); otherwise the iterate
    is expanded under ``max_terms``.
    """
    if N < 1:
        raise InputError("N must be positive")
    result = []
    current = PolyMap.identity(F.ring)
    exact_n = 0
    degs = [1] * F.ring.nvars
    lower = None
    for n in range(1, N + 1):
        if current is not None and current.term_count() <= exact_threshold:
            current = compose(F, current, max_terms=max_terms)
            exact_n = n
            degs = [c.total_degree() for c in current.coords]
            result.append(max(degs))
            continue
        current = None
        degs = _degree_upper_bounds(F, degs)
        if lower is None:
            lower = _line_degrees(F, N)
        if max(lower[n - 1]) == max(degs):
            result.append(max(degs))
            continue
        # sandwich did not close: expand for real
        G = F.power(exact_n, max_terms=max_terms)
        for _ in range(exact_n, n):
            G = compose(F, G, max_terms=max_terms)
        degs = [c.total_degree() for c in G.coords]
        result.append(max(degs))
        exact_n = n
    return result


# finite order


def order_up_to(F: PolyMap, bound: int, max_terms: int = DEFAULT_MAX_TERMS,
                seed: int = 7, samples: int = 3) -> int | None:
    """Smallest ``d <= bound`` with ``F^d = Id``, else None.

    Candidate orders are screened by following random point orbits mod p;
    any candidate is then confirmed by exact composition.
    """
    if bound < 1:
        raise InputError("bound must be positive")
    if F.is_identity():
        return 1
    mi = ModularImage(F.ring.field, seed=seed)

    def orbit_returns(mi):
        p = mi.p
        Fm = [mi.poly(c) for c in F.coords]
        pts = [[mi._rng.randrange(p) for _ in range(F.ring.nvars)] for _ in range(samples)]
        hits = []
        cur = [list(q) for q in pts]
        for d in range(1, bound + 1):
            cur = [[modular.evaluate(F.ring, c, q, p) for c in Fm] for q in cur]
            if cur == pts:
                hits.append(d)
        return hits

    candidates = mi.retry(orbit_returns)
    power = PolyMap.identity(F.ring)
    done = 0
    for d in candidates:
        for _ in range(done, d):
            power = compose(F, power, max_terms=max_terms)
        done = d
        if power.is_identity():
            return d
    return None


# differentials


def jacobian_at(F: PolyMap, point) -> SquareMatrix:
    """Matrix of partial derivatives, ``M[i][j] = dF_i/dx_j (point)``."""
    if len(point) != F.ring.nvars:
        raise ArityMismatch("point arity does not match the ring")
    rows = [[entry.evaluate(point) for entry in row] for row in F.jacobian_matrix()]
    return SquareMatrix(F.ring.field, rows)


def is_unipotent(M: SquareMatrix) -> bool:
    return M.is_unipotent()
