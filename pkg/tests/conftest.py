"""Shared strategies and oracles for the test suite."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polyauto.poly import PolyRing
from polyauto.scalar import QQ

settings.register_profile("suite", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_fractions = small_fractions.filter(bool)


def polys(ring: PolyRing, max_terms=4, max_exp=3, coeffs=small_fractions):
    """Strategy for small sparse polynomials in ``ring``."""
    exps = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(ring.from_dict)


def to_sympy(f):
    """Independent oracle: re-read the printed polynomial with sympy."""
    syms = sympy.symbols(" ".join(f.ring.vars) + " _pad")[:-1]
    text = str(f).replace("^", "**")
    return sympy.expand(sympy.sympify(text, locals=dict(zip(f.ring.vars, syms))))


def from_sympy(ring, expr):
    return ring.parse(str(sympy.expand(expr)).replace("**", "^"))


@pytest.fixture
def R2():
    R = PolyRing(QQ, ["x", "y"])
    return (R, *R.gens())


@pytest.fixture
def R3():
    R = PolyRing(QQ, ["x", "y", "z"])
    return (R, *R.gens())


def random_factor(rng, ring, max_deg=2, affine_only=False):
    """One tame factor with small rational data, drawn from ``rng``."""
    from polyauto.endo import affine, elementary, permutation

    n = ring.nvars
    kind = "affine" if affine_only else rng.choice(["affine", "elem", "elem", "perm"])
    if kind == "affine":
        while True:
            m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            try:
                return affine(ring, m, [Fraction(rng.randint(-1, 1)) for _ in range(n)])
            except Exception:
                continue
    if kind == "perm":
        perm = list(range(n))
        rng.shuffle(perm)
        return permutation(ring, perm)
    var = rng.randrange(n)
    others = [i for i in range(n) if i != var]
    P = ring.zero()
    for _ in range(rng.randint(1, 2)):
        exps = [0] * n
        for _ in range(rng.randint(1, max_deg)):
            exps[rng.choice(others)] += 1
        P = P + ring.monomial(exps, Fraction(rng.randint(-2, 2), rng.randint(1, 2)))
    return elementary(ring, var, P)


def random_word_map(rng, ring, length=3, max_deg=2, affine_only=False):
    from polyauto.endo import PolyMap

    word = [random_factor(rng, ring, max_deg, affine_only) for _ in range(length)]
    return PolyMap.from_word(ring, word)


def word_maps(ring, length=3, max_deg=2):
    """Hypothesis strategy wrapping :func:`random_word_map`."""
    import random

    return st.integers(0, 2 ** 32).map(
        lambda s: random_word_map(random.Random(s), ring, length, max_deg))


def random_triangular(rng, ring, max_deg=4):
    """D(x_1) constant, D(x_i) a polynomial in x_1..x_{i-1}: always locally nilpotent."""
    images = [ring.const(Fraction(rng.randint(-2, 2)))]
    for i in range(1, ring.nvars):
        P = ring.zero()
        for _ in range(rng.randint(0, 3)):
            exps = [0] * ring.nvars
            for _ in range(rng.randint(0, max_deg)):
                exps[rng.randrange(i)] += 1
            P = P + ring.monomial(exps, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        images.append(P)
    from polyauto.lnd import Derivation

    return Derivation(ring, images)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "").rpartition("::")[2]
            if rep.when == "call" and name.startswith("test_criterion_"):
                num = int(name.split("_")[2])
                rows.append((num, "PASS" if outcome == "passed" else "FAIL", name, rep.duration))
    if rows:
        terminalreporter.section("acceptance criteria")
        for num, status, name, dur in sorted(rows):
            terminalreporter.write_line(f"criterion {num}: {status}  ({name}, {dur:.2f}s)")
