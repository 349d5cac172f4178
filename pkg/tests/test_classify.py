import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polyauto.casestudy import plane_map
from polyauto.classify import (_exact_invariants, _monomials, classify_plane,
                               diag_invariant_monomials, infinite_order_certificate,
                               invariant_basis, recognize_normal_form)
from polyauto.endo import PolyMap, compose, conjugate, invert
from polyauto.errors import ArityMismatch, InputError, InvalidFormParameters
from polyauto.poly import PolyRing
from polyauto.scalar import QQ, cyclotomic

from conftest import random_word_map, to_sympy

R = PolyRing(QQ, ["x", "y"])
x, y = R.gens()


def sympy_invariant_dimension(F, D):
    """Dimension of the degree-<=D invariants, by sympy's linear solver."""
    X, Y = sympy.symbols("x y")
    fx, fy = (to_sympy(c) for c in F.coords)
    monos = [X ** i * Y ** j for i in range(D + 1) for j in range(D + 1 - i)]
    cs = sympy.symbols(f"c0:{len(monos)}")
    f = sum(c * m for c, m in zip(cs, monos))
    diff = sympy.expand(f.subs({X: fx, Y: fy}, simultaneous=True) - f)
    eqs = sympy.Poly(diff, X, Y).coeffs() if diff != 0 else []
    sol = sympy.Matrix([[sympy.Poly(e, *cs).coeff_monomial(c) for c in cs] for e in eqs])
    return len(monos) - (sol.rank() if eqs else 0)


def test_invariant_basis_examples():
    assert invariant_basis(PolyMap(R, [2 * x, y / 2]), 2) == [R.one(), x * y]
    assert invariant_basis(PolyMap(R, [x, y + x ** 2]), 2) == [R.one(), x, x ** 2]
    assert invariant_basis(PolyMap(R, [2 * x, y + 1]), 2) == [R.one()]


def test_invariant_basis_rejects_negative_bound():
    with pytest.raises(InputError):
        invariant_basis(PolyMap(R, [x, y]), -1)


@pytest.mark.parametrize("coords,D", [
    (["2*x", "y/2"], 4), (["x", "y + x^2"], 3), (["-x", "-y"], 3),
    (["2*x", "y + 1"], 3), (["y", "x"], 3), (["4*x", "y/2"], 4), (["x + y^2", "y"], 3),
])
def test_invariant_dimension_against_sympy(coords, D):
    F = PolyMap(R, [R.parse(c) for c in coords])
    assert len(invariant_basis(F, D)) == sympy_invariant_dimension(F, D)


@pytest.mark.parametrize("coords", [["2*x", "y/2"], ["x", "y + x^2"], ["-x", "-y"], ["y", "x"]])
@pytest.mark.parametrize("D", [2, 4])
def test_modular_and_exact_paths_agree(coords, D):
    F = PolyMap(R, [R.parse(c) for c in coords])
    monos = _monomials(R, D)
    key = lambda idx: R.order_key(monos[idx], "degrevlex")
    assert invariant_basis(F, D) == _exact_invariants(F, monos, key)


def test_invariant_basis_over_cyclotomic_field():
    K = cyclotomic(3)
    S = PolyRing(K, ["x", "y"])
    X, Y = S.gens()
    z = S.const(K.zeta)
    basis = invariant_basis(PolyMap(S, [z * X, z * Y]), 3)
    assert len(basis) == 1 + 4  # 1 and the four cubic monomials
    for f in basis:
        assert f.is_constant() or f.total_degree() == 3


@settings(max_examples=20)
@given(st.integers(0, 2 ** 32), st.integers(1, 3))
def test_invariant_basis_is_monotone_in_the_bound(seed, D):
    F = random_word_map(random.Random(seed), R, length=2)
    small, large = invariant_basis(F, D), invariant_basis(F, D + 1)
    assert small[0] == R.one()
    for f in small:
        assert F.pullback(f) == f
    # span containment: adding the smaller basis must not raise the dimension
    rows = [{k: c for k, c in f.terms.items()} for f in large + small]
    keys = sorted({k for r in rows for k in r})
    M = sympy.Matrix([[r.get(k, 0) for k in keys] for r in rows])
    assert M.rank() == len(large)


def test_diag_invariant_monomials_examples():
    got = set(diag_invariant_monomials(1, -1, 2, 1, 3))
    assert got == {(1, 1), (2, 2), (3, 3), (-1, -1), (-2, -2), (-3, -3)}
    assert set(diag_invariant_monomials(2, -1, 2, 1, 2)) == {(1, 2), (-1, -2)}
    assert set(diag_invariant_monomials(1, 0, 3, -1, 2)) == {(0, 2), (0, -2)}


@pytest.mark.parametrize("args", [(0, 0, 2, 1), (1, -1, 1, 1), (1, -1, -1, 1),
                                  (1, -1, 2, 3), (1, -1, 0, 1), (1, -1, 2, 0)])
def test_diag_invariant_monomials_rejects_bad_parameters(args):
    with pytest.raises(InvalidFormParameters):
        diag_invariant_monomials(*args, 2)


@given(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([2, 3, Fraction(1, 2)]),
       st.sampled_from([1, -1]))
def test_diag_monomials_match_brute_force(n, m, a, b):
    if (n, m) == (0, 0):
        return
    got = set(diag_invariant_monomials(n, m, a, b, 3))
    a, b = Fraction(a), Fraction(b)
    brute = {(p, q) for p in range(-3, 4) for q in range(-3, 4)
             if (p, q) != (0, 0) and a ** (n * p + m * q) * b ** q == 1}
    assert got == brute


def test_recognize_normal_form_examples():
    nf = recognize_normal_form(PolyMap(R, [2 * x, y / 2]))
    assert (nf.kind, nf.a, nf.b, nf.n, nf.m) == ("Phi1", 2, 1, 1, -1)
    nf = recognize_normal_form(PolyMap(R, [x, y + x ** 2]))
    assert (nf.kind, nf.a, nf.b, str(nf.P)) == ("Phi2", 1, 1, "t^2")
    assert recognize_normal_form(PolyMap(R, [x + y ** 2, y])) is None


def test_recognize_normal_form_other_shapes():
    assert recognize_normal_form(PolyMap(R, [x, y])) is None
    nf = recognize_normal_form(PolyMap(R, [4 * x, -y / 2]))
    assert nf.kind == "Phi1"
    assert nf.a ** nf.n == 4 and nf.a ** nf.m * nf.b == Fraction(-1, 2)
    assert recognize_normal_form(PolyMap(R, [2 * x, y + x ** 2])) is None  # a not torsion
    assert recognize_normal_form(PolyMap(R, [-x, -y + x ** 3])).kind == "Phi2"
    assert recognize_normal_form(PolyMap(R, [-x, y])) is None  # both torsion
    with pytest.raises(ArityMismatch):
        recognize_normal_form(PolyMap.identity(PolyRing(QQ, ["x"])))


def _assert_evidence(report, F):
    steps = [e["step"] for e in report.evidence]
    assert steps[0] == "order"
    for f in report.witnesses:
        assert F.pullback(f) == f and not f.is_constant()
    for num, den in report.rational_witnesses:
        assert F.pullback(num) * den == F.pullback(den) * num
    if report.verdict == "n_equals" and report.n == 2:
        assert F.power(report.evidence[0]["order"]).is_identity()
    if report.verdict == "n_equals" and report.n == 1:
        assert report.witnesses or report.rational_witnesses
        assert any(e["step"] == "infinite_order" and e["certificate"] for e in report.evidence)
    if report.verdict == "n_equals" and report.n == 0:
        diff = next(e for e in report.evidence if e["step"] == "differential")
        assert diff["unipotent"] and not F.is_identity()


def test_classify_table():
    cases = [
        (PolyMap(R, [2 * x, y / 2]), 1, "Phi1", ["x*y"]),
        (PolyMap(R, [x, y + x ** 2]), 1, "Phi2", ["x"]),
        (PolyMap(R, [-x, -y]), 2, None, []),
        (PolyMap(R, [x + y ** 2, y]), 1, None, ["y"]),
    ]
    for F, n, form, wit in cases:
        rep = classify_plane(F)
        assert (rep.verdict, rep.n) == ("n_equals", n)
        assert (rep.matched_form.kind if rep.matched_form else None) == form
        assert [str(w) for w in rep.witnesses][:len(wit)] == wit
        _assert_evidence(rep, F)
    assert classify_plane(PolyMap(R, [-x, -y])).evidence[0]["order"] == 2


def test_classify_plane_map_over_rational_functions():
    Psi = plane_map()
    rep = classify_plane(Psi)
    assert (rep.verdict, rep.n) == ("n_equals", 0)
    assert rep.witnesses == []
    _assert_evidence(rep, Psi)
    assert next(e for e in rep.evidence if e["step"] == "unique_fixpoint")["point"] == ["0", "0"]


def test_classify_identity_is_finite_order():
    rep = classify_plane(PolyMap.identity(R))
    assert (rep.n, rep.evidence[0]["order"]) == (2, 1)


def test_rational_witness_for_scaling():
    rep = classify_plane(PolyMap(R, [2 * x, 2 * y]))
    assert (rep.verdict, rep.n) == ("n_equals", 1)
    assert rep.witnesses == [] and rep.rational_witnesses == [(x, y)]


def test_translation_is_bounded_but_not_decided():
    rep = classify_plane(PolyMap(R, [2 * x, y + 1]))
    assert (rep.verdict, rep.n) == ("n_at_most", 1)
    assert [e["step"] for e in rep.evidence][-1] == "infinite_order"


def test_inconclusive_without_certificate():
    # small budgets hide both the order and the invariants
    rep = classify_plane(PolyMap(R, [-y, x]), order_bound=2, invariant_degree_bound=1)
    assert rep.verdict == "inconclusive" and rep.n is None


def test_infinite_order_certificates():
    assert infinite_order_certificate(PolyMap(R, [2 * x, y])) is not None
    assert infinite_order_certificate(PolyMap(R, [x, y + x ** 2])) is not None
    assert infinite_order_certificate(PolyMap(R, [-x, -y])) is None
    assert infinite_order_certificate(PolyMap(R, [y, x])) is None


def test_classify_rejects_non_plane_maps():
    S = PolyRing(QQ, ["x", "y", "z"])
    with pytest.raises(ArityMismatch):
        classify_plane(PolyMap.identity(S))


EXAMPLES = [PolyMap(R, [2 * x, y / 2]), PolyMap(R, [x, y + x ** 2]),
            PolyMap(R, [-x, -y]), PolyMap(R, [x + y ** 2, y])]


@pytest.mark.parametrize("seed", range(4))
def test_verdict_is_conjugation_invariant(seed):
    rng = random.Random(seed)
    h = random_word_map(rng, R, length=2)
    hinv = invert(h)
    for F in EXAMPLES:
        G = conjugate(h, F)
        base, moved = classify_plane(F), classify_plane(G)
        assert (moved.verdict, moved.n) == (base.verdict, base.n)
        for f in base.witnesses:
            g = hinv.pullback(f)
            assert G.pullback(g) == g
