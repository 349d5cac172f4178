import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polyauto.endo import PolyMap, compose
from polyauto.errors import (NoRootInField, NotSemisimple, PowerMismatch, RangeTooSmall,
                             RootOfUnityScalar)
from polyauto.lnd import ParametricMap
from polyauto.poly import PolyRing
from polyauto.scalar import QQ, cyclotomic
from polyauto.torus import (GroupElement, build_gm_flow, commutes_with_flow,
                            finite_part_decompose, flow_law_multiplicative, weight_split)

from conftest import polys

R = PolyRing(QQ, ["x", "y"])
x, y = R.gens()
F = PolyMap(R, [2 * x, y / 2])


def test_weight_split_examples():
    split = weight_split(F, 2, x ** 2 + x * y + y, (-1, 2))
    assert split.nonzero() == {2: x ** 2, 0: x * y, -1: y}
    assert split.components[1] == R.zero()
    assert weight_split(F, 2, x * y, (0, 0)).nonzero() == {0: x * y}
    with pytest.raises(RangeTooSmall):
        weight_split(F, 2, x, (0, 0))


def test_weight_split_refuses_roots_of_unity():
    with pytest.raises(RootOfUnityScalar):
        weight_split(F, -1, x, (0, 1))


def test_finite_order_maps_have_no_nontrivial_weights():
    G = PolyMap(R, [-x, -y])
    with pytest.raises(RangeTooSmall):
        weight_split(G, 2, x, (-2, 2))


def test_gm_flow_examples():
    psi = build_gm_flow(F, 2)
    v = psi.ext_ring.var("v")
    X, Y = psi.ext_ring.var("x"), psi.ext_ring.var("y")
    assert psi.shift == 1 and psi.coords == (v ** 2 * X, Y)  # (vx, y/v) over v^1
    assert psi.at(2) == F and psi.at(1).is_identity()
    assert flow_law_multiplicative(psi)
    psi = build_gm_flow(PolyMap(R, [4 * x, 2 * y]), 2)
    assert psi.shift == 0 and psi.coords == (v ** 2 * X, v * Y)
    with pytest.raises(NotSemisimple):
        build_gm_flow(PolyMap(R, [x, y + x ** 2]), 2)


def test_gm_flow_of_a_nonlinear_semisimple_map():
    # a triangular conjugate of a diagonal map is still semisimple
    G = PolyMap(R, [2 * x, y / 2])
    h = PolyMap(R, [x, y + x ** 2])
    hinv = PolyMap(R, [x, y - x ** 2])
    C = compose(compose(h, G), hinv)
    psi = build_gm_flow(C, 2)
    assert psi.at(2) == C and flow_law_multiplicative(psi)


def test_flow_law_detects_a_bad_family():
    bad = ParametricMap(R, "v", ["v*x + 1", "y"])
    assert not flow_law_multiplicative(bad)


def test_commutation_examples():
    psi_v = build_gm_flow(F, 2)
    assert commutes_with_flow(F, psi_v)
    psi_u = ParametricMap(R, "u", ["x", "y + u*x^2"])
    assert commutes_with_flow(PolyMap(R, [x, y + x ** 2]), psi_u)
    assert not commutes_with_flow(PolyMap(R, [y, x]), psi_u)


def test_decomposition_examples():
    psi = ParametricMap(R, "u", ["x", "y + u*x^2"])
    G = PolyMap(R, [-x, y + x ** 2])
    d = finite_part_decompose(G, psi, 2, GroupElement("additive", 2))
    assert d.delta == PolyMap(R, [-x, y]) and d.b == 1 and d.delta_order == 2
    assert compose(d.delta, d.delta).is_identity()
    assert compose(d.delta, psi.at(d.b)) == G
    d = finite_part_decompose(psi.at(1), psi, 1, GroupElement("additive", 1))
    assert d.delta.is_identity() and d.b == 1
    with pytest.raises(PowerMismatch):
        finite_part_decompose(G, psi, 2, GroupElement("additive", 3))


def test_multiplicative_decomposition():
    psi = build_gm_flow(PolyMap(R, [4 * x, 2 * y]), 2)  # (v^2 x, v y)
    G = PolyMap(R, [-4 * x, 2 * y])  # psi_2 composed with (x, y) -> (-x, y)
    d = finite_part_decompose(G, psi, 2, GroupElement("multiplicative", 4))
    assert d.delta == PolyMap(R, [-x, y]) and d.b == 2
    # psi_v = (v^2 x, y); F = (2x, y) has F^2 = psi_2, and b^2 = 2 has no rational root
    psi_sq = build_gm_flow(PolyMap(R, [4 * x, y]), 2)
    with pytest.raises(NoRootInField):
        finite_part_decompose(PolyMap(R, [2 * x, y]), psi_sq, 2, GroupElement("multiplicative", 2))


@given(polys(R, max_exp=2))
def test_split_then_resum(f):
    split = weight_split(F, 2, f, (-2, 2))
    total = R.zero()
    for i, c in split.components.items():
        assert F.pullback(c) == c.scale(QQ.power(QQ(2), i))
        total = total + c
    assert total == f


@pytest.mark.parametrize("a", [2, Fraction(1, 3), 5])
def test_flow_specializes_back(a):
    psi = build_gm_flow(PolyMap(R, [QQ(a) * x, y / QQ(a) ** 2]), a)
    assert psi.at(a).coords == (QQ(a) * x, y / QQ(a) ** 2)
    assert psi.at(1).is_identity()


def test_cyclotomic_root_extraction():
    K = cyclotomic(4)
    S = PolyRing(K, ["x", "y"])
    X, Y = S.gens()
    psi = ParametricMap(S, "u", ["x", "y + u*x^4"])
    G = PolyMap(S, [X.scale(K.zeta), Y + X ** 4])
    d = finite_part_decompose(G, psi, 4, GroupElement("additive", 4))
    assert d.delta == PolyMap(S, [X.scale(K.zeta), Y]) and d.b == 1 and d.delta_order == 4
