import json
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from n33.classifier import (
    TABLE1,
    IntersectionData,
    Rule,
    accepted_families,
    adjoint_h0,
    adjunction_step,
    chi_ideal_twist,
    classify,
    discriminant_invariants,
    double_point_residue,
    expected_normal_sections,
    hk_from_genus,
    hodge_bound,
)


def test_riemann_roch_for_ideal_twists():
    # an ACM surface with table (*) has h^0(I(m)) = 0, 0, 0, 10 for m <= 3
    assert [chi_ideal_twist(10, 6, 0, 0, m) for m in range(4)] == [0, 0, 0, 10]
    # and the Hilbert function 1, 6, 21, 46, 81 is comb(m+5, 5) - chi(I(m))
    assert [comb(m + 5, 5) - chi_ideal_twist(10, 6, 0, 0, m) for m in range(5)] == [1, 6, 21, 46, 81]


def test_genus_and_hodge():
    assert hk_from_genus(10, 6) == 0
    assert hodge_bound(10, 0) == 0
    assert hodge_bound(7, -3) == 1
    assert IntersectionData(10, 0, -3).genus == 6


@given(st.integers(1, 40), st.integers(-20, 20), st.integers(-10, 9), st.integers(0, 5))
def test_adjunction_step_identities(H2, HK, K2, ell):
    X = IntersectionData(H2, HK, K2, chi_top=12 - K2)
    Y = adjunction_step(X, ell)
    # H' = H + K, K' pushed down: (H'.K') = HK + K2, and chi is unchanged
    assert Y.H2 == H2 + 2 * HK + K2
    assert Y.HK == HK + K2
    assert Y.K2 == K2 + ell
    assert Y.chi == X.chi
    # Noether's formula is preserved by blowing down ell lines
    assert 12 * Y.chi == Y.K2 + Y.chi_top


def test_adjoint_h0():
    assert adjoint_h0(1, 6) == 6
    assert adjoint_h0(1, 5) == 5


def test_double_point_formula():
    # the Veronese surface is not in P^4; a cubic scroll in P^4: d=3, HK=-5, K^2=8, chi=1
    assert double_point_residue(3, -5, 8, 1) == 0
    assert double_point_residue(7, -1, 0, 1) == -4
    assert double_point_residue(6, -2, 0, 1) == -2


@pytest.mark.parametrize("t", range(-6, 1))
def test_discriminant(t):
    rec = discriminant_invariants(t)
    assert (rec.X2, rec.delta) == (48 + 2 * t, 44 + 6 * t)
    assert rec.delta == 3 * rec.X2 - 100
    assert rec.delta == TABLE1[t]["delta"]
    assert expected_normal_sections(t) == TABLE1[t]["h0N"] == -2 * t


def test_discriminant_window():
    for t in (-7, 1):
        with pytest.raises(ValueError):
            discriminant_invariants(t)


def test_tree_shape():
    tree = classify()
    assert [c.label for c in tree.children] == [f"K^2={t}" for t in range(-6, 1)]
    acc = accepted_families(tree)
    assert sorted(acc) == sorted(f"k2={t}" for t in range(-6, 1))
    for t in range(-6, 0):
        assert acc[f"k2={t}"] == TABLE1[t]["system"]
    for leaf in tree.leaves():
        assert leaf.verdict in ("accepted", "rejected")
        assert leaf.rule in set(Rule)
        assert leaf.reason


def test_every_branch_is_one_adjunction_step():
    def check(node):
        for ch in node.children:
            if ch.data.H2 != node.data.H2 or ch.data.HK != node.data.HK:
                step = adjunction_step(node.data, ch.data.K2 - node.data.K2)
                assert (step.H2, step.HK, step.K2) == (ch.data.H2, ch.data.HK, ch.data.K2)
                assert step.genus == ch.data.genus
            check(ch)

    check(classify())


def test_tree_json_roundtrip():
    tree = classify()
    d = json.loads(tree.to_json())
    assert d == tree.to_dict()
    assert tree.to_json() == classify().to_json()


def test_other_degrees_only_window():
    tree = classify(8, 5)
    assert not accepted_families(tree)
