from math import comb

import pytest

from n33.fieldpoly import Ring
from n33.groebner import Ideal
from n33.resolve import (
    BettiTable,
    BoundsError,
    GradedMatrix,
    GradedModulePresentation,
    betti_via_koszul,
    check_property_N,
    dual_complex,
    is_acm,
    minimal_resolution,
    minimize_presentation,
    regularity,
    regularity_via_gin,
)


def twisted_cubic(R):
    return Ideal(R, [R.parse(s) for s in ("x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2")])


TC_TABLE = BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2})


def test_twisted_cubic_both_ways():
    R = Ring(4)
    I = twisted_cubic(R)
    F = minimal_resolution(I)
    assert F.betti() == TC_TABLE
    assert betti_via_koszul(I) == TC_TABLE
    assert F.is_complex() and not F.has_unit_entries()
    assert regularity(TC_TABLE) == 1 == regularity_via_gin(I)
    assert is_acm(TC_TABLE, 2)


def test_koszul_complex_of_variables():
    R = Ring(4)
    I = Ideal(R, R.gens())
    B = minimal_resolution(I).betti()
    assert B == BettiTable({(i, i): comb(4, i) for i in range(5)})
    assert betti_via_koszul(I) == B


def test_complete_intersection(rng):
    R = Ring(4)
    I = Ideal(R, [R.random_form(2, rng), R.random_form(3, rng)])
    expected = BettiTable({(0, 0): 1, (1, 2): 1, (1, 3): 1, (2, 5): 1})
    assert minimal_resolution(I).betti() == expected == betti_via_koszul(I)


def test_nonminimal_generators_are_dropped(rng):
    R = Ring(4)
    I = twisted_cubic(R)
    J = Ideal(R, I.gens + [I.gens[0] * R.var(2)])
    assert minimal_resolution(J).betti() == TC_TABLE


def test_bounds_error_when_truncated():
    R = Ring(4)
    with pytest.raises(BoundsError):
        minimal_resolution(twisted_cubic(R), degree_bound=2)


def test_module_resolution():
    # coker of the 2x3 linear matrix of the twisted cubic: Hom twist gives the ideal back
    R = Ring(4)
    x = R.gens()
    M = GradedMatrix(R, [0, 0], [1, 1, 1], [[x[0], x[1], x[2]], [x[1], x[2], x[3]]])
    P = GradedModulePresentation(M)
    F = minimal_resolution(P)
    assert F.is_complex()
    B = F.betti()
    assert B == betti_via_koszul(P)
    assert B.total(0) == 2 and B.total(1) == 3


def test_dual_of_resolution():
    R = Ring(4)
    F = minimal_resolution(twisted_cubic(R))
    # Hom(R(-a), R(-4)) = R(a - 4): the dual starts at the canonical-module generators
    D = dual_complex(F, -4)
    assert D.is_complex()
    assert D.twists()[0] == [4 - a for a in F.twists()[-1]] == [1, 1]
    assert D.twists()[-1] == [4]


def test_minimize_presentation_cancels_units():
    R = Ring(3)
    x = R.gens()
    M = GradedMatrix(R, [0, 1], [1, 1, 2], [[x[0], R.zero(), x[1] * x[2]], [R.zero(), R.one(), x[2]]])
    m = minimize_presentation(M)
    assert m.shape[0] == 1 and not m.constant_entries()


def test_graded_matrix_degree_check():
    R = Ring(3)
    with pytest.raises(ValueError):
        GradedMatrix(R, [0], [2], [[R.var(0)]])


def test_graded_matrix_text_roundtrip(rng):
    R = Ring(4)
    M = GradedMatrix(R, [0, 1], [2, 3], [[R.random_form(2, rng), R.random_form(3, rng)],
                                         [R.random_form(1, rng), R.random_form(2, rng)]])
    N = GradedMatrix.from_text(M.to_text())
    assert N.entries == M.entries and N.row_degs == M.row_degs and N.col_degs == M.col_degs
    P = M @ GradedMatrix(R, [2, 3], [3], [[R.var(0)], [R.zero()]])
    assert P.entries[0][0] == M.entries[0][0] * R.var(0)


def test_betti_table_serialisation_and_text():
    B = BettiTable.from_twists([[0], [3] * 10, [4] * 15, [5] * 6])
    assert BettiTable.from_json(B.to_json()) == B
    assert B.numerator()[:6] == [1, 0, 0, -10, 15, -6]
    txt = B.text()
    assert "2:  . 10 15  6" in txt
    assert check_property_N(B, 3, 3) and not check_property_N(B, 2, 1)
    with pytest.raises(ValueError):
        BettiTable({(0, 0): -1})
