import numpy as np
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from n33.fieldpoly import Ring
from n33.groebner import (
    Ideal,
    buchberger,
    buchberger_classic,
    hilbert_function_direct,
    hilbert_numerator_monomial,
    hilbert_series,
    normal_form,
    saturate_irrelevant,
    series_from_numerator,
)

P = 31991


def twisted_cubic(R):
    return Ideal(R, [R.parse(s) for s in ("x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2")])


def random_ideal(R, rng, degs):
    return Ideal(R, [R.random_form(d, rng) for d in degs])


def to_sympy(f, xs):
    return sum(c * sympy.prod([x**e for x, e in zip(xs, m)]) for m, c in f.terms.items())


def test_gb_against_sympy(rng):
    R = Ring(4)
    xs = sympy.symbols("x0:4")
    for degs in ((2, 2, 3), (2, 3), (1, 2, 2, 2)):
        I = random_ideal(R, rng, degs)
        G = buchberger(I)
        S = sympy.groebner([to_sympy(g, xs) for g in I.gens], *xs, order="grevlex", modulus=P)
        ours = {g.leading_monomial() for g in G}
        theirs = {sympy.Poly(s, *xs).monoms(order="grevlex")[0] for s in S.exprs}
        assert ours == theirs


def test_gb_against_textbook(rng):
    R = Ring(4)
    for _ in range(3):
        I = random_ideal(R, rng, (2, 2, 2))
        assert set(buchberger(I)) == set(buchberger_classic(I))
    I = twisted_cubic(R)
    assert set(buchberger(I)) == set(buchberger_classic(I))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_normal_form_idempotent(seed):
    rng = np.random.default_rng(seed)
    R = Ring(4)
    I = random_ideal(R, rng, (2, 2, 3))
    G = buchberger(I)
    f = R.random_form(4, rng)
    r = normal_form(f, G)
    assert normal_form(r, G) == r
    assert I.contains(f - r)
    Q = I.quotient()
    v = Q.reduce_poly(f, 4)
    assert Q.lift(v, 4) == r
    assert (Q.reduce_poly(r, 4) == v).all()


def test_membership():
    R = Ring(4)
    I = twisted_cubic(R)
    g = I.gens[0] * R.var(3) + I.gens[2] * R.var(0)
    assert I.contains(g)
    assert not I.contains(R.var(0) * R.var(3))


def test_twisted_cubic_hilbert():
    R = Ring(4)
    h = hilbert_series(twisted_cubic(R), 6)
    assert h.values == [3 * d + 1 for d in range(7)]
    assert h.numerator[:4] == [1, 0, -3, 2]


def test_hilbert_two_ways(rng):
    R = Ring(5)
    I = random_ideal(R, rng, (2, 2, 3))
    assert hilbert_series(I, 7).values == hilbert_function_direct(I, 7)


def test_complete_intersection_numerator(rng):
    # (1-t^2)(1-t^3) for a complete intersection of type (2,3)
    R = Ring(4)
    h = hilbert_series(random_ideal(R, rng, (2, 3)), 8)
    num = h.numerator + [0] * 6
    assert num[:6] == [1, 0, -1, -1, 0, 1]
    assert h.values == series_from_numerator(h.numerator, 4, 8)


def test_monomial_numerator():
    assert hilbert_numerator_monomial([(1, 0, 0), (0, 1, 0)], 3)[:3] == [1, -2, 1]
    assert hilbert_numerator_monomial([(2, 0, 0)], 3)[:3] == [1, 0, -1]


def test_saturation_removes_irrelevant_component():
    R = Ring(4)
    I = twisted_cubic(R)
    # I * m has the same saturation as I but nothing in degree 2
    J = Ideal(R, [g * R.var(k) for g in I.gens for k in range(4)])
    assert J.dim(2) == 0
    S = saturate_irrelevant(J, 6)
    assert S.dim(2) == 3 and S.dim(3) == I.dim(3)
    # containing a power of the irrelevant ideal saturates to the unit ideal
    K = Ideal(R, J.gens + [R.monomial(m) for m in R.basis(4)])
    assert saturate_irrelevant(K, 6).is_unit()


def test_minimal_generators(rng):
    R = Ring(4)
    I = twisted_cubic(R)
    extra = I.gens[0] * R.var(1)
    J = Ideal(R, I.gens + [extra])
    assert len(J.minimal_generators()) == 3


def test_unit_ideal():
    R = Ring(3)
    I = Ideal(R, [R.one()])
    assert I.is_unit() and buchberger(I) == [R.one()]
