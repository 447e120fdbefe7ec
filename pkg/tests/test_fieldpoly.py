import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from n33.fieldpoly import (
    DEFAULT_PRIME,
    Ring,
    is_prime,
    monomials_of_degree,
    parse_poly,
    read_polys,
    scalar_inverse,
    write_polys,
)

P = DEFAULT_PRIME
elems = st.integers(min_value=0, max_value=P - 1)


def test_is_prime():
    assert is_prime(31991) and is_prime(32003) and is_prime(2)
    assert not is_prime(1) and not is_prime(31993 * 3) and not is_prime(1000)


@given(st.integers(min_value=1, max_value=P - 1))
def test_inverse(a):
    assert a * scalar_inverse(a, P) % P == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        scalar_inverse(0, P)


def test_monomial_counts():
    from math import comb

    for n in range(1, 7):
        for d in range(6):
            assert len(monomials_of_degree(n, d)) == comb(n + d - 1, d)


def test_basis_is_grevlex_descending():
    R = Ring(3)
    assert R.basis(2)[:3] == ((2, 0, 0), (1, 1, 0), (0, 2, 0))
    assert R.basis(2)[-1] == (0, 0, 2)


def test_ring_rejects_composite():
    with pytest.raises(ValueError):
        Ring(3, 1001)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_polynomial_ring_axioms(seed):
    R = Ring(4)
    rng = np.random.default_rng(seed)
    f, g, h = R.random_form(2, rng), R.random_form(2, rng), R.random_form(1, rng)
    assert (f + g) * h == f * h + g * h
    assert f * h == h * f
    assert (f * g) * h == f * (g * h)
    assert (f - f).is_zero()
    pt = [int(x) for x in rng.integers(0, P, 4)]
    assert (f * h).evaluate(pt) == f.evaluate(pt) * h.evaluate(pt) % P
    assert (f + g).evaluate(pt) == (f.evaluate(pt) + g.evaluate(pt)) % P


def test_dense_mul_matches_sparse(rng):
    R = Ring(5)
    f, g = R.random_form(2, rng), R.random_form(3, rng)
    v = R.dense_mul(f.to_vector(), 2, g.to_vector(), 3)
    assert R.from_vector(v, 5) == f * g


def test_vector_roundtrip(rng):
    R = Ring(6)
    f = R.random_form(3, rng)
    assert R.from_vector(f.to_vector(), 3) == f
    assert len(f.to_vector()) == R.dim(3) == 56


def test_leading_term():
    R = Ring(3)
    f = R.parse("3*x0*x2 + x1^2")
    assert f.leading_monomial() == (0, 2, 0)
    assert f.leading_coefficient() == 1
    assert f.degree == 2


def test_substitute_is_composition(rng):
    R = Ring(3)
    f = R.random_form(3, rng)
    imgs = [R.random_form(1, rng) for _ in range(3)]
    g = f.substitute(imgs)
    pt = [5, 7, 11]
    img_pt = [q.evaluate(pt) for q in imgs]
    assert g.evaluate(pt) == f.evaluate(img_pt)


def test_text_roundtrip(rng):
    R = Ring(6)
    polys = [R.random_form(d, rng) for d in (1, 2, 3)] + [R.parse("x0^2*x5 - 2*x3^3")]
    ring2, back = read_polys(write_polys(R, polys, ["a comment"]))
    assert ring2 == R and back == polys


def test_parse_errors():
    R = Ring(3)
    with pytest.raises(ValueError):
        parse_poly(R, "x0 + x1^2")  # not homogeneous
    with pytest.raises(ValueError):
        parse_poly(R, "x7")
