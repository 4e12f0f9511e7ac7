import cmath
from math import gcd

import pytest
from hypothesis import given, strategies as st

from conftest import words
from cycpres.abelian import circulant
from cycpres.intpoly import (
    IntPolynomial,
    associated_polynomial,
    classify_cyclotomic_type,
    cyclotomic_polynomial,
    euler_phi,
    resultant,
    resultant_with_cyclic,
)
from cycpres.present import CyclicWordFamily
from cycpres.words import abelianize_word

P = IntPolynomial.of


def fam(text):
    return CyclicWordFamily.parse(text)


def cyclotomic_oracle(m):
    # product over primitive m-th roots of unity, rounded
    coeffs = [1]
    for k in range(1, m + 1):
        if gcd(k, m) != 1:
            continue
        z = cmath.exp(2j * cmath.pi * k / m)
        new = [0j] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i] -= z * c
            new[i + 1] += c
        coeffs = new
    return tuple(int(round(c.real)) for c in coeffs)


def test_associated_polynomial_examples():
    assert associated_polynomial(fam("x3 x0^-1")) == P(-1, 0, 0, 1)
    assert associated_polynomial(fam("x0^2 x1^-3")) == P(2, -3)
    assert associated_polynomial(fam("x1 x0 x1^-1 x0^-2")) == P(-1)


def test_cyclotomic_examples():
    assert cyclotomic_polynomial(1) == P(-1, 1)
    assert cyclotomic_polynomial(3) == P(1, 1, 1)
    assert cyclotomic_polynomial(6) == P(1, -1, 1)


@pytest.mark.parametrize("m", range(1, 41))
def test_cyclotomic_against_roots(m):
    f = cyclotomic_polynomial(m)
    assert f.coefficients == cyclotomic_oracle(m)
    assert f.degree == euler_phi(m)


def test_classify_examples():
    c = classify_cyclotomic_type(P(-1, 0, 0, 1))
    assert c.kind == "cyclotomic_type" and c.factors == ((1, 1), (3, 1))
    assert classify_cyclotomic_type(P(-1)).kind == "unit_monomial"
    assert classify_cyclotomic_type(P(2, -3)).kind == "other"
    assert classify_cyclotomic_type(IntPolynomial()).kind == "zero"
    c = classify_cyclotomic_type(P(0, 0, -1))
    assert (c.kind, c.sign, c.shift) == ("unit_monomial", -1, 2)


def test_resultant_examples():
    assert abs(resultant_with_cyclic(P(2, -3), 2)) == 5
    assert resultant_with_cyclic(P(-1, 0, 0, 1), 6) == 0
    for n in range(1, 8):
        assert abs(resultant_with_cyclic(P(-1), n)) == 1


def test_resultant_basic():
    # Res(t - a, t - b) = a - b with the first argument leading
    assert resultant(P(-2, 1), P(-5, 1)) == 2 - 5
    assert resultant(P(1, 1), P(1, 1)) == 0


def test_polynomial_arithmetic():
    f, g = P(1, 2, 3), P(-1, 1)
    q, r = (f * g + P(4)).divmod_monic(g)
    assert q == f and r == P(4)
    assert (f - f).is_zero() and not f.is_zero()
    assert str(P(-1, 0, 0, 1)) == "t^3 - 1"
    assert f(2) == 1 + 4 + 12
    assert P(2, 4, 6).content() == 2


cyclotomic_products = st.builds(
    lambda ms, sign, shift: (ms, sign, shift),
    st.lists(st.integers(1, 30), max_size=4),
    st.sampled_from((1, -1)),
    st.integers(0, 3),
)


@given(cyclotomic_products)
def test_classification_reconstructs(data):
    ms, sign, shift = data
    f = IntPolynomial.monomial(shift, sign)
    for m in ms:
        f = f * cyclotomic_polynomial(m)
    c = classify_cyclotomic_type(f)
    assert c.kind in ("unit_monomial", "cyclotomic_type")
    assert c.reconstruct() == f
    assert sorted(m for m, k in c.factors for _ in range(k)) == sorted(ms)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5), st.integers(1, 8))
def test_resultant_matches_circulant_det(coeffs, n):
    f = IntPolynomial(tuple(coeffs))
    assert abs(resultant_with_cyclic(f, n)) == abs(circulant(f.coefficients or (0,), n).det())


@given(words(3, 10), words(3, 10))
def test_polynomial_depends_only_on_abelianization(u, v):
    fu = IntPolynomial(abelianize_word(u))
    fv = IntPolynomial(abelianize_word(v))
    assert (fu == fv) == (abelianize_word(u) == abelianize_word(v))
