from itertools import combinations
from math import gcd

from hypothesis import given, strategies as st

from cycpres.abelian import (
    AbelianGroupStructure,
    IntMatrix,
    abelianization,
    circulant,
    is_smith_form,
    relation_matrix,
    smith_normal_form,
    structure_from_matrix,
)
from cycpres.intpoly import IntPolynomial, associated_polynomial, resultant_with_cyclic
from cycpres.present import CyclicWordFamily, cyclic_presentation, h_n_presentation, v_to_w
from cycpres.words import abelianize_word, cyclic_reduce, reduce


def fam(text):
    return CyclicWordFamily.parse(text)


def determinantal_divisors(M: IntMatrix):
    # d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}
    m, n = M.shape
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                sub = IntMatrix.from_rows([[M[i, j] for j in cols] for i in rows])
                g = gcd(g, sub.det())
        out.append(g)
    return out


def test_snf_examples():
    assert smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]])).invariant_factors == (1, 6)
    z = smith_normal_form(IntMatrix.zeros(2, 3))
    assert z.D == IntMatrix.zeros(2, 3)
    assert smith_normal_form(IntMatrix.from_rows([[2, -3], [-3, 2]])).invariant_factors == (1, 5)


def test_relation_matrix_examples():
    assert relation_matrix(cyclic_presentation(fam("x0^2 x1^-3"), 2)).tolist() == [[2, -3], [-3, 2]]
    w = v_to_w(fam("x3 x0^-1"))
    M = relation_matrix(h_n_presentation(w, 5))
    assert M.column(1) == (0, 5)
    p = cyclic_presentation(fam("x3 x0^-1"), 6)
    assert relation_matrix(p) == circulant((-1, 0, 0, 1), 6)


def test_abelianization_examples():
    assert abelianization(cyclic_presentation(fam("x0^2 x1^-3"), 2)) == AbelianGroupStructure(0, (5,))
    assert abelianization(cyclic_presentation(fam("x3 x0^-1"), 6)) == AbelianGroupStructure(3, ())
    for n in range(2, 13):
        assert abelianization(cyclic_presentation(fam("x1 x0 x1^-1 x0^-2"), n)).is_trivial()


def test_structure_helpers():
    s = AbelianGroupStructure(1, (2, 6))
    assert str(s) == "Z/2 x Z/6 x Z" and s.order() is None and not s.is_cyclic()
    assert AbelianGroupStructure(0, (7,)).is_cyclic() and AbelianGroupStructure(0).order() == 1


small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@given(small_matrices)
def test_snf_transforms_and_divisors(rows):
    M = IntMatrix.from_rows(rows)
    sf = smith_normal_form(M)
    assert sf.U @ M @ sf.V == sf.D
    assert is_smith_form(sf.D)
    assert abs(sf.U.det()) == 1 and abs(sf.V.det()) == 1
    dd = determinantal_divisors(M)
    prod = 1
    for k, d in enumerate(sf.invariant_factors):
        prod *= d
        assert prod == dd[k]


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(1, 10))
def test_circulant_order_matches_resultant(coeffs, n):
    f = IntPolynomial(tuple(coeffs))
    st_ = structure_from_matrix(circulant(coeffs, n))
    res = resultant_with_cyclic(f, n)
    if res:
        assert st_.free_rank == 0 and st_.order() == abs(res)
    else:
        assert st_.free_rank > 0
    sf = smith_normal_form(circulant(coeffs, n))
    assert st_.free_rank == n - sum(1 for d in sf.invariant_factors if d)


@st.composite
def cyclic_families(draw):
    d = draw(st.integers(1, 3))
    exps = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=4))
    gens = draw(st.lists(st.integers(0, d - 1), min_size=len(exps), max_size=len(exps)))
    u, _ = cyclic_reduce(reduce(list(zip(gens, exps)), d))
    if not u:
        u = reduce([(0, 1)], d)
    return CyclicWordFamily(u, d)


@given(cyclic_families(), st.integers(0, 5))
def test_h_n_abelianization_maps_onto_cyclic(family, extra):
    # the t-column gives a surjection onto C_n
    n = family.d + extra
    w = v_to_w(family)
    p = h_n_presentation(w, n)
    M = relation_matrix(p)
    assert M.column(1) == (0, n)
    assert abelianize_word(w)[1] == 0


@given(cyclic_families(), st.integers(0, 5))
def test_gn_abelianization_vs_resultant(family, extra):
    n = family.d + extra
    st_ = abelianization(cyclic_presentation(family, n))
    res = resultant_with_cyclic(associated_polynomial(family), n)
    if res:
        assert st_.free_rank == 0 and st_.order() == abs(res)
    else:
        assert st_.free_rank > 0
