import pytest
from hypothesis import given, settings, strategies as st

from cycpres.covers import (
    DegreeTooLarge,
    NoFiberSurjection,
    NotSurjective,
    SemidirectOverZ,
    cover_degree_for_target,
    cover_presentation,
    lift_schedule_at,
    lift_to_cyclic_presentation,
    precompose,
    simple_quotient_schedule,
    smallest_multiple_at_least,
    verify_cover_surjection,
)
from cycpres.homsearch import Homomorphism, evaluate_word
from cycpres.permgrp import Permutation, alternating_group, cyclic_group, group_from_name, symmetric_group
from cycpres.present import CyclicWordFamily, free_by_cyclic_check, free_presentation
from cycpres.words import Endomorphism, format_word, parse_endomorphism

EX53 = CyclicWordFamily.parse("x3 x0^-1")
FIB = CyclicWordFamily.parse("x0 x1 x2^-1")


def semidirect(text, names):
    a, _ = parse_endomorphism(text, names)
    return a


def G_of(family):
    return SemidirectOverZ.from_fbc(free_by_cyclic_check(family))


def fiber_hom(images, T):
    return Homomorphism(free_presentation(len(images)), T, tuple(images))


def test_cover_presentation_examples():
    G = G_of(EX53)
    p = cover_presentation(G, 2)
    rels = [format_word(r, p.names) for r in p.relators]
    assert rels == ["s y0 s^-1 y2^-1", "s y1 s^-1 y0^-1", "s y2 s^-1 y1^-1"]
    p = cover_presentation(G, 3)
    assert [format_word(r, p.names) for r in p.relators] == [f"s y{i} s^-1 y{i}^-1" for i in range(3)]
    ident = Endomorphism.identity(1)
    p = cover_presentation(SemidirectOverZ(ident, ident), 1)
    assert [format_word(r, p.names) for r in p.relators] == ["s y0 s^-1 y0^-1"]


def test_semidirect_rejects_bad_inverse():
    a, _ = parse_endomorphism("a->b; b->a b")
    with pytest.raises(ValueError):
        SemidirectOverZ(a, a)


def test_cover_degree_examples():
    A5 = alternating_group(5)
    ident = Endomorphism.identity(2)
    phi = fiber_hom([Permutation.parse("(0 1 2 3 4)", 5), Permutation.parse("(0 1 2)", 5)], A5)
    assert cover_degree_for_target(SemidirectOverZ(ident, ident), phi) == 1
    phi = fiber_hom(
        [Permutation.parse("(0 1 2 3 4)", 5), Permutation.parse("(0 1)(2 3)", 5), Permutation.identity(5)], A5
    )
    assert cover_degree_for_target(G_of(EX53), phi) == 3
    swap, _ = parse_endomorphism("a->b; b->a")
    c = Permutation.parse("(0 1 2 3 4)", 5)
    assert cover_degree_for_target(SemidirectOverZ(swap, swap), fiber_hom([c, c], cyclic_group(5))) == 1


def test_cover_degree_needs_surjection():
    phi = fiber_hom([Permutation.identity(5)] * 3, alternating_group(5))
    with pytest.raises(NotSurjective):
        cover_degree_for_target(G_of(EX53), phi)


def test_lift_examples():
    fbc = free_by_cyclic_check(EX53)
    A5 = alternating_group(5)
    phi = fiber_hom(
        [Permutation.parse("(0 1 2 3 4)", 5), Permutation.parse("(0 1)(2 3)", 5), Permutation.identity(5)], A5
    )
    cs = lift_to_cyclic_presentation(EX53, fbc, phi, 6)
    assert cs.period == 3 and verify_cover_surjection(cs, fbc)
    with pytest.raises(ValueError):
        lift_to_cyclic_presentation(EX53, fbc, phi, 4)
    C1 = group_from_name("1")
    triv = fiber_hom([Permutation.identity(1)] * 3, C1)
    assert verify_cover_surjection(lift_to_cyclic_presentation(EX53, fbc, triv, 4), fbc)
    rank1 = CyclicWordFamily.parse("x1 x0^-1")
    fbc1 = free_by_cyclic_check(rank1)
    phi1 = fiber_hom([Permutation.parse("(0 1 2 3 4)", 5)], cyclic_group(5))
    for n in range(2, 8):
        cs = lift_to_cyclic_presentation(rank1, fbc1, phi1, n)
        assert cs.period == 1 and verify_cover_surjection(cs, fbc1)


def test_schedule_examples():
    fbc = free_by_cyclic_check(EX53)
    sched = simple_quotient_schedule(EX53, fbc, [alternating_group(5)])
    assert sched.n == 6 and sched.step == 3 and sched.within_hypothesis
    # Fibonacci fiber: periods are the Pisano periods 3 and 8
    fbc2 = free_by_cyclic_check(FIB)
    sched = simple_quotient_schedule(FIB, fbc2, [group_from_name("C2"), group_from_name("C3")])
    assert [cs.period for cs in sched.surjections] == [3, 8]
    assert sched.n == 24 and all(verify_cover_surjection(cs, fbc2) for cs in sched.surjections)
    empty = simple_quotient_schedule(FIB, fbc2, [])
    assert empty.n == FIB.d and empty.surjections == ()


def test_schedule_refusals():
    rank1 = CyclicWordFamily.parse("x1 x0^-1")
    fbc1 = free_by_cyclic_check(rank1)
    with pytest.raises(NoFiberSurjection):
        simple_quotient_schedule(rank1, fbc1, [alternating_group(5)])
    sched = simple_quotient_schedule(rank1, fbc1, [cyclic_group(5)])
    assert not sched.within_hypothesis
    with pytest.raises(DegreeTooLarge):
        simple_quotient_schedule(FIB, free_by_cyclic_check(FIB), [group_from_name("C3")], max_n=5)


def test_schedule_second_member():
    fbc = free_by_cyclic_check(EX53)
    sched = simple_quotient_schedule(EX53, fbc, [alternating_group(5), alternating_group(6)])
    nxt = sched.progression(2)[1]
    assert nxt > sched.n
    assert all(verify_cover_surjection(cs, fbc) for cs in lift_schedule_at(sched, EX53, fbc, nxt))


def test_smallest_multiple():
    assert smallest_multiple_at_least(3, 4) == 6
    assert smallest_multiple_at_least(5, 2) == 5
    assert smallest_multiple_at_least(4, 8) == 8


fib_targets = st.sampled_from(["C2", "C3", "C4", "C5", "S3", "D4", "A4"])


@settings(max_examples=20)
@given(fib_targets, st.integers(0, 40))
def test_period_minimal_and_exact(target, pick):
    # any surjection F_2 ->> T; the period is the first return under precomposition
    T = group_from_name(target) if target != "S3" else symmetric_group(3)
    fbc = free_by_cyclic_check(FIB)
    G = SemidirectOverZ.from_fbc(fbc)
    els = T.elements()
    pairs = [(a, b) for a in els for b in els]
    onto = [p for p in pairs if fiber_hom(list(p), T).is_surjective()]
    phi = fiber_hom(list(onto[pick % len(onto)]), T)
    period = cover_degree_for_target(G, phi)
    # oracle: evaluate explicit words alpha^j(y_i)
    ys = list(fbc.alpha.images)
    for j in range(1, period + 1):
        same = all(evaluate_word(ys[i], phi.images, T.degree) == phi.images[i] for i in range(2))
        assert same == (j == period)
        ys = [fbc.alpha(y) for y in ys]
    n = smallest_multiple_at_least(period, FIB.d)
    cs = lift_to_cyclic_presentation(FIB, fbc, phi, n, period)
    assert cs.n % period == 0 and verify_cover_surjection(cs, fbc)


def test_precompose_matches_words():
    fbc = free_by_cyclic_check(FIB)
    imgs = (Permutation.parse("(0 1 2)", 4), Permutation.parse("(2 3)", 4))
    once = precompose(imgs, fbc.alpha, 4)
    assert once == tuple(evaluate_word(w, imgs, 4) for w in fbc.alpha.images)
