"""Free-by-cyclic groups ``F_r x|_alpha Z``, their cyclic covers, and the
pipeline turning surjections ``F_r ->> T`` into explicit surjections
``G_n(v) ->> T``.

The finite-index characteristic subgroup of the classical argument is
replaced by the equivalent orbit condition: precomposition with ``alpha``
permutes the finite set ``Hom(F_r, T)``, so ``phi o alpha^n == phi`` for
every multiple ``n`` of the orbit length of ``phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

from .homsearch import Homomorphism, evaluate_word, find_surjection
from .permgrp import Permutation, PermGroup
from .present import (
    CyclicWordFamily,
    FreeByCyclicData,
    Presentation,
    cyclic_presentation,
    free_by_cyclic_check,
    free_presentation,
)
from .words import Endomorphism, Word, compose, reduce

DEFAULT_PERIOD_BOUND = 10 ** 6


class NotSurjective(ValueError):
    pass


@dataclass(frozen=True)
class SemidirectOverZ:
    alpha: Endomorphism
    alpha_inverse: Endomorphism

    def __post_init__(self):
        ident = Endomorphism.identity(self.rank)
        if compose(self.alpha, self.alpha_inverse) != ident or compose(self.alpha_inverse, self.alpha) != ident:
            raise ValueError("alpha_inverse is not inverse to alpha")

    @property
    def rank(self) -> int:
        return self.alpha.rank

    @classmethod
    def from_fbc(cls, fbc: FreeByCyclicData) -> SemidirectOverZ:
        return cls(fbc.alpha, fbc.alpha_inverse)

    def t_exponent(self, w: Word) -> int:
        """Exponent sum of the stable letter (index ``rank``) in a word of rank ``rank + 1``."""
        return w.exponent_sum(self.rank)


def cover_presentation(G: SemidirectOverZ, n: int) -> Presentation:
    """The index-``n`` cyclic cover: generators ``y_i`` and ``s = t^n`` with
    ``s y_i s^-1 = alpha^n(y_i)``."""
    if n < 1:
        raise ValueError("n must be positive")
    r = G.rank
    an = G.alpha.power(n)
    s = r
    relators = []
    for i in range(r):
        img = an.images[i]
        rel = [(s, 1), (i, 1), (s, -1)] + [(g, -e) for g, e in reversed(img.syllables)]
        relators.append(reduce(rel, r + 1))
    labels = tuple(f"y{i}" for i in range(r)) + ("s",)
    return Presentation(r + 1, tuple(relators), labels)


def precompose(images: Sequence[Permutation], alpha: Endomorphism, degree: int) -> tuple[Permutation, ...]:
    """Generator images of ``phi o alpha``."""
    return tuple(evaluate_word(im, images, degree) for im in alpha.images)


def cover_degree_for_target(G: SemidirectOverZ, phi: Homomorphism, bound: int = DEFAULT_PERIOD_BOUND) -> int:
    """Least ``n > 0`` with ``phi o alpha^n == phi`` on generators."""
    if phi.source.num_generators != G.rank:
        raise ValueError("phi must be defined on the fiber F_r")
    if not phi.is_surjective():
        raise NotSurjective("phi is not surjective")
    start = phi.images
    cur = start
    for n in range(1, bound + 1):
        cur = precompose(cur, G.alpha, phi.target.degree)
        if cur == start:
            return n
    raise RuntimeError(f"no period found within {bound} iterations")


@dataclass(frozen=True)
class CoverSurjection:
    n: int
    period: int
    target: str
    images: tuple[Permutation, ...]
    phi: tuple[Permutation, ...]
    presentation: Presentation = field(repr=False)
    target_group: PermGroup = field(repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "target": self.target,
            "period": self.period,
            "images": {f"x{i}": str(g) for i, g in enumerate(self.images)},
            "fiber_map": {f"y{i}": str(g) for i, g in enumerate(self.phi)},
        }


def lift_images(fbc: FreeByCyclicData, phi_images: Sequence[Permutation], n: int, degree: int) -> tuple[Permutation, ...]:
    """``x_i -> phi(alpha^i(y_0))`` for ``i < n``, computed by iterated precomposition."""
    out = []
    cur = tuple(phi_images)
    for _ in range(n):
        out.append(cur[0])
        cur = precompose(cur, fbc.alpha, degree)
    return tuple(out)


def lift_to_cyclic_presentation(
    family: CyclicWordFamily,
    fbc: FreeByCyclicData,
    phi: Homomorphism,
    n: int,
    period: int | None = None,
) -> CoverSurjection:
    """Explicit surjection ``G_n(v) ->> T`` from a surjection ``phi: F_r ->> T``.

    ``n`` must be at least ``family.d`` and a multiple of the period of
    ``phi`` under precomposition with ``alpha``.  Relators and surjectivity
    are checked on the result; a relator failure is a bug and raises.
    """
    if n < family.d:
        raise ValueError(f"n = {n} is below d = {family.d}")
    G = SemidirectOverZ.from_fbc(fbc)
    if period is None:
        period = cover_degree_for_target(G, phi)
    if n % period:
        raise ValueError(f"n = {n} is not a multiple of the period {period}")
    T = phi.target
    images = lift_images(fbc, phi.images, n, T.degree)
    pres = cyclic_presentation(family, n)
    for j, r in enumerate(pres.relators):
        if not evaluate_word(r, images, T.degree).is_identity():
            raise AssertionError(f"relator {j} of G_{n}(v) does not vanish; lifting is broken")
    if PermGroup(T.degree, images).order() != T.order():
        raise NotSurjective(f"lifted map G_{n}(v) -> {T.name} is not surjective")
    return CoverSurjection(n, period, T.name or repr(T), images, tuple(phi.images), pres, T)


def verify_cover_surjection(cs: CoverSurjection, fbc: FreeByCyclicData, samples: int = 8,
                            max_word_length: int = 20000) -> bool:
    """Independent re-check: relators via the Homomorphism constructor,
    surjectivity by brute-force closure for small targets, the wraparound
    identity ``phi o alpha^n == phi``, and ``x_i == phi(alpha^i(y_0))`` on
    explicit words ``alpha^i(y_0)`` while they stay short."""
    T = cs.target_group
    Homomorphism(cs.presentation, T, cs.images)
    if T.order() <= 5000:
        from .permgrp import closure

        if len(closure(cs.images, T.degree)) != T.order():
            return False
    elif PermGroup(T.degree, cs.images).order() != T.order():
        return False
    cur = tuple(cs.phi)
    for _ in range(cs.n):
        cur = precompose(cur, fbc.alpha, T.degree)
    if cur != tuple(cs.phi):
        return False
    y = Word.generator(0, fbc.rank)
    for i in range(min(samples, cs.n)):
        if len(y) > max_word_length:
            break
        if evaluate_word(y, cs.phi, T.degree) != cs.images[i]:
            return False
        y = fbc.alpha(y)
    return True


@dataclass(frozen=True)
class Schedule:
    n: int
    step: int
    d: int
    surjections: tuple[CoverSurjection, ...]
    within_hypothesis: bool

    def progression(self, count: int = 3) -> list[int]:
        """First ``count`` members of ``{k * step : k >= 1} with n >= d``."""
        out = []
        m = self.n
        while len(out) < count:
            out.append(m)
            m += self.step
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "progression": {"step": self.step, "min_n": self.d, "first": self.progression()},
            "within_theorem_hypothesis": self.within_hypothesis,
            "surjections": [cs.to_json() for cs in self.surjections],
        }


class NoFiberSurjection(LookupError):
    pass


class DegreeTooLarge(RuntimeError):
    pass


def smallest_multiple_at_least(step: int, d: int) -> int:
    return step * max(1, -(-d // step))


def simple_quotient_schedule(
    family: CyclicWordFamily,
    fbc: FreeByCyclicData | None,
    targets: Sequence[PermGroup],
    budget: int | None = None,
    pinned: dict[str, Sequence[Permutation]] | None = None,
    max_n: int | None = None,
) -> Schedule:
    """Common degree ``n`` with verified surjections ``G_n(v) ->> T`` for all targets.

    For each target a surjection ``F_r ->> T`` is found by canonical-order
    search (or taken from ``pinned``); ``n`` is the least multiple of the lcm
    of the periods that is at least ``d``.  Periods can be large for targets
    far from the fiber's abelian image, so ``max_n`` bounds the lift.
    """
    if fbc is None:
        fbc = free_by_cyclic_check(family)
        if fbc is None:
            raise ValueError("v is not a free-by-cyclic word")
    G = SemidirectOverZ.from_fbc(fbc)
    fiber = free_presentation(fbc.rank, [f"y{i}" for i in range(fbc.rank)])
    phis = []
    periods = []
    for T in targets:
        if pinned and T.name in pinned:
            phi = Homomorphism(fiber, T, tuple(pinned[T.name]))
        else:
            phi = find_surjection(fiber, T, budget)
            if phi is None:
                raise NoFiberSurjection(f"F_{fbc.rank} does not surject onto {T.name}")
        phis.append(phi)
        periods.append(cover_degree_for_target(G, phi))
    step = lcm(*periods) if periods else 1
    if not targets:
        return Schedule(family.d, step, family.d, (), fbc.rank >= 2)
    n = smallest_multiple_at_least(step, family.d)
    if max_n is not None and n > max_n:
        raise DegreeTooLarge(f"common degree {n} (periods {periods}) exceeds max_n = {max_n}")
    lifts = tuple(
        lift_to_cyclic_presentation(family, fbc, phi, n, period)
        for phi, period in zip(phis, periods)
    )
    return Schedule(n, step, family.d, lifts, fbc.rank >= 2)


def lift_schedule_at(schedule: Schedule, family: CyclicWordFamily, fbc: FreeByCyclicData, n: int) -> tuple[CoverSurjection, ...]:
    """Re-lift every surjection of ``schedule`` at another member ``n`` of its progression."""
    fiber = free_presentation(fbc.rank, [f"y{i}" for i in range(fbc.rank)])
    out = []
    for cs in schedule.surjections:
        phi = Homomorphism(fiber, cs.target_group, cs.phi)
        out.append(lift_to_cyclic_presentation(family, fbc, phi, n, cs.period))
    return tuple(out)
