"""Homomorphisms from finite presentations into permutation groups:
verification, exhaustive enumeration with relator pruning, surjection search."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .permgrp import Permutation, PermGroup
from .present import Presentation
from .words import Word

DEFAULT_BUDGET = 10 ** 8

ABSENCE_NOTE = (
    "no surjection found within budget: this is evidence, not a proof of absence"
)


class BudgetExceeded(RuntimeError):
    """Raised instead of silently truncating a search."""


def default_budget() -> int:
    env = os.environ.get("CYCPRES_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def evaluate_word(w: Word, images: Sequence[Permutation], degree: int | None = None) -> Permutation:
    if degree is None:
        degree = images[0].degree if images else 1
    out = Permutation.identity(degree)
    for g, e in w.syllables:
        out = out * (images[g] ** e)
    return out


@dataclass(frozen=True)
class Homomorphism:
    source: Presentation
    target: PermGroup
    images: tuple[Permutation, ...]

    def __post_init__(self):
        if len(self.images) != self.source.num_generators:
            raise ValueError("one image per source generator")
        for r in self.source.relators:
            if not evaluate_word(r, self.images, self.target.degree).is_identity():
                raise ValueError("relator does not map to the identity")

    def __call__(self, w: Word) -> Permutation:
        return evaluate_word(w, self.images, self.target.degree)

    def image(self) -> PermGroup:
        return PermGroup(self.target.degree, [g for g in self.images if not g.is_identity()])

    def is_surjective(self) -> bool:
        return self.image().order() == self.target.order()

    def to_json(self) -> dict:
        names = self.source.names
        return {names[i]: str(g) for i, g in enumerate(self.images)}


def verify_hom(p: Presentation, images: Sequence[Permutation], target: PermGroup | None = None) -> Homomorphism | None:
    """The homomorphism defined by ``images`` if every relator dies, else None."""
    images = tuple(images)
    if len(images) != p.num_generators:
        raise ValueError(f"expected {p.num_generators} images, got {len(images)}")
    degrees = {g.degree for g in images}
    if len(degrees) > 1:
        raise ValueError("images have different degrees")
    if target is None:
        degree = degrees.pop() if degrees else 1
        target = PermGroup(degree, images)
    try:
        return Homomorphism(p, target, images)
    except ValueError:
        return None


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, k: int = 1):
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(f"relator-evaluation budget of {self.limit} exceeded")


def enumerate_homs(p: Presentation, T: PermGroup, budget: int | None = None, *, _counter: _Budget | None = None) -> Iterator[Homomorphism]:
    """Every homomorphism ``p -> T``, lexicographic in the element order of ``T``.

    A relator is checked as soon as all generators in its support have images.
    ``budget`` bounds the number of relator evaluations; exceeding it raises
    ``BudgetExceeded``.
    """
    counter = _counter or _Budget(default_budget() if budget is None else budget)
    elements = T.elements()
    k = p.num_generators
    degree = T.degree
    checks: list[list[Word]] = [[] for _ in range(k)]
    for r in p.relators:
        if r.syllables:
            checks[max(r.support())].append(r)

    images: list[Permutation] = []

    def extend(depth: int) -> Iterator[tuple[Permutation, ...]]:
        if depth == k:
            yield tuple(images)
            return
        for g in elements:
            images.append(g)
            ok = True
            for r in checks[depth]:
                counter.spend()
                if not evaluate_word(r, images, degree).is_identity():
                    ok = False
                    break
            if ok:
                yield from extend(depth + 1)
            images.pop()

    for imgs in extend(0):
        yield Homomorphism(p, T, imgs)


def find_surjection(p: Presentation, T: PermGroup, budget: int | None = None) -> Homomorphism | None:
    """First surjection ``p ->> T`` in canonical order, or None if there is none.

    Raises ``BudgetExceeded`` when the search is cut short.
    """
    target_order = T.order()
    for hom in enumerate_homs(p, T, budget):
        if hom.image().order() == target_order:
            return hom
    return None


@dataclass(frozen=True)
class QuotientReport:
    target: str
    hom_count: int
    surjection_count: int
    sample_surjection: Homomorphism | None
    all_images_cyclic: bool
    generators_always_trivial: tuple[str, ...]

    def to_json(self) -> dict:
        out = {
            "target": self.target,
            "hom_count": self.hom_count,
            "surjection_count": self.surjection_count,
            "sample_surjection": self.sample_surjection.to_json() if self.sample_surjection else None,
            "all_images_cyclic": self.all_images_cyclic,
            "generators_always_trivial": list(self.generators_always_trivial),
        }
        if self.sample_surjection is None:
            out["note"] = ABSENCE_NOTE
        return out


def scan_quotients(p: Presentation, T: PermGroup, budget: int | None = None) -> QuotientReport:
    """Exhaustive scan of ``Hom(p, T)`` with surjection and image statistics."""
    target_order = T.order()
    homs = surj = 0
    sample = None
    all_cyclic = True
    always_trivial = [True] * p.num_generators
    cyclic_cache: dict[frozenset, tuple[bool, bool]] = {}
    for hom in enumerate_homs(p, T, budget):
        homs += 1
        key = frozenset(hom.images)
        if key not in cyclic_cache:
            image = hom.image()
            cyclic_cache[key] = (image.is_cyclic(), image.order() == target_order)
        cyclic, onto = cyclic_cache[key]
        all_cyclic = all_cyclic and cyclic
        if onto:
            surj += 1
            if sample is None:
                sample = hom
        for i, g in enumerate(hom.images):
            if not g.is_identity():
                always_trivial[i] = False
    names = p.names
    return QuotientReport(
        T.name or repr(T),
        homs,
        surj,
        sample,
        all_cyclic,
        tuple(names[i] for i, t in enumerate(always_trivial) if t),
    )
