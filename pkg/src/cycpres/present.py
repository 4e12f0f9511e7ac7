"""Finite presentations, cyclically presented groups and their two-generator
extensions, and the free-by-cyclic test for the defining word."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .words import (
    Endomorphism,
    Word,
    abelianize_word,
    compose,
    format_word,
    parse_word,
    reduce,
)

X, T = 0, 1
TWO_GEN_NAMES = ("x", "t")


@dataclass(frozen=True)
class Presentation:
    num_generators: int
    relators: tuple[Word, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.num_generators < 1:
            raise ValueError("a presentation needs at least one generator")
        for r in self.relators:
            if r.rank != self.num_generators:
                raise ValueError("relator rank differs from generator count")
        if self.labels is not None and len(self.labels) != self.num_generators:
            raise ValueError("one label per generator")

    @property
    def names(self) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(f"x{i}" for i in range(self.num_generators))

    def to_json(self) -> dict:
        names = self.names
        return {
            "generators": list(names),
            "relators": [format_word(r, names) for r in self.relators],
        }

    @classmethod
    def from_json(cls, data: dict) -> Presentation:
        names = tuple(data["generators"])
        relators = tuple(parse_word(r, names) for r in data["relators"])
        default = tuple(f"x{i}" for i in range(len(names)))
        return cls(len(names), relators, None if names == default else names)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def free_presentation(rank: int, labels: Sequence[str] | None = None) -> Presentation:
    return Presentation(rank, (), tuple(labels) if labels is not None else None)


def shift_word(w: Word, k: int, n: int) -> Word:
    """Add ``k`` to every generator index, modulo ``n``; result has rank ``n``."""
    return reduce(((((g + k) % n), e) for g, e in w.syllables), n)


@dataclass(frozen=True)
class CyclicWordFamily:
    """A cyclically reduced word ``v`` in ``F_d`` defining the groups G_n(v), n >= d."""

    v: Word
    d: int = field(default=0)

    def __post_init__(self):
        d = self.d or self.v.rank
        if d < 1:
            raise ValueError("d must be at least 1")
        if any(g >= d for g in self.v.support()):
            raise ValueError(f"word uses a generator outside F_{d}")
        if not self.v.is_cyclically_reduced():
            raise ValueError("v must be cyclically reduced")
        object.__setattr__(self, "d", d)
        if self.v.rank != d:
            object.__setattr__(self, "v", self.v.with_rank(d))

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> CyclicWordFamily:
        w = parse_word(text)
        return cls(w.with_rank(d) if d else w, d or 0)

    def shift(self, k: int) -> Word:
        return shift_word(self.v, k, self.d)

    def normalized(self) -> CyclicWordFamily:
        """Shift indices so the smallest occurring generator is ``x0``."""
        if not self.v:
            return self
        s = min(self.v.support())
        return CyclicWordFamily(shift_word(self.v, -s, self.d), self.d)


def cyclic_presentation(family: CyclicWordFamily, n: int) -> Presentation:
    """``G_n(v)``: relator ``i`` is ``v`` with ``i`` added to every index mod ``n``."""
    if n < family.d:
        raise ValueError(f"G_n(v) is defined for n >= d = {family.d}, got n = {n}")
    v = family.v.with_rank(n)
    return Presentation(n, tuple(shift_word(v, i, n) for i in range(n)))


def v_to_w(family: CyclicWordFamily) -> Word:
    """Substitute ``x_i -> t^i x t^-i``; returns a word over ``(x, t)``."""
    out: list[tuple[int, int]] = []
    for g, e in family.v.syllables:
        out += [(T, g), (X, e), (T, -g)]
    return reduce(out, 2)


def h_n_presentation(w: Word, n: int) -> Presentation:
    if n < 1:
        raise ValueError("n must be positive")
    if w.rank != 2:
        raise ValueError("w must be a word in x and t")
    return Presentation(2, (w, Word.generator(T, 2, n)), TWO_GEN_NAMES)


@dataclass(frozen=True)
class FreeByCyclicData:
    s: int
    l: int
    alpha: Endomorphism
    alpha_inverse: Endomorphism

    @property
    def rank(self) -> int:
        return self.l - self.s

    def __post_init__(self):
        ident = Endomorphism.identity(self.rank)
        if compose(self.alpha, self.alpha_inverse) != ident or compose(self.alpha_inverse, self.alpha) != ident:
            raise ArithmeticError("fiber automorphism and its inverse do not compose to the identity")


def _extremes(v: Word) -> tuple[int, int]:
    support = v.support()
    return min(support), max(support)


def free_by_cyclic_check(family: CyclicWordFamily) -> FreeByCyclicData | None:
    """Fiber data if the extreme generators of ``v`` each occur exactly once.

    Words touching a single generator give rank 0 and are rejected.
    """
    v = family.v
    if not v:
        raise ValueError("v must be nonempty")
    s, l = _extremes(v)
    if l == s or v.occurrences(s) != 1 or v.occurrences(l) != 1:
        return None
    data = fiber_automorphism(family)
    a = abelianize_word(v)
    assert abs(a[s]) == 1 and abs(a[l]) == 1
    return data


def _solve_for(rel: Word, gen: int, rank: int, relabel) -> Word:
    """Solve ``rel == 1`` for the single occurrence of ``gen``.

    ``rel = A gen^e B`` gives ``gen = (A^-1 B^-1)^e``; ``relabel`` maps the
    remaining generators into the fiber basis.
    """
    syl = rel.syllables
    (pos,) = [i for i, (g, _) in enumerate(syl) if g == gen]
    e = syl[pos][1]
    a = [(relabel(g), k) for g, k in syl[:pos]]
    b = [(relabel(g), k) for g, k in syl[pos + 1:]]
    a_inv = [(g, -k) for g, k in reversed(a)]
    b_inv = [(g, -k) for g, k in reversed(b)]
    sol = reduce(a_inv + b_inv, rank)
    return sol if e == 1 else sol.inverse()


def fiber_automorphism(family: CyclicWordFamily) -> FreeByCyclicData:
    """Conjugation by ``t`` on the free fiber, in the basis ``y_i = t^i x t^-i``.

    With ``v`` normalized so its lowest index is 0 and highest ``r``, the
    relation ``v(y_0..y_r) = 1`` expresses ``y_r`` in ``y_0..y_{r-1}``, and
    its shift by -1 expresses ``y_{-1}`` in the same basis.
    """
    v = family.v
    if not v:
        raise ValueError("not free-by-cyclic: empty word")
    s, l = _extremes(v)
    if l == s or v.occurrences(s) != 1 or v.occurrences(l) != 1:
        raise ValueError("not free-by-cyclic")
    r = l - s
    rel = family.normalized().v  # indices 0..r
    gens = [Word.generator(i, r) for i in range(r)]

    top = _solve_for(rel, r, r, lambda g: g)
    alpha = Endomorphism(r, tuple(gens[1:]) + (top,))
    # shifted relation v(y_-1, ..., y_{r-1}): y_-1 is the old index 0
    bottom = _solve_for(rel, 0, r, lambda g: g - 1)
    alpha_inv = Endomorphism(r, (bottom,) + tuple(gens[:-1]))
    return FreeByCyclicData(s, l, alpha, alpha_inv)
