"""Reduced words in finitely generated free groups, and endomorphisms given
by generator images.

Words are stored run-length encoded as ``(generator, exponent)`` syllables so
that long powers such as ``x0^40`` stay compact.  Every ``Word`` is freely
reduced on construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class WordSyntaxError(ValueError):
    pass


class RankMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    syllables: tuple[tuple[int, int], ...]
    rank: int

    def __post_init__(self):
        prev = None
        for gen, exp in self.syllables:
            if not 0 <= gen < self.rank:
                raise ValueError(f"generator index {gen} out of range for rank {self.rank}")
            if exp == 0 or gen == prev:
                raise ValueError("syllables are not reduced")
            prev = gen

    @classmethod
    def identity(cls, rank: int) -> Word:
        return cls((), rank)

    @classmethod
    def generator(cls, gen: int, rank: int, exp: int = 1) -> Word:
        return reduce([(gen, exp)], rank)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def letters(self) -> Iterator[tuple[int, int]]:
        """Expand to single letters ``(generator, sign)``."""
        for gen, exp in self.syllables:
            sign = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield gen, sign

    def __mul__(self, other: Word) -> Word:
        if self.rank != other.rank:
            raise RankMismatch(f"cannot multiply words of rank {self.rank} and {other.rank}")
        return reduce(self.syllables + other.syllables, self.rank)

    def inverse(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)), self.rank)

    def __invert__(self) -> Word:
        return self.inverse()

    def __pow__(self, k: int) -> Word:
        if k < 0:
            return self.inverse() ** (-k)
        if len(self.syllables) == 1:
            g, e = self.syllables[0]
            return Word.generator(g, self.rank, e * k)
        result = Word.identity(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def with_rank(self, rank: int) -> Word:
        return Word(self.syllables, rank)

    def support(self) -> frozenset[int]:
        return frozenset(g for g, _ in self.syllables)

    def occurrences(self, gen: int) -> int:
        """Number of letters ``gen^{+-1}`` in the word (not the exponent sum)."""
        return sum(abs(e) for g, e in self.syllables if g == gen)

    def exponent_sum(self, gen: int) -> int:
        return sum(e for g, e in self.syllables if g == gen)

    def is_cyclically_reduced(self) -> bool:
        s = self.syllables
        return len(s) < 2 or s[0][0] != s[-1][0]

    def map_generators(self, f, rank: int) -> Word:
        return reduce(((f(g), e) for g, e in self.syllables), rank)

    def __str__(self) -> str:
        return format_word(self)


def reduce(letters: Iterable[tuple[int, int]], rank: int) -> Word:
    """Freely reduce a sequence of ``(generator, exponent)`` pairs.

    Exponents may be any integers; single letters use +-1.
    """
    stack: list[list[int]] = []
    for gen, exp in letters:
        if not 0 <= gen < rank:
            raise ValueError(f"generator index {gen} out of range for rank {rank}")
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return Word(tuple((g, e) for g, e in stack), rank)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(u, c)`` with ``u`` cyclically reduced and ``w == c u c^-1``."""
    conj: list[tuple[int, int]] = []
    u = w
    while not u.is_cyclically_reduced():
        s = u.syllables
        (g, a), (_, b), middle = s[0], s[-1], s[1:-1]
        if (a > 0) == (b > 0):
            # g^a M g^b = g^-b (g^(a+b) M) g^b
            conj.append((g, -b))
            u = reduce(((g, a + b),) + middle, u.rank)
        else:
            k = min(abs(a), abs(b)) * (1 if a > 0 else -1)
            conj.append((g, k))
            u = reduce(((g, a - k),) + middle + ((g, b + k),), u.rank)
    return u, reduce(conj, w.rank)


def abelianize_word(w: Word) -> tuple[int, ...]:
    vec = [0] * w.rank
    for g, e in w.syllables:
        vec[g] += e
    return tuple(vec)


@dataclass(frozen=True)
class Endomorphism:
    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError(f"need {self.rank} images, got {len(self.images)}")
        for im in self.images:
            if im.rank != self.rank:
                raise RankMismatch("image rank differs from endomorphism rank")

    @classmethod
    def identity(cls, rank: int) -> Endomorphism:
        return cls(rank, tuple(Word.generator(i, rank) for i in range(rank)))

    def __call__(self, w: Word) -> Word:
        return apply_endo(self, w)

    def __matmul__(self, other: Endomorphism) -> Endomorphism:
        return compose(self, other)

    def power(self, n: int) -> Endomorphism:
        if n < 0:
            raise ValueError("negative powers need an explicit inverse")
        result = Endomorphism.identity(self.rank)
        base = self
        while n:
            if n & 1:
                result = compose(result, base)
            base = compose(base, base)
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.rank)


def apply_endo(e: Endomorphism, w: Word) -> Word:
    if w.rank != e.rank:
        raise RankMismatch(f"word rank {w.rank} != endomorphism rank {e.rank}")
    out: list[tuple[int, int]] = []
    for g, k in w.syllables:
        piece = e.images[g] ** k
        out.extend(piece.syllables)
    return reduce(out, e.rank)


def compose(e1: Endomorphism, e2: Endomorphism) -> Endomorphism:
    """``compose(e1, e2)(w) == e1(e2(w))``."""
    if e1.rank != e2.rank:
        raise RankMismatch(f"cannot compose ranks {e1.rank} and {e2.rank}")
    return Endomorphism(e1.rank, tuple(apply_endo(e1, im) for im in e2.images))


# --- text format -----------------------------------------------------------

_TERM = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^([+-]?\d+))?$")
_INDEXED = re.compile(r"^x\d+$")
_SPLIT = re.compile(r"[\s*]+")


def _tokens(text: str) -> list[tuple[str, int]]:
    out = []
    for tok in _SPLIT.split(text.strip()):
        if not tok or tok == "1":
            continue
        m = _TERM.match(tok)
        if m is None:
            raise WordSyntaxError(f"cannot parse term {tok!r} in {text!r}")
        exp = int(m.group(2)) if m.group(2) is not None else 1
        out.append((m.group(1), exp))
    return out


def letter_alphabet(*texts: str, exclude: Iterable[str] = ()) -> tuple[str, ...] | None:
    """Names used by ``texts`` in canonical order, or None if they use ``x<k>``.

    Single letters are sorted alphabetically; mixing the two styles is an error.
    """
    names = set()
    indexed = False
    for text in texts:
        for name, _ in _tokens(text):
            if name in exclude:
                continue
            if len(name) > 1:
                if not _INDEXED.match(name):
                    raise WordSyntaxError(f"unknown generator {name!r}; use x<k> or single letters")
                indexed = True
            else:
                names.add(name)
    if indexed and names:
        raise WordSyntaxError("cannot mix x<k> names with single-letter names")
    if indexed:
        return None
    return tuple(sorted(names))


def parse_word(text: str, names: Sequence[str] | None = None, rank: int | None = None) -> Word:
    """Parse ``"x1 x0^-1"``, ``"a*b^2"`` and the like.

    With ``names`` given, each name (any identifier) maps to its position.  Otherwise ``x<k>``
    maps to ``k`` and single letters map to their rank among the distinct
    letters of ``text`` in alphabetical order.
    """
    toks = _tokens(text)
    if names is not None:
        lookup = {nm: i for i, nm in enumerate(names)}
        if rank is None:
            rank = len(names)
    else:
        alphabet = letter_alphabet(text)
        if alphabet is None:
            lookup = None
        else:
            lookup = {nm: i for i, nm in enumerate(alphabet)}
    letters = []
    for name, exp in toks:
        if lookup is not None:
            if name not in lookup:
                raise WordSyntaxError(f"unknown generator {name!r}")
            letters.append((lookup[name], exp))
        else:
            if len(name) == 1:
                raise WordSyntaxError("cannot mix x<k> names with single-letter names")
            letters.append((int(name[1:]), exp))
    if rank is None:
        rank = max((g for g, _ in letters), default=-1) + 1
        rank = max(rank, 1)
    for g, _ in letters:
        if g >= rank:
            raise WordSyntaxError(f"generator index {g} >= rank {rank}")
    return reduce(letters, rank)


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    if not w.syllables:
        return "1"
    parts = []
    for g, e in w.syllables:
        name = names[g] if names is not None else f"x{g}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return " ".join(parts)


def parse_endomorphism(text: str, names: Sequence[str] | None = None) -> tuple[Endomorphism, tuple[str, ...]]:
    """Parse ``"a->b; b->a^2"``.  Returns the endomorphism and generator names."""
    rules = [r.strip() for r in re.split(r"[;,\n]", text) if r.strip()]
    pairs = []
    for rule in rules:
        if "->" not in rule:
            raise WordSyntaxError(f"rule {rule!r} lacks '->'")
        lhs, rhs = (s.strip() for s in rule.split("->", 1))
        pairs.append((lhs, rhs))
    if names is None:
        alphabet = letter_alphabet(*(f"{a} {b}" for a, b in pairs))
        if alphabet is None:
            top = max((g for a, b in pairs for g, _ in parse_word(f"{a} {b}").syllables), default=0)
            alphabet = tuple(f"x{i}" for i in range(top + 1))
        names = alphabet
    names = tuple(names)
    rank = len(names)
    images: list[Word | None] = [None] * rank
    for lhs, rhs in pairs:
        src = parse_word(lhs, names)
        if len(src.syllables) != 1 or src.syllables[0][1] != 1:
            raise WordSyntaxError(f"left side {lhs!r} must be a single generator")
        g = src.syllables[0][0]
        if images[g] is not None:
            raise WordSyntaxError(f"generator {lhs!r} mapped twice")
        images[g] = parse_word(rhs, names)
    missing = [names[i] for i, im in enumerate(images) if im is None]
    if missing:
        raise WordSyntaxError(f"no image given for {', '.join(missing)}")
    return Endomorphism(rank, tuple(images)), names  # type: ignore[arg-type]


def format_endomorphism(e: Endomorphism, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = [f"x{i}" for i in range(e.rank)]
    return "; ".join(f"{names[i]}->{format_word(im, names)}" for i, im in enumerate(e.images))
