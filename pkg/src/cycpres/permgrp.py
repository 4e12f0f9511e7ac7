"""Permutation groups on points ``0..N-1`` with a deterministic Schreier-Sims
stabilizer chain.

Permutations compose left to right: ``(p * q)[i] == q[p[i]]``, i.e. apply
``p`` first.  This makes word evaluation and the right regular
representation homomorphisms without any reversal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Permutation:
        # skips the bijection check; only for products of known permutations
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        img = list(range(degree))
        for cyc in cycles:
            for k, a in enumerate(cyc):
                img[a] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Cycle notation, e.g. ``"(0 1 2)(3 4)"``; ``"()"`` is the identity."""
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
            if pts:
                cycles.append(pts)
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"bad cycle notation {text!r}")
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        o = other.images
        return Permutation._trusted(tuple([o[i] for i in self.images]))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def __invert__(self) -> Permutation:
        return self.inverse()

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def order(self) -> int:
        out = 1
        for c in self.cycles():
            out = out * len(c) // gcd(out, len(c))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


class _Level:
    __slots__ = ("base", "gens", "orbit", "trans", "checked")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[Permutation] = []
        self.orbit: list[int] = [base]
        self.trans: dict[int, Permutation] = {}
        self.checked: set[tuple[int, int]] = set()


class PermGroup:
    """Permutation group given by generators; the stabilizer chain is built
    lazily on first use (or eagerly by ``finalize``) and never mutated after."""

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), name: str | None = None):
        self.degree = degree
        self.generators = tuple(generators)
        for g in self.generators:
            if g.degree != degree:
                raise ValueError(f"generator of degree {g.degree} in a group of degree {degree}")
        self.name = name
        self._levels: list[_Level] | None = None
        self._elements: tuple[Permutation, ...] | None = None

    def __repr__(self) -> str:
        if self.name:
            return f"PermGroup({self.name})"
        return f"PermGroup(degree={self.degree}, generators=[{', '.join(map(str, self.generators))}])"

    # -- Schreier-Sims -------------------------------------------------------

    def finalize(self) -> PermGroup:
        if self._levels is None:
            self._build()
        return self

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def _build(self):
        self._levels = []
        for g in self.generators:
            h, j = self._sift(g, 0)
            if not h.is_identity():
                self._add(h, j)

    def _sift(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        levels = self._levels
        for j in range(start, len(levels)):
            lv = levels[j]
            pt = g.images[lv.base]
            u = lv.trans.get(pt)
            if u is None:
                return g, j
            g = g * u.inverse()
        return g, len(levels)

    def _add(self, h: Permutation, j: int):
        levels = self._levels
        if j == len(levels):
            moved = next(i for i, x in enumerate(h.images) if i != x)
            lv = _Level(moved)
            lv.trans[moved] = self.identity
            levels.append(lv)
        for i in range(j + 1):
            levels[i].gens.append(h)
        for i in range(j, -1, -1):
            self._close(i)

    def _close(self, i: int):
        lv = self._levels[i]
        while True:
            self._extend_orbit(lv)
            todo = [(p, si) for p in lv.orbit for si in range(len(lv.gens)) if (p, si) not in lv.checked]
            if not todo:
                return
            for p, si in todo:
                if (p, si) in lv.checked:
                    continue
                # re-entrant adds may have grown gens; keep the orbit closed
                self._extend_orbit(lv)
                lv.checked.add((p, si))
                s = lv.gens[si]
                # Schreier generator u_p s u_{ps}^-1 must sift through deeper levels
                sg = lv.trans[p] * s * lv.trans[s.images[p]].inverse()
                h, k = self._sift(sg, i + 1)
                if not h.is_identity():
                    self._add(h, k)

    @staticmethod
    def _extend_orbit(lv: _Level):
        k = 0
        while k < len(lv.orbit):
            p = lv.orbit[k]
            for s in lv.gens:
                q = s.images[p]
                if q not in lv.trans:
                    lv.trans[q] = lv.trans[p] * s
                    lv.orbit.append(q)
            k += 1

    # -- queries -----------------------------------------------------------

    def base(self) -> list[int]:
        self.finalize()
        return [lv.base for lv in self._levels]

    def order(self) -> int:
        self.finalize()
        out = 1
        for lv in self._levels:
            out *= len(lv.orbit)
        return out

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise ValueError(f"degree mismatch: {g.degree} vs {self.degree}")
        self.finalize()
        h, _ = self._sift(g, 0)
        return h.is_identity()

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def elements(self) -> tuple[Permutation, ...]:
        """All elements, sorted by image tuple (identity first)."""
        if self._elements is None:
            self.finalize()
            reps = [[lv.trans[p] for p in lv.orbit] for lv in reversed(self._levels)]
            out = []
            for combo in product(*reps):
                g = self.identity
                for u in combo:
                    g = g * u
                out.append(g)
            self._elements = tuple(sorted(out))
        return self._elements

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements())

    def subgroup(self, gens: Iterable[Permutation]) -> PermGroup:
        return PermGroup(self.degree, gens)

    def is_abelian(self) -> bool:
        g = self.generators
        return all(a * b == b * a for a in g for b in g)

    def is_cyclic(self) -> bool:
        if not self.is_abelian():
            return False
        n = self.order()
        return any(x.order() == n for x in self.elements())

    def is_transitive(self) -> bool:
        if self.degree <= 1:
            return True
        return len(orbit(0, self.generators)) == self.degree


def orbit(point: int, gens: Sequence[Permutation]) -> list[int]:
    seen = {point}
    out = [point]
    for p in out:
        for s in gens:
            q = s.images[p]
            if q not in seen:
                seen.add(q)
                out.append(q)
    return out


def closure(gens: Sequence[Permutation], degree: int) -> set[Permutation]:
    """Brute-force enumeration of the generated group (small groups only)."""
    e = Permutation.identity(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# -- named groups -------------------------------------------------------------


def symmetric_group(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens = [Permutation.from_cycles([range(n)], n), Permutation.from_cycles([(0, 1)], n)]
    return PermGroup(max(n, 1), gens, f"S{n}")


def alternating_group(n: int) -> PermGroup:
    gens = [Permutation.from_cycles([(0, 1, i)], n) for i in range(2, n)]
    return PermGroup(max(n, 1), gens, f"A{n}")


def cyclic_group(n: int) -> PermGroup:
    gens = [Permutation.from_cycles([range(n)], n)] if n >= 2 else []
    return PermGroup(max(n, 1), gens, f"C{n}")


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the regular ``n``-gon, order ``2n`` (``n >= 3``)."""
    if n < 3:
        raise ValueError("dihedral group needs n >= 3 (use C2 or the Klein group explicitly)")
    rot = Permutation.from_cycles([range(n)], n)
    ref = Permutation(tuple((-i) % n for i in range(n)))
    return PermGroup(n, [rot, ref], f"D{n}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


def psl2_group(p: int) -> PermGroup:
    """PSL(2, p) acting on the projective line; point ``p`` is infinity."""
    if not _is_prime(p):
        raise ValueError("PSL2 targets are provided for prime p only")
    inf = p

    def translate(z):
        return inf if z == inf else (z + 1) % p

    def invert(z):
        # z -> -1/z
        if z == inf:
            return 0
        if z == 0:
            return inf
        return (-pow(z, -1, p)) % p

    gens = [Permutation(tuple(f(z) for z in range(p + 1))) for f in (translate, invert)]
    return PermGroup(p + 1, gens, f"PSL2_{p}")


_NAME = re.compile(r"^(A|S|C|D|PSL2_)(\d+)$")


def group_from_name(name: str) -> PermGroup:
    """``A5``, ``S6``, ``C12``, ``D4`` (order 8), ``PSL2_7``; ``1`` is trivial."""
    if name in ("1", "trivial"):
        return PermGroup(1, [], "1")
    m = _NAME.match(name.strip())
    if m is None:
        raise ValueError(f"unknown target group {name!r}")
    kind, n = m.group(1), int(m.group(2))
    builder = {
        "A": alternating_group,
        "S": symmetric_group,
        "C": cyclic_group,
        "D": dihedral_group,
        "PSL2_": psl2_group,
    }[kind]
    group = builder(n)
    group.name = name.strip()
    return group


# -- alternating embedding ----------------------------------------------------


def multiplication_table(G: PermGroup) -> tuple[list[Permutation], list[list[int]]]:
    els = list(G.elements())
    index = {g: i for i, g in enumerate(els)}
    return els, [[index[a * b] for b in els] for a in els]


@dataclass(frozen=True)
class AlternatingEmbedding:
    degree: int
    images: tuple[Permutation, ...]
    padded: bool

    def __getitem__(self, i: int) -> Permutation:
        return self.images[i]


def embed_in_alternating(F: PermGroup | Sequence[Sequence[int]]) -> AlternatingEmbedding:
    """Embed a finite group into some ``A_N``.

    ``F`` is a permutation group or a multiplication table ``table[i][j] = i*j``.
    Uses the right regular representation ``x -> x*g``; if any image is odd,
    two extra points are added and the odd images are multiplied by the
    transposition swapping them.  ``images[i]`` is the image of element ``i``
    (for a ``PermGroup``, elements in ``F.elements()`` order).
    """
    if isinstance(F, PermGroup):
        _, table = multiplication_table(F)
    else:
        table = [list(r) for r in F]
    n = len(table)
    if n < 1:
        raise ValueError("empty group")
    regular = [Permutation(tuple(table[x][g] for x in range(n))) for g in range(n)]
    if all(p.is_even() for p in regular):
        return AlternatingEmbedding(n, tuple(regular), False)
    swap = Permutation.from_cycles([(n, n + 1)], n + 2)
    out = []
    for p in regular:
        q = Permutation(p.images + (n, n + 1))
        out.append(q if p.is_even() else q * swap)
    return AlternatingEmbedding(n + 2, tuple(out), True)
