"""Residual-finiteness evidence for ascending HNN extensions ``F_r *_theta``.

Finite-index subgroups of ``F_r`` are coset tables (right action of the free
generators on cosets, basepoint 0, stored in breadth-first canonical form).
Separating finite p-quotients come from truncated Magnus expansions mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .abelian import IntMatrix
from .words import Endomorphism, Word, abelianize_word, apply_endo, compose, format_endomorphism, format_word

DEFAULT_ORBIT_BOUND = 10 ** 4
DEFAULT_DEGREE_BOUND = 16
REWRITE_BOUND = 2 ** 16


class BoundExceeded(RuntimeError):
    pass


class TheoremInapplicable(ValueError):
    pass


# -- coset tables -------------------------------------------------------------


def _canonical_tables(tables: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    m = len(tables[0]) if tables else 1
    inverses = []
    for t in tables:
        inv = [0] * m
        for c, d in enumerate(t):
            inv[d] = c
        inverses.append(inv)
    label = {0: 0}
    queue = [0]
    for c in queue:
        for t, inv in zip(tables, inverses):
            for d in (t[c], inv[c]):
                if d not in label:
                    label[d] = len(label)
                    queue.append(d)
    if len(label) != m:
        raise ValueError("coset table is not transitive")
    out = []
    for t in tables:
        new = [0] * m
        for c in range(m):
            new[label[c]] = label[t[c]]
        out.append(tuple(new))
    return tuple(out)


@dataclass(frozen=True)
class FiniteIndexSubgroup:
    """Subgroup of ``F_rank`` as the stabilizer of coset 0.

    ``tables[i][c]`` is the coset ``c . x_i``.  Tables are canonicalized on
    construction, so equal subgroups compare equal.
    """

    rank: int
    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.tables) != self.rank:
            raise ValueError("one table per generator")
        m = len(self.tables[0]) if self.tables else 1
        for t in self.tables:
            if sorted(t) != list(range(m)):
                raise ValueError("each table must be a permutation of the cosets")
        if self.tables:
            object.__setattr__(self, "tables", _canonical_tables(self.tables))

    @property
    def index(self) -> int:
        return len(self.tables[0]) if self.tables else 1

    @classmethod
    def whole(cls, rank: int) -> FiniteIndexSubgroup:
        return cls(rank, tuple((0,) for _ in range(rank)))

    @classmethod
    def from_abelian_map(cls, vectors: Sequence[Sequence[int]], modulus: int) -> FiniteIndexSubgroup:
        """Kernel of ``F_r -> (Z/modulus)^k`` sending ``x_i`` to ``vectors[i]``."""
        rank = len(vectors)
        k = len(vectors[0]) if vectors else 0
        zero = (0,) * k
        index = {zero: 0}
        order = [zero]
        for c in order:
            for v in vectors:
                for sgn in (1, -1):
                    d = tuple((a + sgn * b) % modulus for a, b in zip(c, v))
                    if d not in index:
                        index[d] = len(order)
                        order.append(d)
        tables = []
        for v in vectors:
            tables.append(tuple(index[tuple((a + b) % modulus for a, b in zip(c, v))] for c in order))
        return cls(rank, tuple(tables))

    @classmethod
    def from_functional(cls, coeffs: Sequence[int], modulus: int) -> FiniteIndexSubgroup:
        return cls.from_abelian_map([(c,) for c in coeffs], modulus)

    def act(self, w: Word, coset: int = 0) -> int:
        c = coset
        for g, e in w.syllables:
            t = self.tables[g]
            if e > 0:
                for _ in range(e):
                    c = t[c]
            else:
                for _ in range(-e):
                    c = t.index(c)
        return c

    def contains(self, w: Word) -> bool:
        return self.act(w) == 0

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        if names is None:
            names = [f"x{i}" for i in range(self.rank)]
        return {"index": self.index, "tables": {names[i]: list(t) for i, t in enumerate(self.tables)}}

    @classmethod
    def from_json(cls, data: Mapping, names: Sequence[str]) -> FiniteIndexSubgroup:
        tables = data["tables"]
        missing = [n for n in names if n not in tables]
        if missing:
            raise ValueError(f"subgroup file lacks tables for {missing}")
        out = cls(len(names), tuple(tuple(tables[n]) for n in names))
        if "index" in data and data["index"] != out.index:
            raise ValueError("declared index does not match tables")
        return out


def composed_action(theta: Endomorphism, H: FiniteIndexSubgroup) -> list[tuple[int, ...]]:
    """Permutations of the cosets of ``H`` induced by ``x_i -> theta(x_i)``."""
    if theta.rank != H.rank:
        raise ValueError("rank mismatch")
    return [tuple(H.act(im, c) for c in range(H.index)) for im in theta.images]


def _orbit_of_zero(perms: Sequence[Sequence[int]], m: int) -> list[int]:
    seen = {0}
    out = [0]
    for c in out:
        for t in perms:
            for d in (t[c], t.index(c)):
                if d not in seen:
                    seen.add(d)
                    out.append(d)
    return out


def preimage_subgroup(theta: Endomorphism, H: FiniteIndexSubgroup) -> FiniteIndexSubgroup:
    """``theta^-1(H)``: stabilizer of coset 0 under ``g -> (action of theta(g))``."""
    perms = composed_action(theta, H)
    orb = _orbit_of_zero(perms, H.index)
    relabel = {c: i for i, c in enumerate(orb)}
    tables = tuple(tuple(relabel[t[c]] for c in orb) for t in perms)
    return FiniteIndexSubgroup(H.rank, tables)


def image_acts_transitively(theta: Endomorphism, H: FiniteIndexSubgroup) -> bool:
    """Whether ``theta(F) H = F``, i.e. ``theta(F)`` is transitive on cosets of ``H``."""
    return len(_orbit_of_zero(composed_action(theta, H), H.index)) == H.index


@dataclass(frozen=True)
class PullbackOrbit:
    preperiod: int
    period: int
    chain: tuple[FiniteIndexSubgroup, ...]

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        return {
            "preperiod": self.preperiod,
            "period": self.period,
            "indices": [H.index for H in self.chain],
            "chain": [H.to_json(names) for H in self.chain],
        }


def pullback_orbit(
    theta: Endomorphism,
    H: FiniteIndexSubgroup,
    bound: int = DEFAULT_ORBIT_BOUND,
    theta_inverse: Endomorphism | None = None,
) -> PullbackOrbit:
    """Iterate ``H -> theta^-1(H)`` until a canonical table repeats.

    Returns ``(k, l, chain)`` with ``theta^-k(H) == theta^-(k+l)(H)``.  When an
    inverse of ``theta`` is supplied the preperiod is asserted to be 0.
    """
    seen = {H: 0}
    chain = [H]
    while True:
        nxt = preimage_subgroup(theta, chain[-1])
        if nxt in seen:
            k = seen[nxt]
            orbit = PullbackOrbit(k, len(chain) - k, tuple(chain))
            break
        if len(chain) >= bound:
            raise BoundExceeded(f"no repeat among the first {bound} pullbacks")
        seen[nxt] = len(chain)
        chain.append(nxt)
    if theta_inverse is not None:
        ident = Endomorphism.identity(theta.rank)
        if compose(theta, theta_inverse) != ident or compose(theta_inverse, theta) != ident:
            raise ValueError("theta_inverse is not inverse to theta")
        assert orbit.preperiod == 0, "automorphism pullback must be purely periodic"
    return orbit


def prop61_check(theta: Endomorphism, H: FiniteIndexSubgroup, bound: int = DEFAULT_ORBIT_BOUND) -> int | None:
    """Least ``l > 0`` with ``theta^-l(H) == H``, or None if ``H`` is preperiodic.

    When ``l`` exists, ``<H, t^l>`` has finite index in ``F_r *_theta`` and
    meets the base exactly in ``H``.
    """
    orb = pullback_orbit(theta, H, bound)
    return orb.period if orb.preperiod == 0 else None


def enumerate_subgroups(rank: int, max_index: int) -> list[FiniteIndexSubgroup]:
    """All subgroups of ``F_rank`` of index at most ``max_index``, by brute
    force over tuples of permutations (small cases only)."""
    out: dict[FiniteIndexSubgroup, None] = {}
    for m in range(1, max_index + 1):
        perms = list(permutations(range(m)))
        for combo in product(perms, repeat=rank):
            if len(_orbit_of_zero(combo, m)) != m:
                continue
            out[FiniteIndexSubgroup(rank, tuple(combo))] = None
    return list(out)


# -- abelianized endomorphism -------------------------------------------------


def abelianized_matrix(theta: Endomorphism) -> tuple[IntMatrix, int]:
    """Matrix with column ``i`` the exponent sums of ``theta(x_i)``, and its determinant."""
    cols = [abelianize_word(im) for im in theta.images]
    r = theta.rank
    M = IntMatrix.from_rows([[cols[i][j] for i in range(r)] for j in range(r)], r)
    return M, M.det()


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


def primes() -> Iterator[int]:
    p = 2
    while True:
        if _is_prime(p):
            yield p
        p += 1


def mod_p_kernel(M: IntMatrix, p: int) -> list[tuple[int, ...]]:
    """Basis of the null space of ``M`` over ``F_p`` (column vectors ``x`` with ``Mx = 0``)."""
    rows = [[a % p for a in r] for r in M.rows]
    n = M.ncols
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(a * inv) % p for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][fcol]) % p
        basis.append(tuple(v))
    return basis


def mod_p_rank(M: IntMatrix, p: int) -> int:
    return M.ncols - len(mod_p_kernel(M, p))


def choose_prime(det: int) -> int:
    """Smallest prime not dividing ``det``; the reduced matrix is then invertible mod p."""
    if det == 0:
        raise TheoremInapplicable(
            "det = 0: the abelianized map is singular mod every prime, so the "
            "induced map on (C_p)^r is never invertible"
        )
    for p in primes():
        if det % p:
            return p
    raise AssertionError("unreachable")


def mod_p_report(M: IntMatrix, ps: Iterable[int]) -> list[dict]:
    out = []
    for p in ps:
        ker = mod_p_kernel(M, p)
        out.append({"p": p, "rank": M.ncols - len(ker), "invertible": not ker, "kernel": [list(v) for v in ker]})
    return out


# -- truncated Magnus expansion ------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Element of ``F_p<X_0..X_{r-1}>`` modulo monomials of degree ``>= D``."""

    p: int
    D: int
    terms: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: c % self.p for m, c in self.terms.items() if c % self.p and len(m) < self.D}
        object.__setattr__(self, "terms", clean)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def one(cls, p: int, D: int) -> TruncatedSeries:
        return cls(p, D, {(): 1})

    def is_one(self) -> bool:
        return self.terms == {(): 1}

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        if (self.p, self.D) != (other.p, other.D):
            raise ValueError("incompatible truncations")
        out: dict[tuple[int, ...], int] = {}
        D = self.D
        for m1, c1 in self.terms.items():
            room = D - len(m1)
            for m2, c2 in other.terms.items():
                if len(m2) < room:
                    k = m1 + m2
                    out[k] = out.get(k, 0) + c1 * c2
        return TruncatedSeries(self.p, D, out)

    def lowest_degree_term(self) -> tuple[tuple[int, ...], int] | None:
        """Least nonconstant monomial (by degree, then lexicographic) with its coefficient."""
        nonconst = [(len(m), m, c) for m, c in self.terms.items() if m]
        if not nonconst:
            return None
        _, m, c = min(nonconst)
        return m, c

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "D": self.D,
            "terms": [[list(m), c] for m, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))],
        }


def _generalized_binomial(e: int, j: int) -> int:
    if e >= 0:
        return comb(e, j)
    return (-1) ** j * comb(-e + j - 1, j)


def _power_series(gen: int, e: int, p: int, D: int) -> TruncatedSeries:
    # (1 + X)^e truncated, valid for negative e as well
    return TruncatedSeries(p, D, {(gen,) * j: _generalized_binomial(e, j) for j in range(D)})


def magnus_expand(g: Word, p: int, D: int) -> TruncatedSeries:
    """Image of ``g`` under ``x_i -> 1 + X_i`` mod ``p``, truncated below degree ``D``."""
    if D < 2:
        raise ValueError("truncation degree must be at least 2")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    out = TruncatedSeries.one(p, D)
    for gen, e in g.syllables:
        out = out * _power_series(gen, e, p, D)
    return out


def separating_degree(g: Word, p: int, bound: int = DEFAULT_DEGREE_BOUND) -> int:
    """Least ``D`` with ``magnus_expand(g, p, D) != 1``."""
    if not g:
        raise ValueError("the identity is not separated by any quotient")
    for D in range(2, bound + 1):
        if not magnus_expand(g, p, D).is_one():
            return D
    raise BoundExceeded(f"expansion of {g} is trivial mod {p} below degree {bound}")


def unitriangular_coefficient(g: Word, monomial: Sequence[int], p: int) -> int:
    """Coefficient of ``monomial`` in the Magnus expansion of ``g`` mod ``p``,
    computed in the unitriangular matrix group (an independent route)."""
    k = len(monomial)
    size = k + 1

    def gen_matrix(gen: int, e: int):
        # I + N with N the superdiagonal positions labelled by gen; (I+N)^e
        N = [[0] * size for _ in range(size)]
        for j, m in enumerate(monomial):
            if m == gen:
                N[j][j + 1] = 1
        out = [[int(i == j) for j in range(size)] for i in range(size)]
        Npow = [row[:] for row in out]
        for j in range(1, size):
            Npow = _matmul_mod(Npow, N, p)
            c = _generalized_binomial(e, j) % p
            if c:
                for a in range(size):
                    for b in range(size):
                        out[a][b] = (out[a][b] + c * Npow[a][b]) % p
        return out

    acc = [[int(i == j) for j in range(size)] for i in range(size)]
    for gen, e in g.syllables:
        acc = _matmul_mod(acc, gen_matrix(gen, e), p)
    return acc[0][k] % p


def _matmul_mod(a, b, p):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) % p for j in range(n)] for i in range(n)]


# -- HNN rewriting and certificates ----------------------------------------------


def ascending_normal_form(theta: Endomorphism, g: Word, bound: int = REWRITE_BOUND) -> tuple[int, Word, int]:
    """Write ``g`` (generators ``0..r-1`` plus ``t = r``) as ``t^-p h t^q``.

    Scans left to right using ``t u = theta(u) t``.
    """
    r = theta.rank
    if g.rank != r + 1:
        raise ValueError("witness must be a word in the base generators and t")
    p, q = 0, 0
    h = Word.identity(r)
    for gen, sign in g.letters():
        if gen == r:
            if sign > 0:
                q += 1
            elif q > 0:
                q -= 1
            else:
                p += 1
                h = apply_endo(theta, h)
        else:
            x = Word.generator(gen, r, sign)
            for _ in range(q):
                x = apply_endo(theta, x)
            h = h * x
        if len(h) > bound:
            raise BoundExceeded(f"intermediate word longer than {bound}")
    return p, h, q


def ascending_normal_form_rtl(theta: Endomorphism, g: Word, bound: int = REWRITE_BOUND) -> tuple[int, Word, int]:
    """Same normal form, scanning right to left with ``u t^-1 = t^-1 theta(u)``."""
    r = theta.rank
    p, q = 0, 0
    h = Word.identity(r)
    for gen, sign in reversed(list(g.letters())):
        if gen == r:
            if sign < 0:
                p += 1
            elif p > 0:
                p -= 1
            else:
                q += 1
                h = apply_endo(theta, h)
        else:
            x = Word.generator(gen, r, sign)
            for _ in range(p):
                x = apply_endo(theta, x)
            h = x * h
        if len(h) > bound:
            raise BoundExceeded(f"intermediate word longer than {bound}")
    return p, h, q


@dataclass(frozen=True)
class WitnessRecord:
    word: Word
    t_exponent: int
    method: str  # "cyclic" or "p-quotient"
    cyclic_modulus: int | None = None
    conjugating_power: int | None = None
    fiber_word: Word | None = None
    degree: int | None = None
    monomial: tuple[int, ...] | None = None
    coefficient: int | None = None


@dataclass(frozen=True)
class RFCertificate:
    theta: Endomorphism
    matrix: IntMatrix
    det: int
    prime: int
    det_mod_p: int
    skipped_primes: tuple[int, ...]
    witnesses: tuple[WitnessRecord, ...]
    names: tuple[str, ...]

    @property
    def within_hypothesis(self) -> bool:
        return self.theta.rank >= 2

    def to_json(self) -> dict:
        base = self.names
        full = base + ("t",)
        out = {
            "endomorphism": format_endomorphism(self.theta, base),
            "abelianized_matrix": self.matrix.tolist(),
            "det": self.det,
            "prime": self.prime,
            "prime_justification": (
                f"{self.prime} is the least prime not dividing det; "
                + (f"skipped {list(self.skipped_primes)}" if self.skipped_primes else "no primes skipped")
            ),
            "det_mod_p": self.det_mod_p,
            "invertible_mod_p": self.det_mod_p != 0,
            "rank_at_least_2": self.within_hypothesis,
            "witnesses": [],
        }
        for w in self.witnesses:
            rec: dict = {"word": format_word(w.word, full), "t_exponent": w.t_exponent, "method": w.method}
            if w.method == "cyclic":
                rec["cyclic_modulus"] = w.cyclic_modulus
            else:
                rec.update(
                    conjugating_power=w.conjugating_power,
                    fiber_word=format_word(w.fiber_word, base),
                    degree=w.degree,
                    monomial=[base[i] for i in w.monomial],
                    coefficient=w.coefficient,
                )
            out["witnesses"].append(rec)
        return out


def rf_certificate(theta: Endomorphism, witnesses: Sequence[Word], names: Sequence[str] | None = None,
                   degree_bound: int = DEFAULT_DEGREE_BOUND) -> RFCertificate:
    """Residual-finiteness evidence for ``F_r *_theta`` at the given witnesses.

    Witnesses are words of rank ``r + 1`` with the stable letter ``t`` last.
    Nonzero ``t``-exponent is separated by a cyclic quotient; otherwise the
    witness is conjugated into the base and separated by a Magnus truncation
    mod the chosen prime.
    """
    r = theta.rank
    if names is None:
        names = [f"x{i}" for i in range(r)]
    M, det = abelianized_matrix(theta)
    p = choose_prime(det)
    skipped = tuple(q for q in range(2, p) if _is_prime(q))
    det_mod_p = det % p
    assert det_mod_p != 0 and mod_p_rank(M, p) == r
    records = []
    for w in witnesses:
        if w.rank != r + 1:
            raise ValueError("witness rank must be r + 1")
        if not w:
            raise ValueError("identity witness")
        e = w.exponent_sum(r)
        if e:
            records.append(WitnessRecord(w, e, "cyclic", cyclic_modulus=abs(e) + 1))
            continue
        k, h, q = ascending_normal_form(theta, w)
        assert k == q
        if not h:
            raise ValueError(f"witness {w} is trivial in the HNN extension")
        D = separating_degree(h, p, degree_bound)
        mono, coeff = magnus_expand(h, p, D).lowest_degree_term()
        records.append(WitnessRecord(w, 0, "p-quotient", conjugating_power=k, fiber_word=h,
                                     degree=D, monomial=mono, coefficient=coeff))
    return RFCertificate(theta, M, det, p, det_mod_p, skipped, tuple(records), tuple(names))


def _leibniz_det(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def verify_certificate(cert: RFCertificate) -> list[str]:
    """Re-derive every field along independent routes; returns a list of failures."""
    problems = []
    r = cert.theta.rank
    cols = [abelianize_word(im) for im in cert.theta.images]
    if cert.matrix.tolist() != [[cols[i][j] for i in range(r)] for j in range(r)]:
        problems.append("matrix")
    if r <= 8 and _leibniz_det(cert.matrix.rows) != cert.det:
        problems.append("det")
    if cert.det % cert.prime == 0 or not _is_prime(cert.prime):
        problems.append("prime")
    if any(cert.det % q for q in cert.skipped_primes):
        problems.append("prime minimality")
    for w in cert.witnesses:
        if w.method == "cyclic":
            if w.word.exponent_sum(r) != w.t_exponent or w.t_exponent % w.cyclic_modulus == 0:
                problems.append(f"cyclic witness {w.word}")
            continue
        k, h, q = ascending_normal_form_rtl(cert.theta, w.word)
        # t^-k h t^k and t^-K H t^K agree iff theta^(K-k)(h) == H
        K, H = w.conjugating_power, w.fiber_word
        if k <= K:
            same = cert.theta.power(K - k)(h) == H
        else:
            same = cert.theta.power(k - K)(H) == h
        if k != q or not same:
            problems.append(f"rewrite of {w.word}")
        c = unitriangular_coefficient(H, w.monomial, cert.prime)
        if c == 0 or c != w.coefficient or len(w.monomial) != w.degree - 1:
            problems.append(f"separation of {w.word}")
    return problems
