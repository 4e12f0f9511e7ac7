"""Exact integer polynomials: associated polynomials of cyclic words,
cyclotomic-type detection, and resultants against ``t^n - 1``."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .words import abelianize_word


@dataclass(frozen=True)
class IntPolynomial:
    """Coefficients constant term first, no trailing zeros."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(int(a) for a in c))

    @classmethod
    def of(cls, *coefficients: int) -> IntPolynomial:
        return cls(tuple(coefficients))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPolynomial:
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return IntPolynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-a for a in self.coefficients))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(a * other for a in self.coefficients))
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        out = IntPolynomial.of(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Division by a divisor with leading coefficient +-1 (exact over Z)."""
        if divisor.is_zero() or abs(divisor.leading) != 1:
            raise ValueError("divisor must have leading coefficient +-1")
        rem = list(self.coefficients)
        dq = divisor.degree
        lead = divisor.leading
        if len(rem) - 1 < dq:
            return IntPolynomial(), self
        quot = [0] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * lead  # lead is its own inverse
            if c:
                quot[k - dq] = c
                for j, dc in enumerate(divisor.coefficients):
                    rem[k - dq + j] -= c * dc
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem))

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coefficients):
            acc = acc * x + a
        return acc

    def content(self) -> int:
        g = 0
        for a in self.coefficients:
            g = gcd(g, a)
        return g

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            a = self.coefficients[k]
            if not a:
                continue
            mag = abs(a)
            base = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            term = body + base
            sign = "-" if a < 0 else "+"
            terms.append((sign, term))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in terms[1:]:
            out += f" {sign} {term}"
        return out


def associated_polynomial(family) -> IntPolynomial:
    """Coefficient of ``t^i`` is the exponent sum of ``x_i`` in ``v``."""
    return IntPolynomial(abelianize_word(family.v))


def euler_phi(m: int) -> int:
    result, k, n = m, 2, m
    while k * k <= n:
        if n % k == 0:
            while n % k == 0:
                n //= k
            result -= result // k
        k += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> IntPolynomial:
    if m < 1:
        raise ValueError("m must be positive")
    p = IntPolynomial.monomial(m) - IntPolynomial.of(1)
    for k in range(1, m):
        if m % k == 0:
            p, rem = p.divmod_monic(cyclotomic_polynomial(k))
            assert rem.is_zero()
    return p


@dataclass(frozen=True)
class CyclotomicClassification:
    """``kind`` is one of ``zero``, ``unit_monomial``, ``cyclotomic_type``, ``other``.

    For the non-zero kinds with a factorization, the polynomial equals
    ``sign * t^shift * prod(Phi_m^mult)``.
    """

    kind: str
    sign: int = 1
    shift: int = 0
    factors: tuple[tuple[int, int], ...] = field(default=())

    def reconstruct(self) -> IntPolynomial:
        if self.kind == "zero":
            return IntPolynomial()
        if self.kind == "other":
            raise ValueError("no factorization for kind 'other'")
        out = IntPolynomial.monomial(self.shift, self.sign)
        for m, mult in self.factors:
            out = out * cyclotomic_polynomial(m) ** mult
        return out

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind in ("unit_monomial", "cyclotomic_type"):
            d.update(sign=self.sign, shift=self.shift, factors=[list(f) for f in self.factors])
        return d


@lru_cache(maxsize=None)
def _candidate_orders(deg: int) -> tuple[int, ...]:
    # phi(m) >= sqrt(m/2), so m <= 2 deg^2 covers every phi(m) <= deg
    bound = max(2, 3 * deg * deg)
    return tuple(m for m in range(1, bound + 1) if euler_phi(m) <= deg)


def _split(f: IntPolynomial, orders: Sequence[int], start: int) -> list[int] | None:
    """Backtracking search for a cyclotomic factor list of ``f`` (monic up to sign)."""
    if f.degree == 0:
        return [] if abs(f.leading) == 1 else None
    for idx in range(start, len(orders)):
        m = orders[idx]
        phi = cyclotomic_polynomial(m)
        if phi.degree > f.degree:
            continue
        q, rem = f.divmod_monic(phi)
        if rem.is_zero():
            rest = _split(q, orders, idx)
            # Z[t] is a UFD: if Phi_m divides f and the cofactor does not
            # split, no other branch can succeed
            return None if rest is None else [m] + rest
    return None


def classify_cyclotomic_type(f: IntPolynomial) -> CyclotomicClassification:
    if f.is_zero():
        return CyclotomicClassification("zero")
    c = f.coefficients
    shift = next(i for i, a in enumerate(c) if a)
    core = IntPolynomial(c[shift:])
    if core.degree == 0:
        if abs(core.leading) == 1:
            return CyclotomicClassification("unit_monomial", core.leading, shift)
        return CyclotomicClassification("other")
    if abs(core.leading) != 1 or abs(core.coefficients[0]) != 1:
        return CyclotomicClassification("other")
    found = _split(core, _candidate_orders(core.degree), 0)
    if found is None:
        return CyclotomicClassification("other")
    factors: dict[int, int] = {}
    for m in found:
        factors[m] = factors.get(m, 0) + 1
    prod_phi = IntPolynomial.of(1)
    for m in found:
        prod_phi = prod_phi * cyclotomic_polynomial(m)
    sign = core.leading * prod_phi.leading
    result = CyclotomicClassification("cyclotomic_type", sign, shift, tuple(sorted(factors.items())))
    assert result.reconstruct() == f
    return result


def _bareiss_det(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester_matrix(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    """Sylvester matrix of ``f`` and ``g`` (coefficients constant term first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    fr, gr = list(reversed(f)), list(reversed(g))
    rows = []
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return rows


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    if f.is_zero() or g.is_zero():
        return 0
    if f.degree == 0:
        return f.leading ** g.degree
    if g.degree == 0:
        return g.leading ** f.degree
    return _bareiss_det(sylvester_matrix(f.coefficients, g.coefficients))


def resultant_with_cyclic(f: IntPolynomial, n: int) -> int:
    """``Res(f, t^n - 1)`` via the Sylvester determinant."""
    if n < 1:
        raise ValueError("n must be positive")
    return resultant(f, IntPolynomial.monomial(n) - IntPolynomial.of(1))


def product(polys: Iterable[IntPolynomial]) -> IntPolynomial:
    out = IntPolynomial.of(1)
    for p in polys:
        out = out * p
    return out

