"""Exact integer matrices, Smith normal form with transforms, and
abelianizations of finite presentations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .words import abelianize_word


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
        rows = tuple(tuple(int(a) for a in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> IntMatrix:
        return cls(tuple((0,) * n for _ in range(m)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
            other.ncols,
        )

    def transpose(self) -> IntMatrix:
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def det(self) -> int:
        """Exact determinant by rational elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = [[Fraction(x) for x in r] for r in self.rows]
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det *= a[k][k]
            for i in range(k + 1, n):
                f = a[i][k] / a[k][k]
                if f:
                    for j in range(k, n):
                        a[i][j] -= f * a[k][j]
        assert det.denominator == 1
        return int(det)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class SmithForm:
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(self.D.shape)
        return tuple(self.D[i, i] for i in range(k))


def _pick_pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[i])):
            x = abs(a[i][j])
            if x and (best is None or x < best[0]):
                best = (x, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(M: IntMatrix) -> SmithForm:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    Pivot rule: smallest nonzero absolute value in the active block, first in
    row-major order.
    """
    m, n = M.shape
    a = [list(r) for r in M.rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_axpy(dst, src, q):
        # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_axpy(dst, src, q):
        for r in a:
            r[dst] -= q * r[src]
        for r in v:
            r[dst] -= q * r[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            piv = _pick_pivot(a, t)
            if piv is None:
                break
            i0, j0 = piv
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    row_axpy(i, t, a[i][t] // p)
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    col_axpy(j, t, a[t][j] // p)
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is not None:
                row_axpy(t, bad, -1)
                continue
            if p < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            break

    sf = SmithForm(IntMatrix.from_rows(a, n), IntMatrix.from_rows(u, m), IntMatrix.from_rows(v, n))
    if sf.U @ M @ sf.V != sf.D:
        raise ArithmeticError("Smith form transform check failed")
    return sf


def is_smith_form(D: IntMatrix) -> bool:
    m, n = D.shape
    for i in range(m):
        for j in range(n):
            if i != j and D[i, j]:
                return False
    diag = [D[i, i] for i in range(min(m, n))]
    if any(d < 0 for d in diag):
        return False
    for x, y in zip(diag, diag[1:]):
        if x == 0 and y != 0:
            return False
        if x and y % x:
            return False
    return True


@dataclass(frozen=True)
class AbelianGroupStructure:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def is_cyclic(self) -> bool:
        return (self.free_rank == 1 and not self.torsion) or (self.free_rank == 0 and len(self.torsion) <= 1)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "1"


def relation_matrix(p) -> IntMatrix:
    """Rows are the exponent-sum vectors of the relators."""
    return IntMatrix.from_rows([abelianize_word(r) for r in p.relators], p.num_generators)


def structure_from_matrix(M: IntMatrix) -> AbelianGroupStructure:
    """Cokernel of the row space of ``M`` in ``Z^ncols``."""
    if M.nrows == 0:
        return AbelianGroupStructure(M.ncols)
    sf = smith_normal_form(M)
    nonzero = [d for d in sf.invariant_factors if d]
    return AbelianGroupStructure(M.ncols - len(nonzero), tuple(d for d in nonzero if d > 1))


def abelianization(p) -> AbelianGroupStructure:
    return structure_from_matrix(relation_matrix(p))


def circulant(coefficients: Sequence[int], n: int) -> IntMatrix:
    """Row ``i`` holds the coefficients cyclically shifted by ``i`` (mod ``n``).

    Coefficients beyond ``n`` wrap around, matching ``G_n(v)`` relators.
    """
    base = [0] * n
    for k, c in enumerate(coefficients):
        base[k % n] += c
    return IntMatrix.from_rows([[base[(j - i) % n] for j in range(n)] for i in range(n)])
