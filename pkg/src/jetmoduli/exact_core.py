"""Exact rational linear algebra.

Dense matrices over the rationals with exact rank and right-kernel
computation. Elimination is fraction-free (Bareiss): every row is first
scaled to integers, the forward pass keeps all entries integral with exact
divisions by the previous pivot, and rationals only reappear when a kernel
basis is back-substituted.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from jetmoduli.utils.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: int | Fraction) -> Fraction:
    """Coerce an int or Fraction to a canonical Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True, slots=True)
class QVector:
    """Immutable vector of exact rationals."""

    entries: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Iterable[int | Fraction]) -> QVector:
        return cls(tuple(as_rational(v) for v in values))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def scaled(self, c: int | Fraction) -> QVector:
        return QVector(tuple(c * e for e in self.entries))


@dataclass(frozen=True, slots=True)
class QMatrix:
    """Immutable dense matrix over the rationals, row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError(f"negative matrix shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | Fraction]], cols: int | None = None) -> QMatrix:
        """Build a matrix from a list of rows.

        ``cols`` is required only when ``rows`` is empty and a nonzero
        column count is wanted.
        """
        width = len(rows[0]) if rows else (cols or 0)
        if cols is not None and rows and cols != width:
            raise DimensionMismatchError(f"expected {cols} columns, got {width}")
        flat: list[Fraction] = []
        for row in rows:
            if len(row) != width:
                raise DimensionMismatchError("ragged rows")
            flat.extend(as_rational(v) for v in row)
        return cls(len(rows), width, tuple(flat))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls(rows, cols, (_ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> QMatrix:
        return cls(
            size, size, tuple(_ONE if i == j else _ZERO for i in range(size) for j in range(size))
        )

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, v: QVector | Sequence[int | Fraction]) -> QVector:
        """Matrix-vector product."""
        values = v.entries if isinstance(v, QVector) else tuple(as_rational(x) for x in v)
        if len(values) != self.cols:
            raise DimensionMismatchError(
                f"vector of length {len(values)} does not fit {self.rows}x{self.cols} matrix"
            )
        return QVector(
            tuple(
                sum((a * b for a, b in zip(self.row(i), values, strict=True) if a), _ZERO)
                for i in range(self.rows)
            )
        )

    def is_zero(self) -> bool:
        return not any(self.entries)


def vstack(matrices: Sequence[QMatrix], cols: int | None = None) -> QMatrix:
    """Stack matrices with a common column count on top of each other."""
    if not matrices:
        return QMatrix.zeros(0, cols or 0)
    width = matrices[0].cols
    for m in matrices:
        if m.cols != width:
            raise DimensionMismatchError(f"cannot stack {m.cols}-column matrix onto {width}")
    return QMatrix(
        sum(m.rows for m in matrices), width, tuple(e for m in matrices for e in m.entries)
    )


# =============================================================================
# Fraction-free elimination
# =============================================================================


def _integer_rows(m: QMatrix) -> list[list[int]]:
    """Scale every nonzero row by the lcm of its denominators; drop zero rows."""
    out: list[list[int]] = []
    for i in range(m.rows):
        row = m.row(i)
        if not any(row):
            continue
        scale = math.lcm(*(e.denominator for e in row))
        out.append([e.numerator * (scale // e.denominator) for e in row])
    return out


def _echelon(m: QMatrix) -> tuple[list[list[int]], list[int]]:
    """Bareiss forward elimination.

    Returns the nonzero rows of an integer row-echelon form and the pivot
    column of each. Pivots are chosen by smallest magnitude within the
    column to slow coefficient growth.
    """
    a = _integer_rows(m)
    cols = m.cols
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r == len(a):
            break
        p = -1
        best = 0
        for i in range(r, len(a)):
            v = a[i][c]
            if v and (p < 0 or abs(v) < best):
                p, best = i, abs(v)
                if best == 1:
                    break
        if p < 0:
            continue
        a[r], a[p] = a[p], a[r]
        piv_row = a[r]
        piv = piv_row[c]
        tail = piv_row[c + 1 :]
        for i in range(r + 1, len(a)):
            row = a[i]
            f = row[c]
            if f:
                row[c + 1 :] = [(piv * x - f * y) // prev for x, y in zip(row[c + 1 :], tail)]
            else:
                row[c + 1 :] = [piv * x // prev for x in row[c + 1 :]]
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: QMatrix) -> int:
    """Exact rank over the rationals.

    Args:
        m: Matrix (any shape, empty allowed)

    Returns:
        rank, with 0 <= rank <= min(rows, cols)
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    started = time.perf_counter()
    _, pivots = _echelon(m)
    logger.debug(
        "rank of %dx%d matrix = %d (%.3fs)",
        m.rows,
        m.cols,
        len(pivots),
        time.perf_counter() - started,
    )
    return len(pivots)


def kernel_basis(m: QMatrix) -> list[QVector]:
    """Basis of the right null space of ``m``.

    Free columns are set to 1 one at a time (other free columns 0) and the
    pivot variables are solved by back substitution, so the basis is the
    reduced-echelon parametrization and is reproducible.

    Args:
        m: Matrix

    Returns:
        ``cols - rank(m)`` vectors v with m·v = 0 exactly
    """
    if m.cols == 0:
        return []
    echelon, pivots = _echelon(m) if m.rows else ([], [])
    pivot_set = set(pivots)
    basis: list[QVector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        x = [_ZERO] * m.cols
        x[free] = _ONE
        for row, pc in zip(reversed(echelon), reversed(pivots), strict=True):
            s = sum((row[j] * x[j] for j in range(pc + 1, m.cols) if row[j] and x[j]), _ZERO)
            x[pc] = -s / row[pc]
        basis.append(QVector(tuple(x)))
    return basis


def nullity(m: QMatrix) -> int:
    """Dimension of the right null space."""
    return m.cols - rank(m)


def binomial(a: int, b: int) -> int:
    """Binomial coefficient C(a, b), zero when b > a or either is negative."""
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)
