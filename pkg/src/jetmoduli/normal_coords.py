"""Normal-coordinate identities, stabilizer systems and explicit witnesses.

Coordinates are normal for a connection exactly when

    Gamma^i_jk(x) x^j x^k == 0

identically. Expanding Gamma^i_jk in derivative coordinates
Gamma^i_{jk,a1..ar} (symmetric in the a's) turns this into one linear
relation per upper index i and multiset M of r+2 lower indices: the sum,
over all ways of picking an ordered pair (j, k) of positions out of M, of
the slot with that (j, k) and the remaining indices as derivative block.

Jets store monomial (Taylor) coefficients; a derivative slot with block
beta equals the monomial coefficient times beta!.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from jetmoduli.exact_core import QMatrix, kernel_basis, nullity
from jetmoduli.jets import (
    ConnectionJet,
    MultiIndex,
    VectorFieldJet,
    monomials_of_degree,
    project_jet,
    unit_index,
)
from jetmoduli.lie_action import lie_derivative
from jetmoduli.utils.errors import JetOrderError, NotNormalError, ValidationError

logger = logging.getLogger(__name__)

# (upper index i, lower j, lower k, sorted derivative block)
NormalSlot = tuple[int, int, int, tuple[int, ...]]


# =============================================================================
# Slot bookkeeping
# =============================================================================


def block_exponents(n: int, block: Sequence[int]) -> MultiIndex:
    """Exponent vector of a derivative block (a multiset of variable indices)."""
    exps = [0] * n
    for var in block:
        exps[var] += 1
    return tuple(exps)


def index_factorial(idx: MultiIndex) -> int:
    """beta! = product of factorials of the exponents."""
    return math.prod(math.factorial(e) for e in idx)


@lru_cache(maxsize=None)
def normal_slots(n: int, r: int) -> tuple[NormalSlot, ...]:
    """Derivative slots Gamma^i_{jk,beta} of order r; beta is a sorted block of size r."""
    blocks = list(combinations_with_replacement(range(n), r))
    return tuple((i, j, k, b) for i in range(n) for j in range(n) for k in range(n) for b in blocks)


def normal_slot_values(g: ConnectionJet, r: int) -> tuple[Fraction, ...]:
    """Order-r derivative coordinates of a jet, in :func:`normal_slots` order."""
    if r > g.order:
        raise JetOrderError(f"jet of order {g.order} has no derivatives of order {r}")
    out: list[Fraction] = []
    for i, j, k, block in normal_slots(g.n, r):
        idx = block_exponents(g.n, block)
        out.append(g.component(i, j, k).coeff(idx) * index_factorial(idx))
    return tuple(out)


def jet_from_normal_slots(
    n: int, k: int, values_by_order: Mapping[int, Sequence[int | Fraction]]
) -> ConnectionJet:
    """Build a connection jet from derivative coordinates given per order r <= k."""
    coeffs: dict[tuple[int, int, int], dict[MultiIndex, Fraction]] = {}
    for r, values in values_by_order.items():
        slots = normal_slots(n, r)
        if len(values) != len(slots):
            raise ValidationError(f"order {r} needs {len(slots)} slot values, got {len(values)}")
        for (i, j, kk, block), value in zip(slots, values, strict=True):
            if value:
                idx = block_exponents(n, block)
                coeffs.setdefault((i, j, kk), {})[idx] = Fraction(value) / index_factorial(idx)
    return ConnectionJet.from_function(n, k, lambda l, i, j: coeffs.get((l, i, j), {}))


# =============================================================================
# Constraint system
# =============================================================================


@dataclass(frozen=True)
class NormalConstraintSystem:
    """Linear relations on the order-r derivative slots of a connection in normal coordinates.

    Rows are indexed by (i, multiset of r+2 lower indices); the kernel is the
    space of admissible order-r Taylor data.
    """

    n: int
    r: int
    matrix: QMatrix
    slots: tuple[NormalSlot, ...]
    row_labels: tuple[tuple[int, tuple[int, ...]], ...]

    def kernel_dim(self) -> int:
        return nullity(self.matrix)


@lru_cache(maxsize=None)
def normal_constraint_matrix(n: int, r: int) -> NormalConstraintSystem:
    """Assemble the normal-coordinate relations of derivative order r.

    For r = 0 this is antisymmetry of the value at the origin. A slot
    (i, j, k, beta) enters the row (i, M) with M = beta + {j, k} with weight
    equal to the number of ordered position pairs in M carrying (j, k), so
    every row has (r+2)(r+1) summands counted with multiplicity.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if r < 0:
        raise ValidationError(f"derivative order must be >= 0, got {r}")
    slots = normal_slots(n, r)
    position = {s: p for p, s in enumerate(slots)}
    labels: list[tuple[int, tuple[int, ...]]] = []
    rows: list[list[int]] = []
    for i in range(n):
        for multiset in combinations_with_replacement(range(n), r + 2):
            mult = Counter(multiset)
            row = [0] * len(slots)
            for j in mult:
                for k in mult:
                    weight = mult[j] * (mult[k] - (1 if j == k else 0))
                    if not weight:
                        continue
                    rest = Counter(mult)
                    rest[j] -= 1
                    rest[k] -= 1
                    block = tuple(sorted(rest.elements()))
                    row[position[(i, j, k, block)]] += weight
            rows.append(row)
            labels.append((i, multiset))
    matrix = QMatrix.from_rows(rows, cols=len(slots))
    return NormalConstraintSystem(n, r, matrix, slots, tuple(labels))


def is_normal_jet(g: ConnectionJet) -> bool:
    """True iff sum_jk Gamma^i_jk(x) x^j x^k vanishes through degree order+2 for every i."""
    n = g.n
    for i in range(n):
        acc: dict[MultiIndex, Fraction] = {}
        for j in range(n):
            for k in range(n):
                shift = [0] * n
                shift[j] += 1
                shift[k] += 1
                for idx, c in g.component(i, j, k).items():
                    key = tuple(a + b for a, b in zip(idx, shift, strict=True))
                    acc[key] = acc.get(key, Fraction(0)) + c
        if any(acc.values()):
            return False
    return True


def _require_normal(g: ConnectionJet) -> None:
    if not is_normal_jet(g):
        raise NotNormalError(
            f"connection jet (n={g.n}, order={g.order}) is not in normal coordinates"
        )


def _integral(vector: Sequence[Fraction]) -> list[int]:
    scale = math.lcm(*(v.denominator for v in vector)) if vector else 1
    return [int(v * scale) for v in vector]


def sample_normal_jet(n: int, k: int, seed: int, coeff_range: int = 10) -> ConnectionJet:
    """Random connection k-jet in its own normal coordinates.

    Each order r <= k is an integer combination (weights in
    [-coeff_range, coeff_range]) of the integer-scaled kernel basis of the
    order-r constraint system. Deterministic in ``seed``.
    """
    rng = random.Random(seed)
    values: dict[int, list[int]] = {}
    for r in range(k + 1):
        system = normal_constraint_matrix(n, r)
        basis = [_integral(v.entries) for v in kernel_basis(system.matrix)]
        combo = [0] * len(system.slots)
        for vec in basis:
            w = rng.randint(-coeff_range, coeff_range)
            if w:
                combo = [a + w * b for a, b in zip(combo, vec, strict=True)]
        values[r] = combo
    return jet_from_normal_slots(n, k, values)


# =============================================================================
# Witnesses
# =============================================================================


def witness_gamma(n: int) -> ConnectionJet:
    """Normal 0-jet with trivial linear stabilizer for n >= 4.

    For n=3 the field x^2 d/dx^1 + x^2 d/dx^3 fixes it and spans the stabilizer.

    gamma^a_{ab} = 1 for a < b and -1 for a > b, gamma^a_{ba} = -gamma^a_{ab},
    and zero whenever the upper index matches neither lower index.
    """
    if n < 2:
        raise ValidationError(f"witness_gamma needs n >= 2, got {n}")
    values = [[[0] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            sign = 1 if a < b else -1
            values[a][a][b] = sign
            values[a][b][a] = -sign
    return ConnectionJet.from_constants(values)


def witness_n2_first_order() -> ConnectionJet:
    """n=2 first-order normal jet with zero value at the origin and trivial linear stabilizer.

    In derivative coordinates, for each upper index i: Gamma^i_{12,s} = 2,
    Gamma^i_{21,s} = -1, Gamma^i_{kk,s} = -1 for k != s and
    Gamma^i_{11,1} = Gamma^i_{22,2} = 0.
    """
    n = 2
    slot_values: list[int] = []
    for _i, j, k, block in normal_slots(n, 1):
        s = block[0]
        if (j, k) == (0, 1):
            value = 2
        elif (j, k) == (1, 0):
            value = -1
        else:
            value = -1 if j != s else 0
        slot_values.append(value)
    return jet_from_normal_slots(n, 1, {0: [0] * len(normal_slots(n, 0)), 1: slot_values})


# =============================================================================
# Linear stabilizer systems
# =============================================================================


def linear_column(n: int, l: int, k: int) -> int:
    """Column of the unknown b^l_k (the field x^k d/dx^l)."""
    return l * n + k


@dataclass(frozen=True)
class StabilizerSystem0:
    """Linear fields V = b x fixing the value at the origin; rows (i, j, l) with i < j."""

    n: int
    matrix: QMatrix
    row_labels: tuple[tuple[int, int, int], ...]

    def kernel_dim(self) -> int:
        return nullity(self.matrix)


@dataclass(frozen=True)
class StabilizerSystem1:
    """Linear fields annihilating the degree-1 part; rows (i, j, l, s), zero rows kept."""

    n: int
    matrix: QMatrix
    row_labels: tuple[tuple[int, int, int, int], ...]

    def kernel_dim(self) -> int:
        return nullity(self.matrix)


def stabilizer_system_0jet(g: ConnectionJet) -> StabilizerSystem0:
    """Assemble -gamma^k_ij b^l_k + gamma^l_kj b^k_i + gamma^l_ik b^k_j = 0 for i < j.

    Only the value at the origin of ``g`` is used.

    Raises:
        NotNormalError: If ``g`` is not a normal jet
    """
    _require_normal(g)
    n = g.n
    gamma = project_jet(g, 0)
    labels: list[tuple[int, int, int]] = []
    rows: list[list[Fraction]] = []
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[linear_column(n, l, k)] -= gamma.value(k, i, j)
                    row[linear_column(n, k, i)] += gamma.value(l, k, j)
                    row[linear_column(n, k, j)] += gamma.value(l, i, k)
                rows.append(row)
                labels.append((i, j, l))
    return StabilizerSystem0(n, QMatrix.from_rows(rows, cols=n * n), tuple(labels))


def stabilizer_system_1jet(g: ConnectionJet) -> StabilizerSystem1:
    """Assemble the stabilizer equations of the degree-1 part Gamma^l_{ij,k}.

    Row (i, j, l, s): Gamma^l_{ij,k} b^k_s - Gamma^k_{ij,s} b^l_k
    + Gamma^l_{kj,s} b^k_i + Gamma^l_{ik,s} b^k_j.

    Raises:
        JetOrderError: If ``g`` has order 0
        NotNormalError: If ``g`` is not a normal jet
    """
    if g.order < 1:
        raise JetOrderError("stabilizer_system_1jet needs a jet of order >= 1")
    _require_normal(g)
    n = g.n

    def d(l: int, i: int, j: int, s: int) -> Fraction:
        return g.component(l, i, j).coeff(unit_index(n, s))

    labels: list[tuple[int, int, int, int]] = []
    rows: list[list[Fraction]] = []
    for i in range(n):
        for j in range(n):
            for l in range(n):
                for s in range(n):
                    row = [Fraction(0)] * (n * n)
                    for k in range(n):
                        row[linear_column(n, k, s)] += d(l, i, j, k)
                        row[linear_column(n, l, k)] -= d(k, i, j, s)
                        row[linear_column(n, k, i)] += d(l, k, j, s)
                        row[linear_column(n, k, j)] += d(l, i, k, s)
                    rows.append(row)
                    labels.append((i, j, l, s))
    return StabilizerSystem1(n, QMatrix.from_rows(rows, cols=n * n), tuple(labels))


def linear_stabilizer_block(g: ConnectionJet, m: int) -> QMatrix:
    """Stabilizer equations of the degree-m part of ``g`` under linear fields.

    Column b^l_k holds the degree-m coefficients of the Lie derivative of the
    homogeneous part along x^k d/dx^l; linear fields preserve degree, so this
    is the full contribution of that part.
    """
    if m > g.order:
        raise JetOrderError(f"jet of order {g.order} has no degree-{m} part")
    n = g.n
    part = g.homogeneous_part(m)
    columns: list[list[Fraction]] = [[] for _ in range(n * n)]
    for l in range(n):
        for k in range(n):
            field = VectorFieldJet.basis_field(n, m + 2, l, unit_index(n, k))
            image = lie_derivative(field, part)
            columns[linear_column(n, l, k)] = [
                image.component(a, b, c).coeff(idx)
                for a in range(n)
                for b in range(n)
                for c in range(n)
                for idx in monomials_of_degree(n, m)
            ]
    height = len(columns[0])
    return QMatrix.from_rows(
        [[columns[c][r] for c in range(n * n)] for r in range(height)], cols=n * n
    )
