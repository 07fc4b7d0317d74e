"""Infinitesimal action of origin-preserving vector fields on connection jets.

The Lie derivative of a connection along V is

    (L_V Gamma)^l_ij = V^k d_k Gamma^l_ij - Gamma^k_ij d_k V^l
                       + Gamma^l_kj d_i V^k + Gamma^l_ik d_j V^k + d_i d_j V^l

and its k-jet only involves the k-jet of Gamma and the (k+2)-jet of V. For a
fixed connection jet the map V -> j^k(L_V Gamma) is linear, and
:func:`action_matrix` writes it down in the canonical coordinate bases.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from jetmoduli.exact_core import QMatrix, QVector, binomial, nullity, rank
from jetmoduli.jets import (
    ComponentJet,
    ConnectionJet,
    MultiIndex,
    TensorJet,
    TruncatedPolynomial,
    VectorFieldJet,
    jet_coords,
    jet_row_basis,
    tensor_from_coords,
    truncate_product,
    vector_field_basis,
    vector_field_coords,
    vector_field_from_coords,
)
from jetmoduli.utils.errors import DimensionMismatchError, JetOrderError

logger = logging.getLogger(__name__)

__all__ = [
    "ActionMatrix",
    "action_matrix",
    "action_matrix_shape",
    "lie_derivative",
    "tensor_lie_derivative",
    "vector_field_coords",
    "vf_bracket",
]


# =============================================================================
# Pointwise formulas
# =============================================================================


def _accumulate(
    acc: dict[MultiIndex, Fraction], poly: TruncatedPolynomial, sign: int = 1
) -> None:
    for idx, c in poly.items():
        acc[idx] = acc.get(idx, Fraction(0)) + sign * c


def _check_pair(v: VectorFieldJet, t: ComponentJet, needed: int) -> None:
    if v.n != t.n:
        raise DimensionMismatchError(
            f"vector field in {v.n} variables cannot act on a jet in {t.n} variables"
        )
    if v.max_degree < needed:
        raise JetOrderError(
            f"vector field known to degree {v.max_degree}; acting on an order-{t.order} jet "
            f"needs degree >= {needed}"
        )


def _transport_terms(v: VectorFieldJet, t: ComponentJet) -> list[dict[MultiIndex, Fraction]]:
    """The four tensorial terms of the Lie derivative, truncated at t.order."""
    n, k = t.n, t.order
    dv = [[v.component(c).derivative(s) for s in range(n)] for c in range(n)]
    dt = [[comp.derivative(s) for s in range(n)] for comp in t.components]

    out: list[dict[MultiIndex, Fraction]] = []
    for l in range(n):
        for i in range(n):
            for j in range(n):
                acc: dict[MultiIndex, Fraction] = {}
                pos = l * n * n + i * n + j
                for s in range(n):
                    # V^s d_s T^l_ij
                    _accumulate(acc, truncate_product(v.component(s), dt[pos][s], k))
                    # - T^s_ij d_s V^l
                    _accumulate(acc, truncate_product(t.component(s, i, j), dv[l][s], k), -1)
                    # + T^l_sj d_i V^s
                    _accumulate(acc, truncate_product(t.component(l, s, j), dv[s][i], k))
                    # + T^l_is d_j V^s
                    _accumulate(acc, truncate_product(t.component(l, i, s), dv[s][j], k))
                out.append(acc)
    return out


def lie_derivative(v: VectorFieldJet, g: ConnectionJet) -> TensorJet:
    """k-jet of the Lie derivative of a connection jet along a vector field.

    Args:
        v: Vector-field jet vanishing at the origin, known to degree >= g.order + 2
        g: Connection jet of order k

    Returns:
        The order-k tensor jet of L_V Gamma

    Raises:
        DimensionMismatchError: If v and g live in different numbers of variables
        JetOrderError: If v is not known to degree g.order + 2
    """
    _check_pair(v, g, g.order + 2)
    n, k = g.n, g.order
    terms = _transport_terms(v, g)
    comps: list[TruncatedPolynomial] = []
    for l in range(n):
        second = [[v.component(l).derivative(i).derivative(j) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                acc = terms[l * n * n + i * n + j]
                _accumulate(acc, second[i][j].truncate(k))
                comps.append(TruncatedPolynomial.truncated(n, k, acc))
    return TensorJet(n, k, tuple(comps))


def tensor_lie_derivative(v: VectorFieldJet, t: TensorJet) -> TensorJet:
    """k-jet of the Lie derivative of a (1,2)-tensor jet.

    Same transport terms as :func:`lie_derivative` without the second
    derivative of V; needs V known to degree t.order + 1.
    """
    _check_pair(v, t, t.order + 1)
    comps = tuple(
        TruncatedPolynomial.truncated(t.n, t.order, acc) for acc in _transport_terms(v, t)
    )
    return TensorJet(t.n, t.order, comps)


def vf_bracket(v: VectorFieldJet, w: VectorFieldJet, bound: int) -> VectorFieldJet:
    """Lie bracket [v, w]^i = v^k d_k w^i - w^k d_k v^i, truncated at ``bound``.

    Raises:
        DimensionMismatchError: If v and w live in different numbers of variables
    """
    if v.n != w.n:
        raise DimensionMismatchError(f"cannot bracket fields in {v.n} and {w.n} variables")
    n = v.n
    comps: list[TruncatedPolynomial] = []
    for i in range(n):
        acc: dict[MultiIndex, Fraction] = {}
        for s in range(n):
            _accumulate(acc, truncate_product(v.component(s), w.component(i).derivative(s), bound))
            _accumulate(
                acc, truncate_product(w.component(s), v.component(i).derivative(s), bound), -1
            )
        comps.append(TruncatedPolynomial.truncated(n, bound, acc))
    return VectorFieldJet(n, bound, tuple(comps))


# =============================================================================
# Linearization
# =============================================================================


def action_matrix_shape(n: int, k: int) -> tuple[int, int]:
    """(rows, cols) of the action matrix: n^3*C(n+k,n) by n*(C(n+k+2,n) - 1)."""
    return n**3 * binomial(n + k, n), n * (binomial(n + k + 2, n) - 1)


@dataclass(frozen=True)
class ActionMatrix:
    """Matrix of V -> j^k(L_V Gamma) at a fixed connection jet.

    Rows follow the tensor-jet coordinates (l, i, j, multi-index of degree
    <= k), columns the vector-field coordinates (component, multi-index of
    degree 1..k+2).
    """

    base: QMatrix
    n: int
    k: int
    row_basis: tuple[tuple[int, int, int, MultiIndex], ...]
    col_basis: tuple[tuple[int, MultiIndex], ...]

    def apply(self, v: VectorFieldJet) -> TensorJet:
        """Evaluate the linear map on a vector-field jet of degree k+2."""
        if v.n != self.n or v.max_degree != self.k + 2:
            raise JetOrderError(
                f"action matrix for n={self.n}, k={self.k} takes fields of degree {self.k + 2}"
            )
        image: QVector = self.base.apply(vector_field_coords(v))
        return tensor_from_coords(self.n, self.k, image.entries)

    def rank(self) -> int:
        """Dimension of the orbit tangent space."""
        return rank(self.base)

    def stabilizer_dim(self) -> int:
        """Dimension of the stabilizer subalgebra (cols - rank)."""
        return nullity(self.base)


def action_matrix(g: ConnectionJet) -> ActionMatrix:
    """Assemble the action matrix at a connection jet.

    Column c is the coordinate vector of the Lie derivative along the c-th
    basis field x^beta d/dx^component, so ``base`` times the coordinates of
    any V equals the coordinates of lie_derivative(V, g).
    """
    n, k = g.n, g.order
    col_basis = vector_field_basis(n, k + 2)
    row_basis = jet_row_basis(n, k)
    columns: list[Sequence[Fraction]] = []
    for component, idx in col_basis:
        field = VectorFieldJet.basis_field(n, k + 2, component, idx)
        columns.append(jet_coords(lie_derivative(field, g)))
    rows_count, cols_count = len(row_basis), len(col_basis)
    entries = tuple(columns[c][r] for r in range(rows_count) for c in range(cols_count))
    logger.debug("assembled %dx%d action matrix (n=%d, k=%d)", rows_count, cols_count, n, k)
    return ActionMatrix(
        base=QMatrix(rows_count, cols_count, entries),
        n=n,
        k=k,
        row_basis=row_basis,
        col_basis=col_basis,
    )


def field_from_kernel_vector(n: int, k: int, coords: Sequence[int | Fraction]) -> VectorFieldJet:
    """Vector-field jet of degree k+2 from a kernel vector of the action matrix."""
    return vector_field_from_coords(n, k + 2, coords)
