"""Truncated multivariate polynomials and jets of connections, tensors and vector fields.

Every jet space gets a canonical coordinate basis from one global monomial
order: degree ascending, then lexicographic with x^1 first, so
``(2,0) > (1,1) > (0,2)`` within degree two. Jet components Gamma^l_ij are
stored flat at position ``l*n*n + i*n + j`` (0-based indices); the JSON form
uses 1-based indices like the usual index notation.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, TypeVar

from jetmoduli.exact_core import as_rational, binomial
from jetmoduli.utils.errors import DimensionMismatchError, JetOrderError, ValidationError

MultiIndex = tuple[int, ...]

_ZERO = Fraction(0)


# =============================================================================
# Monomial bookkeeping
# =============================================================================


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All exponent vectors of total degree d in n variables, in the global order."""
    out: list[MultiIndex] = []
    for combo in combinations_with_replacement(range(n), d):
        exps = [0] * n
        for var in combo:
            exps[var] += 1
        out.append(tuple(exps))
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_between(n: int, lo: int, hi: int) -> tuple[MultiIndex, ...]:
    """Exponent vectors with lo <= degree <= hi, degree ascending."""
    return tuple(idx for d in range(lo, hi + 1) for idx in monomials_of_degree(n, d))


def monomials_up_to(n: int, d: int) -> tuple[MultiIndex, ...]:
    return monomials_between(n, 0, d)


def unit_index(n: int, var: int) -> MultiIndex:
    """Exponent vector of the single variable x^var."""
    return tuple(1 if i == var else 0 for i in range(n))


def jet_dimension_count(n: int, d: int) -> int:
    """Dimension of homogeneous polynomials of degree d in n variables: C(n+d-1, n-1)."""
    return binomial(n + d - 1, n - 1)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValidationError(f"number of variables must be >= 1, got {n}")


# =============================================================================
# Truncated polynomials
# =============================================================================


class TruncatedPolynomial:
    """Polynomial in n variables with rational coefficients, known up to ``degree_bound``.

    Zero coefficients are never stored; an absent index means zero.
    """

    __slots__ = ("n", "degree_bound", "_coeffs")

    def __init__(
        self,
        n: int,
        degree_bound: int,
        coeffs: Mapping[MultiIndex, int | Fraction] | None = None,
    ) -> None:
        _check_n(n)
        if degree_bound < 0:
            raise JetOrderError(f"degree bound must be >= 0, got {degree_bound}")
        stored: dict[MultiIndex, Fraction] = {}
        for idx, c in (coeffs or {}).items():
            if len(idx) != n:
                raise DimensionMismatchError(f"multi-index {idx} has length {len(idx)}, expected {n}")
            if sum(idx) > degree_bound:
                raise JetOrderError(f"monomial {idx} exceeds degree bound {degree_bound}")
            if c:
                stored[tuple(idx)] = as_rational(c)
        self.n = n
        self.degree_bound = degree_bound
        self._coeffs = stored

    # -- construction -------------------------------------------------------

    @classmethod
    def truncated(
        cls, n: int, degree_bound: int, coeffs: Mapping[MultiIndex, int | Fraction]
    ) -> TruncatedPolynomial:
        """Build from coefficients, silently discarding terms above the bound."""
        return cls(n, degree_bound, {i: c for i, c in coeffs.items() if sum(i) <= degree_bound})

    @classmethod
    def zero(cls, n: int, degree_bound: int) -> TruncatedPolynomial:
        return cls(n, degree_bound)

    @classmethod
    def constant(cls, n: int, value: int | Fraction, degree_bound: int = 0) -> TruncatedPolynomial:
        return cls(n, degree_bound, {(0,) * n: value})

    @classmethod
    def variable(cls, n: int, var: int, degree_bound: int = 1) -> TruncatedPolynomial:
        """The coordinate function x^var (0-based)."""
        return cls(n, degree_bound, {unit_index(n, var): 1})

    # -- access ------------------------------------------------------------

    def coeff(self, idx: MultiIndex) -> Fraction:
        return self._coeffs.get(idx, _ZERO)

    def items(self) -> Iterator[tuple[MultiIndex, Fraction]]:
        return iter(self._coeffs.items())

    def as_dict(self) -> dict[MultiIndex, Fraction]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def lowest_degree(self) -> int | None:
        """Smallest degree with a nonzero coefficient (None for the zero polynomial)."""
        return min((sum(i) for i in self._coeffs), default=None)

    def degree(self) -> int | None:
        return max((sum(i) for i in self._coeffs), default=None)

    # -- arithmetic ---------------------------------------------------------

    def _check_same_n(self, other: TruncatedPolynomial) -> None:
        if other.n != self.n:
            raise DimensionMismatchError(
                f"polynomials in {self.n} and {other.n} variables cannot be combined"
            )

    def __add__(self, other: TruncatedPolynomial) -> TruncatedPolynomial:
        self._check_same_n(other)
        bound = min(self.degree_bound, other.degree_bound)
        out = {i: c for i, c in self._coeffs.items() if sum(i) <= bound}
        for i, c in other._coeffs.items():
            if sum(i) <= bound:
                out[i] = out.get(i, _ZERO) + c
        return TruncatedPolynomial(self.n, bound, out)

    def __neg__(self) -> TruncatedPolynomial:
        return TruncatedPolynomial(self.n, self.degree_bound, {i: -c for i, c in self._coeffs.items()})

    def __sub__(self, other: TruncatedPolynomial) -> TruncatedPolynomial:
        return self + (-other)

    def scaled(self, c: int | Fraction) -> TruncatedPolynomial:
        return TruncatedPolynomial(
            self.n, self.degree_bound, {i: c * v for i, v in self._coeffs.items()}
        )

    def truncate(self, bound: int) -> TruncatedPolynomial:
        """Discard all terms of degree > bound."""
        return TruncatedPolynomial.truncated(self.n, bound, self._coeffs)

    def homogeneous_part(self, d: int) -> TruncatedPolynomial:
        """The degree-d component, keeping the degree bound."""
        return TruncatedPolynomial(
            self.n, self.degree_bound, {i: c for i, c in self._coeffs.items() if sum(i) == d}
        )

    def derivative(self, var: int) -> TruncatedPolynomial:
        """Partial derivative with respect to x^var (0-based); known one degree less."""
        out: dict[MultiIndex, Fraction] = {}
        for idx, c in self._coeffs.items():
            e = idx[var]
            if e:
                lowered = idx[:var] + (e - 1,) + idx[var + 1 :]
                out[lowered] = c * e
        return TruncatedPolynomial(self.n, max(self.degree_bound - 1, 0), out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return (
            self.n == other.n
            and self.degree_bound == other.degree_bound
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self.n, self.degree_bound, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"TruncatedPolynomial(n={self.n}, bound={self.degree_bound}, 0)"
        terms = " + ".join(
            f"{c}*x^{idx}" for idx, c in sorted(self._coeffs.items(), key=lambda t: _order_key(t[0]))
        )
        return f"TruncatedPolynomial(n={self.n}, bound={self.degree_bound}, {terms})"


def _order_key(idx: MultiIndex) -> tuple[int, tuple[int, ...]]:
    return (sum(idx), tuple(-e for e in idx))


def truncate_product(
    p: TruncatedPolynomial, q: TruncatedPolynomial, bound: int
) -> TruncatedPolynomial:
    """Product p*q with all terms of degree > bound discarded.

    Raises:
        DimensionMismatchError: If p and q have different numbers of variables
    """
    if p.n != q.n:
        raise DimensionMismatchError(f"polynomials in {p.n} and {q.n} variables cannot be multiplied")
    out: dict[MultiIndex, Fraction] = {}
    if p.is_zero() or q.is_zero():
        return TruncatedPolynomial(p.n, bound)
    q_terms = [(idx, sum(idx), c) for idx, c in q.items()]
    for a, ca in p.items():
        da = sum(a)
        if da > bound:
            continue
        for b, db, cb in q_terms:
            if da + db > bound:
                continue
            idx = tuple(x + y for x, y in zip(a, b, strict=True))
            out[idx] = out.get(idx, _ZERO) + ca * cb
    return TruncatedPolynomial(p.n, bound, out)


# =============================================================================
# Jets of connections and (1,2)-tensors
# =============================================================================

J = TypeVar("J", bound="ComponentJet")


@dataclass(frozen=True)
class ComponentJet:
    """n^3 truncated polynomials indexed (l, i, j), all of degree bound ``order``."""

    n: int
    order: int
    components: tuple[TruncatedPolynomial, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        if len(self.components) != self.n**3:
            raise DimensionMismatchError(
                f"expected {self.n ** 3} components, got {len(self.components)}"
            )
        for comp in self.components:
            if comp.n != self.n:
                raise DimensionMismatchError("component lives in the wrong number of variables")
            if comp.degree_bound != self.order:
                raise JetOrderError(
                    f"component degree bound {comp.degree_bound} differs from jet order {self.order}"
                )

    @classmethod
    def zero(cls: type[J], n: int, order: int) -> J:
        _check_n(n)
        return cls(n, order, tuple(TruncatedPolynomial(n, order) for _ in range(n**3)))

    @classmethod
    def from_function(
        cls: type[J],
        n: int,
        order: int,
        build: Callable[[int, int, int], Mapping[MultiIndex, int | Fraction]],
    ) -> J:
        """Build from ``build(l, i, j) -> {multi-index: coefficient}``."""
        _check_n(n)
        comps = tuple(
            TruncatedPolynomial(n, order, build(l, i, j))
            for l in range(n)
            for i in range(n)
            for j in range(n)
        )
        return cls(n, order, comps)

    @classmethod
    def from_constants(cls: type[J], gamma: Sequence[Sequence[Sequence[int | Fraction]]]) -> J:
        """A 0-jet from a nested array ``gamma[l][i][j]``."""
        n = len(gamma)
        zero = (0,) * n
        return cls.from_function(n, 0, lambda l, i, j: {zero: gamma[l][i][j]})

    def component(self, l: int, i: int, j: int) -> TruncatedPolynomial:
        n = self.n
        return self.components[l * n * n + i * n + j]

    def value(self, l: int, i: int, j: int, idx: MultiIndex | None = None) -> Fraction:
        """Coefficient of x^idx (constant term by default) in the (l, i, j) component."""
        return self.component(l, i, j).coeff(idx if idx is not None else (0,) * self.n)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def with_order(self: J, order: int) -> J:
        """Re-bound every component (dropping terms above ``order``)."""
        return type(self)(self.n, order, tuple(c.truncate(order) for c in self.components))

    def homogeneous_part(self: J, d: int) -> J:
        """The degree-d part, as a jet of order d."""
        return type(self)(
            self.n,
            d,
            tuple(c.homogeneous_part(d).truncate(d) for c in self.components),
        )

    def _combine(self: J, other: ComponentJet, op: Callable[[TruncatedPolynomial, TruncatedPolynomial], TruncatedPolynomial]) -> J:
        if other.n != self.n:
            raise DimensionMismatchError(f"jets in {self.n} and {other.n} variables")
        if other.order != self.order:
            raise JetOrderError(f"jets of order {self.order} and {other.order}")
        return type(self)(
            self.n,
            self.order,
            tuple(op(a, b) for a, b in zip(self.components, other.components, strict=True)),
        )

    def __add__(self: J, other: ComponentJet) -> J:
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self: J, other: ComponentJet) -> J:
        return self._combine(other, lambda a, b: a - b)

    def scaled(self: J, c: int | Fraction) -> J:
        return type(self)(self.n, self.order, tuple(p.scaled(c) for p in self.components))

    def slot_count(self) -> int:
        return len(jet_row_basis(self.n, self.order))


class ConnectionJet(ComponentJet):
    """k-jet of the Christoffel symbols Gamma^l_ij of a general connection."""


class TensorJet(ComponentJet):
    """k-jet of a (1,2)-tensor T^l_ij, e.g. a Lie derivative of a connection."""


def project_jet(g: J, order: int) -> J:
    """Projection from k-jets onto lower-order jets.

    Raises:
        JetOrderError: If ``order`` exceeds the order of g
    """
    if order > g.order:
        raise JetOrderError(f"cannot project a jet of order {g.order} onto order {order}")
    if order < 0:
        raise JetOrderError(f"jet order must be >= 0, got {order}")
    return g.with_order(order)


@lru_cache(maxsize=None)
def jet_row_basis(n: int, k: int) -> tuple[tuple[int, int, int, MultiIndex], ...]:
    """Coordinates (l, i, j, multi-index of degree <= k) of a jet space, in canonical order."""
    monos = monomials_up_to(n, k)
    return tuple((l, i, j, idx) for l in range(n) for i in range(n) for j in range(n) for idx in monos)


def jet_coords(g: ComponentJet) -> tuple[Fraction, ...]:
    """Coordinates of a jet in the canonical basis."""
    return tuple(g.component(l, i, j).coeff(idx) for l, i, j, idx in jet_row_basis(g.n, g.order))


def _from_coords(cls: type[J], n: int, k: int, coords: Sequence[int | Fraction]) -> J:
    basis = jet_row_basis(n, k)
    if len(coords) != len(basis):
        raise DimensionMismatchError(f"expected {len(basis)} coordinates, got {len(coords)}")
    per_comp: list[dict[MultiIndex, int | Fraction]] = [{} for _ in range(n**3)]
    for (l, i, j, idx), c in zip(basis, coords, strict=True):
        if c:
            per_comp[l * n * n + i * n + j][idx] = c
    return cls(n, k, tuple(TruncatedPolynomial(n, k, d) for d in per_comp))


def connection_from_coords(n: int, k: int, coords: Sequence[int | Fraction]) -> ConnectionJet:
    return _from_coords(ConnectionJet, n, k, coords)


def tensor_from_coords(n: int, k: int, coords: Sequence[int | Fraction]) -> TensorJet:
    return _from_coords(TensorJet, n, k, coords)


def random_connection_jet(n: int, k: int, seed: int, coeff_range: int = 10) -> ConnectionJet:
    """A connection k-jet with integer coefficients uniform in [-coeff_range, coeff_range].

    Deterministic in ``seed``: coefficients are drawn in canonical coordinate order.
    """
    _check_n(n)
    if coeff_range < 1:
        raise ValidationError(f"coeff_range must be >= 1, got {coeff_range}")
    rng = random.Random(seed)
    coords = [rng.randint(-coeff_range, coeff_range) for _ in jet_row_basis(n, k)]
    return connection_from_coords(n, k, coords)


# =============================================================================
# Vector fields vanishing at the origin
# =============================================================================


@dataclass(frozen=True)
class VectorFieldJet:
    """n truncated polynomials V^1..V^n with zero constant term, degrees 1..max_degree."""

    n: int
    max_degree: int
    components: tuple[TruncatedPolynomial, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        if len(self.components) != self.n:
            raise DimensionMismatchError(f"expected {self.n} components, got {len(self.components)}")
        origin = (0,) * self.n
        for comp in self.components:
            if comp.n != self.n:
                raise DimensionMismatchError("component lives in the wrong number of variables")
            if comp.degree_bound != self.max_degree:
                raise JetOrderError(
                    f"component degree bound {comp.degree_bound} differs from {self.max_degree}"
                )
            if comp.coeff(origin):
                raise JetOrderError("vector field must vanish at the origin (nonzero constant term)")

    @classmethod
    def from_components(
        cls, n: int, max_degree: int, comps: Sequence[Mapping[MultiIndex, int | Fraction]]
    ) -> VectorFieldJet:
        return cls(n, max_degree, tuple(TruncatedPolynomial(n, max_degree, c) for c in comps))

    @classmethod
    def zero(cls, n: int, max_degree: int) -> VectorFieldJet:
        return cls(n, max_degree, tuple(TruncatedPolynomial(n, max_degree) for _ in range(n)))

    @classmethod
    def linear(cls, b: Sequence[Sequence[int | Fraction]], max_degree: int = 1) -> VectorFieldJet:
        """The linear field V^k = sum_s b[k][s] x^s."""
        n = len(b)
        return cls.from_components(
            n, max_degree, [{unit_index(n, s): b[k][s] for s in range(n)} for k in range(n)]
        )

    @classmethod
    def basis_field(cls, n: int, max_degree: int, component: int, idx: MultiIndex) -> VectorFieldJet:
        """The field x^idx d/dx^component."""
        return cls.from_components(
            n, max_degree, [{idx: 1} if c == component else {} for c in range(n)]
        )

    def component(self, c: int) -> TruncatedPolynomial:
        return self.components[c]

    def lowest_degree(self) -> int | None:
        return min(
            (d for d in (c.lowest_degree() for c in self.components) if d is not None),
            default=None,
        )

    def __add__(self, other: VectorFieldJet) -> VectorFieldJet:
        if other.n != self.n:
            raise DimensionMismatchError(f"vector fields in {self.n} and {other.n} variables")
        comps = tuple(a + b for a, b in zip(self.components, other.components, strict=True))
        return VectorFieldJet(self.n, min(self.max_degree, other.max_degree), comps)

    def scaled(self, c: int | Fraction) -> VectorFieldJet:
        return VectorFieldJet(self.n, self.max_degree, tuple(p.scaled(c) for p in self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


@lru_cache(maxsize=None)
def vector_field_basis(n: int, max_degree: int) -> tuple[tuple[int, MultiIndex], ...]:
    """Coordinates (component, multi-index of degree 1..max_degree), in canonical order."""
    monos = monomials_between(n, 1, max_degree)
    return tuple((c, idx) for c in range(n) for idx in monos)


def vector_field_coords(v: VectorFieldJet) -> tuple[Fraction, ...]:
    return tuple(v.component(c).coeff(idx) for c, idx in vector_field_basis(v.n, v.max_degree))


def vector_field_from_coords(
    n: int, max_degree: int, coords: Sequence[int | Fraction]
) -> VectorFieldJet:
    basis = vector_field_basis(n, max_degree)
    if len(coords) != len(basis):
        raise DimensionMismatchError(f"expected {len(basis)} coordinates, got {len(coords)}")
    comps: list[dict[MultiIndex, int | Fraction]] = [{} for _ in range(n)]
    for (c, idx), value in zip(basis, coords, strict=True):
        if value:
            comps[c][idx] = value
    return VectorFieldJet.from_components(n, max_degree, comps)


def random_vector_field(
    n: int, max_degree: int, seed: int, coeff_range: int = 10, min_degree: int = 1
) -> VectorFieldJet:
    """Random integer vector-field jet supported in degrees min_degree..max_degree."""
    rng = random.Random(seed)
    coords = [
        rng.randint(-coeff_range, coeff_range) if sum(idx) >= min_degree else 0
        for _, idx in vector_field_basis(n, max_degree)
    ]
    return vector_field_from_coords(n, max_degree, coords)


# =============================================================================
# JSON
# =============================================================================


def _index_key(idx: MultiIndex) -> str:
    return ",".join(str(e) for e in idx)


def _fraction_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def jet_to_json(g: ComponentJet) -> dict[str, Any]:
    """Serialize a jet; only nonzero components and coefficients are written.

    Component keys are 1-based "l,i,j"; coefficients are "p/q" strings.
    """
    n = g.n
    components: dict[str, dict[str, str]] = {}
    for l in range(n):
        for i in range(n):
            for j in range(n):
                comp = g.component(l, i, j)
                if comp.is_zero():
                    continue
                components[f"{l + 1},{i + 1},{j + 1}"] = {
                    _index_key(idx): _fraction_str(c)
                    for idx, c in sorted(comp.items(), key=lambda t: _order_key(t[0]))
                }
    kind = "tensor" if isinstance(g, TensorJet) else "connection"
    return {"kind": kind, "n": n, "order": g.order, "components": components}


def jet_from_json(data: Mapping[str, Any]) -> ConnectionJet | TensorJet:
    """Inverse of :func:`jet_to_json`."""
    n = int(data["n"])
    order = int(data["order"])
    per_comp: dict[tuple[int, int, int], dict[MultiIndex, Fraction]] = {}
    for key, coeffs in data.get("components", {}).items():
        l, i, j = (int(x) - 1 for x in key.split(","))
        per_comp[(l, i, j)] = {
            tuple(int(e) for e in mkey.split(",")): Fraction(value) for mkey, value in coeffs.items()
        }
    cls: type[ConnectionJet] | type[TensorJet] = (
        TensorJet if data.get("kind") == "tensor" else ConnectionJet
    )
    return cls.from_function(n, order, lambda l, i, j: per_comp.get((l, i, j), {}))
