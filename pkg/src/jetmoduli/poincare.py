"""Moduli dimensions and the Poincare series of connection jets.

The series p(t) = sum a_k t^k records how the dimension of the moduli space
of connection k-jets grows with k: a_0 = dim M_0, a_k = dim M_k - dim M_{k-1}.
Three independent routes compute the coefficients:

* differences of dim M_k = dim F_k - dim O_k,
* the closed bracket form n [n^2 C(n+k-1,n-1) - C(n+k+1,n-1)] corrected by
  -2 delta(n,2) at k = 1,
* the theta-operator form applied to 1/(1-t),

and the rational function

    p(t) = delta(n,1) + 2 delta(n,2)(1-t) - n^2
           + n ( (n^2-1)/(1-t)^n - 2/(1-t)^(n-1) - ... - n/(1-t) )

whose only poles are at t = 1.

All of the above uses the stated orbit formula. At n=3, k=0 exact rank finds
a one-dimensional generic stabilizer, so the true a_0 and a_1 for n=3 are
1 and 50 rather than 0 and 51. :func:`generic_dim_M` and
:func:`generic_series` give the rank-confirmed values.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import sympy

from jetmoduli.exact_core import as_rational, binomial
from jetmoduli.stabilizer import generic_orbit_dim, orbit_dim_formula
from jetmoduli.utils.errors import InconsistencyError, ValidationError
from jetmoduli.utils.validation import validate_dimension, validate_order

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


# =============================================================================
# Series and rational functions
# =============================================================================


@dataclass(frozen=True)
class SeriesQ:
    """Truncated power series a_0 + a_1 t + ... + a_K t^K with rational coefficients."""

    coefficients: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[int | Fraction]) -> SeriesQ:
        return cls(tuple(as_rational(v) for v in values))

    @classmethod
    def geometric(cls, K: int) -> SeriesQ:
        """1/(1-t) through t^K."""
        return cls((_ONE,) * (K + 1))

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coefficients)

    def _check_len(self, other: SeriesQ) -> None:
        if len(other) != len(self):
            raise ValidationError(
                f"series truncated at {self.truncation} and {other.truncation} cannot be combined"
            )

    def __add__(self, other: SeriesQ) -> SeriesQ:
        self._check_len(other)
        return SeriesQ(tuple(a + b for a, b in zip(self, other, strict=True)))

    def __sub__(self, other: SeriesQ) -> SeriesQ:
        self._check_len(other)
        return SeriesQ(tuple(a - b for a, b in zip(self, other, strict=True)))

    def scaled(self, c: int | Fraction) -> SeriesQ:
        return SeriesQ(tuple(c * a for a in self))

    def partial_sums(self) -> SeriesQ:
        total = _ZERO
        out: list[Fraction] = []
        for a in self:
            total += a
            out.append(total)
        return SeriesQ(tuple(out))

    def as_ints(self) -> list[int]:
        """Coefficients as Python ints.

        Raises:
            InconsistencyError: If any coefficient is not integral
        """
        out: list[int] = []
        for k, a in enumerate(self):
            if a.denominator != 1:
                raise InconsistencyError(f"coefficient {k} = {a} is not an integer")
            out.append(a.numerator)
        return out


@dataclass(frozen=True)
class RationalFunctionT:
    """poly(t) + sum_{j=1}^{n} pole_part[j-1] / (1-t)^j.

    ``polynomial_part`` lists coefficients by ascending power of t.
    """

    n: int
    polynomial_part: tuple[Fraction, ...]
    pole_part: tuple[Fraction, ...]

    def pole(self, j: int) -> Fraction:
        """Coefficient of 1/(1-t)^j (1-based)."""
        return self.pole_part[j - 1]

    def is_zero(self) -> bool:
        return not any(self.polynomial_part) and not any(self.pole_part)

    def coefficient(self, k: int) -> Fraction:
        """Coefficient of t^k in the expansion at t = 0."""
        value = self.polynomial_part[k] if k < len(self.polynomial_part) else _ZERO
        for j, c in enumerate(self.pole_part, start=1):
            if c:
                value += c * binomial(j + k - 1, j - 1)
        return value

    def evaluate(self, t: int | Fraction) -> Fraction:
        """Exact value at a rational point t != 1."""
        t = as_rational(t)
        if t == 1:
            raise ValidationError("the function has its poles at t = 1")
        value = sum((c * t**p for p, c in enumerate(self.polynomial_part)), _ZERO)
        inv = _ONE / (1 - t)
        for j, c in enumerate(self.pole_part, start=1):
            value += c * inv**j
        return value

    def as_fraction(self) -> tuple[tuple[Fraction, ...], int]:
        """Single-fraction form numerator(t) / (1-t)^d.

        Returns the numerator coefficients (ascending powers, trailing zeros
        removed) and d, with common factors of (1-t) cancelled.
        """
        d = len(self.pole_part)
        numerator = _poly_mul(list(self.polynomial_part), _one_minus_t_power(d))
        for j, c in enumerate(self.pole_part, start=1):
            if c:
                numerator = _poly_add(numerator, [c * x for x in _one_minus_t_power(d - j)])
        numerator = _trim(numerator)
        if not numerator:
            return (), 0
        while d > 0 and sum(numerator) == 0:
            numerator = _divide_by_one_minus_t(numerator)
            d -= 1
        return tuple(numerator), d

    def to_sympy(self, symbol: str = "t") -> Any:
        """The function as a sympy expression over the common denominator."""
        t = sympy.Symbol(symbol)
        numerator, d = self.as_fraction()
        num = sum(
            (sympy.Rational(c.numerator, c.denominator) * t**p for p, c in enumerate(numerator)),
            sympy.Integer(0),
        )
        return num / (1 - t) ** d


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_add(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return out


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    if not p or not q:
        return []
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _one_minus_t_power(d: int) -> list[Fraction]:
    return [Fraction((-1) ** i * binomial(d, i)) for i in range(d + 1)]


def _divide_by_one_minus_t(p: list[Fraction]) -> list[Fraction]:
    # p(t) = (1-t) q(t)  =>  q_i = sum_{m<=i} p_m
    quotient: list[Fraction] = []
    total = _ZERO
    for c in p[:-1]:
        total += c
        quotient.append(total)
    return _trim(quotient)


# =============================================================================
# Theta operators
# =============================================================================


@dataclass(frozen=True)
class ThetaOperator:
    """prefactor * (theta + c_1)(theta + c_2)...(theta + c_m) with theta = t d/dt."""

    shifts: tuple[Fraction, ...] = ()
    prefactor: Fraction = _ONE

    @classmethod
    def identity(cls) -> ThetaOperator:
        return cls()

    @classmethod
    def theta(cls) -> ThetaOperator:
        return cls((_ZERO,))

    @classmethod
    def choose(cls, N: int, top_shift: int) -> ThetaOperator:
        """C(theta + top_shift, N - 1) as a product of N-1 linear factors."""
        shifts = tuple(Fraction(top_shift - i) for i in range(N - 1))
        return cls(shifts, Fraction(1, math.factorial(N - 1)))

    def multiplier(self, k: int) -> Fraction:
        """prefactor * prod(k + c_i): the action on t^k."""
        value = self.prefactor
        for c in self.shifts:
            value *= k + c
        return value

    def scaled(self, c: int | Fraction) -> ThetaOperator:
        return ThetaOperator(self.shifts, self.prefactor * c)

    def __mul__(self, other: ThetaOperator) -> ThetaOperator:
        return ThetaOperator(self.shifts + other.shifts, self.prefactor * other.prefactor)


def apply_theta(op: ThetaOperator, s: SeriesQ) -> SeriesQ:
    """Apply a theta operator coefficientwise: a_k -> prefactor * prod(k + c_i) * a_k."""
    return SeriesQ(tuple(op.multiplier(k) * a for k, a in enumerate(s)))


def apply_theta_sum(ops: Sequence[ThetaOperator], s: SeriesQ) -> SeriesQ:
    """Apply a sum of theta operators."""
    out = SeriesQ((_ZERO,) * len(s))
    for op in ops:
        out = out + apply_theta(op, s)
    return out


def d_gamma_operator(n: int) -> tuple[ThetaOperator, ThetaOperator]:
    """The order n-1 operator n^2 C(n+theta-1, n-1) - C(n+theta+1, n-1)."""
    return (
        ThetaOperator.choose(n, n - 1).scaled(n * n),
        ThetaOperator.choose(n, n + 1).scaled(-1),
    )


def phi(m: int, K: int) -> SeriesQ:
    """theta^m applied to 1/(1-t), via the recursion phi_m = theta phi_{m-1}."""
    s = SeriesQ.geometric(K)
    for _ in range(m):
        s = apply_theta(ThetaOperator.theta(), s)
    return s


# =============================================================================
# Dimensions
# =============================================================================


def dim_F(n: int, k: int) -> int:
    """Dimension of the space of connection k-jets: n^3 C(n+k, n)."""
    validate_dimension(n)
    validate_order(k)
    return n**3 * binomial(n + k, n)


def dim_M(n: int, k: int) -> int:
    """Dimension of the generic moduli space of connection k-jets, from the orbit formula."""
    value = dim_F(n, k) - orbit_dim_formula(n, k)
    if value < 0:
        raise InconsistencyError(f"negative moduli dimension {value} for n={n}, k={k}")
    return value


def generic_dim_M(n: int, k: int) -> int:
    """Moduli dimension from the rank-confirmed generic orbit."""
    return dim_F(n, k) - generic_orbit_dim(n, k)


def dim_M0_formula(n: int) -> int:
    """n^2(n-3)/2 + delta(n,1) + 2 delta(n,2)."""
    return n * n * (n - 3) // 2 + _delta(n, 1) + 2 * _delta(n, 2)


def bracket_coeff(n: int, k: int) -> int:
    """Closed bracket form of a_k for k >= 1, with the -2 delta(n,2) correction at k = 1."""
    if k < 1:
        raise ValidationError("the bracket form holds for k >= 1")
    return n * (n * n * binomial(n + k - 1, n - 1) - binomial(n + k + 1, n - 1)) - 2 * _delta(
        n, 2
    ) * _delta(k, 1)


def a_coeff(n: int, k: int) -> int:
    """Poincare coefficient a_k, cross-checked between the difference and closed forms.

    Raises:
        InconsistencyError: If the two forms disagree
    """
    validate_dimension(n)
    validate_order(k)
    if k == 0:
        difference = dim_M(n, 0)
        closed = dim_M0_formula(n)
    else:
        difference = dim_M(n, k) - dim_M(n, k - 1)
        closed = bracket_coeff(n, k)
    if difference != closed:
        raise InconsistencyError(
            f"a_{k} for n={n}: difference form {difference} != closed form {closed}"
        )
    return difference


def series_from_dims(n: int, K: int) -> SeriesQ:
    """a_0..a_K from differences of moduli dimensions."""
    dims = [dim_M(n, k) for k in range(K + 1)]
    return SeriesQ.of([dims[0]] + [dims[k] - dims[k - 1] for k in range(1, K + 1)])


def generic_series(n: int, K: int) -> SeriesQ:
    """a_0..a_K from differences of the rank-confirmed moduli dimensions."""
    validate_dimension(n)
    dims = [generic_dim_M(n, k) for k in range(K + 1)]
    return SeriesQ.of([dims[0]] + [dims[k] - dims[k - 1] for k in range(1, K + 1)])


def bracket_series(n: int, K: int) -> SeriesQ:
    """a_0..a_K from the closed forms (dim M_0 and the corrected bracket)."""
    return SeriesQ.of([dim_M0_formula(n)] + [bracket_coeff(n, k) for k in range(1, K + 1)])


def operator_series(n: int, K: int) -> SeriesQ:
    """a_0..a_K from the theta-operator route applied to 1/(1-t).

    The operator also produces a 0th term; the polynomial
    delta(n,1) + 2 delta(n,2)(1-t) - n^2 accounts for it.
    """
    validate_dimension(n)
    base = apply_theta_sum(d_gamma_operator(n), SeriesQ.geometric(K)).scaled(n)
    correction = [Fraction(0)] * (K + 1)
    correction[0] = Fraction(_delta(n, 1) + 2 * _delta(n, 2) - n * n)
    if K >= 1:
        correction[1] = Fraction(-2 * _delta(n, 2))
    return base + SeriesQ(tuple(correction))


def closed_form(n: int) -> RationalFunctionT:
    """The Poincare series as a rational function with poles only at t = 1."""
    validate_dimension(n)
    poly = (
        Fraction(_delta(n, 1) + 2 * _delta(n, 2) - n * n),
        Fraction(-2 * _delta(n, 2)),
    )
    poles = [Fraction(-n * (n - j + 1)) for j in range(1, n)]
    poles.append(Fraction(n * (n * n - 1)))
    return RationalFunctionT(n, poly, tuple(poles))


def expand_rational(f: RationalFunctionT, K: int) -> SeriesQ:
    """Coefficients 0..K of the expansion at t = 0; 1/(1-t)^N contributes C(N+k-1, N-1)."""
    return SeriesQ(tuple(f.coefficient(k) for k in range(K + 1)))


def pole_series(N: int, K: int) -> SeriesQ:
    """Expansion of 1/(1-t)^N through t^K."""
    return SeriesQ.of([binomial(N + k - 1, N - 1) for k in range(K + 1)])


def poincare_series(n: int, terms: int) -> SeriesQ:
    """The first ``terms`` coefficients, after all three routes agree.

    Raises:
        InconsistencyError: If the routes disagree or a value is not integral
    """
    K = terms - 1
    from_dims = series_from_dims(n, K)
    routes = {
        "bracket": bracket_series(n, K),
        "closed_form": expand_rational(closed_form(n), K),
        "operator": operator_series(n, K),
    }
    for name, other in routes.items():
        if other != from_dims:
            raise InconsistencyError(f"n={n}: {name} series disagrees with moduli differences")
    from_dims.as_ints()
    return from_dims


# =============================================================================
# Identities and polynomiality
# =============================================================================


def operator_lemma_check(N: int, K: int) -> bool:
    """Check both binomial theta-operator identities on 1/(1-t) through t^K.

    C(N+theta-1, N-1) 1/(1-t) = 1/(1-t)^N and
    C(N+theta+1, N-1) 1/(1-t) = sum_{k=1}^{N} k/(1-t)^(N-k+1).
    """
    if N < 2:
        raise ValidationError(f"N must be >= 2, got {N}")
    geo = SeriesQ.geometric(K)
    first = apply_theta(ThetaOperator.choose(N, N - 1), geo) == pole_series(N, K)
    rhs = SeriesQ((_ZERO,) * (K + 1))
    for k in range(1, N + 1):
        rhs = rhs + pole_series(N - k + 1, K).scaled(k)
    second = apply_theta(ThetaOperator.choose(N, N + 1), geo) == rhs
    if not (first and second):
        logger.warning("operator identities fail for N=%d (first=%s, second=%s)", N, first, second)
    return first and second


def phi_recursion_check(m_max: int, K: int) -> bool:
    """phi_m has coefficients k^m and equals theta phi_{m-1} for m = 1..m_max."""
    previous = phi(0, K)
    if previous != SeriesQ.geometric(K):
        return False
    for m in range(1, m_max + 1):
        current = apply_theta(ThetaOperator.theta(), previous)
        if current != SeriesQ.of([k**m for k in range(K + 1)]) or current != phi(m, K):
            return False
        previous = current
    return True


def finite_difference(seq: Sequence[int | Fraction], order: int) -> list[Fraction]:
    """The order-th forward difference of a sequence."""
    values = [as_rational(v) for v in seq]
    for _ in range(order):
        values = [b - a for a, b in zip(values, values[1:], strict=False)]
    return values


def fit_polynomial_in_k(n: int) -> tuple[Fraction, ...]:
    """Polynomial of degree n-1 in k matching a_k for k >= 2.

    The n-th differences of a_2..a_{3n} must vanish; the interpolant is
    computed with sympy, must reproduce a_2..a_{3n}, and
    its leading coefficient must equal n(n^2-1)/(n-1)!.

    Returns:
        Coefficients in ascending powers of k

    Raises:
        InconsistencyError: If polynomiality or the leading coefficient fails
    """
    validate_dimension(n, minimum=2)
    data = [a_coeff(n, k) for k in range(2, 3 * n + 1)]
    if any(finite_difference(data, n)):
        raise InconsistencyError(f"a_k is not polynomial of degree < {n} for n={n}")
    k = sympy.Symbol("k")
    points = [(2 + i, data[i]) for i in range(n)]
    poly = sympy.Poly(sympy.interpolate(points, k), k)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    coeffs += [_ZERO] * (n - len(coeffs))
    misses = [2 + i for i, a in enumerate(data) if evaluate_polynomial(coeffs, 2 + i) != a]
    if misses:
        raise InconsistencyError(f"interpolant misses a_k at k={misses} for n={n}")
    leading = Fraction(n * (n * n - 1), math.factorial(n - 1))
    if coeffs[n - 1] != leading:
        raise InconsistencyError(
            f"leading coefficient {coeffs[n - 1]} for n={n}, expected {leading}"
        )
    return tuple(coeffs)


def evaluate_polynomial(coeffs: Sequence[Fraction], k: int) -> Fraction:
    return sum((c * k**p for p, c in enumerate(coeffs)), _ZERO)


def functional_moduli_estimate(n: int) -> int:
    """Order-n pole coefficient of the closed form, n(n^2-1).

    A structure described by m functional invariants in n variables has the
    series m/(1-t)^n; this is the corresponding m read off the leading pole.
    """
    validate_dimension(n, minimum=2)
    value = closed_form(n).pole(n)
    if value.denominator != 1:
        raise InconsistencyError(f"non-integral pole coefficient {value}")
    return value.numerator


def functional_moduli_series(m: int, n: int, K: int) -> SeriesQ:
    """Series m/(1-t)^n of m functional invariants in n variables; partial sums m C(n+k, n)."""
    validate_dimension(n)
    return pole_series(n, K).scaled(m)
