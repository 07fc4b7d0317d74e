"""Stabilizer and orbit dimensions of generic connection jets.

Empirical dimensions come from exact ranks of the action matrix at random
integer jets; formula dimensions are closed expressions in n and k. A
dimension counts as generic only after a whole seed family agrees on it and
a witness jet, where one is known, reproduces it.

The stated stabilizer formula is wrong in one case. At n=3, k=0 a generic jet
has a one-dimensional stabilizer: in three variables the torsion at the
origin is a twisted bilinear form, and a rotation fixes it. For the
``gamma`` witness the linear field x^2 d/dx^1 + x^2 d/dx^3 stabilizes it.
:data:`RANK_CONFIRMED_STABILIZERS` records the value exact rank gives there.
Everything labelled ``generic_*`` follows exact rank. ``expected_*`` and
``*_formula`` keep the stated values so that reports can show the disagreement.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

from pydantic import BaseModel, Field

from jetmoduli.exact_core import QMatrix, binomial, nullity, vstack
from jetmoduli.jets import ConnectionJet, random_connection_jet
from jetmoduli.lie_action import action_matrix, action_matrix_shape
from jetmoduli.normal_coords import (
    is_normal_jet,
    linear_stabilizer_block,
    stabilizer_system_0jet,
    stabilizer_system_1jet,
    witness_gamma,
    witness_n2_first_order,
)
from jetmoduli.utils.config import get_settings
from jetmoduli.utils.errors import NotNormalError
from jetmoduli.utils.validation import validate_dimension, validate_order

logger = logging.getLogger(__name__)

STABILIZER_REF = "stabilizer of a generic k-jet: dim = delta(n,1) + 2*delta(n,2)*delta(k,0)"
GENERIC_STABILIZER_REF = (
    "stabilizer of a generic k-jet by exact rank; n=3, k=0 gives 1 where the formula gives 0"
)

# Generic stabilizer dimensions where exact rank disagrees with the formula.
RANK_CONFIRMED_STABILIZERS: dict[tuple[int, int], int] = {(3, 0): 1}

# Fewest agreeing seeds before a dimension is certified as generic.
MIN_CERTIFYING_SEEDS = 5


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


# =============================================================================
# Models
# =============================================================================


class StabilizerReport(BaseModel):
    """Empirical against formula dimensions at one random jet."""

    n: int = Field(ge=1)
    k: int = Field(ge=0)
    seed: int
    empirical_stab_dim: int = Field(ge=0)
    expected_stab_dim: int = Field(ge=0)
    empirical_orbit_dim: int = Field(ge=0)
    formula_orbit_dim: int = Field(ge=0)
    agree: bool
    known_discrepancy: bool = Field(
        default=False,
        description="Set when the formula is off and exact rank gives the confirmed value",
    )
    non_generic: bool = Field(
        default=False,
        description="Set when another seed of the same family reached a larger orbit",
    )
    paper_ref: str = STABILIZER_REF


class GenericCertificate(BaseModel):
    """Outcome of certifying a stabilizer dimension as generic."""

    n: int
    k: int
    seeds: list[int]
    stab_dims: list[int]
    stab_dim: int
    seeds_agree: bool
    enough_seeds: bool
    witness_stab_dim: int | None = None
    expected_stab_dim: int
    known_discrepancy: bool
    certified: bool
    paper_ref: str = GENERIC_STABILIZER_REF


# =============================================================================
# Formulas
# =============================================================================


def expected_stabilizer_dim(n: int, k: int) -> int:
    """Stated stabilizer dimension of a generic k-jet: 1 for n=1, 2 for (2, 0), otherwise 0."""
    validate_dimension(n)
    validate_order(k)
    return _delta(n, 1) + 2 * _delta(n, 2) * _delta(k, 0)


def generic_stabilizer_dim(n: int, k: int) -> int:
    """Generic stabilizer dimension as exact rank gives it."""
    expected = expected_stabilizer_dim(n, k)
    return RANK_CONFIRMED_STABILIZERS.get((n, k), expected)


def _group_dim(n: int, k: int) -> int:
    return n * sum(binomial(n + m - 1, n - 1) for m in range(1, k + 3))


def orbit_dim_formula(n: int, k: int) -> int:
    """Dimension of a generic orbit in the space of connection k-jets.

    Args:
        n: Number of variables (>= 1)
        k: Jet order (>= 0)

    Returns:
        n * sum_{m=1}^{k+2} C(n+m-1, n-1) minus the stated stabilizer
        dimension; for k = 0 this is n^2(n+3)/2 - delta(n,1) - 2 delta(n,2)
    """
    validate_dimension(n)
    validate_order(k)
    return _group_dim(n, k) - expected_stabilizer_dim(n, k)


def generic_orbit_dim(n: int, k: int) -> int:
    """Generic orbit dimension as exact rank gives it."""
    validate_dimension(n)
    validate_order(k)
    return _group_dim(n, k) - generic_stabilizer_dim(n, k)


# =============================================================================
# Empirical dimensions
# =============================================================================


def stabilizer_dim_at(g: ConnectionJet) -> int:
    """Kernel dimension of the action matrix at a given jet."""
    return action_matrix(g).stabilizer_dim()


def stabilizer_dim_generic(n: int, k: int, seed: int, coeff_range: int | None = None) -> int:
    """Stabilizer dimension at the random jet ``random_connection_jet(n, k, seed)``."""
    validate_dimension(n)
    validate_order(k)
    r = coeff_range if coeff_range is not None else get_settings().JETMODULI_COEFF_RANGE
    return stabilizer_dim_at(random_connection_jet(n, k, seed, r))


def normal_linear_system(g: ConnectionJet) -> QMatrix:
    """Stacked per-degree stabilizer equations of a normal jet under linear fields.

    Degree 0 and degree 1 use the explicit systems; higher degrees are
    assembled from the Lie derivative of each homogeneous part.
    """
    if not is_normal_jet(g):
        raise NotNormalError(
            f"connection jet (n={g.n}, order={g.order}) is not in normal coordinates"
        )
    blocks = [stabilizer_system_0jet(g).matrix]
    if g.order >= 1:
        blocks.append(stabilizer_system_1jet(g).matrix)
    blocks.extend(linear_stabilizer_block(g, m) for m in range(2, g.order + 1))
    return vstack(blocks, cols=g.n * g.n)


def stabilizer_dim_normal_linear(g: ConnectionJet) -> int:
    """Dimension of the linear fields fixing a normal jet.

    Raises:
        NotNormalError: If ``g`` is not a normal jet
    """
    return nullity(normal_linear_system(g))


def report(n: int, k: int, seed: int, coeff_range: int | None = None) -> StabilizerReport:
    """Empirical and formula dimensions at one random jet.

    ``agree`` compares against the stated formula. Where that formula is
    known to be off, a report reproducing the rank-confirmed value is marked
    ``known_discrepancy`` and logged at INFO instead of WARNING.
    """
    validate_dimension(n)
    validate_order(k)
    r = coeff_range if coeff_range is not None else get_settings().JETMODULI_COEFF_RANGE
    matrix = action_matrix(random_connection_jet(n, k, seed, r))
    _, cols = action_matrix_shape(n, k)
    orbit = matrix.rank()
    stab = cols - orbit
    expected = expected_stabilizer_dim(n, k)
    formula = orbit_dim_formula(n, k)
    agree = stab == expected and orbit == formula
    known = (
        not agree
        and (n, k) in RANK_CONFIRMED_STABILIZERS
        and stab == generic_stabilizer_dim(n, k)
    )
    if known:
        logger.info(
            "n=%d k=%d seed=%d: stabilizer %d, formula %d (known discrepancy)",
            n,
            k,
            seed,
            stab,
            expected,
        )
    elif not agree:
        logger.warning(
            "n=%d k=%d seed=%d: stabilizer %d (expected %d), orbit %d (formula %d)",
            n,
            k,
            seed,
            stab,
            expected,
            orbit,
            formula,
        )
    return StabilizerReport(
        n=n,
        k=k,
        seed=seed,
        empirical_stab_dim=stab,
        expected_stab_dim=expected,
        empirical_orbit_dim=orbit,
        formula_orbit_dim=formula,
        agree=agree,
        known_discrepancy=known,
    )


def reports(
    n: int,
    k: int,
    seeds: Sequence[int],
    coeff_range: int | None = None,
    max_workers: int | None = None,
) -> list[StabilizerReport]:
    """Reports for a seed family, in seed order.

    Seeds run in a thread pool. Reports whose orbit is smaller than the
    largest orbit in the family are marked ``non_generic`` instead of being
    averaged away.
    """
    workers = max_workers if max_workers is not None else get_settings().worker_count
    with ThreadPoolExecutor(max_workers=workers) as pool:
        out = list(pool.map(lambda s: report(n, k, s, coeff_range), seeds))
    if not out:
        return out
    top = max(r.empirical_orbit_dim for r in out)
    if any(r.empirical_orbit_dim != top for r in out):
        logger.warning("n=%d k=%d: seeds disagree on the orbit dimension", n, k)
        out = [
            r.model_copy(update={"non_generic": True}) if r.empirical_orbit_dim < top else r
            for r in out
        ]
    logger.info("n=%d k=%d: %d reports, generic orbit %d", n, k, len(out), top)
    return out


def witness_for(n: int, k: int) -> ConnectionJet | None:
    """A known jet of order k whose stabilizer has the generic dimension, if one exists."""
    if n == 1:
        return ConnectionJet.zero(1, k)
    if k == 0:
        return witness_gamma(n)
    if n == 2 and k == 1:
        return witness_n2_first_order()
    return None


def certify_generic(
    n: int,
    k: int,
    seeds: Sequence[int],
    coeff_range: int | None = None,
    family: Sequence[StabilizerReport] | None = None,
    max_workers: int | None = None,
) -> GenericCertificate:
    """Certify the generic stabilizer dimension from a seed family and a witness.

    The dimension is certified when at least :data:`MIN_CERTIFYING_SEEDS`
    seeds agree, the witness (where one is known) reproduces it, and it
    equals the rank-confirmed generic value. Pass ``family`` to reuse
    reports that were already computed for ``seeds``.
    """
    validate_dimension(n)
    validate_order(k)
    if family is None:
        family = reports(n, k, seeds, coeff_range, max_workers=max_workers)
    dims = [r.empirical_stab_dim for r in family]
    stab = min(dims) if dims else 0
    seeds_agree = len(set(dims)) == 1
    enough = len(dims) >= MIN_CERTIFYING_SEEDS
    witness = witness_for(n, k)
    witness_dim = stabilizer_dim_at(witness) if witness is not None else None
    expected = expected_stabilizer_dim(n, k)
    certified = (
        enough
        and seeds_agree
        and (witness_dim is None or witness_dim == stab)
        and stab == generic_stabilizer_dim(n, k)
    )
    if not certified:
        logger.warning(
            "n=%d k=%d: stabilizer %s not certified (witness %s)", n, k, dims, witness_dim
        )
    return GenericCertificate(
        n=n,
        k=k,
        seeds=list(seeds),
        stab_dims=dims,
        stab_dim=stab,
        seeds_agree=seeds_agree,
        enough_seeds=enough,
        witness_stab_dim=witness_dim,
        expected_stab_dim=expected,
        known_discrepancy=stab != expected and (n, k) in RANK_CONFIRMED_STABILIZERS,
        certified=certified,
    )
