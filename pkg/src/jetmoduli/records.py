"""Record builders shared by the command line and the MCP tools.

Every record is a plain dict of JSON-compatible values (exact rationals are
rendered through :func:`jetmoduli.utils.responses.to_jsonable` at output
time) and carries a ``paper_ref`` naming the formula its numbers instantiate.

Dimension and series records carry the stated values together with the
rank-confirmed ones (``generic_*``); ``discrepancy`` is set wherever they
differ, which happens only for n=3 at orders 0 and 1.
"""

import logging
from collections.abc import Sequence
from typing import Any

from jetmoduli.exact_core import QMatrix, rank
from jetmoduli.jets import ConnectionJet, jet_to_json
from jetmoduli.normal_coords import (
    is_normal_jet,
    stabilizer_system_0jet,
    stabilizer_system_1jet,
    witness_gamma,
    witness_n2_first_order,
)
from jetmoduli.poincare import (
    a_coeff,
    closed_form,
    dim_F,
    dim_M,
    functional_moduli_estimate,
    generic_dim_M,
    generic_series,
    poincare_series,
)
from jetmoduli.stabilizer import (
    certify_generic,
    expected_stabilizer_dim,
    generic_stabilizer_dim,
    orbit_dim_formula,
    reports,
)
from jetmoduli.utils.responses import fraction_to_str
from jetmoduli.utils.validation import (
    validate_dimension,
    validate_order,
    validate_terms,
    validate_witness_name,
)

logger = logging.getLogger(__name__)

DIMS_REF = "dim M_k = n^3 C(n+k,n) - generic orbit dimension; a_k = dim M_k - dim M_(k-1)"
SERIES_REF = "p(t) = sum_k (dim M_k - dim M_(k-1)) t^k, three routes agreeing"
CLOSED_FORM_REF = (
    "p(t) = delta(n,1) + 2 delta(n,2)(1-t) - n^2 + n((n^2-1)/(1-t)^n - 2/(1-t)^(n-1) - ... - n/(1-t))"
)
WITNESS_GAMMA_REF = "gamma^a_ab = +1 (a<b), -1 (a>b): linear stabilizer equations at the origin"
WITNESS_FIRST_ORDER_REF = "n=2 first-order jet 2, -1, -1: linear stabilizer equations in degree 1"


def dims_records(n: int, k: int) -> list[dict[str, Any]]:
    """One dimension record per jet order 0..k."""
    validate_dimension(n)
    validate_order(k)
    records: list[dict[str, Any]] = []
    for order in range(k + 1):
        stated = dim_M(n, order)
        generic = generic_dim_M(n, order)
        previous = generic_dim_M(n, order - 1) if order else 0
        a_k = a_coeff(n, order)
        records.append(
            {
                "n": n,
                "k": order,
                "dim_F": dim_F(n, order),
                "orbit_dim": orbit_dim_formula(n, order),
                "stab_dim": expected_stabilizer_dim(n, order),
                "dim_M": stated,
                "a_k": a_k,
                "generic_stab_dim": generic_stabilizer_dim(n, order),
                "generic_dim_M": generic,
                "generic_a_k": generic - previous,
                "discrepancy": generic != stated or generic - previous != a_k,
                "paper_ref": DIMS_REF,
            }
        )
    return records


def series_record(n: int, terms: int) -> dict[str, Any]:
    validate_dimension(n)
    validate_terms(terms)
    coefficients = poincare_series(n, terms).as_ints()
    generic = generic_series(n, terms - 1).as_ints()
    if generic != coefficients:
        logger.info(
            "n=%d: exact rank gives a_k = %s, the formulas give %s", n, generic, coefficients
        )
    return {
        "n": n,
        "terms": terms,
        "coefficients": coefficients,
        "generic_coefficients": generic,
        "discrepancy": generic != coefficients,
        "paper_ref": SERIES_REF,
    }


def closed_form_record(n: int) -> dict[str, Any]:
    """Partial-fraction and single-fraction forms of the series."""
    validate_dimension(n)
    f = closed_form(n)
    numerator, power = f.as_fraction()
    return {
        "n": n,
        "polynomial_part": list(f.polynomial_part),
        "pole_part": {str(j): c for j, c in enumerate(f.pole_part, start=1)},
        "numerator": list(numerator),
        "denominator_power": power,
        "expression": str(f.to_sympy()),
        "functional_moduli_estimate": functional_moduli_estimate(n) if n >= 2 else None,
        "paper_ref": CLOSED_FORM_REF,
    }


def stabilizer_records(
    n: int, k: int, seeds: Sequence[int], coeff_range: int | None = None
) -> tuple[list[dict[str, Any]], dict[str, Any]]:
    """Per-seed reports and the certificate built from the same seed family."""
    validate_dimension(n)
    validate_order(k)
    family = reports(n, k, seeds, coeff_range)
    certificate = certify_generic(n, k, seeds, coeff_range, family=family)
    return [r.model_dump() for r in family], certificate.model_dump()


def _matrix_json(m: QMatrix) -> dict[str, Any]:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[fraction_to_str(x) for x in m.row(i)] for i in range(m.rows)],
        "rank": rank(m),
        "kernel_dim": m.cols - rank(m),
    }


def witness_record(name: str, n: int = 3) -> dict[str, Any]:
    """A named witness jet together with its assembled stabilizer system."""
    name = validate_witness_name(name)
    jet: ConnectionJet
    if name == "gamma":
        validate_dimension(n, minimum=2)
        jet = witness_gamma(n)
        matrix = stabilizer_system_0jet(jet).matrix
        ref = WITNESS_GAMMA_REF
    else:
        jet = witness_n2_first_order()
        matrix = stabilizer_system_1jet(jet).matrix
        ref = WITNESS_FIRST_ORDER_REF
    return {
        "witness": name,
        "n": jet.n,
        "order": jet.order,
        "normal": is_normal_jet(jet),
        "jet": jet_to_json(jet),
        "system": _matrix_json(matrix),
        "paper_ref": ref,
    }
