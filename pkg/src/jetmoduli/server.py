"""MCP server exposing the jetmoduli computations as tools.

Uses the FastMCP pattern for tool registration and runs over stdio. Every
tool returns a ``{"status": "success", ...}`` envelope or the shared error
envelope; none of them raise. Exact-rank work runs in a worker thread so the
event loop stays responsive.
"""

import asyncio
import logging
from typing import Any

from mcp.server.fastmcp import FastMCP

from jetmoduli import __version__
from jetmoduli.records import (
    CLOSED_FORM_REF,
    DIMS_REF,
    SERIES_REF,
    WITNESS_FIRST_ORDER_REF,
    WITNESS_GAMMA_REF,
    closed_form_record,
    dims_records,
    series_record,
    stabilizer_records,
    witness_record,
)
from jetmoduli.stabilizer import STABILIZER_REF
from jetmoduli.utils.config import get_settings
from jetmoduli.utils.errors import client_safe_error
from jetmoduli.utils.responses import error_response, success_response

# Get settings
settings = get_settings()

logger = logging.getLogger(__name__)

mcp = FastMCP("jetmoduli", dependencies=["sympy", "pydantic-settings"])


def _failure(operation: str, paper_ref: str, e: Exception, **context: Any) -> dict[str, Any]:
    logger.error("%s failed: %s", operation, e)
    msg, code = client_safe_error(e)
    return error_response(
        error=code, message=msg, operation=operation, paper_ref=paper_ref, **context
    )


# Health check tool (always available)
@mcp.tool()
async def health_check() -> str:
    """Check jetmoduli MCP server health."""
    return f"jetmoduli MCP server {__version__} is healthy ({settings.worker_count} workers)"


# =============================================================================
# Dimensions and series
# =============================================================================


@mcp.tool()
async def moduli_dimensions(n: int, k: int = 0) -> dict[str, Any]:
    """Jet-space, orbit and moduli dimensions of connection jets.

    Args:
        n: Number of variables (>= 1)
        k: Largest jet order; one record per order 0..k

    Returns:
        dict with "records": list of {n, k, dim_F, orbit_dim, stab_dim, dim_M, a_k}
        plus the rank-confirmed generic_stab_dim, generic_dim_M, generic_a_k
        and a discrepancy flag
    """
    try:
        records = dims_records(n, k)
        return success_response(
            operation="moduli_dimensions", paper_ref=DIMS_REF, records=records
        )
    except Exception as e:
        return _failure("moduli_dimensions", DIMS_REF, e, n=n, k=k)


@mcp.tool()
async def poincare_series(n: int, terms: int = 10) -> dict[str, Any]:
    """First coefficients of the Poincare series of connection jets.

    Args:
        n: Number of variables (>= 1)
        terms: Number of coefficients (a_0 .. a_{terms-1})

    Example:
        >>> result = await poincare_series(2, 4)
        >>> result["coefficients"]
        [0, 6, 14, 20]
    """
    try:
        record = series_record(n, terms)
        return success_response(
            operation="poincare_series",
            paper_ref=SERIES_REF,
            n=n,
            terms=terms,
            coefficients=record["coefficients"],
            generic_coefficients=record["generic_coefficients"],
            discrepancy=record["discrepancy"],
        )
    except Exception as e:
        return _failure("poincare_series", SERIES_REF, e, n=n)


@mcp.tool()
async def poincare_closed_form(n: int) -> dict[str, Any]:
    """The Poincare series as a rational function with poles only at t = 1."""
    try:
        record = closed_form_record(n)
        record.pop("paper_ref")
        return success_response(
            operation="poincare_closed_form", paper_ref=CLOSED_FORM_REF, **record
        )
    except Exception as e:
        return _failure("poincare_closed_form", CLOSED_FORM_REF, e, n=n)


# =============================================================================
# Stabilizers and witnesses
# =============================================================================


@mcp.tool()
async def stabilizer_reports(
    n: int,
    k: int = 0,
    seeds: int | None = None,
    seed: int | None = None,
    coeff_range: int | None = None,
) -> dict[str, Any]:
    """Empirical stabilizer and orbit dimensions at random connection jets.

    Args:
        n: Number of variables (>= 1)
        k: Jet order
        seeds: Number of random jets (default JETMODULI_SEEDS)
        seed: First seed (default JETMODULI_BASE_SEED)
        coeff_range: Integer coefficients lie in [-coeff_range, coeff_range]

    Returns:
        dict with "reports": one report per seed; reports from a seed that
        reached a smaller orbit than the others carry non_generic = true.
        "certificate" says whether the seeds and a witness jet certify the
        generic stabilizer dimension.
    """
    try:
        count = seeds if seeds is not None else settings.JETMODULI_SEEDS
        first = seed if seed is not None else settings.JETMODULI_BASE_SEED
        seed_list = [first + i for i in range(count)]
        records, certificate = await asyncio.to_thread(
            stabilizer_records, n, k, seed_list, coeff_range
        )
        return success_response(
            operation="stabilizer_reports",
            paper_ref=STABILIZER_REF,
            all_agree=all(r["agree"] for r in records),
            reports=records,
            certificate=certificate,
        )
    except Exception as e:
        return _failure("stabilizer_reports", STABILIZER_REF, e, n=n, k=k)


@mcp.tool()
async def witness_jet(name: str = "gamma", n: int = 3) -> dict[str, Any]:
    """An explicit witness jet with its assembled linear stabilizer system.

    Args:
        name: "gamma" (0-jet, any n >= 2) or "n2-first-order" (n = 2, order 1)
        n: Dimension for the gamma witness
    """
    try:
        record = await asyncio.to_thread(witness_record, name, n)
        ref = record.pop("paper_ref")
        return success_response(operation="witness_jet", paper_ref=ref, **record)
    except Exception as e:
        ref = WITNESS_FIRST_ORDER_REF if name == "n2-first-order" else WITNESS_GAMMA_REF
        return _failure("witness_jet", ref, e, n=n)


def main() -> None:
    """Entry point for the MCP server (stdio transport)."""
    settings.configure_logging()
    logger.info("Starting jetmoduli MCP server in stdio mode...")
    mcp.run()


if __name__ == "__main__":
    main()
