"""Shared response helpers for the CLI and the MCP tools.

Provides a single structured error envelope, the matching success envelope,
and the stable JSON encoding used for every emitted record. Exact rationals
are written as ``"p/q"`` strings (integers stay integers), keys are sorted,
and records are newline-delimited, so identical inputs give byte-identical
output.
"""

import json
from fractions import Fraction
from typing import Any

# Max length of a human error message echoed back to the caller.
_MAX_MESSAGE_LEN = 500


def fraction_to_str(value: Fraction) -> str:
    """Render an exact rational as ``"p/q"`` (or ``"p"`` when integral)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_jsonable(value: Any) -> Any:
    """Recursively convert exact values into JSON-compatible ones.

    Integral fractions become ints, other fractions ``"p/q"`` strings;
    tuples become lists; anything with ``model_dump`` (pydantic models)
    is dumped first.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else fraction_to_str(value)
    if hasattr(value, "model_dump"):
        return to_jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    return value


def dumps_record(record: dict[str, Any]) -> str:
    """Serialize one record as a single stable-keyed JSON line."""
    return json.dumps(to_jsonable(record), sort_keys=True, separators=(",", ":"))


def success_response(*, operation: str, paper_ref: str, **data: Any) -> dict[str, Any]:
    """Build the success envelope returned by every tool.

    ``paper_ref`` names the formula or identity the returned numbers instantiate.
    """
    resp: dict[str, Any] = {"status": "success", "operation": operation, "paper_ref": paper_ref}
    resp.update(to_jsonable(data))
    return resp


def error_response(
    *,
    error: str,
    message: object,
    operation: str,
    paper_ref: str = "",
    n: int | None = None,
    k: int | None = None,
    **extra: Any,
) -> dict[str, Any]:
    """Build one structured error envelope used by every error path.

    ``error`` is a stable machine code (e.g. ``"validation_error"``,
    ``"not_normal"``, ``"verification_failed"``). ``message`` is
    length-bounded human text. ``paper_ref`` names the formula the failed
    operation computes. ``n``/``k`` are included only when provided.
    Any additional context can be passed via keyword and is merged verbatim.
    """
    msg = str(message)
    if len(msg) > _MAX_MESSAGE_LEN:
        msg = msg[:_MAX_MESSAGE_LEN] + "... (truncated)"
    resp: dict[str, Any] = {
        "status": "error",
        "error": error,
        "message": msg,
        "operation": operation,
        "paper_ref": paper_ref,
    }
    if n is not None:
        resp["n"] = n
    if k is not None:
        resp["k"] = k
    resp.update(extra)
    return resp
