"""Tests for the shared response helpers (envelopes and stable JSON)."""

import json
from fractions import Fraction

from pydantic import BaseModel

from jetmoduli.utils.responses import (
    dumps_record,
    error_response,
    fraction_to_str,
    success_response,
    to_jsonable,
)


class TestFractionRendering:
    def test_integral(self):
        assert fraction_to_str(Fraction(6)) == "6"

    def test_proper(self):
        assert fraction_to_str(Fraction(-3, 4)) == "-3/4"

    def test_to_jsonable_nested(self):
        class Model(BaseModel):
            value: int

        data = {1: (Fraction(2), Fraction(1, 3)), "m": Model(value=4), "flag": True}
        assert to_jsonable(data) == {"1": [2, "1/3"], "m": {"value": 4}, "flag": True}


class TestDumpsRecord:
    """Records serialize to one sorted-key JSON line."""

    def test_sorted_and_compact(self):
        line = dumps_record({"b": 1, "a": Fraction(1, 2)})
        assert line == '{"a":"1/2","b":1}'

    def test_deterministic(self):
        record = {"n": 2, "coefficients": [Fraction(0), Fraction(6)]}
        assert dumps_record(record) == dumps_record(dict(reversed(list(record.items()))))
        assert json.loads(dumps_record(record)) == {"n": 2, "coefficients": [0, 6]}


class TestSuccessResponse:
    def test_shape(self):
        r = success_response(
            operation="poincare_series", paper_ref="p(t)", coefficients=[Fraction(6)]
        )
        assert r["status"] == "success"
        assert r["operation"] == "poincare_series"
        assert r["paper_ref"] == "p(t)"
        assert r["coefficients"] == [6]


class TestErrorResponse:
    """error_response() builds one structured envelope for every error path."""

    def test_minimal_shape(self):
        r = error_response(error="validation_error", message="boom", operation="dims")
        assert r == {
            "status": "error",
            "error": "validation_error",
            "message": "boom",
            "operation": "dims",
            "paper_ref": "",
        }

    def test_carries_paper_ref(self):
        r = error_response(
            error="validation_error", message="boom", operation="series", paper_ref="p(t)"
        )
        assert r["paper_ref"] == "p(t)"

    def test_includes_n_and_k_when_supplied(self):
        r = error_response(error="not_normal", message="x", operation="witness", n=3, k=0)
        assert r["n"] == 3
        assert r["k"] == 0

    def test_extra_context_merged(self):
        r = error_response(error="e", message="m", operation="op", seed=4)
        assert r["seed"] == 4

    def test_long_message_truncated(self):
        r = error_response(error="e", message="x" * 2000, operation="op")
        assert len(r["message"]) < 600
        assert r["message"].endswith("(truncated)")
