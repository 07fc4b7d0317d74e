"""Tests for jetmoduli input validation."""

import pytest

from jetmoduli.utils.validation import (
    MAX_DIMENSION,
    VALID_OUTPUT_FORMATS,
    ValidationError,
    validate_coeff_range,
    validate_count,
    validate_dimension,
    validate_order,
    validate_output_format,
    validate_seeds,
    validate_terms,
    validate_witness_name,
)

# =============================================================================
# Integer Parameters
# =============================================================================


class TestValidateCount:
    def test_accepts_in_range(self):
        assert validate_count(3, "x", minimum=1, maximum=5) == 3

    def test_rejects_below_minimum(self):
        with pytest.raises(ValidationError, match="x must be >= 1"):
            validate_count(0, "x", minimum=1)

    def test_rejects_above_maximum(self):
        with pytest.raises(ValidationError, match="x must be <= 5"):
            validate_count(6, "x", maximum=5)

    @pytest.mark.parametrize("value", [True, 1.5, "3"])
    def test_rejects_non_integers(self, value):
        with pytest.raises(ValidationError, match="must be an integer"):
            validate_count(value, "x")


class TestNamedValidators:
    def test_dimension(self):
        assert validate_dimension(1) == 1
        with pytest.raises(ValidationError):
            validate_dimension(0)
        with pytest.raises(ValidationError):
            validate_dimension(MAX_DIMENSION + 1)

    def test_dimension_minimum(self):
        with pytest.raises(ValidationError, match="n must be >= 2"):
            validate_dimension(1, minimum=2)

    def test_order(self):
        assert validate_order(0) == 0
        with pytest.raises(ValidationError, match="k must be >= 0"):
            validate_order(-1)

    def test_terms(self):
        assert validate_terms(1) == 1
        with pytest.raises(ValidationError, match="terms"):
            validate_terms(0)

    def test_seeds_and_range(self):
        assert validate_seeds(5) == 5
        assert validate_coeff_range(10) == 10
        with pytest.raises(ValidationError):
            validate_seeds(0)
        with pytest.raises(ValidationError):
            validate_coeff_range(0)


# =============================================================================
# Names
# =============================================================================


class TestOutputFormat:
    @pytest.mark.parametrize("fmt", VALID_OUTPUT_FORMATS)
    def test_valid(self, fmt):
        assert validate_output_format(fmt) == fmt

    def test_case_insensitive(self):
        assert validate_output_format(" JSON ") == "json"

    def test_invalid(self):
        with pytest.raises(ValidationError, match="Invalid output format"):
            validate_output_format("yaml")


class TestWitnessName:
    def test_valid(self):
        assert validate_witness_name("gamma") == "gamma"
        assert validate_witness_name("N2-First-Order") == "n2-first-order"

    def test_invalid(self):
        with pytest.raises(ValidationError, match="Invalid witness"):
            validate_witness_name("delta")
