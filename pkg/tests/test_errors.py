"""Tests for jetmoduli error classes and helpers."""

import pytest

from jetmoduli.utils.errors import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    DimensionMismatchError,
    InconsistencyError,
    JetModuliError,
    JetOrderError,
    NotNormalError,
    ValidationError,
    VerificationError,
    client_safe_error,
    exit_code_for,
)

# =============================================================================
# Base Exception Tests
# =============================================================================


class TestJetModuliError:
    """Tests for base JetModuliError class."""

    def test_basic_instantiation(self):
        error = JetModuliError("Test error")
        assert str(error) == "Test error"
        assert error.code is None

    def test_with_exit_code(self):
        error = JetModuliError("Test error", code=3)
        assert error.code == 3

    def test_inheritance(self):
        assert isinstance(JetModuliError("Test"), Exception)


# =============================================================================
# Specific Exception Tests
# =============================================================================


class TestSpecificErrors:
    """Input errors are also ValueErrors; consistency errors are not."""

    @pytest.mark.parametrize(
        "cls", [ValidationError, DimensionMismatchError, JetOrderError, NotNormalError]
    )
    def test_input_errors_are_value_errors(self, cls):
        error = cls("bad input")
        assert isinstance(error, JetModuliError)
        assert isinstance(error, ValueError)

    @pytest.mark.parametrize("cls", [InconsistencyError, VerificationError])
    def test_consistency_errors(self, cls):
        error = cls("mismatch")
        assert isinstance(error, JetModuliError)
        assert not isinstance(error, ValueError)


# =============================================================================
# Helper Tests
# =============================================================================


class TestClientSafeError:
    """client_safe_error maps exceptions to (message, category)."""

    @pytest.mark.parametrize(
        ("error", "category"),
        [
            (ValidationError("n must be >= 1"), "validation_error"),
            (DimensionMismatchError("2 vs 3 variables"), "dimension_mismatch"),
            (JetOrderError("too short"), "jet_order_error"),
            (NotNormalError("not normal"), "not_normal"),
            (InconsistencyError("routes disagree"), "inconsistency"),
            (VerificationError("1 check failed"), "verification_failed"),
        ],
    )
    def test_categories(self, error, category):
        message, code = client_safe_error(error)
        assert code == category
        assert message == str(error)

    def test_empty_message_falls_back(self):
        message, code = client_safe_error(NotNormalError(""))
        assert code == "not_normal"
        assert message == "Jet is not in normal coordinates."

    def test_plain_value_error(self):
        assert client_safe_error(ValueError("bad")) == ("bad", "validation_error")

    def test_unknown_error(self):
        message, code = client_safe_error(RuntimeError("boom"))
        assert code == "internal_error"
        assert message == "boom"


class TestExitCodeFor:
    def test_usage_errors(self):
        assert exit_code_for(ValidationError("x")) == EXIT_USAGE
        assert exit_code_for(NotNormalError("x")) == EXIT_USAGE

    def test_verification_errors(self):
        assert exit_code_for(VerificationError("x")) == EXIT_VERIFICATION_FAILED
        assert exit_code_for(InconsistencyError("x")) == EXIT_VERIFICATION_FAILED

    def test_explicit_code_wins(self):
        assert exit_code_for(ValidationError("x", code=EXIT_OK)) == EXIT_OK

    def test_unexpected_error(self):
        assert exit_code_for(RuntimeError("x")) == EXIT_VERIFICATION_FAILED
