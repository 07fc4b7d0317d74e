"""Custom error classes for jetmoduli."""


class JetModuliError(Exception):
    """Base exception for jetmoduli errors.

    Attributes:
        code: Process exit code associated with the error (if applicable)
        message: Human-readable error message
    """

    def __init__(self, message: str, code: int | None = None) -> None:
        """Initialize jetmoduli error.

        Args:
            message: Error message
            code: Exit code override
        """
        self.code = code
        super().__init__(message)


class ValidationError(JetModuliError, ValueError):
    """Input validation failed.

    Raised when a dimension, order, count or output format does not meet
    its requirements (e.g. ``n < 1`` or ``terms < 1``).
    """

    pass


class DimensionMismatchError(JetModuliError, ValueError):
    """Operands live in different numbers of variables.

    Raised by polynomial and jet operations whose inputs disagree on ``n``.
    """

    pass


class JetOrderError(JetModuliError, ValueError):
    """A jet has the wrong order or degree for the requested operation.

    Common causes:
    - projecting a jet onto an order above its own
    - a vector-field jet that is too short to act on a connection jet
    - a vector-field jet with a nonzero constant term
    """

    pass


class NotNormalError(JetModuliError, ValueError):
    """The coordinates are not normal for the given connection jet.

    Raised by the stabilizer-system assemblers, which are only valid when
    Gamma^i_jk(x) x^j x^k vanishes identically.
    """

    pass


class InconsistencyError(JetModuliError):
    """Two independent routes to the same number disagree.

    This is a defect, never an expected runtime state.
    """

    pass


class VerificationError(JetModuliError):
    """One or more acceptance checks failed."""

    pass


# =============================================================================
# Exit Codes and Categories
# =============================================================================

# Exit codes of the command-line front end.
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2

# Maps exception classes to short, stable category codes for client_safe_error.
_ERROR_CATEGORY: dict[type[JetModuliError], str] = {
    ValidationError: "validation_error",
    DimensionMismatchError: "dimension_mismatch",
    JetOrderError: "jet_order_error",
    NotNormalError: "not_normal",
    InconsistencyError: "inconsistency",
    VerificationError: "verification_failed",
}

# Fallback generic messages per category when no specific message is available.
_CATEGORY_MESSAGE: dict[str, str] = {
    "validation_error": "Invalid input parameter.",
    "dimension_mismatch": "Operands have different numbers of variables.",
    "jet_order_error": "Jet order does not fit the operation.",
    "not_normal": "Jet is not in normal coordinates.",
    "inconsistency": "Internal consistency check failed.",
    "verification_failed": "Verification failed.",
}

_CATEGORY_EXIT: dict[str, int] = {
    "validation_error": EXIT_USAGE,
    "dimension_mismatch": EXIT_USAGE,
    "jet_order_error": EXIT_USAGE,
    "not_normal": EXIT_USAGE,
    "inconsistency": EXIT_VERIFICATION_FAILED,
    "verification_failed": EXIT_VERIFICATION_FAILED,
}


def client_safe_error(error: Exception) -> tuple[str, str]:
    """Convert an exception into a caller-safe (message, code) pair.

    Args:
        error: The exception raised during a computation.

    Returns:
        Tuple of (message, error_code) where error_code is a short, stable
        category string (e.g. "validation_error", "not_normal").
    """
    if isinstance(error, JetModuliError):
        category = "internal_error"
        for cls in type(error).__mro__:
            if cls in _ERROR_CATEGORY:
                category = _ERROR_CATEGORY[cls]
                break
        message = str(error).strip() or _CATEGORY_MESSAGE.get(category, "Computation failed.")
        return message, category

    # Plain ValueErrors come from argument conversion and describe the input.
    if isinstance(error, ValueError):
        return str(error).strip() or "Invalid input parameter.", "validation_error"

    return str(error).strip() or "An internal error occurred.", "internal_error"


def exit_code_for(error: Exception) -> int:
    """Map an exception to the CLI exit code.

    An explicit ``code`` on a :class:`JetModuliError` wins over the
    category default.
    """
    if isinstance(error, JetModuliError) and error.code is not None:
        return error.code
    _, category = client_safe_error(error)
    return _CATEGORY_EXIT.get(category, EXIT_VERIFICATION_FAILED)
