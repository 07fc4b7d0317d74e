"""Input validation utilities.

Every validator returns the normalized value or raises
:class:`~jetmoduli.utils.errors.ValidationError` with a message naming the
offending parameter.
"""

from typing import Literal

from jetmoduli.utils.errors import ValidationError

# =============================================================================
# Valid Values
# =============================================================================

OutputFormat = Literal["json", "csv", "text"]

VALID_OUTPUT_FORMATS: tuple[OutputFormat, ...] = ("json", "csv", "text")

VALID_WITNESSES = {"gamma", "n2-first-order"}

# Upper bounds keep accidental inputs from running for hours; the formulas
# themselves have no limit.
MAX_DIMENSION = 64
MAX_ORDER = 1000
MAX_TERMS = 10_000
MAX_SEEDS = 100


# =============================================================================
# Validators
# =============================================================================


def validate_count(value: int, name: str, minimum: int = 0, maximum: int | None = None) -> int:
    """Validate a non-negative integer parameter.

    Args:
        value: Value to validate
        name: Parameter name used in the error message
        minimum: Smallest accepted value
        maximum: Largest accepted value (None for unbounded)

    Returns:
        The validated integer

    Raises:
        ValidationError: If value is not an int or out of range
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValidationError(f"{name} must be <= {maximum}, got {value}")
    return value


def validate_dimension(n: int, minimum: int = 1) -> int:
    """Validate the number of variables n (n >= 1, or n >= minimum)."""
    return validate_count(n, "n", minimum=minimum, maximum=MAX_DIMENSION)


def validate_order(k: int) -> int:
    """Validate a jet order k >= 0."""
    return validate_count(k, "k", minimum=0, maximum=MAX_ORDER)


def validate_terms(terms: int) -> int:
    """Validate a number of series terms (>= 1)."""
    return validate_count(terms, "terms", minimum=1, maximum=MAX_TERMS)


def validate_seeds(seeds: int) -> int:
    """Validate a number of seeds (>= 1)."""
    return validate_count(seeds, "seeds", minimum=1, maximum=MAX_SEEDS)


def validate_coeff_range(coeff_range: int) -> int:
    """Validate a random-coefficient range (>= 1)."""
    return validate_count(coeff_range, "coeff_range", minimum=1)


def validate_output_format(fmt: str) -> OutputFormat:
    """Validate an output format name.

    Args:
        fmt: Format name (case-insensitive)

    Returns:
        Normalized lowercase format

    Raises:
        ValidationError: If the format is unknown
    """
    normalized = fmt.strip().lower()
    for valid in VALID_OUTPUT_FORMATS:
        if normalized == valid:
            return valid
    raise ValidationError(
        f"Invalid output format '{fmt}'. Must be one of: {', '.join(VALID_OUTPUT_FORMATS)}"
    )


def validate_witness_name(name: str) -> str:
    """Validate a witness name ("gamma" or "n2-first-order")."""
    normalized = name.strip().lower()
    if normalized not in VALID_WITNESSES:
        raise ValidationError(
            f"Invalid witness '{name}'. Must be one of: {', '.join(sorted(VALID_WITNESSES))}"
        )
    return normalized
