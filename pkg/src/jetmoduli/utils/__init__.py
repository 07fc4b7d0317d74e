"""Utility functions for jetmoduli.

This package provides:
- config: Configuration management
- errors: Custom exception classes and exit-code mapping
- responses: Stable JSON records and the shared error envelope
- validation: Input validation utilities
"""

from jetmoduli.utils.errors import (
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
from jetmoduli.utils.responses import (
    dumps_record,
    error_response,
    fraction_to_str,
    success_response,
    to_jsonable,
)
from jetmoduli.utils.validation import (
    validate_coeff_range,
    validate_count,
    validate_dimension,
    validate_order,
    validate_output_format,
    validate_seeds,
    validate_terms,
    validate_witness_name,
)

__all__ = [
    # Error classes
    "JetModuliError",
    "ValidationError",
    "DimensionMismatchError",
    "JetOrderError",
    "NotNormalError",
    "InconsistencyError",
    "VerificationError",
    # Error utilities
    "client_safe_error",
    "exit_code_for",
    # Responses
    "dumps_record",
    "error_response",
    "fraction_to_str",
    "success_response",
    "to_jsonable",
    # Validation
    "validate_count",
    "validate_dimension",
    "validate_order",
    "validate_terms",
    "validate_seeds",
    "validate_coeff_range",
    "validate_output_format",
    "validate_witness_name",
]
