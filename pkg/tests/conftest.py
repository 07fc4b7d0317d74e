"""Pytest fixtures for jetmoduli tests.

Provides small known jets and a clean settings cache so environment
overrides in one test never leak into another.
"""

from collections.abc import Generator

import pytest

from jetmoduli.jets import ConnectionJet, VectorFieldJet
from jetmoduli.normal_coords import witness_gamma, witness_n2_first_order
from jetmoduli.utils.config import get_settings

# =============================================================================
# Settings Fixtures
# =============================================================================


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    """Reset cached settings and pin the sampling defaults for every test."""
    for name in (
        "JETMODULI_THREADS",
        "JETMODULI_COEFF_RANGE",
        "JETMODULI_SEEDS",
        "JETMODULI_BASE_SEED",
        "JETMODULI_VERIFY_DEEP",
        "LOG_FILE",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("LOG_LEVEL", "WARNING")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


# =============================================================================
# Jet Fixtures
# =============================================================================


@pytest.fixture
def zero_jet_n1() -> ConnectionJet:
    """The zero connection 0-jet in one variable."""
    return ConnectionJet.zero(1, 0)


@pytest.fixture
def gamma_n2() -> ConnectionJet:
    """Normal n=2 0-jet with gamma^1_12 = 1 = -gamma^1_21."""
    values = [[[0, 1], [-1, 0]], [[0, 0], [0, 0]]]
    return ConnectionJet.from_constants(values)


@pytest.fixture
def gamma_witness_n3() -> ConnectionJet:
    return witness_gamma(3)


@pytest.fixture
def first_order_witness() -> ConnectionJet:
    return witness_n2_first_order()


@pytest.fixture
def quadratic_field_n1() -> VectorFieldJet:
    """x^2 d/dx, known through degree 2."""
    return VectorFieldJet.from_components(1, 2, [{(2,): 1}])
