"""Tests for stabilizer and orbit dimensions of connection jets."""

import pytest

from jetmoduli.jets import ConnectionJet
from jetmoduli.normal_coords import sample_normal_jet, witness_gamma, witness_n2_first_order
from jetmoduli.stabilizer import (
    GENERIC_STABILIZER_REF,
    MIN_CERTIFYING_SEEDS,
    RANK_CONFIRMED_STABILIZERS,
    STABILIZER_REF,
    certify_generic,
    expected_stabilizer_dim,
    generic_orbit_dim,
    generic_stabilizer_dim,
    normal_linear_system,
    orbit_dim_formula,
    report,
    reports,
    stabilizer_dim_at,
    stabilizer_dim_generic,
    stabilizer_dim_normal_linear,
    witness_for,
)
from jetmoduli.utils.config import get_settings
from jetmoduli.utils.errors import NotNormalError, ValidationError

# =============================================================================
# Formulas
# =============================================================================


class TestFormulas:
    @pytest.mark.parametrize(
        ("n", "k", "stab"),
        [(1, 0, 1), (1, 5, 1), (2, 0, 2), (2, 1, 0), (3, 0, 0), (4, 2, 0)],
    )
    def test_expected_stabilizer(self, n, k, stab):
        assert expected_stabilizer_dim(n, k) == stab

    @pytest.mark.parametrize(("n", "orbit"), [(1, 1), (2, 8), (3, 27), (4, 56)])
    def test_orbit_at_order_zero(self, n, orbit):
        # n^2(n+3)/2 - delta(n,1) - 2 delta(n,2)
        assert orbit_dim_formula(n, 0) == orbit

    def test_orbit_higher_order(self):
        assert orbit_dim_formula(2, 1) == 18
        assert orbit_dim_formula(3, 1) == 57
        assert orbit_dim_formula(1, 3) == 4

    def test_invalid_input(self):
        with pytest.raises(ValidationError):
            orbit_dim_formula(0, 0)
        with pytest.raises(ValidationError):
            expected_stabilizer_dim(2, -1)

    def test_generic_differs_only_where_rank_confirmed(self):
        assert RANK_CONFIRMED_STABILIZERS == {(3, 0): 1}
        assert generic_stabilizer_dim(3, 0) == 1
        assert expected_stabilizer_dim(3, 0) == 0
        for n, k in [(1, 2), (2, 0), (2, 1), (3, 1), (4, 0)]:
            assert generic_stabilizer_dim(n, k) == expected_stabilizer_dim(n, k)

    def test_generic_orbit(self):
        assert generic_orbit_dim(3, 0) == 26
        assert orbit_dim_formula(3, 0) == 27
        assert generic_orbit_dim(3, 1) == orbit_dim_formula(3, 1) == 57
        assert generic_orbit_dim(2, 0) == 8


# =============================================================================
# Empirical dimensions
# =============================================================================


class TestEmpirical:
    @pytest.mark.parametrize(("n", "k"), [(1, 0), (1, 2), (2, 0), (2, 1)])
    def test_generic_matches_formula(self, n, k):
        assert stabilizer_dim_generic(n, k, seed=0) == expected_stabilizer_dim(n, k)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_three_variables_order_zero(self, seed):
        assert stabilizer_dim_generic(3, 0, seed=seed) == generic_stabilizer_dim(3, 0) == 1

    def test_report_agrees(self):
        r = report(2, 1, seed=1)
        assert r.agree
        assert r.empirical_stab_dim == 0
        assert r.empirical_orbit_dim == r.formula_orbit_dim == 18
        assert r.paper_ref == STABILIZER_REF
        assert not r.non_generic
        assert not r.known_discrepancy

    def test_report_flags_known_discrepancy(self):
        r = report(3, 0, seed=0)
        assert not r.agree
        assert r.known_discrepancy
        assert (r.empirical_stab_dim, r.expected_stab_dim) == (1, 0)
        assert (r.empirical_orbit_dim, r.formula_orbit_dim) == (26, 27)

    def test_zero_jet_is_not_generic_in_two_variables(self):
        # every linear field fixes the zero 0-jet
        assert stabilizer_dim_at(ConnectionJet.zero(2, 0)) == 4

    def test_reports_in_seed_order(self):
        family = reports(2, 0, [4, 2, 3], max_workers=2)
        assert [r.seed for r in family] == [4, 2, 3]
        assert all(r.agree for r in family)

    def test_coeff_range_from_settings(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv("JETMODULI_COEFF_RANGE", "3")
        get_settings.cache_clear()
        assert stabilizer_dim_generic(2, 1, seed=2) == 0
        assert stabilizer_dim_generic(3, 0, seed=2) == 1

    @pytest.mark.parametrize(
        ("n", "k"),
        [(2, 0), (2, 1), (2, 2), (3, 0), pytest.param(3, 1, marks=pytest.mark.slow)],
    )
    def test_normal_jet_gives_generic_stabilizer(self, n, k):
        g = sample_normal_jet(n, k, seed=4)
        full = stabilizer_dim_at(g)
        assert full == stabilizer_dim_generic(n, k, seed=4)
        assert full == stabilizer_dim_normal_linear(g)

    @pytest.mark.parametrize("n", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
    def test_orbit_grows_with_order(self, n):
        top = 3 if n < 3 else 2
        orbits = [report(n, k, seed=0).empirical_orbit_dim for k in range(top + 1)]
        assert orbits == sorted(set(orbits))

    @pytest.mark.slow
    @pytest.mark.parametrize(("n", "k"), [(3, 1), (4, 0)])
    def test_larger_cases(self, n, k):
        assert stabilizer_dim_generic(n, k, seed=0) == 0


class TestNormalLinear:
    def test_witness_gamma(self):
        assert stabilizer_dim_normal_linear(witness_gamma(3)) == 1
        assert stabilizer_dim_normal_linear(witness_gamma(4)) == 0

    def test_first_order_witness(self):
        assert stabilizer_dim_normal_linear(witness_n2_first_order()) == 0

    def test_matches_full_action_on_witnesses(self):
        for g in (witness_gamma(2), witness_gamma(3), witness_n2_first_order()):
            assert stabilizer_dim_normal_linear(g) == stabilizer_dim_at(g)

    def test_stacked_columns(self):
        g = sample_normal_jet(2, 2, seed=1)
        assert normal_linear_system(g).cols == 4

    def test_not_normal_rejected(self):
        with pytest.raises(NotNormalError):
            stabilizer_dim_normal_linear(ConnectionJet.from_constants([[[1]]]))


# =============================================================================
# Certification
# =============================================================================


class TestCertification:
    def test_witness_for(self):
        assert witness_for(1, 3) == ConnectionJet.zero(1, 3)
        assert witness_for(3, 0) == witness_gamma(3)
        assert witness_for(2, 1) == witness_n2_first_order()
        assert witness_for(3, 1) is None

    def test_certify_with_witness(self):
        cert = certify_generic(2, 0, range(MIN_CERTIFYING_SEEDS))
        assert cert.certified
        assert cert.seeds_agree
        assert cert.stab_dim == cert.witness_stab_dim == 2
        assert cert.stab_dims == [2] * MIN_CERTIFYING_SEEDS
        assert not cert.known_discrepancy

    def test_certify_known_discrepancy(self):
        cert = certify_generic(3, 0, range(MIN_CERTIFYING_SEEDS))
        assert cert.certified
        assert cert.known_discrepancy
        assert cert.stab_dim == cert.witness_stab_dim == 1
        assert cert.expected_stab_dim == 0
        assert cert.paper_ref == GENERIC_STABILIZER_REF

    def test_too_few_seeds_not_certified(self):
        cert = certify_generic(2, 1, [0, 1])
        assert cert.seeds_agree
        assert not cert.enough_seeds
        assert not cert.certified

    def test_reuses_family(self):
        seeds = list(range(MIN_CERTIFYING_SEEDS))
        family = reports(2, 1, seeds, max_workers=1)
        cert = certify_generic(2, 1, seeds, family=family)
        assert cert.stab_dims == [r.empirical_stab_dim for r in family]
        assert cert.certified

    def test_certify_one_variable(self):
        cert = certify_generic(1, 1, range(MIN_CERTIFYING_SEEDS))
        assert cert.certified
        assert cert.stab_dim == cert.witness_stab_dim == 1

    def test_certify_without_witness(self):
        cert = certify_generic(2, 2, range(MIN_CERTIFYING_SEEDS))
        assert cert.certified
        assert cert.witness_stab_dim is None
