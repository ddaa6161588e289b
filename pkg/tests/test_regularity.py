"""Tests for units, regularity, unit-regularity and stable range one."""

import numpy as np
import pytest

from ringlab.core.algebra import power
from ringlab.core.catalog import catalog, gl_order, parse_element
from ringlab.core.errors import CapExceeded
from ringlab.core.modules import Verdict
from ringlab.core.regularity import (
    ClassificationSummary,
    all_powers_regular,
    annihilator_vs_quotient,
    classify_all,
    idempotent_power_split,
    inner_inverse_set,
    is_regular,
    nilpotency_data,
    pi_chain_dims,
    profile_element,
    stable_range_one,
    strongly_pi_regular_index,
    unit_count,
    unit_regular_certificate,
)
from ringlab.utils.config import config


class TestUnits:
    """Tests for the exhaustive unit count."""

    def test_matrix_units_match_gl(self, m2, m3):
        """Units of M_n(F_2) are GL_n(F_2)."""
        assert unit_count(m2) == gl_order(2, 2) == 6
        assert unit_count(m3) == gl_order(3, 2) == 168

    def test_parallel_count_matches(self, m3):
        """Two workers count the same units as one."""
        assert unit_count(m3, jobs=2) == unit_count(m3, jobs=1)

    def test_group_algebra(self, c3):
        """F_3[C_3] is local with 27 - 9 units."""
        assert unit_count(c3) == 18

    def test_cap(self, m2, monkeypatch):
        """Scans refuse rings above the element cap."""
        monkeypatch.setattr(config, "element_cap", 8)
        with pytest.raises(CapExceeded):
            unit_count(m2)


class TestInnerInverses:
    """Tests for {x : axa = a}."""

    def test_e12_solution_count(self, e12):
        """e12 x e12 = x21 e12, so three coordinates are free."""
        inner = inner_inverse_set(e12)
        assert inner.is_regular
        assert inner.size == 8
        x = inner.first()
        assert e12 * x * e12 == e12
        assert inner.contains(x)

    def test_nonregular(self, triangular_e12, one_plus_g):
        """e12 in T_2 and 1+g in F_2[C_2] have no inner inverse."""
        for a in (triangular_e12, one_plus_g):
            inner = inner_inverse_set(a)
            assert not inner.is_regular
            assert inner.size == 0
            assert inner.first() is None

    def test_zero_and_one(self, m2):
        """0 and 1 are regular."""
        assert is_regular(m2.zero())
        assert is_regular(m2.identity())


class TestUnitRegularity:
    """Tests for the two unit-regularity routes."""

    def test_e12_certificate(self, e12):
        """Both routes agree and the certificate verifies."""
        verdicts = unit_regular_certificate(e12)
        assert verdicts.verdict is Verdict.TRUE
        assert verdicts.unit_route is Verdict.TRUE
        assert verdicts.iso_route is Verdict.TRUE
        assert verdicts.certificate.verify()
        u = verdicts.certificate.u
        assert u.is_unit and e12 * u * e12 == e12

    def test_sampled_inner_inverses(self, e12, small_caps):
        """Above the inner-inverse cap a unit is found by sampling."""
        verdicts = unit_regular_certificate(e12)
        assert verdicts.verdict is Verdict.TRUE
        assert verdicts.certificate.verify()

    def test_nonregular_is_false(self, one_plus_g):
        """A non-regular element is not unit-regular by either route."""
        verdicts = unit_regular_certificate(one_plus_g)
        assert verdicts == (Verdict.FALSE, None, Verdict.FALSE, Verdict.FALSE)

    def test_iso_holds_without_regularity(self, one_plus_g):
        """r(1+g) ~ R/(1+g)R even though 1+g is not regular."""
        evidence = annihilator_vs_quotient(one_plus_g)
        assert evidence.K.dim == evidence.aR.dim == 1
        assert evidence.search.verdict is Verdict.TRUE


class TestPowers:
    """Tests for nilpotency and the chains of powers."""

    def test_jordan_block(self, jordan3):
        """J has index 3 and the chains stabilise at 0 after three steps."""
        data = nilpotency_data(jordan3)
        assert data.index == 3
        assert data.cycle == (3, 4)
        dims = pi_chain_dims(jordan3)
        assert [left for left, _ in dims] == [9, 6, 3, 0, 0]
        assert strongly_pi_regular_index(jordan3) == 3

    def test_unit_has_index_zero(self, m2):
        """Units have strongly pi-regular index 0 and no nilpotency index."""
        one = m2.identity()
        assert nilpotency_data(one).index is None
        assert strongly_pi_regular_index(one) == 0

    def test_idempotent_cycle(self, m2):
        """e11 = e11^2 closes the power cycle at (1, 2)."""
        assert nilpotency_data(parse_element(m2, "e11")).cycle == (1, 2)

    def test_all_powers_regular_in_matrix_ring(self, jordan3):
        """Every power of J is regular in M_3."""
        check = all_powers_regular(jordan3)
        assert check.regular
        assert check.failing_exponent is None
        assert power(jordan3, check.checked_up_to).is_zero

    def test_first_failing_power(self, triangular_e12):
        """e12 in T_2 already fails at exponent 1."""
        check = all_powers_regular(triangular_e12)
        assert not check.regular
        assert check.failing_exponent == 1


class TestIdempotentPowerSplit:
    """Tests for a = ea + (1-e)a along e = a^m."""

    def test_nilpotent(self, jordan3):
        """For J the idempotent power is 0 = J^3."""
        split = idempotent_power_split(jordan3)
        assert split.m == 3
        assert split.e.is_zero
        assert split.unit_corner.degenerate
        assert split.nil_index == 3
        assert split.failed_checks() == []

    def test_unit(self, c2):
        """g^2 = 1, so g is all unit part."""
        split = idempotent_power_split(parse_element(c2, "g"))
        assert split.m == 2
        assert split.e == c2.identity()
        assert split.nil_corner.degenerate
        assert split.unit_inverse is not None

    def test_mixed(self, m3):
        """e11 + e23: unit part on e11, nilpotent part e23."""
        a = parse_element(m3, "e11+e23")
        split = idempotent_power_split(a)
        assert split.e == parse_element(m3, "e11")
        assert split.nil_index == 2
        assert all(split.checks().values())

    def test_every_element_of_t3(self, t3):
        """Every element of T_3(F_2) splits."""
        for a in t3.elements():
            assert idempotent_power_split(a).failed_checks() == []


class TestClassification:
    """Tests for the exhaustive classifier."""

    def test_matrix_ring_summary(self, m2):
        """M_2(F_2): 6 units, 8 idempotents, 4 nilpotents, everything unit-regular."""
        summary = ClassificationSummary.from_profiles(classify_all(m2))
        assert summary.model_dump() == {
            "elements": 16,
            "units": 6,
            "idempotents": 8,
            "nilpotents": 4,
            "regular": 16,
            "unit_regular": 16,
            "unknown": 0,
            "route_disagreements": 0,
        }

    def test_group_algebra_summary(self, c2):
        """1+g is the only non-regular element of F_2[C_2]."""
        profiles = classify_all(c2)
        summary = ClassificationSummary.from_profiles(profiles)
        assert summary.regular == summary.unit_regular == 3
        bad = [p.element for p in profiles if not p.is_regular]
        assert bad == ["1+g"]

    def test_profiles_in_index_order(self, t2):
        """Profiles are listed by element index, also with two workers."""
        profiles = classify_all(t2, jobs=2)
        assert [p.index for p in profiles] == list(range(8))

    def test_profile_of_jordan_block(self, jordan3):
        """The profile carries the nilpotency and ideal dimensions."""
        profile = profile_element(jordan3, 0)
        assert profile.nilpotency_index == 3
        assert profile.dim_aR == 6
        assert profile.dim_annihilator == 3
        assert profile.unit_regular is Verdict.TRUE
        assert profile.inconsistencies(9) == []


class TestStableRangeOne:
    """Tests for the exhaustive stable-range-one check."""

    @pytest.mark.parametrize("name", ["FpC(2,2)", "M(2,2)", "T(2,2)", "FpC(3,3)"])
    def test_holds_on_small_rings(self, name):
        """Finite rings have stable range one."""
        report = stable_range_one(catalog(name))
        assert report.holds
        assert report.counterexample is None
        assert report.pairs_checked == catalog(name).order ** 2

    def test_fault_injection(self, c2):
        """With every unit masked out the first counterexample is (g, 0)."""
        report = stable_range_one(c2, units=np.zeros(c2.order, dtype=bool))
        assert not report.holds
        assert report.fault_injected
        assert report.counterexample == ["g", "0"]
        assert report.counterexample_coords == [[0, 1], [0, 0]]
