"""Tests for structure-constant algebras and corner rings."""

import numpy as np
import pytest

from ringlab.core.algebra import build_algebra, corner_algebra, peirce_dimensions, power
from ringlab.core.catalog import catalog, parse_element
from ringlab.core.errors import (
    AlgebraMismatch,
    AssociativityViolation,
    DimensionMismatch,
    NotIdempotent,
    UnitViolation,
)


class TestBuildAlgebra:
    """Tests for build_algebra validation."""

    def test_group_algebra_table(self, c2_table):
        """The F_2[C_2] table builds and matches the preset's fingerprint."""
        R = build_algebra(c2_table["p"], c2_table["mul"], c2_table["one"], ["1", "g"])
        assert R.dim == 2
        assert R.order == 4
        assert R.fingerprint == catalog("FpC(2,2)").fingerprint

    def test_wrong_unit(self, c2_table):
        """An identity that is not one raises UnitViolation."""
        with pytest.raises(UnitViolation):
            build_algebra(2, c2_table["mul"], [0, 1])

    def test_wrong_shape(self):
        """A table that is not d x d x d raises."""
        with pytest.raises(DimensionMismatch):
            build_algebra(2, np.zeros((2, 2, 3), dtype=np.int64), [1, 0])

    def test_associativity_violation_reports_triple(self, m2):
        """Breaking e12 * e21 = e11 breaks associativity."""
        table = m2.mul.copy()
        table[1, 2] = [0, 0, 0, 1]  # e12 * e21 := e22
        with pytest.raises(AssociativityViolation) as exc_info:
            build_algebra(2, table, m2.one)
        assert len(exc_info.value.triple) == 3

    def test_duplicate_labels(self, c2_table):
        """Labels must be distinct."""
        with pytest.raises(DimensionMismatch):
            build_algebra(2, c2_table["mul"], c2_table["one"], ["x", "x"])


class TestElementArithmetic:
    """Tests for Element operators."""

    def test_matrix_units_multiply(self, m2):
        """e12 * e21 = e11 and e21 * e12 = e22."""
        e12, e21 = parse_element(m2, "e12"), parse_element(m2, "e21")
        assert e12 * e21 == parse_element(m2, "e11")
        assert e21 * e12 == parse_element(m2, "e22")

    def test_integer_arithmetic(self, m2):
        """Integers act as multiples of 1."""
        one = m2.identity()
        assert 1 - one == m2.zero()
        assert one + one == m2.zero()

    def test_power(self, jordan3):
        """J^3 = 0 but J^2 != 0; a^0 = 1."""
        assert power(jordan3, 3).is_zero
        assert not power(jordan3, 2).is_zero
        assert power(jordan3, 0) == jordan3.algebra.identity()

    def test_inverse(self, c2):
        """g is its own inverse in F_2[C_2]; 1+g has none."""
        g = parse_element(c2, "g")
        assert g.try_inverse() == g
        assert parse_element(c2, "1+g").try_inverse() is None

    def test_mixing_algebras(self, m2, c2):
        """Elements of different algebras do not combine."""
        with pytest.raises(AlgebraMismatch):
            m2.identity() + c2.identity()

    def test_label_form(self, m2):
        """str shows nonzero terms by label."""
        assert str(parse_element(m2, "e11+e22")) == "e11+e22"
        assert str(m2.zero()) == "0"

    def test_index_round_trip(self, t3):
        """element_at and index_of are inverse."""
        for index in (0, 5, 63):
            assert int(t3.index_of(t3.element_at(index).coords)) == index


class TestCorners:
    """Tests for corner rings eRe."""

    def test_corner_of_matrix_unit(self, m2):
        """e11 M_2 e11 is one-dimensional with identity e11."""
        data = corner_algebra(parse_element(m2, "e11"))
        assert data.corner.dim == 1
        assert data.from_corner(data.corner.identity()) == parse_element(m2, "e11")

    def test_zero_corner_is_degenerate(self, m2):
        """0 R 0 is the zero ring."""
        assert corner_algebra(m2.zero()).degenerate

    def test_corner_round_trip(self, m3):
        """from_corner(to_corner(x)) = exe."""
        e = parse_element(m3, "e11+e22")
        data = corner_algebra(e)
        x = parse_element(m3, "e12+e23+e31")
        assert data.from_corner(data.to_corner(x)) == e * x * e

    def test_not_idempotent(self, m2):
        """Corners need an idempotent."""
        with pytest.raises(NotIdempotent):
            corner_algebra(parse_element(m2, "e12"))

    def test_peirce_dimensions(self, m3):
        """The four Peirce pieces of e11 in M_3 have dims 1, 2, 2, 4."""
        assert peirce_dimensions(parse_element(m3, "e11")) == (1, 2, 2, 4)
