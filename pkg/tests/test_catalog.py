"""Tests for preset rings and element literals."""

import pytest

from ringlab.core.catalog import (
    catalog,
    gl_order,
    jordan_block,
    nilpotent_matrix_count,
    parse_element,
)
from ringlab.core.errors import ElementSyntaxError, PresetOutOfRange, UnknownPreset


class TestPresets:
    """Tests for catalog name parsing and builders."""

    @pytest.mark.parametrize(
        "name,dim,order",
        [
            ("M(2,2)", 4, 16),
            ("M(3,2)", 9, 512),
            ("T(2,2)", 3, 8),
            ("T(3,2)", 6, 64),
            ("T(2,3)", 3, 27),
            ("FpC(2,2)", 2, 4),
            ("FpC(3,3)", 3, 27),
            ("prod(M(2,2),T(2,2))", 7, 128),
        ],
    )
    def test_sizes(self, name, dim, order):
        """Each preset has the expected dimension and size."""
        R = catalog(name)
        assert R.dim == dim
        assert R.order == order

    def test_whitespace_tolerated(self):
        """Spaces inside preset names are ignored."""
        assert catalog(" M( 2 , 2 ) ").fingerprint == catalog("M(2,2)").fingerprint

    def test_product_labels(self, product_ring):
        """Product labels carry the factor prefix."""
        assert product_ring.labels[0] == "f1.e11"
        assert product_ring.labels[-1] == "f2.e22"

    def test_cyclic_labels(self, c3):
        """Group algebra labels are powers of g."""
        assert c3.labels == ("1", "g", "g2")

    def test_unknown_preset(self):
        """Unknown names raise UnknownPreset."""
        with pytest.raises(UnknownPreset):
            catalog("X(2,2)")

    def test_trailing_input(self):
        """Trailing tokens are rejected."""
        with pytest.raises(UnknownPreset):
            catalog("M(2,2))")

    def test_non_prime_modulus(self):
        """A composite modulus is out of range."""
        with pytest.raises(PresetOutOfRange):
            catalog("M(2,4)")

    def test_dimension_limit(self):
        """M(9,2) has dimension 81 > max_dim."""
        with pytest.raises(PresetOutOfRange):
            catalog("M(9,2)")


class TestOracles:
    """Tests for closed-form counts."""

    def test_gl_orders(self):
        """|GL_2(F_2)| = 6 and |GL_3(F_2)| = 168."""
        assert gl_order(2, 2) == 6
        assert gl_order(3, 2) == 168

    def test_nilpotent_counts(self):
        """q^(n^2 - n) nilpotent matrices."""
        assert nilpotent_matrix_count(2, 2) == 4
        assert nilpotent_matrix_count(3, 2) == 64


class TestParseElement:
    """Tests for element literals."""

    def test_matrix_units(self, m3):
        """e12+e23 is the Jordan block."""
        assert parse_element(m3, "e12+e23") == jordan_block(m3)

    def test_named_jordan(self, m3):
        """J names the Jordan block."""
        assert parse_element(m3, "J") == parse_element(m3, "e12 + e23")

    def test_coordinates(self, m2):
        """Coordinate vectors follow the basis order."""
        assert parse_element(m2, "[0,1,0,0]") == parse_element(m2, "e12")

    def test_scaled_and_signed(self):
        """Scalars and signs reduce mod p."""
        R = catalog("M(2,3)")
        assert parse_element(R, "2*e11-e22").coords.tolist() == [2, 0, 0, 2]

    def test_integer_is_scalar(self, m2):
        """An integer is that multiple of 1."""
        assert parse_element(m2, "1") == m2.identity()
        assert parse_element(m2, "2").is_zero

    def test_unknown_label(self, m2):
        """Unknown labels raise ElementSyntaxError."""
        with pytest.raises(ElementSyntaxError):
            parse_element(m2, "e13")

    def test_wrong_length_vector(self, m2):
        """Coordinate vectors must have dim entries."""
        with pytest.raises(ElementSyntaxError):
            parse_element(m2, "[1,0]")

    def test_jordan_needs_matrix_units(self, c2):
        """J is undefined in a group algebra."""
        with pytest.raises(ElementSyntaxError):
            parse_element(c2, "J")

    def test_empty(self, m2):
        """Empty text is rejected."""
        with pytest.raises(ElementSyntaxError):
            parse_element(m2, "  ")
