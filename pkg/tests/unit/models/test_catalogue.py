"""Tests for the singularity catalogue."""

from fractions import Fraction

import pytest

from germlab.models.catalogue import (
    catalogue_metadata,
    lookup,
    normal_form,
    table_rows,
    versal_monomials,
)
from germlab.models.errors import UnknownLabel


class TestMetadata:
    """Tests for catalogue_metadata."""

    @pytest.mark.parametrize(
        "label,expected",
        [
            (("A", 3), (3, 2, Fraction(1, 4), 0)),
            (("D", 4), (4, 3, Fraction(1, 3), 0)),
            (("E6", 6), (6, 5, Fraction(5, 12), 0)),
            (("Ae", 3), (3, 2, Fraction(1, 3), 0)),
            (("Xe", 5), (5, 3, Fraction(1, 2), 1)),
            (("Xe", 6), (6, 4, Fraction(1, 2), 1)),
            (("Ze", 7), (7, 5, Fraction(5, 9), 1)),
            (("YtildeE", 3), (7, 5, Fraction(1, 2), 1)),
            (("YeCandidate", (3, 3)), (7, 5, Fraction(1, 2), 1)),
        ],
    )
    def test_known_classes(self, label, expected):
        """Test multiplicity, codimension, β and modality of catalogue classes."""
        assert catalogue_metadata(label) == expected

    def test_unknown_class(self):
        """Test that classes outside the catalogue are rejected."""
        with pytest.raises(UnknownLabel):
            catalogue_metadata(("D", 3))
        assert lookup("Unknown", None) is None

    def test_modality_is_mult_minus_codim_minus_one(self):
        """Test the modality relation across a range of indices."""
        for index in range(5, 12):
            mult, codim, _, modality = catalogue_metadata(("Xe", index))
            assert modality == mult - codim - 1


class TestNormalForms:
    """Tests for normal_form."""

    @pytest.mark.parametrize(
        "family,index,signs,modulus,expected",
        [
            ("A", 3, "-", None, "-x^4"),
            ("D", 5, "+", None, "x^2y + y^4"),
            ("E6", 6, "-", None, "x^3 - y^4"),
            ("Ae", 2, "+", None, "x^4"),
            ("Xe", 5, "+-", 3, "x^4 + 3x^2y^2 - y^4"),
            ("Xe", 6, "++", None, "x^4 + x^2y^2 + ay^6"),
            ("Ze", 7, "+", None, "x^3y + y^6 + axy^5"),
        ],
    )
    def test_text(self, family, index, signs, modulus, expected):
        """Test the printed normal form."""
        assert normal_form(family, index, signs, modulus) == expected

    def test_no_normal_form(self):
        """Test that Unknown has no normal form."""
        with pytest.raises(UnknownLabel):
            normal_form("Unknown", None)


class TestVersalMonomials:
    """Tests for versal_monomials."""

    def test_a_family(self):
        """Test x, x² for A₃ in one variable."""
        assert versal_monomials("A", 3, 1) == [(1,), (2,)]

    def test_ae_family(self):
        """Test x², x⁴ for A_{e,3}."""
        assert versal_monomials("Ae", 3, 1) == [(2,), (4,)]

    def test_d_family(self):
        """Test x, x², y, y², y³ for D₆."""
        assert versal_monomials("D", 6, 2) == [(1, 0), (2, 0), (0, 1), (0, 2), (0, 3)]

    def test_xe5(self):
        """Test that X_{e,5} keeps x²y² and not x⁴."""
        assert versal_monomials("Xe", 5, 2) == [(2, 0), (1, 1), (0, 2), (2, 2)]

    def test_xe7_extra_powers(self):
        """Test x², xy, y², x⁴, y⁴, y⁶ for X_{e,7}."""
        assert versal_monomials("Xe", 7, 2) == [(2, 0), (1, 1), (0, 2), (4, 0), (0, 4), (0, 6)]

    def test_padding_with_extra_variables(self):
        """Test that exponents are padded to the variable count."""
        assert versal_monomials("A", 2, 3) == [(1, 0, 0)]

    def test_two_variable_class_in_one_variable(self):
        """Test that D needs two variables."""
        with pytest.raises(UnknownLabel):
            versal_monomials("D", 4, 1)


class TestTables:
    """Tests for table_rows."""

    def test_ordinary_and_even(self):
        """Test that the full table concatenates both parts."""
        ordinary = table_rows("ordinary")
        even = table_rows("even")

        assert [row.family for row in ordinary] == ["A", "D", "E6"]
        assert all(row.even for row in even)
        assert table_rows() == ordinary + even

    def test_row_dict(self):
        """Test the dictionary view of a row."""
        row = table_rows("ordinary")[0].to_dict()

        assert row["class"] == "A_k^±"
        assert row["even"] is False

    def test_unknown_table(self):
        """Test that an unknown table name is rejected."""
        with pytest.raises(ValueError):
            table_rows("odd")
