"""Tests for report formatters."""

import json
from unittest.mock import MagicMock

from germlab.models.formatters import (
    diagram_to_csv,
    format_classification,
    format_diagram,
    format_multiplicity,
    format_versality,
    get_json_schema,
    to_json,
)


class TestFormatReports:
    """Tests for the report dictionaries."""

    def test_format_classification(self, make_jet):
        """Test the label and jet sections."""
        # Setup
        label = MagicMock()
        label.to_dict.return_value = {"name": "A_3^+"}
        jet = make_jet("k1^4")

        # Execute
        report = format_classification(label, "k1^4", jet)

        # Verify
        assert report["expression"] == "k1^4"
        assert report["label"] == {"name": "A_3^+"}
        assert report["jet"] == {"nu": 1, "max_degree": 4, "mode": "exact", "parity": "general"}

    def test_format_classification_without_jet(self):
        """Test that the jet section is optional."""
        label = MagicMock()
        label.to_dict.return_value = {"name": "Regular"}

        report = format_classification(label)

        assert "jet" not in report
        assert report["expression"] is None

    def test_format_versality(self):
        """Test that the report dictionary is nested."""
        report = MagicMock()
        report.to_dict.return_value = {"verdict": "versal"}

        assert format_versality(report, "k1^3 + l1*k1") == {
            "expression": "k1^3 + l1*k1",
            "versality": {"verdict": "versal"},
        }

    def test_format_multiplicity_keys(self):
        """Test mu for general germs and mu_e for even germs."""
        basis = MagicMock()
        basis.to_dict.return_value = {}

        basis.parity = "general"
        assert format_multiplicity(3, basis)["mu"] == 3
        basis.parity = "even"
        assert format_multiplicity(3, basis)["mu_e"] == 3


class TestDiagramFormats:
    """Tests for diagram exports."""

    def test_csv_rows(self, sample_diagram):
        """Test the CSV header and the crossing row."""
        lines = diagram_to_csv(sample_diagram).splitlines()

        assert lines[0] == "lambda1,lambda2,label,k1,residual"
        assert lines[1] == "-0.75,0.5,A_2^+,-0.25,1e-12"

    def test_format_diagram(self, sample_diagram):
        """Test that the diagram dictionary is passed through."""
        assert format_diagram(sample_diagram) == sample_diagram.to_dict()


class TestJson:
    """Tests for JSON output."""

    def test_sorted_keys(self):
        """Test that keys are sorted and unicode is kept."""
        text = to_json({"b": 1, "a": "λ"})

        assert text.index('"a"') < text.index('"b"')
        assert "λ" in text
        assert json.loads(text) == {"a": "λ", "b": 1}

    def test_schema(self):
        """Test the main sections of the classification schema."""
        schema = get_json_schema()

        assert schema["type"] == "object"
        assert "Xe" in schema["properties"]["label"]["properties"]["family"]["enum"]
        assert schema["properties"]["label"]["required"] == [
            "name",
            "family",
            "parity",
            "confidence",
        ]
