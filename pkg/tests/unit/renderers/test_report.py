"""Tests for the text report renderer."""

from unittest.mock import patch

from jinja2 import Environment

from germlab.models.formatters import format_diagram
from germlab.models.workbench import GermWorkbench
from germlab.renderers.report import ReportTemplateRenderer, format_as_text


class TestReportTemplateRenderer:
    """Tests for the ReportTemplateRenderer class."""

    def test_init(self):
        """Test initialization of renderer."""
        renderer = ReportTemplateRenderer({})

        assert isinstance(renderer.env, Environment)
        assert "format_point" in renderer.env.globals
        assert "format_census" in renderer.env.globals
        assert renderer.template is not None

    def test_format_point(self):
        """Test point formatting."""
        assert ReportTemplateRenderer.format_point([0.5, -1, 1 / 3]) == "(0.5, -1, 0.3333)"

    def test_format_census(self):
        """Test census text for each kind of point."""
        region = {"basic": {"A_{e,1}^+": 1}, "twin_pairs": 2, "plain": 0}

        assert ReportTemplateRenderer.format_census(region) == "1 basic A_{e,1}^+, 2 twin pairs"
        assert (
            ReportTemplateRenderer.format_census({"basic": {}, "twin_pairs": 0, "plain": 0})
            == "no critical points"
        )

    def test_classification_report(self):
        """Test the label section."""
        _, report = GermWorkbench(quiet=True).classify_expression("k1^2*k2 + k2^4")

        text = format_as_text(report)

        assert text.startswith("### D_5^+")
        assert "- Normal form: `x^2y + y^4`" in text
        assert "Multiplicity 5, codimension 4" in text

    def test_versality_report(self):
        """Test the versality section with its vectors."""
        _, report = GermWorkbench(quiet=True).versality_expression("k1^4 + l1*k1 + l2*k1^2")

        text = format_as_text(report)

        assert "### Versality of A_3^+: versal" in text
        assert "- Minimal number of parameters: 2" in text

    def test_multiplicity_report(self):
        """Test the μ_e heading and the quotient basis."""
        _, _, report = GermWorkbench(quiet=True).multiplicity_expression("k1^6", even=True)

        text = format_as_text(report)

        assert text.startswith("### mu_e = 3")
        assert "stabilized" in text

    def test_diagram_report(self, sample_diagram):
        """Test the sweep summary and region lines."""
        text = format_as_text(format_diagram(sample_diagram))

        assert "### Caustic sweep of `k1^4 + l1*k1^2 + l2*k1`" in text
        assert "- Crossings: 1 (A_2^+)" in text
        assert "- Region 1 (1 nodes, sample (-0.5, 1)): 3 critical points" in text

    def test_error_report(self):
        """Test that an error message is shown on its own."""
        assert format_as_text({"error": "bad input"}) == "Error: bad input"

    @patch("germlab.renderers.report.Environment")
    def test_render_failure(self, mock_env_cls, capsys):
        """Test that template errors are reported instead of raised."""
        mock_env_cls.return_value.from_string.return_value.render.side_effect = ValueError("boom")

        text = ReportTemplateRenderer({}).generate()

        assert text == "Error rendering report: boom"
        assert "boom" in capsys.readouterr().err
