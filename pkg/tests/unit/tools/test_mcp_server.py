"""Tests for MCP server setup."""

from unittest.mock import MagicMock, patch

import pytest

from germlab.models.errors import ExpressionSyntaxError, PreconditionViolated
from germlab.tools.mcp_server import setup_mcp_server


@pytest.fixture
def registered(mock_workbench):
    """Register the tools on a capturing FastMCP mock and return them by name."""
    tools = {}
    prompts = {}
    mock_mcp = MagicMock()
    mock_mcp.tool = lambda: lambda f: tools.setdefault(f.__name__, f)
    mock_mcp.prompt = lambda: lambda f: prompts.setdefault(f.__name__, f)

    with patch("germlab.tools.mcp_server.fastmcp.FastMCP", return_value=mock_mcp):
        setup_mcp_server(mock_workbench)

    return tools, prompts


@patch("germlab.tools.mcp_server.fastmcp.FastMCP")
def test_setup_mcp_server(mock_fastmcp):
    """Test setting up the MCP server."""
    # Mock FastMCP instance
    mock_mcp = MagicMock()
    mock_fastmcp.return_value = mock_mcp

    result = setup_mcp_server(MagicMock())

    # Verify
    mock_fastmcp.assert_called_once_with("Germ Classification")
    assert mock_mcp.tool.call_count == 6
    assert mock_mcp.prompt.call_count == 1
    assert result == mock_mcp


def test_mcp_tools_registered(registered):
    """Test that all expected MCP tools are registered."""
    tools, prompts = registered

    assert sorted(tools) == [
        "check_versality",
        "classify_germ",
        "list_catalogue",
        "local_multiplicity",
        "reference_caustic_residual",
        "trace_caustic",
    ]
    assert list(prompts) == ["analyze_germ"]


class TestClassifyGerm:
    """Tests for the classify_germ tool."""

    def test_json_report(self, registered, mock_workbench):
        """Test that JSON output returns the workbench report."""
        ctx = MagicMock()

        result = registered[0]["classify_germ"](ctx, "k1^2*k2 + k2^4", format_json=True)

        assert result["label"]["name"] == "D_5^+"
        mock_workbench.classify_expression.assert_called_once_with(
            "k1^2*k2 + k2^4", False, "exact", None
        )
        ctx.info.assert_any_call("Found D_5^+")

    @patch("germlab.tools.mcp_server.format_as_text")
    def test_text_report(self, mock_format, registered):
        """Test that text output goes through the report renderer."""
        mock_format.return_value = "### D_5^+"

        result = registered[0]["classify_germ"](MagicMock(), "k1^2*k2 + k2^4")

        assert result == "### D_5^+"

    def test_errors_become_messages(self, registered, mock_workbench):
        """Test that germlab errors are reported, not raised."""
        ctx = MagicMock()
        mock_workbench.classify_expression.side_effect = PreconditionViolated("no variables")

        assert registered[0]["classify_germ"](ctx, "1") == "Error: no variables"
        assert registered[0]["classify_germ"](ctx, "1", format_json=True) == {
            "error": "no variables"
        }
        ctx.warning.assert_called()

    def test_unknown_label_warns(self, registered, mock_workbench):
        """Test the warning for germs outside the catalogue."""
        ctx = MagicMock()
        label, report = mock_workbench.classify_expression.return_value
        label.family = "Unknown"
        label.reason = "corank 3"

        registered[0]["classify_germ"](ctx, "k1^3 + k2^3 + k3^3", format_json=True)

        ctx.warning.assert_called_once_with("Outside the catalogue: corank 3")


class TestOtherTools:
    """Tests for versality, multiplicity, caustic and catalogue tools."""

    def test_check_versality(self, registered, mock_workbench):
        """Test the versality payload."""
        ctx = MagicMock()

        result = registered[0]["check_versality"](ctx, "k1^4 + l1*k1 + l2*k1^2", format_json=True)

        assert result["versality"]["verdict"] == "versal"
        ctx.info.assert_any_call("A_3^+: versal (rank 2)")

    def test_local_multiplicity(self, registered, mock_workbench):
        """Test the multiplicity payload and arguments."""
        ctx = MagicMock()

        tool = registered[0]["local_multiplicity"]

        result = tool(ctx, "k1^4 + k2^4", even=True, format_json=True)

        assert result["mu_e"] == 5
        mock_workbench.multiplicity_expression.assert_called_once_with("k1^4 + k2^4", True, 24)
        ctx.warning.assert_not_called()

    def test_multiplicity_not_stabilized(self, registered, mock_workbench):
        """Test the warning when the dimension keeps growing."""
        ctx = MagicMock()
        mock_workbench.multiplicity_expression.return_value[1].stabilized = False

        registered[0]["local_multiplicity"](ctx, "k1^2*k2", max_degree=8, format_json=True)

        ctx.warning.assert_called_once_with("Dimension did not stabilize up to degree 8")

    def test_trace_caustic(self, registered, mock_workbench, sample_diagram):
        """Test that the box text is parsed and the diagram returned."""
        mock_workbench.caustic_expression.return_value = sample_diagram

        result = registered[0]["trace_caustic"](
            MagicMock(), "k1^4 + l1*k1^2 + l2*k1", "-1:-0.5,-1:1", format_json=True
        )

        assert result["labels"] == ["A_2^+"]
        mock_workbench.caustic_expression.assert_called_once_with(
            "k1^4 + l1*k1^2 + l2*k1", False, ((-1.0, -0.5), (-1.0, 1.0)), 60, False
        )

    def test_trace_caustic_bad_box(self, registered, mock_workbench):
        """Test that a malformed box is reported."""
        result = registered[0]["trace_caustic"](MagicMock(), "k1^4 + l1*k1^2", "1:0")

        assert result.startswith("Error:")
        mock_workbench.caustic_expression.assert_not_called()

    def test_list_catalogue(self, registered, mock_workbench):
        """Test Markdown and JSON catalogue output."""
        text = registered[0]["list_catalogue"](MagicMock())
        rows = registered[0]["list_catalogue"](MagicMock(), format_json=True)

        assert "| A_k^± |" in text
        assert rows[0]["family"] == "A"

    def test_list_catalogue_unknown_table(self, registered, mock_workbench):
        """Test that an unknown table name is reported."""
        mock_workbench.catalogue.side_effect = ValueError("unknown table 'odd'")

        assert registered[0]["list_catalogue"](MagicMock(), "odd") == "Error: unknown table 'odd'"

    def test_reference_residual(self, registered, mock_workbench):
        """Test the residual payload."""
        result = registered[0]["reference_caustic_residual"](MagicMock(), "Ae3", [-1.0, 0.0])

        assert result["residuals"]["basic"] == 0.0
        mock_workbench.reference_residuals.assert_called_once_with("Ae3", [-1.0, 0.0], "++", 0.0)


class TestAnalyzeGerm:
    """Tests for the analyze_germ prompt."""

    def test_prompt_text(self, registered):
        """Test that the prompt names the class and the canonical expression."""
        prompt = registered[1]["analyze_germ"](MagicMock(), "k1^2*k2+k2^4")

        assert "f = k1^2*k2 + k2^4" in prompt
        assert "D_5^+ with normal form x^2y + y^4, multiplicity 5 and codimension 4" in prompt

    def test_prompt_after_failure(self, registered, mock_workbench):
        """Test that a classification failure still yields a prompt."""
        mock_workbench.classify_expression.side_effect = PreconditionViolated("flat germ")

        prompt = registered[1]["analyze_germ"](MagicMock(), "k1^2", even=True)

        assert "unclassified (flat germ)" in prompt
        assert "even (invariant under k -> -k)" in prompt

    def test_prompt_rejects_bad_text(self, registered):
        """Test that malformed expressions raise a syntax error."""
        with pytest.raises(ExpressionSyntaxError):
            registered[1]["analyze_germ"](MagicMock(), "k1 +")
