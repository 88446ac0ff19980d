"""MCP server for germ classification, versality and caustic sweeps."""

import fastmcp

from germlab.models.errors import GermlabError
from germlab.models.formatters import format_diagram
from germlab.renderers.report import format_as_text
from germlab.renderers.tables import CatalogueTableRenderer
from germlab.utils.arguments import box_from_text
from germlab.utils.expr_parser import parse_expression


def setup_mcp_server(workbench):
    """Set up the MCP server on top of a GermWorkbench."""
    mcp = fastmcp.FastMCP("Germ Classification")

    @mcp.tool()
    def classify_germ(
        ctx: fastmcp.Context,
        expression: str,
        even: bool = False,
        mode: str = "exact",
        max_degree: int | None = None,
        format_json: bool = False,
    ):
        """
        Classify the critical point at the origin of a polynomial germ.

        Args:
            ctx: Context object for the MCP request
            expression: Polynomial in k1..k9, e.g. "k1^4 + 3*k1^2*k2^2 + k2^4"
            even: Treat the germ as even (invariant under k -> -k)
            mode: "exact" for rational arithmetic or "float"
            max_degree: Jet degree (defaults to the polynomial degree)
            format_json: Whether to output in JSON format (default: False, outputs text)

        Returns:
            The classification report (if format_json=True) or a text summary.
        """
        ctx.info(f"Classifying {expression} ({'even' if even else 'general'} germ, {mode} mode)")
        try:
            label, report = workbench.classify_expression(expression, even, mode, max_degree)
        except GermlabError as e:
            ctx.warning(f"Classification failed: {e!s}")
            return {"error": str(e)} if format_json else f"Error: {e!s}"

        ctx.info(f"Found {label.name}")
        if label.family == "Unknown":
            ctx.warning(f"Outside the catalogue: {label.reason}")

        if format_json:
            return report
        else:
            return format_as_text(report)

    @mcp.tool()
    def check_versality(
        ctx: fastmcp.Context,
        expression: str,
        even: bool = False,
        max_degree: int | None = None,
        format_json: bool = False,
    ):
        """
        Decide whether a family F(k, l) is a versal deformation of F(k, 0).

        Args:
            ctx: Context object for the MCP request
            expression: Family in k1..k9 and parameters l1..l9, e.g. "k1^4 + l1*k1^2 + l2*k1"
            even: Treat the family as even in k
            max_degree: Jet degree (defaults to one above the polynomial degree)
            format_json: Whether to output in JSON format (default: False, outputs text)

        Returns:
            The versality report (if format_json=True) or a text summary.
        """
        ctx.info(f"Checking versality of {expression}")
        try:
            report, payload = workbench.versality_expression(expression, even, "exact", max_degree)
        except GermlabError as e:
            ctx.warning(f"Versality check failed: {e!s}")
            return {"error": str(e)} if format_json else f"Error: {e!s}"

        ctx.info(f"{report.label}: {report.verdict} (rank {report.rank})")

        if format_json:
            return payload
        else:
            return format_as_text(payload)

    @mcp.tool()
    def local_multiplicity(
        ctx: fastmcp.Context,
        expression: str,
        even: bool = False,
        max_degree: int = 24,
        format_json: bool = False,
    ):
        """
        Compute the (even) multiplicity of a polynomial germ with zero linear part.

        Args:
            ctx: Context object for the MCP request
            expression: Polynomial in k1..k9
            even: Compute the even multiplicity
            max_degree: Largest truncation degree to try
            format_json: Whether to output in JSON format (default: False, outputs text)

        Returns:
            The multiplicity and quotient basis (if format_json=True) or a text summary.
        """
        ctx.info(f"Computing the {'even ' if even else ''}multiplicity of {expression}")
        try:
            mult, basis, payload = workbench.multiplicity_expression(expression, even, max_degree)
        except GermlabError as e:
            ctx.warning(f"Multiplicity failed: {e!s}")
            return {"error": str(e)} if format_json else f"Error: {e!s}"

        if not basis.stabilized:
            ctx.warning(f"Dimension did not stabilize up to degree {max_degree}")
        ctx.info(f"Multiplicity {mult} from a quotient of dimension {basis.dimension}")

        if format_json:
            return payload
        else:
            return format_as_text(payload)

    @mcp.tool()
    def trace_caustic(
        ctx: fastmcp.Context,
        expression: str,
        box: str,
        even: bool = False,
        grid: int = 60,
        torus: bool = False,
        format_json: bool = False,
    ):
        """
        Sweep a family over a parameter box and locate its caustic.

        Args:
            ctx: Context object for the MCP request
            expression: Family in k1..k9 and l1..l3, e.g. "k1^6 + l1*k1^4 + l2*k1^2"
            box: Parameter intervals "lo:hi,lo:hi" (one per parameter; lo == hi fixes it)
            even: Treat the family as even in k
            grid: Grid points per parameter axis
            torus: Sweep on the torus instead of a box in R^n
            format_json: Whether to output in JSON format (default: False, outputs text)

        Returns:
            The caustic diagram (if format_json=True) or a text summary with the region census.
        """
        ctx.info(f"Sweeping {expression} over {box} with {grid} points per axis")
        try:
            diagram = workbench.caustic_expression(
                expression, even, box_from_text(box), grid, torus
            )
        except (GermlabError, ValueError) as e:
            ctx.warning(f"Sweep failed: {e!s}")
            return {"error": str(e)} if format_json else f"Error: {e!s}"

        ctx.info(f"Found {len(diagram.crossings)} crossings in {len(diagram.regions)} regions")
        if diagram.unresolved_cells:
            ctx.warning(f"{len(diagram.unresolved_cells)} cells could not be resolved")

        payload = format_diagram(diagram)
        if format_json:
            return payload
        else:
            return format_as_text(payload)

    @mcp.tool()
    def list_catalogue(ctx: fastmcp.Context, table: str = "all", format_json: bool = False):
        """
        List the singularity classes of typical (even) families.

        Args:
            ctx: Context object for the MCP request
            table: "ordinary", "even" or "all"
            format_json: Whether to output in JSON format (default: False, outputs markdown)

        Returns:
            Catalogue rows (if format_json=True) or Markdown tables.
        """
        ctx.info(f"Listing the {table} catalogue")
        try:
            rows = workbench.catalogue(table)
        except ValueError as e:
            ctx.warning(str(e))
            return {"error": str(e)} if format_json else f"Error: {e!s}"

        ctx.info(f"Found {len(rows)} catalogue rows")

        if format_json:
            return rows
        else:
            renderer = CatalogueTableRenderer(rows)
            return renderer.generate()

    @mcp.tool()
    def reference_caustic_residual(
        ctx: fastmcp.Context,
        model: str,
        parameters: list[float],
        signs: str = "++",
        modulus: float = 0.0,
    ):
        """
        Evaluate the closed-form caustic equations of a model family at a parameter point.

        Args:
            ctx: Context object for the MCP request
            model: One of "A3", "Ae3", "Ae4", "Xe5"
            parameters: Parameter values (l1, l2, ...)
            signs: Sign data of the X_e,5 model ("++", "+-", "--")
            modulus: Modulus a of the X_e,5 model

        Returns:
            The model description and a residual for every branch whose domain contains the point
        """
        ctx.info(f"Evaluating the {model} caustic at {parameters}")
        try:
            result = workbench.reference_residuals(model, parameters, signs, modulus)
        except (GermlabError, ValueError) as e:
            ctx.warning(f"Residual evaluation failed: {e!s}")
            return {"error": str(e)}

        ctx.info(f"{len(result['residuals'])} branches apply at this point")
        return result

    @mcp.prompt()
    def analyze_germ(ctx: fastmcp.Context, expression: str, even: bool = False) -> str:
        """
        Create a prompt for discussing the singularity of a germ.

        Args:
            ctx: Context object for the MCP request
            expression: Polynomial in k1..k9
            even: Treat the germ as even

        Returns:
            A prompt string
        """
        ctx.info(f"Generating analysis prompt for {expression}")

        text = parse_expression(expression).to_text()
        try:
            label, _ = workbench.classify_expression(text, even)
            summary = f"{label.name} with normal form {label.normal_form or 'unknown'}"
            if label.mult is not None:
                summary += f", multiplicity {label.mult} and codimension {label.codim}"
        except GermlabError as e:
            ctx.warning(f"Classification failed: {e!s}")
            summary = f"unclassified ({e!s})"

        ctx.info("Generated analysis prompt successfully")
        return f"""
Please help me understand the critical point of f = {text} at the origin.

The classifier reports: {summary}.
The germ is treated as {"even (invariant under k -> -k)" if even else "a general smooth function"}.

What does a versal deformation of this singularity look like, and which caustics
appear in typical families with few parameters?
"""

    return mcp
