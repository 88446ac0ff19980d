"""Command-line interface for germ classification, versality and caustic sweeps."""

import argparse
import importlib.metadata
import os
import sys

from germlab.models.errors import GermlabError, PreconditionViolated
from germlab.models.formatters import (
    diagram_to_csv,
    format_diagram,
    get_json_schema,
    to_json,
)
from germlab.models.reference_caustics import check_crossings, reference_model
from germlab.models.workbench import GermWorkbench
from germlab.renderers.diagram_svg import DiagramSvgRenderer
from germlab.renderers.report import format_as_text
from germlab.renderers.tables import CatalogueTableRenderer
from germlab.tools.mcp_server import setup_mcp_server
from germlab.utils.arguments import parse_box, parse_mode, parse_positive_int, parse_tolerance
from germlab.utils.expr_parser import expression_arg
from germlab.utils.settings import DEFAULT_TOLERANCES

# Get version from package metadata
try:
    __version__ = importlib.metadata.version("germlab")
except importlib.metadata.PackageNotFoundError:
    __version__ = "unknown"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2


def setup_common_parser(parser, formats=("json", "text")):
    """Setup common arguments for parsers."""
    parser.add_argument("--expr", type=expression_arg, help="Expression in k1..k9 (and l1..l9)")
    parser.add_argument(
        "--even", action="store_true", help="Treat the function as even (invariant under k -> -k)"
    )
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=formats,
        default="json",
        help=f"Output format ({', '.join(formats)}; default: json)",
    )
    parser.add_argument("--out", help="Write the result to this file instead of stdout")
    parser.add_argument("--quiet", action="store_true", help="Suppress progress messages")
    return parser


def setup_jet_parser(parser):
    """Setup arguments controlling jet construction."""
    parser.add_argument(
        "--mode", type=parse_mode, default="exact", help="Arithmetic: exact or float"
    )
    parser.add_argument(
        "--max-degree",
        type=parse_positive_int,
        help="Jet degree (defaults to the polynomial degree)",
    )
    parser.add_argument("--tol", type=parse_tolerance, help="Zero tolerance for float mode")
    return parser


def emit(args, payload, text=None):
    """Write a payload as JSON or text to stdout or --out."""
    if args.output_format == "json":
        output = to_json(payload)
    elif text is not None:
        output = text
    else:
        output = format_as_text(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(output)
            if not output.endswith("\n"):
                handle.write("\n")
    else:
        print(output)


def _require_expression(args):
    if args.expr is None:
        raise PreconditionViolated("--expr is required")
    return args.expr


def cmd_classify(args, workbench) -> int:
    """Command handler for 'classify' subcommand."""
    label, report = workbench.classify_expression(
        _require_expression(args),
        even=args.even,
        mode=args.mode,
        max_degree=args.max_degree,
        tol=args.tol,
        mu_max=args.mu_max,
        step=args.step,
    )
    emit(args, report)
    return EXIT_UNKNOWN if label.family == "Unknown" else EXIT_OK


def cmd_versal(args, workbench) -> int:
    """Command handler for 'versal' subcommand."""
    _, payload = workbench.versality_expression(
        _require_expression(args),
        even=args.even,
        mode=args.mode,
        max_degree=args.max_degree,
    )
    emit(args, payload)
    return EXIT_OK


def cmd_mult(args, workbench) -> int:
    """Command handler for 'mult' subcommand."""
    _, _, payload = workbench.multiplicity_expression(
        _require_expression(args),
        even=args.even,
        max_degree=args.max_degree,
        strict=args.strict,
    )
    emit(args, payload)
    return EXIT_OK


def cmd_caustic(args, workbench) -> int:
    """Command handler for 'caustic' subcommand."""
    model = None
    expression = args.expr
    even = args.even
    if args.reference:
        model = reference_model(args.reference, args.signs, args.modulus)
        if expression is None:
            expression = model.expression
            even = model.parity == "even"
    if expression is None:
        raise PreconditionViolated("--expr or --reference is required")

    diagram = workbench.caustic_expression(
        expression,
        even=even,
        box=args.box,
        grid=args.grid,
        torus=args.torus,
        seeds=args.seeds,
        seed=args.seed,
    )
    payload = format_diagram(diagram)
    if model is not None:
        payload["reference"] = {
            "model": model.to_dict(),
            "crossings": check_crossings(model, diagram.crossings),
        }

    if args.output_format == "csv":
        emit(args, payload, diagram_to_csv(diagram))
    elif args.output_format == "svg":
        emit(args, payload, DiagramSvgRenderer(diagram).generate())
    else:
        emit(args, payload)
    return EXIT_OK


def cmd_tables(args, workbench) -> int:
    """Command handler for 'tables' subcommand."""
    rows = workbench.catalogue(args.table)
    if args.output_format == "json":
        emit(args, {"rows": rows})
    else:
        emit(args, {"rows": rows}, CatalogueTableRenderer(rows).generate())
    return EXIT_OK


def cmd_schema(args, workbench) -> int:
    """Command handler for 'schema' subcommand."""
    print(to_json(get_json_schema()))
    return EXIT_OK


def cmd_version(args, workbench) -> int:
    """Command handler for 'version' subcommand."""
    print(f"germlab version {__version__}")
    return EXIT_OK


def cmd_mcp(args, workbench, quiet=False) -> int:
    """Command handler for 'mcp' subcommand."""
    # Set up and run the MCP server using stdio
    mcp = setup_mcp_server(workbench)
    if not quiet:
        print("Starting MCP server using stdin/stdout...", file=sys.stderr)
        print("Connect an MCP client to this process", file=sys.stderr)
    mcp.run("stdio")
    return EXIT_OK


def report_error(args, error) -> int:
    """Map a library error to output and exit code 1."""
    if getattr(args, "output_format", "json") == "json":
        print(to_json({"error": str(error), "type": type(error).__name__}))
    else:
        print(f"Error: {error!s}", file=sys.stderr)
    return EXIT_ERROR


def build_parser():
    """Create the argument parser with every subcommand."""
    parser = argparse.ArgumentParser(
        description=f"Critical point classification and caustics (v{__version__})",
        epilog=f"germlab version {__version__}",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    # Create subparsers
    subparsers = parser.add_subparsers(
        title="commands", description="valid subcommands", dest="command", help="command to execute"
    )

    # 'classify' subcommand
    classify_parser = subparsers.add_parser("classify", help="Classify a critical point")
    classify_parser = setup_jet_parser(setup_common_parser(classify_parser))
    classify_parser.add_argument(
        "--mu-max", type=parse_positive_int, help="Largest index to search for"
    )
    classify_parser.add_argument(
        "--step", type=float, help="Finite-difference step (evaluates the expression numerically)"
    )
    classify_parser.set_defaults(func=cmd_classify)

    # 'versal' subcommand
    versal_parser = subparsers.add_parser("versal", help="Check versality of a family")
    versal_parser = setup_jet_parser(setup_common_parser(versal_parser))
    versal_parser.set_defaults(func=cmd_versal)

    # 'mult' subcommand
    mult_parser = subparsers.add_parser("mult", help="Compute the (even) multiplicity")
    mult_parser = setup_common_parser(mult_parser)
    mult_parser.add_argument(
        "--max-degree",
        type=parse_positive_int,
        default=24,
        help="Largest truncation degree (default: 24)",
    )
    mult_parser.add_argument(
        "--strict", action="store_true", help="Fail when the dimension does not stabilize"
    )
    mult_parser.set_defaults(func=cmd_mult)

    # 'caustic' subcommand
    caustic_parser = subparsers.add_parser("caustic", help="Sweep a family for its caustic")
    caustic_parser = setup_common_parser(caustic_parser, formats=("json", "csv", "svg", "text"))
    caustic_parser.add_argument(
        "--box", type=parse_box, help="Parameter box lo:hi,lo:hi (lo == hi fixes a parameter)"
    )
    caustic_parser.add_argument(
        "--grid", type=parse_positive_int, help="Grid points per parameter axis"
    )
    caustic_parser.add_argument(
        "--seeds", type=parse_positive_int, help="Newton seeds per variable axis"
    )
    caustic_parser.add_argument("--torus", action="store_true", help="Sweep on the torus")
    caustic_parser.add_argument(
        "--reference", help="Compare with a model caustic: A3, Ae3, Ae4 or Xe5"
    )
    caustic_parser.add_argument("--signs", default="++", help="Sign data of the Xe5 model")
    caustic_parser.add_argument("--modulus", default="0", help="Modulus a of the Xe5 model")
    caustic_parser.add_argument(
        "--seed", type=int, default=0, help="Seed for the randomized parity check"
    )
    caustic_parser.set_defaults(func=cmd_caustic)

    # 'tables' subcommand
    tables_parser = subparsers.add_parser("tables", help="Print the classification tables")
    tables_parser.add_argument(
        "--table", choices=("ordinary", "even", "all"), default="all", help="Which table"
    )
    tables_parser.add_argument(
        "--format",
        dest="output_format",
        choices=("json", "text"),
        default="text",
        help="Output format (json, text; default: text)",
    )
    tables_parser.add_argument("--out", help="Write the result to this file instead of stdout")
    tables_parser.set_defaults(func=cmd_tables)

    # 'schema' subcommand
    schema_parser = subparsers.add_parser(
        "schema", help="Show the JSON schema of the classification report"
    )
    schema_parser.set_defaults(func=cmd_schema)

    # 'version' subcommand
    version_parser = subparsers.add_parser("version", help="Show version information")
    version_parser.set_defaults(func=cmd_version)

    # 'mcp' subcommand
    mcp_parser = subparsers.add_parser("mcp", help="Run as an MCP server")
    mcp_parser.set_defaults(func=cmd_mcp)
    return parser


def main() -> None:
    """Main function: parse arguments and run a subcommand."""
    # Check which command was used to invoke the script
    program_name = os.path.basename(sys.argv[0])
    mcp_default = program_name == "germlab-mcp"

    parser = build_parser()

    # Parse arguments
    args = parser.parse_args()

    # Get quiet flag for mcp
    quiet = (mcp_default and not hasattr(args, "func")) or getattr(args, "quiet", False)

    # Create the workbench with quiet flag for MCP mode
    tolerances = DEFAULT_TOLERANCES.with_overrides(zero=getattr(args, "tol", None))
    workbench = GermWorkbench(quiet=quiet, tolerances=tolerances)

    # If no command is provided, check which tool was used
    if not hasattr(args, "func"):
        if mcp_default:
            # Run MCP in quiet mode
            cmd_mcp(args, workbench, quiet=True)
        else:
            parser.print_help()
        return

    # Call the appropriate function with arguments
    try:
        code = args.func(args, workbench)
    except (GermlabError, ValueError) as e:
        code = report_error(args, e)
    if code:
        sys.exit(code)


if __name__ == "__main__":
    main()
