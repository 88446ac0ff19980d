"""Expression-level entry points shared by the CLI and the MCP server."""

import sys

import numpy as np
import sympy

from germlab.models.catalogue import table_rows
from germlab.models.caustic import CausticSweeper, FamilySpec
from germlab.models.deformation import deformation_from_expression
from germlab.models.detect import classify
from germlab.models.errors import InsufficientJet, PreconditionViolated
from germlab.models.formatters import (
    format_classification,
    format_multiplicity,
    format_versality,
)
from germlab.models.jet import finite_difference_jet, jet_from_expression
from germlab.models.localalg import DEFAULT_DEGREE_CAP, multiplicity
from germlab.models.reference_caustics import reference_model
from germlab.models.versal import versality_check
from germlab.utils.expr_parser import ExprAst, parse_expression
from germlab.utils.settings import DEFAULT_TOLERANCES


def _ast(expression):
    if isinstance(expression, ExprAst):
        return expression
    return parse_expression(expression)


def _symbols(prefix, count):
    return [sympy.Symbol(f"{prefix}{i + 1}") for i in range(count)]


class GermWorkbench:
    """Builds jets and families from expressions and runs the analyses."""

    def __init__(self, quiet=False, tolerances=DEFAULT_TOLERANCES) -> None:
        self.quiet = quiet
        self.tolerances = tolerances

    def _log(self, message):
        if not self.quiet:
            print(message, file=sys.stderr)

    def germ_jet(self, expression, even=False, mode="exact", max_degree=None, step=None):
        """Jet at the origin of a parameter-free expression."""
        ast = _ast(expression)
        if ast.parameters:
            raise PreconditionViolated(
                f"germ expressions take no parameters, found {', '.join(ast.parameters)}"
            )
        if ast.nu == 0:
            raise PreconditionViolated("the expression has no variables k1..k9")
        parity = "even" if even else "general"
        expr = ast.to_sympy()
        variables = _symbols("k", ast.nu)
        if step is not None or (mode == "float" and not expr.is_polynomial(*variables)):
            if max_degree is None:
                raise InsufficientJet("evaluator input needs --max-degree")
            evaluate = sympy.lambdify(variables, expr, "numpy")
            self._log(f"Building a degree {max_degree} jet by finite differences")
            return finite_difference_jet(
                lambda point: evaluate(*np.asarray(point, dtype=float)),
                ast.nu,
                max_degree,
                step or 1e-2,
                parity,
            )
        return jet_from_expression(expr, variables, max_degree, parity, mode)

    def deformation(self, expression, even=False, mode="exact", max_degree=None):
        """DeformationJet of a family expression in k1..kν and l1..ll."""
        ast = _ast(expression)
        if ast.nparams == 0:
            raise PreconditionViolated("a deformation needs parameters l1..l9")
        expr = ast.to_sympy()
        variables = _symbols("k", ast.nu)
        parameters = _symbols("l", ast.nparams)
        if max_degree is None and expr.is_polynomial(*variables):
            degree = sympy.Poly(expr, *variables).total_degree()
            # one degree beyond the polynomial keeps every test inside the jet
            max_degree = max(degree, 2) + 1
        parity = "even" if even else "general"
        return deformation_from_expression(expr, variables, parameters, max_degree, parity, mode)

    def classify_expression(
        self,
        expression,
        even=False,
        mode="exact",
        max_degree=None,
        tol=None,
        mu_max=None,
        step=None,
    ):
        ast = _ast(expression)
        jet = self.germ_jet(ast, even, mode, max_degree, step)
        label = classify(jet, mu_max=mu_max, tol=tol, tolerances=self.tolerances)
        return label, format_classification(label, ast.to_text(), jet)

    def versality_expression(self, expression, even=False, mode="exact", max_degree=None):
        ast = _ast(expression)
        defjet = self.deformation(ast, even, mode, max_degree)
        report = versality_check(defjet, tolerances=self.tolerances)
        return report, format_versality(report, ast.to_text())

    def multiplicity_expression(
        self, expression, even=False, max_degree=DEFAULT_DEGREE_CAP, strict=False
    ):
        ast = _ast(expression)
        jet = self.germ_jet(ast, even, "exact")
        mult, basis = multiplicity(jet, max_degree=max_degree, strict=strict)
        return mult, basis, format_multiplicity(mult, basis, ast.to_text())

    def family(
        self, expression, even=False, box=None, grid=None, torus=False, seeds=None, seed=0
    ):
        ast = _ast(expression)
        return FamilySpec.from_expression(
            ast,
            parity="even" if even else "general",
            domain="torus" if torus else "box",
            parameter_box=box,
            grid=grid,
            seeds=seeds,
            seed=seed,
        )

    def caustic_expression(
        self,
        expression,
        even=False,
        box=None,
        grid=None,
        torus=False,
        seeds=None,
        workers=None,
        seed=0,
    ):
        family = self.family(expression, even, box, grid, torus, seeds, seed)
        sweeper = CausticSweeper(
            family, quiet=self.quiet, tolerances=self.tolerances, max_workers=workers
        )
        return sweeper.sweep()

    def reference_residuals(self, model, parameters, signs="++", a=0):
        reference = reference_model(model, signs, a)
        return {
            "model": reference.to_dict(),
            "parameters": [float(v) for v in parameters],
            "residuals": reference.residuals(parameters),
        }

    def catalogue(self, which="all"):
        return [row.to_dict() for row in table_rows(which)]
