"""Pytest configuration file."""

from unittest.mock import MagicMock, patch

import numpy as np
import pytest
import sympy

from germlab.models.caustic import CausticDiagram, Crossing, Region
from germlab.models.detect import morse_label
from germlab.models.jet import jet_from_expression
from germlab.utils.expr_parser import parse_expression


@pytest.fixture
def make_jet():
    """Build an exact jet from expression text in k1..k9."""

    def factory(text, parity="general", max_degree=None, mode="exact"):
        ast = parse_expression(text)
        variables = [sympy.Symbol(f"k{i + 1}") for i in range(ast.nu)]
        return jet_from_expression(ast.to_sympy(), variables, max_degree, parity, mode)

    return factory


@pytest.fixture
def sample_diagram():
    """A small two-parameter diagram with one fold crossing and two regions."""
    fold = morse_label("+")
    fold.family, fold.index = "A", 2
    crossing = Crossing(
        parameters=(-0.75, 0.5),
        location=(-0.25,),
        kind="plain",
        label=fold,
        residual=1e-12,
        edge=((0, 1), (1, 1)),
    )
    regions = [
        Region(0, ((), 0, 1), nodes=[(0, 0), (0, 1), (1, 0)], sample=(-1.0, -1.0)),
        Region(1, ((), 0, 3), nodes=[(1, 1)], sample=(-0.5, 1.0)),
    ]
    return CausticDiagram(
        family={
            "expression": "k1^4 + l1*k1^2 + l2*k1",
            "nu": 1,
            "nparams": 2,
            "parity": "general",
            "domain": "box",
        },
        axes=[np.array([-1.0, -0.5]), np.array([-1.0, 1.0])],
        crossings=[crossing],
        regions=regions,
        node_regions={(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1},
        diverged_seeds=0,
        unresolved_cells=[],
    )


@pytest.fixture
def mock_workbench():
    """Create a mock workbench for testing."""
    with patch("germlab.models.workbench.GermWorkbench") as mock_cls:
        workbench = MagicMock()
        mock_cls.return_value = workbench

        label = MagicMock()
        label.name = "D_5^+"
        label.family = "D"
        label.reason = ""
        label.mult = 5
        label.codim = 4
        label.normal_form = "x^2y + y^4"
        report = {
            "expression": "k1^2*k2 + k2^4",
            "label": {"name": "D_5^+", "family": "D", "mult": 5, "codim": 4},
        }
        workbench.classify_expression.return_value = (label, report)

        versality = MagicMock()
        versality.label = "A_3^+"
        versality.verdict = "versal"
        versality.rank = 2
        workbench.versality_expression.return_value = (
            versality,
            {"expression": "k1^4 + l1*k1 + l2*k1^2", "versality": {"verdict": "versal"}},
        )

        basis = MagicMock()
        basis.stabilized = True
        basis.dimension = 4
        workbench.multiplicity_expression.return_value = (
            5,
            basis,
            {"expression": "k1^4 + k2^4", "mu_e": 5, "basis": {"dimension": 4}},
        )

        workbench.catalogue.return_value = [
            {
                "family": "A",
                "class": "A_k^±",
                "normal_form": "±x^{k+1}",
                "restrictions": "k >= 1",
                "mult": "k",
                "codim": "k-1",
                "beta": "(k-1)/(2k+2)",
                "even": False,
            }
        ]
        workbench.reference_residuals.return_value = {
            "model": {"name": "Ae3"},
            "parameters": [-1.0, 0.0],
            "residuals": {"basic": 0.0, "twin": -1 / 3},
        }

        yield workbench
