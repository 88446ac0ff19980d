"""Tests for the closed-form model caustics."""

import pytest

from germlab.models.errors import UnknownLabel
from germlab.models.reference_caustics import (
    ae4_twin_point,
    check_crossings,
    chosen_cone_elements,
    cuspidal_edges,
    reference_model,
    xe5_model,
)


class TestOneVariableModels:
    """Tests for the A3, Ae3 and Ae4 models."""

    def test_a3_fold_point(self):
        """Test that (-3/2, 1) lies on the fold curve."""
        model = reference_model("A3")

        assert model.residuals((-1.5, 1.0))["fold"] == pytest.approx(0.0, abs=1e-12)

    def test_a3_fold_domain(self):
        """Test that the fold only exists for λ₁ <= 0."""
        assert reference_model("A3").residuals((0.5, 0.0)) == {}

    def test_ae3_branches(self):
        """Test the basic line and the twin parabola at (-3, 3)."""
        residuals = reference_model("Ae3").residuals((-3.0, 3.0))

        assert residuals["basic"] == 3.0
        assert residuals["twin"] == pytest.approx(0.0, abs=1e-12)

    def test_ae3_twin_needs_negative_l1(self):
        """Test that the twin branch is absent for λ₁ > 0."""
        assert "twin" not in reference_model("Ae3").residuals((1.0, 0.5))

    @pytest.mark.parametrize(
        "s,l1,point",
        [
            (1, 0, (0, -6, 8)),
            (0.5, -1, (-1, 0, 0.25)),
        ],
    )
    def test_ae4_twin_points_lie_on_upper_sheet(self, s, l1, point):
        """Test that degenerate twin points satisfy the twin+ equation."""
        lam = ae4_twin_point(s, l1)

        residuals = reference_model("Ae4").residuals(lam)

        # Verify
        assert lam == pytest.approx(point)
        assert residuals["twin+"] == pytest.approx(0.0, abs=1e-12)
        assert "twin-" not in residuals

    def test_parameter_count(self):
        """Test that the parameter vector length is checked."""
        with pytest.raises(ValueError):
            reference_model("Ae4").residuals((0.0, 0.0))


class TestXe5Model:
    """Tests for the X_{e,5} model."""

    def test_expression(self):
        """Test the family text for each sign choice."""
        assert xe5_model("+-", 3).expression == (
            "k1^4 + 3*k1^2*k2^2 - k2^4 + l1*k1^2 + l2*k1*k2 + l3*k2^2"
        )
        assert xe5_model("--", -1).expression.startswith("-k1^4 - 1*k1^2*k2^2 - k2^4")

    @pytest.mark.parametrize(
        "signs,a,count",
        [("++", -3, 2), ("+-", 0, 1), ("++", 0, 0), ("--", 3, 2), ("--", 1, 0)],
    )
    def test_chosen_cone_elements(self, signs, a, count):
        """Test how many cone generators carry A_{e,3} basic points."""
        assert len(chosen_cone_elements(signs, a)) == count

    def test_chosen_elements_lie_on_cone(self):
        """Test that a point of a chosen generator has zero residual."""
        model = xe5_model("+-", 0)
        # r = 1: the generator l1 = l3, l2² = 4 l1 l3
        residual = model.branch("chosen1").evaluate((1.0, 2.0, 1.0))

        assert residual == pytest.approx(0.0, abs=1e-12)

    def test_cuspidal_edges(self):
        """Test the edge rays of each sign choice."""
        assert len(cuspidal_edges("++", 0)) == 4
        assert len(cuspidal_edges("+-", 0)) == 2
        assert cuspidal_edges("--", 0) == ()

    def test_edge_ray_distance(self):
        """Test the distance to the ray along -λ₁."""
        edge = cuspidal_edges("++", 0)[0]

        assert edge.applies((-2.0, 0.0, 0.5))
        assert edge.evaluate((-2.0, 0.0, 0.5)) == pytest.approx(0.5)
        assert not edge.applies((2.0, 0.0, 0.0))

    def test_gamma_surface(self):
        """Test a point of the twin surface of x⁴ + y⁴."""
        model = xe5_model("++", 0)

        assert model.residuals((-1.0, 1.0, -1.0))["gamma"] == pytest.approx(0.0, abs=1e-12)

    def test_notes(self):
        """Test that a nonzero modulus is flagged."""
        assert xe5_model("++", 0).notes == ()
        assert len(xe5_model("++", 1).notes) == 2

    def test_invalid_signs(self):
        """Test that sign data is validated."""
        with pytest.raises(UnknownLabel):
            xe5_model("-+")

    def test_to_dict(self):
        """Test the dictionary view."""
        payload = reference_model("Xe5+-", a=3).to_dict()

        assert payload["name"] == "Xe5+-"
        assert payload["modulus"] == "3"
        assert payload["branches"][0]["name"] == "cone"


class TestLookup:
    """Tests for reference_model and check_crossings."""

    def test_unknown_model(self):
        """Test that unknown names are rejected."""
        with pytest.raises(UnknownLabel):
            reference_model("B2")

    def test_nearest_branch_respects_kinds(self):
        """Test that only branches of the requested kind are compared."""
        model = reference_model("Ae3")

        assert model.nearest_branch((-1.0, 0.2), ("basic",)) == ("basic", pytest.approx(0.2))

    def test_check_crossings(self, sample_diagram):
        """Test one row per crossing with the fold residual."""
        rows = check_crossings(reference_model("A3"), sample_diagram.crossings)

        assert len(rows) == 1
        assert rows[0]["branch"] == "fold"
        assert rows[0]["label"] == "A_2^+"
        assert rows[0]["residual"] == pytest.approx(0.125)
