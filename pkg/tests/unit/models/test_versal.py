"""Tests for versality checks and standard versal families."""

import random
from fractions import Fraction

import pytest
import sympy

from germlab.models.deformation import deformation_from_coeffs
from germlab.models.detect import classify
from germlab.models.errors import PreconditionViolated, UnknownLabel, UnsupportedLabel
from germlab.models.jet import jet_from_coeffs, raw_partial
from germlab.models.versal import (
    build_versal_deformation,
    infinitesimal_versality,
    v_e_seq,
    v_seq,
    versality_check,
    w_seq,
)
from germlab.models.workbench import GermWorkbench

VERDICT_CASES = [
    ("k1^4 + l1*k1 + l2*k1^2", False, "versal"),
    ("k1^4 + l1*k1^2", False, "not_versal"),
    ("k1^4 + l1*k1 + l2*k1^3", False, "not_versal"),
    ("k1^8 + l1*k1^2 + l2*k1^4 + l3*k1^6", True, "versal"),
    ("k1^2*k2 + k2^4 + l1*k1 + l2*k2 + l3*k2^2 + l4*k2^3", False, "versal"),
    ("k1^2*k2 + k2^4 + l1*k1 + l2*k2 + l3*k2^2", False, "not_versal"),
    ("k1^4 + k2^4 + l1*k1^2 + l2*k1*k2 + l3*k2^2 + l4*k1^2*k2^2", True, "versal"),
    ("k1^4 + k2^4 + l1*k1^2 + l2*k1*k2 + l3*k2^2", True, "not_versal"),
]


def random_fraction(rng, nonzero=False):
    while True:
        value = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if value or not nonzero:
            return value


@pytest.fixture
def deform():
    """Build a DeformationJet from family text."""
    workbench = GermWorkbench(quiet=True)

    def factory(text, even=False):
        return workbench.deformation(text, even=even)

    return factory


class TestVectorSequences:
    """Tests for the first-order parameter vectors."""

    def test_v_seq(self, deform):
        """Test v_μ = ∂^{μ-1}F/∂k^{μ-1}∂λ for a cusp family."""
        defjet = deform("k1^4 + l1*k1 + l2*k1^2")

        assert v_seq(defjet, 3) == [(1, 0), (0, 2)]

    def test_v_e_seq(self, deform):
        """Test that only even derivatives enter the even sequence."""
        defjet = deform("k1^6 + l1*k1^2 + l2*k1^4", even=True)

        assert v_e_seq(defjet, 3) == [(2, 0), (0, 24)]

    def test_w_seq_in_adapted_coordinates(self, deform):
        """Test the w vectors of x²y + y⁴ after y ↦ y/2."""
        defjet = deform("k1^2*k2 + k2^4 + l1*k1 + l2*k2 + l3*k2^2")

        vectors = w_seq(defjet, 4)

        # Verify
        assert vectors[0] == (0, 0, 0)
        assert vectors[1] == (1, 0, 0)
        assert vectors[2] == (0, Fraction(1, 2), 0)
        assert vectors[3] == (0, 0, Fraction(1, 2))

    @pytest.mark.parametrize("seed", range(5))
    def test_v_seq_closed_forms(self, seed):
        """Test v_2, v_3 and v_4 through the elimination of the regular variable."""
        rng = random.Random(seed)
        c = random_fraction(rng, nonzero=True)
        entries = [((0, 2), c / 2)]
        entries += [((i, d - i), random_fraction(rng)) for d in (3, 4) for i in range(d + 1)]
        base = jet_from_coeffs(2, 4, entries)
        mixed = [
            ((i, d - i), j, random_fraction(rng))
            for d in range(4)
            for i in range(d + 1)
            for j in range(2)
        ]
        defjet = deformation_from_coeffs(base, 2, mixed)

        def f(i, j):
            return raw_partial(base, (i, j))

        expected = [[], [], []]
        for p in range(2):

            def lam(i, j, p=p):
                return defjet.raw_mixed((i, j), p)

            expected[0].append(lam(1, 0))
            expected[1].append(lam(2, 0) - f(2, 1) * lam(0, 1) / c)
            expected[2].append(
                lam(3, 0)
                - 3 * f(2, 1) * lam(1, 1) / c
                - (f(3, 1) - 3 * f(2, 1) * f(1, 2) / c) * lam(0, 1) / c
            )

        assert v_seq(defjet, 4) == [tuple(v) for v in expected]

    @pytest.mark.parametrize("seed", range(5))
    def test_v_e_seq_closed_forms(self, seed):
        """Test v_(e,2) and v_(e,3) on random even deformations."""
        rng = random.Random(seed)
        c = random_fraction(rng, nonzero=True)
        entries = [((0, 2), c / 2)]
        entries += [((i, d - i), random_fraction(rng)) for d in (4, 6) for i in range(d + 1)]
        base = jet_from_coeffs(2, 6, entries, parity="even")
        mixed = [
            ((i, d - i), j, random_fraction(rng))
            for d in (2, 4)
            for i in range(d + 1)
            for j in range(2)
        ]
        defjet = deformation_from_coeffs(base, 2, mixed)

        expected = [[], []]
        for p in range(2):

            def lam(i, j, p=p):
                return defjet.raw_mixed((i, j), p)

            expected[0].append(lam(2, 0))
            expected[1].append(lam(4, 0) - 4 * raw_partial(base, (3, 1)) * lam(1, 1) / c)

        assert v_e_seq(defjet, 3) == [tuple(v) for v in expected]


class TestVersalityCheck:
    """Tests for versality_check verdicts."""

    @pytest.mark.parametrize("text,even,verdict", VERDICT_CASES)
    def test_verdicts(self, deform, text, even, verdict):
        """Test the verdict of typical and deficient families."""
        report = versality_check(deform(text, even=even))

        assert report.verdict == verdict

    @pytest.mark.parametrize("seed", [1, 2])
    @pytest.mark.parametrize("text,even,verdict", VERDICT_CASES)
    def test_verdict_survives_reparametrization(self, deform, seed, text, even, verdict):
        """Test that an invertible linear change of parameters keeps the verdict."""
        rng = random.Random(seed)
        defjet = deform(text, even=even)
        size = defjet.nparams
        while True:
            matrix = [[random_fraction(rng) for _ in range(size)] for _ in range(size)]
            if sympy.Matrix(matrix).det() != 0:
                break

        report = versality_check(defjet.reparametrized(matrix))

        assert report.verdict == verdict

    def test_report_fields(self, deform):
        """Test the report of a versal A₃ family."""
        report = versality_check(deform("k1^4 + l1*k1 + l2*k1^2"))

        assert report.label == "A_3^+"
        assert report.rank == 2
        assert report.min_parameters == 2
        assert report.statement == "A"
        assert report.to_dict()["vectors"][0]["name"] == "v_2"

    def test_deficient_rank_reason(self, deform):
        """Test that a missing direction is reported as a rank deficit."""
        report = versality_check(deform("k1^4 + l1*k1 + l2*k1^3"))

        assert report.rank == 1
        assert report.reason == "rank 1 < 2"

    def test_morse_is_trivially_versal(self, deform):
        """Test that Morse points need no parameters."""
        report = versality_check(deform("k1^2 + l1*k1^3"))

        assert report.versal
        assert report.min_parameters == 0

    def test_rotated_kernel(self, deform):
        """Test a fold family whose kernel is the diagonal."""
        report = versality_check(deform("(k1 - k2)^2 + (k1 + k2)^3 + l1*k1"))

        assert report.label == "A_2^+"
        assert report.versal

    def test_unsupported_class(self, deform):
        """Test that E₆ has no rank test."""
        with pytest.raises(UnsupportedLabel):
            versality_check(deform("k1^3 + k2^4 + l1*k1"))

    def test_even_class_needs_even_family(self, deform, make_jet):
        """Test that an even label on a general deformation is refused."""
        defjet = deform("k1^4 + l1*k1^2")
        label = classify(make_jet("k1^4", parity="even"))

        with pytest.raises(PreconditionViolated):
            versality_check(defjet, label=label)


class TestInfinitesimalVersality:
    """Tests for the local algebra versality test."""

    def test_cusp_family(self, deform):
        """Test that x, x² span the local algebra of x⁴."""
        report = infinitesimal_versality(deform("k1^4 + l1*k1 + l2*k1^2"))

        assert report.verdict == "versal"
        assert report.statement == "infinitesimal"

    def test_missing_direction(self, deform):
        """Test that x³ lies in the gradient ideal of x⁴."""
        report = infinitesimal_versality(deform("k1^4 + l1*k1 + l2*k1^3"))

        assert report.verdict == "not_versal"


class TestBuildVersalDeformation:
    """Tests for build_versal_deformation."""

    @pytest.mark.parametrize(
        "label,signs,modulus,nparams",
        [
            (("A", 3), "+", None, 2),
            (("Ae", 3), "-", None, 2),
            (("D", 4), "-", None, 3),
            (("D", 5), "+", None, 4),
            (("Xe", 5), "+-", 1, 4),
            (("Xe", 6), "++", 2, 5),
        ],
    )
    def test_standard_families_are_versal(self, label, signs, modulus, nparams):
        """Test that every standard family passes its own rank test."""
        defjet = build_versal_deformation(label, sign_data=signs, modulus=modulus)

        report = versality_check(defjet)

        assert defjet.nparams == nparams
        assert report.verdict == "versal"

    def test_extra_variables_are_squares(self):
        """Test that extra variables enter as +k_i²."""
        defjet = build_versal_deformation(("A", 2), nu=3)

        assert defjet.base.coefficient((0, 2, 0)) == 1
        assert defjet.base.coefficient((0, 0, 2)) == 1

    def test_unknown_class(self):
        """Test that classes outside the catalogue are rejected."""
        with pytest.raises(UnknownLabel):
            build_versal_deformation(("D", 2))

    def test_unsupported_family(self):
        """Test that Z_{e,7} has no standard family."""
        with pytest.raises(UnsupportedLabel):
            build_versal_deformation(("Ze", 7))
