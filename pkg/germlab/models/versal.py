"""Versality of deformations by rank tests on first-order parameter data.

Each test reads the λ-linear part of the reduced family Ψ(k, λ) in the
coordinates that bring the base to its adapted shape, so the vectors live in
ℝ^l and the verdict is a rank decision.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from germlab.models.adaptation import adapt_d, linear_substitution
from germlab.models.catalogue import lookup, versal_monomials
from germlab.models.deformation import DeformationJet
from germlab.models.detect import SingularityLabel, classify, require_even, xe_adaptation
from germlab.models.errors import (
    AdaptationFailure,
    InsufficientJet,
    PreconditionViolated,
    UnknownLabel,
    UnsupportedLabel,
)
from germlab.models.jet import hessian_analysis, jet_from_coeffs
from germlab.models.localalg import stable_quotient
from germlab.models.reduction import restrict_to_kernel
from germlab.utils.exact import is_exact, scalar_to_json
from germlab.utils.settings import DEFAULT_TOLERANCES

VERDICTS = ("versal", "not_versal", "undetermined")


@dataclass
class VersalityReport:
    """Named test vectors, the combined test set, its rank and the verdict."""

    label: str
    vectors: list
    combined_test_set: list
    rank: int
    verdict: str
    min_parameters: int
    nparams: int
    statement: str
    normal_form: str | None = None
    reason: str = ""
    notes: list = field(default_factory=list)

    @property
    def versal(self):
        return self.verdict == "versal"

    def to_dict(self):
        def named(items):
            return [
                {"name": name, "vector": [scalar_to_json(v) for v in vector]}
                for name, vector in items
            ]

        return {
            "label": self.label,
            "vectors": named(self.vectors),
            "combined_test_set": named(self.combined_test_set),
            "rank": self.rank,
            "verdict": self.verdict,
            "min_parameters": self.min_parameters,
            "nparams": self.nparams,
            "statement": self.statement,
            "normal_form": self.normal_form,
            "reason": self.reason,
            "notes": list(self.notes),
        }


def _lambda_vector(series, exps):
    """α!·(λ_1[k^α], …, λ_l[k^α]) of a reduced series."""
    factor = math.prod(math.factorial(a) for a in exps)
    nparams = series.nparams
    vector = []
    for j in range(nparams):
        slot = [0] * nparams
        slot[j] = 1
        vector.append(factor * series.coefficient(tuple(exps) + tuple(slot)))
    return tuple(vector)


def _combine(first, second, weight):
    return tuple(a + weight * b for a, b in zip(first, second, strict=True))


def _check_degree(defjet, needed, what):
    if defjet.max_degree < needed:
        raise InsufficientJet(f"{what} needs degree {needed}, jet has {defjet.max_degree}")


# Vector sequences


def v_seq(defjet, mu_max):
    """v_2..v_{μmax}, v_μ = ∂^{μ-1}Ψ/∂k^{μ-1}∂λ at the origin."""
    _check_degree(defjet, mu_max, f"v_{mu_max}")
    psi = restrict_to_kernel(defjet, 1)
    return [_lambda_vector(psi, (mu - 1,)) for mu in range(2, mu_max + 1)]


def v_e_seq(defjet, mu_max):
    """v_(e,2)..v_(e,μmax) with v_(e,μ) = v_{2μ-1}."""
    require_even(defjet.base)
    _check_degree(defjet, 2 * mu_max - 1, f"v_(e,{mu_max})")
    psi = restrict_to_kernel(defjet, 1)
    return [_lambda_vector(psi, (2 * mu - 2,)) for mu in range(2, mu_max + 1)]


def _d_adapted(defjet, tolerances):
    psi = restrict_to_kernel(defjet, 2)
    return adapt_d(psi, tolerances)


def w_seq(defjet, mu_max, tolerances=DEFAULT_TOLERANCES, adaptation=None):
    """w_1..w_{μmax} in the D-adapted coordinates.

    w_1 = F_{x²λ}, w_2 = F_{xλ} and w_i = F_{y^{i-2}λ} for i >= 3.
    """
    _check_degree(defjet, mu_max - 1, f"w_{mu_max}")
    adaptation = adaptation or _d_adapted(defjet, tolerances)
    series = adaptation.series
    vectors = [_lambda_vector(series, (2, 0)), _lambda_vector(series, (1, 0))]
    vectors += [_lambda_vector(series, (0, i - 2)) for i in range(3, mu_max + 1)]
    return vectors


def x_e_vec_seq(defjet, mu_max, eps=None, eta=None, tolerances=DEFAULT_TOLERANCES, adaptation=None):
    """x⃗_(e,1)..x⃗_(e,μmax) in the X_e-adapted coordinates.

    x⃗_(e,1) is the x⁴/x²y² combination of the normalized form; x⃗_(e,2..4) are
    F_{x²λ}, F_{xyλ}, F_{y²λ}; x⃗_(e,μ) = F_{y^{2μ-6}λ} for μ >= 5.
    """
    require_even(defjet.base)
    _check_degree(defjet, max(2 * mu_max - 5, 4), f"x_(e,{mu_max})")
    if adaptation is None:
        psi = restrict_to_kernel(defjet, 2)
        adaptation = xe_adaptation(psi, tolerances=tolerances)
    if eps is not None and adaptation.eps != eps:
        raise AdaptationFailure(f"the x⁴ coefficient does not have sign {eps:+d}")
    if eta is not None and adaptation.eta != eta:
        raise AdaptationFailure(f"the x²y² coefficient does not have sign {eta:+d}")
    series = adaptation.series
    A, C, _ = adaptation.diagonal
    quartic = _lambda_vector(series, (4, 0))
    mixed = _lambda_vector(series, (2, 2))
    first = tuple(q / A - 12 * m / C for q, m in zip(quartic, mixed, strict=True))
    vectors = [
        first,
        _lambda_vector(series, (2, 0)),
        _lambda_vector(series, (1, 1)),
        _lambda_vector(series, (0, 2)),
    ]
    vectors += [_lambda_vector(series, (0, 2 * mu - 6)) for mu in range(5, mu_max + 1)]
    return vectors


# Rank decisions


def _rank(vectors, exact, tolerances):
    """(rank, undetermined) of a list of equal-length vectors."""
    if not vectors or not vectors[0]:
        return 0, False
    if exact:
        return sympy.Matrix([[sympy.Rational(v) for v in row] for row in vectors]).rank(), False
    matrix = np.array([[float(v) for v in row] for row in vectors], dtype=float)
    singular = np.linalg.svd(matrix, compute_uv=False)
    top = float(singular[0]) if singular.size else 0.0
    if top == 0.0:
        return 0, False
    rank = int(np.sum(singular >= tolerances.rank * top))
    undetermined = bool(
        np.any((singular < tolerances.rank * top) & (singular >= tolerances.rank_guard * top))
    )
    return rank, undetermined


def _all_exact(vectors):
    return all(is_exact(v) for row in vectors for v in row)


def _report(label, named, tests, defjet, statement, tolerances, notes=None):
    exact = defjet.mode == "exact" and _all_exact([v for _, v in tests])
    size = len(tests)
    rank, undetermined = _rank([v for _, v in tests], exact, tolerances)
    if size > defjet.nparams:
        verdict, reason = "not_versal", f"{size} independent vectors needed, l = {defjet.nparams}"
    elif rank == size:
        verdict, reason = "versal", ""
    elif undetermined:
        verdict = "undetermined"
        reason = "a singular value lies in the guard band of the rank threshold"
    else:
        verdict, reason = "not_versal", f"rank {rank} < {size}"
    meta = lookup(label.family, label.index)
    min_parameters = meta.mult - 1 if meta else size
    report = VersalityReport(
        label=label.name,
        vectors=named,
        combined_test_set=tests,
        rank=rank,
        verdict=verdict,
        min_parameters=min_parameters,
        nparams=defjet.nparams,
        statement=statement,
        normal_form=label.normal_form,
        reason=reason,
        notes=list(notes or []),
    )
    if meta and verdict != "versal" and meta.codim <= defjet.nparams < meta.mult - 1:
        report.notes.append(
            f"l = {defjet.nparams} >= c = {meta.codim}: the class persists in nearby families "
            "although the family is not versal"
        )
    return report


def aligned_deformation(defjet, tolerances=DEFAULT_TOLERANCES):
    """Rotate the variables so the Hessian kernel of the base spans the first axes."""
    analysis = hessian_analysis(defjet.base, tolerances=tolerances)
    identity = all(
        analysis.aligning_map[i][j] == (1 if i == j else 0)
        for i in range(defjet.nu)
        for j in range(defjet.nu)
    )
    if identity:
        return defjet, analysis
    series = linear_substitution(defjet.to_series(), analysis.aligning_map)
    return DeformationJet.from_series(series, defjet.mode, defjet.parity), analysis


def _named(prefix, start, vectors):
    return [(f"{prefix}{start + i}", v) for i, v in enumerate(vectors)]


def _check_a(defjet, label):
    mu = label.index
    vectors = v_seq(defjet, mu)
    named = _named("v_", 2, vectors)
    return named, list(named), "A"


def _check_ae(defjet, label):
    mu = label.index
    vectors = v_e_seq(defjet, mu)
    named = [(f"v_(e,{i + 2})", v) for i, v in enumerate(vectors)]
    return named, list(named), "Ae"


def _check_d(defjet, label, tolerances):
    mu = label.index
    adaptation = _d_adapted(defjet, tolerances)
    if not adaptation.exact and defjet.mode == "exact":
        return None
    vectors = w_seq(defjet, mu, tolerances, adaptation)
    named = _named("w_", 1, vectors)
    d = adaptation.d_value(mu)
    w1 = vectors[0]
    tests = named[1 : mu - 1]
    tests.append((f"w_{mu} - d_{mu}*w_1", _combine(vectors[mu - 1], w1, -d)))
    return named, tests, "D"


def _check_xe(defjet, label, tolerances):
    mu = label.index
    psi = restrict_to_kernel(defjet, 2)
    try:
        adaptation = xe_adaptation(psi, tolerances=tolerances)
    except AdaptationFailure:
        return None
    if not adaptation.exact and defjet.mode == "exact":
        return None
    vectors = x_e_vec_seq(defjet, mu, tolerances=tolerances, adaptation=adaptation)
    named = [(f"x_(e,{i + 1})", v) for i, v in enumerate(vectors)]
    value = adaptation.raw_value(mu)
    tests = named[1 : mu - 1]
    tests.append(
        (
            f"x_(e,{mu}) + ({mu}-3)/48*x_(e,{mu})*x_(e,1)",
            _combine(vectors[mu - 1], vectors[0], Fraction(mu - 3, 48) * value),
        )
    )
    return named, tests, "Xe"


def infinitesimal_versality(defjet, parity=None, label=None, tolerances=DEFAULT_TOLERANCES):
    """Rank of the classes of ∂F/∂λ_j in the truncated (even) local algebra."""
    parity = parity or defjet.parity
    base = defjet.base
    if base.mode != "exact":
        raise PreconditionViolated("the infinitesimal test needs an exact base jet")
    if label is None:
        label = classify(base, parity, tolerances=tolerances)
    quotient, stabilized, _ = stable_quotient(base, parity)
    columns = []
    for j in range(defjet.nparams):
        terms = {exps: value for (exps, index), value in defjet.mixed.items() if index == j}
        columns.append(quotient.coordinates(terms))
    named = []
    for i, monomial in enumerate(quotient.basis):
        named.append((f"[{monomial}]", tuple(column[i] for column in columns)))
    notes = [] if stabilized else ["the local algebra did not stabilize; verdict is provisional"]
    report = _report(label, named, list(named), defjet, "infinitesimal", tolerances, notes)
    if lookup(label.family, label.index) is None:
        report.min_parameters = quotient.dimension
    return report


def versality_check(defjet, label=None, tolerances=DEFAULT_TOLERANCES):
    """Versality verdict for a deformation of a classified base germ."""
    if label is None:
        label = classify(defjet.base, defjet.parity, tolerances=tolerances)
    family = label.family
    if family in ("Regular", "Morse"):
        return VersalityReport(
            label=label.name,
            vectors=[],
            combined_test_set=[],
            rank=0,
            verdict="versal",
            min_parameters=0,
            nparams=defjet.nparams,
            statement=family,
            normal_form=label.normal_form,
        )
    if family not in ("A", "Ae", "D", "Xe"):
        raise UnsupportedLabel(f"no versality test for {label.name}")
    if family in ("Ae", "Xe") and defjet.parity != "even":
        raise PreconditionViolated(f"{label.name} needs an even deformation")

    aligned, _ = aligned_deformation(defjet, tolerances)
    if family == "A":
        routed = _check_a(aligned, label)
    elif family == "Ae":
        routed = _check_ae(aligned, label)
    elif family == "D":
        routed = _check_d(aligned, label, tolerances)
    else:
        routed = _check_xe(aligned, label, tolerances)
    if routed is None:
        report = infinitesimal_versality(defjet, defjet.parity, label, tolerances)
        report.notes.append("no rational adapted coordinates; used the local algebra test")
        return report
    named, tests, statement = routed
    return _report(label, named, tests, aligned, statement, tolerances)


# Standard versal families


def _label_parts(label, sign_data, modulus):
    if isinstance(label, SingularityLabel):
        family, index = label.family, label.index
        sign_data = sign_data if sign_data is not None else label.sign_data
        modulus = modulus if modulus is not None else label.modulus
    else:
        family, index = label[0], label[1]
    return family, index, sign_data or "", modulus


def _signs(sign_data, count):
    signs = [-1 if ch in "-−" else 1 for ch in sign_data] or [1]
    while len(signs) < count:
        signs.append(signs[-1])
    return signs


def build_versal_deformation(label, nu=None, sign_data=None, modulus=None, mode="exact"):
    """Normal form of a class plus Σ λ_i·(versal monomial i), as a DeformationJet.

    Extra variables beyond the class's own get +k_i².
    """
    family, index, sign_data, modulus = _label_parts(label, sign_data, modulus)
    if family not in ("Morse", "A", "Ae", "D", "Xe"):
        raise UnsupportedLabel(f"no versal family for {family}")
    if lookup(family, index) is None:
        raise UnknownLabel(f"{family} {index!r} is not a catalogue class")
    own = 1 if family in ("Morse", "A", "Ae") else 2
    nu = nu or own
    if nu < own:
        raise PreconditionViolated(f"{family} needs at least {own} variables")

    def mono(x=0, y=0):
        exps = [0] * nu
        exps[0] = x
        if y:
            exps[1] = y
        return tuple(exps)

    signs = _signs(sign_data, 2)
    entries = []
    if family == "Morse":
        entries.append((mono(x=2), signs[0]))
        degree = 2
    elif family == "A":
        degree = index + 1
        entries.append((mono(x=degree), signs[0]))
    elif family == "Ae":
        degree = 2 * index
        entries.append((mono(x=degree), signs[0]))
    elif family == "D":
        degree = max(index - 1, 3)
        entries += [(mono(x=2, y=1), 1), (mono(y=index - 1), signs[0])]
    elif index == 5:
        degree = 4
        a = modulus if modulus is not None else 0
        entries += [(mono(x=4), signs[0]), (mono(x=2, y=2), a), (mono(y=4), signs[1])]
    else:
        r = index - 3
        degree = 2 * r
        a = modulus if modulus is not None else 1
        entries += [(mono(x=4), signs[0]), (mono(x=2, y=2), signs[1]), (mono(y=2 * r), a)]
    for i in range(own, nu):
        exps = [0] * nu
        exps[i] = 2
        entries.append((tuple(exps), 1))

    parity = "even" if family in ("Ae", "Xe") else "general"
    max_degree = degree + 1
    base = jet_from_coeffs(nu, max_degree, entries, parity, mode)
    directions = versal_monomials(family, index, nu)
    mixed = {(exps, j): 1 for j, exps in enumerate(directions)}
    return DeformationJet(base, len(directions), mixed)

