"""Singularity-type determinants and the classification pipeline.

Every determinant works on the reduced function ψ obtained by eliminating the
nondegenerate directions of a kernel-aligned jet. The general elimination is the
source of truth; closed-form tables are only used as test fixtures.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import sympy

from germlab.models.adaptation import (
    adapt_d,
    adapt_xe,
    linear_substitution,
    series_form,
    shear,
    xe_presentation,
)
from germlab.models.binary_forms import (
    canonical_4form,
    cubic_discriminant,
    factor_form,
    form_eval,
    is_negligible,
    line_kernel,
    quartic_discriminant,
)
from germlab.models.catalogue import lookup, normal_form
from germlab.models.errors import (
    AdaptationFailure,
    CubicIsCube,
    CubicZero,
    InsufficientJet,
    NotCritical,
    ParityViolation,
    PreconditionViolated,
    ZeroForm,
)
from germlab.models.jet import Jet, align_kernel, hessian_analysis
from germlab.models.reduction import restrict_to_kernel
from germlab.utils.exact import exact_root, is_exact, scalar_to_json, sign_char, to_exact
from germlab.utils.settings import DEFAULT_TOLERANCES, thread_count

DERIVED_BEYOND_TABLES = "derived-beyond-tables"


def _json(value):
    if isinstance(value, (list, tuple)):
        return [_json(v) for v in value]
    if isinstance(value, dict):
        return {k: _json(v) for k, v in value.items()}
    if isinstance(value, (bool, str)) or value is None:
        return value
    return scalar_to_json(value)


@dataclass
class SingularityLabel:
    """Classified type of a critical point with its catalogue metadata."""

    family: str
    index: object = None
    sign_data: str = ""
    modulus: object = None
    mult: int | None = None
    codim: int | None = None
    beta: object = None
    reason: str = ""
    parity: str = "general"
    confidence: str = "exact"
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def modality(self):
        if self.mult is None or self.codim is None:
            return None
        return self.mult - self.codim - 1

    @property
    def name(self):
        signs = f"^{{{self.sign_data}}}" if len(self.sign_data) > 1 else f"^{self.sign_data}"
        if not self.sign_data:
            signs = ""
        if self.family == "Morse":
            base = "A_{e,1}" if self.parity == "even" else "A_1"
            return base + signs
        if self.family == "A":
            return f"A_{self.index}{signs}"
        if self.family == "D":
            return f"D_{self.index}{signs}"
        if self.family == "E6":
            return f"E_6{signs}"
        if self.family == "Ae":
            return f"A_{{e,{self.index}}}{signs}"
        if self.family == "Xe":
            return f"X_{{e,{self.index}}}{signs}"
        if self.family == "YeCandidate":
            r, s = self.index
            return f"Y_{{e,{r},{s}}}{signs} (candidate)"
        if self.family == "YtildeE":
            return f"Ytilde_{{e,{self.index}}}{signs}"
        if self.family == "Ze":
            return f"Z_{{e,7}}{signs}"
        return self.family

    @property
    def extremum(self):
        """'min', 'max' or None for the germ including its regular directions."""
        kernel = self._kernel_extremum()
        if kernel is None:
            return None
        n_plus, n_minus = self.details.get("regular_inertia", (0, 0))
        if kernel == "min" and n_minus == 0:
            return "min"
        if kernel == "max" and n_plus == 0:
            return "max"
        return None

    def _kernel_extremum(self):
        s = self.sign_data
        a = self.modulus
        if self.family == "Morse":
            if s and set(s) == {"+"}:
                return "min"
            if s and set(s) == {"-"}:
                return "max"
            return None
        if self.family == "A":
            if self.index % 2 == 0:
                return None
            return "min" if s == "+" else "max"
        if self.family in ("Ae", "YtildeE"):
            return "min" if s == "+" else "max"
        if self.family == "Xe" and a is not None:
            if self.index == 5:
                if s == "++" and a > -2:
                    return "min"
                if s == "--" and a < 2:
                    return "max"
                return None
            if s == "++" and a > 0:
                return "min"
            if s == "--" and a < 0:
                return "max"
            return None
        if self.family == "YeCandidate" and a is not None:
            if s == "++" and a > 0:
                return "min"
            if s == "--" and a < 0:
                return "max"
        return None

    @property
    def normal_form(self):
        if lookup(self.family, self.index) is None:
            return None
        return normal_form(self.family, self.index, self.sign_data, _json(self.modulus))

    def to_dict(self):
        return {
            "name": self.name,
            "family": self.family,
            "index": list(self.index) if isinstance(self.index, tuple) else self.index,
            "sign_data": self.sign_data,
            "modulus": _json(self.modulus),
            "mult": self.mult,
            "codim": self.codim,
            "beta": _json(self.beta),
            "modality": self.modality,
            "extremum": self.extremum,
            "normal_form": self.normal_form,
            "parity": self.parity,
            "reason": self.reason,
            "confidence": self.confidence,
            "notes": list(self.notes),
            "details": _json(self.details),
        }


def _make_label(family, index=None, sign_data="", modulus=None, **kwargs):
    label = SingularityLabel(family, index, sign_data, modulus, **kwargs)
    meta = lookup(family, index)
    if meta is not None:
        label.mult = meta.mult
        label.codim = meta.codim
        label.beta = meta.beta
    return label


def morse_label(sign_data, parity="general", confidence="exact"):
    """Label of a nondegenerate critical point with the given Hessian signs."""
    label = _make_label("Morse", 1, sign_data, parity=parity, confidence=confidence)
    label.details["corank"] = 0
    label.details["regular_inertia"] = [sign_data.count("+"), sign_data.count("-")]
    return label


def _vanishes(value, scale, tolerances):
    if is_exact(value):
        return value == 0
    return abs(value) <= tolerances.zero * max(scale, 1e-300)


def require_even(jet):
    odd = [e for e in jet.series.terms if sum(e) % 2]
    if odd:
        raise ParityViolation("the jet has odd-degree terms")


def _reduced(aligned_jet, corank):
    if aligned_jet.nu < corank:
        raise PreconditionViolated(f"corank {corank} needs at least {corank} variables")
    return restrict_to_kernel(aligned_jet, corank)


def _univariate(psi, power):
    return math.factorial(power) * psi.coefficient((power,))


# Corank 1


def a_seq(aligned_jet, mu_max):
    """a_2..a_{μmax}, a_μ = ψ^{(μ+1)}(0) for the restriction to the kernel axis."""
    if aligned_jet.max_degree < mu_max + 1:
        raise InsufficientJet(f"a_{mu_max} needs degree {mu_max + 1}")
    psi = _reduced(aligned_jet, 1)
    return [_univariate(psi, mu + 1) for mu in range(2, mu_max + 1)]


def a_e_seq(aligned_even_jet, mu_max):
    """a_{e,2}..a_{e,μmax} with a_{e,μ} = a_{2μ-1}."""
    require_even(aligned_even_jet)
    if aligned_even_jet.max_degree < 2 * mu_max:
        raise InsufficientJet(f"a_(e,{mu_max}) needs degree {2 * mu_max}")
    psi = _reduced(aligned_even_jet, 1)
    return [_univariate(psi, 2 * mu) for mu in range(2, mu_max + 1)]


# Corank 2, general


def delta3(aligned_jet):
    """Δ₃ of the cubic part; positive for D₄⁺, negative for D₄⁻."""
    if aligned_jet.max_degree < 3:
        raise InsufficientJet("Δ₃ needs degree 3")
    psi = _reduced(aligned_jet, 2)
    return cubic_discriminant(*series_form(psi, 3))


def d_adaptation(aligned_jet, tolerances=DEFAULT_TOLERANCES):
    """Adapted reduced series of a corank-2 jet whose cubic part is not a cube."""
    return adapt_d(_reduced(aligned_jet, 2), tolerances)


def d_seq(aligned_jet, mu_max, tolerances=DEFAULT_TOLERANCES):
    """d_4..d_{μmax} read from the D-adapted reduced series."""
    if aligned_jet.max_degree < mu_max - 1:
        raise InsufficientJet(f"d_{mu_max} needs degree {mu_max - 1}")
    adaptation = d_adaptation(aligned_jet, tolerances)
    return [adaptation.d_value(mu) for mu in range(4, mu_max + 1)]


# Corank 2, even


def delta4(aligned_even_jet):
    """Δ₄ of the quartic part."""
    require_even(aligned_even_jet)
    if aligned_even_jet.max_degree < 4:
        raise InsufficientJet("Δ₄ needs degree 4")
    psi = _reduced(aligned_even_jet, 2)
    return quartic_discriminant(*series_form(psi, 4))


def _diagonal_quartic(quartic, tolerances):
    scale = max(abs(float(c)) for c in quartic)
    return (
        is_negligible(quartic[1], scale, tolerances.form_zero)
        and is_negligible(quartic[3], scale, tolerances.form_zero)
        and not is_negligible(quartic[2], scale, tolerances.form_zero)
    )


def xe_adaptation(psi, canon=None, tolerances=DEFAULT_TOLERANCES):
    """X_e adaptation of a reduced even series; an already diagonal quartic is kept."""
    quartic = series_form(psi, 4)
    if _diagonal_quartic(quartic, tolerances):
        identity = ((1, 0), (0, 1))
        return adapt_xe(psi, (identity, (quartic[0], quartic[2], quartic[4])), tolerances)
    canon = canon or canonical_4form(quartic, tolerances=tolerances)
    return adapt_xe(psi, xe_presentation(canon), tolerances)


def x_e_seq(adapted_even_jet, mu_max, eps=None, eta=None, tolerances=DEFAULT_TOLERANCES):
    """x_{e,5}..x_{e,μmax} in the normalization A = ε, C = η."""
    require_even(adapted_even_jet)
    if adapted_even_jet.max_degree < 2 * mu_max - 6:
        raise InsufficientJet(f"x_(e,{mu_max}) needs degree {2 * mu_max - 6}")
    psi = _reduced(adapted_even_jet, 2)
    adaptation = xe_adaptation(psi, tolerances=tolerances)
    if eps is not None and adaptation.eps != eps:
        raise AdaptationFailure(f"the x⁴ coefficient does not have sign {eps:+d}")
    if eta is not None and adaptation.eta != eta:
        raise AdaptationFailure(f"the x²y² coefficient does not have sign {eta:+d}")
    return [adaptation.value(mu) for mu in range(5, mu_max + 1)]


def _ytilde_modulus(psi, canon, tolerances):
    alpha, two_beta, gamma = canon.quadratic
    beta = two_beta / 2
    quartic = series_form(psi, 4)
    c = quartic[0] / (alpha * alpha)
    disc = alpha * gamma - beta * beta
    sextic = series_form(psi, 6)
    exact = all(is_exact(v) for v in (*sextic, alpha, beta, gamma, c))
    if exact:
        root = sympy.sqrt(sympy.Rational(disc))
        w = (-sympy.Rational(beta) + sympy.I * root, sympy.Rational(alpha))
        value = sum(
            sympy.Rational(coeff) * w[0] ** (6 - i) * w[1] ** i for i, coeff in enumerate(sextic)
        )
        re, im = sympy.expand(value).as_real_imag()
        norm = sympy.expand(re**2 + im**2)
        scale = 2 * sympy.Rational(alpha) * sympy.Rational(disc)
        squared = to_exact(sympy.nsimplify(64 * norm / (abs(sympy.Rational(c)) ** 3 * scale**6)))
        if squared == 0:
            return None
        root = exact_root(squared, 2)
        return root if root is not None else math.sqrt(float(squared))
    w = complex(-float(beta), math.sqrt(float(disc))), complex(float(alpha))
    value = sum(float(coeff) * w[0] ** (6 - i) * w[1] ** i for i, coeff in enumerate(sextic))
    bound = sum(abs(float(coeff)) for coeff in sextic) * max(abs(w[0]), abs(w[1])) ** 6
    factor = 8 / (abs(float(c)) ** 1.5 * abs(2 * float(alpha) * float(disc)) ** 3)
    if abs(value) <= tolerances.zero * max(bound, 1e-300):
        return None
    return abs(value) * factor


def detect_ytilde3(aligned_even_jet, tolerances=DEFAULT_TOLERANCES):
    """|a₃| when the 4-jet is ±(x²+y²)² up to a linear change, None when a₃ = 0."""
    require_even(aligned_even_jet)
    psi = _reduced(aligned_even_jet, 2)
    canon = canonical_4form(series_form(psi, 4), tolerances=tolerances)
    if canon.case_id != 1 or not canon.definite:
        raise PreconditionViolated("the 4-jet is not ±(x²+y²)² up to a linear change")
    if aligned_even_jet.max_degree < 6:
        raise InsufficientJet("a₃ needs degree 6")
    return _ytilde_modulus(psi, canon, tolerances)


def _ze_from_psi(psi, canon, tolerances, scale):
    adapted = linear_substitution(psi, canon.linear_map)
    a1 = adapted.coefficient((0, 6))
    a2 = adapted.coefficient((1, 5))
    if _vanishes(a1, scale, tolerances):
        return None
    magnitude = abs(a1)
    root = exact_root(magnitude, 9) if is_exact(magnitude) else None
    if root is not None and is_exact(a2):
        modulus = a2 / root**7
    else:
        modulus = float(a2) * float(magnitude) ** (-7 / 9)
    label = _make_label("Ze", 7, sign_char(a1), modulus, parity="even")
    label.details.update({"a1": a1, "a2": a2, "linear_map": canon.linear_map})
    return label


def detect_ze7(aligned_even_jet, tolerances=DEFAULT_TOLERANCES):
    """Z_{e,7} label when the 4-jet is x³y up to a linear change and [y⁶] != 0."""
    require_even(aligned_even_jet)
    psi = _reduced(aligned_even_jet, 2)
    canon = canonical_4form(series_form(psi, 4), tolerances=tolerances)
    if canon.case_id != 4:
        raise PreconditionViolated("the 4-jet is not x³y up to a linear change")
    if aligned_even_jet.max_degree < 6:
        raise InsufficientJet("Z_(e,7) needs degree 6")
    return _ze_from_psi(psi, canon, tolerances, aligned_even_jet.scale_reference(2, 6))


def _ye_candidate(psi, canon, tolerances, scale):
    """Shear away u·v^{d-1} and u^{d-1}·v, then read the lowest pure powers."""
    adapted = linear_substitution(psi, canon.linear_map)
    c = adapted.coefficient((2, 2))
    N = adapted.max_degree
    for d in range(6, N + 1, 2):
        first = adapted.coefficient((1, d - 1))
        if not _vanishes(first, scale, tolerances):
            adapted = shear(adapted, 0, 1, d - 3, -first / (2 * c))
        second = adapted.coefficient((d - 1, 1))
        if not _vanishes(second, scale, tolerances):
            adapted = shear(adapted, 1, 0, d - 3, -second / (2 * c))
    pure_u = next(
        ((d, adapted.coefficient((d, 0))) for d in range(6, N + 1, 2)
         if not _vanishes(adapted.coefficient((d, 0)), scale, tolerances)),
        None,
    )
    pure_v = next(
        ((d, adapted.coefficient((0, d))) for d in range(6, N + 1, 2)
         if not _vanishes(adapted.coefficient((0, d)), scale, tolerances)),
        None,
    )
    if pure_u is None or pure_v is None:
        return None
    if pure_u[0] > pure_v[0]:
        pure_u, pure_v = pure_v, pure_u
    (du, cu), (dv, cv) = pure_u, pure_v
    modulus = float(c) * abs(float(cu)) ** (-2 / du) * abs(float(cv)) ** (-2 / dv)
    label = _make_label(
        "YeCandidate", (du // 2, dv // 2), sign_char(cu) + sign_char(cv), modulus, parity="even"
    )
    label.notes.append("candidate: leading coefficients only, the full determinant is not computed")
    label.details.update({"leading": [cu, cv], "x2y2": c, "linear_map": canon.linear_map})
    return label


# Pipeline


def _inertia(analysis):
    values = sorted((value for value, _ in analysis.eigenpairs), key=abs)
    regular = values[analysis.corank :]
    return [sum(1 for v in regular if v > 0), sum(1 for v in regular if v < 0)]


def _default_mu_max(corank, parity, N):
    if corank == 1:
        return N - 1 if parity == "general" else N // 2
    return N + 1 if parity == "general" else (N + 6) // 2


def _corank1(aligned, parity, mu_max, tolerances, scale):
    psi = _reduced(aligned, 1)
    if parity == "even":
        for mu in range(2, mu_max + 1):
            value = _univariate(psi, 2 * mu)
            if not _vanishes(value, scale, tolerances):
                label = _make_label("Ae", mu, sign_char(value), parity="even")
                label.details["a_e_seq"] = [_univariate(psi, 2 * m) for m in range(2, mu + 1)]
                return label
        return _make_label(
            "Unknown",
            parity="even",
            reason=f"a_(e,μ) vanishes for μ <= {mu_max}; raise the jet degree",
        )
    for mu in range(2, mu_max + 1):
        value = _univariate(psi, mu + 1)
        if not _vanishes(value, scale, tolerances):
            label = _make_label("A", mu, sign_char(value))
            label.details["a_seq"] = [_univariate(psi, m + 1) for m in range(2, mu + 1)]
            if mu % 2 == 0:
                label.notes.append("±x^{μ+1} are equivalent for even μ; the sign echoes a_μ")
            return label
    return _make_label("Unknown", reason=f"a_μ vanishes for μ <= {mu_max}; raise the jet degree")


def _e6(psi, cubic, tolerances, scale):
    line = next(f.coeffs for f in factor_form(cubic, all(is_exact(c) for c in cubic), tolerances)
                if f.multiplicity == 3)
    w = line_kernel(line)
    e = form_eval(series_form(psi, 4), w)
    if _vanishes(e, scale, tolerances):
        return _make_label(
            "Unknown",
            reason="cubic part is a cube and the quartic vanishes on its line (E_7 or worse)",
        )
    label = _make_label("E6", 6, sign_char(e))
    label.notes.append(DERIVED_BEYOND_TABLES)
    label.details["quartic_on_line"] = e
    return label


def _corank2_general(aligned, mu_max, tolerances, scale):
    if aligned.max_degree < 3:
        raise InsufficientJet("corank-2 classification needs degree 3")
    psi = _reduced(aligned, 2)
    cubic = series_form(psi, 3)
    if all(_vanishes(c, scale, tolerances) for c in cubic):
        return _make_label(
            "Unknown", reason="cubic part vanishes (X_9 or worse, codimension >= 7)"
        )
    disc = cubic_discriminant(*cubic)
    if not _vanishes(disc, scale**4, tolerances):
        label = _make_label("D", 4, sign_char(disc))
        label.details["delta3"] = disc
        return label
    try:
        adaptation = adapt_d(psi, tolerances)
    except CubicIsCube:
        if aligned.max_degree < 4:
            raise InsufficientJet("E_6 detection needs degree 4")
        return _e6(psi, cubic, tolerances, scale)
    except CubicZero:
        return _make_label("Unknown", reason="cubic part vanishes")
    top = min(mu_max, psi.max_degree + 1)
    values = []
    for mu in range(4, top + 1):
        value = adaptation.d_value(mu)
        values.append(value)
        if mu > 4 and not _vanishes(value, scale, tolerances):
            label = _make_label("D", mu, sign_char(value))
            label.details.update(
                {"d_seq": values, "delta3": disc, "linear_map": adaptation.linear_map}
            )
            label.notes.extend(adaptation.notes)
            return label
    return _make_label("Unknown", reason=f"d_μ vanishes for μ <= {top}; raise the jet degree")


def _corank2_even(aligned, mu_max, tolerances, scale):
    if aligned.max_degree < 4:
        raise InsufficientJet("even corank-2 classification needs degree 4")
    psi = _reduced(aligned, 2)
    quartic = series_form(psi, 4)
    try:
        canon = canonical_4form(quartic, tolerances=tolerances)
    except ZeroForm:
        return _make_label(
            "Unknown",
            parity="even",
            reason="quartic part vanishes (codimension beyond the catalogue)",
        )
    details = {"canonical_4form": canon.to_dict(), "delta4": quartic_discriminant(*quartic)}
    notes = list(canon.notes)
    if not canon.exact:
        notes.append("the quartic was canonicalized in floating point")

    label = None
    if canon.case_id == 1 and not canon.definite:
        label = _make_label("Xe", 5, canon.sign_text, canon.a, parity="even")
    elif canon.case_id == 1:
        if aligned.max_degree < 6:
            raise InsufficientJet("Ytilde_(e,3) detection needs degree 6")
        a = _ytilde_modulus(psi, canon, tolerances)
        if a is None:
            label = _make_label(
                "Unknown", parity="even", reason="a₃ vanishes (Ytilde_(e,r) with r >= 4 or worse)"
            )
        else:
            label = _make_label("YtildeE", 3, canon.signs[0], a, parity="even")
    elif canon.case_id == 2:
        adaptation = xe_adaptation(psi, canon, tolerances)
        top = min(mu_max, (psi.max_degree + 6) // 2)
        values = [adaptation.value(mu) for mu in range(5, top + 1)]
        details["x_e_seq"] = values
        sign_data = sign_char(adaptation.diagonal[0]) + sign_char(adaptation.diagonal[1])
        for mu, value in zip(range(5, top + 1), values, strict=True):
            if mu > 5 and not _vanishes(value, scale, tolerances):
                modulus = value / math.factorial(2 * mu - 6)
                label = _make_label("Xe", mu, sign_data, modulus, parity="even")
                break
        else:
            label = _make_label(
                "Unknown",
                parity="even",
                reason=f"x_(e,μ) vanishes for μ <= {top}; raise the jet degree",
            )
    elif canon.case_id == 3:
        label = _ye_candidate(psi, canon, tolerances, scale) or _make_label(
            "Unknown", parity="even", reason="x²y² 4-jet without pure terms up to the jet degree"
        )
    elif canon.case_id == 4:
        if aligned.max_degree < 6:
            raise InsufficientJet("Z_(e,7) detection needs degree 6")
        label = _ze_from_psi(psi, canon, tolerances, scale) or _make_label(
            "Unknown", parity="even", reason="the y⁶ coefficient vanishes (codimension >= 6)"
        )
    else:
        label = _make_label(
            "Unknown", parity="even", reason="4-jet ±x⁴ (codimension beyond the catalogue)"
        )
    label.details.update(details)
    label.notes.extend(notes)
    return label


def classify(jet, parity=None, mu_max=None, tol=None, tolerances=DEFAULT_TOLERANCES):
    """Classify the critical point of a jet at the origin."""
    tolerances = tolerances.with_overrides(zero=tol)
    parity = parity or jet.parity
    if parity != jet.parity:
        jet = Jet(jet.series, jet.mode, parity)
    confidence = "heuristic" if jet.mode == "float" else "exact"
    try:
        analysis = hessian_analysis(jet, tolerances=tolerances)
    except NotCritical as e:
        return _make_label("Regular", parity=parity, confidence=confidence, reason=str(e))

    inertia = _inertia(analysis)
    corank = analysis.corank
    if corank == 0:
        label = _make_label("Morse", 1, "+" * inertia[0] + "-" * inertia[1])
    else:
        aligned = align_kernel(jet, analysis)
        limit = _default_mu_max(corank, parity, jet.max_degree)
        top = min(mu_max, limit) if mu_max else limit
        scale = jet.scale_reference(2, jet.max_degree)
        if corank == 1:
            label = _corank1(aligned, parity, top, tolerances, scale)
        elif corank == 2 and parity == "general":
            label = _corank2_general(aligned, top, tolerances, scale)
        elif corank == 2:
            label = _corank2_even(aligned, top, tolerances, scale)
        else:
            label = _make_label(
                "Unknown",
                reason=f"corank {corank}: codimension at least {corank * (corank + 1) // 2}",
            )
            label.details["codim_lower_bound"] = corank * (corank + 1) // 2
        if mu_max and mu_max > limit:
            label.notes.append(f"mu_max capped at {limit} by the jet degree")
        label.details["aligning_map"] = analysis.aligning_map
    label.parity = parity
    label.confidence = confidence
    label.details["corank"] = corank
    label.details["regular_inertia"] = inertia
    if confidence == "heuristic":
        label.notes.append("floating-point jet: zero tests are relative to the coefficient scale")
    return label


def classify_many(jets, parity=None, mu_max=None, tolerances=DEFAULT_TOLERANCES, max_workers=None):
    """Classify several jets in a thread pool; results keep the input order."""
    workers = max_workers or thread_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(lambda jet: classify(jet, parity, mu_max, tolerances=tolerances), jets)
        )

