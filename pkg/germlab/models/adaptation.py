"""Coordinate adaptations of reduced two-variable series.

The D route brings the cubic part to ½x²y + D y³ and shears away the x·y^j
terms; the X_e route diagonalizes the quartic part to A u⁴ + C u²v² + E v⁴ and
shears away the u·v^j terms. Shears are chosen from the λ-free part and
applied to the whole series, so deformation data follows along.
"""

import math
from dataclasses import dataclass

from germlab.models.binary_forms import (
    columns,
    diagonal_presentations,
    factor_form,
    form_eval,
    is_negligible,
    line_kernel,
    line_unit,
)
from germlab.models.errors import AdaptationFailure, CubicIsCube, CubicZero
from germlab.models.series import Series
from germlab.utils.exact import exact_root, is_exact
from germlab.utils.settings import DEFAULT_TOLERANCES


def series_form(series, degree):
    """λ-free divided coefficients of degree d in the first two variables."""
    pad = (0,) * (series.nu - 2 + series.nparams)
    return [series.coefficient((degree - i, i, *pad)) for i in range(degree + 1)]


def series_scale(series, low=2):
    """Largest |raw partial| among λ-free terms of degree >= low."""
    nu = series.nu
    scale = 0.0
    for exps, coeff in series.terms.items():
        if any(exps[nu:]) or sum(exps[:nu]) < low:
            continue
        raw = abs(float(coeff)) * math.prod(math.factorial(a) for a in exps[:nu])
        scale = max(scale, raw)
    return scale


def is_exact_series(series):
    return all(is_exact(c) for c in series.terms.values())


def monomial(series, exps, coeff):
    """A one-term series shaped like `series`."""
    key = tuple(exps) + (0,) * series.nparams
    return Series(series.nu, series.max_degree, {key: coeff}, series.nparams)


def linear_substitution(series, matrix):
    """Series in new coordinates for old = M·new."""
    nu = series.nu
    images = []
    for i in range(nu):
        image = Series.zero(nu, series.max_degree, series.nparams)
        for j in range(nu):
            if matrix[i][j] != 0:
                term = Series.variable(nu, series.max_degree, j, series.nparams, matrix[i][j])
                image = image + term
        images.append(image)
    return series.compose(images, series.max_degree)


def shear(series, target, source, power, coeff):
    """Substitute k_target ↦ k_target + coeff·k_source^power."""
    nu = series.nu
    images = [Series.variable(nu, series.max_degree, i, series.nparams) for i in range(nu)]
    exps = [0] * nu
    exps[source] = power
    images[target] = images[target] + monomial(series, exps, coeff)
    return series.compose(images, series.max_degree)


def divide_by_line(form, line):
    """Quotient of a binary form by αx + βy, assuming exact divisibility."""
    alpha, beta = line
    d = len(form) - 1
    quotient = []
    if alpha != 0:
        previous = 0
        for k in range(d):
            value = (form[k] - beta * previous) / alpha
            quotient.append(value)
            previous = value
    else:
        quotient = [form[k] / beta for k in range(1, d + 1)]
    return quotient


def _positive_direction(vector):
    lead = next((v for v in vector if v != 0), 1)
    return vector if lead > 0 else (-vector[0], -vector[1])


def _bilinear(q, u, v):
    q0, q1, q2 = q
    return q0 * u[0] * v[0] + q1 * (u[0] * v[1] + u[1] * v[0]) / 2 + q2 * u[1] * v[1]


@dataclass(frozen=True)
class DAdaptation:
    """Reduced series with cubic part ½x²y + D y³ and no x·y^j terms, 3 <= j < N."""

    series: Series
    linear_map: tuple
    shears: tuple
    exact: bool
    notes: tuple = ()

    def d_value(self, mu):
        """d_μ = (μ-1)!·[y^{μ-1}]."""
        return math.factorial(mu - 1) * self.series.coefficient(
            (0, mu - 1) + (0,) * self.series.nparams
        )


def _simple_line(cubic, exact, tolerances):
    factors = factor_form(cubic, exact, tolerances)
    if factors[0].multiplicity == 3:
        raise CubicIsCube("the cubic part is a perfect cube")
    lines = [f.coeffs for f in factors if f.multiplicity == 1 and f.degree == 1]
    if not lines:
        return None
    scale = max(abs(float(c)) for c in cubic)
    for line in lines:
        if is_negligible(line[0], scale, tolerances.form_zero):
            return (0, line[1]) if exact else (0.0, line[1])
    return lines[0]


def adapt_d(series, tolerances=DEFAULT_TOLERANCES):
    """Bring a corank-2 reduced series with a non-cube cubic part into D shape."""
    if series.nu != 2:
        raise AdaptationFailure("the D adaptation needs a two-variable series")
    exact = is_exact_series(series)
    cubic = series_form(series, 3)
    scale = series_scale(series)
    if all(is_negligible(c, scale, tolerances.zero) for c in cubic):
        raise CubicZero("the cubic part vanishes")
    notes = []
    line = _simple_line(cubic, exact, tolerances)
    if line is None:
        # an irreducible rational cubic has only irrational real lines
        series = series.map_coefficients(float)
        cubic = [float(c) for c in cubic]
        exact = False
        notes.append("cubic has no rational simple factor; adapted in floating point")
        line = _simple_line(cubic, False, tolerances)
    q = divide_by_line(cubic, line)
    w = _positive_direction(line_kernel(line))
    p = line_unit(line)
    qw = form_eval(q, w)
    if is_negligible(qw, scale, tolerances.form_zero):
        raise AdaptationFailure("the chosen line is not a simple factor of the cubic")
    bilinear = _bilinear(q, w, p)
    second = tuple((p[i] - bilinear / qw * w[i]) / (2 * qw) for i in range(2))
    matrix = columns(w, second)
    adapted = linear_substitution(series, matrix)

    pad = (0,) * series.nparams
    lead = adapted.coefficient((2, 1, *pad))
    shears = []
    for j in range(3, adapted.max_degree):
        c = adapted.coefficient((1, j, *pad))
        if c == 0 or (not exact and is_negligible(c, scale, tolerances.zero)):
            continue
        s = -c / (2 * lead)
        adapted = shear(adapted, 0, 1, j - 1, s)
        shears.append((j - 1, s))
    return DAdaptation(adapted, matrix, tuple(shears), exact, tuple(notes))


@dataclass(frozen=True)
class XeAdaptation:
    """Reduced even series with quartic part A u⁴ + C u²v² + E v⁴ and no u·v^j terms."""

    series: Series
    linear_map: tuple
    diagonal: tuple
    shears: tuple
    exact: bool

    @property
    def normalizer(self):
        """|A|^{1/2}/|C|, the squared v-scale of the (ε, η) normalization."""
        A, C, _ = self.diagonal
        return abs(float(A)) ** 0.5 / abs(float(C))

    def raw_value(self, mu):
        """(2μ-6)!·[v^{2μ-6}] before normalization."""
        power = 2 * mu - 6
        return math.factorial(power) * self.series.coefficient(
            (0, power) + (0,) * self.series.nparams
        )

    def scale_factor(self, mu):
        """(|A|^{1/2}/|C|)^{μ-3}, exact when possible."""
        A, C, _ = self.diagonal
        m = mu - 3
        if is_exact(A) and is_exact(C):
            if m % 2 == 0:
                return (abs(A) / (C * C)) ** (m // 2)
            root = exact_root(abs(A), 2)
            if root is not None:
                return (root / abs(C)) ** m
        return self.normalizer**m

    def value(self, mu):
        """x_{e,μ} in the normalized coordinates where A = ε and C = η."""
        return self.scale_factor(mu) * self.raw_value(mu)

    @property
    def eps(self):
        return 1 if self.diagonal[0] > 0 else -1

    @property
    def eta(self):
        return 1 if self.diagonal[1] > 0 else -1


def xe_presentation(canon):
    """A diagonalizing presentation with C != 0, preferring the canonical one."""
    if canon.case_id == 2:
        return canon.diagonal_map, canon.diagonal
    if canon.case_id != 1 or canon.definite:
        raise AdaptationFailure(f"case {canon.case_id} quartics have no X_e presentation")
    if canon.diagonal is not None and canon.diagonal[1] != 0:
        return canon.diagonal_map, canon.diagonal
    for matrix, diagonal in diagonal_presentations(canon):
        if diagonal[1] != 0 and abs(float(diagonal[1])) > 1e-12:
            return matrix, diagonal
    raise AdaptationFailure("every diagonal presentation has a vanishing u²v² term")


def adapt_xe(series, presentation, tolerances=DEFAULT_TOLERANCES):
    """Diagonalize the quartic part and shear away u·v^j for odd j >= 5."""
    matrix, _ = presentation
    adapted = linear_substitution(series, matrix)
    exact = is_exact_series(adapted)
    pad = (0,) * series.nparams
    A = adapted.coefficient((4, 0, *pad))
    C = adapted.coefficient((2, 2, *pad))
    E = adapted.coefficient((0, 4, *pad))
    scale = series_scale(adapted)
    if is_negligible(C, scale, tolerances.form_zero):
        raise AdaptationFailure("the u²v² coefficient vanishes in this presentation")
    shears = []
    for j in range(5, adapted.max_degree, 2):
        c = adapted.coefficient((1, j, *pad))
        if c == 0 or (not exact and is_negligible(c, scale, tolerances.zero)):
            continue
        s = -c / (2 * C)
        adapted = shear(adapted, 0, 1, j - 2, s)
        shears.append((j - 2, s))
    return XeAdaptation(adapted, matrix, (A, C, E), tuple(shears), exact)
