"""Binary forms: arithmetic, discriminants, factorization and canonical quartics.

A binary form of degree d is the coefficient list [c_0, ..., c_d] of
Σ c_i x^{d-i} y^i. Linear maps act by substitution, old = M·new.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np
import sympy

from germlab.models.errors import AdaptationFailure, ZeroForm
from germlab.utils.exact import exact_root, from_sympy, is_exact, real_root, scalar_to_json
from germlab.utils.settings import DEFAULT_TOLERANCES

X, Y = sympy.symbols("x y")


def form_scale(form, factor):
    return [c * factor for c in form]


def form_add(f, g):
    if len(f) != len(g):
        raise ValueError("forms of different degree")
    return [a + b for a, b in zip(f, g, strict=True)]


def form_sub(f, g):
    return form_add(f, form_scale(g, -1))


def form_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def form_pow(form, n):
    out = [1]
    for _ in range(n):
        out = form_mul(out, form)
    return out


def form_diff_x(form):
    d = len(form) - 1
    return [form[i] * (d - i) for i in range(d)] or [0]


def form_diff_y(form):
    return [form[i] * i for i in range(1, len(form))] or [0]


def form_eval(form, point):
    x, y = point
    d = len(form) - 1
    return sum(c * x ** (d - i) * y**i for i, c in enumerate(form))


def transform_form(form, matrix):
    """Coefficients of f(M·(u, v)) in (u, v)."""
    d = len(form) - 1
    x_image = [matrix[0][0], matrix[0][1]]
    y_image = [matrix[1][0], matrix[1][1]]
    out = [0] * (d + 1)
    for i, c in enumerate(form):
        if c == 0:
            continue
        term = form_mul(form_pow(x_image, d - i), form_pow(y_image, i))
        for j, value in enumerate(term):
            out[j] += c * value
    return out


def form_to_sympy(form):
    d = len(form) - 1
    return sum(
        (sympy.Rational(c) if is_exact(c) else sympy.Float(c)) * X ** (d - i) * Y**i
        for i, c in enumerate(form)
    )


def form_scale_reference(form):
    return max((abs(float(c)) for c in form), default=0.0)


def is_negligible(value, scale, tol):
    if is_exact(value):
        return value == 0
    return abs(value) <= tol * max(scale, 1e-300)


def cubic_discriminant(A, B, C, D):
    """Δ₃ of A x³ + B x²y + C xy² + D y³; nonzero exactly for squarefree cubics."""
    return 4 * (B**3 * D + A * C**3) + 27 * A**2 * D**2 - B**2 * C**2 - 18 * A * B * C * D


def quartic_discriminant(A, B, C, D, E):
    """Δ₄ of A x⁴ + B x³y + C x²y² + D xy³ + E y⁴; nonzero exactly for squarefree quartics."""
    return (
        -4 * (A * C**3 * D**2 + B**3 * D**3 + B**2 * C**3 * E)
        - 27 * (A**2 * D**4 + B**4 * E**2)
        + B**2 * C**2 * D**2
        + 18 * (A * B * C * D**3 + B**3 * C * D * E)
        + 144 * (A**2 * C * D**2 * E + A * B**2 * C * E**2)
        - 6 * A * B**2 * D**2 * E
        - 80 * A * B * C**2 * D * E
        - 192 * A**2 * B * D * E**2
        + 16 * A * E * (C**2 - 4 * A * E) ** 2
    )


@dataclass(frozen=True)
class FormFactor:
    """A real factor of a binary form with its multiplicity.

    Exact factors are irreducible over the rationals; a rational quadratic may
    still split over the reals.
    """

    coeffs: tuple
    multiplicity: int
    exact: bool = True

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_definite(self):
        if self.degree != 2:
            return False
        a, b, c = self.coeffs
        return b * b - 4 * a * c < 0

    def real_lines(self):
        """Floating linear factors of a quadratic with real roots."""
        a, b, c = (float(v) for v in self.coeffs)
        if abs(a) < 1e-300:
            # b xy + c y² = y (b x + c y)
            return [(0.0, 1.0), (b, c)]
        disc = b * b - 4 * a * c
        root = np.sqrt(max(disc, 0.0))
        return [(1.0, -t) for t in ((-b + root) / (2 * a), (-b - root) / (2 * a))]


def _exact_factors(form):
    _, factors = sympy.factor_list(form_to_sympy(form), X, Y)
    out = []
    for factor, multiplicity in factors:
        poly = sympy.Poly(factor, X, Y)
        degree = poly.total_degree()
        if degree == 0:
            continue
        coeffs = tuple(
            from_sympy(poly.coeff_monomial(X ** (degree - i) * Y**i), "exact")
            for i in range(degree + 1)
        )
        out.append(FormFactor(coeffs, int(multiplicity), True))
    return out


def _cluster(values, tol):
    clusters = []
    for value in values:
        for cluster in clusters:
            center = sum(cluster) / len(cluster)
            if abs(value - center) <= tol * max(1.0, abs(center)):
                cluster.append(value)
                break
        else:
            clusters.append([value])
    return [(sum(c) / len(c), len(c)) for c in clusters]


def _float_factors(form, tolerances):
    d = len(form) - 1
    values = [float(c) for c in form]
    scale = form_scale_reference(values)
    # leading zeros in t = x/y are roots at infinity, i.e. factors of y
    at_infinity = 0
    while at_infinity < d and abs(values[at_infinity]) <= tolerances.form_zero * scale:
        at_infinity += 1
    out = []
    if at_infinity:
        out.append(FormFactor((0.0, 1.0), at_infinity, False))
    roots = np.roots(values[at_infinity:]) if at_infinity < d else []
    real = [r.real for r in roots if abs(r.imag) <= tolerances.root_cluster * max(1.0, abs(r))]
    upper = [r for r in roots if r.imag > tolerances.root_cluster * max(1.0, abs(r))]
    for center, count in _cluster(real, tolerances.root_cluster):
        out.append(FormFactor((1.0, -float(center)), count, False))
    for center, count in _cluster(upper, tolerances.root_cluster):
        out.append(
            FormFactor((1.0, -2.0 * center.real, float(abs(center) ** 2)), count, False)
        )
    return out


def factor_form(form, exact, tolerances=DEFAULT_TOLERANCES):
    """Real factors with multiplicities, highest multiplicity first."""
    if all(c == 0 for c in form):
        raise ZeroForm("the form vanishes identically")
    factors = _exact_factors(form) if exact else _float_factors(form, tolerances)
    return sorted(factors, key=lambda f: (-f.multiplicity, f.degree))


def line_kernel(line):
    """Direction w with L(w) = 0 for L = αx + βy."""
    alpha, beta = line
    return (-beta, alpha)


def line_unit(line):
    """Point p with L(p) = 1."""
    alpha, beta = line
    if abs(alpha) >= abs(beta):
        return (1 / alpha if is_exact(alpha) else 1.0 / alpha, 0)
    return (0, 1 / beta if is_exact(beta) else 1.0 / beta)


def columns(first, second):
    return ((first[0], second[0]), (first[1], second[1]))


def matrix_product(left, right):
    return tuple(
        tuple(sum(left[i][k] * right[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def _fraction(value):
    return Fraction(value) if is_exact(value) else value


@dataclass(frozen=True)
class FourFormCanon:
    """Canonical representative of a real binary quartic.

    Cases: 1 ±x⁴+ax²y²±y⁴, 2 x²(±x²±y²), 3 ±x²y², 4 x³y, 5 ±x⁴. Case 1 also
    covers ±(x²+y²)² with definite=True. `linear_map` realizes the canonical
    form; `diagonal_map` (cases 1 and 2) only removes the x³y and xy³ terms
    and keeps rational entries, giving `diagonal` = (A, C, E).
    """

    case_id: int
    linear_map: tuple
    signs: tuple
    a: object = None
    definite: bool = False
    exact: bool = True
    diagonal: tuple | None = None
    diagonal_map: tuple | None = None
    orbit: tuple = ()
    lines: tuple = ()
    quadratic: tuple | None = None
    notes: tuple = field(default=())

    @property
    def sign_text(self):
        return "".join(self.signs)

    def to_dict(self):
        def matrix(rows):
            return [[scalar_to_json(v) for v in row] for row in rows] if rows else None

        return {
            "case": self.case_id,
            "linear_map": matrix(self.linear_map),
            "signs": self.sign_text,
            "a": scalar_to_json(self.a),
            "definite": self.definite,
            "exact": self.exact,
            "diagonal": [scalar_to_json(v) for v in self.diagonal] if self.diagonal else None,
            "modulus_orbit": [
                {"a": scalar_to_json(item["a"]), "signs": item["signs"]} for item in self.orbit
            ],
        }


def _sign_char(value):
    return "+" if value > 0 else "-"


def _inverse_fourth(value):
    root = real_root(value, 4)
    return 1 / root if is_exact(root) else 1.0 / root


def _inverse_sqrt(value):
    root = real_root(value, 2)
    return 1 / root if is_exact(root) else 1.0 / root


def _scaled_columns(matrix, first, second):
    return (
        (matrix[0][0] * first, matrix[0][1] * second),
        (matrix[1][0] * first, matrix[1][1] * second),
    )


def _all_exact(matrix):
    return all(is_exact(v) for row in matrix for v in row)


def _case5(quartic, line):
    p, w = line_unit(line), line_kernel(line)
    base = columns(p, w)
    lead = transform_form(quartic, base)[0]
    linear = _scaled_columns(base, _inverse_fourth(lead), 1)
    return FourFormCanon(
        5, linear, (_sign_char(lead),), exact=_all_exact(linear), lines=(line,)
    )


def _case4(quartic, triple):
    p, w = line_unit(triple), line_kernel(triple)
    coeffs = transform_form(quartic, columns(p, w))
    a0, a1 = coeffs[0], coeffs[1]
    first = (p[0] - a0 / a1 * w[0], p[1] - a0 / a1 * w[1])
    second = (w[0] / a1, w[1] / a1)
    linear = columns(first, second)
    return FourFormCanon(4, linear, (), exact=_all_exact(linear), lines=(triple,))


def _case3(quartic, first_line, second_line):
    rows = ((first_line[0], first_line[1]), (second_line[0], second_line[1]))
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    inverse = ((rows[1][1] / det, -rows[0][1] / det), (-rows[1][0] / det, rows[0][0] / det))
    middle = transform_form(quartic, inverse)[2]
    linear = _scaled_columns(inverse, _inverse_sqrt(middle), 1)
    return FourFormCanon(
        3,
        linear,
        (_sign_char(middle),),
        exact=_all_exact(linear),
        lines=(first_line, second_line),
    )


def _case2(quartic, double):
    p0, w = line_unit(double), line_kernel(double)
    coeffs = transform_form(quartic, columns(p0, w))
    shift = -(coeffs[1] / 2) / coeffs[2]
    p = (p0[0] + shift * w[0], p0[1] + shift * w[1])
    diagonal_map = columns(p, w)
    A, _, C, _, _ = transform_form(quartic, diagonal_map)
    alpha = _inverse_fourth(A)
    beta_sq = real_root(A, 2) / abs(C)
    beta = real_root(beta_sq, 2)
    linear = _scaled_columns(diagonal_map, alpha, beta)
    return FourFormCanon(
        2,
        linear,
        (_sign_char(A), _sign_char(C)),
        exact=_all_exact(linear),
        diagonal=(A, C, 0),
        diagonal_map=diagonal_map,
        lines=(double,),
    )


def _definite_square(quartic, quadratic):
    alpha, two_beta, gamma = quadratic
    beta = two_beta / 2
    shear = ((1, -beta / alpha), (0, 1))
    A, _, C, _, E = transform_form(quartic, shear)
    linear = _scaled_columns(shear, _inverse_fourth(A), _inverse_fourth(E))
    return FourFormCanon(
        1,
        linear,
        (_sign_char(A), _sign_char(E)),
        a=2 if A > 0 else -2,
        definite=True,
        exact=_all_exact(linear),
        diagonal=(A, C, E),
        diagonal_map=shear,
        quadratic=tuple(quadratic),
    )


def covariant_t(quartic):
    """Sextic covariant Q_x H_y - Q_y H_x with H the Hessian of Q.

    For x⁴ + a x²y² + y⁴ it equals 288(4 - a²)·(x⁵y - xy⁵); its real roots
    contain every axis pair that diagonalizes Q.
    """
    qx, qy = form_diff_x(quartic), form_diff_y(quartic)
    qxx, qxy, qyy = form_diff_x(qx), form_diff_y(qx), form_diff_y(qy)
    hessian = form_sub(form_mul(qxx, qyy), form_mul(qxy, qxy))
    return form_sub(form_mul(qx, form_diff_y(hessian)), form_mul(qy, form_diff_x(hessian)))


def _directions(sextic, exact, tolerances):
    if all(c == 0 for c in sextic):
        raise AdaptationFailure("the sextic covariant vanishes; the quartic is not squarefree")
    directions = []
    if exact:
        for factor in _exact_factors(sextic):
            if factor.degree == 1:
                directions.append(line_kernel(factor.coeffs))
        if len(directions) >= 2:
            return directions
    for factor in _float_factors([float(c) for c in sextic], tolerances):
        if factor.degree == 1:
            directions.append(line_kernel(factor.coeffs))
    return directions


def _diagonal_candidates(quartic, exact, tolerances):
    scale = form_scale_reference(quartic)
    identity = ((1, 0), (0, 1))
    candidates = []
    if is_negligible(quartic[1], scale, tolerances.form_zero) and is_negligible(
        quartic[3], scale, tolerances.form_zero
    ):
        candidates.append(identity)
    directions = _directions(covariant_t(quartic), exact, tolerances)
    for first, second in permutations(directions, 2):
        if abs(float(first[0] * second[1] - first[1] * second[0])) < 1e-12:
            continue
        candidates.append(columns(first, second))
    found = []
    for matrix in candidates:
        coeffs = transform_form(quartic, matrix)
        local = form_scale_reference(coeffs)
        if not (
            is_negligible(coeffs[1], local, tolerances.form_zero)
            and is_negligible(coeffs[3], local, tolerances.form_zero)
        ):
            continue
        A, _, C, _, E = coeffs
        if A < 0 < E:
            matrix = ((matrix[0][1], matrix[0][0]), (matrix[1][1], matrix[1][0]))
            A, E = E, A
        found.append((matrix, (A, C, E)))
    return found


def _modulus(A, C, E):
    product = abs(A * E)
    if is_exact(product):
        root = exact_root(product, 2)
        if root is not None:
            return C / root
    return float(C) / float(np.sqrt(float(product)))


def _case1(quartic, exact, tolerances):
    found = _diagonal_candidates(quartic, exact, tolerances)
    if not found:
        raise AdaptationFailure("no diagonalizing axes found for a squarefree quartic")
    entries = []
    for matrix, (A, C, E) in found:
        a = _modulus(A, C, E)
        entries.append(
            {
                "a": a,
                "signs": _sign_char(A) + _sign_char(E),
                "matrix": matrix,
                "diagonal": (A, C, E),
                "rank": (0 if A > 0 else 1, abs(float(a)), 0 if float(a) >= 0 else 1),
            }
        )
    entries.sort(key=lambda item: item["rank"])
    orbit = []
    seen = set()
    for entry in entries:
        key = (entry["signs"], round(float(entry["a"]), 9))
        if key not in seen:
            seen.add(key)
            orbit.append({k: v for k, v in entry.items() if k != "rank"})
    chosen = entries[0]
    A, C, E = chosen["diagonal"]
    diagonal_map = chosen["matrix"]
    linear = _scaled_columns(diagonal_map, _inverse_fourth(A), _inverse_fourth(E))
    return FourFormCanon(
        1,
        linear,
        tuple(chosen["signs"]),
        a=chosen["a"],
        exact=_all_exact(linear),
        diagonal=(A, C, E),
        diagonal_map=diagonal_map,
        orbit=tuple(orbit),
    )


def diagonal_presentations(canon):
    """All diagonalizing presentations (matrix, (A, C, E)) of a case-1 quartic."""
    return [(item["matrix"], item["diagonal"]) for item in canon.orbit]


def canonical_4form(quartic, exact=None, tolerances=DEFAULT_TOLERANCES):
    """Canonical case and realizing map of A x⁴ + B x³y + C x²y² + D xy³ + E y⁴."""
    quartic = [_fraction(c) for c in quartic]
    if len(quartic) != 5:
        raise ValueError("a quartic has five coefficients")
    if exact is None:
        exact = all(is_exact(c) for c in quartic)
    if not exact:
        quartic = [float(c) for c in quartic]
    scale = form_scale_reference(quartic)
    if all(is_negligible(c, scale, tolerances.form_zero) for c in quartic) or scale == 0:
        raise ZeroForm("the quartic vanishes identically")

    factors = factor_form(quartic, exact, tolerances)
    top = factors[0]
    if top.multiplicity == 1:
        return _case1(quartic, exact, tolerances)
    if top.multiplicity == 4:
        return _case5(quartic, top.coeffs)
    if top.multiplicity == 3:
        return _case4(quartic, top.coeffs)
    # multiplicity 2
    if top.degree == 2:
        if top.is_definite():
            return _definite_square(quartic, top.coeffs)
        first, second = top.real_lines()
        return _case3([float(c) for c in quartic], first, second)
    doubles = [f for f in factors if f.multiplicity == 2 and f.degree == 1]
    if len(doubles) == 2:
        return _case3(quartic, doubles[0].coeffs, doubles[1].coeffs)
    return _case2(quartic, top.coeffs)
