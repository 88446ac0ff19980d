"""Truncated Taylor jets at the origin and their Hessian analysis."""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
import sympy

from germlab.models.errors import (
    DegreeOverflow,
    EvaluationFailure,
    InsufficientJet,
    NotCritical,
    OddnessViolation,
    ParityViolation,
    PreconditionViolated,
    SingularLinearPart,
)
from germlab.models.series import Series
from germlab.utils.exact import check_mode, coerce, from_sympy, is_exact, scalar_to_json
from germlab.utils.settings import DEFAULT_TOLERANCES

PARITIES = ("general", "even")


def check_parity(parity):
    if parity not in PARITIES:
        raise ValueError(f"Unknown parity {parity!r}; expected one of {', '.join(PARITIES)}")
    return parity


def monomial_text(exponents, names=None):
    """Render an exponent tuple as k1^2*k2."""
    names = names or [f"k{i + 1}" for i in range(len(exponents))]
    parts = []
    for name, power in zip(names, exponents, strict=True):
        if power == 1:
            parts.append(name)
        elif power > 1:
            parts.append(f"{name}^{power}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Exponent vector of a monomial."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exponents = tuple(int(a) for a in self.exponents)
        if any(a < 0 for a in exponents):
            raise ValueError(f"negative exponent in {exponents}")
        object.__setattr__(self, "exponents", exponents)

    @classmethod
    def of(cls, *exponents):
        return cls(tuple(exponents))

    @property
    def degree(self):
        return sum(self.exponents)

    @property
    def nu(self):
        return len(self.exponents)

    def factorial(self):
        return math.prod(math.factorial(a) for a in self.exponents)

    def __str__(self) -> str:
        return monomial_text(self.exponents)


def _exponents(alpha):
    return alpha.exponents if isinstance(alpha, MultiIndex) else tuple(alpha)


class Jet:
    """Truncated Taylor expansion of a function at the origin.

    Coefficients are divided, c_α = ∂^α f(0)/α!; raw partials come from
    raw_partial. A jet never changes after construction.
    """

    __slots__ = ("_series", "mode", "parity")

    def __init__(self, series, mode="exact", parity="general") -> None:
        check_mode(mode)
        check_parity(parity)
        if series.nparams:
            raise ValueError("a jet has no parameters; use DeformationJet")
        if series.max_degree < 1:
            raise InsufficientJet("jets need max_degree >= 1")
        if parity == "even":
            odd = sorted(e for e in series.terms if sum(e) % 2)
            if odd:
                raise ParityViolation(
                    f"odd-degree coefficient at {monomial_text(odd[0])} under even parity"
                )
        if mode == "float":
            series = series.map_coefficients(float)
        self._series = series
        self.mode = mode
        self.parity = parity

    @property
    def series(self):
        return self._series

    @property
    def nu(self):
        return self._series.nu

    @property
    def max_degree(self):
        return self._series.max_degree

    @property
    def coeffs(self):
        return {MultiIndex(e): c for e, c in self._series.terms.items()}

    @property
    def heuristic(self):
        return self.mode == "float"

    def __repr__(self) -> str:
        return (
            f"Jet(nu={self.nu}, N={self.max_degree}, mode={self.mode}, parity={self.parity}, "
            f"{self.to_text()})"
        )

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self._series == other._series
            and self.mode == other.mode
            and self.parity == other.parity
        )

    __hash__ = None

    def coefficient(self, alpha):
        exps = _exponents(alpha)
        if len(exps) != self.nu:
            raise ValueError(f"multi-index {exps} does not have length {self.nu}")
        if sum(exps) > self.max_degree:
            raise DegreeOverflow(
                f"degree {sum(exps)} exceeds the truncation degree {self.max_degree}"
            )
        return self._series.coefficient(exps)

    def binary_form(self, degree):
        """Divided coefficients of degree d in the first two variables, k1 power descending."""
        if self.nu < 2:
            raise PreconditionViolated("binary forms need at least two variables")
        if degree > self.max_degree:
            raise InsufficientJet(f"need degree {degree}, jet has {self.max_degree}")
        pad = (0,) * (self.nu - 2)
        return [self._series.coefficient((degree - i, i, *pad)) for i in range(degree + 1)]

    def homogeneous(self, degree):
        """Divided coefficients of one degree, first exponent descending."""
        if degree > self.max_degree:
            raise InsufficientJet(f"need degree {degree}, jet has {self.max_degree}")
        return [self._series.coefficient(e) for e in _compositions(degree, self.nu)]

    def scale_reference(self, low=2, high=4):
        """Largest |raw partial| over degrees low..high; the floating zero-test scale."""
        scale = 0.0
        for exps, coeff in self._series.terms.items():
            if low <= sum(exps) <= high:
                raw = abs(float(coeff)) * MultiIndex(exps).factorial()
                scale = max(scale, raw)
        return scale

    def to_float(self):
        return Jet(self._series.map_coefficients(float), "float", self.parity)

    def scaled(self, factor):
        factor = coerce(factor, self.mode)
        return Jet(self._series.scale(factor), self.mode, self.parity)

    def truncated(self, max_degree):
        return Jet(self._series.with_max_degree(max_degree), self.mode, self.parity)

    def stabilized(self, signs):
        """Add ±k_j² in new trailing variables (a nondegenerate quadratic summand)."""
        extra = len(signs)
        nu = self.nu + extra
        terms = {e + (0,) * extra: c for e, c in self._series.terms.items()}
        for i, sgn in enumerate(signs):
            exps = [0] * nu
            exps[self.nu + i] = 2
            terms[tuple(exps)] = coerce(1 if sgn > 0 else -1, self.mode)
        return Jet(Series(nu, self.max_degree, terms), self.mode, self.parity)

    def to_sympy(self, variables=None):
        variables = variables or sympy.symbols(f"k1:{self.nu + 1}")
        expr = sympy.Integer(0)
        for exps, coeff in self._series.terms.items():
            value = sympy.Rational(coeff) if is_exact(coeff) else sympy.Float(coeff)
            expr += value * sympy.Mul(*[v**a for v, a in zip(variables, exps, strict=True)])
        return expr

    def to_text(self):
        if not self._series.terms:
            return "0"
        parts = []
        for exps, coeff in sorted(self._series.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            parts.append(f"{scalar_to_json(coeff)}*{monomial_text(exps)}")
        return " + ".join(parts)


def jet_from_coeffs(nu, max_degree, entries, parity="general", mode="exact"):
    """Build a jet from (multi-index, divided coefficient) pairs."""
    check_mode(mode)
    check_parity(parity)
    if max_degree < 2:
        raise InsufficientJet("jets need max_degree >= 2")
    if isinstance(entries, dict):
        entries = entries.items()
    terms = {}
    for alpha, value in entries:
        exps = _exponents(alpha)
        if len(exps) != nu:
            raise ValueError(f"multi-index {exps} does not have length {nu}")
        if sum(exps) > max_degree:
            raise DegreeOverflow(f"{monomial_text(exps)} exceeds degree {max_degree}")
        value = coerce(value, mode)
        if value == 0:
            continue
        if parity == "even" and sum(exps) % 2:
            raise ParityViolation(f"odd-degree coefficient at {monomial_text(exps)}")
        terms[exps] = terms.get(exps, 0) + value
    return Jet(Series(nu, max_degree, terms), mode, parity)


def raw_partial(jet, alpha):
    """∂^α f(0) = α!·c_α."""
    exps = _exponents(alpha)
    return jet.coefficient(exps) * MultiIndex(exps).factorial()


def _as_series(image, nu):
    series = image.series if isinstance(image, Jet) else image
    if series.nparams:
        raise ValueError("substitutions cannot carry parameters")
    if series.nu != nu:
        raise ValueError("all substitution components must share one variable count")
    return series


def linear_part(images):
    """Matrix of linear coefficients of a list of substitution series."""
    nu = images[0].nu
    rows = []
    for image in images:
        row = []
        for j in range(nu):
            exps = [0] * nu
            exps[j] = 1
            row.append(image.coefficient(tuple(exps)))
        rows.append(row)
    return rows


def _invertible(matrix, exact):
    if exact:
        return sympy.Matrix(matrix).det() != 0
    values = np.array(matrix, dtype=float)
    singular = np.linalg.svd(values, compute_uv=False)
    return singular[-1] > DEFAULT_TOLERANCES.kernel * max(singular[0], 1.0)


def compose_poly(jet, subst):
    """Jet of f∘h truncated to the jet's degree, for a polynomial map h with h(0)=0."""
    if len(subst) != jet.nu:
        raise ValueError(f"expected {jet.nu} substitution components, got {len(subst)}")
    target_nu = (subst[0].series if isinstance(subst[0], Jet) else subst[0]).nu
    if target_nu != jet.nu:
        raise SingularLinearPart("a change of variables must keep the number of variables")
    images = [_as_series(image, target_nu) for image in subst]
    for image in images:
        if image.coefficient((0,) * target_nu) != 0:
            raise PreconditionViolated("substitutions must have zero constant term")
        if jet.parity == "even" and any(sum(e) % 2 == 0 for e in image.terms):
            raise OddnessViolation("even jets only admit odd substitutions")
    exact = jet.mode == "exact" and all(
        is_exact(c) for image in images for c in image.terms.values()
    )
    if not _invertible(linear_part(images), exact):
        raise SingularLinearPart("the linear part of the substitution is not invertible")
    images = [image.with_max_degree(jet.max_degree) for image in images]
    result = jet.series.compose(images, jet.max_degree)
    return Jet(result, "exact" if exact else "float", jet.parity)


def linear_change(jet, matrix):
    """compose_poly with the linear map old = M·new."""
    nu = jet.nu
    images = []
    for i in range(nu):
        terms = {}
        for j in range(nu):
            exps = [0] * nu
            exps[j] = 1
            terms[tuple(exps)] = matrix[i][j]
        images.append(Series(nu, jet.max_degree, terms))
    return compose_poly(jet, images)


@dataclass(frozen=True)
class HessianAnalysis:
    """Second-differential data of a jet at a critical origin.

    In exact mode the aligning map has mutually orthogonal primitive integer
    columns; in floating mode it is orthogonal.
    """

    hessian: tuple
    eigenpairs: tuple
    corank: int
    kernel_basis: tuple
    aligning_map: tuple
    regular_block_inverse: tuple | None
    mode: str
    threshold: float = 0.0

    def to_dict(self):
        def matrix(rows):
            return [[scalar_to_json(v) for v in row] for row in rows] if rows else rows

        return {
            "hessian": matrix(self.hessian),
            "eigenvalues": [value for value, _ in self.eigenpairs],
            "corank": self.corank,
            "kernel_basis": matrix(self.kernel_basis),
            "aligning_map": matrix(self.aligning_map),
            "regular_block_inverse": matrix(self.regular_block_inverse),
            "mode": self.mode,
        }


def hessian_matrix(jet):
    """Raw second partials as nested lists."""
    nu = jet.nu
    rows = []
    for i in range(nu):
        row = []
        for j in range(nu):
            exps = [0] * nu
            exps[i] += 1
            exps[j] += 1
            factor = 2 if i == j else 1
            row.append(jet.series.coefficient(tuple(exps)) * factor)
        rows.append(row)
    return rows


def _primitive(vector):
    """Rescale a rational vector to coprime integers with a positive leading entry."""
    values = [Fraction(int(v.p), int(v.q)) for v in vector]
    lcm = math.lcm(*(v.denominator for v in values))
    ints = [int(v * lcm) for v in values]
    gcd = math.gcd(*ints) or 1
    ints = [v // gcd for v in ints]
    lead = next((v for v in ints if v != 0), 1)
    if lead < 0:
        ints = [-v for v in ints]
    return [Fraction(v) for v in ints]


def _orthogonal_columns(vectors):
    if not vectors:
        return []
    return [_primitive(v) for v in sympy.GramSchmidt(vectors)]


def _block_inverse(aligned_hessian, corank, exact):
    size = len(aligned_hessian)
    if corank >= size:
        return None
    block = [row[corank:] for row in aligned_hessian[corank:]]
    if exact:
        inverse = sympy.Matrix(block).inv()
        return tuple(
            tuple(from_sympy(inverse[i, j], "exact") for j in range(size - corank))
            for i in range(size - corank)
        )
    inverse = np.linalg.inv(np.array(block, dtype=float))
    return tuple(tuple(float(v) for v in row) for row in inverse)


def _check_critical(jet, tolerances):
    scale = max(jet.scale_reference(1, 4), 0.0)
    for i in range(jet.nu):
        exps = [0] * jet.nu
        exps[i] = 1
        value = jet.series.coefficient(tuple(exps))
        if jet.mode == "exact":
            if value != 0:
                raise NotCritical(f"nonzero gradient component d/dk{i + 1} = {value}")
        elif abs(value) > tolerances.zero * max(scale, 1e-300):
            raise NotCritical(f"nonzero gradient component d/dk{i + 1} = {value}")


def hessian_analysis(jet, tol=None, tolerances=DEFAULT_TOLERANCES):
    """Corank, kernel and an aligning map sending the kernel to the first axes."""
    if jet.max_degree < 2:
        raise InsufficientJet("Hessian analysis needs max_degree >= 2")
    _check_critical(jet, tolerances)
    nu = jet.nu
    hessian = hessian_matrix(jet)
    values, vectors = np.linalg.eigh(np.array(hessian, dtype=float))
    eigenpairs = tuple(
        (float(values[i]), tuple(float(v) for v in vectors[:, i])) for i in range(nu)
    )
    identity = tuple(tuple(1 if i == j else 0 for j in range(nu)) for i in range(nu))

    if jet.mode == "exact":
        matrix = sympy.Matrix(hessian)
        kernel = _orthogonal_columns(matrix.nullspace())
        corank = len(kernel)
        if corank in (0, nu):
            aligning = identity
            kernel = [list(row) for row in identity[:corank]]
        else:
            complement = _orthogonal_columns(matrix.columnspace())
            columns = kernel + complement
            aligning = tuple(tuple(columns[j][i] for j in range(nu)) for i in range(nu))
        aligned = sympy.Matrix(aligning).T * matrix * sympy.Matrix(aligning)
        aligned_rows = [[aligned[i, j] for j in range(nu)] for i in range(nu)]
        return HessianAnalysis(
            hessian=tuple(tuple(row) for row in hessian),
            eigenpairs=eigenpairs,
            corank=corank,
            kernel_basis=tuple(tuple(v) for v in kernel),
            aligning_map=aligning,
            regular_block_inverse=_block_inverse(aligned_rows, corank, True),
            mode="exact",
        )

    tol = tolerances.kernel if tol is None else tol
    radius = float(np.max(np.abs(values))) if nu else 0.0
    threshold = tol * max(radius, jet.scale_reference())
    order = sorted(range(nu), key=lambda i: abs(values[i]))
    kernel_idx = [i for i in order if abs(values[i]) <= threshold]
    corank = len(kernel_idx)
    if corank == 0:
        aligning = tuple(tuple(float(v) for v in row) for row in identity)
    else:
        columns = []
        for i in order:
            column = vectors[:, i]
            lead = next((v for v in column if abs(v) > 1e-12), 1.0)
            columns.append(column if lead > 0 else -column)
        aligning = tuple(tuple(float(columns[j][i]) for j in range(nu)) for i in range(nu))
    aligned = np.array(aligning).T @ np.array(hessian, dtype=float) @ np.array(aligning)
    return HessianAnalysis(
        hessian=tuple(tuple(float(v) for v in row) for row in hessian),
        eigenpairs=eigenpairs,
        corank=corank,
        kernel_basis=tuple(tuple(float(v) for v in vectors[:, i]) for i in kernel_idx),
        aligning_map=aligning,
        regular_block_inverse=_block_inverse(aligned.tolist(), corank, False),
        mode="float",
        threshold=threshold,
    )


def align_kernel(jet, analysis):
    """Rotate the jet so that the Hessian kernel spans the first corank coordinates."""
    return linear_change(jet, analysis.aligning_map)


def finite_difference_jet(evaluator, nu, max_degree, step=1e-2, parity="general"):
    """Floating jet from central differences with one Richardson level.

    The α-th partial uses the tensor-product stencil with nodes at (a/2 - j)·h
    along each axis; (4·D(h/2) - D(h))/3 removes the h² error term.
    """
    check_parity(parity)
    if step <= 0:
        raise ValueError("step must be positive")
    cache = {}

    def value_at(offsets, h):
        key = (offsets, h)
        if key not in cache:
            point = np.array([float(o) * h for o in offsets], dtype=float)
            try:
                value = float(evaluator(point))
            except Exception as e:
                raise EvaluationFailure(f"evaluator failed at {point.tolist()}: {e!s}")
            if not math.isfinite(value):
                raise EvaluationFailure(f"evaluator returned {value} at {point.tolist()}")
            cache[key] = value
        return cache[key]

    def stencil(exps, h):
        total = 0.0
        for js in product(*(range(a + 1) for a in exps)):
            weight = 1
            for a, j in zip(exps, js, strict=True):
                weight *= (-1) ** j * math.comb(a, j)
            offsets = tuple(Fraction(a, 2) - j for a, j in zip(exps, js, strict=True))
            total += weight * value_at(offsets, h)
        return total / h ** sum(exps)

    terms = {}
    for degree in range(max_degree + 1):
        if parity == "even" and degree % 2:
            continue
        for exps in _compositions(degree, nu):
            derivative = (4 * stencil(exps, step / 2) - stencil(exps, step)) / 3
            coeff = derivative / MultiIndex(exps).factorial()
            if coeff != 0.0:
                terms[exps] = coeff
    return Jet(Series(nu, max_degree, terms), "float", parity)


def _compositions(degree, nu):
    """All exponent tuples of length nu with the given degree, first exponent descending."""
    if nu == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(degree - first, nu - 1):
            yield (first, *rest)


def monomials(nu, low, high):
    """Exponent tuples with degree in [low, high], by degree then first exponent descending."""
    for degree in range(low, high + 1):
        yield from _compositions(degree, nu)


def jet_from_expression(expr, variables, max_degree=None, parity="general", mode="exact"):
    """Jet of a sympy expression in the given variables.

    Polynomials are expanded exactly. Other expressions need max_degree; exact
    mode expands them with sympy series and float mode samples them with
    finite_difference_jet.
    """
    expr = sympy.sympify(expr)
    variables = list(variables)
    stray = expr.free_symbols - set(variables)
    if stray:
        names = ", ".join(sorted(str(s) for s in stray))
        raise PreconditionViolated(f"unexpected symbols in expression: {names}")
    if expr.is_polynomial(*variables):
        poly = sympy.Poly(sympy.expand(expr), *variables)
        degree = poly.total_degree() if not poly.is_zero else 0
        max_degree = max_degree or max(degree, 2)
    else:
        if max_degree is None:
            raise InsufficientJet("max_degree is required for non-polynomial expressions")
        if mode == "float":
            return _sampled_jet(expr, variables, max_degree, parity)
        t = sympy.Dummy("t")
        scaled = expr.subs({v: t * v for v in variables}, simultaneous=True)
        truncated = sympy.series(scaled, t, 0, max_degree + 1).removeO().subs(t, 1)
        poly = sympy.Poly(sympy.expand(truncated), *variables)
    entries = []
    for exps, coeff in poly.terms():
        if sum(exps) > max_degree:
            continue
        if mode == "exact" and not coeff.is_Rational:
            raise PreconditionViolated(f"coefficient {coeff} is not rational; use float mode")
        entries.append((exps, from_sympy(coeff, mode)))
    return jet_from_coeffs(len(variables), max_degree, entries, parity, mode)


def _sampled_jet(expr, variables, max_degree, parity, step=1e-2):
    evaluate = sympy.lambdify(variables, expr, "numpy")
    jet = finite_difference_jet(
        lambda point: evaluate(*np.asarray(point, dtype=float)),
        len(variables),
        max_degree,
        step,
    )
    if parity == "general":
        return jet
    terms = jet.series.terms
    scale = max((abs(c) for c in terms.values()), default=0.0)
    odd = [e for e, c in terms.items() if sum(e) % 2 and abs(c) > 1e-6 * max(1.0, scale)]
    if odd:
        raise ParityViolation(f"odd terms present in an even jet: {sorted(odd)}")
    entries = [(e, c) for e, c in terms.items() if sum(e) % 2 == 0]
    return jet_from_coeffs(len(variables), max_degree, entries, parity, "float")


def jet_to_json(jet):
    """JSON text of a jet; exact coefficients keep numerator and denominator."""
    coeffs = []
    for exps, coeff in sorted(jet.series.terms.items(), key=lambda t: (sum(t[0]), t[0])):
        if jet.mode == "exact":
            value = Fraction(coeff)
            coeffs.append(
                {"alpha": list(exps), "num": value.numerator, "den": value.denominator}
            )
        else:
            coeffs.append({"alpha": list(exps), "val": float(coeff)})
    payload = {
        "nu": jet.nu,
        "max_degree": jet.max_degree,
        "parity": jet.parity,
        "mode": jet.mode,
        "coeffs": coeffs,
    }
    return json.dumps(payload)


def jet_from_json(payload):
    """Inverse of jet_to_json; accepts text or an already decoded dict."""
    data = json.loads(payload) if isinstance(payload, str) else payload
    entries = []
    for item in data["coeffs"]:
        if "val" in item:
            value = float(item["val"])
        else:
            value = Fraction(int(item["num"]), int(item["den"]))
        entries.append((tuple(item["alpha"]), value))
    return jet_from_coeffs(
        data["nu"], data["max_degree"], entries, data.get("parity", "general"), data["mode"]
    )
