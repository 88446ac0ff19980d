"""Elimination of the nondegenerate directions of a germ (splitting lemma).

For a series F(k, z, λ) whose Hessian kernel spans the first `corank`
coordinates, the regular coordinates z are solved from ∂F/∂z = 0 as truncated
series Z(k, λ) and substituted back. The λ-free part of the result is exact up
to the truncation degree N, the λ-linear part up to N - 1.
"""

import numpy as np
import sympy

from germlab.models.errors import PreconditionViolated, SingularBlock
from germlab.models.series import Series
from germlab.utils.exact import from_sympy


def regular_block(series, corank):
    """Raw Hessian entries of the λ-free part among the regular coordinates."""
    nu = series.nu
    width = nu + series.nparams
    block = []
    for s in range(corank, nu):
        row = []
        for t in range(corank, nu):
            exps = [0] * width
            exps[s] += 1
            exps[t] += 1
            row.append(series.coefficient(tuple(exps)) * (2 if s == t else 1))
        block.append(row)
    return block


def invert_block(block, exact):
    if not block:
        return []
    if exact:
        matrix = sympy.Matrix(block)
        if matrix.det() == 0:
            raise SingularBlock("the regular Hessian block is singular")
        inverse = matrix.inv()
        size = len(block)
        return [[from_sympy(inverse[i, j], "exact") for j in range(size)] for i in range(size)]
    values = np.array(block, dtype=float)
    singular = np.linalg.svd(values, compute_uv=False)
    if singular[-1] <= 1e-12 * max(singular[0], 1.0):
        raise SingularBlock("the regular Hessian block is numerically singular")
    return np.linalg.inv(values).tolist()


def check_kernel_aligned(series, corank, exact, scale=0.0, tol=1e-8):
    """The λ-free second-order terms touching kernel coordinates must vanish."""
    nu = series.nu
    width = nu + series.nparams
    for i in range(corank):
        for j in range(nu):
            exps = [0] * width
            exps[i] += 1
            exps[j] += 1
            value = series.coefficient(tuple(exps))
            if value == 0:
                continue
            if exact or abs(value) > tol * max(scale, 1.0):
                raise PreconditionViolated(
                    f"the Hessian kernel is not aligned with the first {corank} coordinates"
                )


def _linear_combination(weights, items, template):
    total = template
    for weight, item in zip(weights, items, strict=True):
        if weight != 0:
            total = total + item.scale(weight)
    return total


def eliminate(series, corank, exact=True):
    """Restrict F to the critical manifold of the regular coordinates.

    Returns a series in the first `corank` variables with the same parameters.
    """
    nu = series.nu
    N = series.max_degree
    nparams = series.nparams
    if corank >= nu:
        return series
    inverse = invert_block(regular_block(series, corank), exact)
    regular = nu - corank

    # ∂F/∂z minus its λ-free linear part in z
    nonlinear = []
    for s in range(regular):
        gradient = series.derivative(corank + s)
        terms = {}
        for exps, value in gradient.terms.items():
            if not any(exps[nu:]) and sum(exps[:nu]) == 1 and not any(exps[:corank]):
                continue
            terms[exps] = value
        nonlinear.append(Series._trusted(nu, gradient.max_degree, nparams, terms))

    degree = max(N - 1, 0)
    kernel = [Series.variable(corank, degree, i, nparams) for i in range(corank)]
    solution = [Series.zero(corank, degree, nparams) for _ in range(regular)]
    zero = Series.zero(corank, degree, nparams)
    for _ in range(N + 3):
        values = [part.compose(kernel + solution, degree) for part in nonlinear]
        updated = [-_linear_combination(inverse[s], values, zero) for s in range(regular)]
        if all(a == b for a, b in zip(updated, solution, strict=True)):
            break
        solution = updated

    images = [Series.variable(corank, N, i, nparams) for i in range(corank)]
    images += [z.with_max_degree(N) for z in solution]
    return series.compose(images, N)


def restrict_to_kernel(jet_or_defjet, corank):
    """Reduced function ψ of a kernel-aligned jet or deformation as a Series."""
    if hasattr(jet_or_defjet, "to_series") and hasattr(jet_or_defjet, "mixed"):
        series = jet_or_defjet.to_series()
        base = jet_or_defjet.base
    else:
        series = jet_or_defjet.series
        base = jet_or_defjet
    exact = base.mode == "exact"
    check_kernel_aligned(series, corank, exact, base.scale_reference())
    return eliminate(series, corank, exact)
