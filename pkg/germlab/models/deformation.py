"""First-order deformation data of a family F(k, λ) at (0, 0)."""

import sympy

from germlab.models.errors import DegreeOverflow, ParityViolation, PreconditionViolated
from germlab.models.jet import Jet, MultiIndex, jet_from_expression, monomial_text
from germlab.models.series import Series
from germlab.utils.exact import coerce


class DeformationJet:
    """Base jet f = F(·, 0) plus the mixed coefficients of λ-degree one.

    `mixed` maps (exponent tuple, parameter index) to the divided coefficient
    ∂^{α,1}F(0,0)/α!; raw_mixed gives the partial itself.
    """

    __slots__ = ("base", "mixed", "nparams")

    def __init__(self, base: Jet, nparams, mixed=None) -> None:
        self.base = base
        self.nparams = nparams
        self.mixed = {}
        for (alpha, j), value in (mixed or {}).items():
            exps = alpha.exponents if isinstance(alpha, MultiIndex) else tuple(alpha)
            if not 0 <= j < nparams:
                raise ValueError(f"parameter index {j} out of range for l={nparams}")
            if len(exps) != base.nu:
                raise ValueError(f"multi-index {exps} does not have length {base.nu}")
            if sum(exps) > base.max_degree:
                raise DegreeOverflow(f"{monomial_text(exps)} exceeds degree {base.max_degree}")
            value = coerce(value, base.mode)
            if value == 0:
                continue
            if base.parity == "even" and (sum(exps) % 2 or sum(exps) == 0):
                raise ParityViolation(
                    f"λ{j + 1}·{monomial_text(exps)} is not allowed in an even deformation"
                )
            self.mixed[(exps, j)] = self.mixed.get((exps, j), 0) + value

    @property
    def l(self):  # noqa: E743
        return self.nparams

    @property
    def nu(self):
        return self.base.nu

    @property
    def max_degree(self):
        return self.base.max_degree

    @property
    def mode(self):
        return self.base.mode

    @property
    def parity(self):
        return self.base.parity

    def __repr__(self) -> str:
        terms = len(self.mixed)
        return f"DeformationJet(l={self.nparams}, base={self.base!r}, mixed={terms} terms)"

    def raw_mixed(self, alpha, j):
        """∂^{α,1}F(0,0)/∂k^α∂λ_j."""
        exps = alpha.exponents if isinstance(alpha, MultiIndex) else tuple(alpha)
        if sum(exps) > self.max_degree:
            raise DegreeOverflow(f"{monomial_text(exps)} exceeds degree {self.max_degree}")
        return self.mixed.get((exps, j), 0) * MultiIndex(exps).factorial()

    def mixed_vector(self, alpha):
        """Raw mixed partials of one monomial across all parameters."""
        return [self.raw_mixed(alpha, j) for j in range(self.nparams)]

    def to_series(self):
        """Full truncated series in (k, λ)."""
        nu = self.nu
        terms = {e + (0,) * self.nparams: c for e, c in self.base.series.terms.items()}
        for (exps, j), value in self.mixed.items():
            slot = [0] * self.nparams
            slot[j] = 1
            key = exps + tuple(slot)
            terms[key] = terms.get(key, 0) + value
        return Series(nu, self.max_degree, terms, self.nparams)

    @classmethod
    def from_series(cls, series, mode="exact", parity="general"):
        base = Jet(series.base(), mode, parity)
        mixed = {}
        nu = series.nu
        for exps, value in series.terms.items():
            params = exps[nu:]
            if any(params):
                mixed[(exps[:nu], params.index(1))] = value
        return cls(base, series.nparams, mixed)

    def to_float(self):
        return DeformationJet(self.base.to_float(), self.nparams, dict(self.mixed))

    def reparametrized(self, matrix):
        """Deformation in λ' for the substitution λ = M·λ'."""
        size = len(matrix[0]) if matrix else 0
        mixed = {}
        for (exps, j), value in self.mixed.items():
            for i in range(size):
                if matrix[j][i] != 0:
                    key = (exps, i)
                    mixed[key] = mixed.get(key, 0) + value * matrix[j][i]
        return DeformationJet(self.base, size, mixed)

    def without_parameter(self, index):
        """Drop λ_index and renumber the remaining parameters."""
        if not 0 <= index < self.nparams:
            raise ValueError(f"parameter index {index} out of range")
        mixed = {}
        for (exps, j), value in self.mixed.items():
            if j == index:
                continue
            mixed[(exps, j if j < index else j - 1)] = value
        return DeformationJet(self.base, self.nparams - 1, mixed)

    def with_base(self, base):
        """Same mixed data attached to a transformed base of the same shape."""
        return DeformationJet(base, self.nparams, dict(self.mixed))


def deformation_from_coeffs(base, nparams, entries):
    """Build a deformation from (multi-index, parameter index, divided value) triples."""
    mixed = {}
    for alpha, j, value in entries:
        exps = alpha.exponents if isinstance(alpha, MultiIndex) else tuple(alpha)
        mixed[(exps, j)] = mixed.get((exps, j), 0) + value
    return DeformationJet(base, nparams, mixed)


def deformation_from_expression(
    expr, variables, parameters, max_degree=None, parity="general", mode="exact"
):
    """DeformationJet of a sympy expression F(k, λ).

    Pure-λ terms (|α| = 0) are dropped; they only shift the critical value.
    """
    expr = sympy.sympify(expr)
    variables = list(variables)
    parameters = list(parameters)
    stray = expr.free_symbols - set(variables) - set(parameters)
    if stray:
        names = ", ".join(sorted(str(s) for s in stray))
        raise PreconditionViolated(f"unexpected symbols in expression: {names}")
    at_zero = dict.fromkeys(parameters, 0)
    base = jet_from_expression(expr.subs(at_zero), variables, max_degree, parity, mode)
    mixed = {}
    for j, parameter in enumerate(parameters):
        derivative = sympy.diff(expr, parameter).subs(at_zero)
        part = jet_from_expression(derivative, variables, base.max_degree, "general", mode)
        for exps, value in part.series.terms.items():
            if sum(exps) == 0:
                continue
            if parity == "even" and sum(exps) % 2:
                raise ParityViolation(
                    f"odd term {monomial_text(exps)} multiplies {parameter} in an even family"
                )
            mixed[(exps, j)] = value
    return DeformationJet(base, len(parameters), mixed)
