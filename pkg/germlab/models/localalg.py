"""Local algebra dimensions of the gradient ideal and its even analogue.

The quotient m/(I + m^{N+1}) is computed by exact row reduction in the
monomial coordinates of degree 1..N. In even mode the ideal is spanned by odd
monomials times the partial derivatives and the space is that of even
monomials of degree 2..N.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from germlab.models.errors import NotStabilized, ParityViolation, PreconditionViolated
from germlab.models.jet import MultiIndex, check_parity, monomial_text, monomials
from germlab.utils.exact import to_exact

DEFAULT_DEGREE_CAP = 24


@dataclass(frozen=True)
class QuotientBasis:
    """Monomial basis of the truncated (even) local algebra."""

    truncation_degree: int
    monomial_basis: tuple
    dimension: int
    stabilized: bool
    parity: str = "general"
    history: tuple = field(default=())

    def to_dict(self):
        return {
            "truncation_degree": self.truncation_degree,
            "monomial_basis": [monomial_text(m.exponents) for m in self.monomial_basis],
            "exponents": [list(m.exponents) for m in self.monomial_basis],
            "dimension": self.dimension,
            "stabilized": self.stabilized,
            "parity": self.parity,
            "history": [{"degree": n, "dimension": d} for n, d in self.history],
        }


def _rational(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _gradient(jet):
    gradients = []
    for i in range(jet.nu):
        gradients.append(dict(jet.series.derivative(i).terms))
    return gradients


def _check_polynomial_germ(jet, parity):
    if jet.mode != "exact":
        raise PreconditionViolated("local algebra dimensions need an exact jet")
    for exps, value in jet.series.terms.items():
        if sum(exps) == 1 and value != 0:
            raise PreconditionViolated(f"nonzero linear term {monomial_text(exps)}")
        if parity == "even" and sum(exps) % 2 and value != 0:
            raise ParityViolation(f"odd-degree term {monomial_text(exps)} in an even germ")


class TruncatedQuotient:
    """m/(I + m^{N+1}) (or m_e/(I_e + m^{N+1})) of a polynomial germ."""

    def __init__(self, jet, parity, degree) -> None:
        check_parity(parity)
        self.parity = parity
        self.degree = degree
        nu = jet.nu
        low = 2 if parity == "even" else 1
        space = [e for e in monomials(nu, low, degree) if parity == "general" or sum(e) % 2 == 0]
        # high degrees first, so the surviving columns are the lowest monomials
        self.columns = list(reversed(space))
        self.index = {e: i for i, e in enumerate(self.columns)}

        if parity == "even":
            multipliers = [e for e in monomials(nu, 1, degree - 1) if sum(e) % 2]
        else:
            multipliers = list(monomials(nu, 0, degree - 1))
        rows = {}
        for gradient in _gradient(jet):
            for multiplier in multipliers:
                row = {}
                for exps, value in gradient.items():
                    product = tuple(a + b for a, b in zip(exps, multiplier, strict=True))
                    if sum(product) > degree:
                        continue
                    column = self.index[product]
                    row[column] = row.get(column, 0) + value
                row = {c: _rational(v) for c, v in row.items() if v}
                if row:
                    rows[len(rows)] = row
        if rows:
            matrix = DomainMatrix.from_dict_sympy(len(rows), len(self.columns), rows)
            self._rref, pivots = matrix.convert_to(QQ).rref()
            self.pivots = tuple(pivots)
        else:
            self._rref = None
            self.pivots = ()
        pivot_set = set(self.pivots)
        free = {self.columns[i] for i in range(len(self.columns)) if i not in pivot_set}
        self.basis = tuple(MultiIndex(e) for e in space if e in free)

    @property
    def dimension(self):
        return len(self.basis)

    @cached_property
    def _rows(self):
        if self._rref is None:
            return []
        matrix = self._rref.to_Matrix()
        rows = []
        for r, pivot in enumerate(self.pivots):
            entries = {
                c: to_exact(matrix[r, c]) for c in range(matrix.cols) if matrix[r, c] != 0
            }
            rows.append((pivot, entries))
        return rows

    def coordinates(self, terms):
        """Coordinates of a polynomial {exponents: value} along the basis monomials."""
        vector = {}
        for exps, value in terms.items():
            d = sum(exps)
            if d == 0 or d > self.degree or value == 0:
                continue
            if self.parity == "even" and d % 2:
                raise ParityViolation(f"odd term {monomial_text(exps)} in the even quotient")
            column = self.index[tuple(exps)]
            vector[column] = vector.get(column, 0) + Fraction(value)
        for pivot, entries in self._rows:
            coeff = vector.get(pivot, 0)
            if coeff == 0:
                continue
            for c, v in entries.items():
                vector[c] = vector.get(c, 0) - coeff * v
        return [vector.get(self.index[m.exponents], Fraction(0)) for m in self.basis]


def stable_quotient(jet, parity=None, n_start=None, max_degree=DEFAULT_DEGREE_CAP):
    """Grow N until the dimension repeats and N >= 2·(dim + 1).

    Returns the last quotient, whether it stabilized, and the (N, dim) history.
    """
    parity = parity or jet.parity
    check_parity(parity)
    _check_polynomial_germ(jet, parity)
    step = 2 if parity == "even" else 1
    degree = max(n_start or jet.max_degree, 2)
    if parity == "even" and degree % 2:
        degree += 1
    degree = min(degree, max(max_degree, 2))
    current = TruncatedQuotient(jet, parity, degree)
    history = [(degree, current.dimension)]
    stabilized = False
    while degree + step <= max_degree:
        following = TruncatedQuotient(jet, parity, degree + step)
        history.append((degree + step, following.dimension))
        if following.dimension == current.dimension and degree >= 2 * (current.dimension + 1):
            stabilized = True
            break
        current = following
        degree += step
    return current, stabilized, tuple(history)


def multiplicity(poly_jet, parity=None, n_start=None, max_degree=DEFAULT_DEGREE_CAP, strict=False):
    """(μ or μ_e, QuotientBasis) of a polynomial germ with zero linear part."""
    parity = parity or poly_jet.parity
    quotient, stabilized, history = stable_quotient(poly_jet, parity, n_start, max_degree)
    basis = QuotientBasis(
        truncation_degree=quotient.degree,
        monomial_basis=quotient.basis,
        dimension=quotient.dimension,
        stabilized=stabilized,
        parity=parity,
        history=history,
    )
    if not stabilized and strict:
        raise NotStabilized(
            f"dimension did not stabilize up to degree {max_degree}; "
            "the multiplicity is probably infinite",
            basis,
        )
    return basis.dimension + 1, basis
