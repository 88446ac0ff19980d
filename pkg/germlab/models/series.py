"""Sparse truncated polynomials in jet variables k and first-order parameters λ.

A term is keyed by an exponent tuple over (k_1..k_nu, λ_1..λ_l). Terms whose
k-degree exceeds ``max_degree`` or whose λ-degree exceeds one are dropped, so
products and compositions truncate themselves.
"""

from numbers import Number


class Series:
    """Truncated polynomial with exact or floating coefficients."""

    __slots__ = ("max_degree", "nparams", "nu", "terms")

    def __init__(self, nu, max_degree, terms=None, nparams=0) -> None:
        self.nu = nu
        self.max_degree = max_degree
        self.nparams = nparams
        self.terms = {}
        if terms:
            width = nu + nparams
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != width:
                    raise ValueError(f"exponent {exps} does not have length {width}")
                if coeff != 0 and self._keeps(exps):
                    self.terms[exps] = self.terms.get(exps, 0) + coeff

    @classmethod
    def _trusted(cls, nu, max_degree, nparams, terms):
        series = cls.__new__(cls)
        series.nu = nu
        series.max_degree = max_degree
        series.nparams = nparams
        series.terms = terms
        return series

    @classmethod
    def zero(cls, nu, max_degree, nparams=0):
        return cls._trusted(nu, max_degree, nparams, {})

    @classmethod
    def constant(cls, nu, max_degree, value, nparams=0):
        terms = {(0,) * (nu + nparams): value} if value != 0 else {}
        return cls._trusted(nu, max_degree, nparams, terms)

    @classmethod
    def variable(cls, nu, max_degree, index, nparams=0, coeff=1):
        exps = [0] * (nu + nparams)
        exps[index] = 1
        return cls(nu, max_degree, {tuple(exps): coeff}, nparams)

    @classmethod
    def parameter(cls, nu, max_degree, index, nparams, coeff=1):
        return cls.variable(nu, max_degree, nu + index, nparams, coeff)

    def _keeps(self, exps):
        return sum(exps[: self.nu]) <= self.max_degree and sum(exps[self.nu :]) <= 1

    def _check_shape(self, other):
        if other.nu != self.nu or other.nparams != self.nparams:
            raise ValueError(
                f"incompatible series shapes ({self.nu}, {self.nparams}) and "
                f"({other.nu}, {other.nparams})"
            )

    def k_degree(self, exps):
        return sum(exps[: self.nu])

    def __repr__(self) -> str:
        return f"Series(nu={self.nu}, N={self.max_degree}, l={self.nparams}, terms={self.terms})"

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.nu == other.nu
            and self.nparams == other.nparams
            and self.max_degree == other.max_degree
            and self.terms == other.terms
        )

    __hash__ = None

    def __neg__(self):
        return self._trusted(
            self.nu, self.max_degree, self.nparams, {e: -c for e, c in self.terms.items()}
        )

    def __add__(self, other):
        if isinstance(other, Number):
            other = Series.constant(self.nu, self.max_degree, other, self.nparams)
        self._check_shape(other)
        degree = min(self.max_degree, other.max_degree)
        terms = {e: c for e, c in self.terms.items() if self.k_degree(e) <= degree}
        for exps, coeff in other.terms.items():
            if other.k_degree(exps) > degree:
                continue
            total = terms.get(exps, 0) + coeff
            if total == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = total
        return self._trusted(self.nu, degree, self.nparams, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        if factor == 0:
            return Series.zero(self.nu, self.max_degree, self.nparams)
        return self._trusted(
            self.nu,
            self.max_degree,
            self.nparams,
            {e: c * factor for e, c in self.terms.items()},
        )

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        self._check_shape(other)
        nu = self.nu
        degree = min(self.max_degree, other.max_degree)
        right = sorted(
            ((e, c, sum(e[:nu]), sum(e[nu:])) for e, c in other.terms.items()),
            key=lambda item: item[2],
        )
        terms = {}
        for ea, ca in self.terms.items():
            da = sum(ea[:nu])
            pa = sum(ea[nu:])
            for eb, cb, db, pb in right:
                if da + db > degree:
                    break
                if pa + pb > 1:
                    continue
                exps = tuple(x + y for x, y in zip(ea, eb, strict=True))
                terms[exps] = terms.get(exps, 0) + ca * cb
        return self._trusted(
            nu, degree, self.nparams, {e: c for e, c in terms.items() if c != 0}
        )

    __rmul__ = __mul__

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), 0)

    def is_zero(self):
        return not self.terms

    def with_max_degree(self, max_degree):
        """Same terms under a new truncation degree."""
        terms = {e: c for e, c in self.terms.items() if self.k_degree(e) <= max_degree}
        return self._trusted(self.nu, max_degree, self.nparams, terms)

    def with_params(self, nparams):
        """Embed a parameter-free series into a series with nparams parameters."""
        if self.nparams != 0:
            raise ValueError("series already carries parameters")
        pad = (0,) * nparams
        terms = {e + pad: c for e, c in self.terms.items()}
        return self._trusted(self.nu, self.max_degree, nparams, terms)

    def base(self):
        """The λ-free part as a parameter-free series."""
        nu = self.nu
        terms = {e[:nu]: c for e, c in self.terms.items() if not any(e[nu:])}
        return Series._trusted(nu, self.max_degree, 0, terms)

    def param_part(self, index):
        """Coefficient of λ_index as a parameter-free series."""
        nu = self.nu
        slot = nu + index
        terms = {e[:nu]: c for e, c in self.terms.items() if e[slot] == 1}
        return Series._trusted(nu, self.max_degree, 0, terms)

    def times_parameter(self, index):
        slot = self.nu + index
        terms = {}
        for exps, coeff in self.terms.items():
            if any(exps[self.nu :]):
                continue
            shifted = list(exps)
            shifted[slot] = 1
            terms[tuple(shifted)] = coeff
        return self._trusted(self.nu, self.max_degree, self.nparams, terms)

    def homogeneous(self, degree):
        """λ-free terms of the given k-degree."""
        nu = self.nu
        return {
            e[:nu]: c
            for e, c in self.terms.items()
            if sum(e[:nu]) == degree and not any(e[nu:])
        }

    def order(self):
        """Lowest k-degree among λ-free terms, None for a zero base."""
        degrees = [sum(e[: self.nu]) for e in self.terms if not any(e[self.nu :])]
        return min(degrees) if degrees else None

    def derivative(self, index):
        """Partial derivative in k_index; the result is known to one degree less."""
        if not 0 <= index < self.nu:
            raise ValueError(f"variable index {index} out of range")
        terms = {}
        for exps, coeff in self.terms.items():
            power = exps[index]
            if power == 0:
                continue
            lowered = list(exps)
            lowered[index] = power - 1
            terms[tuple(lowered)] = coeff * power
        return self._trusted(self.nu, max(self.max_degree - 1, 0), self.nparams, terms)

    def map_coefficients(self, func):
        terms = {}
        for exps, coeff in self.terms.items():
            value = func(coeff)
            if value != 0:
                terms[exps] = value
        return self._trusted(self.nu, self.max_degree, self.nparams, terms)

    def compose(self, images, max_degree=None):
        """Substitute k_i ↦ images[i]; parameters pass through unchanged.

        Monomial images are built incrementally and memoized, so the cost is one
        truncated product per distinct exponent.
        """
        if len(images) != self.nu:
            raise ValueError(f"expected {self.nu} images, got {len(images)}")
        target_nu = images[0].nu
        for image in images:
            if image.nu != target_nu or image.nparams != self.nparams:
                raise ValueError("images must share variable and parameter counts")
        degree = self.max_degree if max_degree is None else max_degree
        images = [image.with_max_degree(degree) for image in images]
        one = Series.constant(target_nu, degree, 1, self.nparams)
        cache = {(0,) * self.nu: one}

        def power(alpha):
            cached = cache.get(alpha)
            if cached is not None:
                return cached
            index = next(i for i, a in enumerate(alpha) if a > 0)
            lowered = list(alpha)
            lowered[index] -= 1
            value = power(tuple(lowered)) * images[index]
            cache[alpha] = value
            return value

        terms = {}
        for exps, coeff in sorted(self.terms.items(), key=lambda item: sum(item[0])):
            alpha = exps[: self.nu]
            image = power(alpha)
            params = exps[self.nu :]
            if any(params):
                image = image.times_parameter(params.index(1))
            for key, value in image.terms.items():
                terms[key] = terms.get(key, 0) + coeff * value
        return Series._trusted(
            target_nu, degree, self.nparams, {e: c for e, c in terms.items() if c != 0}
        )
