"""Scalar helpers shared by the exact-rational and floating modes."""

import math
from fractions import Fraction

import sympy

MODES = ("exact", "float")


def check_mode(mode):
    """Validate a scalar mode name."""
    if mode not in MODES:
        raise ValueError(f"Unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    return mode


def to_exact(value):
    """Convert a number (int, Fraction, str, float or sympy Rational) to Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value}")
        return Fraction(value)
    if isinstance(value, sympy.Basic):
        if value.is_Float:
            return Fraction(float(value))
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        raise ValueError(f"{value} is not rational")
    raise TypeError(f"cannot use {type(value).__name__} as a scalar")


def coerce(value, mode):
    """Convert a number to the scalar type of the mode."""
    if mode == "exact":
        return to_exact(value)
    if isinstance(value, sympy.Basic):
        return float(value)
    return float(value)


def from_sympy(value, mode):
    """Convert a sympy number, keeping it exact when it is rational."""
    if mode == "exact" and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    return float(value)


def is_exact(value):
    return isinstance(value, (int, Fraction))


def sign(value):
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def sign_char(value):
    return "+" if value > 0 else "-"


def is_zero(value, scale=0.0, tol=1e-9):
    """Exact zero test for rationals, relative test for floats."""
    if is_exact(value):
        return value == 0
    if scale > 0:
        return abs(value) <= tol * scale
    return value == 0.0


def exact_root(value, n):
    """The non-negative n-th root of a rational when it is rational, else None."""
    value = to_exact(value)
    if value < 0:
        return None
    num_root, num_exact = sympy.integer_nthroot(value.numerator, n)
    den_root, den_exact = sympy.integer_nthroot(value.denominator, n)
    if num_exact and den_exact:
        return Fraction(int(num_root), int(den_root))
    return None


def real_root(value, n):
    """Non-negative n-th root of |value|: exact when possible, float otherwise."""
    if is_exact(value):
        root = exact_root(abs(value), n)
        if root is not None:
            return root
    return abs(float(value)) ** (1.0 / n)


def scalar_to_json(value):
    """JSON-friendly rendering: integers stay ints, other rationals become 'p/q'."""
    if value is None:
        return None
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return float(value)


def scalar_from_json(value, mode="exact"):
    """Inverse of scalar_to_json."""
    if isinstance(value, str):
        return coerce(Fraction(value), mode)
    return coerce(value, mode)
