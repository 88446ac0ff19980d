"""Catalogue of the singularity classes met in typical families with at most five parameters.

Ordinary classes carry (μ, c, β) and even classes (μ_e, c_e, β); the modality is
always μ - c - 1.
"""

from dataclasses import dataclass
from fractions import Fraction

from germlab.models.errors import UnknownLabel

FAMILIES = (
    "Regular",
    "Morse",
    "A",
    "D",
    "E6",
    "Ae",
    "Xe",
    "YeCandidate",
    "YtildeE",
    "Ze",
    "Unknown",
)


@dataclass(frozen=True)
class CatalogueRow:
    """One row of a classification table."""

    family: str
    symbol: str
    normal_form: str
    restrictions: str
    mult: str
    codim: str
    beta: str
    even: bool

    def to_dict(self):
        return {
            "family": self.family,
            "class": self.symbol,
            "normal_form": self.normal_form,
            "restrictions": self.restrictions,
            "mult": self.mult,
            "codim": self.codim,
            "beta": self.beta,
            "even": self.even,
        }


ORDINARY_TABLE = (
    CatalogueRow("A", "A_k^±", "±x^{k+1}", "k >= 1", "k", "k-1", "(k-1)/(2k+2)", False),
    CatalogueRow("D", "D_k^±", "x^2y ± y^{k-1}", "k >= 4", "k", "k-1", "(k-2)/(2k-2)", False),
    CatalogueRow("E6", "E_6^±", "x^3 ± y^4", "-", "6", "5", "5/12", False),
)

EVEN_TABLE = (
    CatalogueRow("Ae", "A_{e,k}^±", "±x^{2k}", "k >= 1", "k", "k-1", "(k-1)/(2k)", True),
    CatalogueRow(
        "Xe",
        "X_{e,5}^{±±}",
        "±x^4 + ax^2y^2 ± y^4",
        "a^2 != 4 if ++ or --",
        "5",
        "3",
        "1/2",
        True,
    ),
    CatalogueRow(
        "Xe",
        "X_{e,r+3}^{±±}",
        "±x^4 ± x^2y^2 + ay^{2r}",
        "a != 0, r >= 3",
        "r+3",
        "r+1",
        "1/2",
        True,
    ),
    CatalogueRow(
        "YeCandidate",
        "Y_{e,r,s}^{±±}",
        "±x^{2r} + ax^2y^2 ± y^{2s}",
        "a != 0, r,s >= 3",
        "r+s+1",
        "r+s-1",
        "1/2",
        True,
    ),
    CatalogueRow(
        "YtildeE",
        "Ytilde_{e,r}^±",
        "±(x^2+y^2)^2 + ay^{2r}",
        "a > 0, r >= 3",
        "2r+1",
        "2r-1",
        "1/2",
        True,
    ),
    CatalogueRow("Ze", "Z_{e,7}^±", "x^3y ± y^6 + axy^5", "-", "7", "5", "5/9", True),
)


@dataclass(frozen=True)
class Metadata:
    mult: int
    codim: int
    beta: Fraction

    @property
    def modality(self):
        return self.mult - self.codim - 1

    def as_tuple(self):
        return (self.mult, self.codim, self.beta, self.modality)


def _family_and_index(label):
    if isinstance(label, tuple):
        return label[0], label[1]
    return label.family, label.index


def _metadata(family, index):
    if family == "Morse":
        return Metadata(1, 0, Fraction(0))
    if family == "A" and isinstance(index, int) and index >= 1:
        return Metadata(index, index - 1, Fraction(index - 1, 2 * index + 2))
    if family == "D" and isinstance(index, int) and index >= 4:
        return Metadata(index, index - 1, Fraction(index - 2, 2 * index - 2))
    if family == "E6" and index in (6, None):
        return Metadata(6, 5, Fraction(5, 12))
    if family == "Ae" and isinstance(index, int) and index >= 1:
        return Metadata(index, index - 1, Fraction(index - 1, 2 * index))
    if family == "Xe" and isinstance(index, int) and index >= 5:
        codim = 3 if index == 5 else index - 2
        return Metadata(index, codim, Fraction(1, 2))
    if family == "YeCandidate" and isinstance(index, tuple) and len(index) == 2:
        r, s = index
        if r >= 3 and s >= 3:
            return Metadata(r + s + 1, r + s - 1, Fraction(1, 2))
    if family == "YtildeE" and isinstance(index, int) and index >= 3:
        return Metadata(2 * index + 1, 2 * index - 1, Fraction(1, 2))
    if family == "Ze" and index in (7, None):
        return Metadata(7, 5, Fraction(5, 9))
    return None


def lookup(family, index):
    """Metadata of a catalogue class, or None outside the catalogue."""
    return _metadata(family, index)


def catalogue_metadata(label):
    """(mult, codim, beta, modality) of a label or a (family, index) pair."""
    family, index = _family_and_index(label)
    meta = _metadata(family, index)
    if meta is None:
        raise UnknownLabel(f"{family} {index!r} is not a catalogue class")
    return meta.as_tuple()


def normal_form(family, index, sign_data="", modulus=None):
    """Normal form text of a class in the variables x, y."""
    signs = [(-1 if ch in "-−" else 1) for ch in sign_data] or [1]

    def signed(sign, text, first=False):
        if sign > 0:
            return text if first else f" + {text}"
        return f"-{text}" if first else f" - {text}"

    a = "a" if modulus is None else str(modulus)
    if family == "Morse":
        return "Q(k)"
    if family in ("A", "Ae"):
        power = index + 1 if family == "A" else 2 * index
        return signed(signs[0], f"x^{power}", True)
    if family == "D":
        return "x^2y" + signed(signs[0], f"y^{index - 1}")
    if family == "E6":
        return "x^3" + signed(signs[0], "y^4")
    if family == "Xe":
        if index == 5:
            return (
                signed(signs[0], "x^4", True)
                + f" + {a}x^2y^2"
                + signed(signs[-1], "y^4")
            )
        r = index - 3
        return signed(signs[0], "x^4", True) + signed(signs[-1], "x^2y^2") + f" + {a}y^{2 * r}"
    if family == "YeCandidate":
        r, s = index
        head = signed(signs[0], f"x^{2 * r}", True)
        return head + f" + {a}x^2y^2" + signed(signs[-1], f"y^{2 * s}")
    if family == "YtildeE":
        return signed(signs[0], "(x^2+y^2)^2", True) + f" + {a}y^{2 * index}"
    if family == "Ze":
        return "x^3y" + signed(signs[0], "y^6") + f" + {a}xy^5"
    raise UnknownLabel(f"no normal form for {family}")


# Monomials spanning the local algebra of each class: the standard versal
# deformation is the normal form plus Σ λ_i·monomial_i.
def versal_monomials(family, index, nu):
    """Exponent tuples (length nu) of the versal directions of a class."""
    if nu < 1:
        raise ValueError("nu must be positive")

    def mono(x=0, y=0):
        exps = [0] * nu
        exps[0] = x
        if y:
            if nu < 2:
                raise UnknownLabel(f"{family} needs at least two variables")
            exps[1] = y
        return tuple(exps)

    if family == "Morse":
        return []
    if family == "A" and index >= 2:
        return [mono(x=i) for i in range(1, index)]
    if family == "Ae" and index >= 1:
        return [mono(x=2 * i) for i in range(1, index)]
    if family == "D" and index >= 4:
        return [mono(x=1), mono(x=2)] + [mono(y=j) for j in range(1, index - 2)]
    if family == "Xe" and index == 5:
        # x^4 lies in the even Jacobian ideal when a = 0
        return [mono(x=2), mono(x=1, y=1), mono(y=2), mono(x=2, y=2)]
    if family == "Xe" and index >= 6:
        out = [mono(x=2), mono(x=1, y=1), mono(y=2), mono(x=4)]
        out += [mono(y=2 * j) for j in range(2, index - 3)]
        return out
    raise UnknownLabel(f"no versal family for {family} {index!r}")


def table_rows(which="all"):
    """Catalogue rows for display: 'ordinary', 'even' or 'all'."""
    if which == "ordinary":
        return list(ORDINARY_TABLE)
    if which == "even":
        return list(EVEN_TABLE)
    if which == "all":
        return list(ORDINARY_TABLE) + list(EVEN_TABLE)
    raise ValueError(f"Unknown table {which!r}; expected ordinary, even or all")
