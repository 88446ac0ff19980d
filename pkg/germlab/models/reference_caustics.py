"""Closed-form caustics of the model families.

Each branch is a residual function of the parameter point together with the
domain on which the equation describes the caustic. Sweeps are checked
against these residuals, and the CLI exposes them through
`germlab caustic --reference`.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from germlab.models.errors import UnknownLabel

XE5_SIGNS = ("++", "+-", "--")


@dataclass(frozen=True)
class CausticBranch:
    """One sheet of a caustic: residual(λ) == 0 on `domain`."""

    name: str
    label: str
    kind: str
    equation: str
    residual: object = field(repr=False, compare=False)
    domain: object = field(default=None, repr=False, compare=False)

    def applies(self, lam):
        return self.domain is None or bool(self.domain(lam))

    def evaluate(self, lam):
        return float(self.residual(tuple(float(v) for v in lam)))

    def to_dict(self):
        return {
            "name": self.name,
            "label": self.label,
            "kind": self.kind,
            "equation": self.equation,
        }


@dataclass(frozen=True)
class ReferenceModel:
    """A model family with its known caustic branches."""

    name: str
    expression: str
    nu: int
    nparams: int
    parity: str
    branches: tuple
    modulus: object = None
    notes: tuple = ()

    def branch(self, name):
        for branch in self.branches:
            if branch.name == name:
                return branch
        raise UnknownLabel(f"model {self.name} has no branch {name!r}")

    def residuals(self, lam):
        """{branch name: residual} for the branches whose domain contains λ."""
        lam = tuple(float(v) for v in lam)
        if len(lam) != self.nparams:
            raise ValueError(f"{self.name} takes {self.nparams} parameters, got {len(lam)}")
        return {b.name: b.evaluate(lam) for b in self.branches if b.applies(lam)}

    def nearest_branch(self, lam, kinds=None):
        """(branch name, |residual|) of the best-fitting applicable branch."""
        best = (None, math.inf)
        for branch in self.branches:
            if kinds and branch.kind not in kinds:
                continue
            if not branch.applies(lam):
                continue
            value = abs(branch.evaluate(lam))
            if value < best[1]:
                best = (branch.name, value)
        return best

    def to_dict(self):
        return {
            "name": self.name,
            "expression": self.expression,
            "nu": self.nu,
            "nparams": self.nparams,
            "parity": self.parity,
            "modulus": None if self.modulus is None else str(self.modulus),
            "branches": [b.to_dict() for b in self.branches],
            "notes": list(self.notes),
        }


def _coefficient_text(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def a3_model():
    """k⁴ + λ₁k² + λ₂k: the fold curve λ₂² = (8/27)(−λ₁)³ with a cusp at 0."""

    def fold(lam):
        l1, l2 = lam
        return l2 * l2 - Fraction(8, 27) * (-l1) ** 3

    return ReferenceModel(
        name="A3",
        expression="k1^4 + l1*k1^2 + l2*k1",
        nu=1,
        nparams=2,
        parity="general",
        branches=(
            CausticBranch(
                "fold",
                "A_2",
                "plain",
                "l2^2 = (8/27)*(-l1)^3",
                lambda lam: float(fold(lam)),
                lambda lam: lam[0] <= 0,
            ),
        ),
    )


def ae3_model():
    """k⁶ + λ₁k⁴ + λ₂k²: the basic line λ₂ = 0 and the twin parabola."""
    return ReferenceModel(
        name="Ae3",
        expression="k1^6 + l1*k1^4 + l2*k1^2",
        nu=1,
        nparams=2,
        parity="even",
        branches=(
            CausticBranch("basic", "A_{e,2}", "basic", "l2 = 0", lambda lam: lam[1]),
            CausticBranch(
                "twin",
                "A_2",
                "twin",
                "l2 = l1^2/3, l1 < 0",
                lambda lam: lam[1] - lam[0] ** 2 / 3,
                lambda lam: lam[0] < 0,
            ),
        ),
    )


def ae4_twin_point(s, l1):
    """Parameters (λ₁, λ₂, λ₃) where k² = s > 0 is a degenerate twin point."""
    return (l1, -6 * s * s - 3 * l1 * s, 8 * s**3 + 3 * l1 * s * s)


def _ae4_discriminant(lam):
    l1, l2, _ = lam
    return l1 * l1 - 8 * l2 / 3


def _ae4_twin(sigma):
    def residual(lam):
        l1, l2, l3 = lam
        root = math.sqrt(max(_ae4_discriminant(lam), 0.0))
        return 8 * l3 + l1 * (l1 * l1 - 4 * l2) - sigma * root**3

    def domain(lam):
        disc = _ae4_discriminant(lam)
        return disc >= 0 and (sigma * math.sqrt(disc) - lam[0]) / 4 > 0

    name = "twin+" if sigma > 0 else "twin-"
    sign = "+" if sigma > 0 else "-"
    equation = f"8*l3 + l1*(l1^2 - 4*l2) = {sign}(l1^2 - (8/3)*l2)^(3/2)"
    return CausticBranch(name, "A_2", "twin", equation, residual, domain)


def ae4_model():
    """k⁸ + λ₁k⁶ + λ₂k⁴ + λ₃k²: the plane λ₃ = 0 and two twin sheets.

    On a twin sheet the double root of the derivative in s = k² is
    s = (±√D − λ₁)/4 with D = λ₁² − (8/3)λ₂, and the sheet is real where s > 0.
    """
    return ReferenceModel(
        name="Ae4",
        expression="k1^8 + l1*k1^6 + l2*k1^4 + l3*k1^2",
        nu=1,
        nparams=3,
        parity="even",
        branches=(
            CausticBranch("basic", "A_{e,2}", "basic", "l3 = 0", lambda lam: lam[2]),
            _ae4_twin(1),
            _ae4_twin(-1),
        ),
    )


def _xe5_expression(signs, a):
    first = "k1^4" if signs[0] == "+" else "-k1^4"
    second = "+ k2^4" if signs[1] == "+" else "- k2^4"
    a = Fraction(a)
    middle = ""
    if a > 0:
        middle = f" + {_coefficient_text(a)}*k1^2*k2^2"
    elif a < 0:
        middle = f" - {_coefficient_text(-a)}*k1^2*k2^2"
    return f"{first}{middle} {second} + l1*k1^2 + l2*k1*k2 + l3*k2^2"


def _cone(lam):
    l1, l2, l3 = lam
    return l2 * l2 - 4 * l1 * l3


def _rho_sigma(lam):
    l1, l2, l3 = lam
    return l2 * l2 / (l1 * l3), l1 * l1 / (l3 * l3) + l3 * l3 / (l1 * l1)


def _gamma_plus_plus(lam):
    rho, sigma = _rho_sigma(lam)
    return (rho - 1) ** 3 - 27 / 16 * (2 - sigma) * rho


def _gamma_plus_minus(lam):
    rho, sigma = _rho_sigma(lam)
    return (rho - 1) ** 3 - 27 / 16 * (2 + sigma) * rho


def _gamma_plus_plus_domain(lam):
    l1, l2, l3 = lam
    if l1 == 0 or l3 == 0:
        return False
    rho = l2 * l2 / (l1 * l3)
    return l1 < 0 and 0 < rho <= 1


def _gamma_plus_minus_domain(lam):
    l1, l2, l3 = lam
    if l1 == 0 or l3 == 0:
        return False
    rho = l2 * l2 / (l1 * l3)
    if rho < 0:
        return l1 < 0
    return rho >= 4 and l1 * (l1 * l1 - l3 * l3) < 0


def _ray(direction):
    """Distance of λ to the open ray t·direction, t > 0."""
    norm = math.sqrt(sum(d * d for d in direction))
    unit = tuple(d / norm for d in direction)

    def residual(lam):
        t = sum(x * u for x, u in zip(lam, unit, strict=True))
        return math.sqrt(sum((x - t * u) ** 2 for x, u in zip(lam, unit, strict=True)))

    def domain(lam):
        return sum(x * u for x, u in zip(lam, unit, strict=True)) > 0

    return residual, domain


def cuspidal_edges(signs, a):
    """Rays of A₃ twin points on the twin surfaces, valid for small |a|."""
    a = float(a)
    if signs == "++":
        rays = {
            "l1'": (-1.0, 0.0, -a / 2),
            "l2'": (-1.0, -(a - 2) / 2, -1.0),
            "l3'": (-a / 2, 0.0, -1.0),
            "l4'": (-1.0, -(2 - a) / 2, -1.0),
        }
        equations = {
            "l1'": "l3 = (a/2)*l1, l1 < l2 = 0",
            "l2'": "l2 = ((a-2)/2)*l1, l1 = l3 < 0",
            "l3'": "l1 = (a/2)*l3, l3 < l2 = 0",
            "l4'": "l2 = ((2-a)/2)*l1, l1 = l3 < 0",
        }
    elif signs == "+-":
        rays = {
            "l1'": (-1.0, 0.0, -a / 2),
            "l2'": (-a / 2, 0.0, 1.0),
        }
        equations = {
            "l1'": "l3 = (a/2)*l1, l1 < l2 = 0",
            "l2'": "l1 = -(a/2)*l3, l3 > l2 = 0",
        }
    else:
        return ()
    branches = []
    for name, direction in rays.items():
        residual, domain = _ray(direction)
        branches.append(CausticBranch(name, "A_3", "twin", equations[name], residual, domain))
    return tuple(branches)


def chosen_cone_elements(signs, a):
    """Generators of the basic cone that carry A_{e,3} basic points.

    Each element is given by its ratio plane intersected with the cone.
    """
    a = float(a)
    planes = []
    if signs == "++" and a < -2:
        root = math.sqrt(a * a - 4)
        for r in ((-a + root) / 2, (-a - root) / 2):
            planes.append(("l3/l1", r, f"l3 = {r:.12g}*l1"))
    elif signs == "--" and a > 2:
        root = math.sqrt(a * a - 4)
        for r in ((a + root) / 2, (a - root) / 2):
            planes.append(("l1/l3", r, f"l1 = {r:.12g}*l3"))
    elif signs == "+-":
        r = (-a + math.sqrt(a * a + 4)) / 2
        planes.append(("l1/l3", r, f"l1 = {r:.12g}*l3"))

    branches = []
    for i, (ratio, r, equation) in enumerate(planes, start=1):
        if ratio == "l3/l1":

            def plane(lam, r=r):
                return lam[2] - r * lam[0]

        else:

            def plane(lam, r=r):
                return lam[0] - r * lam[2]

        def residual(lam, plane=plane):
            return math.hypot(_cone(lam), plane(lam))

        branches.append(
            CausticBranch(
                f"chosen{i}", "A_{e,3}", "basic", f"l2^2 = 4*l1*l3, {equation}", residual
            )
        )
    return tuple(branches)


def xe5_model(signs="++", a=0):
    """±x⁴ + a x²y² ± y⁴ + λ₁x² + λ₂xy + λ₃y²."""
    if signs not in XE5_SIGNS:
        raise UnknownLabel(f"X_e,5 sign data must be one of {', '.join(XE5_SIGNS)}")
    a = Fraction(a)
    notes = []
    branches = [CausticBranch("cone", "A_{e,2}", "basic", "l2^2 = 4*l1*l3", _cone)]
    if a == 0 and signs == "++":
        branches.append(
            CausticBranch(
                "gamma",
                "A_2",
                "twin",
                "(rho-1)^3 = (27/16)*(2-sigma)*rho, 0 < rho <= 1, l1 < 0",
                _gamma_plus_plus,
                _gamma_plus_plus_domain,
            )
        )
    elif a == 0 and signs == "+-":
        branches.append(
            CausticBranch(
                "gamma",
                "A_2",
                "twin",
                "(rho-1)^3 = (27/16)*(2+sigma)*rho, rho < 0 and l1 < 0,"
                " or rho >= 4 and l1*(l1^2-l3^2) < 0",
                _gamma_plus_minus,
                _gamma_plus_minus_domain,
            )
        )
    else:
        notes.append("twin surfaces in closed form are known for a = 0 only")
    branches.extend(cuspidal_edges(signs, a))
    branches.extend(chosen_cone_elements(signs, a))
    if a != 0 and signs != "--":
        notes.append("cuspidal edge rays are reliable for small |a| only")
    return ReferenceModel(
        name=f"Xe5{signs}",
        expression=_xe5_expression(signs, a),
        nu=2,
        nparams=3,
        parity="even",
        branches=tuple(branches),
        modulus=a,
        notes=tuple(notes),
    )


REFERENCE_MODELS = {
    "A3": a3_model,
    "Ae3": ae3_model,
    "Ae4": ae4_model,
    "Xe5": xe5_model,
}


def reference_model(name, signs="++", a=0):
    """Look up a model by name; `Xe5++`, `Xe5+-` and `Xe5--` carry their signs."""
    if name.startswith("Xe5"):
        tail = name[3:]
        return xe5_model(tail or signs, a)
    try:
        return REFERENCE_MODELS[name]()
    except KeyError:
        raise UnknownLabel(
            f"unknown reference model {name!r}; choose from {', '.join(REFERENCE_MODELS)}"
        ) from None


def check_crossings(model, crossings):
    """Nearest applicable branch and residual for every sweep crossing.

    Basic crossings are compared with basic branches, all others with the
    twin and plain branches.
    """
    rows = []
    for crossing in crossings:
        kinds = ("basic",) if crossing.kind == "basic" else ("twin", "plain")
        branch, residual = model.nearest_branch(crossing.parameters, kinds)
        rows.append(
            {
                "parameters": [float(v) for v in crossing.parameters],
                "label": crossing.label.name if crossing.label is not None else None,
                "kind": crossing.kind,
                "branch": branch,
                "residual": None if branch is None else residual,
            }
        )
    return rows
