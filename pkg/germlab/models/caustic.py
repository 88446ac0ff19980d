"""Parameter sweeps of (even) families F(k, λ).

Critical points are re-solved at every grid node by vectorized Newton from a
seed grid plus the previous node's points. Grid edges whose endpoints carry a
different critical-point census hold a caustic crossing; it is bracketed by
bisection, refined, and classified on the local jet. Regions are the
connected components of nodes joined by crossing-free edges.
"""

import math
import sys
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
import sympy

from germlab.models.detect import classify, morse_label
from germlab.models.errors import (
    NewtonDivergence,
    PairingFailure,
    ParityViolation,
    PreconditionViolated,
    UnresolvedCell,
)
from germlab.models.jet import check_parity, finite_difference_jet, jet_from_expression
from germlab.utils.expr_parser import ExprAst, parse_expression
from germlab.utils.settings import DEFAULT_TOLERANCES, thread_count

TWO_PI = 2 * math.pi
DOMAINS = ("box", "torus")
DEFAULT_GRID = {1: 400, 2: 200, 3: 24}
DEFAULT_SEEDS = {1: 9, 2: 7, 3: 5}
DEFAULT_K_BOX = (-3.0, 3.0)
BISECTION_STEPS = 14
# degenerate points are classified on float jets; zero tests are relative
LOCAL_TOLERANCES = DEFAULT_TOLERANCES.with_overrides(
    zero=1e-6, kernel=1e-5, rank=1e-6, form_zero=1e-5
)
DEGENERACY_THRESHOLD = 1e-7
MERGE_RADIUS = 1e-3


def _index(symbol, prefix):
    name = str(symbol)
    if len(name) >= 2 and name[0] == prefix and name[1:].isdigit():
        return int(name[1:])
    return 0


def _to_sympy_number(value):
    if isinstance(value, (int, Fraction)):
        value = Fraction(value)
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.Float(float(value), 17)


def _is_exact_number(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


class FamilySpec:
    """A family F(k, λ) compiled to numpy for sweeps.

    `parameter_box` lists (lo, hi) per parameter; an axis with lo == hi is held
    fixed, which is how slices of three-parameter families are swept.
    """

    def __init__(
        self,
        expression,
        nu,
        nparams,
        parity="general",
        domain="box",
        parameter_box=None,
        grid=None,
        k_box=None,
        seeds=None,
        text=None,
        seed=0,
    ) -> None:
        check_parity(parity)
        if domain not in DOMAINS:
            raise ValueError(f"domain must be one of {', '.join(DOMAINS)}, got {domain!r}")
        if nu < 1:
            raise PreconditionViolated("a family needs at least one variable k1")
        self.expression = sympy.sympify(expression)
        self.nu = nu
        self.nparams = nparams
        self.parity = parity
        self.domain = domain
        self.variables = tuple(sympy.Symbol(f"k{i + 1}") for i in range(nu))
        self.parameters = tuple(sympy.Symbol(f"l{j + 1}") for j in range(nparams))
        stray = self.expression.free_symbols - set(self.variables) - set(self.parameters)
        if stray:
            names = ", ".join(sorted(str(s) for s in stray))
            raise PreconditionViolated(f"unexpected symbols in family: {names}")
        self.text = text or str(self.expression)

        box = parameter_box or ((-1.0, 1.0),) * nparams
        if len(box) != nparams:
            raise PreconditionViolated(
                f"parameter box has {len(box)} axes for {nparams} parameters"
            )
        self.parameter_box = tuple((float(lo), float(hi)) for lo, hi in box)
        for lo, hi in self.parameter_box:
            if lo > hi:
                raise PreconditionViolated(f"empty parameter interval [{lo}, {hi}]")
        self.grid = grid or DEFAULT_GRID.get(nparams, 24)
        if domain == "torus":
            self.k_box = ((0.0, TWO_PI),) * nu
        else:
            k_box = k_box or (DEFAULT_K_BOX,) * nu
            self.k_box = tuple((float(lo), float(hi)) for lo, hi in k_box)
        self.seeds = seeds or DEFAULT_SEEDS.get(nu, 4)
        self.seed = seed

        self.polynomial = self.expression.is_polynomial(*self.variables)
        self.degree = (
            sympy.Poly(self.expression, *self.variables).total_degree() if self.polynomial else None
        )
        args = (*self.variables, *self.parameters)
        gradient = [sympy.diff(self.expression, v) for v in self.variables]
        hessian = [[sympy.diff(g, v) for v in self.variables] for g in gradient]
        self._value = sympy.lambdify(args, self.expression, "numpy")
        self._gradient = [sympy.lambdify(args, g, "numpy") for g in gradient]
        self._hessian = [[sympy.lambdify(args, h, "numpy") for h in row] for row in hessian]
        if parity == "even":
            self._check_even()

    @classmethod
    def from_expression(cls, source, nu=None, nparams=None, **kwargs):
        """Build a family from expression text, an ExprAst or a sympy expression."""
        if isinstance(source, str):
            source = parse_expression(source)
        if isinstance(source, ExprAst):
            expression = source.to_sympy()
            text = source.to_text()
            found_nu, found_l = source.nu, source.nparams
        else:
            expression = sympy.sympify(source)
            text = str(expression)
            found_nu = max((_index(s, "k") for s in expression.free_symbols), default=0)
            found_l = max((_index(s, "l") for s in expression.free_symbols), default=0)
        kwargs.setdefault("text", text)
        if nparams is None:
            nparams = found_l
        return cls(expression, nu or found_nu, nparams, **kwargs)

    def _check_even(self):
        if self.polynomial:
            poly = sympy.Poly(sympy.expand(self.expression), *self.variables)
            for exps, coeff in poly.terms():
                if sum(exps) % 2 and sympy.simplify(coeff) != 0:
                    raise ParityViolation(f"family has an odd term of degree {sum(exps)}")
            return
        rng = np.random.default_rng(self.seed)
        lows = np.array([lo for lo, _ in self.k_box])
        highs = np.array([hi for _, hi in self.k_box])
        points = rng.uniform(lows, highs, size=(8, self.nu))
        for sample in range(4):
            lam = tuple(rng.uniform(lo, hi) if hi > lo else lo for lo, hi in self.parameter_box)
            plus = self.value(points, lam)
            minus = self.value(-points, lam)
            if np.max(np.abs(plus - minus)) > 1e-9 * (1.0 + np.max(np.abs(plus))):
                raise ParityViolation(f"F(-k, λ) != F(k, λ) at sample {sample}")

    # evaluation

    def _points(self, points):
        return np.asarray(points, dtype=float).reshape(-1, self.nu)

    def _call(self, func, points, lam):
        columns = [points[:, i] for i in range(self.nu)]
        out = func(*columns, *lam)
        return np.broadcast_to(np.asarray(out, dtype=float), (points.shape[0],))

    def value(self, points, lam):
        points = self._points(points)
        return self._call(self._value, points, lam)

    def gradient(self, points, lam):
        points = self._points(points)
        return np.stack([self._call(f, points, lam) for f in self._gradient], axis=1)

    def hessian(self, points, lam):
        points = self._points(points)
        rows = [
            np.stack([self._call(f, points, lam) for f in row], axis=1) for row in self._hessian
        ]
        return np.stack(rows, axis=1)

    # geometry

    def wrap(self, points):
        if self.domain == "torus":
            return np.mod(points, TWO_PI)
        return points

    def antipode(self, point):
        point = np.asarray(point, dtype=float)
        if self.domain == "torus":
            return np.mod(TWO_PI - point, TWO_PI)
        return -point

    def distance(self, a, b):
        delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
        if self.domain == "torus":
            delta = np.mod(delta, TWO_PI)
            delta = np.minimum(delta, TWO_PI - delta)
        return float(np.sqrt(np.sum(delta * delta)))

    def basic_points(self):
        """The fixed points of k ↦ −k; empty for general families."""
        if self.parity != "even":
            return ()
        if self.domain == "torus":
            return tuple(product((0, math.pi), repeat=self.nu))
        return ((0,) * self.nu,)

    def basic_match(self, point, tol):
        for basic in self.basic_points():
            if self.distance(point, basic) <= tol:
                return basic
        return None

    def inside(self, points):
        if self.domain == "torus":
            return np.ones(len(points), dtype=bool)
        mask = np.ones(len(points), dtype=bool)
        for i, (lo, hi) in enumerate(self.k_box):
            mask &= (points[:, i] >= lo) & (points[:, i] <= hi)
        return mask

    def seed_grid(self):
        axes = []
        for lo, hi in self.k_box:
            endpoint = self.domain != "torus"
            axes.append(np.linspace(lo, hi, self.seeds, endpoint=endpoint))
        seeds = np.array(list(product(*axes)), dtype=float)
        if self.parity == "even":
            seeds = np.unique(np.vstack([seeds, self.wrap(-seeds)]), axis=0)
        return seeds

    def axes(self):
        return [
            np.linspace(lo, hi, self.grid) if hi > lo else np.array([lo])
            for lo, hi in self.parameter_box
        ]

    # local jets

    def local_jet(self, point, lam, parity="general", max_degree=None, step=1e-2):
        """Jet of k ↦ F(p + k, λ) at a point; exact when p and λ are rational."""
        exact = self.polynomial and all(_is_exact_number(v) for v in (*point, *lam))
        if self.polynomial:
            at_lam = self.expression.subs(
                {s: _to_sympy_number(v) for s, v in zip(self.parameters, lam, strict=True)}
            )
            shift = {}
            for v, p in zip(self.variables, point, strict=True):
                if p != 0:
                    shift[v] = v + _to_sympy_number(p)
            shifted = sympy.expand(at_lam.subs(shift, simultaneous=True)) if shift else at_lam
            degree = max_degree or max(self.degree, 4)
            mode = "exact" if exact else "float"
            return jet_from_expression(shifted, self.variables, degree, parity, mode)
        center = np.asarray([float(p) for p in point])
        lam = tuple(float(v) for v in lam)

        def evaluator(offset):
            return float(self.value(center + offset, lam)[0])

        return finite_difference_jet(evaluator, self.nu, max_degree or 6, step, parity)

    def summary(self):
        return {
            "expression": self.text,
            "nu": self.nu,
            "nparams": self.nparams,
            "parity": self.parity,
            "domain": self.domain,
            "parameter_box": [list(b) for b in self.parameter_box],
            "grid": self.grid,
            "k_box": [list(b) for b in self.k_box],
            "seeds": self.seeds,
        }


@dataclass
class CriticalPoint:
    """A critical point of F(·, λ)."""

    location: tuple
    kind: str
    label: object = None
    value: float = 0.0
    det_hessian: float = 0.0

    def to_dict(self):
        return {
            "location": list(self.location),
            "kind": self.kind,
            "label": self.label.name if self.label is not None else None,
            "value": self.value,
            "det_hessian": self.det_hessian,
        }


def _normalized_det(hessians):
    hessians = np.asarray(hessians, dtype=float)
    nu = hessians.shape[-1]
    det = np.linalg.det(hessians)
    size = 1.0 + np.max(np.abs(hessians), axis=(-2, -1))
    return det / size ** (nu - 1)


def _scale(lam):
    return 1.0 + max((abs(float(v)) for v in lam), default=0.0)


def _newton_steps(hessians, gradients):
    try:
        return np.linalg.solve(hessians, -gradients[..., None])[..., 0]
    except np.linalg.LinAlgError:
        return np.einsum("nij,nj->ni", np.linalg.pinv(hessians), -gradients)


def newton_solve(family, seeds, lam, tolerances=DEFAULT_TOLERANCES):
    """Damped Newton on ∇F(·, λ) from every seed at once.

    Returns (converged locations, residuals, number of diverged seeds). Seeds
    that run outside the k box are dropped without counting as divergent.
    """
    x = family.wrap(np.array(seeds, dtype=float).reshape(-1, family.nu))
    scale = _scale(lam)
    with np.errstate(all="ignore"):
        g = family.gradient(x, lam)
        r = np.linalg.norm(g, axis=1)
        active = np.isfinite(r)
        done = r <= tolerances.newton * scale
        for _ in range(tolerances.newton_iterations):
            work = np.nonzero(active & ~done)[0]
            if len(work) == 0:
                break
            step = _newton_steps(family.hessian(x[work], lam), g[work])
            pending = np.all(np.isfinite(step), axis=1)
            active[work[~pending]] = False
            t = 1.0
            for _half in range(8):
                chosen = work[pending]
                if len(chosen) == 0:
                    break
                trial = family.wrap(x[chosen] + t * step[pending])
                gt = family.gradient(trial, lam)
                rt = np.linalg.norm(gt, axis=1)
                better = np.isfinite(rt) & (rt < r[chosen])
                accepted = chosen[better]
                x[accepted] = trial[better]
                g[accepted] = gt[better]
                r[accepted] = rt[better]
                pending[np.nonzero(pending)[0][better]] = False
                t *= 0.5
            # no decrease even with damping: the seed has stalled
            active[work[pending]] = False
            done = r <= tolerances.newton * scale
            runaway = np.abs(x).max(axis=1) > 1e6
            active &= ~runaway
        converged = np.isfinite(r) & (r <= tolerances.newton_accept * scale)
    inside = family.inside(x)
    keep = converged & inside
    diverged = int(np.sum(~converged & inside))
    return x[keep], r[keep], diverged


def _same_point(family, a, b, lam, tol, accept):
    distance = family.distance(a, b)
    if distance <= tol:
        return True
    if distance > MERGE_RADIUS:
        return False
    # Newton stalls far from degenerate roots; one root has a critical midpoint
    delta = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    if family.domain == "torus":
        delta = np.mod(delta + math.pi, TWO_PI) - math.pi
    middle = family.wrap(np.asarray(a, dtype=float) + delta / 2)
    gradient = family.gradient(middle, lam)[0]
    return bool(np.linalg.norm(gradient) <= accept)


def _dedupe(family, locations, residuals, lam, tolerances):
    accept = tolerances.newton_accept * _scale(lam)
    order = np.argsort(residuals, kind="stable")
    kept = []
    for i in order:
        point = locations[i]
        if not any(
            _same_point(family, point, other, lam, tolerances.dedupe, accept) for other in kept
        ):
            kept.append(point)
    return kept


def _sort_key(location):
    return tuple(round(float(v), 9) for v in location)


def solve_critical_points(family, lam, warm=(), tolerances=DEFAULT_TOLERANCES):
    """Deduplicated critical-point locations and the diverged seed count.

    Even families get their basic points and the antipode of every other
    point, so twins always come in pairs.
    """
    seeds = family.seed_grid()
    if len(warm):
        seeds = np.vstack([seeds, np.asarray(warm, dtype=float).reshape(-1, family.nu)])
    locations, residuals, diverged = newton_solve(family, seeds, lam, tolerances)
    candidates = [tuple(p) for p in family.basic_points()]
    extra = []
    for point in locations:
        if family.parity == "even" and family.basic_match(point, tolerances.dedupe) is None:
            extra.append(family.antipode(point))
    points = [np.asarray(c, dtype=float) for c in candidates]
    all_locations = np.array(points + list(locations) + extra, dtype=float).reshape(-1, family.nu)
    all_residuals = np.concatenate(
        [np.full(len(points), -1.0), residuals, np.zeros(len(extra))]
    )
    kept = _dedupe(family, all_locations, all_residuals, lam, tolerances)
    kept.sort(key=_sort_key)
    return kept, diverged


def _sign_data(hessian):
    values = np.linalg.eigvalsh(hessian)
    return "+" * int(np.sum(values > 0)) + "-" * int(np.sum(values < 0))


def _point_kind(family, location, tol):
    if family.parity != "even":
        return "plain", location
    basic = family.basic_match(location, tol)
    if basic is not None:
        return "basic", basic
    return "twin", location


def _label_point(family, location, lam, kind, hessian):
    parity = "even" if kind == "basic" else "general"
    if abs(_normalized_det(hessian)) > DEGENERACY_THRESHOLD:
        return morse_label(_sign_data(hessian), parity, confidence="heuristic")
    jet = family.local_jet(location, lam, parity)
    return classify(jet, parity, tolerances=LOCAL_TOLERANCES)


def find_critical_points(
    family, lam, tolerances=DEFAULT_TOLERANCES, warm=(), label=True, divergences=None
):
    """Critical points of F(·, λ), labelled and sorted by location.

    Seeds that fail to converge are appended to `divergences` as
    NewtonDivergence records when a list is given.
    """
    lam = tuple(lam)
    if len(lam) != family.nparams:
        raise PreconditionViolated(f"expected {family.nparams} parameter values, got {len(lam)}")
    float_lam = tuple(float(v) for v in lam)
    locations, diverged = solve_critical_points(family, float_lam, warm, tolerances)
    if divergences is not None:
        for _ in range(diverged):
            divergences.append(NewtonDivergence(f"seed did not converge at λ={list(float_lam)}"))
    points = []
    for location in locations:
        kind, snapped = _point_kind(family, location, tolerances.dedupe)
        coords = np.asarray(snapped, dtype=float)
        hessian = family.hessian(coords, float_lam)[0]
        value = float(family.value(coords, float_lam)[0])
        det = float(np.linalg.det(hessian))
        point_label = None
        if label:
            local_lam = lam if kind == "basic" else float_lam
            point_label = _label_point(family, snapped, local_lam, kind, hessian)
        points.append(
            CriticalPoint(
                location=tuple(float(v) for v in snapped),
                kind=kind,
                label=point_label,
                value=value,
                det_hessian=det,
            )
        )
    return points


def degenerate_points(family, lam, tolerances=DEFAULT_TOLERANCES):
    """The critical points of F(·, λ) that are not Morse."""
    return [
        p
        for p in find_critical_points(family, lam, tolerances)
        if p.label is not None and p.label.family not in ("Morse", "Regular")
    ]


def pair_twins(points, family=None, tol=None, torus=False):
    """Match every non-basic point with its antipode.

    `points` are CriticalPoints or bare locations; a location equal to its own
    antipode is basic and is left out.
    """
    tol = DEFAULT_TOLERANCES.dedupe if tol is None else tol
    if family is not None:
        torus = family.domain == "torus"

    def antipode(p):
        p = np.asarray(p, dtype=float).reshape(-1)
        return np.mod(TWO_PI - p, TWO_PI) if torus else -p

    def distance(a, b):
        a = np.asarray(a, dtype=float).reshape(-1)
        delta = np.abs(a - np.asarray(b, dtype=float).reshape(-1))
        if torus:
            delta = np.mod(delta, TWO_PI)
            delta = np.minimum(delta, TWO_PI - delta)
        return float(np.sqrt(np.sum(delta * delta)))

    twins = []
    for point in points:
        if isinstance(point, CriticalPoint):
            if point.kind == "basic":
                continue
            location = point.location
        else:
            location = point
        if distance(location, antipode(location)) <= tol:
            continue
        twins.append((point, location))

    pairs = []
    used = set()
    for i, (point, location) in enumerate(twins):
        if i in used:
            continue
        mirror = antipode(location)
        match = next(
            (
                j
                for j in range(i + 1, len(twins))
                if j not in used and distance(twins[j][1], mirror) <= tol
            ),
            None,
        )
        if match is None:
            where = list(np.ravel(location))
            raise PairingFailure(f"no antipodal twin for the critical point at {where}")
        used.update((i, match))
        pairs.append((point, twins[match][0]))
    return pairs


@dataclass
class NodeState:
    parameters: tuple
    locations: list
    signature: tuple
    diverged: int = 0


@dataclass
class Crossing:
    """A refined caustic point on a grid edge."""

    parameters: tuple
    location: tuple
    kind: str
    label: object
    residual: float
    edge: tuple = ()

    def to_dict(self):
        return {
            "parameters": list(self.parameters),
            "location": list(self.location),
            "kind": self.kind,
            "label": self.label.name if self.label is not None else None,
            "residual": self.residual,
            "edge": [list(e) for e in self.edge],
        }


@dataclass
class Region:
    """Connected grid nodes sharing one critical-point census."""

    region_id: int
    signature: tuple
    nodes: list = field(default_factory=list)
    sample: tuple = ()

    @property
    def basic(self):
        return dict(Counter(self.signature[0]))

    @property
    def twin_pairs(self):
        return self.signature[1]

    @property
    def plain(self):
        return self.signature[2]

    def to_dict(self):
        return {
            "region": self.region_id,
            "nodes": len(self.nodes),
            "sample": list(self.sample),
            "basic": self.basic,
            "twin_pairs": self.twin_pairs,
            "plain": self.plain,
        }


@dataclass
class CausticDiagram:
    """Result of a sweep: refined crossings, regions and bookkeeping."""

    family: dict
    axes: list
    crossings: list
    regions: list
    node_regions: dict = field(default_factory=dict)
    diverged_seeds: int = 0
    unresolved_cells: list = field(default_factory=list)

    @property
    def varying_axes(self):
        return [i for i, axis in enumerate(self.axes) if len(axis) > 1]

    def labels(self):
        return sorted({c.label.name for c in self.crossings if c.label is not None})

    def to_dict(self):
        return {
            "family": self.family,
            "axes": [
                {"parameter": f"l{i + 1}", "lo": float(a[0]), "hi": float(a[-1]), "count": len(a)}
                for i, a in enumerate(self.axes)
            ],
            "crossings": [c.to_dict() for c in self.crossings],
            "regions": [r.to_dict() for r in self.regions],
            "labels": self.labels(),
            "diverged_seeds": self.diverged_seeds,
            "unresolved_cells": list(self.unresolved_cells),
        }


def region_census(diagram):
    """One row per region: basic points by label, twin pairs, plain points."""
    return [region.to_dict() for region in diagram.regions]


class CausticSweeper:
    """Grid sweep of a family over its parameter box."""

    def __init__(
        self,
        family,
        quiet=False,
        tolerances=DEFAULT_TOLERANCES,
        max_workers=None,
        bisection_steps=BISECTION_STEPS,
    ) -> None:
        self.family = family
        self.quiet = quiet
        self.tolerances = tolerances
        self.max_workers = max_workers or thread_count()
        self.bisection_steps = bisection_steps
        self._lock = threading.Lock()
        self._finished = 0

    def _log(self, message):
        if not self.quiet:
            print(message, file=sys.stderr)

    # per-node work

    def _signature(self, locations, lam):
        family = self.family
        basic = []
        twins = 0
        plain = 0
        for location in locations:
            kind, snapped = _point_kind(family, location, self.tolerances.dedupe)
            if kind == "basic":
                hessian = family.hessian(np.asarray(snapped, dtype=float), lam)[0]
                label = _label_point(family, snapped, lam, kind, hessian)
                basic.append(label.name)
            elif kind == "twin":
                twins += 1
            else:
                plain += 1
        return (tuple(sorted(basic)), twins // 2, plain)

    def _solve(self, lam, warm):
        locations, diverged = solve_critical_points(self.family, lam, warm, self.tolerances)
        return NodeState(lam, locations, self._signature(locations, lam), diverged)

    def _solve_line(self, args):
        axes, line = args
        states = {}
        warm = ()
        for index in line:
            lam = tuple(float(axes[d][i]) for d, i in enumerate(index))
            state = self._solve(lam, warm)
            states[index] = state
            warm = state.locations
        with self._lock:
            self._finished += 1
            if self._total >= 10 and self._finished % max(1, self._total // 10) == 0:
                self._log(f"Solved {self._finished}/{self._total} grid lines")
        return states

    # edge refinement

    def _lam_at(self, lam_a, lam_b, t):
        return tuple(float(a + t * (b - a)) for a, b in zip(lam_a, lam_b, strict=True))

    def _det(self, point, lam):
        hessian = self.family.hessian(np.asarray(point, dtype=float), lam)
        return float(_normalized_det(hessian)[0])

    def _bracket(self, state_a, state_b):
        lam_a, lam_b = state_a.parameters, state_b.parameters
        t0, t1 = 0.0, 1.0
        low, high = state_a, state_b
        for _ in range(self.bisection_steps):
            t = (t0 + t1) / 2
            lam = self._lam_at(lam_a, lam_b, t)
            mid = self._solve(lam, list(low.locations) + list(high.locations))
            if mid.signature == low.signature:
                t0, low = t, mid
            else:
                t1, high = t, mid
        return t0, t1, low, high

    def _basic_crossing(self, lam_a, lam_b, t0, t1):
        for basic in self.family.basic_points():
            d0 = self._det(basic, self._lam_at(lam_a, lam_b, t0))
            d1 = self._det(basic, self._lam_at(lam_a, lam_b, t1))
            if d0 == 0 or d1 == 0 or (d0 > 0) != (d1 > 0):
                width = math.dist(lam_a, lam_b)
                while (t1 - t0) * width > self.tolerances.bisection:
                    t = (t0 + t1) / 2
                    d = self._det(basic, self._lam_at(lam_a, lam_b, t))
                    if d == 0:
                        t0 = t1 = t
                        break
                    if (d > 0) == (d0 > 0):
                        t0, d0 = t, d
                    else:
                        t1 = t
                t = (t0 + t1) / 2
                return basic, t, abs(self._det(basic, self._lam_at(lam_a, lam_b, t)))
        return None

    def _augmented(self, z, lam_a, lam_b):
        nu = self.family.nu
        lam = self._lam_at(lam_a, lam_b, z[nu])
        point = z[:nu]
        gradient = self.family.gradient(point, lam)[0]
        return np.append(gradient, self._det(point, lam))

    def _refine_degenerate(self, point, t, lam_a, lam_b):
        """Newton on {∇F = 0, det Hess F = 0} in (k, t)."""
        family = self.family
        nu = family.nu
        scale = _scale(lam_a) + _scale(lam_b)
        z = np.append(np.asarray(point, dtype=float), t)
        residual = self._augmented(z, lam_a, lam_b)
        r = float(np.linalg.norm(residual))
        for _ in range(self.tolerances.newton_iterations):
            if r <= self.tolerances.newton * scale:
                break
            jacobian = np.empty((nu + 1, nu + 1))
            lam = self._lam_at(lam_a, lam_b, z[nu])
            jacobian[:nu, :nu] = family.hessian(z[:nu], lam)[0]
            for j in range(nu + 1):
                h = 1e-6 * max(1.0, abs(z[j]))
                plus, minus = z.copy(), z.copy()
                plus[j] += h
                minus[j] -= h
                forward = self._augmented(plus, lam_a, lam_b)
                column = (forward - self._augmented(minus, lam_a, lam_b)) / (2 * h)
                if j == nu:
                    jacobian[:, j] = column
                else:
                    jacobian[nu, j] = column[nu]
            step = np.linalg.lstsq(jacobian, -residual, rcond=None)[0]
            damping = 1.0
            for _half in range(8):
                trial = z + damping * step
                trial[:nu] = family.wrap(trial[:nu])
                trial_residual = self._augmented(trial, lam_a, lam_b)
                trial_r = float(np.linalg.norm(trial_residual))
                if np.isfinite(trial_r) and trial_r < r:
                    z, residual, r = trial, trial_residual, trial_r
                    break
                damping *= 0.5
            else:
                break
        return z[:nu], float(z[nu]), r, scale

    def _refine_edge(self, edge):
        (index_a, state_a), (index_b, state_b) = edge
        family = self.family
        tol = self.tolerances
        lam_a, lam_b = state_a.parameters, state_b.parameters
        even = family.parity == "even"
        # twins can merge into a basic point before its determinant changes sign
        found = self._basic_crossing(lam_a, lam_b, 0.0, 1.0) if even else None
        if found is None:
            t0, t1, low, high = self._bracket(state_a, state_b)
            if even:
                found = self._basic_crossing(lam_a, lam_b, t0, t1)
        if found is not None:
            basic, t, residual = found
            kind, location = "basic", basic
        else:
            candidates = []
            for t, state in ((t0, low), (t1, high)):
                lam = self._lam_at(lam_a, lam_b, t)
                for point in state.locations:
                    if family.basic_match(point, tol.dedupe) is None or family.parity != "even":
                        candidates.append((abs(self._det(point, lam)), t, point))
            if not candidates:
                return None, {
                    "edge": [list(index_a), list(index_b)],
                    "parameters": list(self._lam_at(lam_a, lam_b, (t0 + t1) / 2)),
                    "reason": "census changes but no degenerate candidate was found",
                }
            _, t_start, start = min(candidates, key=lambda c: c[0])
            location, t, residual, scale = self._refine_degenerate(start, t_start, lam_a, lam_b)
            if residual > tol.newton_accept * scale or not -0.5 <= t <= 1.5:
                return None, {
                    "edge": [list(index_a), list(index_b)],
                    "parameters": list(self._lam_at(lam_a, lam_b, t)),
                    "reason": f"refinement did not converge (residual {residual:.3g})",
                }
            kind, location = _point_kind(family, location, tol.dedupe)
            basic = family.basic_match(location, MERGE_RADIUS) if kind == "twin" else None
            if basic is not None:
                kind, location = "basic", basic
                residual = abs(self._det(basic, self._lam_at(lam_a, lam_b, t)))

        parameters = self._lam_at(lam_a, lam_b, t)
        parity = "even" if kind == "basic" else "general"
        try:
            jet = family.local_jet(location, parameters, parity)
            label = classify(jet, parity, tolerances=LOCAL_TOLERANCES)
        except ValueError as e:
            return None, {
                "edge": [list(index_a), list(index_b)],
                "parameters": list(parameters),
                "reason": f"classification failed: {e!s}",
            }
        crossing = Crossing(
            parameters=parameters,
            location=tuple(float(v) for v in location),
            kind=kind,
            label=label,
            residual=residual,
            edge=(index_a, index_b),
        )
        return crossing, None

    # assembly

    def _regions(self, axes, states, cut_edges):
        parent = {index: index for index in states}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        shape = tuple(len(a) for a in axes)
        for index in states:
            for d in range(len(shape)):
                if index[d] + 1 >= shape[d]:
                    continue
                neighbour = index[:d] + (index[d] + 1,) + index[d + 1 :]
                if (index, neighbour) in cut_edges:
                    continue
                if states[index].signature == states[neighbour].signature:
                    parent[find(neighbour)] = find(index)

        regions = {}
        node_regions = {}
        for index in sorted(states):
            root = find(index)
            if root not in regions:
                regions[root] = Region(
                    region_id=len(regions),
                    signature=states[index].signature,
                    sample=states[index].parameters,
                )
            regions[root].nodes.append(index)
            node_regions[index] = regions[root].region_id
        return list(regions.values()), node_regions

    def sweep(self):
        family = self.family
        if family.nparams not in (1, 2, 3):
            raise PreconditionViolated(f"sweeps need 1 to 3 parameters, got {family.nparams}")
        axes = family.axes()
        shape = tuple(len(a) for a in axes)
        lines = {}
        for index in np.ndindex(shape):
            lines.setdefault(index[:-1], []).append(index)
        self._total = len(lines)
        self._finished = 0
        self._log(
            f"Sweeping {family.text} over {'x'.join(str(n) for n in shape)} nodes "
            f"with {self.max_workers} threads"
        )

        states = {}
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            for part in pool.map(self._solve_line, [(axes, line) for line in lines.values()]):
                states.update(part)

            edges = []
            for index in sorted(states):
                for d in range(len(shape)):
                    if index[d] + 1 >= shape[d]:
                        continue
                    neighbour = index[:d] + (index[d] + 1,) + index[d + 1 :]
                    if states[index].signature != states[neighbour].signature:
                        edges.append(((index, states[index]), (neighbour, states[neighbour])))
            self._log(f"Refining {len(edges)} caustic crossings")
            results = list(pool.map(self._refine_edge, edges))

        crossings = []
        unresolved = []
        for crossing, problem in results:
            if crossing is not None:
                crossings.append(crossing)
            else:
                unresolved.append(problem)
        cut = {(e[0][0], e[1][0]) for e in edges}
        regions, node_regions = self._regions(axes, states, cut)

        if family.parity == "even":
            for region in regions:
                state = states[region.nodes[0]]
                try:
                    pair_twins(state.locations, family, self.tolerances.dedupe * 10)
                except PairingFailure as e:
                    unresolved.append(
                        {"edge": [], "parameters": list(state.parameters), "reason": str(e)}
                    )
        for problem in unresolved:
            problem.setdefault("error", UnresolvedCell.__name__)

        diagram = CausticDiagram(
            family=family.summary(),
            axes=axes,
            crossings=crossings,
            regions=regions,
            node_regions=node_regions,
            diverged_seeds=sum(s.diverged for s in states.values()),
            unresolved_cells=unresolved,
        )
        self._log(
            f"Found {len(crossings)} crossings in {len(regions)} regions"
            f" ({len(unresolved)} unresolved)"
        )
        return diagram


def sweep(family, quiet=True, tolerances=DEFAULT_TOLERANCES, max_workers=None):
    """Sweep a family over its parameter grid and return the caustic diagram."""
    return CausticSweeper(family, quiet, tolerances, max_workers).sweep()
