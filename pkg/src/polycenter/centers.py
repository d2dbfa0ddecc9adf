"""Center functions on distance matrices and their geometric realization.

A center function g assigns a real value to a distance matrix, is invariant
under the index reversal sigma, and is positively homogeneous of some integer
degree.  Evaluating g on the n cyclic shifts of a polygon's distance matrix
and normalizing to sum 1 yields affine vertex weights whose combination is a
point that commutes with similarities and is invariant under relabellings.
The reverse direction is implemented too: given any black-box center, local
three-vertex weight solves recover a usable weight vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    BadWeights,
    DegenerateNormalization,
    NoValidTriple,
    OutOfDomain,
    PointOffLine,
    UnknownName,
    ZeroValue,
)
from .geometry import (
    DistanceMatrix,
    Point,
    Polygon,
    ShapeKind,
    base_tolerance,
    classify,
    distance_matrix,
)

#: relative tolerance for comparing center-function values, which carry the
#: physical dimension length^m and must be compared scale-free
VALUE_RTOL = 1e-9


@dataclass(frozen=True)
class CenterFunction:
    """A named evaluator over distance matrices plus its metadata.

    ``homogeneity_degree`` is the declared degree when known (built-ins) or a
    numeric estimate (DSL-compiled functions).  ``domain`` restricts the
    polygon family the induced center is defined on.
    """

    name: str
    evaluator: Callable[[DistanceMatrix], float]
    homogeneity_degree: Optional[int] = None
    domain: Callable[[Polygon], bool] = field(default=lambda p: True)

    def __call__(self, m: DistanceMatrix) -> float:
        return float(self.evaluator(m))

    def accepts(self, p: Polygon) -> bool:
        return bool(self.domain(p))


class CoefficientVector:
    """Affine weights (lambda_1, ..., lambda_n) summing to 1.

    These are coefficients, not coordinates: for n > 3 different weight
    vectors may represent the same point, so center equality is always
    decided on points, never on weights.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size < 3:
            raise BadWeights(f"need at least 3 weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise BadWeights("weights must be finite")
        s = float(w.sum())
        if abs(s - 1.0) > 1e-12:
            raise BadWeights(f"weights must sum to 1, got {s!r}")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def __setattr__(self, name, value):
        raise AttributeError("CoefficientVector is immutable")

    @property
    def n(self) -> int:
        return self.weights.size

    def __iter__(self):
        return iter(self.weights.tolist())

    def __getitem__(self, k: int) -> float:
        return float(self.weights[k])

    def combine(self, p: Polygon) -> Point:
        """The point these weights represent on a given polygon."""
        if p.n != self.n:
            raise BadWeights(f"{self.n} weights cannot combine {p.n} vertices")
        xy = self.weights @ p.coords()
        return Point(float(xy[0]), float(xy[1]))

    def __repr__(self) -> str:
        return f"CoefficientVector({self.weights.tolist()})"


@dataclass(frozen=True)
class CenterEvaluation:
    """A realized center: the point, one weight representation, and its source."""

    point: Point
    coefficients: CoefficientVector
    source_name: str
    polygon: Polygon

    def to_json_obj(self) -> dict:
        return {
            "name": self.source_name,
            "point": [self.point.x, self.point.y],
            "weights": self.coefficients.weights.tolist(),
        }


# ---------------------------------------------------------------------------
# the coordinate map: center function -> point
# ---------------------------------------------------------------------------

def shift_values(g: CenterFunction, m: DistanceMatrix) -> np.ndarray:
    """g evaluated on the n cyclic shifts of a distance matrix."""
    return np.array([g(m.shifted(k)) for k in range(m.n)], dtype=float)


def coordinate_map(g: CenterFunction, p: Polygon) -> CenterEvaluation:
    """Evaluate the center induced by g: normalized shift values as weights.

    Raises OutOfDomain when p is outside g's family and
    DegenerateNormalization when the shift values sum to (nearly) zero.
    """
    if not g.accepts(p):
        raise OutOfDomain(f"polygon outside the domain of center function {g.name!r}")
    m = distance_matrix(p)
    values = shift_values(g, m)
    denom = float(values.sum())
    vmax = float(np.abs(values).max())
    if abs(denom) <= VALUE_RTOL * max(vmax, 1e-300):
        raise DegenerateNormalization(
            f"shift values of {g.name!r} sum to {denom:g} (max |value| {vmax:g})"
        )
    weights = values / denom
    weights = weights / weights.sum()
    coeffs = CoefficientVector(weights)
    return CenterEvaluation(coeffs.combine(p), coeffs, g.name, p)


def affine_combination(
    evals: Sequence[CenterEvaluation], mu: Sequence[float]
) -> CenterEvaluation:
    """Affine combination of centers of one polygon, itself a center.

    Weights must sum to 1 (they may be negative or exceed 1); the result's
    coefficient vector is the matching combination of the input vectors.
    """
    if len(evals) != len(mu) or not evals:
        raise BadWeights("need one combination weight per evaluation")
    mus = np.asarray(mu, dtype=float)
    if abs(mus.sum() - 1.0) > 1e-12:
        raise BadWeights(f"combination weights must sum to 1, got {mus.sum()!r}")
    base = evals[0].polygon
    if any(e.polygon != base for e in evals[1:]):
        raise BadWeights("all evaluations must come from the same polygon")
    weights = sum(m * e.coefficients.weights for m, e in zip(mus, evals))
    coeffs = CoefficientVector(weights / weights.sum())
    name = "affine(" + ", ".join(e.source_name for e in evals) + ")"
    return CenterEvaluation(coeffs.combine(base), coeffs, name, base)


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryReport:
    """Per-sample deviation of g from reversal invariance."""

    passed: bool
    max_violation: float
    violations: tuple  # (sample index, |g - g_sigma|, tolerance) for failures

    def to_json_obj(self) -> dict:
        return {
            "passed": self.passed,
            "max_violation": self.max_violation,
            "failures": [list(v) for v in self.violations],
        }


def verify_symmetry(g: CenterFunction, samples: Sequence[Polygon]) -> SymmetryReport:
    """Check g(M) == g(M reversed by sigma) on every sample polygon."""
    violations = []
    worst = 0.0
    for idx, p in enumerate(samples):
        m = distance_matrix(p)
        v1 = g(m)
        v2 = g(m.reversed())
        tol = VALUE_RTOL * max(abs(v1), abs(v2), 1e-300)
        diff = abs(v1 - v2)
        worst = max(worst, diff)
        if diff > tol:
            violations.append((idx, diff, tol))
    return SymmetryReport(not violations, worst, tuple(violations))


@dataclass(frozen=True)
class HomogeneityReport:
    """Numeric estimate of the homogeneity degree of a center function."""

    degree: Optional[int]
    consistent: bool
    max_deviation: float
    samples_used: int

    def to_json_obj(self) -> dict:
        return {
            "degree": self.degree,
            "consistent": self.consistent,
            "max_deviation": self.max_deviation,
            "samples_used": self.samples_used,
        }


def verify_homogeneity(
    g: CenterFunction, samples: Sequence[Polygon], factors: Sequence[float] = (2.0, 3.0)
) -> HomogeneityReport:
    """Estimate the degree m from g(lambda * d) / g(d) = lambda^m.

    Raises ZeroValue when g vanishes on a sample; the estimates must round to
    a single integer within 1e-6 across all samples and factors.
    """
    estimates = []
    for p in samples:
        m = distance_matrix(p)
        base = g(m)
        if base == 0.0:
            raise ZeroValue("center function vanishes on a sample polygon")
        for lam in factors:
            scaled = g(m.scaled(lam))
            ratio = scaled / base
            if ratio <= 0.0:
                return HomogeneityReport(None, False, math.inf, len(samples))
            estimates.append(math.log(ratio) / math.log(lam))
    if not estimates:
        raise ZeroValue("no samples provided")
    rounded = round(estimates[0])
    dev = max(abs(e - rounded) for e in estimates)
    consistent = dev <= 1e-6
    return HomogeneityReport(rounded if consistent else None, consistent, dev, len(samples))


# ---------------------------------------------------------------------------
# inverse direction: black-box center -> weight vector
# ---------------------------------------------------------------------------

def extract_center_function(
    center: Callable[[Polygon], Point], p: Polygon
) -> CoefficientVector:
    """Recover affine weights for a black-box center on one polygon.

    For every index k whose consecutive triple (V_{k-1}, V_k, V_{k+1}) is
    non-collinear, the center point has a unique three-term affine expression
    in that triple; the weight rows (zero-filled elsewhere) are averaged over
    all solvable k.  For flat polygons the triple merely has to be
    non-coincident and the symmetric side condition mu_{k,k-1} = mu_{k,k+1}
    is imposed; triples whose constrained system is inconsistent are skipped.
    """
    n = p.n
    shape = classify(p)
    phi = center(p)

    if shape.kind is ShapeKind.ALL_COINCIDENT:
        # the center must sit on the collapsed vertices; uniform weights do
        return CoefficientVector(np.full(n, 1.0 / n))

    coords = p.coords()
    diam = p.diameter()
    tol = base_tolerance() * diam
    rows = []

    if shape.kind is ShapeKind.NON_FLAT:
        target = np.array([1.0, phi.x, phi.y])
        for k in range(n):
            tri = coords[[(k - 1) % n, k, (k + 1) % n]]
            area2 = abs(
                (tri[1, 0] - tri[0, 0]) * (tri[2, 1] - tri[0, 1])
                - (tri[1, 1] - tri[0, 1]) * (tri[2, 0] - tri[0, 0])
            )
            if area2 <= base_tolerance() * diam * diam:
                continue
            a = np.vstack([np.ones(3), tri.T])
            mu = np.linalg.solve(a, target)
            if np.abs(a @ mu - target).max() > max(tol, 1e-12 * diam):
                continue
            row = np.zeros(n)
            row[[(k - 1) % n, k, (k + 1) % n]] += mu  # += so n=3 wraps correctly
            rows.append(row)
    else:
        # flat proper: work in the 1d coordinate along the carrier line
        anchor = coords[0]
        far = coords[int(np.argmax(np.sqrt(((coords - anchor) ** 2).sum(axis=1))))]
        u = (far - anchor) / np.linalg.norm(far - anchor)
        t = (coords - anchor) @ u / diam
        perp = abs((phi.x - anchor[0]) * (-u[1]) + (phi.y - anchor[1]) * u[0])
        if perp > tol:
            raise PointOffLine(
                "claimed center lies off the carrier line of a flat polygon"
            )
        t_phi = ((phi.x - anchor[0]) * u[0] + (phi.y - anchor[1]) * u[1]) / diam
        for k in range(n):
            idx = [(k - 1) % n, k, (k + 1) % n]
            trip = coords[idx]
            if max(np.linalg.norm(trip[i] - trip[j]) for i in range(3) for j in range(i)) <= tol:
                continue  # all three coincide
            # unknowns (mu_prev, mu_k, mu_next); last row enforces symmetry
            a = np.array([[1.0, 1.0, 1.0], [t[idx[0]], t[idx[1]], t[idx[2]]], [1.0, 0.0, -1.0]])
            b = np.array([1.0, t_phi, 0.0])
            mu, *_ = np.linalg.lstsq(a, b, rcond=None)
            if np.abs(a @ mu - b).max() > 1e-9:
                continue  # constrained system inconsistent for this k
            row = np.zeros(n)
            row[idx] += mu
            rows.append(row)

    if not rows:
        raise NoValidTriple("no consecutive vertex triple admitted a weight solution")
    weights = np.mean(rows, axis=0)
    weights = weights / weights.sum()
    coeffs = CoefficientVector(weights)
    rebuilt = coeffs.combine(p)
    if rebuilt.distance_to(phi) > max(10.0 * tol, 1e-12 * diam):
        raise NoValidTriple(
            f"averaged weights reproduce {rebuilt} instead of {phi}"
        )
    return coeffs


# ---------------------------------------------------------------------------
# built-in catalog
# ---------------------------------------------------------------------------

def _clamped_sqrt(radicand: float, magnitude: float) -> float:
    """sqrt that forgives tiny negative round-off relative to the term sizes."""
    if radicand < 0.0:
        if radicand >= -VALUE_RTOL * max(magnitude, 1e-300):
            return 0.0
        raise ValueError(f"radicand {radicand:g} negative beyond round-off")
    return math.sqrt(radicand)


def _crosspoint_value(m: DistanceMatrix) -> float:
    """Two-radical tetragon function realizing the diagonal crosspoint.

    Each radical is sixteen times the squared area of the triangle cut off
    by one diagonal, so the value is nonnegative for genuine tetragons and
    homogeneous of degree 2.
    """
    a = m.entry(3, 4) ** 2
    b = m.entry(2, 4) ** 2
    c = m.entry(2, 3) ** 2
    mag = 4.0 * max(a * b, c * b) + (a + b + c) ** 2
    r1 = _clamped_sqrt(4.0 * a * b - (a + b - c) ** 2, mag)
    r2 = _clamped_sqrt(4.0 * c * b - (c + b - a) ** 2, mag)
    return r1 + r2


def _no_three_collinear(p: Polygon) -> bool:
    coords = p.coords()
    lim = base_tolerance() * p.diameter() ** 2
    n = p.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                cr = abs(
                    (coords[j, 0] - coords[i, 0]) * (coords[k, 1] - coords[i, 1])
                    - (coords[j, 1] - coords[i, 1]) * (coords[k, 0] - coords[i, 0])
                )
                if cr <= lim:
                    return False
    return True


def _positive_diameter(p: Polygon) -> bool:
    return classify(p).kind is not ShapeKind.ALL_COINCIDENT


_BUILTIN_ALIASES = {
    "simple": "simple_center",
    "crosspoint": "diagonal_crosspoint",
    "boundary": "boundary_centroid",
    "incenter": "triangle_incenter",
    "circumcenter": "triangle_circumcenter",
}


def builtin(name: str) -> CenterFunction:
    """Catalog of built-in center functions.

    centroid             g = 1 (degree 0), any polygon
    simple_center        g = d_{1, n/2+1} (degree 1), even n
    diagonal_crosspoint  two-radical tetragon function (degree 2), convex
                         tetragons with no three vertices collinear
    boundary_centroid    g = (d_{n,1} + d_{1,2}) / 2 (degree 1)
    triangle_incenter    g = d_{2,3} (degree 1), trigons
    triangle_circumcenter g = d23^2 (d13^2 + d12^2 - d23^2) (degree 4),
                         non-flat trigons
    """
    key = _BUILTIN_ALIASES.get(name, name)
    if key == "centroid":
        return CenterFunction("centroid", lambda m: 1.0, 0, lambda p: True)
    if key == "simple_center":
        return CenterFunction(
            "simple_center",
            lambda m: m.entry(1, m.n // 2 + 1),
            1,
            lambda p: p.n % 2 == 0,
        )
    if key == "diagonal_crosspoint":
        return CenterFunction(
            "diagonal_crosspoint",
            _crosspoint_value,
            2,
            lambda p: p.n == 4 and classify(p).convex and _no_three_collinear(p),
        )
    if key == "boundary_centroid":
        return CenterFunction(
            "boundary_centroid",
            lambda m: 0.5 * (m.entry(m.n, 1) + m.entry(1, 2)),
            1,
            _positive_diameter,
        )
    if key == "triangle_incenter":
        return CenterFunction(
            "triangle_incenter",
            lambda m: m.entry(2, 3),
            1,
            lambda p: p.n == 3 and _positive_diameter(p),
        )
    if key == "triangle_circumcenter":
        return CenterFunction(
            "triangle_circumcenter",
            lambda m: m.entry(2, 3) ** 2
            * (m.entry(1, 3) ** 2 + m.entry(1, 2) ** 2 - m.entry(2, 3) ** 2),
            4,
            lambda p: p.n == 3 and classify(p).kind is ShapeKind.NON_FLAT,
        )
    raise UnknownName(f"no built-in center function named {name!r}")


BUILTIN_NAMES = (
    "centroid",
    "simple_center",
    "diagonal_crosspoint",
    "boundary_centroid",
    "triangle_incenter",
    "triangle_circumcenter",
)


def builtins_for(p: Polygon) -> list[CenterFunction]:
    """All built-ins whose domain accepts the given polygon."""
    return [g for g in map(builtin, BUILTIN_NAMES) if g.accepts(p)]
