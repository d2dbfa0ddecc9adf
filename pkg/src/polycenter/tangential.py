"""Tangential polygons: incircle detection, tangent lengths, the incenter
weight formula, boundary and lamina centroids, and the collinearity and
parallelogram checks built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .centers import (
    CenterEvaluation,
    CoefficientVector,
    builtin,
    coordinate_map,
    extract_center_function,
)
from .errors import (
    BadAngles,
    NotConvex,
    NotParallelogram,
    NotTangential,
    NumericallyNegative,
    ZeroArea,
)
from .geometry import (
    Point,
    Polygon,
    ShapeKind,
    Vector,
    base_tolerance,
    classify,
    distance_matrix,
)
from .lines import LineSystem, contains
from .reports import Check, Report
from .symmetry import centers_collinear


@dataclass(frozen=True)
class Incircle:
    """A circle inscribed in a convex polygon, touching every side."""

    center: Point
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"incircle radius must be positive, got {self.radius}")

    def to_json_obj(self) -> dict:
        return {"center": [self.center.x, self.center.y], "radius": self.radius}


@dataclass(frozen=True)
class TangentLengths:
    """Distances from each vertex to its two adjacent tangency points.

    Consecutive lengths reconstruct the sides: d_{i,i+1} = x_i + x_{i+1}.
    """

    x: tuple

    def __len__(self) -> int:
        return len(self.x)

    def __getitem__(self, k: int) -> float:
        return self.x[k]

    def to_json_obj(self) -> list:
        return list(self.x)


def _internal_bisector(p: Polygon, k: int) -> Vector:
    u = (p.vertices[(k - 1) % p.n] - p.vertices[k]).normalized()
    w = (p.vertices[(k + 1) % p.n] - p.vertices[k]).normalized()
    return (u + w).normalized()


def incircle(p: Polygon) -> Incircle:
    """Inscribed circle of a convex polygon, if one touches every side.

    The candidate center is the intersection of the internal bisectors at the
    first two vertices; it is accepted only if its distance to all n side
    lines agrees and every tangency foot lies inside its closed side segment.
    This geometric test is decisive where the cyclic side-length system alone
    is not (for even n that system is underdetermined).
    """
    shape = classify(p)
    if not shape.convex:
        raise NotConvex("incircle detection requires a strictly convex polygon")
    tol = p.tol()
    b1 = _internal_bisector(p, 0)
    b2 = _internal_bisector(p, 1)
    den = b1.cross(b2)
    if abs(den) <= 1e-15:
        raise NotTangential("first two angle bisectors are parallel")
    diff = p.vertices[1] - p.vertices[0]
    s = diff.cross(b2) / den
    center = p.vertices[0] + s * b1

    dists = []
    for k in range(p.n):
        a = p.vertices[k]
        b = p.vertices[(k + 1) % p.n]
        edge = b - a
        elen = edge.norm()
        signed = edge.cross(center - a) / elen
        dists.append(signed)
        foot = (center - a).dot(edge) / (elen * elen)
        if foot < -tol / elen or foot > 1.0 + tol / elen:
            raise NotTangential(f"tangency foot of side {k + 1} falls outside the side")
    radius = float(np.mean(np.abs(dists)))
    if max(np.abs(dists)) - min(np.abs(dists)) > tol or not all(
        d * dists[0] > 0.0 for d in dists
    ):
        raise NotTangential("bisector point is not equidistant from all side lines")
    return Incircle(center, radius)


def tangent_lengths(p: Polygon, inc: Incircle) -> TangentLengths:
    """Tangent lengths x_i = sqrt(|V_i - center|^2 - r^2) of a valid incircle."""
    tol = p.tol()
    xs = []
    for v in p.vertices:
        sq = v.distance_to(inc.center) ** 2 - inc.radius ** 2
        if sq < 0.0:
            if sq < -tol * max(p.diameter(), 1e-300):
                raise NumericallyNegative(
                    f"vertex ({v.x:g}, {v.y:g}) lies inside the claimed incircle"
                )
            sq = 0.0
        xs.append(math.sqrt(sq))
    m = distance_matrix(p)
    for k in range(p.n):
        side = m.entry(k + 1, k + 2)
        if abs(side - xs[k] - xs[(k + 1) % p.n]) > tol:
            raise NotTangential(
                f"side {k + 1} is {side:g} but adjacent tangent lengths sum to "
                f"{xs[k] + xs[(k + 1) % p.n]:g}"
            )
    return TangentLengths(tuple(xs))


def incenter(p: Polygon) -> CenterEvaluation:
    """Incenter of a tangential polygon via the tangent-length weights.

    The weight of vertex k is x_{k-1} + x_{k+1}; the weights sum to the
    perimeter, and their affine combination lands on the incircle center.
    """
    inc = incircle(p)
    xs = tangent_lengths(p, inc).x
    n = p.n
    raw = np.array([xs[(k - 1) % n] + xs[(k + 1) % n] for k in range(n)])
    coeffs = CoefficientVector(raw / raw.sum())
    point = coeffs.combine(p)
    if point.distance_to(inc.center) > 10.0 * p.tol():
        raise NotTangential("tangent-length weights fail to reproduce the incircle center")
    ev = CenterEvaluation(point, coeffs, "incenter", p)
    return ev


def generate_tangential(radius: float, angles) -> Polygon:
    """Convex tangential polygon circumscribing the circle (origin, radius).

    ``angles`` are the tangency directions: strictly increasing values in
    [0, 2*pi) whose consecutive gaps (including the wrap-around) stay below
    pi.  Vertex i is the intersection of the tangent lines at angles i and
    i+1, so the result is tangential by construction.
    """
    if not (radius > 0.0 and math.isfinite(radius)):
        raise BadAngles(f"radius must be positive, got {radius}")
    theta = [float(a) for a in angles]
    n = len(theta)
    if n < 3:
        raise BadAngles(f"need at least 3 tangency angles, got {n}")
    if any(not 0.0 <= a < 2.0 * math.pi for a in theta):
        raise BadAngles("angles must lie in [0, 2*pi)")
    gaps = [theta[i + 1] - theta[i] for i in range(n - 1)]
    gaps.append(theta[0] + 2.0 * math.pi - theta[-1])
    if any(g <= 0.0 for g in gaps):
        raise BadAngles("angles must be strictly increasing")
    if any(g >= math.pi for g in gaps):
        raise BadAngles("every consecutive angle gap must stay below pi")
    verts = []
    for i in range(n):
        a1 = theta[i]
        a2 = theta[(i + 1) % n]
        u1 = np.array([math.cos(a1), math.sin(a1)])
        u2 = np.array([math.cos(a2), math.sin(a2)])
        v = radius * (u1 + u2) / (1.0 + float(u1 @ u2))
        verts.append(Point(float(v[0]), float(v[1])))
    return Polygon(verts)


# ---------------------------------------------------------------------------
# boundary and lamina centroids
# ---------------------------------------------------------------------------

def boundary_centroid(p: Polygon) -> CenterEvaluation:
    """Center of mass of the perimeter: vertex k weighs its two half-sides."""
    ev = coordinate_map(builtin("boundary_centroid"), p)
    return ev


def _lamina_point(p: Polygon) -> Point:
    coords = p.coords()
    x = coords[:, 0]
    y = coords[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    cross = x * yn - xn * y
    area2 = cross.sum()
    if abs(area2) <= 2.0 * base_tolerance() * p.diameter() ** 2:
        raise ZeroArea("polygon encloses no area")
    cx = ((x + xn) * cross).sum() / (3.0 * area2)
    cy = ((y + yn) * cross).sum() / (3.0 * area2)
    return Point(float(cx), float(cy))


def lamina_centroid(p: Polygon) -> CenterEvaluation:
    """Center of mass of the filled polygonal region (simple polygons).

    There is no closed-form weight formula here; the coefficient vector is
    recovered from the point by the local triple solver.
    """
    if classify(p).kind is not ShapeKind.NON_FLAT:
        raise ZeroArea("lamina centroid needs a non-flat polygon")
    point = _lamina_point(p)
    coeffs = extract_center_function(_lamina_point, p)
    return CenterEvaluation(point, coeffs, "lamina_centroid", p)


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------

def verify_am_collinearity(p: Polygon) -> Report:
    """Incenter, boundary centroid and lamina centroid of a tangential polygon
    are collinear."""
    evals = [incenter(p), boundary_centroid(p), lamina_centroid(p)]
    d = p.diameter()
    ok = centers_collinear(evals, area_tol=base_tolerance() * d * d)
    pts = "; ".join(f"{e.source_name} ({e.point.x:.12g}, {e.point.y:.12g})" for e in evals)
    return Report((Check("incenter-boundary-lamina-collinear", ok, pts),))


def centroid_simple_line_system() -> LineSystem:
    """The tetragon line through the centroid and the simple center:
    gamma_1 = gamma_3 and gamma_2 = gamma_4."""
    return LineSystem(4, np.array([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]]))


def is_parallelogram(p: Polygon) -> bool:
    if p.n != 4:
        return False
    tol = p.tol()
    mid_a = 0.5 * np.array([p.vertices[0].x + p.vertices[2].x, p.vertices[0].y + p.vertices[2].y])
    mid_b = 0.5 * np.array([p.vertices[1].x + p.vertices[3].x, p.vertices[1].y + p.vertices[3].y])
    return bool(np.abs(mid_a - mid_b).max() <= tol)


def verify_parallelogram_theorem(p: Polygon) -> Report:
    """The boundary centroid of a parallelogram lies on the centroid /
    simple-center line, checked at the coefficient level.

    Membership stays well-defined even when the realized set degenerates to a
    single point, which for a parallelogram it does (both centers sit at the
    diagonal crossing).
    """
    if not is_parallelogram(p):
        raise NotParallelogram("opposite vertices do not share a diagonal midpoint")
    weights = boundary_centroid(p).coefficients
    ok = contains(centroid_simple_line_system(), p, weights)
    return Report(
        (
            Check(
                "boundary-centroid-on-centroid-simple-line",
                ok,
                f"weights {np.round(weights.weights, 12).tolist()}",
            ),
        )
    )
