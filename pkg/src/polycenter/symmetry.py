"""Symmetry groups of labelled polygons, their fixed sets, and center geometry.

Every center of a polygon is fixed by each rigid motion in the polygon's
symmetry group, so the fixed set (the whole plane, a mirror axis, or a single
point) confines where centers can live.  Central vectors provide the reverse
direction: each one yields a pair of distinct centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .centers import CenterEvaluation, builtin, coordinate_map
from .errors import (
    ClassificationMismatch,
    Degenerate,
    FlatTrigon,
    NoIsometry,
    TooFew,
)
from .geometry import (
    DihedralElement,
    Point,
    Polygon,
    ShapeKind,
    Similarity,
    Vector,
    base_tolerance,
    classify,
    distance_matrix,
    find_isometry,
    relabel,
)
from .lines import RealizedLine, line_through
from .reports import Check, Report

#: angle comparisons treat differences below this as ties (condition fails)
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class SymmetryGroup:
    """Relabellings realized by rigid motions of the plane, with the motions."""

    polygon: Polygon
    elements: tuple  # pairs (DihedralElement, Similarity with scale 1)

    @property
    def order(self) -> int:
        return len(self.elements)

    def motions(self) -> list[Similarity]:
        return [t for _, t in self.elements]

    def to_json_obj(self) -> dict:
        return {
            "order": self.order,
            "elements": [
                {"rotation": a.rotation, "reflected": a.reflected, "name": str(a)}
                for a, _ in self.elements
            ],
        }


def symmetry_group(p: Polygon) -> SymmetryGroup:
    """All dihedral relabellings that are realized by a rigid motion of p.

    A relabelling alpha qualifies when the distance matrix is invariant under
    alpha and an isometry carries each vertex to its alpha-image; the
    matrix test runs first so near-symmetric inputs cannot sneak in spurious
    isometries.
    """
    if classify(p).kind is ShapeKind.ALL_COINCIDENT:
        raise Degenerate("symmetry group undefined when all vertices coincide")
    m = distance_matrix(p)
    tol = p.tol()
    found = []
    for alpha in DihedralElement.elements(p.n):
        if not m.permuted(alpha).allclose(m, tol):
            continue
        try:
            t = find_isometry(p, relabel(p, alpha))
        except NoIsometry:
            continue
        found.append((alpha, t))
    return SymmetryGroup(p, tuple(found))


class FixedSetKind(Enum):
    WHOLE_PLANE = "WholePlane"
    LINE = "Line"
    POINT = "Point"


@dataclass(frozen=True)
class FixedSet:
    """Points fixed by every motion of a symmetry group."""

    kind: FixedSetKind
    line: Optional[RealizedLine] = None
    point: Optional[Point] = None

    def contains_point(self, p: Point, tol: float) -> bool:
        if self.kind is FixedSetKind.WHOLE_PLANE:
            return True
        if self.kind is FixedSetKind.LINE:
            return self.line.contains_point(p, tol)
        return self.point.distance_to(p) <= tol

    def to_json_obj(self) -> dict:
        obj = {"kind": self.kind.value}
        if self.kind is FixedSetKind.LINE:
            obj["line"] = self.line.to_json_obj()
        elif self.kind is FixedSetKind.POINT:
            obj["point"] = [self.point.x, self.point.y]
        return obj


def _rotation_fixed_point(t: Similarity) -> Point:
    r = t.linear()
    rhs = np.array([t.translation.dx, t.translation.dy])
    c = np.linalg.solve(np.eye(2) - r, rhs)
    return Point(float(c[0]), float(c[1]))


def _mirror_axis(t: Similarity, anchor: Point) -> RealizedLine:
    """Axis of a pure reflection, anchored near a reference point."""
    half = 0.5 * t.rotation
    u = Vector(math.cos(half), math.sin(half))
    on_axis = Point(0.5 * t.translation.dx, 0.5 * t.translation.dy)
    s = (anchor - on_axis).dot(u)
    return RealizedLine("Line", on_axis + s * u, u)


def fixed_set(group: SymmetryGroup) -> FixedSet:
    """Classify the fixed-point set of the group's motions.

    Trivial group: the whole plane.  Any nontrivial rotation pins a single
    point (all motions must share it).  Otherwise the nontrivial motions are
    a single reflection and the fixed set is its mirror axis.  Relabellings
    realized by the identity motion (possible with repeated vertices) do not
    count as nontrivial.
    """
    p = group.polygon
    tol = p.tol()
    rotations = []
    reflections = []
    for t in group.motions():
        if t.orientation_reversing:
            reflections.append(t)
        elif not t.is_identity(tol):
            rotations.append(t)
    if rotations:
        center = _rotation_fixed_point(rotations[0])
        return FixedSet(FixedSetKind.POINT, point=center)
    if reflections:
        return FixedSet(FixedSetKind.LINE, line=_mirror_axis(reflections[0], p.vertex_centroid()))
    return FixedSet(FixedSetKind.WHOLE_PLANE)


# ---------------------------------------------------------------------------
# central vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralVectorReport:
    """Up to two independent central vectors with their provenance tags."""

    vectors: tuple  # pairs (Vector, provenance string)

    def __len__(self) -> int:
        return len(self.vectors)

    def to_json_obj(self) -> dict:
        return {
            "count": len(self.vectors),
            "vectors": [
                {"vector": [v.dx, v.dy], "provenance": tag} for v, tag in self.vectors
            ],
        }


def _interior_angles(p: Polygon) -> list[float]:
    angles = []
    for k in range(p.n):
        u = p.vertices[(k - 1) % p.n] - p.vertices[k]
        w = p.vertices[(k + 1) % p.n] - p.vertices[k]
        angles.append(math.acos(max(-1.0, min(1.0, u.dot(w) / (u.norm() * w.norm())))))
    return angles


def _unique_extreme(values: Sequence[float], tol: float, largest: bool) -> Optional[int]:
    """Index of the strictly unique extreme value; None when tied within tol."""
    order = sorted(range(len(values)), key=values.__getitem__, reverse=largest)
    if abs(values[order[0]] - values[order[1]]) <= tol:
        return None
    return order[0]


def _ranked(values: Sequence[float], largest: bool) -> list[int]:
    return sorted(range(len(values)), key=values.__getitem__, reverse=largest)


def central_vectors(p: Polygon) -> CentralVectorReport:
    """Central vectors from the sufficient symmetry-breaking conditions.

    Candidates, in order: centroid to the midpoint of the strictly largest
    (then smallest) side; for convex polygons, centroid to the vertex of the
    strictly largest (then smallest) interior angle.  When the polygon is
    convex and scalene (or convex with pairwise-distinct angles) and the two
    primary candidates are collinear, the second-largest side (angle) serves
    as fallback, yielding two independent vectors.  The conditions are
    sufficient, not necessary: an empty report proves nothing.
    """
    shape = classify(p)
    if shape.kind is ShapeKind.ALL_COINCIDENT:
        raise Degenerate("central vectors undefined when all vertices coincide")
    tol = p.tol()
    centroid = p.vertex_centroid()
    n = p.n

    sides = [p.vertices[k].distance_to(p.vertices[(k + 1) % n]) for k in range(n)]
    midpoints = [
        Point(
            0.5 * (p.vertices[k].x + p.vertices[(k + 1) % n].x),
            0.5 * (p.vertices[k].y + p.vertices[(k + 1) % n].y),
        )
        for k in range(n)
    ]

    candidates: list[tuple[Vector, str]] = []
    k = _unique_extreme(sides, tol, largest=True)
    if k is not None:
        candidates.append((midpoints[k] - centroid, "largest-side"))
    k = _unique_extreme(sides, tol, largest=False)
    if k is not None:
        candidates.append((midpoints[k] - centroid, "smallest-side"))

    convex = shape.convex
    if convex:
        angles = _interior_angles(p)
        k = _unique_extreme(angles, ANGLE_TOL, largest=True)
        if k is not None:
            candidates.append((p.vertices[k] - centroid, "largest-angle"))
        k = _unique_extreme(angles, ANGLE_TOL, largest=False)
        if k is not None:
            candidates.append((p.vertices[k] - centroid, "smallest-angle"))

        scalene = all(
            abs(sides[i] - sides[j]) > tol for i in range(n) for j in range(i + 1, n)
        )
        if scalene:
            second = _ranked(sides, largest=True)[1]
            candidates.append((midpoints[second] - centroid, "second-largest-side"))
        angles_distinct = all(
            abs(angles[i] - angles[j]) > ANGLE_TOL
            for i in range(n)
            for j in range(i + 1, n)
        )
        if angles_distinct:
            second = _ranked(angles, largest=True)[1]
            candidates.append((p.vertices[second] - centroid, "second-largest-angle"))

    chosen: list[tuple[Vector, str]] = []
    for v, tag in candidates:
        if v.norm() <= tol:
            continue
        if not chosen:
            chosen.append((v, tag))
            continue
        first = chosen[0][0]
        if abs(first.cross(v)) > base_tolerance() * first.norm() * v.norm():
            chosen.append((v, tag))
            break
    return CentralVectorReport(tuple(chosen))


def project_central_vector(v: Vector, direction: Vector, tol: float = 1e-12) -> Vector:
    """Projection of a central vector onto a non-perpendicular central direction.

    The projection is again a central vector; raises ValueError when the two
    are (numerically) perpendicular and the projection would vanish.
    """
    u = direction.normalized()
    comp = v.dot(u)
    if abs(comp) <= tol * v.norm():
        raise ValueError("vector is perpendicular to the direction; projection vanishes")
    return comp * u


# ---------------------------------------------------------------------------
# coincidence, collinearity, trigon classification
# ---------------------------------------------------------------------------

def _triangle_area(a: Point, b: Point, c: Point) -> float:
    return 0.5 * abs((b - a).cross(c - a))


def centers_coincident(evals: Sequence[CenterEvaluation], tol: Optional[float] = None) -> bool:
    """Whether all evaluated centers are one point, at polygon tolerance."""
    if len(evals) < 2:
        raise TooFew("need at least two center evaluations")
    limit = tol if tol is not None else evals[0].polygon.tol()
    pts = [e.point for e in evals]
    return all(
        pts[i].distance_to(pts[j]) <= limit
        for i in range(len(pts))
        for j in range(i + 1, len(pts))
    )


def centers_collinear(evals: Sequence[CenterEvaluation], area_tol: Optional[float] = None) -> bool:
    """Whether all evaluated centers lie on one line (triangle-area test)."""
    if len(evals) < 3:
        raise TooFew("need at least three center evaluations")
    if area_tol is None:
        d = evals[0].polygon.diameter()
        area_tol = base_tolerance() * d * d
    pts = [e.point for e in evals]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            for k in range(j + 1, len(pts)):
                if _triangle_area(pts[i], pts[j], pts[k]) > area_tol:
                    return False
    return True


class TrigonKind(Enum):
    EQUILATERAL = "Equilateral"
    ISOSCELES = "Isosceles"
    SCALENE = "Scalene"


@dataclass(frozen=True)
class TrigonClassification:
    kind: TrigonKind
    centroid: Point
    incenter: Point
    circumcenter: Point

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind.value,
            "centroid": [self.centroid.x, self.centroid.y],
            "incenter": [self.incenter.x, self.incenter.y],
            "circumcenter": [self.circumcenter.x, self.circumcenter.y],
        }


def classify_trigon(p: Polygon, tol_factor: float = 1e-8) -> TrigonClassification:
    """Classify a triangle by side lengths, cross-checked through its centers.

    Equilateral exactly when centroid and incenter coincide; isosceles exactly
    when centroid, circumcenter and incenter are collinear.  The metric and
    center-based classifications must agree; near the tolerance boundary
    (side differences around tol_factor times the diameter) they may not, and
    ClassificationMismatch reports that honestly.
    """
    if p.n != 3:
        raise FlatTrigon(f"trigon classification needs n=3, got n={p.n}")
    if classify(p).kind is not ShapeKind.NON_FLAT:
        raise FlatTrigon("trigon classification needs a non-flat triangle")
    diam = p.diameter()
    tol_len = tol_factor * diam
    tol_area = tol_factor * diam * diam

    m = distance_matrix(p)
    a, b, c = m.entry(2, 3), m.entry(1, 3), m.entry(1, 2)
    equal_pairs = sum(abs(x - y) <= tol_len for x, y in ((a, b), (b, c), (a, c)))
    if equal_pairs == 3:
        metric = TrigonKind.EQUILATERAL
    elif equal_pairs >= 1:
        metric = TrigonKind.ISOSCELES
    else:
        metric = TrigonKind.SCALENE

    centroid = coordinate_map(builtin("centroid"), p).point
    incenter = coordinate_map(builtin("triangle_incenter"), p).point
    circumcenter = coordinate_map(builtin("triangle_circumcenter"), p).point
    if centroid.distance_to(incenter) <= tol_len:
        by_centers = TrigonKind.EQUILATERAL
    elif _triangle_area(centroid, circumcenter, incenter) <= tol_area:
        by_centers = TrigonKind.ISOSCELES
    else:
        by_centers = TrigonKind.SCALENE

    if metric is not by_centers:
        raise ClassificationMismatch(
            f"side lengths say {metric.value}, centers say {by_centers.value}"
        )
    return TrigonClassification(metric, centroid, incenter, circumcenter)


def verify_fixed_set_containment(
    p: Polygon, evals: Sequence[CenterEvaluation]
) -> Report:
    """Check that every evaluated center lies in the symmetry group's fixed set."""
    fs = fixed_set(symmetry_group(p))
    tol = p.tol()
    checks = [
        Check(
            f"fixed-set[{e.source_name}]",
            fs.contains_point(e.point, tol),
            f"{fs.kind.value}; point ({e.point.x:.12g}, {e.point.y:.12g})",
        )
        for e in evals
    ]
    return Report(tuple(checks))
