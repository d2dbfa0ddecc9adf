"""Central lines as linear systems on affine vertex weights.

A line through two centers is encoded coefficient-side: an (n-2) x n matrix A
whose rows annihilate both centers' weight vectors, together with the implicit
normalization row (1, ..., 1) = 1.  The solution set of the stacked system is
a one-parameter affine family of weight vectors; pushing it through the
vertices realizes a geometric line (or a single point, when the two centers
coincide as points without their weight vectors being proportional).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .centers import CenterFunction, CoefficientVector, coordinate_map
from .errors import CoincidentCenters, Infeasible, NotARectangle, OutOfDomain
from .geometry import (
    DihedralElement,
    Point,
    Polygon,
    Similarity,
    Vector,
    apply_similarity,
    base_tolerance,
    distance_matrix,
    relabel,
)
from .reports import Check, Report

#: pivot threshold factors for the two row-reduction uses
_BASIS_PIVOT_RTOL = 1e-10
_RANK_PIVOT_RTOL = 1e-9


def _rref(a: np.ndarray, pivot_tol: float) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with partial pivoting.

    An entry qualifies as a pivot only if its magnitude exceeds pivot_tol,
    which callers set relative to the matrix scale.
    """
    m = np.array(a, dtype=float)
    rows, cols = m.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        i = r + int(np.argmax(np.abs(m[r:, c])))
        if abs(m[i, c]) <= pivot_tol:
            continue
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] /= m[r, c]
        for k in range(rows):
            if k != r and m[k, c] != 0.0:
                m[k] -= m[k, c] * m[r]
        pivot_cols.append(c)
        r += 1
    return m, pivot_cols


def _rank(a: np.ndarray, rtol: float = _RANK_PIVOT_RTOL) -> int:
    """Numerical rank by row reduction, rows prescaled to comparable size."""
    m = np.array(a, dtype=float)
    norms = np.abs(m).max(axis=1)
    norms[norms == 0.0] = 1.0
    m = m / norms[:, None]
    _, pivots = _rref(m, rtol)
    return len(pivots)


def _nullspace_basis(a: np.ndarray, pivot_tol: float) -> np.ndarray:
    """Rows spanning the nullspace of a, via the reduced echelon form."""
    m, pivots = _rref(a, pivot_tol)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols))
    for row, f in enumerate(free):
        basis[row, f] = 1.0
        for i, pc in enumerate(pivots):
            basis[row, pc] = -m[i, f]
    return basis


class LineSystem:
    """The (n-1)-equation description of a central line in weight space.

    ``matrix`` holds the n-2 homogeneous rows; the normalization row
    (1, ..., 1) = 1 is implicit.  The stacked matrix must have rank n-1,
    which also guarantees the system is solvable for any right-hand side.
    """

    __slots__ = ("n", "matrix")

    def __init__(self, n: int, matrix: np.ndarray):
        a = np.asarray(matrix, dtype=float)
        if a.shape != (n - 2, n):
            raise ValueError(f"expected a {(n - 2, n)} matrix, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("line system entries must be finite")
        if _rank(self.stack_static(a)) != n - 1:
            raise ValueError("stacked system must have rank n-1")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "matrix", a)

    def __setattr__(self, name, value):
        raise AttributeError("LineSystem is immutable")

    @staticmethod
    def stack_static(a: np.ndarray) -> np.ndarray:
        return np.vstack([np.ones((1, a.shape[1])), a])

    def stacked(self) -> np.ndarray:
        """Coefficient matrix with the normalization row on top."""
        return self.stack_static(self.matrix)

    def rhs(self) -> np.ndarray:
        b = np.zeros(self.n - 1)
        b[0] = 1.0
        return b

    def to_json_obj(self) -> dict:
        return {"n": self.n, "A": self.matrix.tolist()}

    @staticmethod
    def from_json_obj(data: dict) -> "LineSystem":
        return LineSystem(int(data["n"]), np.asarray(data["A"], dtype=float))


@dataclass(frozen=True)
class RealizedLine:
    """A geometric line (anchor plus unit direction) or a single point."""

    kind: str  # "Line" | "SinglePoint"
    point: Point
    direction: Optional[Vector] = None

    def __post_init__(self):
        if self.kind not in ("Line", "SinglePoint"):
            raise ValueError(f"unknown realized-line kind {self.kind!r}")
        if self.kind == "Line":
            if self.direction is None:
                raise ValueError("a Line needs a direction")
            if abs(self.direction.norm() - 1.0) > 1e-9:
                raise ValueError("line direction must be normalized")

    def distance_to(self, p: Point) -> float:
        if self.kind == "SinglePoint":
            return self.point.distance_to(p)
        d = p - self.point
        return abs(d.cross(self.direction))

    def contains_point(self, p: Point, tol: float) -> bool:
        return self.distance_to(p) <= tol

    def same_as(self, other: "RealizedLine", tol: float) -> bool:
        """Equality as point sets, within an absolute distance tolerance."""
        if self.kind != other.kind:
            return False
        if self.kind == "SinglePoint":
            return self.point.distance_to(other.point) <= tol
        return (
            abs(self.direction.cross(other.direction)) <= 1e-9
            and other.distance_to(self.point) <= tol
            and self.distance_to(other.point) <= tol
        )

    def transformed(self, t: Similarity) -> "RealizedLine":
        if self.kind == "SinglePoint":
            return RealizedLine("SinglePoint", t.apply(self.point))
        return RealizedLine(
            "Line", t.apply(self.point), t.apply_vector(self.direction).normalized()
        )

    def to_json_obj(self) -> dict:
        obj = {"kind": self.kind, "point": [self.point.x, self.point.y]}
        if self.kind == "Line":
            obj["direction"] = [self.direction.dx, self.direction.dy]
        return obj


def _canonical_direction(v: Vector) -> Vector:
    u = v.normalized()
    if u.dx < -1e-12 or (abs(u.dx) <= 1e-12 and u.dy < 0.0):
        u = -u
    return u


def line_through(a: Point, b: Point, tol: float = 0.0) -> RealizedLine:
    """Brute-force oracle: the line through two points, or the point itself."""
    d = b - a
    if d.norm() <= tol:
        return RealizedLine("SinglePoint", a)
    u = _canonical_direction(d)
    return RealizedLine("Line", a, u)


# ---------------------------------------------------------------------------
# synthesis and realization
# ---------------------------------------------------------------------------

def kimberling_line(g1: CenterFunction, g2: CenterFunction, p: Polygon) -> LineSystem:
    """Equations of the line through the two centers induced by g1 and g2.

    The two normalized shift-weight vectors a1, a2 are computed on p; the
    returned rows are a basis of their orthogonal complement, so a weight
    vector gamma satisfies the system exactly when [a1; a2; gamma] has rank
    at most 2.  The contract is row-space equality, not a particular basis.
    Raises CoincidentCenters when a1 and a2 are (numerically) proportional;
    since both sum to 1 that is the same as being equal.
    """
    a1 = coordinate_map(g1, p).coefficients.weights
    a2 = coordinate_map(g2, p).coefficients.weights
    scale = max(np.abs(a1).max(), np.abs(a2).max())
    if np.abs(a1 - a2).max() <= 1e-9 * scale:
        raise CoincidentCenters(
            f"weight vectors of {g1.name!r} and {g2.name!r} are proportional on this polygon"
        )
    stacked = np.vstack([a1, a2])
    basis = _nullspace_basis(stacked, _BASIS_PIVOT_RTOL * np.abs(stacked).max())
    if basis.shape[0] != p.n - 2:
        raise CoincidentCenters(
            "shift-weight vectors are numerically dependent; the line is undefined"
        )
    return LineSystem(p.n, basis)


def realize(line: LineSystem, p: Polygon) -> RealizedLine:
    """Geometric image of a line system on a polygon.

    The one-parameter solution family of the stacked system is pushed through
    gamma -> sum gamma_k V_k.  If the image direction degenerates the result
    is the single image point.  The anchor returned for a line is the
    perpendicular projection of the vertex centroid, and the direction sign
    is canonical, so equal lines render identically.
    """
    if line.n != p.n:
        raise ValueError(f"line system for n={line.n}, polygon has n={p.n}")
    m = line.stacked()
    b = line.rhs()
    x0, *_ = np.linalg.lstsq(m, b, rcond=None)
    if np.abs(m @ x0 - b).max() > 1e-9 * max(1.0, np.abs(m).max()):
        raise Infeasible("line system is numerically inconsistent")
    _, sing, vh = np.linalg.svd(m)
    null = vh[len(sing) :] if sing[-1] > 1e-12 * sing[0] else vh[len(sing) - 1 :]
    coords = p.coords()
    anchor = Point(*(x0 @ coords))
    tol = p.tol()
    direction = Vector(*(null[0] @ coords))
    if direction.norm() <= tol:
        return RealizedLine("SinglePoint", anchor)
    u = _canonical_direction(direction)
    centroid = p.vertex_centroid()
    t = (centroid - anchor).dot(u)
    return RealizedLine("Line", anchor + t * u, u)


def contains(line: LineSystem, p: Polygon, weights) -> bool:
    """Does the point represented by the weights lie on the realized set?

    Decided at the coefficient level: the line equations are augmented with
    the two scalar equations sum x_k V_k = sum lambda_k V_k and the combined
    system is consistent exactly when the point belongs to the line (the
    representing weights themselves need not satisfy the equations).
    """
    lam = weights.weights if isinstance(weights, CoefficientVector) else np.asarray(weights, float)
    lam = CoefficientVector(lam).weights
    if line.n != p.n or lam.size != p.n:
        raise ValueError("line system, polygon and weights must share one n")
    coords = p.coords()
    center = coords.mean(axis=0)
    diam = max(p.diameter(), 1e-300)
    normed = (coords - center) / diam  # translation-invariant equations
    target = lam @ normed
    m = np.vstack([line.stacked(), normed[:, 0], normed[:, 1]])
    b = np.concatenate([line.rhs(), target])
    return _rank(np.column_stack([m, b])) == _rank(m)


# ---------------------------------------------------------------------------
# the median of a non-square rectangle: central but not through two centers
# ---------------------------------------------------------------------------

def _rectangle_median(p: Polygon) -> RealizedLine:
    """Line through the midpoints of the two longest sides."""
    verts = p.vertices
    lengths = [verts[k].distance_to(verts[(k + 1) % 4]) for k in range(4)]
    k = int(np.argmax(lengths))
    mid = lambda i: Point(
        0.5 * (verts[i].x + verts[(i + 1) % 4].x),
        0.5 * (verts[i].y + verts[(i + 1) % 4].y),
    )
    return line_through(mid(k), mid((k + 2) % 4), tol=p.tol())


def is_central_line_counterexample_rectangle(
    p: Polygon, transforms: Optional[Sequence[Similarity]] = None
) -> Report:
    """Check the median of a non-square rectangle against the central-line axioms.

    The median through the largest sides commutes with similarities and is
    invariant under relabellings, yet every built-in center of the rectangle
    sits at the rectangle's center point: a central line that passes through
    no pair of distinct centers.
    """
    from .centers import builtins_for, coordinate_map as _cmap  # local to avoid cycles

    if p.n != 4:
        raise NotARectangle(f"expected a tetragon, got n={p.n}")
    verts = p.vertices
    tol = p.tol()
    edges = [verts[(k + 1) % 4] - verts[k] for k in range(4)]
    if any(abs(edges[k].dot(edges[(k + 1) % 4])) > tol * max(e.norm() for e in edges) for k in range(4)):
        raise NotARectangle("adjacent sides are not perpendicular")
    a, b = edges[0].norm(), edges[1].norm()
    if abs(edges[2].norm() - a) > tol or abs(edges[3].norm() - b) > tol:
        raise NotARectangle("opposite sides differ in length")
    if abs(a - b) <= tol:
        raise NotARectangle("squares are excluded: the largest sides are not unique")

    median = _rectangle_median(p)
    checks = []

    for alpha in DihedralElement.elements(4):
        other = _rectangle_median(relabel(p, alpha))
        checks.append(
            Check(
                f"relabelling-invariance[{alpha}]",
                median.same_as(other, tol),
                "median must not move under vertex relabelling",
            )
        )

    if transforms is None:
        transforms = (
            Similarity(2.0, 0.0, Vector(1.0, -3.0)),
            Similarity(0.5, 1.0, Vector(-2.0, 0.25)),
            Similarity(1.5, -2.2, Vector(0.0, 5.0), orientation_reversing=True),
        )
    for i, t in enumerate(transforms):
        moved = _rectangle_median(apply_similarity(p, t))
        expected = median.transformed(t)
        checks.append(
            Check(
                f"similarity-equivariance[{i}]",
                moved.same_as(expected, base_tolerance() * apply_similarity(p, t).diameter()),
                "median of the image must be the image of the median",
            )
        )

    center = Point(
        sum(v.x for v in verts) / 4.0, sum(v.y for v in verts) / 4.0
    )
    for g in builtins_for(p):
        pt = _cmap(g, p).point
        checks.append(
            Check(
                f"center-coincidence[{g.name}]",
                pt.distance_to(center) <= tol,
                f"{g.name} at ({pt.x:.12g}, {pt.y:.12g})",
            )
        )
    return Report(tuple(checks))
