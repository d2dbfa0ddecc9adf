"""Plane primitives: points, labelled polygons, similarities, the dihedral
relabelling group, and distance matrices.

Conventions used throughout the package:

* Vertex and matrix indices are 1-based in all public, math-facing accessors
  (matching the usual d_ij notation); internal storage is 0-based.
* All geometric comparisons use the absolute tolerance
  ``tol = base_tolerance() * diameter(P)``, which makes every predicate
  invariant under rescaling of the polygon.  The base factor defaults to
  1e-9 and can be overridden with the POLYCENTER_TOL environment variable.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, NoIsometry


def base_tolerance() -> float:
    """Base relative tolerance factor (env var POLYCENTER_TOL, default 1e-9)."""
    return float(os.environ.get("POLYCENTER_TOL", "1e-9"))


# ---------------------------------------------------------------------------
# points and vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    """A point of the plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite: ({self.x}, {self.y})")

    def __add__(self, v: "Vector") -> "Point":
        return Point(self.x + v.dx, self.y + v.dy)

    def __sub__(self, other: "Point") -> "Vector":
        return Vector(self.x - other.x, self.y - other.y)

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class Vector:
    """A displacement of the plane."""

    dx: float
    dy: float

    def __post_init__(self):
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise ValueError(f"vector components must be finite: ({self.dx}, {self.dy})")

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(self.dx + other.dx, self.dy + other.dy)

    def __sub__(self, other: "Vector") -> "Vector":
        return Vector(self.dx - other.dx, self.dy - other.dy)

    def __mul__(self, s: float) -> "Vector":
        return Vector(self.dx * s, self.dy * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vector":
        return Vector(-self.dx, -self.dy)

    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    def dot(self, other: "Vector") -> float:
        return self.dx * other.dx + self.dy * other.dy

    def cross(self, other: "Vector") -> float:
        return self.dx * other.dy - self.dy * other.dx

    def normalized(self) -> "Vector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Vector(self.dx / n, self.dy / n)


# ---------------------------------------------------------------------------
# polygons
# ---------------------------------------------------------------------------

class Polygon:
    """An ordered, labelled tuple of n >= 3 vertices.

    Flat polygons (all vertices collinear) and polygons with repeated
    vertices are representable; individual operations reject them through
    their own domain checks where necessary.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Point]):
        vs = tuple(vertices)
        if len(vs) < 3:
            raise ValueError(f"a polygon needs at least 3 vertices, got {len(vs)}")
        object.__setattr__(self, "vertices", vs)

    def __setattr__(self, name, value):
        raise AttributeError("Polygon is immutable")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        pts = ", ".join(f"({v.x:g}, {v.y:g})" for v in self.vertices)
        return f"Polygon[{pts}]"

    def vertex(self, i: int) -> Point:
        """Vertex by 1-based index, cyclically (vertex(0) is vertex(n))."""
        return self.vertices[(i - 1) % self.n]

    def coords(self) -> np.ndarray:
        """n x 2 array of vertex coordinates."""
        return np.array([[v.x, v.y] for v in self.vertices], dtype=float)

    def diameter(self) -> float:
        """Largest pairwise vertex distance."""
        c = self.coords()
        d = c[:, None, :] - c[None, :, :]
        return float(np.sqrt((d ** 2).sum(axis=2)).max())

    def perimeter(self) -> float:
        c = self.coords()
        return float(np.sqrt(((np.roll(c, -1, axis=0) - c) ** 2).sum(axis=1)).sum())

    def vertex_centroid(self) -> Point:
        c = self.coords().mean(axis=0)
        return Point(float(c[0]), float(c[1]))

    def tol(self) -> float:
        """Scale-invariant absolute tolerance for this polygon's geometry."""
        return base_tolerance() * self.diameter()

    @staticmethod
    def from_points(*xy: tuple) -> "Polygon":
        return Polygon(Point(float(x), float(y)) for x, y in xy)


def polygon_from_json(text: str) -> Polygon:
    """Parse the polygon wire format {"n": int, "vertices": [[x, y], ...]}."""
    data = json.loads(text)
    n = data["n"]
    verts = data["vertices"]
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"polygon JSON requires integer n >= 3, got {n!r}")
    if n != len(verts):
        raise ValueError(f"polygon JSON has n={n} but {len(verts)} vertices")
    return Polygon(Point(float(x), float(y)) for x, y in verts)


def polygon_to_json_obj(p: Polygon) -> dict:
    return {"n": p.n, "vertices": [[v.x, v.y] for v in p.vertices]}


# ---------------------------------------------------------------------------
# dihedral relabelling group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DihedralElement:
    """An element rho^k * sigma^s of the relabelling group of order 2n.

    rho is the cyclic shift i -> i+1 (mod n) and sigma the reversal
    i -> n+2-i (mod n), which fixes index 1.  ``apply`` evaluates the
    permutation on 1-based indices, reversal first, rotation second.
    """

    n: int
    rotation: int
    reflected: bool = False

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dihedral group needs n >= 3")
        if not 0 <= self.rotation < self.n:
            object.__setattr__(self, "rotation", self.rotation % self.n)

    @staticmethod
    def identity(n: int) -> "DihedralElement":
        return DihedralElement(n, 0, False)

    @staticmethod
    def rho(n: int) -> "DihedralElement":
        return DihedralElement(n, 1, False)

    @staticmethod
    def sigma(n: int) -> "DihedralElement":
        return DihedralElement(n, 0, True)

    @staticmethod
    def elements(n: int) -> list["DihedralElement"]:
        """All 2n group elements, rotations first."""
        return [DihedralElement(n, k, s) for s in (False, True) for k in range(n)]

    def apply(self, i: int) -> int:
        """Image of the 1-based index i, in [1, n]."""
        j = (i - 1) % self.n
        if self.reflected:
            j = (self.n - j) % self.n
        return (j + self.rotation) % self.n + 1

    def permutation0(self) -> np.ndarray:
        """0-based image array: entry i is apply(i+1)-1."""
        return np.array([self.apply(i + 1) - 1 for i in range(self.n)], dtype=int)

    def compose(self, other: "DihedralElement") -> "DihedralElement":
        """self after other: (self.compose(other)).apply(i) == self.apply(other.apply(i))."""
        if self.n != other.n:
            raise ValueError("cannot compose elements of different dihedral groups")
        # rho^k1 sigma^s1 rho^k2 sigma^s2 = rho^(k1 + (-1)^s1 k2) sigma^(s1 xor s2)
        sign = -1 if self.reflected else 1
        return DihedralElement(
            self.n,
            (self.rotation + sign * other.rotation) % self.n,
            self.reflected != other.reflected,
        )

    def inverse(self) -> "DihedralElement":
        if self.reflected:
            return self  # reflections are involutions
        return DihedralElement(self.n, (-self.rotation) % self.n, False)

    def is_identity(self) -> bool:
        return self.rotation == 0 and not self.reflected

    def __str__(self) -> str:
        if self.is_identity():
            return "e"
        rot = f"rho^{self.rotation}" if self.rotation else ""
        ref = "sigma" if self.reflected else ""
        return (rot + ("*" if rot and ref else "") + ref) or "e"


# ---------------------------------------------------------------------------
# similarities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Similarity:
    """A direct or opposite similarity of the plane.

    Acts on a point p as ``translation + scale * R(rotation) * F(p)`` where
    F is the reflection across the x-axis when orientation_reversing, else
    the identity: reflect first, then rotate and scale, then translate.
    """

    scale: float = 1.0
    rotation: float = 0.0
    translation: Vector = Vector(0.0, 0.0)
    orientation_reversing: bool = False

    def __post_init__(self):
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError(f"similarity scale must be positive, got {self.scale}")

    def linear(self) -> np.ndarray:
        """The 2x2 linear part."""
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        m = np.array([[c, -s], [s, c]]) * self.scale
        if self.orientation_reversing:
            m = m @ np.array([[1.0, 0.0], [0.0, -1.0]])
        return m

    def apply(self, p: Point) -> Point:
        v = self.linear() @ p.as_array()
        return Point(float(v[0]) + self.translation.dx, float(v[1]) + self.translation.dy)

    def apply_vector(self, v: Vector) -> Vector:
        w = self.linear() @ np.array([v.dx, v.dy])
        return Vector(float(w[0]), float(w[1]))

    def __call__(self, p: Point) -> Point:
        return self.apply(p)

    @staticmethod
    def identity() -> "Similarity":
        return Similarity()

    @staticmethod
    def rotation_about(center: Point, angle: float) -> "Similarity":
        c, s = math.cos(angle), math.sin(angle)
        tx = center.x - (c * center.x - s * center.y)
        ty = center.y - (s * center.x + c * center.y)
        return Similarity(1.0, angle, Vector(tx, ty), False)

    @staticmethod
    def translation_by(v: Vector) -> "Similarity":
        return Similarity(1.0, 0.0, v, False)

    def is_identity(self, tol: float) -> bool:
        return (
            not self.orientation_reversing
            and abs(self.scale - 1.0) <= tol
            and self.translation.norm() <= tol
            and abs(math.remainder(self.rotation, 2.0 * math.pi)) <= tol
        )


# ---------------------------------------------------------------------------
# distance matrices
# ---------------------------------------------------------------------------

class DistanceMatrix:
    """The hollow symmetric n x n matrix of pairwise vertex distances.

    This is the congruence-class invariant of a labelled polygon: center
    functions consume these matrices, never coordinates.
    """

    __slots__ = ("values",)

    def __init__(self, values: np.ndarray, validate: bool = True):
        a = np.asarray(values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 3:
            raise ValueError(f"distance matrix must be square with n >= 3, got shape {a.shape}")
        if validate:
            _validate_distance_matrix(a)
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "values", a)

    def __setattr__(self, name, value):
        raise AttributeError("DistanceMatrix is immutable")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def entry(self, i: int, j: int) -> float:
        """d_ij by 1-based indices, cyclically reduced into [1, n]."""
        return float(self.values[(i - 1) % self.n, (j - 1) % self.n])

    def max_entry(self) -> float:
        return float(self.values.max())

    def shifted(self, k: int) -> "DistanceMatrix":
        """Matrix with entries d_{rho^k(i), rho^k(j)} (cyclic index shift by k)."""
        idx = (np.arange(self.n) + k) % self.n
        return DistanceMatrix(self.values[np.ix_(idx, idx)], validate=False)

    def permuted(self, alpha: DihedralElement) -> "DistanceMatrix":
        """Matrix with entries d_{alpha(i), alpha(j)}."""
        if alpha.n != self.n:
            raise ValueError("dihedral element size does not match matrix size")
        idx = alpha.permutation0()
        return DistanceMatrix(self.values[np.ix_(idx, idx)], validate=False)

    def reversed(self) -> "DistanceMatrix":
        """Matrix permuted by the reversal sigma (i -> n+2-i)."""
        return self.permuted(DihedralElement.sigma(self.n))

    def scaled(self, factor: float) -> "DistanceMatrix":
        if factor <= 0.0:
            raise ValueError("scale factor must be positive")
        return DistanceMatrix(self.values * factor, validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, DistanceMatrix) and np.array_equal(self.values, other.values)

    def allclose(self, other: "DistanceMatrix", tol: float) -> bool:
        return self.n == other.n and bool(np.abs(self.values - other.values).max() <= tol)


def _validate_distance_matrix(a: np.ndarray) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError("distance matrix entries must be finite")
    if np.any(a < 0.0):
        raise ValueError("distance matrix entries must be nonnegative")
    if np.any(np.diag(a) != 0.0):
        raise ValueError("distance matrix must be hollow (zero diagonal)")
    if not np.array_equal(a, a.T):
        raise ValueError("distance matrix must be symmetric")
    # triangle inequality, within a scale-relative slack
    tol = base_tolerance() * max(a.max(), 1e-300)
    mins = (a[:, :, None] + a[None, :, :]).min(axis=1)  # min_j d_ij + d_jk
    if np.any(a > mins + tol):
        raise ValueError("distance matrix violates the triangle inequality")


def distance_matrix(p: Polygon) -> DistanceMatrix:
    """Pairwise Euclidean distance matrix of a polygon's vertices."""
    c = p.coords()
    d = c[:, None, :] - c[None, :, :]
    m = np.sqrt((d ** 2).sum(axis=2))
    np.fill_diagonal(m, 0.0)
    m = np.maximum(m, m.T)  # exact symmetry regardless of rounding
    return DistanceMatrix(m, validate=False)


# ---------------------------------------------------------------------------
# polygon operations
# ---------------------------------------------------------------------------

def relabel(p: Polygon, alpha: DihedralElement) -> Polygon:
    """Relabelled polygon whose vertex i is vertex alpha(i) of the input."""
    if alpha.n != p.n:
        raise DimensionMismatch(f"dihedral element for n={alpha.n}, polygon has n={p.n}")
    return Polygon(p.vertices[alpha.apply(i) - 1] for i in range(1, p.n + 1))


def apply_similarity(p: Polygon, t: Similarity) -> Polygon:
    """Image polygon under a similarity; distances scale by t.scale."""
    return Polygon(t.apply(v) for v in p.vertices)


def find_isometry(p: Polygon, q: Polygon) -> Similarity:
    """The rigid motion mapping each vertex of p onto the same-index vertex of q.

    When p spans the plane the motion is unique.  For a flat (but not fully
    degenerate) p both a direct and an opposite motion exist; the direct one
    is returned.  Raises NoIsometry when the distance matrices differ beyond
    tolerance or no candidate maps every vertex.
    """
    if p.n != q.n:
        raise DimensionMismatch(f"polygons have different sizes {p.n} and {q.n}")
    scale = max(p.diameter(), q.diameter())
    tol = base_tolerance() * max(scale, 1e-300)
    if not distance_matrix(p).allclose(distance_matrix(q), tol):
        raise NoIsometry("distance matrices disagree beyond tolerance")

    # all vertices coincide on both sides: a translation suffices
    if p.diameter() <= tol:
        return Similarity.translation_by(q.vertices[0] - p.vertices[0])

    # two base vertices separated beyond tolerance
    a = 0
    b = max(range(1, p.n), key=lambda k: p.vertices[0].distance_to(p.vertices[k]))
    dp = p.vertices[b] - p.vertices[a]
    dq = q.vertices[b] - q.vertices[a]

    candidates = []
    for reversing in (False, True):
        src = Vector(dp.dx, -dp.dy) if reversing else dp
        angle = math.atan2(dq.dy, dq.dx) - math.atan2(src.dy, src.dx)
        cand = Similarity(1.0, angle, Vector(0.0, 0.0), reversing)
        img = cand.apply(p.vertices[a])
        cand = Similarity(1.0, angle, q.vertices[a] - img, reversing)
        candidates.append(cand)

    for cand in candidates:  # direct candidate first: canonical for flat inputs
        if all(cand.apply(v).distance_to(w) <= tol for v, w in zip(p.vertices, q.vertices)):
            return cand
    raise NoIsometry("no rigid motion maps the labelled vertices onto each other")


class ShapeKind(Enum):
    ALL_COINCIDENT = "AllCoincident"
    FLAT_PROPER = "FlatProper"
    NON_FLAT = "NonFlat"


@dataclass(frozen=True)
class ShapeClass:
    kind: ShapeKind
    convex: bool
    weakly_convex: bool

    @property
    def flat(self) -> bool:
        return self.kind is not ShapeKind.NON_FLAT


def classify(p: Polygon) -> ShapeClass:
    """Coincident / flat / non-flat classification plus a strict-convexity flag.

    The convex flag requires strict turns of a consistent sign and total
    turning of one full revolution; a polygon with some exactly-straight
    corner but otherwise consistent turns is reported as weakly convex only.
    """
    coords = p.coords()
    scale = max(1.0, float(np.abs(coords).max()))
    diam = p.diameter()
    if diam <= base_tolerance() * scale:
        return ShapeClass(ShapeKind.ALL_COINCIDENT, False, False)

    # collinearity against the segment joining the two farthest-apart anchors
    a = coords[0]
    b = coords[int(np.argmax(np.sqrt(((coords - a) ** 2).sum(axis=1))))]
    u = b - a
    cross = np.abs((coords[:, 0] - a[0]) * u[1] - (coords[:, 1] - a[1]) * u[0])
    area_tol = base_tolerance() * diam * diam
    if cross.max() <= area_tol:
        return ShapeClass(ShapeKind.FLAT_PROPER, False, False)

    edges = np.roll(coords, -1, axis=0) - coords
    turns = np.empty(p.n)
    straight = False
    for k in range(p.n):
        e1 = edges[k - 1]
        e2 = edges[k]
        cr = e1[0] * e2[1] - e1[1] * e2[0]
        if abs(cr) <= area_tol:
            straight = True
        turns[k] = math.atan2(cr, float(e1 @ e2))
    signs = np.sign(turns)
    consistent = bool(np.all(signs >= 0) or np.all(signs <= 0))
    single_loop = abs(abs(turns.sum()) - 2.0 * math.pi) <= 1e-6
    weakly = consistent and single_loop
    strictly = weakly and not straight and bool(np.all(signs != 0))
    return ShapeClass(ShapeKind.NON_FLAT, strictly, weakly)
