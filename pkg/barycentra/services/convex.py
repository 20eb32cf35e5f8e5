"""Exact convex polytopes: membership, faces, carriers, walls and open cells.

Facets are found by brute force inside the affine hull: every k-subset of
vertices (k the polytope dimension) that spans a hyperplane with all vertices
on one side yields a facet. Faces are the facets closed under intersection,
plus the polytope itself. The exact simplex certifies vertex extremality and
barycentric coordinates.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from barycentra.core.errors import (
    DimensionMismatchError,
    DuplicateVertexError,
    InputError,
    NonExtremeVertexError,
    PointOutsideError,
    WeightDomainError,
)
from barycentra.core.linalg import in_span, maximize, nullspace, rank, rref
from barycentra.core.scalar import Vector, Weight, format_rational, parse_vector, weighted_mean
from barycentra.schemas.inputs import PolytopeSpec
from barycentra.schemas.reports import FaceLatticeReport, FaceRecord
from barycentra.services.laws import Node, Term, Var, WConst
from barycentra.services.models import BarycentricModel, render_point
from barycentra.services.semilattice import FiniteSemilattice, hasse_dot

logger = logging.getLogger(__name__)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def hull_coefficients(points: Sequence[Vector], x: Vector, objective_index: Optional[int] = None):
    """Solve Σλᵢpᵢ = x, Σλᵢ = 1, λ ≥ 0 exactly.

    Without ``objective_index`` returns any feasible λ (or None). With it,
    returns the LP result maximizing that coefficient.
    """
    n = len(points)
    equalities = [[p[k] for p in points] for k in range(len(x))]
    equalities.append([Fraction(1)] * n)
    rhs = list(x) + [Fraction(1)]
    objective = [Fraction(0)] * n
    if objective_index is not None:
        objective[objective_index] = Fraction(1)
    result = maximize(equalities, rhs, objective)
    if objective_index is not None:
        return result
    return result.solution if result.status == "optimal" else None


@dataclass(frozen=True)
class Face:
    """A face given by the sorted indices of the vertices it contains."""

    indices: tuple[int, ...]
    dimension: int

    def __contains__(self, index: int) -> bool:
        return index in self.indices

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class Facet:
    """Facet vertex set with its inequality normal·y <= bound in local coordinates."""

    indices: frozenset[int]
    normal: tuple[Fraction, ...]
    bound: Fraction


class Polytope:
    """Convex hull of finitely many extreme points of ℚⁿ."""

    def __init__(self, vertices: Sequence[Sequence[Union[str, int, Fraction]]], names: Optional[Sequence[str]] = None):
        if not vertices:
            raise InputError("A polytope needs at least one vertex")
        points = [parse_vector(v) for v in vertices]
        self.ambient_dim = len(points[0])
        for point in points:
            if len(point) != self.ambient_dim:
                raise DimensionMismatchError(
                    f"Vertex {render_point(point)} has dimension {len(point)}, expected {self.ambient_dim}",
                    witness={"vertex": render_point(point)},
                )
        seen: set[Vector] = set()
        for point in points:
            if point in seen:
                raise DuplicateVertexError(
                    f"Duplicate vertex {render_point(point)}", witness={"vertex": render_point(point)}
                )
            seen.add(point)
        if names is not None and len(names) != len(points):
            raise InputError("Vertex names must label every vertex")
        if names is not None and len(set(names)) != len(names):
            raise InputError("Vertex names must be distinct")
        self.vertices: tuple[Vector, ...] = tuple(points)
        self.names: Optional[tuple[str, ...]] = tuple(names) if names is not None else None
        self._check_extreme()
        self._build_hull()
        self._facets = self._enumerate_facets()
        self._faces = self._close_faces()
        logger.debug(
            "Polytope with %d vertices, dimension %d: %d facets, %d faces",
            len(self.vertices), self.dimension, len(self._facets), len(self._faces),
        )

    @classmethod
    def from_spec(cls, spec: PolytopeSpec) -> "Polytope":
        return cls(spec.vertices, spec.names)

    # Construction

    def _check_extreme(self) -> None:
        if len(self.vertices) < 2:
            return
        for i, vertex in enumerate(self.vertices):
            others = [v for j, v in enumerate(self.vertices) if j != i]
            if hull_coefficients(others, vertex) is not None:
                raise NonExtremeVertexError(
                    f"Vertex {self.vertex_label(i)} lies in the hull of the other vertices",
                    witness={"vertex": render_point(vertex), "index": i},
                )

    def _build_hull(self) -> None:
        origin = self.vertices[0]
        directions = [[a - b for a, b in zip(v, origin)] for v in self.vertices[1:]]
        self._basis, self._pivots = rref(directions) if directions else ([], [])
        self.dimension = len(self._basis)
        self._local = [self.local_coordinates(v) for v in self.vertices]

    def local_coordinates(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Coordinates in the RREF basis of the affine hull; exact when the point lies on it."""
        offset = [a - b for a, b in zip(point, self.vertices[0])]
        return tuple(offset[p] for p in self._pivots)

    def _enumerate_facets(self) -> list[Facet]:
        k = self.dimension
        if k == 0:
            return []
        facets: dict[frozenset[int], Facet] = {}
        for subset in itertools.combinations(range(len(self.vertices)), k):
            anchor = self._local[subset[0]]
            rows = [[a - b for a, b in zip(self._local[j], anchor)] for j in subset[1:]]
            normals = nullspace(rows, k)
            if len(normals) != 1:
                continue
            normal = tuple(normals[0])
            bound = _dot(normal, anchor)
            slacks = [_dot(normal, coords) - bound for coords in self._local]
            if all(s <= 0 for s in slacks):
                pass
            elif all(s >= 0 for s in slacks):
                normal = tuple(-a for a in normal)
                bound = -bound
            else:
                continue
            indices = frozenset(j for j, s in enumerate(slacks) if s == 0)
            facets.setdefault(indices, Facet(indices, normal, bound))
        return sorted(facets.values(), key=lambda f: sorted(f.indices))

    def _close_faces(self) -> list[Face]:
        found: set[frozenset[int]] = {facet.indices for facet in self._facets}
        found.add(frozenset(range(len(self.vertices))))
        frontier = set(found)
        while frontier:
            fresh = set()
            for a in frontier:
                for b in found:
                    meet = a & b
                    if meet and meet not in found:
                        fresh.add(meet)
            found |= fresh
            frontier = fresh
        faces = [Face(tuple(sorted(s)), self._subset_dimension(s)) for s in found]
        return sorted(faces, key=lambda f: (f.dimension, f.indices))

    def _subset_dimension(self, indices) -> int:
        indices = sorted(indices)
        origin = self.vertices[indices[0]]
        return rank([[a - b for a, b in zip(self.vertices[j], origin)] for j in indices[1:]]) if len(indices) > 1 else 0

    # Queries

    @property
    def faces(self) -> list[Face]:
        return list(self._faces)

    @property
    def facets(self) -> list[Facet]:
        return list(self._facets)

    @property
    def full_face(self) -> Face:
        return self.face_of(range(len(self.vertices)))

    def face_of(self, indices) -> Face:
        key = tuple(sorted(indices))
        for face in self._faces:
            if face.indices == key:
                return face
        raise InputError(f"Vertex set {list(key)} is not a face")

    def _check_dimension(self, point: Sequence[Fraction]) -> None:
        if len(point) != self.ambient_dim:
            raise DimensionMismatchError(
                f"Point has dimension {len(point)}, polytope lives in dimension {self.ambient_dim}",
                witness={"point_dimension": len(point), "ambient_dim": self.ambient_dim},
            )

    def in_affine_hull(self, point: Sequence[Fraction]) -> bool:
        offset = [a - b for a, b in zip(point, self.vertices[0])]
        return in_span(offset, self._basis, self._pivots)

    def contains(self, point: Sequence[Fraction]) -> bool:
        self._check_dimension(point)
        if not self.in_affine_hull(point):
            return False
        coords = self.local_coordinates(point)
        return all(_dot(f.normal, coords) <= f.bound for f in self._facets)

    def carrier_face(self, point: Sequence[Fraction]) -> Face:
        """The minimal face containing ``point``; the point is in its relative interior."""
        if not self.contains(point):
            raise PointOutsideError(
                f"Point {render_point(point)} is outside the polytope",
                witness={"point": render_point(tuple(point))},
            )
        coords = self.local_coordinates(point)
        indices = set(range(len(self.vertices)))
        for facet in self._facets:
            if _dot(facet.normal, coords) == facet.bound:
                indices &= facet.indices
        return self.face_of(indices)

    def barycentric_coordinates(self, point: Sequence[Fraction]) -> Optional[tuple[Fraction, ...]]:
        """Some λ ≥ 0 with Σλ = 1 and Σλᵢvᵢ = point, or None outside."""
        self._check_dimension(point)
        return hull_coefficients(self.vertices, tuple(point))

    def max_vertex_weight(self, point: Sequence[Fraction], index: int) -> Optional[Fraction]:
        """Largest coefficient vertex ``index`` can take in a representation of ``point``."""
        self._check_dimension(point)
        result = hull_coefficients(self.vertices, tuple(point), objective_index=index)
        return result.value if result.status == "optimal" else None

    def carrier_face_by_lp(self, point: Sequence[Fraction]) -> Face:
        """Carrier from LP certificates: v belongs iff its maximal weight is positive."""
        indices = []
        for i in range(len(self.vertices)):
            weight = self.max_vertex_weight(point, i)
            if weight is None:
                raise PointOutsideError(
                    f"Point {render_point(point)} is outside the polytope",
                    witness={"point": render_point(tuple(point))},
                )
            if weight > 0:
                indices.append(i)
        return self.face_of(indices)

    # Rendering

    def vertex_label(self, index: int) -> str:
        if self.names is not None:
            return self.names[index]
        return render_point(self.vertices[index])

    def face_label(self, face: Face) -> str:
        return "{" + ",".join(self.vertex_label(i) for i in face.indices) + "}"

    def cell_descriptor(self, face: Face) -> str:
        """{a} for vertices, ]a,b[ for edges, relint{...} above."""
        labels = ",".join(self.vertex_label(i) for i in face.indices)
        if face.dimension == 0:
            return "{" + labels + "}"
        if face.dimension == 1:
            return "]" + labels + "["
        return "relint{" + labels + "}"

    def face_centroid(self, face: Face) -> Vector:
        count = len(face.indices)
        return tuple(
            sum((self.vertices[i][k] for i in face.indices), Fraction(0)) / count
            for k in range(self.ambient_dim)
        )

    def positive_combination(self, indices: Sequence[int], rng: random.Random) -> Vector:
        raw = [rng.randint(1, 5) for _ in indices]
        total = sum(raw)
        return tuple(
            sum((Fraction(w, total) * self.vertices[i][k] for w, i in zip(raw, indices)), Fraction(0))
            for k in range(self.ambient_dim)
        )

    def sample_relint(self, face: Face, rng: random.Random) -> Vector:
        """A point of the relative interior: a combination with positive weights."""
        return self.positive_combination(face.indices, rng)

    def describe_combination(self, point: Sequence[Fraction]) -> Optional[str]:
        """Render point as an exact convex combination of named vertices."""
        coefficients = self.barycentric_coordinates(point)
        if coefficients is None:
            return None
        return " + ".join(
            f"{format_rational(c)}*{self.vertex_label(i)}" for i, c in enumerate(coefficients) if c != 0
        )


# Face lattices


class FaceLattice:
    """Nonempty faces ordered by inclusion, with join and meet."""

    def __init__(self, polytope: Polytope):
        self.polytope = polytope
        self.faces = polytope.faces
        self._by_indices = {face.indices: face for face in self.faces}

    def join(self, a: Face, b: Face) -> Face:
        """Least face containing both."""
        union = set(a.indices) | set(b.indices)
        containing = [set(f.indices) for f in self.faces if union <= set(f.indices)]
        return self._by_indices[tuple(sorted(set.intersection(*containing)))]

    def meet(self, a: Face, b: Face) -> Optional[Face]:
        common = tuple(sorted(set(a.indices) & set(b.indices)))
        return self._by_indices.get(common)

    def leq(self, a: Face, b: Face) -> bool:
        return set(a.indices) <= set(b.indices)

    def counts_by_dimension(self) -> list[int]:
        counts = [0] * (self.polytope.dimension + 1)
        for face in self.faces:
            counts[face.dimension] += 1
        return counts

    def label(self, face: Face) -> str:
        return self.polytope.face_label(face)

    def as_semilattice(self) -> FiniteSemilattice:
        labels = [self.label(f) for f in self.faces]
        table = {
            (self.label(a), self.label(b)): self.label(self.join(a, b))
            for a, b in itertools.product(self.faces, repeat=2)
        }
        return FiniteSemilattice.from_join_table(labels, table)

    def covers(self) -> list[tuple[Face, Face]]:
        result = []
        for a, b in itertools.permutations(self.faces, 2):
            if self.leq(a, b) and b.dimension == a.dimension + 1:
                result.append((a, b))
        return result

    def to_dot(self, name: str = "faces") -> str:
        return hasse_dot(
            [self.label(f) for f in self.faces],
            [(self.label(a), self.label(b)) for a, b in self.covers()],
            name,
        )

    def report(self) -> FaceLatticeReport:
        return FaceLatticeReport(
            ambient_dim=self.polytope.ambient_dim,
            dimension=self.polytope.dimension,
            face_count=len(self.faces),
            counts_by_dimension=self.counts_by_dimension(),
            faces=[
                FaceRecord(label=self.label(f), vertices=list(f.indices), dimension=f.dimension)
                for f in self.faces
            ],
        )


def face_lattice(c: Polytope) -> FaceLattice:
    return FaceLattice(c)


def contains(c: Polytope, x: Sequence[Fraction]) -> bool:
    return c.contains(x)


def carrier_face(c: Polytope, x: Sequence[Fraction]) -> Face:
    return c.carrier_face(x)


# Walls


@dataclass(frozen=True)
class WallVerdict:
    """Truthy iff the candidate is a wall; otherwise ``witness`` shows the violation."""

    is_wall: bool
    reason: str
    witness: Optional[dict[str, str]] = None

    def __bool__(self) -> bool:
        return self.is_wall


def is_wall(c: Polytope, points: Sequence[Sequence[Fraction]], hull: bool = False) -> WallVerdict:
    """Decide whether a candidate subset is a wall of ``c``.

    With ``hull=False`` the candidate is the finite set ``points`` itself;
    with ``hull=True`` it is their convex hull.
    """
    candidate = [tuple(Fraction(v) for v in p) for p in points]
    for point in candidate:
        if not c.contains(point):
            raise PointOutsideError(
                f"Point {render_point(point)} is outside the polytope",
                witness={"point": render_point(point)},
            )
    if not candidate:
        return WallVerdict(True, "empty")
    distinct = sorted(set(candidate))
    if not hull and len(distinct) > 1:
        return _finite_set_verdict(distinct)
    return _hull_verdict(c, distinct)


def _finite_set_verdict(points: list[Vector]) -> WallVerdict:
    # The closest pair's midpoint is never in the set.
    def distance(pair):
        a, b = pair
        return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))

    a, b = min(itertools.combinations(points, 2), key=distance)
    midpoint = weighted_mean(Weight(Fraction(1, 2)), a, b)
    return WallVerdict(
        False,
        "not closed under the operations",
        {"a": render_point(a), "b": render_point(b), "weight": "1/2", "result": render_point(midpoint)},
    )


def _hull_verdict(c: Polytope, points: list[Vector]) -> WallVerdict:
    count = len(points)
    centroid = tuple(sum((p[k] for p in points), Fraction(0)) / count for k in range(c.ambient_dim))
    face = c.carrier_face(centroid)
    outside = [i for i in face.indices if hull_coefficients(points, c.vertices[i]) is None]
    if not outside:
        return WallVerdict(True, f"face {c.face_label(face)}")
    u = c.vertices[outside[0]]
    epsilon = Fraction(1)
    while True:
        b = tuple(x + epsilon * (x - y) for x, y in zip(centroid, u))
        if c.contains(b):
            break
        epsilon /= 2
    r = 1 / (1 + epsilon)
    return WallVerdict(
        False,
        "an operation lands inside from outside",
        {
            "a": render_point(u),
            "b": render_point(b),
            "weight": format_rational(r),
            "result": render_point(centroid),
        },
    )


# Open cells


@dataclass(frozen=True)
class Cell:
    """Relative interior of one face."""

    polytope: Polytope
    face: Face

    @property
    def descriptor(self) -> str:
        return self.polytope.cell_descriptor(self.face)

    @property
    def kind(self) -> str:
        return "point" if self.face.dimension == 0 else "relint"

    def contains(self, point: Sequence[Fraction]) -> bool:
        try:
            return self.polytope.carrier_face(point) == self.face
        except PointOutsideError:
            return False

    def representative(self) -> Vector:
        return self.polytope.face_centroid(self.face)


def open_cells(c: Polytope) -> list[Cell]:
    return [Cell(c, face) for face in c.faces]


# Binary decomposition of convex combinations


def fold_convex_combination(
    weights: Sequence[Union[str, int, Fraction]], points: Sequence[Sequence[Fraction]]
) -> tuple[Term, Vector]:
    """Express Σwᵢxᵢ with binary operations, peeling the last point first.

    The term's variables are x1..xn in point order.
    """
    values = [Fraction(w) for w in weights]
    if not points:
        raise InputError("At least one point is required")
    if len(values) != len(points):
        raise InputError(f"{len(values)} weights for {len(points)} points")
    if any(w <= 0 for w in values):
        raise WeightDomainError("Combination weights must be positive")
    if sum(values) != 1:
        raise WeightDomainError(
            f"Combination weights sum to {format_rational(sum(values))}, not 1",
            witness={"sum": format_rational(sum(values))},
        )
    vectors = [tuple(Fraction(v) for v in p) for p in points]
    dimension = len(vectors[0])
    if any(len(v) != dimension for v in vectors):
        raise DimensionMismatchError("Points of different dimensions")

    term: Term = Var("x1")
    point = vectors[0]
    for i in range(1, len(vectors)):
        prefix_mass = sum(values[: i + 1])
        peeled = values[i] / prefix_mass
        term = Node(WConst(peeled), term, Var(f"x{i + 1}"))
        point = weighted_mean(Weight(peeled), point, vectors[i])
    return term, point


# Polytopes as models


class PolytopeModel(BarycentricModel):
    """A polytope under the weighted means."""

    def __init__(self, polytope: Polytope, name: str = "polytope"):
        self.polytope = polytope
        self.name = name

    def contains(self, element) -> bool:
        return (
            isinstance(element, tuple)
            and len(element) == self.polytope.ambient_dim
            and self.polytope.contains(element)
        )

    def operate(self, weight: Weight, x: Vector, y: Vector) -> Vector:
        return weighted_mean(weight, x, y)

    def sample(self, rng: random.Random) -> Vector:
        vertices = self.polytope.vertices
        if rng.random() < 0.3:
            return rng.choice(vertices)
        size = rng.randint(1, len(vertices))
        chosen = sorted(rng.sample(range(len(vertices)), size))
        return self.polytope.positive_combination(chosen, rng)

    def generators(self) -> list[Vector]:
        return list(self.polytope.vertices)

    def render(self, element: Vector) -> str:
        return render_point(element)

    def describe(self) -> dict:
        return {
            **super().describe(),
            "kind": "polytope",
            "vertices": len(self.polytope.vertices),
            "dimension": self.polytope.dimension,
        }
