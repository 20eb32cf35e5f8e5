"""Płonka sums of convex sets over finite semilattices and their replicas.

A sum is an index semilattice, one fiber per index (polytope, full affine
subspace of ℚⁿ, or a single point) and affine transition maps φ_{s,t} for
s ≤ t. The operation transports both arguments to the join fiber and takes
the weighted mean there.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from barycentra.core.config import settings
from barycentra.core.errors import (
    DimensionMismatchError,
    FunctorialityError,
    InputError,
    MissingTransitionError,
    PlonkaStructureError,
    PointOutsideError,
    ReplicaConsistencyError,
    SemilatticeAxiomError,
    SubalgebraClosureError,
    TransitionImageError,
)
from barycentra.core.linalg import in_span, rref
from barycentra.core.scalar import Vector, Weight, format_rational, parse_rational, weighted_mean
from barycentra.schemas.inputs import FiberSpec, PlonkaSumSpec
from barycentra.schemas.reports import (
    AgreementReport,
    ClassDescriptor,
    EvalReport,
    PlonkaValidationReport,
    ReplicaReport,
)
from barycentra.services.convex import (
    Face,
    FaceLattice,
    Polytope,
    PolytopeModel,
    carrier_face,
    hull_coefficients,
    is_wall,
)
from barycentra.services.models import BarycentricModel, random_rational, render_point
from barycentra.services.semilattice import FiniteSemilattice, is_isomorphic

logger = logging.getLogger(__name__)


# Fibers


@dataclass(frozen=True)
class Cell:
    """One open convex cell of a fiber."""

    descriptor: str
    kind: str  # point, relint or affine
    face: Optional[Face] = None


class PolytopeFiber:
    kind = "polytope"

    def __init__(self, polytope: Polytope):
        self.polytope = polytope
        self.dimension = polytope.ambient_dim
        self._cells = [
            Cell(polytope.cell_descriptor(f), "point" if f.dimension == 0 else "relint", f)
            for f in polytope.faces
        ]
        self._by_face = {cell.face: cell for cell in self._cells}

    def contains(self, point: Vector) -> bool:
        return len(point) == self.dimension and self.polytope.contains(point)

    def generators(self) -> list[Vector]:
        return list(self.polytope.vertices)

    def cells(self) -> list[Cell]:
        return list(self._cells)

    def classify(self, point: Vector) -> Cell:
        return self._by_face[self.polytope.carrier_face(point)]

    def representative(self, cell: Cell, rng: Optional[random.Random] = None) -> Vector:
        if rng is None:
            return self.polytope.face_centroid(cell.face)
        return self.polytope.sample_relint(cell.face, rng)

    def sample(self, rng: random.Random) -> Vector:
        return PolytopeModel(self.polytope).sample(rng)

    def render(self, point: Vector) -> str:
        if point in self.polytope.vertices and self.polytope.names is not None:
            return self.polytope.vertex_label(self.polytope.vertices.index(point))
        return render_point(point)

    def parse_point(self, text: str) -> Vector:
        if self.polytope.names is not None and text in self.polytope.names:
            return self.polytope.vertices[self.polytope.names.index(text)]
        return parse_point(text)

    def describe_point(self, point: Vector) -> Optional[str]:
        return self.polytope.describe_combination(point)

    def is_open_cell(self, cell: Cell) -> bool:
        """The cell meets each wall of the polytope in nothing or in all of itself.

        Walls are the faces, certified by ``is_wall(..., hull=True)``. Every point of the
        cell has the cell's face as carrier, so one representative decides each meet.
        """
        centroid = self.polytope.face_centroid(cell.face)
        if carrier_face(self.polytope, centroid) != cell.face:
            return False
        for face in self.polytope.faces:
            vertices = [self.polytope.vertices[i] for i in face.indices]
            if not is_wall(self.polytope, vertices, hull=True):
                return False
            meets = hull_coefficients(vertices, centroid) is not None
            if meets != set(cell.face.indices).issubset(face.indices):
                return False
        return True


class AffineFiber:
    """A full affine subspace basepoint + span(basis) of ℚⁿ."""

    kind = "affine"

    def __init__(self, basepoint: Sequence, basis: Sequence[Sequence] = (), label: Optional[str] = None):
        self.basepoint: Vector = tuple(parse_rational(v) for v in basepoint)
        self.basis = [tuple(parse_rational(v) for v in row) for row in basis]
        self.dimension = len(self.basepoint)
        for row in self.basis:
            if len(row) != self.dimension:
                raise DimensionMismatchError(
                    "Affine fiber basis vector has the wrong dimension",
                    witness={"vector": render_point(row)},
                )
        self._reduced, self._pivots = rref(self.basis) if self.basis else ([], [])
        if len(self._reduced) != len(self.basis):
            raise InputError("Affine fiber basis vectors are linearly dependent")
        self.label = label or f"ℚ^{len(self.basis)}"
        self._cell = Cell(self.label, "affine")

    def contains(self, point: Vector) -> bool:
        if len(point) != self.dimension:
            return False
        offset = [a - b for a, b in zip(point, self.basepoint)]
        return in_span(offset, self._reduced, self._pivots)

    def generators(self) -> list[Vector]:
        shifted = [tuple(a + b for a, b in zip(self.basepoint, row)) for row in self.basis]
        return [self.basepoint, *shifted]

    def cells(self) -> list[Cell]:
        return [self._cell]

    def classify(self, point: Vector) -> Cell:
        return self._cell

    def representative(self, cell: Cell, rng: Optional[random.Random] = None) -> Vector:
        return self.basepoint if rng is None else self.sample(rng)

    def sample(self, rng: random.Random) -> Vector:
        point = list(self.basepoint)
        for row in self.basis:
            coefficient = random_rational(rng)
            point = [a + coefficient * b for a, b in zip(point, row)]
        return tuple(point)

    def render(self, point: Vector) -> str:
        return render_point(point)

    def parse_point(self, text: str) -> Vector:
        return parse_point(text)

    def describe_point(self, point: Vector) -> Optional[str]:
        return None

    def is_open_cell(self, cell: Cell) -> bool:
        # Every line through two points of an affine subspace stays inside it.
        return True


class SingletonFiber:
    kind = "singleton"
    dimension = 0

    def __init__(self, name: str = "∞"):
        self.name = name
        self._cell = Cell("{" + name + "}", "point")

    def contains(self, point: Vector) -> bool:
        return point == ()

    def generators(self) -> list[Vector]:
        return [()]

    def cells(self) -> list[Cell]:
        return [self._cell]

    def classify(self, point: Vector) -> Cell:
        return self._cell

    def representative(self, cell: Cell, rng: Optional[random.Random] = None) -> Vector:
        return ()

    def sample(self, rng: random.Random) -> Vector:
        return ()

    def render(self, point: Vector) -> str:
        return self.name

    def parse_point(self, text: str) -> Vector:
        if text.strip() in (self.name, "()", ""):
            return ()
        raise InputError(f"Singleton fiber only holds {self.name}, got {text!r}")

    def describe_point(self, point: Vector) -> Optional[str]:
        return None

    def is_open_cell(self, cell: Cell) -> bool:
        return True


Fiber = Union[PolytopeFiber, AffineFiber, SingletonFiber]


def parse_point(text: str) -> Vector:
    """Parse "a/b" or "(a/b, c/d)" into a point."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    if not body.strip():
        return ()
    return tuple(parse_rational(part.strip()) for part in body.split(","))


def fiber_from_spec(spec: FiberSpec) -> Fiber:
    if spec.kind == "polytope":
        return PolytopeFiber(Polytope(spec.vertices, spec.names))
    if spec.kind == "affine":
        return AffineFiber(spec.basepoint, spec.basis)
    return SingletonFiber(spec.name or "∞")


# Transitions


def _compose_matrices(outer, inner, inner_rows: int, inner_cols: int):
    return tuple(
        tuple(sum((outer[i][k] * inner[k][j] for k in range(inner_rows)), Fraction(0)) for j in range(inner_cols))
        for i in range(len(outer))
    )


@dataclass(frozen=True)
class TransitionMap:
    """φ_{s,t}: x ↦ matrix·x + offset, a (target_dim × source_dim) affine map."""

    source: str
    target: str
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]
    source_dim: int

    @classmethod
    def of(cls, source: str, target: str, matrix: Sequence[Sequence], offset: Sequence, source_dim: int):
        rows = tuple(tuple(parse_rational(v) for v in row) for row in matrix)
        shift = tuple(parse_rational(v) for v in offset)
        if len(rows) != len(shift) or any(len(row) != source_dim for row in rows):
            raise DimensionMismatchError(
                f"Transition {source}->{target} has inconsistent shape",
                witness={"source": source, "target": target},
            )
        return cls(source, target, rows, shift, source_dim)

    @classmethod
    def identity(cls, label: str, dimension: int) -> "TransitionMap":
        matrix = tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(dimension)) for i in range(dimension)
        )
        return cls(label, label, matrix, (Fraction(0),) * dimension, dimension)

    @property
    def target_dim(self) -> int:
        return len(self.offset)

    def apply(self, point: Vector) -> Vector:
        return tuple(
            sum((a * b for a, b in zip(row, point)), Fraction(0)) + shift
            for row, shift in zip(self.matrix, self.offset)
        )

    def then(self, outer: "TransitionMap") -> "TransitionMap":
        """outer ∘ self."""
        matrix = _compose_matrices(outer.matrix, self.matrix, self.target_dim, self.source_dim)
        offset = outer.apply(self.offset)
        return TransitionMap(self.source, outer.target, matrix, offset, self.source_dim)


# Sums


@dataclass(frozen=True)
class SumElement:
    fiber: str
    point: Vector


class PlonkaSum:
    """A validated Płonka sum; build with :func:`build`."""

    def __init__(self, index: FiniteSemilattice, fibers: dict[str, Fiber], transitions: dict[tuple[str, str], TransitionMap], checks: int = 0):
        self.index = index
        self.fibers = fibers
        self.transitions = transitions
        self.functoriality_checks = checks

    @classmethod
    def from_spec(cls, spec: PlonkaSumSpec) -> "PlonkaSum":
        index = FiniteSemilattice.from_spec(spec.index)
        fibers = {label: fiber_from_spec(f) for label, f in spec.fibers.items()}
        maps = []
        for t in spec.transitions:
            if t.source not in fibers:
                raise InputError(f"Transition from unknown fiber {t.source!r}")
            maps.append(TransitionMap.of(t.source, t.target, t.matrix, t.offset, fibers[t.source].dimension))
        return build(index, fibers, maps)

    def phi(self, source: str, target: str) -> TransitionMap:
        return self.transitions[(source, target)]

    def validate_element(self, element: SumElement) -> SumElement:
        fiber = self.fibers.get(element.fiber)
        if fiber is None or not fiber.contains(element.point):
            raise PointOutsideError(
                f"{self.render(element)} is not an element of the sum",
                witness={"element": self.render(element)},
            )
        return element

    def eval(self, p: Weight, x: SumElement, y: SumElement) -> SumElement:
        target = self.index.join(x.fiber, y.fiber)
        left = self.phi(x.fiber, target).apply(x.point)
        right = self.phi(y.fiber, target).apply(y.point)
        return SumElement(target, weighted_mean(p, left, right))

    def render(self, element: SumElement) -> str:
        fiber = self.fibers.get(element.fiber)
        point = fiber.render(element.point) if fiber is not None else render_point(element.point)
        return f"{element.fiber}:{point}"

    def parse_element(self, text: str) -> SumElement:
        """Parse "FIBER:NAME" or "FIBER:COORDS"."""
        fiber_label, sep, rest = text.partition(":")
        if not sep or fiber_label not in self.fibers:
            raise InputError(f"Element {text!r} does not name a fiber of the sum")
        point = self.fibers[fiber_label].parse_point(rest)
        return self.validate_element(SumElement(fiber_label, point))

    def generators(self) -> list[SumElement]:
        return [
            SumElement(label, point)
            for label in self.index.elements
            for point in self.fibers[label].generators()
        ]

    def validation_report(self) -> PlonkaValidationReport:
        return PlonkaValidationReport(
            fibers=list(self.index.elements),
            transitions=sum(1 for (s, t) in self.transitions if s != t),
            functoriality_checks=self.functoriality_checks,
            passed=True,
        )


def build(
    index: FiniteSemilattice,
    fibers: dict[str, Fiber],
    transitions: Sequence[TransitionMap],
) -> PlonkaSum:
    """Complete, validate and assemble a Płonka sum.

    Transitions are affine maps, which preserve every weighted mean, so only their
    images, composites and identities are checked.
    """
    if set(fibers) != set(index.elements):
        raise InputError(
            "Fibers must be given for exactly the index elements",
            witness={"index": list(index.elements), "fibers": sorted(fibers)},
        )
    maps: dict[tuple[str, str], TransitionMap] = {}
    for label in index.elements:
        maps[(label, label)] = TransitionMap.identity(label, fibers[label].dimension)
    for t in transitions:
        if t.source not in fibers or t.target not in fibers:
            raise InputError(f"Transition {t.source}->{t.target} names an unknown fiber")
        if not index.leq(t.source, t.target):
            raise PlonkaStructureError(
                f"Transition {t.source}->{t.target} between incomparable or reversed indices",
                witness={"source": t.source, "target": t.target},
            )
        if t.source_dim != fibers[t.source].dimension or t.target_dim != fibers[t.target].dimension:
            raise DimensionMismatchError(
                f"Transition {t.source}->{t.target} does not fit its fibers",
                witness={"source": t.source, "target": t.target},
            )
        _check_images(t, fibers)
        if (t.source, t.target) in maps and t.source == t.target:
            if any(t.apply(g) != g for g in fibers[t.source].generators()):
                raise FunctorialityError(
                    f"Transition {t.source}->{t.source} is not the identity",
                    witness={"source": t.source},
                )
            continue
        maps[(t.source, t.target)] = t

    _complete(index, maps)
    checks = _check_functoriality(index, fibers, maps)
    logger.debug("Built Płonka sum over %d indices with %d transitions", len(index), len(maps))
    return PlonkaSum(index, fibers, maps, checks)


def _check_images(t: TransitionMap, fibers: dict[str, Fiber]) -> None:
    source, target = fibers[t.source], fibers[t.target]
    for generator in source.generators():
        image = t.apply(generator)
        if not target.contains(image):
            raise TransitionImageError(
                f"φ_{t.source},{t.target} maps {source.render(generator)} outside fiber {t.target}",
                witness={
                    "source": t.source,
                    "target": t.target,
                    "generator": source.render(generator),
                    "image": render_point(image),
                },
            )


def _complete(index: FiniteSemilattice, maps: dict[tuple[str, str], TransitionMap]) -> None:
    changed = True
    while changed:
        changed = False
        for s, t, u in itertools.product(index.elements, repeat=3):
            if (s, u) in maps or (s, t) not in maps or (t, u) not in maps:
                continue
            maps[(s, u)] = maps[(s, t)].then(maps[(t, u)])
            changed = True
    for s, t in itertools.product(index.elements, repeat=2):
        if index.leq(s, t) and (s, t) not in maps:
            raise MissingTransitionError(
                f"No transition from {s} to {t} and none composes", witness={"source": s, "target": t}
            )


def _check_functoriality(index, fibers, maps) -> int:
    checks = 0
    for s, t, u in itertools.product(index.elements, repeat=3):
        if len({s, t, u}) < 3 or not (index.leq(s, t) and index.leq(t, u)):
            continue
        composite = maps[(s, t)].then(maps[(t, u)])
        direct = maps[(s, u)]
        for generator in fibers[s].generators():
            checks += 1
            via, straight = composite.apply(generator), direct.apply(generator)
            if via != straight:
                raise FunctorialityError(
                    f"φ_{t},{u}∘φ_{s},{t} and φ_{s},{u} disagree",
                    witness={
                        "path": f"{s}->{t}->{u}",
                        "direct": f"{s}->{u}",
                        "generator": fibers[s].render(generator),
                        "via_path": render_point(via),
                        "direct_image": render_point(straight),
                    },
                )
    return checks


# Models


class PlonkaModel(BarycentricModel):
    def __init__(self, plonka_sum: PlonkaSum, name: str = "plonka"):
        self.sum = plonka_sum
        self.name = name

    def contains(self, element) -> bool:
        if not isinstance(element, SumElement) or element.fiber not in self.sum.fibers:
            return False
        return self.sum.fibers[element.fiber].contains(element.point)

    def operate(self, weight: Weight, x: SumElement, y: SumElement) -> SumElement:
        return self.sum.eval(weight, x, y)

    def sample(self, rng: random.Random) -> SumElement:
        label = rng.choice(self.sum.index.elements)
        return SumElement(label, self.sum.fibers[label].sample(rng))

    def generators(self) -> list[SumElement]:
        return self.sum.generators()

    def render(self, element: SumElement) -> str:
        return self.sum.render(element)

    def describe(self) -> dict:
        return {**super().describe(), "kind": "plonka", "fibers": list(self.sum.index.elements)}


class PlonkaSubalgebraModel(PlonkaModel):
    """The elements of a sum accepted by a predicate."""

    def __init__(self, plonka_sum: PlonkaSum, predicate: Callable[[SumElement], bool], name: str = "subalgebra"):
        super().__init__(plonka_sum, name)
        self.predicate = predicate

    def contains(self, element) -> bool:
        return super().contains(element) and self.predicate(element)

    def sample(self, rng: random.Random) -> SumElement:
        for _ in range(1000):
            candidate = super().sample(rng)
            if self.predicate(candidate):
                return candidate
        return rng.choice(self.generators())

    def generators(self) -> list[SumElement]:
        return [g for g in self.sum.generators() if self.predicate(g)]


# Replicas


def classify_element(plonka_sum: PlonkaSum, element: SumElement) -> str:
    """Label of the (fiber, open cell) class holding an element."""
    cell = plonka_sum.fibers[element.fiber].classify(element.point)
    return f"{element.fiber}:{cell.descriptor}"


@dataclass
class ReplicaResult:
    """Semilattice replica with class descriptors and the classifying map."""

    plonka_sum: PlonkaSum
    model: PlonkaModel
    semilattice: FiniteSemilattice
    classes: dict[str, tuple[str, Cell]]
    samples: list[tuple[SumElement, str]] = field(default_factory=list)

    def classify(self, element: SumElement) -> str:
        return classify_element(self.plonka_sum, element)

    def descriptors(self) -> list[ClassDescriptor]:
        return [
            ClassDescriptor(label=label, fiber=fiber, descriptor=cell.descriptor, kind=cell.kind)
            for label, (fiber, cell) in self.classes.items()
        ]

    def classes_open(self) -> bool:
        return all(self.plonka_sum.fibers[fiber].is_open_cell(cell) for fiber, cell in self.classes.values())

    def report(self, expected: Optional[FiniteSemilattice] = None, shown: int = 5) -> ReplicaReport:
        return ReplicaReport(
            model=self.model.name,
            class_count=len(self.semilattice),
            classes=self.descriptors(),
            semilattice=self.semilattice.to_dict(),
            classifier_samples=[
                {"element": self.plonka_sum.render(e), "class": label} for e, label in self.samples[:shown]
            ],
            isomorphic_to_expected=bool(is_isomorphic(self.semilattice, expected)) if expected is not None else None,
            classes_open=self.classes_open(),
        )


def _class_join(plonka_sum: PlonkaSum, a, b, count: int, rng: random.Random) -> str:
    (fa, ca), (fb, cb) = a, b
    weights = settings.weight_sample()
    joins = []
    for i in range(count):
        x = SumElement(fa, plonka_sum.fibers[fa].representative(ca, rng if i else None))
        y = SumElement(fb, plonka_sum.fibers[fb].representative(cb, rng if i else None))
        image = plonka_sum.eval(Weight(weights[i % len(weights)]), x, y)
        joins.append(classify_element(plonka_sum, image))
    labels = set(joins)
    if len(labels) > 1:
        raise ReplicaConsistencyError(
            "Class join depends on the representatives",
            witness={
                "classes": f"{fa}:{ca.descriptor} ∨ {fb}:{cb.descriptor}",
                "joins": ",".join(sorted(labels)),
            },
        )
    return joins[0]


def _validate_hom(result: ReplicaResult, samples: int, rng: random.Random) -> None:
    model = result.model
    for _ in range(samples):
        x, y = model.sample(rng), model.sample(rng)
        p = model.sample_weight(rng)
        cx, cy = result.classify(x), result.classify(y)
        image = result.classify(model.operate(p, x, y))
        result.samples.append((x, cx))
        expected = result.semilattice.join(cx, cy)
        if image != expected:
            raise ReplicaConsistencyError(
                "Classifier is not a homomorphism",
                witness={
                    "x": model.render(x),
                    "y": model.render(y),
                    "weight": str(p),
                    "class_of_result": image,
                    "join_of_classes": expected,
                },
            )


def _semilattice_or_fail(labels, table) -> FiniteSemilattice:
    try:
        return FiniteSemilattice.from_join_table(labels, table)
    except SemilatticeAxiomError as exc:
        raise ReplicaConsistencyError(f"Class joins do not form a semilattice: {exc.message}", exc.witness) from exc


def refined_replica(plonka_sum: PlonkaSum, seed: Optional[int] = None, samples: Optional[int] = None) -> ReplicaResult:
    """Classes (fiber, open cell) joined through representative points."""
    seed = settings.seed if seed is None else seed
    rng = random.Random(seed)
    classes: dict[str, tuple[str, Cell]] = {}
    for label in plonka_sum.index.elements:
        for cell in plonka_sum.fibers[label].cells():
            classes[f"{label}:{cell.descriptor}"] = (label, cell)
    model = PlonkaModel(plonka_sum)
    table = {}
    for a, b in itertools.product(classes, repeat=2):
        table[(a, b)] = _class_join(
            plonka_sum, classes[a], classes[b], settings.replica_representatives, rng
        )
    logger.debug("Replica table over %d classes", len(classes))
    result = ReplicaResult(plonka_sum, model, _semilattice_or_fail(list(classes), table), classes)
    _validate_hom(result, samples or settings.replica_samples, rng)
    return result


def restrict(
    plonka_sum: PlonkaSum,
    member: Callable[[SumElement], bool],
    replica: ReplicaResult,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    name: str = "subalgebra",
) -> ReplicaResult:
    """Replica of the subalgebra of elements accepted by ``member``."""
    rng = random.Random(settings.seed if seed is None else seed)
    samples = samples or settings.replica_samples
    model = PlonkaSubalgebraModel(plonka_sum, member, name)

    kept = {}
    for label, (fiber, cell) in replica.classes.items():
        candidates = [plonka_sum.fibers[fiber].representative(cell)]
        candidates += [plonka_sum.fibers[fiber].representative(cell, rng) for _ in range(5)]
        if any(member(SumElement(fiber, point)) for point in candidates):
            kept[label] = (fiber, cell)

    for _ in range(samples):
        x, y = model.sample(rng), model.sample(rng)
        p = model.sample_weight(rng)
        image = model.operate(p, x, y)
        if not member(image):
            logger.warning("Subalgebra predicate is not closed: %s", plonka_sum.render(image))
            raise SubalgebraClosureError(
                "Subalgebra is not closed under the operations",
                witness={
                    "x": plonka_sum.render(x),
                    "y": plonka_sum.render(y),
                    "weight": str(p),
                    "result": plonka_sum.render(image),
                },
            )

    table = {}
    for a, b in itertools.product(kept, repeat=2):
        joined = replica.semilattice.join(a, b)
        if joined not in kept:
            raise SubalgebraClosureError(
                f"Join {joined} of kept classes {a}, {b} has no subalgebra elements",
                witness={"a": a, "b": b, "join": joined},
            )
        table[(a, b)] = joined
    result = ReplicaResult(plonka_sum, model, _semilattice_or_fail(list(kept), table), kept)
    _validate_hom(result, samples, rng)
    return result


# Polytopes as sums of their faces


def polytope_as_plonka(c: Polytope, samples: int = 200, seed: Optional[int] = None) -> tuple[PlonkaSum, AgreementReport]:
    """Faces as fibers over the face semilattice with inclusion maps, checked against direct means."""
    lattice = FaceLattice(c)
    index = lattice.as_semilattice()
    fibers: dict[str, Fiber] = {}
    for face in lattice.faces:
        names = [c.vertex_label(i) for i in face.indices]
        fibers[lattice.label(face)] = PolytopeFiber(Polytope([c.vertices[i] for i in face.indices], names))
    identity = TransitionMap.identity("", c.ambient_dim)
    inclusions = [
        TransitionMap(lattice.label(a), lattice.label(b), identity.matrix, identity.offset, c.ambient_dim)
        for a, b in itertools.product(lattice.faces, repeat=2)
        if a != b and lattice.leq(a, b)
    ]
    plonka_sum = build(index, fibers, inclusions)

    rng = random.Random(settings.seed if seed is None else seed)
    model = PolytopeModel(c)
    agreed = 0
    mismatches = []
    for _ in range(samples):
        x, y = model.sample(rng), model.sample(rng)
        p = model.sample_weight(rng)
        tagged = plonka_sum.eval(
            p,
            SumElement(lattice.label(c.carrier_face(x)), x),
            SumElement(lattice.label(c.carrier_face(y)), y),
        )
        direct = weighted_mean(p, x, y)
        carrier = lattice.label(c.carrier_face(direct))
        if tagged.point == direct and tagged.fiber == carrier:
            agreed += 1
        else:
            mismatches.append(
                {"x": render_point(x), "y": render_point(y), "weight": str(p), "tagged": plonka_sum.render(tagged)}
            )
    report = AgreementReport(
        model="polytope", samples=samples, agreed=agreed, passed=agreed == samples, mismatches=mismatches[:5]
    )
    return plonka_sum, report


def polytope_plonka_sum(c: Polytope, names_fiber: str = "0") -> PlonkaSum:
    """A polytope as a one-fiber sum, whose replica is its open-cell decomposition."""
    return build(FiniteSemilattice.from_join_table([names_fiber], {}), {names_fiber: PolytopeFiber(c)}, [])


def eval_report(plonka_sum: PlonkaSum, p: Weight, x: SumElement, y: SumElement) -> EvalReport:
    result = plonka_sum.eval(p, plonka_sum.validate_element(x), plonka_sum.validate_element(y))
    fiber = plonka_sum.fibers[result.fiber]
    return EvalReport(
        weight=str(p),
        x=plonka_sum.render(x),
        y=plonka_sum.render(y),
        result=plonka_sum.render(result),
        fiber=result.fiber,
        coordinates=[format_rational(v) for v in result.point],
        combination=fiber.describe_point(result.point),
    )
