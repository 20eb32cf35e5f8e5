"""Affine spaces over GF(p) and ℚ: subspaces, cosets and the projective replica.

Vectors of GF(p)ⁿ are tuples of residues. Subspaces are stored in reduced row
echelon form, so equal subspaces compare equal; cosets keep the representative
whose pivot coordinates are zero.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

from barycentra.core.config import settings
from barycentra.core.errors import (
    DimensionMismatchError,
    FamilyNotJoinClosedError,
    InputError,
    ModulusMismatchError,
    SizeBoundError,
    WeightDomainError,
)
from barycentra.core.linalg import reduce_against, rref, rref_mod
from barycentra.core.scalar import (
    FieldElement,
    FieldVector,
    Weight,
    format_rational,
    format_vector,
    is_prime,
    parse_rational,
    weighted_mean,
)
from barycentra.schemas.inputs import RationalFamilySpec, SpaceSpec
from barycentra.schemas.reports import (
    AffinePlonkaReport,
    CheckReport,
    ClassDescriptor,
    FiberCertificate,
    ProjectiveReplicaReport,
    RationalCosetReport,
    ReplicaReport,
)
from barycentra.services.laws import Exhaustive, check_identity, resolve_laws
from barycentra.services.models import BarycentricModel, ScalarKind, random_rational
from barycentra.services.semilattice import FiniteSemilattice, is_isomorphic

logger = logging.getLogger(__name__)

Residues = tuple[int, ...]
KValue = Union[FieldElement, int]


def parallelogram(u: Sequence[FieldElement], v: Sequence[FieldElement], w: Sequence[FieldElement]) -> FieldVector:
    """P(u, v, w) = u - v + w."""
    if not len(u) == len(v) == len(w):
        raise DimensionMismatchError(
            "Parallelogram arguments have different dimensions",
            witness={"dimensions": f"{len(u)},{len(v)},{len(w)}"},
        )
    return tuple(a - b + c for a, b, c in zip(u, v, w))


def _render_residues(vector: Residues) -> str:
    if len(vector) == 1:
        return str(vector[0])
    return "(" + ", ".join(str(v) for v in vector) + ")"


@dataclass(frozen=True)
class FiniteVectorSpace:
    """GF(p)ⁿ for an odd prime p."""

    modulus: int
    dimension: int

    def __post_init__(self):
        if not is_prime(self.modulus) or self.modulus == 2:
            raise InputError(
                f"Modulus must be an odd prime, got {self.modulus}", witness={"modulus": self.modulus}
            )
        if self.dimension < 0:
            raise InputError("Dimension must be non-negative")
        if self.size > settings.max_space_size:
            raise SizeBoundError(
                f"GF({self.modulus})^{self.dimension} has {self.size} points (bound {settings.max_space_size})",
                witness={"size": self.size},
            )

    @classmethod
    def from_spec(cls, spec: SpaceSpec) -> "FiniteVectorSpace":
        return cls(spec.modulus, spec.dimension)

    @property
    def size(self) -> int:
        return self.modulus**self.dimension

    @property
    def name(self) -> str:
        return f"GF({self.modulus})^{self.dimension}"

    def vectors(self) -> list[Residues]:
        return list(itertools.product(range(self.modulus), repeat=self.dimension))

    def element(self, k: KValue) -> FieldElement:
        if isinstance(k, FieldElement):
            if k.modulus != self.modulus:
                raise ModulusMismatchError(
                    f"Scalar over GF({k.modulus}) used in {self.name}",
                    witness={"scalar_modulus": k.modulus, "space_modulus": self.modulus},
                )
            return k
        return FieldElement(k, self.modulus)

    def mean(self, k: KValue, x: Residues, y: Residues) -> Residues:
        """k(x, y) = (1-k)x + ky."""
        k = self.element(k).residue
        p = self.modulus
        return tuple(((1 - k) * a + k * b) % p for a, b in zip(x, y))

    def combine(self, u: Residues, v: Residues, w: Residues) -> Residues:
        return tuple((a - b + c) % self.modulus for a, b, c in zip(u, v, w))


# Subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)ⁿ in canonical RREF."""

    modulus: int
    dimension: int
    rows: tuple[Residues, ...]

    @classmethod
    def span(cls, space: FiniteVectorSpace, vectors: Iterable[Sequence[int]]) -> "Subspace":
        rows, _ = rref_mod([list(v) for v in vectors], space.modulus)
        return cls(space.modulus, space.dimension, tuple(tuple(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, v in enumerate(row) if v) for row in self.rows)

    @property
    def label(self) -> str:
        if not self.rows:
            return "{0}"
        return "span(" + ";".join(",".join(str(v) for v in row) for row in self.rows) + ")"

    def reduce(self, vector: Sequence[int]) -> Residues:
        """Clear the pivot coordinates of ``vector`` modulo this subspace."""
        p = self.modulus
        result = [v % p for v in vector]
        for row, pivot in zip(self.rows, self.pivots):
            coefficient = result[pivot]
            if coefficient:
                result = [(a - coefficient * b) % p for a, b in zip(result, row)]
        return tuple(result)

    def contains(self, vector: Sequence[int]) -> bool:
        return not any(self.reduce(vector))

    def members(self) -> list[Residues]:
        p = self.modulus
        result = []
        for coefficients in itertools.product(range(p), repeat=self.rank):
            vector = [0] * self.dimension
            for c, row in zip(coefficients, self.rows):
                vector = [(a + c * b) % p for a, b in zip(vector, row)]
            result.append(tuple(vector))
        return result

    def leq(self, other: "Subspace") -> bool:
        return all(other.contains(row) for row in self.rows)


def _check_same_parent(a: Subspace, b: Subspace) -> None:
    if a.modulus != b.modulus or a.dimension != b.dimension:
        raise ModulusMismatchError(
            "Subspaces live in different spaces",
            witness={"left": f"GF({a.modulus})^{a.dimension}", "right": f"GF({b.modulus})^{b.dimension}"},
        )


@lru_cache(maxsize=None)
def subspace_join(u1: Subspace, u2: Subspace) -> Subspace:
    """U1 ∨ U2, the RREF of the stacked bases."""
    _check_same_parent(u1, u2)
    rows, _ = rref_mod([list(r) for r in (*u1.rows, *u2.rows)], u1.modulus)
    return Subspace(u1.modulus, u1.dimension, tuple(tuple(r) for r in rows))


def enumerate_subspaces(space: FiniteVectorSpace) -> list[Subspace]:
    """Every subspace once, ordered by dimension, then pivot columns, then entries."""
    p, n = space.modulus, space.dimension
    result = []
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [
                (i, j)
                for i, c in enumerate(pivots)
                for j in range(c + 1, n)
                if j not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in pivots]
                for i, c in enumerate(pivots):
                    rows[i][c] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                result.append(Subspace(p, n, tuple(tuple(r) for r in rows)))
    logger.debug("Enumerated %d subspaces of %s", len(result), space.name)
    return result


def subspace_semilattice(subspaces: Sequence[Subspace]) -> FiniteSemilattice:
    """(L(V), ∨), validated by the semilattice module."""
    labels = [u.label for u in subspaces]
    table = {(a.label, b.label): subspace_join(a, b).label for a, b in itertools.product(subspaces, repeat=2)}
    return FiniteSemilattice.from_join_table(labels, table)


# Cosets


@dataclass(frozen=True)
class Coset:
    """x + U with x reduced modulo U."""

    subspace: Subspace
    representative: Residues

    @classmethod
    def of(cls, subspace: Subspace, vector: Sequence[int]) -> "Coset":
        return cls(subspace, subspace.reduce(vector))

    def members(self) -> frozenset[Residues]:
        p = self.subspace.modulus
        return frozenset(
            tuple((a + b) % p for a, b in zip(self.representative, u)) for u in self.subspace.members()
        )

    @property
    def label(self) -> str:
        return f"{_render_residues(self.representative)}+{self.subspace.label}"


def projection_pi(coset: Coset) -> Subspace:
    """x + U ↦ U."""
    return coset.subspace


class CosetAlgebra:
    """All cosets of all subspaces of GF(p)ⁿ with the lifted operations."""

    def __init__(self, space: FiniteVectorSpace, validate: bool = True, seed: Optional[int] = None):
        self.space = space
        self.subspaces = enumerate_subspaces(space)
        self.fibers: dict[Subspace, list[Coset]] = {}
        for u in self.subspaces:
            free = [c for c in range(space.dimension) if c not in u.pivots]
            reps = []
            for values in itertools.product(range(space.modulus), repeat=len(free)):
                vector = [0] * space.dimension
                for c, v in zip(free, values):
                    vector[c] = v
                reps.append(Coset(u, tuple(vector)))
            self.fibers[u] = reps
        self.cosets = [c for u in self.subspaces for c in self.fibers[u]]
        if validate:
            self.validate(seed)

    def lifted_mean(self, k: KValue, c1: Coset, c2: Coset) -> Coset:
        """k(x+U1, y+U2); a coset of U1 for k = 0, of U2 for k = 1, of U1 ∨ U2 otherwise."""
        k = self.space.element(k)
        if k.residue == 0:
            direction = c1.subspace
        elif k.residue == 1:
            direction = c2.subspace
        else:
            direction = subspace_join(c1.subspace, c2.subspace)
        return Coset.of(direction, self.space.mean(k, c1.representative, c2.representative))

    def lifted_parallelogram(self, c1: Coset, c2: Coset, c3: Coset) -> Coset:
        direction = subspace_join(subspace_join(c1.subspace, c2.subspace), c3.subspace)
        return Coset.of(direction, self.space.combine(c1.representative, c2.representative, c3.representative))

    def setwise_mean(self, k: KValue, c1: Coset, c2: Coset) -> frozenset[Residues]:
        members2 = c2.members()
        return frozenset(self.space.mean(k, a, b) for a in c1.members() for b in members2)

    def validate(self, seed: Optional[int] = None) -> None:
        """Check the lifted operations against setwise images."""
        total = (len(self.subspaces) * self.space.size) ** 2 * self.space.modulus
        if total <= settings.max_assignments:
            pairs = [
                (k, c1, c2)
                for k in range(self.space.modulus)
                for c1, c2 in itertools.product(self.cosets, repeat=2)
            ]
        else:
            rng = random.Random(settings.seed if seed is None else seed)
            pairs = [
                (rng.randrange(self.space.modulus), rng.choice(self.cosets), rng.choice(self.cosets))
                for _ in range(settings.parallelogram_samples)
            ]
        for k, c1, c2 in pairs:
            if self.setwise_mean(k, c1, c2) != self.lifted_mean(k, c1, c2).members():
                raise InputError(
                    f"Lifted operation {k} is not a single coset on {c1.label}, {c2.label}",
                    witness={"k": str(k), "left": c1.label, "right": c2.label},
                )
        rng = random.Random(settings.seed if seed is None else seed)
        for _ in range(settings.parallelogram_samples):
            c1, c2, c3 = (rng.choice(self.cosets) for _ in range(3))
            image = frozenset(
                self.space.combine(a, b, c)
                for a in c1.members()
                for b in c2.members()
                for c in c3.members()
            )
            if image != self.lifted_parallelogram(c1, c2, c3).members():
                raise InputError(
                    "Lifted parallelogram is not a single coset",
                    witness={"cosets": f"{c1.label}, {c2.label}, {c3.label}"},
                )

    def semilattice(self) -> FiniteSemilattice:
        return subspace_semilattice(self.subspaces)


def coset_algebra(space: FiniteVectorSpace, seed: Optional[int] = None) -> CosetAlgebra:
    return CosetAlgebra(space, seed=seed)


def _proper_k(space: FiniteVectorSpace, k: KValue) -> FieldElement:
    k = space.element(k)
    if k.residue in (0, 1):
        raise WeightDomainError(f"k must differ from 0 and 1, got {k}", witness={"k": str(k)})
    return k


def verify_plonka_structure(space: FiniteVectorSpace, k: KValue, algebra: Optional[CosetAlgebra] = None) -> AffinePlonkaReport:
    """Cosets of each U as fibers over (L(V), ∨), transitions x+Us ↦ x+Ut."""
    k = _proper_k(space, k)
    algebra = algebra or CosetAlgebra(space)
    lattice = algebra.semilattice()
    witnesses: list[dict[str, str]] = []

    def phi(coset: Coset, target: Subspace) -> Coset:
        return Coset.of(target, coset.representative)

    functoriality = 0
    for us, ut, uu in itertools.product(algebra.subspaces, repeat=3):
        if not (us.leq(ut) and ut.leq(uu)):
            continue
        for coset in algebra.fibers[us]:
            functoriality += 1
            if phi(phi(coset, ut), uu) != phi(coset, uu):
                witnesses.append(
                    {
                        "check": "functoriality",
                        "coset": coset.label,
                        "path": f"{us.label}->{ut.label}->{uu.label}",
                    }
                )
    for us, ut in itertools.product(algebra.subspaces, repeat=2):
        if not us.leq(ut):
            continue
        for c1, c2 in itertools.product(algebra.fibers[us], repeat=2):
            functoriality += 1
            if phi(algebra.lifted_mean(k, c1, c2), ut) != algebra.lifted_mean(k, phi(c1, ut), phi(c2, ut)):
                witnesses.append({"check": "transition-homomorphism", "left": c1.label, "right": c2.label})

    operations = 0
    homomorphism_ok = True
    for c1, c2 in itertools.product(algebra.cosets, repeat=2):
        operations += 1
        target = subspace_join(c1.subspace, c2.subspace)
        via_sum = Coset.of(target, space.mean(k, phi(c1, target).representative, phi(c2, target).representative))
        if via_sum.members() != algebra.setwise_mean(k, c1, c2):
            witnesses.append({"check": "operation", "left": c1.label, "right": c2.label})
        if projection_pi(algebra.lifted_mean(k, c1, c2)) != target:
            homomorphism_ok = False
            witnesses.append({"check": "projection", "left": c1.label, "right": c2.label})

    return AffinePlonkaReport(
        modulus=space.modulus,
        dimension=space.dimension,
        k=str(k),
        subspace_count=len(lattice),
        coset_count=len(algebra.cosets),
        fiber_sizes=[len(algebra.fibers[u]) for u in algebra.subspaces],
        functoriality_checks=functoriality,
        operation_checks=operations,
        homomorphism_ok=homomorphism_ok,
        passed=not witnesses,
        witnesses=witnesses[:10],
    )


# Replica certificates


def _fiber_tables(space: FiniteVectorSpace, fiber: list[Coset], weights: list[FieldElement]):
    index = {c: i for i, c in enumerate(fiber)}
    tables = []
    for k in weights:
        tables.append(
            [
                [index[Coset.of(a.subspace, space.mean(k, a.representative, b.representative))] for b in fiber]
                for a in fiber
            ]
        )
    return tables


def _is_cancellative(tables) -> bool:
    return all(len(set(row)) == len(row) for table in tables for row in table)


def _has_proper_wall(tables, size: int) -> bool:
    full = (1 << size) - 1
    for mask in range(1, full):
        is_wall = True
        for table in tables:
            for i in range(size):
                for j in range(size):
                    inside = bool(mask >> table[i][j] & 1)
                    if inside != bool(mask >> i & 1 and mask >> j & 1):
                        is_wall = False
                        break
                if not is_wall:
                    break
            if not is_wall:
                break
        if is_wall:
            return True
    return False


def _strongly_connected(tables, size: int) -> bool:
    # x reaches y when x = k(y, b) for some b: a wall holding x must hold y.
    reaches = [set() for _ in range(size)]
    for table in tables:
        for y in range(size):
            for b in range(size):
                reaches[table[y][b]].add(y)
    for start in range(size):
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for nxt in reaches[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        if len(seen) != size:
            return False
    return True


def fiber_certificate(space: FiniteVectorSpace, subspace: Subspace, fiber: list[Coset], weights: list[FieldElement]) -> FiberCertificate:
    tables = _fiber_tables(space, fiber, weights)
    cancellative = _is_cancellative(tables)
    if len(fiber) <= settings.exhaustive_wall_limit:
        return FiberCertificate(
            subspace=subspace.label,
            size=len(fiber),
            certificate="exhaustive-wall-search",
            open=not _has_proper_wall(tables, len(fiber)),
            cancellative=cancellative,
        )
    return FiberCertificate(
        subspace=subspace.label,
        size=len(fiber),
        certificate="cancellative-connected",
        open=cancellative and _strongly_connected(tables, len(fiber)),
        cancellative=cancellative,
    )


def coset_replica(algebra: CosetAlgebra, weights: Sequence[KValue]) -> FiniteSemilattice:
    """Quotient of S(V) by the fibers of π, joined through canonical representatives."""
    table = {}
    for u1, u2 in itertools.product(algebra.subspaces, repeat=2):
        c1, c2 = algebra.fibers[u1][0], algebra.fibers[u2][0]
        images = {projection_pi(algebra.lifted_mean(k, c1, c2)).label for k in weights}
        if len(images) != 1:
            raise InputError("Replica join depends on the weight", witness={"left": u1.label, "right": u2.label})
        table[(u1.label, u2.label)] = images.pop()
    return FiniteSemilattice.from_join_table([u.label for u in algebra.subspaces], table)


def _default_weights(space: FiniteVectorSpace) -> list[FieldElement]:
    return [FieldElement(k, space.modulus) for k in range(2, space.modulus)]


def verify_replica_is_projective(
    space: FiniteVectorSpace, weights: Optional[Sequence[KValue]] = None, algebra: Optional[CosetAlgebra] = None
) -> ProjectiveReplicaReport:
    """π is a surjective semilattice quotient with open fibers."""
    ks = [_proper_k(space, k) for k in (weights or _default_weights(space))]
    algebra = algebra or CosetAlgebra(space)
    lattice = algebra.semilattice()
    images = {projection_pi(c) for c in algebra.cosets}
    surjective = images == set(algebra.subspaces)
    homomorphism_ok = all(
        projection_pi(algebra.lifted_mean(k, c1, c2)) == subspace_join(c1.subspace, c2.subspace)
        for k in ks
        for c1, c2 in itertools.product(algebra.cosets, repeat=2)
    )
    replica = coset_replica(algebra, ks)
    certificates = [fiber_certificate(space, u, algebra.fibers[u], ks) for u in algebra.subspaces]
    isomorphic = bool(is_isomorphic(replica, lattice))
    return ProjectiveReplicaReport(
        modulus=space.modulus,
        dimension=space.dimension,
        weights=[str(k) for k in ks],
        replica_size=len(replica),
        surjective=surjective,
        homomorphism_ok=homomorphism_ok,
        isomorphic_to_projective_space=isomorphic,
        fibers=certificates,
        passed=surjective and homomorphism_ok and isomorphic and all(c.open for c in certificates),
    )


def affine_replica_report(space: FiniteVectorSpace, weights: Optional[Sequence[KValue]] = None) -> ReplicaReport:
    """Replica of S(V) in the common replica report shape."""
    ks = [_proper_k(space, k) for k in (weights or _default_weights(space))]
    algebra = CosetAlgebra(space)
    replica = coset_replica(algebra, ks)
    model = CosetModel(algebra)
    rng = random.Random(settings.seed)
    shown = [rng.choice(algebra.cosets) for _ in range(5)]
    certificates = [fiber_certificate(space, u, algebra.fibers[u], ks) for u in algebra.subspaces]
    return ReplicaReport(
        model=model.name,
        class_count=len(replica),
        classes=[
            ClassDescriptor(label=u.label, fiber=u.label, descriptor=f"cosets of {u.label}", kind="affine")
            for u in algebra.subspaces
        ],
        semilattice=replica.to_dict(),
        classifier_samples=[{"element": c.label, "class": projection_pi(c).label} for c in shown],
        isomorphic_to_expected=bool(is_isomorphic(replica, algebra.semilattice())),
        classes_open=all(c.open for c in certificates),
    )


# Models


class FiniteAffineModel(BarycentricModel):
    """GF(p)ⁿ with k(x, y) for every k and the parallelogram P."""

    scalar_kind = ScalarKind.FIELD

    def __init__(self, space: FiniteVectorSpace):
        self.space = space
        self.modulus = space.modulus
        self.name = space.name

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> list[Residues]:
        return self.space.vectors()

    def contains(self, element) -> bool:
        return (
            isinstance(element, tuple)
            and len(element) == self.space.dimension
            and all(isinstance(v, int) and 0 <= v < self.modulus for v in element)
        )

    def operate(self, weight: FieldElement, x: Residues, y: Residues) -> Residues:
        return self.space.mean(weight, x, y)

    @property
    def supports_parallelogram(self) -> bool:
        return True

    def parallelogram(self, u: Residues, v: Residues, w: Residues) -> Residues:
        return self.space.combine(u, v, w)

    def sample(self, rng: random.Random) -> Residues:
        return tuple(rng.randrange(self.modulus) for _ in range(self.space.dimension))

    def render(self, element: Residues) -> str:
        return _render_residues(element)

    def describe(self) -> dict:
        return {**super().describe(), "kind": "affine-gf", "size": self.space.size}


class CosetModel(BarycentricModel):
    """S(V) with the lifted operations."""

    scalar_kind = ScalarKind.FIELD

    def __init__(self, algebra: CosetAlgebra):
        self.algebra = algebra
        self.modulus = algebra.space.modulus
        self.name = f"S({algebra.space.name})"

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> list[Coset]:
        return list(self.algebra.cosets)

    def contains(self, element) -> bool:
        return isinstance(element, Coset) and element in self.algebra.fibers.get(element.subspace, [])

    def operate(self, weight: FieldElement, x: Coset, y: Coset) -> Coset:
        return self.algebra.lifted_mean(weight, x, y)

    @property
    def supports_parallelogram(self) -> bool:
        return True

    def parallelogram(self, u: Coset, v: Coset, w: Coset) -> Coset:
        return self.algebra.lifted_parallelogram(u, v, w)

    def sample(self, rng: random.Random) -> Coset:
        return rng.choice(self.algebra.cosets)

    def render(self, element: Coset) -> str:
        return element.label


# Rational families


@dataclass(frozen=True)
class RationalSubspace:
    """A subspace of ℚⁿ in canonical RREF."""

    dimension: int
    rows: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, dimension: int, vectors: Iterable[Sequence]) -> "RationalSubspace":
        vectors = [[parse_rational(v) for v in row] for row in vectors]
        for row in vectors:
            if len(row) != dimension:
                raise DimensionMismatchError(f"Basis vector of length {len(row)} in ℚ^{dimension}")
        rows, pivots = rref(vectors) if vectors else ([], [])
        return cls(dimension, tuple(tuple(r) for r in rows), tuple(pivots))

    @property
    def label(self) -> str:
        if not self.rows:
            return "{0}"
        if len(self.rows) == self.dimension:
            return f"ℚ^{self.dimension}"
        return "span(" + ";".join(",".join(format_rational(v) for v in row) for row in self.rows) + ")"

    def reduce(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(reduce_against(vector, [list(r) for r in self.rows], self.pivots))

    def join(self, other: "RationalSubspace") -> "RationalSubspace":
        return RationalSubspace.span(self.dimension, [*self.rows, *other.rows])

    def leq(self, other: "RationalSubspace") -> bool:
        return all(not any(other.reduce(row)) for row in self.rows)

    def sample_member(self, rng: random.Random) -> tuple[Fraction, ...]:
        vector = [Fraction(0)] * self.dimension
        for row in self.rows:
            c = random_rational(rng)
            vector = [a + c * b for a, b in zip(vector, row)]
        return tuple(vector)


@dataclass(frozen=True)
class RationalCoset:
    subspace: RationalSubspace
    representative: tuple[Fraction, ...]

    @classmethod
    def of(cls, subspace: RationalSubspace, vector: Sequence[Fraction]) -> "RationalCoset":
        return cls(subspace, subspace.reduce(vector))

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return not any(self.subspace.reduce([a - b for a, b in zip(vector, self.representative)]))

    @property
    def label(self) -> str:
        return f"{format_vector(self.representative)}+{self.subspace.label}"


def rational_family(spec: RationalFamilySpec) -> list[RationalSubspace]:
    """Canonical, deduplicated, join-closed family."""
    family: list[RationalSubspace] = []
    for entry in spec.subspaces:
        subspace = RationalSubspace.span(spec.ambient_dim, entry.basis)
        if subspace not in family:
            family.append(subspace)
    for a, b in itertools.combinations_with_replacement(family, 2):
        joined = a.join(b)
        if joined not in family:
            raise FamilyNotJoinClosedError(
                f"Family is not join-closed: {a.label} ∨ {b.label} = {joined.label} is missing",
                witness={"left": a.label, "right": b.label, "missing_join": joined.label},
            )
    return family


def rational_coset_demo(spec: RationalFamilySpec, samples: int = 500, seed: Optional[int] = None) -> RationalCosetReport:
    """Cosets over a join-closed family: functoriality and operation agreement on samples."""
    family = rational_family(spec)
    n = spec.ambient_dim
    lattice = FiniteSemilattice.from_join_table(
        [u.label for u in family],
        {(a.label, b.label): a.join(b).label for a, b in itertools.product(family, repeat=2)},
    )
    rng = random.Random(settings.seed if seed is None else seed)

    def random_vector() -> tuple[Fraction, ...]:
        return tuple(random_rational(rng) for _ in range(n))

    functoriality = 0
    mismatches: list[dict[str, str]] = []
    for us, ut, uu in itertools.product(family, repeat=3):
        if not (us.leq(ut) and ut.leq(uu)):
            continue
        for _ in range(3):
            coset = RationalCoset.of(us, random_vector())
            functoriality += 1
            via = RationalCoset.of(uu, RationalCoset.of(ut, coset.representative).representative)
            if via != RationalCoset.of(uu, coset.representative):
                mismatches.append({"check": "functoriality", "coset": coset.label})

    agreed = 0
    for _ in range(samples):
        u1, u2 = rng.choice(family), rng.choice(family)
        c1, c2 = RationalCoset.of(u1, random_vector()), RationalCoset.of(u2, random_vector())
        p = Weight(rng.choice(settings.weight_sample()))
        target = u1.join(u2)
        left = RationalCoset.of(target, c1.representative).representative
        right = RationalCoset.of(target, c2.representative).representative
        via_sum = RationalCoset.of(target, weighted_mean(p, left, right))
        a = tuple(x + y for x, y in zip(c1.representative, u1.sample_member(rng)))
        b = tuple(x + y for x, y in zip(c2.representative, u2.sample_member(rng)))
        direct = weighted_mean(p, a, b)
        if via_sum.contains(direct) and lattice.join(u1.label, u2.label) == via_sum.subspace.label:
            agreed += 1
        elif len(mismatches) < 10:
            mismatches.append({"check": "operation", "left": c1.label, "right": c2.label, "weight": str(p)})
    return RationalCosetReport(
        ambient_dim=n,
        family=[u.label for u in family],
        functoriality_checks=functoriality,
        samples=samples,
        agreed=agreed,
        passed=agreed == samples and not any(m["check"] == "functoriality" for m in mismatches),
        mismatches=mismatches,
    )


def check_affine_identity_suite(space: FiniteVectorSpace) -> list[CheckReport]:
    """Exhaustive affine law suite on GF(p)ⁿ."""
    model = FiniteAffineModel(space)
    return [check_identity(model, law, Exhaustive()) for law in resolve_laws(["affine"])]
