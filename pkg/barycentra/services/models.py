"""The uniform model interface every algebra implements.

A model is a carrier plus one binary operation per admissible weight: weights
are open-interval rationals for ℚ-models and arbitrary field elements for
models over GF(p). Law checks, homomorphism checks and the CLI only talk to
models through this interface.
"""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from typing import Any, Hashable, Optional, Sequence, Union

from barycentra.core.config import settings
from barycentra.core.errors import (
    InfiniteCarrierError,
    PointOutsideError,
    UnsupportedModelError,
)
from barycentra.core.scalar import (
    FieldElement,
    Vector,
    Weight,
    format_rational,
    format_vector,
    random_weight,
    weighted_mean,
)

Element = Hashable
Scalar = Union[Weight, FieldElement]
RawScalar = Union[Fraction, FieldElement]


class ScalarKind(str, Enum):
    """Which scalars index the operations of a model."""

    RATIONAL = "rational"
    FIELD = "field"


class BarycentricModel(ABC):
    """A carrier with operations p̲ indexed by weights."""

    name: str = "model"
    scalar_kind: ScalarKind = ScalarKind.RATIONAL
    modulus: Optional[int] = None

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> list[Element]:
        """All carrier elements; only finite models can enumerate."""
        raise InfiniteCarrierError(f"Model {self.name} has an infinite carrier")

    @abstractmethod
    def contains(self, element: Element) -> bool:
        """Carrier membership."""

    @abstractmethod
    def operate(self, weight: Scalar, x: Element, y: Element) -> Element:
        """Evaluate the binary operation indexed by ``weight``."""

    @abstractmethod
    def sample(self, rng: random.Random) -> Element:
        """Draw a carrier element deterministically from ``rng``."""

    @property
    def supports_parallelogram(self) -> bool:
        return False

    def parallelogram(self, u: Element, v: Element, w: Element) -> Element:
        raise UnsupportedModelError(f"Model {self.name} has no parallelogram operation")

    def generators(self) -> list[Element]:
        """Distinguished elements (vertices, named points) used to seed searches."""
        return []

    def render(self, element: Element) -> str:
        return str(element)

    def validate(self, element: Element) -> Element:
        if not self.contains(element):
            raise PointOutsideError(
                f"Element {self.render(element)} is not in the carrier of {self.name}",
                witness={"model": self.name, "element": self.render(element)},
            )
        return element

    # Scalars

    def one(self) -> RawScalar:
        if self.scalar_kind is ScalarKind.FIELD:
            return FieldElement(1, self.modulus)
        return Fraction(1)

    def raw_scalar(self, value: Union[Scalar, Fraction, int]) -> RawScalar:
        """Lift a weight or constant into the arithmetic of this model's scalars."""
        if isinstance(value, Weight):
            return value.value
        if isinstance(value, FieldElement):
            return value
        if self.scalar_kind is ScalarKind.FIELD:
            if isinstance(value, Fraction):
                return FieldElement(value.numerator, self.modulus) / FieldElement(
                    value.denominator, self.modulus
                )
            return FieldElement(value, self.modulus)
        return Fraction(value)

    def admit_weight(self, value: RawScalar) -> Scalar:
        """Turn a raw scalar into an operation index, enforcing the domain."""
        if self.scalar_kind is ScalarKind.FIELD:
            return value if isinstance(value, FieldElement) else self.raw_scalar(value)
        return Weight(value)

    def weight_values(self) -> list[Scalar]:
        """Weights an exhaustive check ranges over."""
        if self.scalar_kind is ScalarKind.FIELD:
            return [FieldElement(k, self.modulus) for k in range(self.modulus)]
        return [Weight(w) for w in settings.weight_sample()]

    def sample_weight(self, rng: random.Random) -> Scalar:
        if self.scalar_kind is ScalarKind.FIELD:
            return FieldElement(rng.randrange(self.modulus), self.modulus)
        if rng.random() < 0.5:
            return Weight(rng.choice(settings.weight_sample()))
        return random_weight(rng, settings.weight_max_denominator)

    def render_scalar(self, value: Scalar) -> str:
        return str(value)

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "scalars": self.scalar_kind.value, "finite": self.is_finite}


def render_point(point: Sequence[Fraction]) -> str:
    """One-dimensional points render as a bare rational."""
    if len(point) == 1:
        return format_rational(point[0])
    return format_vector(point)


def random_rational(rng: random.Random, bound: int = 20, max_denominator: int = 12) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_denominator))


class VectorSpaceModel(BarycentricModel):
    """ℚⁿ under the weighted means (1-p)·u + p·v."""

    def __init__(self, dimension: int, name: Optional[str] = None):
        self.dimension = dimension
        self.name = name or f"Q^{dimension}"

    def contains(self, element: Element) -> bool:
        return (
            isinstance(element, tuple)
            and len(element) == self.dimension
            and all(isinstance(c, Fraction) for c in element)
        )

    def operate(self, weight: Weight, x: Vector, y: Vector) -> Vector:
        return weighted_mean(weight, x, y)

    def sample(self, rng: random.Random) -> Vector:
        return tuple(random_rational(rng) for _ in range(self.dimension))

    def render(self, element: Vector) -> str:
        return render_point(element)
