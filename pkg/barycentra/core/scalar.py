"""Exact scalars: rationals, open-interval weights and prime-field elements.

Rationals are ``fractions.Fraction`` throughout; no float ever enters a
computation. Vectors are plain tuples so points can be hashed and compared.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence, Union

from barycentra.core.errors import (
    DimensionMismatchError,
    InputError,
    ModulusMismatchError,
    WeightDomainError,
)

Rational = Fraction
Vector = tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "a/b" or "a" into a reduced Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise InputError(f"Not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"Not a rational: {text!r}")
    match = _RATIONAL_RE.match(text)
    if not match:
        raise InputError(f"Not a rational: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise InputError(f"Zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """Render a rational in canonical "a/b" (or "a") form."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_vector(items: Sequence[Union[str, int, Fraction]]) -> Vector:
    return tuple(parse_rational(item) for item in items)


def format_vector(vector: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(c) for c in vector) + ")"


def _check_same_dimension(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimensionMismatchError(
            f"Dimension mismatch: {len(x)} vs {len(y)}",
            witness={"left_dimension": len(x), "right_dimension": len(y)},
        )


@dataclass(frozen=True, slots=True)
class Weight:
    """A rational strictly between 0 and 1; the index p of the operation p̲."""

    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", parse_rational(self.value))
        if not (0 < self.value < 1):
            raise WeightDomainError(
                f"Weight must lie in ]0,1[, got {format_rational(self.value)}",
                witness={"weight": format_rational(self.value)},
            )

    @classmethod
    def parse(cls, text: Union[str, int, Fraction]) -> "Weight":
        return cls(parse_rational(text))

    def complement(self) -> "Weight":
        return Weight(1 - self.value)

    def __str__(self) -> str:
        return format_rational(self.value)


def weighted_mean(p: Weight, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    """Return (1-p)·x + p·y componentwise."""
    _check_same_dimension(x, y)
    q = 1 - p.value
    return tuple(q * a + p.value * b for a, b in zip(x, y))


def dual_product(r: Weight, p: Weight) -> Weight:
    """r∘p = r + p - rp."""
    return Weight(r.value + p.value - r.value * p.value)


def skew_assoc_inner_weight(r: Weight, p: Weight) -> Weight:
    """p / (r∘p), the inner weight on the right side of skew-associativity."""
    return Weight(p.value / dual_product(r, p).value)


def random_weight(rng: random.Random, max_denominator: int) -> Weight:
    """Draw a weight with denominator at most ``max_denominator``."""
    denominator = rng.randint(2, max_denominator)
    numerator = rng.randint(1, denominator - 1)
    return Weight(Fraction(numerator, denominator))


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    divisor = 3
    while divisor * divisor <= n:
        if n % divisor == 0:
            return False
        divisor += 2
    return True


@dataclass(frozen=True, slots=True)
class FieldElement:
    """An element of the prime field GF(p)."""

    residue: int
    modulus: int

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise InputError(f"Modulus {self.modulus} is not prime")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def _coerce(self, other: Union["FieldElement", int]) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatchError(
                    f"Modulus mismatch: {self.modulus} vs {other.modulus}",
                    witness={"left_modulus": self.modulus, "right_modulus": other.modulus},
                )
            return other
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.residue + other.residue, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.residue - other.residue, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(other.residue - self.residue, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.residue * other.residue, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.modulus)

    def inverse(self) -> "FieldElement":
        if self.residue == 0:
            raise WeightDomainError(f"0 has no inverse in GF({self.modulus})")
        return FieldElement(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __str__(self) -> str:
        return str(self.residue)


FieldVector = tuple[FieldElement, ...]


def field_vector(residues: Sequence[int], modulus: int) -> FieldVector:
    return tuple(FieldElement(r, modulus) for r in residues)


def field_mean(k: FieldElement, u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldVector:
    """Return (1-k)·u + k·v componentwise over GF(p)."""
    _check_same_dimension(u, v)
    for component in (*u, *v):
        if component.modulus != k.modulus:
            raise ModulusMismatchError(
                f"Modulus mismatch: {k.modulus} vs {component.modulus}",
                witness={"weight_modulus": k.modulus, "vector_modulus": component.modulus},
            )
    q = 1 - k
    return tuple(q * a + k * b for a, b in zip(u, v))
