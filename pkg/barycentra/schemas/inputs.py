"""Input schemas for every JSON format the CLI reads.

Rationals travel as strings ("a/b" or "a"); plain integers are accepted too.
"""
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from barycentra.core.errors import InputError
from barycentra.core.scalar import is_prime, parse_rational

RationalText = Union[str, int]


def _check_rationals(values) -> None:
    for value in values:
        try:
            parse_rational(value)
        except InputError as exc:
            raise ValueError(exc.message) from exc


class SemilatticeSpec(BaseModel):
    """Finite join-semilattice given by explicit join triples."""
    elements: list[str] = Field(..., min_length=1, description="Element labels")
    join: list[tuple[str, str, str]] = Field(..., description="Triples [a, b, a∨b]")


class PolytopeSpec(BaseModel):
    """Polytope given by its vertex list."""
    ambient_dim: int = Field(..., ge=0)
    vertices: list[list[RationalText]] = Field(..., min_length=1)
    names: Optional[list[str]] = Field(None, description="Optional vertex labels")

    @field_validator("vertices")
    @classmethod
    def validate_coordinates(cls, v):
        for vertex in v:
            _check_rationals(vertex)
        return v

    @model_validator(mode="after")
    def validate_shape(self):
        for vertex in self.vertices:
            if len(vertex) != self.ambient_dim:
                raise ValueError(f"Vertex {vertex} does not have {self.ambient_dim} coordinates")
        if self.names is not None and len(self.names) != len(self.vertices):
            raise ValueError("names must label every vertex")
        return self


class FiberSpec(BaseModel):
    """One fiber of a Płonka sum."""
    kind: Literal["polytope", "affine", "singleton"]
    vertices: Optional[list[list[RationalText]]] = None
    names: Optional[list[str]] = None
    basepoint: Optional[list[RationalText]] = None
    basis: list[list[RationalText]] = Field(default_factory=list)
    name: Optional[str] = Field(None, description="Label of a singleton fiber's point")

    @model_validator(mode="after")
    def validate_kind(self):
        if self.kind == "polytope" and not self.vertices:
            raise ValueError("polytope fibers need vertices")
        if self.kind == "affine" and self.basepoint is None:
            raise ValueError("affine fibers need a basepoint")
        rows = list(self.vertices or []) + list(self.basis)
        if self.basepoint is not None:
            rows.append(self.basepoint)
        for row in rows:
            _check_rationals(row)
        return self


class TransitionSpec(BaseModel):
    """Affine transition map x ↦ matrix·x + offset between two fibers."""
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(..., alias="from")
    target: str = Field(..., alias="to")
    matrix: list[list[RationalText]] = Field(default_factory=list)
    offset: list[RationalText] = Field(default_factory=list)

    @field_validator("matrix")
    @classmethod
    def validate_matrix(cls, v):
        for row in v:
            _check_rationals(row)
        return v

    @field_validator("offset")
    @classmethod
    def validate_offset(cls, v):
        _check_rationals(v)
        return v


class PlonkaSumSpec(BaseModel):
    """Płonka sum: index semilattice, fibers and cover transitions."""
    index: SemilatticeSpec
    fibers: dict[str, FiberSpec]
    transitions: list[TransitionSpec] = Field(default_factory=list)


class SpaceSpec(BaseModel):
    """GF(p)^n."""
    model_config = ConfigDict(populate_by_name=True)

    modulus: int = Field(..., alias="p")
    dimension: int = Field(..., alias="n", ge=0)

    @field_validator("modulus")
    @classmethod
    def validate_modulus(cls, v):
        if not is_prime(v) or v == 2:
            raise ValueError(f"Modulus must be an odd prime, got {v}")
        return v


class SubspaceBasisSpec(BaseModel):
    basis: list[list[RationalText]] = Field(default_factory=list)


class RationalFamilySpec(BaseModel):
    """Finite join-closed family of subspaces of ℚ^n."""
    ambient_dim: int = Field(..., ge=1, le=4)
    subspaces: list[SubspaceBasisSpec] = Field(..., min_length=1)

    @model_validator(mode="after")
    def validate_basis_width(self):
        for subspace in self.subspaces:
            for row in subspace.basis:
                _check_rationals(row)
                if len(row) != self.ambient_dim:
                    raise ValueError(f"Basis vector {row} does not have {self.ambient_dim} coordinates")
        return self
