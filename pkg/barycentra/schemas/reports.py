"""Report schemas emitted by the checks and the CLI."""
from typing import Optional

from pydantic import BaseModel, Field, computed_field


class Counterexample(BaseModel):
    """Assignment under which the two sides of a law differ."""
    elements: dict[str, str] = Field(default_factory=dict, description="Element variable values")
    weights: dict[str, str] = Field(default_factory=dict, description="Weight variable values")
    lhs: str
    rhs: str


class CheckReport(BaseModel):
    """Outcome of one law (or homomorphism) check."""
    law: str
    model: str
    strategy: str
    result: str = Field(..., description="pass or fail")
    trials: int = 0
    skipped: int = Field(0, description="Assignments outside the weight domain")
    counterexample: Optional[Counterexample] = None

    @property
    def passed(self) -> bool:
        return self.result == "pass"


class WitnessTriple(BaseModel):
    """Cancellation witness: p(x,y) = p(x,z) with y != z."""
    weight: str
    x: str
    y: str
    z: str
    image: str


class ClassDescriptor(BaseModel):
    label: str
    fiber: str
    descriptor: str
    kind: str = Field(..., description="point, relint or affine")


class ReplicaReport(BaseModel):
    model: str
    class_count: int
    classes: list[ClassDescriptor]
    semilattice: dict
    classifier_samples: list[dict[str, str]] = Field(default_factory=list)
    isomorphic_to_expected: Optional[bool] = None
    classes_open: Optional[bool] = Field(None, description="Every class passed the openness check")


class FaceRecord(BaseModel):
    label: str
    vertices: list[int]
    dimension: int


class FaceLatticeReport(BaseModel):
    ambient_dim: int
    dimension: int
    face_count: int
    counts_by_dimension: list[int]
    faces: list[FaceRecord]


class AgreementReport(BaseModel):
    """Sampled agreement between a reconstruction and a direct computation."""
    model: str
    samples: int
    agreed: int
    passed: bool
    mismatches: list[dict[str, str]] = Field(default_factory=list)

    @computed_field
    @property
    def agree(self) -> str:
        return f"{self.agreed}/{self.samples}"


class PlonkaValidationReport(BaseModel):
    fibers: list[str]
    transitions: int
    functoriality_checks: int
    passed: bool
    error: Optional[dict] = None


class EvalReport(BaseModel):
    weight: str
    x: str
    y: str
    result: str
    fiber: str
    coordinates: list[str]
    combination: Optional[str] = None


class FiberCertificate(BaseModel):
    subspace: str
    size: int
    certificate: str = Field(..., description="exhaustive-wall-search or cancellative-connected")
    open: bool
    cancellative: bool


class AffinePlonkaReport(BaseModel):
    modulus: int
    dimension: int
    k: str
    subspace_count: int
    coset_count: int
    fiber_sizes: list[int]
    functoriality_checks: int
    operation_checks: int
    homomorphism_ok: bool
    passed: bool
    witnesses: list[dict[str, str]] = Field(default_factory=list)


class ProjectiveReplicaReport(BaseModel):
    modulus: int
    dimension: int
    weights: list[str]
    replica_size: int
    surjective: bool
    homomorphism_ok: bool
    isomorphic_to_projective_space: bool
    fibers: list[FiberCertificate]
    passed: bool


class RationalCosetReport(BaseModel):
    ambient_dim: int
    family: list[str]
    functoriality_checks: int
    samples: int
    agreed: int
    passed: bool
    mismatches: list[dict[str, str]] = Field(default_factory=list)
