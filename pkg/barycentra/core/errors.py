"""Error hierarchy.

Errors split into two families that the CLI maps to exit codes: input errors
(malformed or out-of-domain data, exit 2) and structure errors (a construction
was well-formed but violates an algebraic requirement, exit 1). Errors that
come with a counterexample keep it on ``witness`` as a JSON-ready dict.
"""
from typing import Any, Optional


class BarycentraError(Exception):
    """Base class for every library error."""

    def __init__(self, message: str, witness: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"error": type(self).__name__, "message": self.message}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


# Input errors (exit code 2)


class InputError(BarycentraError):
    """Malformed or out-of-domain input."""


class DimensionMismatchError(InputError):
    """Vectors or points of different dimensions were combined."""


class ModulusMismatchError(InputError):
    """Field elements over different primes were combined."""


class WeightDomainError(InputError):
    """A weight left the legal scalar domain (e.g. escaped ]0,1[)."""


class DuplicateVertexError(InputError):
    """A polytope vertex list repeats a point."""


class NonExtremeVertexError(InputError):
    """A listed vertex lies in the hull of the other vertices."""


class PointOutsideError(InputError):
    """A point does not belong to the carrier it was used with."""


class SemilatticeAxiomError(InputError):
    """A join table violates idempotence, commutativity or associativity."""


class UnknownBuiltinError(InputError):
    """No built-in model with that name."""


class UnknownLawError(InputError):
    """No law or law group with that name."""


class SizeBoundError(InputError):
    """The requested structure exceeds the desk-scale bound."""


class InfiniteCarrierError(InputError):
    """Exhaustive enumeration was requested on an infinite carrier."""


class UnsupportedModelError(InputError):
    """The model kind does not support the requested computation."""


class FamilyNotJoinClosedError(InputError):
    """A family of subspaces is missing the join of two members."""


# Structure errors (exit code 1)


class StructureError(BarycentraError):
    """A well-formed construction violates an algebraic requirement."""


class PlonkaStructureError(StructureError):
    """A Płonka sum failed validation."""


class FunctorialityError(PlonkaStructureError):
    """Two transition paths between the same fibers disagree."""


class TransitionImageError(PlonkaStructureError):
    """A transition maps a generator outside its target fiber."""


class MissingTransitionError(PlonkaStructureError):
    """A comparable pair has no transition and none can be composed."""


class ReplicaConsistencyError(StructureError):
    """Class joins depend on the chosen representatives."""


class SubalgebraClosureError(StructureError):
    """A subalgebra predicate is not closed under the operations."""


class HomomorphismError(StructureError):
    """A map fails to preserve the operations."""
