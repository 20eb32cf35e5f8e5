"""Built-in example algebras with their expected replicas."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from barycentra.core.errors import UnknownBuiltinError
from barycentra.services.convex import Polytope, PolytopeModel
from barycentra.services.models import BarycentricModel
from barycentra.services.plonka import (
    AffineFiber,
    PlonkaModel,
    PlonkaSubalgebraModel,
    PlonkaSum,
    PolytopeFiber,
    ReplicaResult,
    SingletonFiber,
    SumElement,
    TransitionMap,
    build,
    refined_replica,
    restrict,
)
from barycentra.services.semilattice import (
    FiniteSemilattice,
    SemilatticeHom,
    SemilatticeModel,
    chain,
    from_covers,
)


@dataclass
class BuiltinBundle:
    name: str
    description: str
    model: BarycentricModel
    expected_replica: FiniteSemilattice
    plonka_sum: Optional[PlonkaSum] = None
    member: Optional[Callable[[SumElement], bool]] = None
    homomorphism: Optional[Callable] = None
    target: Optional[BarycentricModel] = None

    def replica(self, seed: Optional[int] = None) -> ReplicaResult:
        """Refined replica of the sum, restricted to the subalgebra when there is one."""
        full = refined_replica(self.plonka_sum, seed=seed)
        if self.member is None:
            return full
        return restrict(self.plonka_sum, self.member, full, seed=seed, name=self.name)


def t_replica_semilattice() -> FiniteSemilattice:
    """a, b < c < e and d < e."""
    return from_covers("abcde", [("a", "c"), ("b", "c"), ("c", "e"), ("d", "e")])


def three_element_semilattice() -> FiniteSemilattice:
    return FiniteSemilattice.from_join_table(
        ["a", "b", "c"], [("a", "b", "c"), ("a", "c", "c"), ("b", "c", "c")]
    )


def t_presentation(lower=("α", "β"), upper=("m", "γ")) -> PlonkaSum:
    """Two segments over the 2-chain; the lower one collapses onto the upper endpoint m."""
    index = chain(2)
    fibers = {
        "0": PolytopeFiber(Polytope([[0], [2]], list(lower))),
        "1": PolytopeFiber(Polytope([[0], [2]], list(upper))),
    }
    collapse = TransitionMap.of("0", "1", [[0]], [0], 1)
    return build(index, fibers, [collapse])


def _drop_upper_start(element: SumElement) -> bool:
    return not (element.fiber == "1" and element.point == (Fraction(0),))


def t_algebra() -> BuiltinBundle:
    plonka_sum = t_presentation()
    return BuiltinBundle(
        name="t-algebra",
        description="Segment [α,β] glued below the half-open segment ]m,γ], m the midpoint of α and β",
        model=PlonkaSubalgebraModel(plonka_sum, _drop_upper_start, "t-algebra"),
        expected_replica=t_replica_semilattice(),
        plonka_sum=plonka_sum,
        member=_drop_upper_start,
    )


def toy_biology() -> BuiltinBundle:
    plonka_sum = t_presentation(lower=("A1", "A2"), upper=("mix", "B"))
    return BuiltinBundle(
        name="toy-biology",
        description="Subpopulations A1, A2 and B; A enters mixtures as mix, the uniform mix of A1 and A2",
        model=PlonkaSubalgebraModel(plonka_sum, _drop_upper_start, "toy-biology"),
        expected_replica=t_replica_semilattice(),
        plonka_sum=plonka_sum,
        member=_drop_upper_start,
    )


def extended_line_sum() -> PlonkaSum:
    index = chain(2, ["a", "b"])
    fibers = {"a": AffineFiber([0], [[1]]), "b": SingletonFiber("∞")}
    to_infinity = TransitionMap.of("a", "b", [], [], 1)
    return build(index, fibers, [to_infinity])


def extended_line() -> BuiltinBundle:
    plonka_sum = extended_line_sum()
    return BuiltinBundle(
        name="extended-line",
        description="The rational line with an absorbing point ∞",
        model=PlonkaModel(plonka_sum, "extended-line"),
        expected_replica=chain(2, ["a", "b"]),
        plonka_sum=plonka_sum,
    )


def segment_to_three_element(point) -> str:
    """h(0) = a, h(1) = b, interior ↦ c."""
    if point == (Fraction(0),):
        return "a"
    if point == (Fraction(1),):
        return "b"
    return "c"


def homomorphism_example() -> BuiltinBundle:
    segment = Polytope([[0], [1]])
    target = SemilatticeModel(three_element_semilattice(), "three-element")
    return BuiltinBundle(
        name="homomorphism-example",
        description="The segment [0,1] mapped onto a three-element semilattice; the image is not convex",
        model=PolytopeModel(segment, "segment"),
        expected_replica=three_element_semilattice(),
        plonka_sum=build(
            FiniteSemilattice.from_join_table(["0"], {}), {"0": PolytopeFiber(segment)}, []
        ),
        homomorphism=segment_to_three_element,
        target=target,
    )


_BUILTINS: dict[str, Callable[[], BuiltinBundle]] = {
    "t-algebra": t_algebra,
    "extended-line": extended_line,
    "toy-biology": toy_biology,
    "homomorphism-example": homomorphism_example,
}


def list_builtins() -> list[str]:
    return list(_BUILTINS)


def builtin(name: str) -> BuiltinBundle:
    factory = _BUILTINS.get(name)
    if factory is None:
        raise UnknownBuiltinError(
            f"Unknown built-in {name!r}", witness={"name": name, "known": ",".join(_BUILTINS)}
        )
    return factory()


# Alternative presentations of T


def t_five_fiber_presentation() -> PlonkaSum:
    """T as a sum over its replica: {α}, {β}, [α,β], {γ} and [m,γ]."""
    fibers = {
        "a": PolytopeFiber(Polytope([[0]], ["α"])),
        "b": PolytopeFiber(Polytope([[2]], ["β"])),
        "c": PolytopeFiber(Polytope([[0], [2]], ["α", "β"])),
        "d": PolytopeFiber(Polytope([[2]], ["γ"])),
        "e": PolytopeFiber(Polytope([[0], [2]], ["m", "γ"])),
    }
    transitions = [
        TransitionMap.of("a", "c", [[1]], [0], 1),
        TransitionMap.of("b", "c", [[1]], [0], 1),
        TransitionMap.of("c", "e", [[0]], [0], 1),
        TransitionMap.of("d", "e", [[1]], [0], 1),
    ]
    return build(t_replica_semilattice(), fibers, transitions)


def t_to_five_fiber(element: SumElement) -> SumElement:
    """Tag a T element with its class in the five-fiber presentation."""
    point = element.point
    if element.fiber == "0":
        if point == (Fraction(0),):
            return SumElement("a", point)
        if point == (Fraction(2),):
            return SumElement("b", point)
        return SumElement("c", point)
    if point == (Fraction(2),):
        return SumElement("d", point)
    return SumElement("e", point)


def t_replica_collapse() -> SemilatticeHom:
    """The replica of T onto the 2-chain: the lower segment to 0, the upper part to 1."""
    return SemilatticeHom(
        t_replica_semilattice(),
        chain(2),
        {"a": "0", "b": "0", "c": "0", "d": "1", "e": "1"},
    )
