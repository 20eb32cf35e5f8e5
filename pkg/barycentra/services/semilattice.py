"""Finite join-semilattices: validation, homomorphisms, isomorphism, DOT."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from barycentra.core.errors import HomomorphismError, SemilatticeAxiomError
from barycentra.schemas.inputs import SemilatticeSpec
from barycentra.services.models import BarycentricModel, Scalar

logger = logging.getLogger(__name__)

JoinTable = dict[tuple[str, str], str]


def hasse_dot(nodes: Iterable[str], edges: Iterable[tuple[str, str]], name: str = "semilattice") -> str:
    """Render a Hasse diagram, bottom to top, with sorted nodes and edges."""
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for node in sorted(nodes):
        lines.append(f"  {_quote(node)};")
    for lower, upper in sorted(edges):
        lines.append(f"  {_quote(lower)} -> {_quote(upper)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True)
class FiniteSemilattice:
    """A validated finite join-semilattice with opaque string labels."""

    elements: tuple[str, ...]
    table: Mapping[tuple[str, str], str] = field(repr=False)

    @classmethod
    def from_join_table(
        cls,
        elements: Sequence[str],
        table: Union[Mapping[tuple[str, str], str], Iterable[Sequence[str]]],
    ) -> "FiniteSemilattice":
        """Validate a join table given as a mapping or as [a, b, a∨b] triples.

        A missing (b, a) entry is read from (a, b) and a missing (a, a) as a.
        """
        labels = tuple(elements)
        if len(set(labels)) != len(labels):
            raise SemilatticeAxiomError("Duplicate element labels", witness={"elements": list(labels)})
        known = set(labels)
        entries = table.items() if isinstance(table, Mapping) else (((a, b), c) for a, b, c in table)
        join: JoinTable = {}
        for (a, b), c in entries:
            for label in (a, b, c):
                if label not in known:
                    raise SemilatticeAxiomError(
                        f"Join table mentions unknown element {label!r}", witness={"element": label}
                    )
            if join.get((a, b), c) != c:
                raise SemilatticeAxiomError(
                    f"Conflicting entries for {a} ∨ {b}",
                    witness={"a": a, "b": b, "values": [join[(a, b)], c]},
                )
            join[(a, b)] = c
        for a, b in itertools.product(labels, repeat=2):
            if (a, b) in join:
                continue
            if a == b:
                join[(a, a)] = a
            elif (b, a) in join:
                join[(a, b)] = join[(b, a)]
            else:
                raise SemilatticeAxiomError(
                    f"Join table has no entry for {a} ∨ {b}", witness={"a": a, "b": b}
                )
        _validate_axioms(labels, join)
        return cls(labels, join)

    @classmethod
    def from_spec(cls, spec: SemilatticeSpec) -> "FiniteSemilattice":
        return cls.from_join_table(spec.elements, spec.join)

    def join(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def join_all(self, items: Iterable[str]) -> str:
        items = list(items)
        result = items[0]
        for item in items[1:]:
            result = self.join(result, item)
        return result

    def leq(self, a: str, b: str) -> bool:
        return self.join(a, b) == b

    def up_set(self, a: str) -> list[str]:
        return [b for b in self.elements if self.leq(a, b)]

    def down_set(self, a: str) -> list[str]:
        return [b for b in self.elements if self.leq(b, a)]

    def covers(self) -> list[tuple[str, str]]:
        """Pairs (a, b) with a < b and nothing strictly between."""
        result = []
        for a, b in itertools.permutations(self.elements, 2):
            if not self.leq(a, b):
                continue
            if any(
                c not in (a, b) and self.leq(a, c) and self.leq(c, b) for c in self.elements
            ):
                continue
            result.append((a, b))
        return sorted(result)

    @property
    def top(self) -> str:
        return self.join_all(self.elements)

    def minimal_elements(self) -> list[str]:
        return [a for a in self.elements if self.down_set(a) == [a]]

    def join_from_order(self) -> JoinTable:
        """Rebuild the join table from the induced order alone."""
        table: JoinTable = {}
        for a, b in itertools.product(self.elements, repeat=2):
            bounds = [c for c in self.elements if self.leq(a, c) and self.leq(b, c)]
            least = [c for c in bounds if all(self.leq(c, d) for d in bounds)]
            table[(a, b)] = least[0]
        return table

    def relabel(self, mapping: Mapping[str, str]) -> "FiniteSemilattice":
        return FiniteSemilattice.from_join_table(
            [mapping[a] for a in self.elements],
            {(mapping[a], mapping[b]): mapping[c] for (a, b), c in self.table.items()},
        )

    def to_dot(self, name: str = "semilattice") -> str:
        return hasse_dot(self.elements, self.covers(), name)

    def to_dict(self) -> dict:
        """JSON form: elements plus one triple per unordered pair."""
        triples = []
        for i, a in enumerate(self.elements):
            for b in self.elements[i:]:
                triples.append([a, b, self.join(a, b)])
        return {"elements": list(self.elements), "join": triples}

    def __len__(self) -> int:
        return len(self.elements)


def _validate_axioms(labels: Sequence[str], join: JoinTable) -> None:
    for a in labels:
        if join[(a, a)] != a:
            raise SemilatticeAxiomError(
                f"Idempotence fails: {a} ∨ {a} = {join[(a, a)]}", witness={"axiom": "idempotence", "a": a}
            )
    for a, b in itertools.combinations(labels, 2):
        if join[(a, b)] != join[(b, a)]:
            raise SemilatticeAxiomError(
                f"Commutativity fails: {a} ∨ {b} = {join[(a, b)]} but {b} ∨ {a} = {join[(b, a)]}",
                witness={"axiom": "commutativity", "a": a, "b": b},
            )
    for a, b, c in itertools.product(labels, repeat=3):
        left = join[(join[(a, b)], c)]
        right = join[(a, join[(b, c)])]
        if left != right:
            raise SemilatticeAxiomError(
                f"Associativity fails on ({a}, {b}, {c})",
                witness={"axiom": "associativity", "a": a, "b": b, "c": c},
            )


def from_covers(elements: Sequence[str], covers: Iterable[tuple[str, str]]) -> FiniteSemilattice:
    """Build a semilattice from its Hasse diagram; every pair needs a least upper bound."""
    labels = list(elements)
    above = {a: {a} for a in labels}
    changed = True
    edges = list(covers)
    while changed:
        changed = False
        for lower, upper in edges:
            for a in labels:
                if lower in above[a] and not above[upper] <= above[a]:
                    above[a] |= above[upper]
                    changed = True
    table: JoinTable = {}
    for a, b in itertools.product(labels, repeat=2):
        bounds = above[a] & above[b]
        least = [c for c in bounds if bounds <= above[c]]
        if len(least) != 1:
            raise SemilatticeAxiomError(
                f"{a} and {b} have no least upper bound", witness={"a": a, "b": b}
            )
        table[(a, b)] = least[0]
    return FiniteSemilattice.from_join_table(labels, table)


def chain(n: int, labels: Optional[Sequence[str]] = None) -> FiniteSemilattice:
    """The n-element chain; labels default to "0" < "1" < ..."""
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    return FiniteSemilattice.from_join_table(
        labels,
        {(a, b): labels[max(i, j)] for (i, a), (j, b) in itertools.product(enumerate(labels), repeat=2)},
    )


# Isomorphism


@dataclass(frozen=True)
class IsomorphismResult:
    """Truthy iff an isomorphism was found; ``mapping`` then holds one."""

    mapping: Optional[dict[str, str]] = None

    def __bool__(self) -> bool:
        return self.mapping is not None


def _signature(s: FiniteSemilattice, a: str) -> tuple[int, int]:
    return len(s.down_set(a)), len(s.up_set(a))


def is_isomorphic(s: FiniteSemilattice, t: FiniteSemilattice) -> IsomorphismResult:
    """Backtracking search over signature-compatible bijections."""
    if len(s) != len(t) or len(s.covers()) != len(t.covers()):
        return IsomorphismResult()
    s_sig = {a: _signature(s, a) for a in s.elements}
    t_sig = {b: _signature(t, b) for b in t.elements}
    if sorted(s_sig.values()) != sorted(t_sig.values()):
        return IsomorphismResult()

    order = sorted(s.elements, key=lambda a: (s_sig[a], a))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(a: str) -> bool:
        # Check every triple b, c, b∨c that ``a`` just completed.
        for b, c in itertools.product(mapping, repeat=2):
            joined = s.join(b, c)
            if a not in (b, c, joined) or joined not in mapping:
                continue
            if mapping[joined] != t.join(mapping[b], mapping[c]):
                return False
        return True

    def extend(position: int) -> bool:
        if position == len(order):
            return True
        a = order[position]
        for b in t.elements:
            if b in used or t_sig[b] != s_sig[a]:
                continue
            mapping[a] = b
            used.add(b)
            if consistent(a) and extend(position + 1):
                return True
            del mapping[a]
            used.discard(b)
        return False

    if extend(0):
        return IsomorphismResult(dict(mapping))
    return IsomorphismResult()


# Homomorphisms


@dataclass(frozen=True)
class SemilatticeHom:
    """A validated join-preserving map between finite semilattices."""

    source: FiniteSemilattice
    target: FiniteSemilattice
    mapping: Mapping[str, str]

    def __post_init__(self):
        for a in self.source.elements:
            if a not in self.mapping or self.mapping[a] not in self.target.elements:
                raise HomomorphismError(
                    f"Map is not defined into the target at {a}", witness={"element": a}
                )
        for a, b in itertools.combinations_with_replacement(self.source.elements, 2):
            lhs = self.mapping[self.source.join(a, b)]
            rhs = self.target.join(self.mapping[a], self.mapping[b])
            if lhs != rhs:
                raise HomomorphismError(
                    f"Map does not preserve {a} ∨ {b}",
                    witness={"a": a, "b": b, "image_of_join": lhs, "join_of_images": rhs},
                )

    def __call__(self, a: str) -> str:
        return self.mapping[a]

    def image(self) -> list[str]:
        seen = {self.mapping[a] for a in self.source.elements}
        return [b for b in self.target.elements if b in seen]

    @property
    def is_surjective(self) -> bool:
        return len(self.image()) == len(self.target)


# Iterated semilattices


class SemilatticeModel(BarycentricModel):
    """A semilattice where every p̲ is the join."""

    def __init__(self, semilattice: FiniteSemilattice, name: str = "semilattice"):
        self.semilattice = semilattice
        self.name = name

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> list[str]:
        return list(self.semilattice.elements)

    def contains(self, element) -> bool:
        return element in self.semilattice.elements

    def operate(self, weight: Scalar, x: str, y: str) -> str:
        return self.semilattice.join(x, y)

    def sample(self, rng: random.Random) -> str:
        return rng.choice(self.semilattice.elements)

    def generators(self) -> list[str]:
        return list(self.semilattice.elements)

    def describe(self) -> dict:
        return {**super().describe(), "kind": "semilattice", "size": len(self.semilattice)}


def as_iterated_barycentric(s: FiniteSemilattice, name: str = "semilattice") -> SemilatticeModel:
    return SemilatticeModel(s, name)
