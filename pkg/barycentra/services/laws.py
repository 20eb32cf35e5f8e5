"""Terms, identities and semantic law checking against any model."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from barycentra.core.config import settings
from barycentra.core.errors import (
    InputError,
    SizeBoundError,
    UnknownLawError,
    WeightDomainError,
)
from barycentra.core.scalar import FieldElement, Weight
from barycentra.schemas.reports import CheckReport, Counterexample, WitnessTriple
from barycentra.services.models import (
    BarycentricModel,
    Element,
    RawScalar,
    Scalar,
    ScalarKind,
)

logger = logging.getLogger(__name__)


# Weight expressions


@dataclass(frozen=True)
class WConst:
    value: Union[Fraction, int]


@dataclass(frozen=True)
class WVar:
    name: str


@dataclass(frozen=True)
class WDual:
    """r∘p."""
    left: "WeightExpr"
    right: "WeightExpr"


@dataclass(frozen=True)
class WComplement:
    """1 - p."""
    arg: "WeightExpr"


@dataclass(frozen=True)
class WQuotient:
    numerator: "WeightExpr"
    denominator: "WeightExpr"


@dataclass(frozen=True)
class WMean:
    """r̲(p, q) = (1-r)·p + r·q evaluated on weights."""
    r: "WeightExpr"
    left: "WeightExpr"
    right: "WeightExpr"


WeightExpr = Union[WConst, WVar, WDual, WComplement, WQuotient, WMean]


# Terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Node:
    weight: WeightExpr
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Para:
    """The ternary parallelogram operation P(u, v, w) = u - v + w."""
    first: "Term"
    second: "Term"
    third: "Term"


Term = Union[Var, Node, Para]


def op(weight: Union[WeightExpr, Fraction, int, str], left: Term, right: Term) -> Node:
    """Build ``weight(left, right)``; bare numbers become constants, strings variables."""
    if isinstance(weight, str):
        weight = WVar(weight)
    elif isinstance(weight, (Fraction, int)):
        weight = WConst(weight)
    return Node(weight, left, right)


def element_variables(term: Term) -> frozenset[str]:
    if isinstance(term, Var):
        return frozenset({term.name})
    if isinstance(term, Node):
        return element_variables(term.left) | element_variables(term.right)
    return element_variables(term.first) | element_variables(term.second) | element_variables(term.third)


def _expr_variables(expr: WeightExpr) -> frozenset[str]:
    if isinstance(expr, WVar):
        return frozenset({expr.name})
    if isinstance(expr, WConst):
        return frozenset()
    if isinstance(expr, WComplement):
        return _expr_variables(expr.arg)
    if isinstance(expr, WQuotient):
        return _expr_variables(expr.numerator) | _expr_variables(expr.denominator)
    if isinstance(expr, WMean):
        return _expr_variables(expr.r) | _expr_variables(expr.left) | _expr_variables(expr.right)
    return _expr_variables(expr.left) | _expr_variables(expr.right)


def weight_variables(term: Term) -> frozenset[str]:
    if isinstance(term, Var):
        return frozenset()
    if isinstance(term, Node):
        return _expr_variables(term.weight) | weight_variables(term.left) | weight_variables(term.right)
    return weight_variables(term.first) | weight_variables(term.second) | weight_variables(term.third)


def uses_parallelogram(term: Term) -> bool:
    if isinstance(term, Para):
        return True
    if isinstance(term, Node):
        return uses_parallelogram(term.left) or uses_parallelogram(term.right)
    return False


def render_expr(expr: WeightExpr) -> str:
    if isinstance(expr, WConst):
        value = expr.value
        return str(value) if not isinstance(value, Fraction) or value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(expr, WVar):
        return expr.name
    if isinstance(expr, WDual):
        return f"({render_expr(expr.left)}∘{render_expr(expr.right)})"
    if isinstance(expr, WComplement):
        return f"(1-{render_expr(expr.arg)})"
    if isinstance(expr, WQuotient):
        return f"({render_expr(expr.numerator)}/{render_expr(expr.denominator)})"
    return f"{render_expr(expr.r)}({render_expr(expr.left)},{render_expr(expr.right)})"


def render_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Node):
        return f"{render_expr(term.weight)}[{render_term(term.left)},{render_term(term.right)}]"
    return f"P({render_term(term.first)},{render_term(term.second)},{render_term(term.third)})"


# Identities


@dataclass(frozen=True)
class Identity:
    name: str
    lhs: Term
    rhs: Term
    weight_variables: tuple[str, ...]
    element_variables: tuple[str, ...]
    scope: frozenset[ScalarKind] = frozenset({ScalarKind.RATIONAL, ScalarKind.FIELD})
    groups: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        _check_declared(self.name, [self.lhs, self.rhs], self.weight_variables, self.element_variables)

    @property
    def terms(self) -> list[Term]:
        return [self.lhs, self.rhs]

    def render(self) -> str:
        return f"{render_term(self.lhs)} = {render_term(self.rhs)}"


@dataclass(frozen=True)
class QuasiIdentity:
    name: str
    premises: tuple[tuple[Term, Term], ...]
    conclusion: tuple[Term, Term]
    weight_variables: tuple[str, ...]
    element_variables: tuple[str, ...]
    scope: frozenset[ScalarKind] = frozenset({ScalarKind.RATIONAL})
    groups: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        terms = [t for pair in self.premises for t in pair] + list(self.conclusion)
        _check_declared(self.name, terms, self.weight_variables, self.element_variables)

    @property
    def terms(self) -> list[Term]:
        return [t for pair in self.premises for t in pair] + list(self.conclusion)

    def render(self) -> str:
        premises = " & ".join(f"{render_term(a)} = {render_term(b)}" for a, b in self.premises)
        return f"{premises} => {render_term(self.conclusion[0])} = {render_term(self.conclusion[1])}"


Law = Union[Identity, QuasiIdentity]


def _check_declared(name: str, terms: Sequence[Term], weights: Sequence[str], elements: Sequence[str]) -> None:
    used_elements = frozenset().union(*(element_variables(t) for t in terms))
    used_weights = frozenset().union(*(weight_variables(t) for t in terms))
    undeclared = (used_elements - set(elements)) | (used_weights - set(weights))
    if undeclared:
        raise InputError(
            f"Law {name} uses undeclared variables {sorted(undeclared)}",
            witness={"law": name, "undeclared": ",".join(sorted(undeclared))},
        )


def is_regular(identity: Identity) -> bool:
    """True iff both sides use the same element variables."""
    return element_variables(identity.lhs) == element_variables(identity.rhs)


_x, _y, _z, _t = Var("x"), Var("y"), Var("z"), Var("t")
_p, _r, _q = WVar("p"), WVar("r"), WVar("q")
_RATIONAL = frozenset({ScalarKind.RATIONAL})
_FIELD = frozenset({ScalarKind.FIELD})
_BOTH = frozenset({ScalarKind.RATIONAL, ScalarKind.FIELD})


def builtin_identities() -> list[Law]:
    """The law catalogue, each entry tagged with the scalars it applies to."""
    return [
        Identity(
            "idempotence", op(_p, _x, _x), _x, ("p",), ("x",), _BOTH, ("barycentric", "affine"),
            "p(x,x) = x",
        ),
        Identity(
            "skew-commutativity", op(_p, _x, _y), op(WComplement(_p), _y, _x), ("p",), ("x", "y"),
            _BOTH, ("barycentric",), "p(x,y) = (1-p)(y,x)",
        ),
        Identity(
            "skew-associativity",
            op(_p, op(_r, _x, _y), _z),
            op(WDual(_r, _p), _x, op(WQuotient(_p, WDual(_r, _p)), _y, _z)),
            ("p", "r"), ("x", "y", "z"), _RATIONAL, ("barycentric",),
            "p(r(x,y),z) = (r∘p)(x, (p/(r∘p))(y,z))",
        ),
        Identity(
            "entropicity",
            op(_p, op(_r, _x, _y), op(_r, _z, _t)),
            op(_r, op(_p, _x, _z), op(_p, _y, _t)),
            ("p", "r"), ("x", "y", "z", "t"), _BOTH, ("barycentric", "affine"),
            "p(r(x,y),r(z,t)) = r(p(x,z),p(y,t))",
        ),
        Identity(
            "projection-left", op(0, _x, _y), _x, (), ("x", "y"), _FIELD, ("affine",),
            "0(x,y) = x",
        ),
        Identity(
            "projection-right", op(1, _y, _x), _x, (), ("x", "y"), _FIELD, ("affine",),
            "1(y,x) = x",
        ),
        Identity(
            "mean-composition",
            op(_r, op(_p, _x, _y), op(_q, _x, _y)),
            op(WMean(_r, _p, _q), _x, _y),
            ("p", "q", "r"), ("x", "y"), _BOTH, ("affine",),
            "r(p(x,y),q(x,y)) = (r(p,q))(x,y)",
        ),
        Identity(
            "parallelogram", Para(_x, _y, _z), op(2, _y, op(Fraction(1, 2), _x, _z)),
            (), ("x", "y", "z"), _FIELD, ("affine",),
            "P(u,v,w) = 2(v, 2^-1(u,w))",
        ),
        Identity(
            "iterated-semilattice", op(_p, _x, _y), op(_r, _x, _y), ("p", "r"), ("x", "y"),
            _RATIONAL, ("semilattice",), "p(x,y) = r(x,y)",
        ),
        QuasiIdentity(
            "cancellativity",
            ((op(_p, _x, _y), op(_p, _x, _z)),),
            (_y, _z),
            ("p",), ("x", "y", "z"), _RATIONAL, ("cancellativity",),
            "p(x,y) = p(x,z) => y = z",
        ),
    ]


LAW_GROUPS = ("barycentric", "affine", "semilattice", "cancellativity")


def resolve_laws(names: Iterable[str]) -> list[Law]:
    """Expand law names and group names into catalogue entries, keeping order."""
    catalogue = builtin_identities()
    by_name = {law.name: law for law in catalogue}
    resolved: list[Law] = []
    for name in names:
        if name in LAW_GROUPS:
            members = [law for law in catalogue if name in law.groups]
        elif name in by_name:
            members = [by_name[name]]
        else:
            raise UnknownLawError(
                f"Unknown law {name!r}",
                witness={"law": name, "known": ",".join([*LAW_GROUPS, *by_name])},
            )
        resolved.extend(law for law in members if law not in resolved)
    return resolved


# Evaluation


def eval_weight(expr: WeightExpr, model: BarycentricModel, weights: dict[str, Scalar]) -> RawScalar:
    if isinstance(expr, WConst):
        return model.raw_scalar(expr.value)
    if isinstance(expr, WVar):
        if expr.name not in weights:
            raise InputError(f"Weight variable {expr.name} is unassigned")
        return model.raw_scalar(weights[expr.name])
    if isinstance(expr, WDual):
        r = eval_weight(expr.left, model, weights)
        p = eval_weight(expr.right, model, weights)
        return r + p - r * p
    if isinstance(expr, WComplement):
        return model.one() - eval_weight(expr.arg, model, weights)
    if isinstance(expr, WQuotient):
        denominator = eval_weight(expr.denominator, model, weights)
        if denominator == 0 or (isinstance(denominator, FieldElement) and denominator.residue == 0):
            raise WeightDomainError("Weight quotient by zero")
        return eval_weight(expr.numerator, model, weights) / denominator
    r = eval_weight(expr.r, model, weights)
    left = eval_weight(expr.left, model, weights)
    right = eval_weight(expr.right, model, weights)
    return (model.one() - r) * left + r * right


def _eval(term: Term, model: BarycentricModel, assignment: dict[str, Element], weights: dict[str, Scalar]) -> Element:
    if isinstance(term, Var):
        if term.name not in assignment:
            raise InputError(f"Element variable {term.name} is unassigned")
        return assignment[term.name]
    if isinstance(term, Node):
        weight = model.admit_weight(eval_weight(term.weight, model, weights))
        return model.operate(
            weight,
            _eval(term.left, model, assignment, weights),
            _eval(term.right, model, assignment, weights),
        )
    return model.parallelogram(
        _eval(term.first, model, assignment, weights),
        _eval(term.second, model, assignment, weights),
        _eval(term.third, model, assignment, weights),
    )


def eval_term(
    term: Term,
    model: BarycentricModel,
    assignment: dict[str, Element],
    weights: Optional[dict[str, Scalar]] = None,
) -> Element:
    """Evaluate ``term`` bottom-up with the model's operations."""
    for element in assignment.values():
        model.validate(element)
    return _eval(term, model, assignment, weights or {})


# Strategies


@dataclass(frozen=True)
class Exhaustive:
    def describe(self) -> str:
        return "exhaustive"


@dataclass(frozen=True)
class Sampled:
    n: int = field(default_factory=lambda: settings.sample_size)
    seed: int = field(default_factory=lambda: settings.seed)

    def describe(self) -> str:
        return f"sampled({self.n}, seed {self.seed})"


Strategy = Union[Exhaustive, Sampled]


def _guard_exhaustive(n_elements: int, n_weights: int, element_vars: Sequence[str], weight_vars: Sequence[str]) -> int:
    total = n_elements ** len(element_vars) * n_weights ** len(weight_vars)
    if total > settings.max_assignments:
        raise SizeBoundError(
            f"Exhaustive check needs {total} assignments (bound {settings.max_assignments})",
            witness={"assignments": str(total)},
        )
    return total


def _assignments(
    model: BarycentricModel,
    element_vars: Sequence[str],
    weight_vars: Sequence[str],
    strategy: Strategy,
) -> Iterator[tuple[dict[str, Element], dict[str, Scalar]]]:
    if isinstance(strategy, Exhaustive):
        elements = model.elements()
        weights = model.weight_values()
        _guard_exhaustive(len(elements), len(weights), element_vars, weight_vars)
        for weight_values in itertools.product(weights, repeat=len(weight_vars)):
            weight_map = dict(zip(weight_vars, weight_values))
            for element_values in itertools.product(elements, repeat=len(element_vars)):
                yield dict(zip(element_vars, element_values)), weight_map
        return
    rng = random.Random(strategy.seed)
    for _ in range(strategy.n):
        assignment = {name: model.sample(rng) for name in element_vars}
        weight_map = {name: model.sample_weight(rng) for name in weight_vars}
        yield assignment, weight_map


class _TabledEvaluator:
    """Evaluates a term on every element assignment at once.

    Elements are replaced by their index in ``model.elements()`` and each operation by its
    table of result indices, built once per weight. Variable ``i`` varies along axis ``i``,
    so flat C order matches ``itertools.product`` order.
    """

    def __init__(self, model: BarycentricModel, element_vars: Sequence[str]):
        self.model = model
        self.elements = model.elements()
        self.index = {element: i for i, element in enumerate(self.elements)}
        m = len(self.elements)
        self.shape = (m,) * len(element_vars)
        self.axes = {}
        for position, name in enumerate(element_vars):
            axis_shape = [1] * len(element_vars)
            axis_shape[position] = m
            self.axes[name] = np.arange(m).reshape(axis_shape)
        self._tables: dict[Scalar, np.ndarray] = {}
        self._parallelogram: Optional[np.ndarray] = None

    def table(self, weight: Scalar) -> np.ndarray:
        if weight not in self._tables:
            self._tables[weight] = np.array(
                [[self.index[self.model.operate(weight, x, y)] for y in self.elements] for x in self.elements],
                dtype=np.intp,
            )
        return self._tables[weight]

    def parallelogram_table(self) -> np.ndarray:
        if self._parallelogram is None:
            self._parallelogram = np.array(
                [
                    [[self.index[self.model.parallelogram(u, v, w)] for w in self.elements] for v in self.elements]
                    for u in self.elements
                ],
                dtype=np.intp,
            )
        return self._parallelogram

    def evaluate(self, term: Term, weights: dict[str, Scalar]) -> np.ndarray:
        if isinstance(term, Var):
            return self.axes[term.name]
        if isinstance(term, Node):
            weight = self.model.admit_weight(eval_weight(term.weight, self.model, weights))
            return self.table(weight)[self.evaluate(term.left, weights), self.evaluate(term.right, weights)]
        return self.parallelogram_table()[
            self.evaluate(term.first, weights),
            self.evaluate(term.second, weights),
            self.evaluate(term.third, weights),
        ]

    def full(self, values: np.ndarray) -> np.ndarray:
        return np.broadcast_to(values, self.shape)


def _check_identity_tabled(model: BarycentricModel, law: Identity, report: CheckReport) -> CheckReport:
    """Exhaustive check of an identity on a finite model through operation tables."""
    weights = model.weight_values()
    evaluator = _TabledEvaluator(model, law.element_variables)
    _guard_exhaustive(len(evaluator.elements), len(weights), law.element_variables, law.weight_variables)
    block = int(np.prod(evaluator.shape, dtype=np.int64))
    for weight_values in itertools.product(weights, repeat=len(law.weight_variables)):
        weight_map = dict(zip(law.weight_variables, weight_values))
        try:
            lhs = evaluator.full(evaluator.evaluate(law.lhs, weight_map))
            rhs = evaluator.full(evaluator.evaluate(law.rhs, weight_map))
        except WeightDomainError:
            report.trials += block
            report.skipped += block
            continue
        mismatches = np.argwhere(lhs != rhs)
        if len(mismatches):
            position = tuple(int(i) for i in mismatches[0])
            offset = int(np.ravel_multi_index(position, evaluator.shape)) if position else 0
            report.trials += offset + 1
            assignment = {
                name: evaluator.elements[i] for name, i in zip(law.element_variables, position)
            }
            report.result = "fail"
            report.counterexample = _counterexample(
                model,
                assignment,
                weight_map,
                evaluator.elements[lhs[position]],
                evaluator.elements[rhs[position]],
            )
            logger.debug("Law %s fails on %s: %s", law.name, model.name, report.counterexample)
            return report
        report.trials += block
    return report


def _counterexample(model, assignment, weights, lhs, rhs) -> Counterexample:
    return Counterexample(
        elements={k: model.render(v) for k, v in assignment.items()},
        weights={k: model.render_scalar(v) for k, v in weights.items()},
        lhs=model.render(lhs),
        rhs=model.render(rhs),
    )


def _applicable(model: BarycentricModel, law: Law) -> bool:
    if model.scalar_kind not in law.scope:
        return False
    if any(uses_parallelogram(t) for t in law.terms) and not model.supports_parallelogram:
        return False
    return True


def check_identity(model: BarycentricModel, law: Law, strategy: Optional[Strategy] = None) -> CheckReport:
    """Check a law on a model; returns pass, fail with counterexample, or not-applicable."""
    strategy = strategy or Sampled()
    report = CheckReport(law=law.name, model=model.name, strategy=strategy.describe(), result="pass")
    if not _applicable(model, law):
        report.result = "not-applicable"
        return report
    if isinstance(law, QuasiIdentity):
        return _check_quasi_identity(model, law, strategy, report)
    if isinstance(strategy, Exhaustive) and model.is_finite:
        return _check_identity_tabled(model, law, report)

    for assignment, weights in _assignments(model, law.element_variables, law.weight_variables, strategy):
        report.trials += 1
        try:
            lhs = _eval(law.lhs, model, assignment, weights)
            rhs = _eval(law.rhs, model, assignment, weights)
        except WeightDomainError:
            report.skipped += 1
            continue
        if lhs != rhs:
            report.result = "fail"
            report.counterexample = _counterexample(model, assignment, weights, lhs, rhs)
            logger.debug("Law %s fails on %s: %s", law.name, model.name, report.counterexample)
            return report
    return report


def _check_quasi_identity(model, law: QuasiIdentity, strategy: Strategy, report: CheckReport) -> CheckReport:
    if law.name == "cancellativity":
        weights = model.weight_values() if isinstance(strategy, Exhaustive) else _weight_sample(model, strategy)
        for weight in weights:
            report.trials += 1
            witness = find_cancellation_witness(model, weight, strategy)
            if witness is not None:
                report.result = "fail"
                report.counterexample = Counterexample(
                    elements={"x": witness.x, "y": witness.y, "z": witness.z},
                    weights={"p": witness.weight},
                    lhs=witness.image,
                    rhs=witness.image,
                )
                return report
        return report

    for assignment, weights in _assignments(model, law.element_variables, law.weight_variables, strategy):
        report.trials += 1
        try:
            premises = all(
                _eval(a, model, assignment, weights) == _eval(b, model, assignment, weights)
                for a, b in law.premises
            )
            if not premises:
                continue
            lhs = _eval(law.conclusion[0], model, assignment, weights)
            rhs = _eval(law.conclusion[1], model, assignment, weights)
        except WeightDomainError:
            report.skipped += 1
            continue
        if lhs != rhs:
            report.result = "fail"
            report.counterexample = _counterexample(model, assignment, weights, lhs, rhs)
            return report
    return report


def _weight_sample(model: BarycentricModel, strategy: Sampled) -> list[Scalar]:
    rng = random.Random(strategy.seed)
    weights = list(model.weight_values())
    while len(weights) < min(strategy.n, 20):
        weights.append(model.sample_weight(rng))
    return weights


# Cancellation witnesses


def _pool(model: BarycentricModel, strategy: Strategy) -> list[Element]:
    if isinstance(strategy, Exhaustive):
        return model.elements()
    rng = random.Random(strategy.seed)
    pool: list[Element] = []
    for element in model.generators():
        if element not in pool:
            pool.append(element)
    size = min(strategy.n, settings.witness_pool_size)
    for _ in range(size):
        element = model.sample(rng)
        if element not in pool:
            pool.append(element)
    return pool


def find_cancellation_witness(
    model: BarycentricModel, p: Scalar, strategy: Optional[Strategy] = None
) -> Optional[WitnessTriple]:
    """Search for x, y != z with p(x,y) = p(x,z)."""
    strategy = strategy or Sampled()
    pool = _pool(model, strategy)
    for x in pool:
        seen: dict[Element, Element] = {}
        for y in pool:
            image = model.operate(p, x, y)
            earlier = seen.get(image)
            if earlier is not None and earlier != y:
                return WitnessTriple(
                    weight=model.render_scalar(p),
                    x=model.render(x),
                    y=model.render(earlier),
                    z=model.render(y),
                    image=model.render(image),
                )
            seen.setdefault(image, y)
    return None


# Homomorphisms and algebra types


def check_homomorphism(
    source: BarycentricModel,
    target: BarycentricModel,
    h: Callable[[Element], Element],
    strategy: Optional[Strategy] = None,
    name: str = "homomorphism",
) -> CheckReport:
    """Check h(p(x,y)) = p(h(x), h(y)) with weights drawn from the source."""
    strategy = strategy or Sampled()
    report = CheckReport(
        law=name, model=f"{source.name} -> {target.name}", strategy=strategy.describe(), result="pass"
    )
    for assignment, weights in _assignments(source, ("x", "y"), ("p",), strategy):
        report.trials += 1
        x, y, p = assignment["x"], assignment["y"], weights["p"]
        lhs = h(source.operate(p, x, y))
        rhs = target.operate(p, h(x), h(y))
        if lhs != rhs:
            report.result = "fail"
            report.counterexample = Counterexample(
                elements={"x": source.render(x), "y": source.render(y)},
                weights={"p": source.render_scalar(p)},
                lhs=target.render(lhs),
                rhs=target.render(rhs),
            )
            return report
    return report


def classify_algebra_type(model: BarycentricModel, strategy: Optional[Strategy] = None) -> str:
    """geometric (cancellative), combinatorial (iterated semilattice) or mixed."""
    strategy = strategy or Sampled()
    by_name = {law.name: law for law in builtin_identities()}
    if check_identity(model, by_name["iterated-semilattice"], strategy).passed:
        return "combinatorial"
    if check_identity(model, by_name["cancellativity"], strategy).passed:
        return "geometric"
    return "mixed"
