"""Unit tests for terms, identities and semantic law checks."""
import itertools
import random
from fractions import Fraction

import pytest

from barycentra.core.config import settings
from barycentra.core.errors import (
    InfiniteCarrierError,
    InputError,
    SizeBoundError,
    UnknownLawError,
)
from barycentra.core.scalar import Weight, random_weight
from barycentra.services.affine import FiniteAffineModel, FiniteVectorSpace
from barycentra.services.builtins import (
    builtin,
    t_replica_semilattice,
    three_element_semilattice,
)
from barycentra.services.convex import PolytopeModel
from barycentra.services.laws import (
    LAW_GROUPS,
    Exhaustive,
    Identity,
    Sampled,
    Var,
    builtin_identities,
    check_homomorphism,
    check_identity,
    classify_algebra_type,
    eval_term,
    find_cancellation_witness,
    is_regular,
    op,
    render_term,
    resolve_laws,
)
from barycentra.services.semilattice import SemilatticeModel, chain, from_covers

F = Fraction


def _law(name):
    return next(law for law in builtin_identities() if law.name == name)


def _small_semilattices():
    """Iterated semilattices with up to five elements."""
    return [
        chain(1),
        chain(2),
        chain(3),
        chain(4),
        chain(5),
        three_element_semilattice(),
        from_covers("bxyt", [("b", "x"), ("b", "y"), ("x", "t"), ("y", "t")]),
        from_covers("abcd", [("a", "d"), ("b", "d"), ("c", "d")]),
        t_replica_semilattice(),
    ]


class TestCatalogue:
    """Test the law catalogue."""

    def test_names(self):
        """Test every catalogued law is present once."""
        names = [law.name for law in builtin_identities()]
        assert names == [
            "idempotence",
            "skew-commutativity",
            "skew-associativity",
            "entropicity",
            "projection-left",
            "projection-right",
            "mean-composition",
            "parallelogram",
            "iterated-semilattice",
            "cancellativity",
        ]

    def test_every_law_belongs_to_a_group(self):
        """Test group tags are known group names."""
        for law in builtin_identities():
            assert law.groups
            assert set(law.groups) <= set(LAW_GROUPS)

    def test_resolve_group_keeps_order_without_duplicates(self):
        """Test groups expand in catalogue order and repeats collapse."""
        laws = resolve_laws(["idempotence", "barycentric"])
        assert [law.name for law in laws] == [
            "idempotence",
            "skew-commutativity",
            "skew-associativity",
            "entropicity",
        ]

    def test_unknown_law(self):
        """Test unknown names fail with the known names as witness."""
        with pytest.raises(UnknownLawError) as exc:
            resolve_laws(["commutativity"])
        assert exc.value.witness["law"] == "commutativity"
        assert "entropicity" in exc.value.witness["known"]

    def test_undeclared_variable(self):
        """Test laws must declare every variable they use."""
        with pytest.raises(InputError):
            Identity("bad", op("p", Var("x"), Var("y")), Var("x"), (), ("x", "y"))

    def test_render(self):
        """Test the term syntax."""
        assert _law("idempotence").render() == "p[x,x] = x"
        assert render_term(op(F(1, 2), Var("x"), Var("y"))) == "1/2[x,y]"


class TestRegularity:
    """Test regular identities."""

    def test_barycentric_laws_are_regular(self):
        """Test both sides of each barycentric axiom use the same variables."""
        for law in resolve_laws(["barycentric"]):
            assert is_regular(law), law.name

    def test_projections_are_not_regular(self):
        """Test the projection identities drop a variable."""
        assert not is_regular(_law("projection-left"))
        assert not is_regular(_law("projection-right"))


class TestEvaluation:
    """Test term evaluation."""

    def test_eval_with_weight_variable(self, segment):
        """Test weight variables are read from the weight assignment."""
        model = PolytopeModel(segment)
        term = op("p", Var("x"), Var("y"))
        result = eval_term(term, model, {"x": (F(0),), "y": (F(1),)}, {"p": Weight(F(1, 4))})
        assert result == (F(1, 4),)

    def test_eval_rejects_outside_elements(self, segment):
        """Test assignments are validated against the carrier."""
        model = PolytopeModel(segment)
        with pytest.raises(InputError):
            eval_term(Var("x"), model, {"x": (F(2),)})

    def test_eval_unassigned_variable(self, segment):
        """Test unassigned variables are reported."""
        with pytest.raises(InputError):
            eval_term(op(F(1, 2), Var("x"), Var("y")), PolytopeModel(segment), {"x": (F(0),)})


class TestBarycentricAxioms:
    """Test the barycentric axioms on every built-in model."""

    STRATEGY = Sampled(1000, 7)

    def _assert_all_pass(self, model):
        for law in resolve_laws(["barycentric"]):
            report = check_identity(model, law, self.STRATEGY)
            assert report.passed, (law.name, report.counterexample)
            assert report.counterexample is None

    @pytest.mark.parametrize("fixture", ["segment", "triangle", "square"])
    def test_polytopes(self, request, fixture):
        """Test polytopes satisfy the axioms exactly."""
        self._assert_all_pass(PolytopeModel(request.getfixturevalue(fixture)))

    @pytest.mark.parametrize("name", ["t-algebra", "extended-line", "toy-biology"])
    def test_builtins(self, name):
        """Test Płonka-sum built-ins satisfy the axioms exactly."""
        self._assert_all_pass(builtin(name).model)

    def test_iterated_semilattices(self):
        """Test every small semilattice is a barycentric algebra."""
        for s in _small_semilattices():
            self._assert_all_pass(SemilatticeModel(s))

    def test_exhaustive_on_semilattice(self):
        """Test exhaustive checks range over every element and listed weight."""
        model = SemilatticeModel(three_element_semilattice())
        report = check_identity(model, _law("entropicity"), Exhaustive())
        assert report.passed
        assert report.trials == 5**2 * 3**4
        assert report.strategy == "exhaustive"

    def test_exhaustive_counterexample_is_first_failure(self):
        """Test the exhaustive check reports the first failing assignment in product order."""
        model = FiniteAffineModel(FiniteVectorSpace(3, 1))
        left_zero = Identity("left-zero", op("p", Var("x"), Var("y")), Var("x"), ("p",), ("x", "y"))
        report = check_identity(model, left_zero, Exhaustive())
        assert report.result == "fail"
        # p = 0 passes on all 9 pairs; p = 1 first fails at x = 0, y = 1
        assert report.trials == 9 + 2
        assert report.counterexample.weights == {"p": "1"}
        assert report.counterexample.elements == {"x": "0", "y": "1"}
        assert report.counterexample.lhs == "1"
        assert report.counterexample.rhs == "0"

    def test_exhaustive_matches_sequential_evaluation(self):
        """Test the tabled exhaustive check agrees with eval_term on every assignment."""
        model = FiniteAffineModel(FiniteVectorSpace(3, 1))
        law = _law("mean-composition")
        assert check_identity(model, law, Exhaustive()).passed
        elements = model.elements()
        for p, q, r in itertools.product(model.weight_values(), repeat=3):
            weights = {"p": p, "q": q, "r": r}
            for x, y in itertools.product(elements, repeat=2):
                assignment = {"x": x, "y": y}
                assert eval_term(law.lhs, model, assignment, weights) == eval_term(law.rhs, model, assignment, weights)

    def test_strategy_description(self, segment):
        """Test reports record the seeded strategy."""
        report = check_identity(PolytopeModel(segment), _law("idempotence"), Sampled(10, 3))
        assert report.strategy == "sampled(10, seed 3)"
        assert report.trials == 10


class TestScope:
    """Test laws outside a model's scalars are not applicable."""

    def test_field_laws_on_rational_model(self, segment):
        """Test projections and the parallelogram do not apply to ℚ-models."""
        model = PolytopeModel(segment)
        for name in ("projection-left", "projection-right", "parallelogram"):
            assert check_identity(model, _law(name)).result == "not-applicable"

    def test_rational_laws_on_field_model(self):
        """Test skew-associativity and cancellativity do not apply over GF(p)."""
        model = FiniteAffineModel(FiniteVectorSpace(3, 1))
        for name in ("skew-associativity", "cancellativity", "iterated-semilattice"):
            assert check_identity(model, _law(name), Exhaustive()).result == "not-applicable"

    def test_exhaustive_on_infinite_carrier(self, segment):
        """Test exhaustive checks need a finite carrier."""
        with pytest.raises(InfiniteCarrierError):
            check_identity(PolytopeModel(segment), _law("idempotence"), Exhaustive())

    def test_exhaustive_size_bound(self, monkeypatch):
        """Test the assignment guard stops oversized exhaustive checks."""
        monkeypatch.setattr(settings, "max_assignments", 10)
        with pytest.raises(SizeBoundError):
            check_identity(SemilatticeModel(chain(3)), _law("entropicity"), Exhaustive())


class TestSemilatticeLaws:
    """Test the iterated-semilattice identity."""

    def test_semilattice_passes(self):
        """Test all operations of a semilattice coincide."""
        report = check_identity(SemilatticeModel(chain(3)), _law("iterated-semilattice"))
        assert report.passed

    def test_segment_fails(self, segment):
        """Test the segment has distinct operations."""
        report = check_identity(PolytopeModel(segment), _law("iterated-semilattice"), Sampled(100, 7))
        assert report.result == "fail"
        assert report.counterexample.lhs != report.counterexample.rhs


class TestCancellativity:
    """Test cancellation witnesses."""

    def test_segment_is_cancellative(self, segment):
        """Test convex sets have no cancellation witness."""
        assert check_identity(PolytopeModel(segment), _law("cancellativity")).passed

    def test_three_element_semilattice_witness(self):
        """Test the witness a, b, c from the join table."""
        model = SemilatticeModel(three_element_semilattice(), "three-element")
        report = check_identity(model, _law("cancellativity"), Sampled(1000, 7))
        assert report.result == "fail"
        assert report.counterexample.elements == {"x": "a", "y": "b", "z": "c"}
        assert report.counterexample.lhs == "c"

    def test_t_algebra_fails(self, t_bundle):
        """Test T is not cancellative: the lower segment collapses onto m."""
        report = check_identity(t_bundle.model, _law("cancellativity"), Sampled(1000, 7))
        assert report.result == "fail"
        elements = report.counterexample.elements
        assert elements["x"].startswith("1:")
        assert elements["y"].startswith("0:")
        assert elements["z"].startswith("0:")
        assert elements["y"] != elements["z"]

    @pytest.mark.parametrize("name", ["t-algebra", "extended-line"])
    def test_witness_for_every_weight(self, name):
        """Test a witness turns up for each of twenty weights."""
        model = builtin(name).model
        rng = random.Random(7)
        weights = [Weight(w) for w in settings.weight_sample()]
        while len(weights) < 20:
            weights.append(random_weight(rng, 50))
        for weight in weights:
            witness = find_cancellation_witness(model, weight, Sampled(200, 7))
            assert witness is not None, weight
            assert witness.y != witness.z

    def test_exhaustive_witness_search(self):
        """Test the exhaustive pool is the whole carrier."""
        model = SemilatticeModel(chain(2))
        witness = find_cancellation_witness(model, Weight(F(1, 2)), Exhaustive())
        assert (witness.x, witness.y, witness.z, witness.image) == ("1", "0", "1", "1")


class TestHomomorphisms:
    """Test homomorphism checks between models."""

    def test_segment_onto_three_element(self):
        """Test h(0)=a, h(1)=b, interior to c preserves every operation."""
        bundle = builtin("homomorphism-example")
        report = check_homomorphism(bundle.model, bundle.target, bundle.homomorphism, Sampled(1000, 7), "h")
        assert report.passed
        assert report.trials == 1000
        assert report.model == "segment -> three-element"

    def test_non_homomorphism(self):
        """Test a map sending the interior to b is rejected."""
        bundle = builtin("homomorphism-example")

        def h(point):
            return "a" if point == (F(0),) else "b"

        report = check_homomorphism(bundle.model, bundle.target, h, Sampled(1000, 7))
        assert report.result == "fail"
        assert report.counterexample is not None


class TestClassification:
    """Test geometric, combinatorial and mixed algebras."""

    def test_semilattice_is_combinatorial(self):
        """Test semilattices classify as combinatorial."""
        assert classify_algebra_type(SemilatticeModel(chain(3))) == "combinatorial"

    def test_polytope_is_geometric(self, triangle):
        """Test polytopes classify as geometric."""
        assert classify_algebra_type(PolytopeModel(triangle)) == "geometric"

    def test_t_algebra_is_mixed(self, t_bundle):
        """Test T is neither cancellative nor a semilattice."""
        assert classify_algebra_type(t_bundle.model) == "mixed"
