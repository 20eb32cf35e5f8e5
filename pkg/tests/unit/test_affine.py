"""Unit tests for affine spaces, coset algebras and rational coset families."""
import itertools

import pytest

from barycentra.core.errors import (
    DimensionMismatchError,
    FamilyNotJoinClosedError,
    InputError,
    ModulusMismatchError,
    SizeBoundError,
    WeightDomainError,
)
from barycentra.core.scalar import FieldElement, field_vector
from barycentra.schemas.inputs import RationalFamilySpec
from barycentra.services.affine import (
    Coset,
    CosetModel,
    FiniteVectorSpace,
    Subspace,
    affine_replica_report,
    check_affine_identity_suite,
    enumerate_subspaces,
    parallelogram,
    projection_pi,
    rational_coset_demo,
    rational_family,
    subspace_join,
    subspace_semilattice,
    verify_plonka_structure,
    verify_replica_is_projective,
)
from barycentra.services.laws import Exhaustive, builtin_identities, check_identity
from barycentra.services.semilattice import FiniteSemilattice, chain, is_isomorphic


def _law(name):
    return next(law for law in builtin_identities() if law.name == name)


def _family(*bases):
    return RationalFamilySpec(ambient_dim=2, subspaces=[{"basis": basis} for basis in bases])


ORIGIN = []
X_AXIS = [["1", "0"]]
Y_AXIS = [["0", "1"]]
PLANE = [["1", "0"], ["0", "1"]]


class TestSpaces:
    """Test GF(p)ⁿ and the parallelogram."""

    @pytest.mark.parametrize("modulus", [2, 4, 9, 1])
    def test_bad_modulus(self, modulus):
        """Test only odd primes are accepted."""
        with pytest.raises(InputError):
            FiniteVectorSpace(modulus, 1)

    def test_size_bound(self):
        """Test spaces beyond the enumeration bound are refused."""
        with pytest.raises(SizeBoundError):
            FiniteVectorSpace(3, 9)
        assert FiniteVectorSpace(3, 8).size == 6561

    def test_mean(self, gf3_plane):
        """Test 2(x, y) = 2y - x over GF(3)."""
        assert gf3_plane.mean(2, (1, 0), (0, 1)) == (2, 2)
        assert gf3_plane.mean(0, (1, 0), (0, 1)) == (1, 0)

    def test_scalar_from_other_field(self, gf3_plane):
        """Test scalars must come from the space's field."""
        with pytest.raises(ModulusMismatchError):
            gf3_plane.element(FieldElement(2, 5))

    def test_parallelogram(self):
        """Test P(1, 2, 3) = 2 over GF(5)."""
        result = parallelogram(field_vector([1], 5), field_vector([2], 5), field_vector([3], 5))
        assert [c.residue for c in result] == [2]

    def test_parallelogram_dimension_mismatch(self):
        """Test arguments must share a dimension."""
        with pytest.raises(DimensionMismatchError):
            parallelogram(field_vector([1], 5), field_vector([2, 0], 5), field_vector([3], 5))


class TestSubspaces:
    """Test subspace enumeration and joins."""

    @pytest.mark.parametrize("modulus,dimension,count", [(3, 1, 2), (3, 2, 6), (5, 1, 2), (3, 3, 28)])
    def test_counts(self, modulus, dimension, count):
        """Test the number of subspaces."""
        subspaces = enumerate_subspaces(FiniteVectorSpace(modulus, dimension))
        assert len(subspaces) == count
        assert len(set(subspaces)) == count

    def test_enumeration_matches_spans(self, gf3_plane):
        """Test spans of all vector pairs give exactly the enumerated subspaces."""
        spans = {Subspace.span(gf3_plane, pair) for pair in itertools.product(gf3_plane.vectors(), repeat=2)}
        assert spans == set(enumerate_subspaces(gf3_plane))

    def test_canonical_form(self, gf3_plane):
        """Test equal subspaces compare equal."""
        assert Subspace.span(gf3_plane, [[2, 2]]) == Subspace.span(gf3_plane, [[1, 1], [2, 2]])
        assert Subspace.span(gf3_plane, [[2, 2]]).label == "span(1,1)"

    def test_join(self, gf3_plane):
        """Test two axes span the plane."""
        x = Subspace.span(gf3_plane, [[1, 0]])
        y = Subspace.span(gf3_plane, [[0, 1]])
        assert subspace_join(x, y).rank == 2
        assert subspace_join(x, x) == x

    def test_join_across_spaces(self, gf3_plane):
        """Test joins need a common parent space."""
        with pytest.raises(ModulusMismatchError):
            subspace_join(
                Subspace.span(gf3_plane, [[1, 0]]),
                Subspace.span(FiniteVectorSpace(5, 2), [[1, 0]]),
            )

    def test_semilattice(self, gf3_plane):
        """Test (L(V), ∨) has {0} at the bottom and four atoms."""
        s = subspace_semilattice(enumerate_subspaces(gf3_plane))
        assert len(s) == 6
        assert s.minimal_elements() == ["{0}"]
        assert len([a for b, a in s.covers() if b == "{0}"]) == 4


class TestCosets:
    """Test cosets and the lifted operations."""

    def test_canonical_representative(self, gf3_plane):
        """Test representatives have zero pivot coordinates."""
        line = Subspace.span(gf3_plane, [[1, 1]])
        coset = Coset.of(line, (2, 0))
        assert coset.representative == (0, 1)
        assert coset == Coset.of(line, (1, 2))
        assert coset.members() == frozenset({(0, 1), (1, 2), (2, 0)})
        assert coset.label == "(0, 1)+span(1,1)"

    def test_counts(self, gf3_plane_algebra):
        """Test |S(V)| = 22 with fibers 9, 3, 3, 3, 3, 1."""
        assert len(gf3_plane_algebra.cosets) == 22
        sizes = [len(gf3_plane_algebra.fibers[u]) for u in gf3_plane_algebra.subspaces]
        assert sizes == [9, 3, 3, 3, 3, 1]

    def test_lifted_mean_matches_setwise_image(self, gf3_plane_algebra):
        """Test every lifted mean is the setwise image."""
        algebra = gf3_plane_algebra
        for k in range(3):
            for c1, c2 in itertools.product(algebra.cosets, repeat=2):
                assert algebra.lifted_mean(k, c1, c2).members() == algebra.setwise_mean(k, c1, c2)

    def test_projection_is_homomorphism(self, gf3_plane_algebra):
        """Test π(2(c1, c2)) = π(c1) ∨ π(c2) on all 22×22 pairs."""
        algebra = gf3_plane_algebra
        pairs = 0
        for c1, c2 in itertools.product(algebra.cosets, repeat=2):
            pairs += 1
            image = projection_pi(algebra.lifted_mean(2, c1, c2))
            assert image == subspace_join(projection_pi(c1), projection_pi(c2))
        assert pairs == 484

    def test_coset_model_laws(self, gf3_plane_algebra):
        """Test the coset algebra satisfies idempotence and the projections."""
        model = CosetModel(gf3_plane_algebra)
        for name in ("idempotence", "projection-left", "projection-right"):
            assert check_identity(model, _law(name), Exhaustive()).passed, name


class TestPlonkaStructure:
    """Test S(V) as a Płonka sum over L(V)."""

    def test_gf3_plane(self, gf3_plane, gf3_plane_algebra):
        """Test functoriality and operation agreement for k = 2."""
        report = verify_plonka_structure(gf3_plane, 2, gf3_plane_algebra)
        assert report.passed
        assert report.witnesses == []
        assert report.subspace_count == 6
        assert report.coset_count == 22
        assert report.fiber_sizes == [9, 3, 3, 3, 3, 1]
        assert report.operation_checks == 484
        assert report.homomorphism_ok

    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_improper_weight(self, gf3_plane, gf3_plane_algebra, k):
        """Test k must differ from 0 and 1 in the field."""
        with pytest.raises(WeightDomainError):
            verify_plonka_structure(gf3_plane, k, gf3_plane_algebra)

    def test_gf5_line(self):
        """Test every proper weight on GF(5)."""
        space = FiniteVectorSpace(5, 1)
        for k in (2, 3, 4):
            assert verify_plonka_structure(space, k).passed


class TestReplica:
    """Test the replica of S(V) against L(V)."""

    def test_projective_replica(self, gf3_plane, gf3_plane_algebra):
        """Test the replica is (L(V), ∨) with six open fibers."""
        report = verify_replica_is_projective(gf3_plane, algebra=gf3_plane_algebra)
        assert report.passed
        assert report.weights == [str(FieldElement(2, 3))]
        assert report.replica_size == 6
        assert report.isomorphic_to_projective_space
        assert len(report.fibers) == 6
        assert all(f.open for f in report.fibers)
        assert all(f.certificate == "exhaustive-wall-search" for f in report.fibers)

    def test_gf3_line_replica_is_chain(self):
        """Test GF(3) has the replica {0} < GF(3)."""
        report = affine_replica_report(FiniteVectorSpace(3, 1))
        assert report.class_count == 2
        assert report.isomorphic_to_expected
        assert report.classes_open

    def test_report_shape(self, gf3_plane):
        """Test the common replica report for GF(3)²."""
        report = affine_replica_report(gf3_plane)
        assert report.class_count == 6
        assert [c.kind for c in report.classes] == ["affine"] * 6
        rebuilt = FiniteSemilattice.from_join_table(report.semilattice["elements"], report.semilattice["join"])
        assert is_isomorphic(rebuilt, subspace_semilattice(enumerate_subspaces(gf3_plane)))
        assert not is_isomorphic(rebuilt, chain(6))


class TestIdentitySuite:
    """Test the affine identities exhaustively."""

    @pytest.mark.parametrize("modulus,dimension", [(3, 1), (3, 2), (5, 1)])
    def test_suite_passes(self, modulus, dimension):
        """Test each affine law holds on every assignment."""
        reports = check_affine_identity_suite(FiniteVectorSpace(modulus, dimension))
        assert [r.law for r in reports] == [
            "idempotence",
            "entropicity",
            "projection-left",
            "projection-right",
            "mean-composition",
            "parallelogram",
        ]
        for report in reports:
            assert report.passed, (report.law, report.counterexample)
            assert report.strategy == "exhaustive"

    def test_gf5_plane_exhaustive(self):
        """Test GF(5)² passes every affine law, entropicity over all 25⁴·5² assignments."""
        reports = {r.law: r for r in check_affine_identity_suite(FiniteVectorSpace(5, 2))}
        assert all(r.passed for r in reports.values()), reports
        assert reports["entropicity"].trials == 25**4 * 5**2
        assert reports["parallelogram"].trials == 25**3
        assert reports["mean-composition"].trials == 25**2 * 5**3


class TestRationalFamilies:
    """Test coset families over ℚⁿ."""

    def test_demo_passes(self):
        """Test {0}, the x-axis and ℚ² agree on 500 seeded samples."""
        report = rational_coset_demo(_family(ORIGIN, X_AXIS, PLANE), samples=500, seed=7)
        assert report.passed
        assert report.agreed == 500
        assert report.family == ["{0}", "span(1,0)", "ℚ^2"]
        assert report.functoriality_checks > 0

    def test_duplicates_collapse(self):
        """Test equal spans are kept once."""
        family = rational_family(_family(X_AXIS, [["2", "0"]], PLANE))
        assert [u.label for u in family] == ["span(1,0)", "ℚ^2"]

    def test_not_join_closed(self):
        """Test two axes without the plane name the missing join."""
        with pytest.raises(FamilyNotJoinClosedError) as exc:
            rational_family(_family(ORIGIN, X_AXIS, Y_AXIS))
        assert exc.value.witness == {
            "left": "span(1,0)",
            "right": "span(0,1)",
            "missing_join": "ℚ^2",
        }

    def test_data_file(self, data_dir):
        """Test the bundled family passes."""
        spec = RationalFamilySpec.model_validate_json(
            (data_dir / "rational-family.json").read_text(encoding="utf-8")
        )
        assert rational_coset_demo(spec, samples=100, seed=7).passed
