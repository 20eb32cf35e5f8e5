"""Unit tests for input schemas, report schemas, errors and settings."""
from fractions import Fraction

import pytest
from pydantic import ValidationError

from barycentra.core.config import Settings
from barycentra.core.errors import FunctorialityError, WeightDomainError
from barycentra.schemas.inputs import (
    FiberSpec,
    PlonkaSumSpec,
    PolytopeSpec,
    RationalFamilySpec,
    SpaceSpec,
    TransitionSpec,
)
from barycentra.schemas.reports import AgreementReport, CheckReport


class TestPolytopeSpec:
    """Test the polytope schema."""

    def test_valid(self):
        """Test strings and integers are both accepted."""
        spec = PolytopeSpec(ambient_dim=2, vertices=[["0", 0], ["1/2", "3"]])
        assert spec.names is None

    def test_rejects_floats_as_text(self):
        """Test decimal strings are not rationals."""
        with pytest.raises(ValidationError):
            PolytopeSpec(ambient_dim=1, vertices=[["0.5"]])

    def test_rejects_wrong_width(self):
        """Test every vertex has ambient_dim coordinates."""
        with pytest.raises(ValidationError):
            PolytopeSpec(ambient_dim=2, vertices=[["0"]])

    def test_names_must_cover_vertices(self):
        """Test names label every vertex."""
        with pytest.raises(ValidationError):
            PolytopeSpec(ambient_dim=1, vertices=[["0"], ["1"]], names=["a"])

    def test_needs_a_vertex(self):
        """Test the vertex list is nonempty."""
        with pytest.raises(ValidationError):
            PolytopeSpec(ambient_dim=1, vertices=[])


class TestPlonkaSumSpec:
    """Test the Płonka sum schema."""

    def test_transition_aliases(self):
        """Test transitions read "from" and "to"."""
        spec = TransitionSpec.model_validate({"from": "0", "to": "1", "matrix": [["0"]], "offset": ["0"]})
        assert (spec.source, spec.target) == ("0", "1")

    def test_fiber_kinds(self):
        """Test each fiber kind needs its own data."""
        with pytest.raises(ValidationError):
            FiberSpec(kind="polytope")
        with pytest.raises(ValidationError):
            FiberSpec(kind="affine")
        with pytest.raises(ValidationError):
            FiberSpec(kind="simplex", vertices=[["0"]])
        assert FiberSpec(kind="singleton").name is None

    def test_bad_matrix_entry(self):
        """Test matrix entries must be rationals."""
        with pytest.raises(ValidationError):
            TransitionSpec.model_validate({"from": "0", "to": "1", "matrix": [["x"]], "offset": ["0"]})

    def test_full_document(self, data_dir):
        """Test the bundled T presentation parses."""
        spec = PlonkaSumSpec.model_validate_json(
            (data_dir / "t-presentation.json").read_text(encoding="utf-8")
        )
        assert set(spec.fibers) == {"0", "1"}
        assert spec.fibers["1"].names == ["m", "γ"]
        assert spec.transitions[0].matrix == [["0"]]


class TestSpaceSpecs:
    """Test space and family schemas."""

    def test_space_aliases(self):
        """Test p and n are read as modulus and dimension."""
        spec = SpaceSpec.model_validate({"p": 5, "n": 1})
        assert (spec.modulus, spec.dimension) == (5, 1)

    @pytest.mark.parametrize("modulus", [2, 6])
    def test_space_modulus(self, modulus):
        """Test even and composite moduli are rejected."""
        with pytest.raises(ValidationError):
            SpaceSpec.model_validate({"p": modulus, "n": 1})

    def test_family_basis_width(self):
        """Test basis vectors match the ambient dimension."""
        with pytest.raises(ValidationError):
            RationalFamilySpec(ambient_dim=2, subspaces=[{"basis": [["1"]]}])

    def test_family_dimension_bound(self):
        """Test ambient dimensions stay at desk scale."""
        with pytest.raises(ValidationError):
            RationalFamilySpec(ambient_dim=5, subspaces=[{"basis": []}])


class TestReports:
    """Test report serialization."""

    def test_agreement_ratio_serialized(self):
        """Test the agreement ratio appears in the JSON form."""
        report = AgreementReport(model="polytope", samples=200, agreed=200, passed=True)
        assert report.model_dump()["agree"] == "200/200"

    def test_check_report_passed(self):
        """Test only a pass result counts as passed."""
        report = CheckReport(law="idempotence", model="m", strategy="exhaustive", result="not-applicable")
        assert not report.passed
        assert report.model_dump()["counterexample"] is None


class TestErrors:
    """Test error payloads."""

    def test_to_dict_with_witness(self):
        """Test the witness travels with the error name."""
        exc = WeightDomainError("Weight 0 is outside ]0,1[", witness={"weight": "0"})
        assert exc.to_dict() == {
            "error": "WeightDomainError",
            "message": "Weight 0 is outside ]0,1[",
            "witness": {"weight": "0"},
        }

    def test_to_dict_without_witness(self):
        """Test errors without a witness omit the key."""
        assert "witness" not in FunctorialityError("bad").to_dict()


class TestSettings:
    """Test environment-driven configuration."""

    def test_defaults(self, clean_env):
        """Test defaults without overrides."""
        fresh = Settings(_env_file=None)
        assert fresh.seed == 7
        assert fresh.sample_size == 1000
        assert fresh.weight_sample()[0] == Fraction(1, 2)

    def test_environment_override(self, clean_env):
        """Test BARYCENTRA_* variables override defaults."""
        clean_env.setenv("BARYCENTRA_SEED", "42")
        clean_env.setenv("BARYCENTRA_SAMPLE_SIZE", "50")
        fresh = Settings(_env_file=None)
        assert fresh.seed == 42
        assert fresh.sample_size == 50

    def test_invalid_override(self, clean_env):
        """Test out-of-range values are rejected."""
        clean_env.setenv("BARYCENTRA_SAMPLE_SIZE", "0")
        with pytest.raises(ValidationError):
            Settings(_env_file=None)
