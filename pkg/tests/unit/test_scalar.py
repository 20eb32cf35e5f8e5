"""Unit tests for exact scalars and linear algebra."""
import random
from fractions import Fraction

import pytest

from barycentra.core.errors import (
    DimensionMismatchError,
    InputError,
    ModulusMismatchError,
    WeightDomainError,
)
from barycentra.core.linalg import in_span, maximize, nullspace, rank, rref, rref_mod
from barycentra.core.scalar import (
    FieldElement,
    Weight,
    dual_product,
    field_mean,
    field_vector,
    format_rational,
    format_vector,
    is_prime,
    parse_rational,
    random_weight,
    skew_assoc_inner_weight,
    weighted_mean,
)


class TestRationalText:
    """Test the "a/b" syntax."""

    def test_parse_reduces(self):
        """Test parsing reduces to canonical form."""
        assert parse_rational("6/8") == Fraction(3, 4)
        assert parse_rational("-2") == Fraction(-2)
        assert parse_rational(5) == Fraction(5)

    def test_format_canonical(self):
        """Test formatting drops a unit denominator."""
        assert format_rational(Fraction(3, 4)) == "3/4"
        assert format_rational(Fraction(-4, 2)) == "-2"
        assert format_vector((Fraction(1, 2), Fraction(0))) == "(1/2, 0)"

    @pytest.mark.parametrize("text", ["1.5", "a/b", "1/0", "", True, 0.5])
    def test_parse_rejects(self, text):
        """Test floats, junk and zero denominators are rejected."""
        with pytest.raises(InputError):
            parse_rational(text)


class TestWeights:
    """Test open-interval weights."""

    @pytest.mark.parametrize("value", ["0", "1", "-1/2", "3/2"])
    def test_weight_domain(self, value):
        """Test weights outside ]0,1[ are rejected with the value as witness."""
        with pytest.raises(WeightDomainError) as exc:
            Weight.parse(value)
        assert exc.value.witness == {"weight": format_rational(parse_rational(value))}

    def test_weighted_mean(self):
        """Test p(x,y) = (1-p)x + py."""
        p = Weight.parse("1/4")
        assert weighted_mean(p, (Fraction(0), Fraction(4)), (Fraction(4), Fraction(0))) == (
            Fraction(1),
            Fraction(3),
        )

    def test_weighted_mean_dimension_mismatch(self):
        """Test means of points of different dimensions fail."""
        with pytest.raises(DimensionMismatchError):
            weighted_mean(Weight.parse("1/2"), (Fraction(0),), (Fraction(0), Fraction(1)))

    def test_dual_product(self):
        """Test r∘p = r + p - rp and the skew-associativity inner weight."""
        r, p = Weight.parse("1/2"), Weight.parse("1/3")
        assert dual_product(r, p).value == Fraction(2, 3)
        assert skew_assoc_inner_weight(r, p).value == Fraction(1, 2)

    def test_random_weight_in_range(self):
        """Test random weights stay inside ]0,1[ with bounded denominators."""
        rng = random.Random(7)
        for _ in range(200):
            w = random_weight(rng, 50)
            assert 0 < w.value < 1
            assert w.value.denominator <= 50


class TestPrimeField:
    """Test GF(p) arithmetic."""

    def test_is_prime(self):
        """Test primality on small numbers."""
        assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_arithmetic(self):
        """Test ring operations and inverses modulo 5."""
        a, b = FieldElement(3, 5), FieldElement(4, 5)
        assert (a + b).residue == 2
        assert (a - b).residue == 4
        assert (a * b).residue == 2
        assert (a / b).residue == 2
        assert (1 - a).residue == 3
        assert a.inverse().residue == 2

    def test_zero_has_no_inverse(self):
        """Test division by zero is a weight-domain error."""
        with pytest.raises(WeightDomainError):
            FieldElement(0, 3).inverse()

    def test_modulus_mismatch(self):
        """Test mixing fields fails with both moduli as witness."""
        with pytest.raises(ModulusMismatchError) as exc:
            FieldElement(1, 3) + FieldElement(1, 5)
        assert exc.value.witness == {"left_modulus": 3, "right_modulus": 5}

    def test_non_prime_modulus(self):
        """Test composite moduli are rejected."""
        with pytest.raises(InputError):
            FieldElement(1, 4)

    def test_field_mean(self):
        """Test 2(x,y) = 2y - x over GF(3)."""
        k = FieldElement(2, 3)
        result = field_mean(k, field_vector([1, 0], 3), field_vector([0, 1], 3))
        assert [c.residue for c in result] == [2, 2]


class TestLinearAlgebra:
    """Test exact elimination and the simplex."""

    def test_rref_and_rank(self):
        """Test RREF drops dependent rows."""
        rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
        reduced, pivots = rref(rows)
        assert pivots == [0, 1]
        assert reduced == [[1, 0, 1], [0, 1, 1]]
        assert rank(rows) == 2

    def test_nullspace(self):
        """Test the nullspace basis annihilates the rows."""
        rows = [[Fraction(1), Fraction(1), Fraction(1)]]
        basis = nullspace(rows, 3)
        assert len(basis) == 2
        for vector in basis:
            assert sum(vector) == 0

    def test_in_span(self):
        """Test span membership through the reduced basis."""
        reduced, pivots = rref([[1, 1, 0]])
        assert in_span([2, 2, 0], reduced, pivots)
        assert not in_span([1, 0, 0], reduced, pivots)

    def test_rref_mod(self):
        """Test elimination over GF(3)."""
        reduced, pivots = rref_mod([[2, 1], [1, 2]], 3)
        assert reduced == [[1, 2]]
        assert pivots == [0]

    def test_rref_returns_fractions(self):
        """Test reduced rows come back as Fractions, not sympy numbers."""
        reduced, pivots = rref([[2, 1], [4, 3]])
        assert pivots == [0, 1]
        assert reduced == [[1, 0], [0, 1]]
        assert all(type(v) is Fraction for row in reduced for v in row)
        reduced, _ = rref([[3, 1]])
        assert reduced == [[1, Fraction(1, 3)]]

    def test_nullspace_free_columns(self):
        """Test each basis vector is 1 on its own free column and 0 on the others."""
        rows = [[1, 0, 2, 0], [0, 1, 3, 1]]
        basis = nullspace(rows, 4)
        assert basis == [[-2, -3, 1, 0], [0, -1, 0, 1]]
        assert nullspace([], 2) == [[1, 0], [0, 1]]

    def test_rref_mod_residues(self):
        """Test GF(5) entries are returned in [0, 5)."""
        reduced, pivots = rref_mod([[1, 4, 0], [2, 3, 1]], 5)
        assert pivots == [0, 2]
        assert reduced == [[1, 4, 0], [0, 0, 1]]
        assert rref_mod([], 5) == ([], [])
        assert rank([[1, 2], [2, 4]]) == 1

    def test_maximize_optimal(self):
        """Test an LP with a unique optimum."""
        # x + y = 1, maximize y
        result = maximize([[1, 1]], [1], [0, 1])
        assert result.status == "optimal"
        assert result.value == 1
        assert result.solution == (Fraction(0), Fraction(1))

    def test_maximize_infeasible(self):
        """Test an infeasible LP is reported."""
        result = maximize([[1, 1]], [-1], [0, 0])
        assert result.status == "infeasible"

    def test_maximize_unbounded(self):
        """Test an unbounded LP is reported."""
        result = maximize([[1, -1]], [0], [1, 1])
        assert result.status == "unbounded"
