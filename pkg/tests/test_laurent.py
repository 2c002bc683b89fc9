"""Tests for Laurent polynomial arithmetic and the polynomial text grammar"""

import random

import pytest

from app.algebra.laurent import (
    ONE,
    ZERO,
    X,
    LaurentPoly,
    LaurentVec,
    divides,
    format_laurent,
    geometric_ratio,
    geometric_sum,
    linear_combination,
    parse_laurent,
    poly_arith,
    power_sum,
    taylor_at_one,
)
from app.utils.errors import ParseError, RankMismatchError, ValidationError
from tests.oracles import random_poly


@pytest.fixture
def rng():
    """Seeded random source"""
    return random.Random(20240611)


class TestPolyArith:
    """Test the ring operations"""

    def test_difference_of_squares(self):
        """Test (X + 1)(X - 1) = X^2 - 1"""
        assert poly_arith("mul", X + 1, X - 1) == X ** 2 - 1

    def test_additive_identity(self, rng):
        """Test f + 0 = f on random polynomials"""
        for _ in range(20):
            f = random_poly(rng)
            assert poly_arith("add", f, ZERO) == f
            assert poly_arith("sub", f, f).is_zero

    def test_shift(self):
        """Test shift translates exponents"""
        f = parse_laurent("3*X^-2 + X^1")
        assert poly_arith("shift", f, 2) == parse_laurent("3 + X^3")

    def test_negate(self):
        """Test negation flips every coefficient"""
        f = parse_laurent("2*X^1 - 5*X^-3")
        assert poly_arith("negate", f, ZERO) == parse_laurent("-2*X^1 + 5*X^-3")

    def test_unknown_operation(self):
        """Test unknown operation names are rejected"""
        with pytest.raises(ValidationError):
            poly_arith("divide", X, ONE)

    def test_no_zero_coefficients_stored(self):
        """Test canonical form drops cancelled terms"""
        f = (X + 1) - X
        assert f.terms == {0: 1}
        assert LaurentPoly({3: 0, 1: 2}).terms == {1: 2}

    def test_unit_powers(self):
        """Test negative powers of monomial units"""
        assert X ** -3 == LaurentPoly.monomial(-3)
        with pytest.raises(ValueError):
            (X + 1) ** -1

    def test_ring_axioms(self, rng):
        """Test ring axioms of poly_arith on 1000 random triples"""
        for _ in range(1000):
            f, g, h = (random_poly(rng, low=-6, high=6, coeff=9) for _ in range(3))
            assert poly_arith("mul", f, poly_arith("add", g, h)) == \
                poly_arith("add", poly_arith("mul", f, g), poly_arith("mul", f, h))
            assert poly_arith("mul", poly_arith("mul", f, g), h) == poly_arith("mul", f, poly_arith("mul", g, h))
            assert poly_arith("add", poly_arith("add", f, g), h) == poly_arith("add", f, poly_arith("add", g, h))
            assert poly_arith("mul", f, g) == poly_arith("mul", g, f)
            assert poly_arith("add", f, g) == poly_arith("add", g, f)
            assert poly_arith("sub", poly_arith("add", f, g), g) == f
            assert poly_arith("add", f, poly_arith("negate", f, 0)) == ZERO


class TestDivides:
    """Test exact division"""

    def test_sum_gadget_polynomial(self):
        """Test (X - 1)^2 divides X^3 + X^5 - X^8 - 1"""
        p = (X - 1) ** 2
        f = parse_laurent("X^3 + X^5 - X^8 - 1")
        q = divides(p, f)
        assert q is not None
        assert p * q == f

    def test_zero_by_zero(self):
        """Test 0 divides only 0"""
        assert divides(ZERO, ZERO) == ZERO
        assert divides(ZERO, X) is None

    def test_not_divisible(self):
        """Test X - 1 does not divide X^2 + 1"""
        assert divides(X - 1, X ** 2 + 1) is None

    def test_units_divide_everything(self):
        """Test monomials X^k divide every polynomial"""
        f = parse_laurent("7*X^4 - X^-2 + 3")
        q = divides(X ** -5, f)
        assert q == f.shift(5)

    def test_non_monic_divisor(self):
        """Test exactness over Z, not Q"""
        assert divides(LaurentPoly.constant(2), X + 1) is None
        assert divides(2 * X + 2, 4 * X ** 2 - 4) == 2 * X - 2


class TestGeometricSum:
    """Test (X^{md} - 1)/(X^d - 1)"""

    def test_positive(self):
        """Test d=2, m=3"""
        assert geometric_sum(2, 3) == 1 + X ** 2 + X ** 4

    def test_empty(self):
        """Test d=2, m=0 is zero"""
        assert geometric_sum(2, 0).is_zero

    def test_negative(self):
        """Test d=2, m=-1"""
        assert geometric_sum(2, -1) == -(X ** -2)

    def test_defining_identity(self):
        """Test (X^d - 1) * geometric_sum(d, m) = X^{md} - 1"""
        for d in range(1, 4):
            for m in range(-4, 5):
                assert (X ** d - 1) * geometric_sum(d, m) == X ** (m * d) - 1

    def test_ratio(self):
        """Test (X^6 - 1)/(X^2 - 1)"""
        assert geometric_ratio(2, 6) == 1 + X ** 2 + X ** 4
        with pytest.raises(ValidationError):
            geometric_ratio(4, 6)

    def test_invalid_step(self):
        """Test d < 1 is rejected"""
        with pytest.raises(ValidationError):
            geometric_sum(0, 2)

    def test_power_sum_negative_step(self):
        """Test power sums with a negative step"""
        assert power_sum(-1, 2) == 1 + X ** -1


class TestTaylorAtOne:
    """Test derivatives at X = 1"""

    def test_square_gadget(self):
        """Test all three derivatives vanish for the square gadget at (2, 4, -2)"""
        f = X ** 2 + X ** 4 * (1 - X) + X ** -2 + (X - 3)
        assert taylor_at_one(f, 3) == [0, 0, 0]

    def test_zero(self):
        """Test the zero polynomial"""
        assert taylor_at_one(ZERO, 4) == [0, 0, 0, 0]

    def test_value(self):
        """Test k = 1 is evaluation at 1"""
        assert taylor_at_one(X ** 2 + 1, 1) == [2]

    def test_agrees_with_division(self, rng):
        """Test vanishing derivatives iff (X - 1)^k divides f"""
        for _ in range(40):
            f = random_poly(rng, coeff=2) * ((X - 1) ** rng.randint(0, 2))
            for k in range(1, 4):
                vanish = not any(taylor_at_one(f, k))
                assert vanish == (divides((X - 1) ** k, f) is not None)


class TestTextGrammar:
    """Test the polynomial parser and printer"""

    def test_canonical_output(self):
        """Test printer emits decreasing exponents with explicit X^e"""
        f = parse_laurent("3*X^-2 + X^1 - 5*X^0")
        assert format_laurent(f) == "X^1 - 5*X^0 + 3*X^-2"

    def test_zero(self):
        """Test the zero polynomial prints as 0"""
        assert format_laurent(ZERO) == "0"
        assert parse_laurent("0").is_zero

    def test_whitespace_and_shorthand(self):
        """Test whitespace variations and implicit exponents"""
        assert parse_laurent("  3X^2+X -  4 ") == 3 * X ** 2 + X - 4
        assert parse_laurent("X^{-3} - X^(2)") == X ** -3 - X ** 2

    def test_printer_is_parseable(self, rng):
        """Test parse(format(f)) = f"""
        for _ in range(25):
            f = random_poly(rng, low=-4, high=4, coeff=9)
            assert parse_laurent(format_laurent(f)) == f

    def test_error_column(self):
        """Test diagnostics carry the column of the bad character"""
        with pytest.raises(ParseError) as exc_info:
            parse_laurent("X + $")
        assert exc_info.value.column == 5

    def test_incomplete_exponent(self):
        """Test a dangling exponent is an error"""
        with pytest.raises(ParseError):
            parse_laurent("3*X^")

    def test_empty_text(self):
        """Test empty input is an error"""
        with pytest.raises(ParseError):
            parse_laurent("   ")


class TestLaurentVec:
    """Test fixed-rank vectors"""

    def test_rank_mismatch(self):
        """Test vectors of different ranks cannot be added"""
        with pytest.raises(RankMismatchError):
            LaurentVec([X, ONE]) + LaurentVec([X])

    def test_scalar_multiplication(self):
        """Test multiplication by a polynomial acts coordinate-wise"""
        v = LaurentVec([X, 1])
        assert v * (X - 1) == LaurentVec([X ** 2 - X, X - 1])
        assert 2 * v == LaurentVec([2 * X, 2])

    def test_linear_combination(self):
        """Test linear combinations and the empty combination"""
        vs = [LaurentVec.unit(2, 0), LaurentVec.unit(2, 1)]
        assert linear_combination([X, 3], vs, 2) == LaurentVec([X, 3])
        assert linear_combination([], [], 2).is_zero

    def test_empty_rank(self):
        """Test rank zero is rejected"""
        with pytest.raises(ValidationError):
            LaurentVec([])
