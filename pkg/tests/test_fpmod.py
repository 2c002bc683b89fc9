"""Tests for finitely presented modules"""

import pytest

from app.algebra.fpmod import (
    ModulePresentation,
    ScalarRestriction,
    annihilator,
    canonical_form,
    clear_gb_cache,
    direct_sum,
    elem_equal,
    gb_cache_info,
    integer_syzygies,
    is_zero,
    named_presentation,
    quotient,
    restrict_scalars,
    scalar_multiple,
    submodule_membership,
    syzygies_in_quotient,
)
from app.algebra.laurent import ONE, X, LaurentPoly, LaurentVec, divides, linear_combination
from app.algebra.zlinalg import solve_in_lattice
from app.utils.errors import RankMismatchError, ValidationError


@pytest.fixture
def free():
    """Z[X^(+-1)] as a module over itself"""
    return ModulePresentation(1)


@pytest.fixture
def cyclic3():
    """Z[X^(+-1)]/(X^3 - 1)"""
    return ModulePresentation(1, [X ** 3 - 1])


def _generates(ideal, f) -> bool:
    return submodule_membership(ModulePresentation(1), f, ideal) is not None


class TestEquality:
    """Test equality modulo relations"""

    def test_period_three(self, cyclic3):
        """Test X^5 = X^2 modulo X^3 - 1"""
        assert elem_equal(cyclic3, X ** 5, X ** 2)
        assert not elem_equal(cyclic3, X, ONE)

    def test_reflexive(self, cyclic3):
        """Test a = a"""
        a = 3 * X ** -4 + X
        assert elem_equal(cyclic3, a, a)

    def test_parity(self):
        """Test 1 != 0 modulo 2"""
        A = ModulePresentation(1, [2])
        assert not elem_equal(A, 1, 0)
        assert is_zero(A, 4 * X ** 7 - 2)

    def test_canonical_form(self, cyclic3):
        """Test equal elements share a canonical representative"""
        assert canonical_form(cyclic3, X ** 5 + 2) == canonical_form(cyclic3, X ** -1 + 2)

    def test_rank_mismatch(self):
        """Test representatives must match the ambient rank"""
        A = ModulePresentation(2)
        with pytest.raises(RankMismatchError):
            elem_equal(A, LaurentVec([1]), LaurentVec([1]))

    def test_base_step_checked(self):
        """Test exponents must be multiples of the base step"""
        with pytest.raises(ValidationError):
            ModulePresentation(1, [X - 1], base_step=2)


class TestSubmoduleMembership:
    """Test membership with certificates"""

    def test_member(self, free):
        """Test X^2 + 1 lies in (X - 1, 2)"""
        gens = [X - 1, LaurentPoly.constant(2)]
        coeffs = submodule_membership(free, X ** 2 + 1, gens)
        assert coeffs is not None
        assert coeffs[0] * (X - 1) + coeffs[1] * 2 == X ** 2 + 1

    def test_zero(self, free):
        """Test 0 is the empty combination"""
        coeffs = submodule_membership(free, 0, [X - 1, LaurentPoly.constant(2)])
        assert all(c.is_zero for c in coeffs)

    def test_non_member(self, free):
        """Test X is not in (X - 1, 2)"""
        assert submodule_membership(free, X, [X - 1, LaurentPoly.constant(2)]) is None

    def test_quotient_certificate(self, cyclic3):
        """Test certificates hold modulo the relations"""
        gens = [LaurentVec([X + 1])]
        a = X ** 4 + X ** 3
        coeffs = submodule_membership(cyclic3, a, gens)
        assert coeffs is not None
        assert elem_equal(cyclic3, linear_combination(coeffs, gens, 1), LaurentVec([a]))

    def test_rank_two(self):
        """Test membership in a free module of rank two"""
        A = ModulePresentation(2)
        gens = [LaurentVec([1, X]), LaurentVec([0, 2])]
        assert submodule_membership(A, LaurentVec([X, X ** 2 + 4]), gens) is not None
        assert submodule_membership(A, LaurentVec([0, 1]), gens) is None


class TestSyzygiesInQuotient:
    """Test syzygy modules of presented modules"""

    def test_koszul(self, free):
        """Test (X, -1) is a syzygy of (1, X)"""
        syz = syzygies_in_quotient(free, [1, X])
        for s in syz:
            assert s[0] + s[1] * X == 0
        assert submodule_membership(ModulePresentation(2), LaurentVec([X, -1]), syz) is not None

    def test_torsion(self):
        """Test 2 kills 1 in Z[X^(+-1)]/(2)"""
        syz = syzygies_in_quotient(ModulePresentation(1, [2]), [1])
        assert _generates([s[0] for s in syz], LaurentPoly.constant(2))

    def test_empty(self, free):
        """Test no elements give no syzygies"""
        assert syzygies_in_quotient(free, []) == []


class TestIntegerSyzygies:
    """Test integer syzygy lattices"""

    def test_opposites(self, free):
        """Test (1, -1) has the integer syzygy lattice spanned by (1, 1)"""
        assert integer_syzygies(free, [1, -1]).to_rows() == [[1, 1]]

    def test_independent(self, free):
        """Test (1, X) has no integer syzygies"""
        assert integer_syzygies(free, [1, X]).rows == 0

    def test_vanishing_entry(self, cyclic3):
        """Test an element that is zero in the quotient contributes (0, 1)"""
        sigma = 1 + X + X ** 2
        basis = integer_syzygies(cyclic3, [sigma, X * sigma - sigma])
        assert solve_in_lattice(basis, [0, 1]) is not None
        assert solve_in_lattice(basis, [1, 0]) is None


class TestAnnihilator:
    """Test annihilator ideals"""

    def test_presented_ideal(self):
        """Test ann(1) in Z[X^(+-1)]/(X - 2) is (X - 2)"""
        ann = annihilator(ModulePresentation(1, [X - 2]), 1)
        assert _generates(ann, X - 2)
        assert all(divides(X - 2, f) is not None for f in ann)

    def test_cancel_nonzerodivisor(self):
        """Test ann(X - 1) in Z[X^(+-1)]/(2(X - 1)) is (2)"""
        ann = annihilator(ModulePresentation(1, [2 * X - 2]), X - 1)
        assert _generates(ann, LaurentPoly.constant(2))
        assert all(divides(LaurentPoly.constant(2), f) is not None for f in ann)

    def test_free(self, free):
        """Test ann(1) in a free module is zero"""
        assert all(f.is_zero for f in annihilator(free, 1))


class TestRestrictScalars:
    """Test viewing a module over Z[X^(+-d)]"""

    def test_residue_split(self):
        """Test 1 + X + 3X^2 splits into even and odd parts"""
        phi = ScalarRestriction(1, 2)
        v = phi(1 + X + 3 * X ** 2)
        assert v == LaurentVec([1 + 3 * X ** 2, ONE])
        assert phi.inverse(v) == LaurentVec([1 + X + 3 * X ** 2])

    def test_zero(self):
        """Test phi(0) = 0"""
        assert ScalarRestriction(1, 3)(0).is_zero

    def test_equality_preserved(self, cyclic3):
        """Test equality in A matches equality after restriction"""
        restricted, phi = restrict_scalars(cyclic3, 2)
        assert restricted.base_step == 2
        assert restricted.ambient_rank == 2
        assert elem_equal(restricted, phi(X ** 3), phi(ONE))
        assert elem_equal(restricted, phi(X ** 7 + X), phi(2 * X))
        assert not elem_equal(restricted, phi(X), phi(ONE))

    def test_identity_step(self, cyclic3):
        """Test d = 1 returns the module itself"""
        restricted, phi = restrict_scalars(cyclic3, 1)
        assert restricted is cyclic3

    def test_scalar_multiple_checked(self):
        """Test scalars must lie in Z[X^(+-d)]"""
        A = ModulePresentation(1, base_step=2)
        assert scalar_multiple(A, X ** 2, X ** 4) == LaurentVec([X ** 6])
        with pytest.raises(ValidationError):
            scalar_multiple(A, X, X ** 2)


class TestConstructions:
    """Test quotients, direct sums and presets"""

    def test_quotient(self, free):
        """Test quotients add relations"""
        Q = quotient(free, [X - 1])
        assert elem_equal(Q, X ** 9, ONE)
        assert quotient(free, []) is free

    def test_direct_sum(self):
        """Test Z/2 (+) Z/3 over Z[X^(+-1)]"""
        S = direct_sum(ModulePresentation(1, [2]), ModulePresentation(1, [3]))
        assert S.ambient_rank == 2
        assert elem_equal(S, LaurentVec([2, 0]), LaurentVec([0, 0]))
        assert elem_equal(S, LaurentVec([0, 3 * X]), LaurentVec([0, 0]))
        assert not elem_equal(S, LaurentVec([0, 2]), LaurentVec([0, 0]))

    def test_presets(self):
        """Test named presentations"""
        assert named_presentation("lamplighter:2").relations == (LaurentVec([2]),)
        assert named_presentation("wreath").relations == ()
        assert named_presentation("free:3").ambient_rank == 3
        assert named_presentation("baumslag-solitar:2").relations == (LaurentVec([X - 2]),)

    def test_unknown_preset(self):
        """Test unknown presets are rejected"""
        with pytest.raises(ValidationError):
            named_presentation("heisenberg")
        with pytest.raises(ValidationError):
            named_presentation("lamplighter:x")


class TestBasisCache:
    """Test the shared presentation basis cache"""

    def test_hits_counted(self, cyclic3):
        """Test repeated questions reuse the cached basis"""
        clear_gb_cache()
        elem_equal(cyclic3, X ** 4, X)
        elem_equal(cyclic3, X ** 5, X ** 2)
        info = gb_cache_info()
        assert info["misses"] == 1
        assert info["hits"] >= 1
        assert info["size"] == 1
        clear_gb_cache()
        assert gb_cache_info()["size"] == 0
