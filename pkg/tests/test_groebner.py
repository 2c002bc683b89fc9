"""Tests for the strong Groebner basis engine"""

import itertools
import random

import pytest

from app.algebra.fpmod import ModulePresentation, submodule_membership
from app.algebra.groebner import (
    PolyVecXY,
    TermOrder,
    combine,
    constant_intersection,
    decode,
    encode_laurent,
    laurent_rows,
    normal_form,
    strong_groebner,
    syzygy_basis,
)
from app.algebra.laurent import ONE, X, LaurentPoly, LaurentVec, divides, linear_combination
from app.algebra.zlinalg import solve_in_lattice
from app.utils.errors import RankMismatchError, ResourceBudgetExceeded
from tests.oracles import random_vec, truncation_member


def _basis(*polys, order=TermOrder.POT_GRADED, **kwargs):
    gens = [encode_laurent(LaurentPoly.coerce(p)) for p in polys] + laurent_rows(1)
    return strong_groebner(gens, order, **kwargs)


class TestEncoding:
    """Test the X^-1 -> Y encoding"""

    def test_encode(self):
        """Test X + X^-2 becomes X + Y^2"""
        w = encode_laurent(X + X ** -2)
        assert w.terms == {(0, 1, 0): 1, (0, 0, 2): 1}

    def test_decode_collapses_xy(self):
        """Test XY decodes to 1"""
        assert decode(PolyVecXY(1, {(0, 1, 1): 1})) == LaurentVec([ONE])

    def test_decode_inverts_encode(self):
        """Test decode(encode(v)) = v"""
        rng = random.Random(11)
        for _ in range(20):
            v = random_vec(rng, 2, low=-3, high=3)
            assert decode(encode_laurent(v)) == v

    def test_text(self):
        """Test the bivariate printer"""
        w = PolyVecXY(2, {(0, 1, 1): 2, (0, 0, 0): -1, (1, 0, 3): 1})
        assert w.to_text() == "(2*X^1*Y^1 + -1*1, 1*Y^3)"


class TestStrongGroebner:
    """Test basis construction and normal forms"""

    def test_quotient_is_f2(self):
        """Test Z[X^(+-1)]/(2, X - 1) has exactly the residues 0 and 1"""
        gb = _basis(2, X - 1)
        residues = set()
        for c in range(-3, 4):
            for k in range(-3, 4):
                nf = decode(normal_form(encode_laurent(LaurentPoly.monomial(k, c)), gb))
                residues.add(nf)
                assert nf == LaurentVec([c % 2])
        assert residues == {LaurentVec([0]), LaurentVec([1])}

    def test_normal_forms(self):
        """Test X^2 + 1 reduces to 0 and X to 1 modulo (X - 1, 2)"""
        gb = _basis(X - 1, 2)
        assert gb.normal_form(encode_laurent(X ** 2 + 1)).is_zero
        assert decode(gb.normal_form(encode_laurent(X))) == LaurentVec([1])
        assert gb.normal_form(PolyVecXY(1)).is_zero

    def test_empty_generators(self):
        """Test the basis of the zero module is empty"""
        gb = strong_groebner([], rank=1)
        assert len(gb) == 0
        assert gb.normal_form(encode_laurent(X)) == encode_laurent(X)

    def test_unit_generator(self):
        """Test every vector reduces to 0 modulo the unit ideal"""
        gb = _basis(1)
        assert gb.contains(encode_laurent(X ** 3 + 2 * X ** -1))

    def test_leading_coefficients_positive(self):
        """Test autoreduced elements have positive leading coefficients"""
        gb = _basis(6 * X - 4, 3 * X ** 2 + 1)
        for vec in gb.elements:
            _, lc = vec.leading_term(gb.order)
            assert lc > 0

    def test_both_orders_agree(self):
        """Test membership does not depend on the term order"""
        gens = [encode_laurent(LaurentVec([X - 1, 2])), encode_laurent(LaurentVec([3, X]))]
        pot = strong_groebner(gens + laurent_rows(2), TermOrder.POT_GRADED)
        elim = strong_groebner(gens + laurent_rows(2), TermOrder.ELIM_GRADED)
        rng = random.Random(5)
        for _ in range(10):
            c1, c2 = LaurentPoly({0: rng.randint(-2, 2), 1: rng.randint(-2, 2)}), LaurentPoly({-1: rng.randint(-2, 2)})
            v = encode_laurent(LaurentVec([X - 1, 2]) * c1 + LaurentVec([3, X]) * c2)
            assert pot.contains(v) and elim.contains(v)
        v = encode_laurent(LaurentVec([1, 0]))
        assert pot.contains(v) == elim.contains(v)

    def test_certificate(self):
        """Test tracked reduction reconstructs v - remainder from the inputs"""
        gens = [encode_laurent(X - 1), encode_laurent(LaurentPoly.constant(2))] + laurent_rows(1)
        gb = strong_groebner(gens, track=True)
        v = encode_laurent(X ** 3 + 4)
        rem, coeffs = gb.reduce_with_certificate(v)
        assert decode(v - rem) == decode(combine(coeffs, gens))

    def test_budget(self):
        """Test the step budget aborts long computations"""
        with pytest.raises(ResourceBudgetExceeded) as exc_info:
            _basis(2, X - 1, 3 * X ** 2 + X, budget=1)
        assert exc_info.value.code == "RESOURCE_BUDGET_EXCEEDED"

    def test_rank_mismatch(self):
        """Test generators of different ranks are rejected"""
        with pytest.raises(RankMismatchError):
            strong_groebner([encode_laurent(X), PolyVecXY(2, {(1, 0, 0): 1})])


class TestOracleAgreement:
    """Cross-check membership against shifted integer spans"""

    def test_constructed_members(self):
        """Test combinations of the generators are recognized as members with a valid certificate"""
        rng = random.Random(2024)
        for _ in range(100):
            rank = rng.randint(1, 2)
            gens = [random_vec(rng, rank, low=0, high=2) for _ in range(rng.randint(1, 2))]
            coeffs = [LaurentPoly({rng.randint(-2, 2): rng.randint(-2, 2)}) for _ in gens]
            v = linear_combination(coeffs, gens, rank)
            cert = submodule_membership(ModulePresentation(rank), v, gens)
            assert cert is not None
            assert linear_combination(cert, gens, rank) == v

    def test_oracle_members_are_members(self):
        """Test anything the truncation oracle certifies is a member"""
        rng = random.Random(99)
        for _ in range(100):
            rank = rng.randint(1, 2)
            gens = [random_vec(rng, rank, low=0, high=2) for _ in range(2)]
            v = random_vec(rng, rank, low=-1, high=2, coeff=2)
            in_module = submodule_membership(ModulePresentation(rank), v, gens) is not None
            if truncation_member(gens, v, 2):
                assert in_module
            if not in_module:
                assert not truncation_member(gens, v, 3)


class TestSyzygies:
    """Test syzygy generators"""

    def _decoded(self, *polys):
        raw = syzygy_basis([encode_laurent(LaurentPoly.coerce(p)) for p in polys])
        return [decode(s) for s in raw]

    def test_koszul_pair(self):
        """Test (2, 1 - X) is generated by the syzygies of (X - 1, 2)"""
        syz = self._decoded(X - 1, 2)
        for s in syz:
            assert s[0] * (X - 1) + s[1] * 2 == 0
        target = LaurentVec([2, 1 - X])
        assert submodule_membership(ModulePresentation(2), target, syz) is not None

    def test_nonzerodivisor(self):
        """Test 1 has only the zero syzygy"""
        assert all(s.is_zero for s in self._decoded(1))

    def test_repeated_generator(self):
        """Test (f, f) has the syzygy (1, -1)"""
        f = X ** 2 - 3
        syz = self._decoded(f, f)
        assert submodule_membership(ModulePresentation(2), LaurentVec([1, -1]), syz) is not None

    def test_empty(self):
        """Test no generators give no syzygies"""
        assert syzygy_basis([]) == []


class TestConstantIntersection:
    """Test M cap Z^r"""

    def test_even_constants(self):
        """Test (2, X - 1) meets Z in 2Z"""
        gens = [encode_laurent(LaurentPoly.constant(2)), encode_laurent(X - 1)]
        assert constant_intersection(gens, 1).to_rows() == [[2]]

    def test_no_constants(self):
        """Test (X - 1) meets Z only in 0"""
        assert constant_intersection([encode_laurent(X - 1)], 1).rows == 0

    def test_unit(self):
        """Test (1) meets Z in Z"""
        assert constant_intersection([encode_laurent(ONE)], 1).to_rows() == [[1]]

    def test_rank_two(self):
        """Test a rank-two lattice"""
        gens = [encode_laurent(LaurentVec([X, 1])), encode_laurent(LaurentVec([2, 0]))]
        rows = constant_intersection(gens, 2).to_rows()
        assert rows == [[2, 0], [0, 2]]


class TestRandomSyzygiesAndConstants:
    """Cross-check syzygies and constant intersections on random inputs"""

    def test_syzygies_vanish(self):
        """Test every returned syzygy combines the generators to zero"""
        rng = random.Random(515)
        for _ in range(40):
            rank = rng.randint(1, 2)
            gens = [random_vec(rng, rank, low=0, high=2) for _ in range(rng.randint(2, 3))]
            for s in syzygy_basis([encode_laurent(g) for g in gens]):
                assert linear_combination(list(decode(s)), gens, rank).is_zero

    def test_syzygies_vanish_in_quotient(self):
        """Test syzygies relative to a relation combine to a multiple of it"""
        rng = random.Random(616)
        for _ in range(30):
            rels = [random_vec(rng, 1, low=0, high=1)]
            gens = [random_vec(rng, 1, low=0, high=2) for _ in range(2)]
            raw = syzygy_basis([encode_laurent(g) for g in gens], [encode_laurent(r) for r in rels])
            for s in raw:
                combo = linear_combination(list(decode(s)), gens, 1)
                assert divides(rels[0][0], combo[0]) is not None

    def test_koszul_syzygies_generated(self):
        """Test g_j e_i - g_i e_j lies in the syzygy module of (g_1, ..., g_k)"""
        rng = random.Random(717)
        for _ in range(30):
            gens = [random_vec(rng, 1, low=0, high=2) for _ in range(rng.randint(2, 3))]
            syz = [decode(s) for s in syzygy_basis([encode_laurent(g) for g in gens])]
            k = len(gens)
            for i in range(k):
                for j in range(i + 1, k):
                    coords = [LaurentPoly() for _ in range(k)]
                    coords[i], coords[j] = gens[j][0], -gens[i][0]
                    koszul = LaurentVec(coords)
                    assert linear_combination(list(koszul), gens, 1).is_zero
                    assert submodule_membership(ModulePresentation(k), koszul, syz) is not None

    def test_constants_against_truncation(self):
        """Test lattice rows are members and small certified constants lie in the lattice"""
        rng = random.Random(818)
        for _ in range(30):
            rank = rng.randint(1, 2)
            gens = [random_vec(rng, rank, low=0, high=1) for _ in range(rng.randint(1, 3))]
            lattice = constant_intersection([encode_laurent(g) for g in gens], rank)
            for row in lattice.to_rows():
                assert submodule_membership(ModulePresentation(rank), LaurentVec(row), gens) is not None
            box = range(-6, 7) if rank == 1 else range(-3, 4)
            for v in (list(t) for t in itertools.product(box, repeat=rank)):
                if truncation_member(gens, LaurentVec(v), 2):
                    assert solve_in_lattice(lattice, v) is not None, (gens, v)
