"""Brute-force reference procedures used to cross-check the exact algorithms"""

import random
from itertools import product
from math import gcd
from typing import Dict, List, Sequence, Set, Tuple

from app.algebra.abc_group import GroupElement
from app.algebra.fpmod import ModulePresentation, canonical_form
from app.algebra.laurent import LaurentPoly, LaurentVec
from app.algebra.zlinalg import row_lattice_basis, solve_in_lattice


def random_poly(rng: random.Random, low: int = -2, high: int = 2, coeff: int = 3) -> LaurentPoly:
    return LaurentPoly({e: rng.randint(-coeff, coeff) for e in range(low, high + 1)})


def random_vec(rng: random.Random, rank: int, **kwargs) -> LaurentVec:
    return LaurentVec(random_poly(rng, **kwargs) for _ in range(rank))


def random_element(rng: random.Random, rank: int = 1, z_range: int = 3) -> GroupElement:
    return GroupElement(random_vec(rng, rank, low=-1, high=1, coeff=2), rng.randint(-z_range, z_range))


def _flatten(v: LaurentVec, low: int, width: int) -> List[int]:
    row = [0] * (v.rank * width)
    for p, poly in enumerate(v):
        for e, c in poly.terms.items():
            row[p * width + e - low] = c
    return row


def truncation_member(gens: Sequence[LaurentVec], v: LaurentVec, depth: int) -> bool:
    """
    v is an integer combination of the shifts X^j g for |j| <= depth

    A True answer proves membership in the Z[X^{+-1}]-span of gens; False
    only says no certificate of that size exists.
    """
    if v.is_zero:
        return True
    shifted = [g.shift(j) for g in gens for j in range(-depth, depth + 1) if not g.is_zero]
    if not shifted:
        return False
    exponents = [e for w in shifted + [v] for poly in w for e in poly.terms]
    low, high = min(exponents), max(exponents)
    width = high - low + 1
    cols = v.rank * width
    basis = row_lattice_basis([_flatten(w, low, width) for w in shifted], cols)
    return solve_in_lattice(basis, _flatten(v, low, width)) is not None


def _key(A: ModulePresentation, g: GroupElement) -> Tuple[LaurentVec, int]:
    return canonical_form(A, g.a), g.z


def bfs_subgroup(A: ModulePresentation, gens: Sequence[GroupElement], length: int) -> Set[Tuple[LaurentVec, int]]:
    """Canonical keys of all products of at most `length` generators and inverses"""
    letters = list(gens) + [g.inverse() for g in gens]
    identity = GroupElement.identity(A.ambient_rank)
    seen: Dict[Tuple[LaurentVec, int], GroupElement] = {_key(A, identity): identity}
    frontier = [identity]
    for _ in range(length):
        nxt = []
        for g in frontier:
            for x in letters:
                y = g * x
                k = _key(A, y)
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
        frontier = nxt
    return set(seen)


def brute_force_solutions(check, arity: int, bound: int) -> List[Tuple[int, ...]]:
    """All integer tuples in [-bound, bound]^arity accepted by check"""
    return [z for z in product(range(-bound, bound + 1), repeat=arity) if check(z)]


# Z[X^(+-1)]/(2, X^3 - 1) x| Z on bit vectors, independent of the Groebner engine
LampKey = Tuple[Tuple[int, int, int], int]


def lamp_key(g: GroupElement, modulus: int = 0) -> LampKey:
    """(coefficients of 1, X, X^2 mod 2, z) with z reduced mod `modulus` when it is positive"""
    bits = [0, 0, 0]
    for e, c in g.a[0].terms.items():
        bits[e % 3] ^= c % 2
    return tuple(bits), (g.z % modulus if modulus else g.z)


def _lamp_mul(x: LampKey, y: LampKey, modulus: int) -> LampKey:
    (a, z), (b, w) = x, y
    shifted = tuple(b[(i - z) % 3] for i in range(3))
    out = tuple(p ^ q for p, q in zip(a, shifted))
    return out, ((z + w) % modulus if modulus else z + w)


def _lamp_inverse(x: LampKey, modulus: int) -> LampKey:
    a, z = x
    return tuple(a[(i + z) % 3] for i in range(3)), ((-z) % modulus if modulus else -z)


def lamp_closure(gens: Sequence[GroupElement], modulus: int) -> Set[LampKey]:
    """
    Image of <gens> in Z_2[C_3] x| Z/modulus (modulus 0 keeps z exact)

    Finite whenever modulus > 0 or every generator has z-part 0.
    """
    letters = [lamp_key(g, modulus) for g in gens]
    letters += [_lamp_inverse(x, modulus) for x in letters]
    identity: LampKey = ((0, 0, 0), 0)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for x in letters:
                y = _lamp_mul(g, x, modulus)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _z_gcd(gens: Sequence[GroupElement]) -> int:
    d = 0
    for g in gens:
        d = gcd(d, abs(g.z))
    return d


def lamp_coset_meets(G: Sequence[GroupElement], H: Sequence[GroupElement], h: GroupElement) -> bool:
    """
    Exact answer to "<G> cap h<H> nonempty" over Z[X^(+-1)]/(2, X^3 - 1)

    A subgroup with z-image dZ, d > 0, contains the central element t^(6d),
    so it is the full preimage of its image modulo any multiple N of 6d.
    """
    dG, dH = _z_gcd(G), _z_gcd(H)
    if dG and dH:
        N = 6 * dG * dH // gcd(dG, dH)
        SG, SH = lamp_closure(G, N), lamp_closure(H, N)
        h_inv = _lamp_inverse(lamp_key(h, N), N)
        return any(_lamp_mul(h_inv, g, N) in SH for g in SG)
    if not dG:
        N = 6 * dH
        SG, SH = lamp_closure(G, 0), lamp_closure(H, N)
        h_inv = _lamp_inverse(lamp_key(h, N), N)
        return any(_lamp_mul(h_inv, (a, z % N if N else z), N) in SH for a, z in SG)
    N = 6 * dG
    SG, SH = lamp_closure(G, N), lamp_closure(H, 0)
    hk = lamp_key(h, N)
    return any(_lamp_mul(hk, (a, z % N), N) in SG for a, z in SH)
