"""Finitely presented modules over Z[X^{+-d}]"""

import threading
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from cachetools import LRUCache
from loguru import logger

from ..config import settings
from ..utils.errors import RankMismatchError, ValidationError
from ..utils.metrics import record_cache_event
from .groebner import (
    PolyVecXY,
    StrongGB,
    TermOrder,
    constant_intersection,
    decode,
    encode_laurent,
    laurent_rows,
    strong_groebner,
    syzygy_basis,
)
from .laurent import IntOrPoly, LaurentPoly, LaurentVec
from .zlinalg import IntMatrix

# Representatives of module elements are plain vectors; equality is modulo relations.
ModuleElement = LaurentVec
ElementLike = Union[LaurentVec, LaurentPoly, int]


class ModulePresentation:
    """
    Z[X^{+-d}]^D modulo the submodule generated by relations

    With base_step d > 1 every exponent in the relations and in element
    representatives is a multiple of d.
    """

    __slots__ = ("ambient_rank", "relations", "base_step", "_hash")

    def __init__(self, ambient_rank: int, relations: Iterable[ElementLike] = (), base_step: int = 1):
        if ambient_rank < 1:
            raise ValidationError(f"ambient_rank must be positive, got {ambient_rank}")
        if base_step < 1:
            raise ValidationError(f"base_step must be positive, got {base_step}")
        self.ambient_rank = ambient_rank
        self.base_step = base_step
        rels = []
        for r in relations:
            vec = _coerce(r, ambient_rank)
            if base_step > 1:
                _check_step(vec, base_step)
            rels.append(vec)
        self.relations: Tuple[LaurentVec, ...] = tuple(rels)
        self._hash: Optional[int] = None

    @property
    def key(self) -> Tuple:
        return (self.ambient_rank, self.base_step, self.relations)

    def element(self, value: ElementLike) -> ModuleElement:
        """Coerce and validate a representative"""
        vec = _coerce(value, self.ambient_rank)
        if self.base_step > 1:
            _check_step(vec, self.base_step)
        return vec

    def zero(self) -> ModuleElement:
        return LaurentVec.zero(self.ambient_rank)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModulePresentation):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self) -> str:
        rels = ", ".join(str(r) for r in self.relations)
        return f"ModulePresentation(D={self.ambient_rank}, d={self.base_step}, relations=[{rels}])"


def _coerce(value: ElementLike, rank: int) -> LaurentVec:
    if isinstance(value, LaurentVec):
        if value.rank != rank:
            raise RankMismatchError(rank, value.rank)
        return value
    if rank != 1:
        raise RankMismatchError(rank, 1, "scalar given for a vector module")
    return LaurentVec([LaurentPoly.coerce(value)])


def _check_step(vec: LaurentVec, d: int):
    for p in vec:
        if any(e % d for e in p.terms):
            raise ValidationError(f"Exponents of {p} are not multiples of the base step {d}")


def _encode(A: ModulePresentation, v: LaurentVec) -> PolyVecXY:
    """Compress exponents by the base step, then move into Z[X,Y]"""
    d = A.base_step
    return encode_laurent(v if d == 1 else v.map(lambda p: p.compress(d)))


def _decode(A: ModulePresentation, w: PolyVecXY) -> LaurentVec:
    d = A.base_step
    vec = decode(w)
    return vec if d == 1 else vec.map(lambda p: p.stretch(d))


# Presentation bases are shared across calls and threads.
_gb_cache: LRUCache = LRUCache(maxsize=settings.gb_cache_size)
_gb_lock = threading.Lock()
_gb_stats = {"hits": 0, "misses": 0}


def _cached_basis(key: Hashable, build: Callable[[], StrongGB]) -> StrongGB:
    with _gb_lock:
        gb = _gb_cache.get(key)
        if gb is not None:
            _gb_stats["hits"] += 1
    if gb is not None:
        record_cache_event("hit")
        return gb
    gb = build()
    with _gb_lock:
        _gb_stats["misses"] += 1
        gb = _gb_cache.setdefault(key, gb)
    record_cache_event("miss")
    return gb


def gb_cache_info() -> Dict[str, int]:
    """Size and hit statistics of the presentation basis cache"""
    with _gb_lock:
        return {
            "size": len(_gb_cache),
            "maxsize": int(_gb_cache.maxsize),
            "hits": _gb_stats["hits"],
            "misses": _gb_stats["misses"],
        }


def clear_gb_cache():
    with _gb_lock:
        _gb_cache.clear()
        _gb_stats["hits"] = 0
        _gb_stats["misses"] = 0


def relation_basis(A: ModulePresentation) -> StrongGB:
    """POT strong basis of the relation submodule, Laurent rows included"""
    def build() -> StrongGB:
        gens = [_encode(A, r) for r in A.relations] + laurent_rows(A.ambient_rank)
        return strong_groebner(gens, TermOrder.POT_GRADED, rank=A.ambient_rank)
    return _cached_basis(("relations", A.key), build)


def _membership_basis(A: ModulePresentation, gens: Sequence[LaurentVec]) -> StrongGB:
    def build() -> StrongGB:
        encoded = [_encode(A, g) for g in gens]
        encoded += [_encode(A, r) for r in A.relations]
        encoded += laurent_rows(A.ambient_rank)
        return strong_groebner(encoded, TermOrder.POT_GRADED, track=True, rank=A.ambient_rank)
    return _cached_basis(("membership", A.key, tuple(gens)), build)


def canonical_form(A: ModulePresentation, a: ElementLike) -> ModuleElement:
    """Canonical representative of a modulo the relations"""
    vec = A.element(a)
    return _decode(A, relation_basis(A).normal_form(_encode(A, vec)))


def elem_equal(A: ModulePresentation, a: ElementLike, b: ElementLike) -> bool:
    """True iff a - b lies in the relation submodule"""
    diff = A.element(a) - A.element(b)
    if diff.is_zero:
        return True
    return relation_basis(A).contains(_encode(A, diff))


def is_zero(A: ModulePresentation, a: ElementLike) -> bool:
    return elem_equal(A, a, A.zero())


def submodule_membership(
    A: ModulePresentation,
    a: ElementLike,
    gens: Sequence[ElementLike]
) -> Optional[List[LaurentPoly]]:
    """
    Coefficients c with sum c_i * gens_i = a in A, or None

    The certificate comes from tracked reduction: the basis is built over
    gens + relations + Laurent rows, and only the gens part is kept.
    """
    vec = A.element(a)
    gens = [A.element(g) for g in gens]
    k = len(gens)
    if vec.is_zero:
        return [LaurentPoly() for _ in range(k)]
    gb = _membership_basis(A, gens)
    rem, coeffs = gb.reduce_with_certificate(_encode(A, vec))
    if not rem.is_zero:
        return None
    d = A.base_step
    result = []
    for i in range(k):
        terms: Dict[int, int] = {}
        for (ea, eb), c in coeffs.component(i).items():
            e = (ea - eb) * d
            terms[e] = terms.get(e, 0) + c
        result.append(LaurentPoly(terms))
    return result


def syzygies_in_quotient(A: ModulePresentation, elems: Sequence[ElementLike]) -> List[LaurentVec]:
    """Generators of {f : sum f_i * elems_i = 0 in A} over Z[X^{+-d}]"""
    elems = [A.element(e) for e in elems]
    if not elems:
        return []
    raw = syzygy_basis([_encode(A, e) for e in elems], [_encode(A, r) for r in A.relations])
    seen = set()
    result = []
    for s in raw:
        vec = _decode(A, s)
        if vec.is_zero or vec in seen:
            continue
        seen.add(vec)
        result.append(vec)
    logger.debug(f"syzygies_in_quotient: {len(elems)} elements -> {len(result)} generators")
    return result


def integer_syzygies(A: ModulePresentation, elems: Sequence[ElementLike]) -> IntMatrix:
    """
    Z-basis of {s in Z^k : sum s_i * elems_i = 0 in A}

    Returns:
        IntMatrix with k columns in Hermite normal form
    """
    elems = [A.element(e) for e in elems]
    k = len(elems)
    if not k:
        return IntMatrix(0, 0)
    raw = syzygy_basis([_encode(A, e) for e in elems], [_encode(A, r) for r in A.relations])
    if not raw:
        return IntMatrix(0, k)
    return constant_intersection(raw, k)


def annihilator(A: ModulePresentation, f1: ElementLike) -> List[LaurentPoly]:
    """Ideal generators of {f : f * f1 = 0 in A}"""
    return [s[0] for s in syzygies_in_quotient(A, [f1])]


def quotient(A: ModulePresentation, sub_gens: Iterable[ElementLike]) -> ModulePresentation:
    """A modulo the images of sub_gens; representatives carry over unchanged"""
    extra = [A.element(g) for g in sub_gens]
    if not extra:
        return A
    return ModulePresentation(A.ambient_rank, list(A.relations) + extra, A.base_step)


def direct_sum(A: ModulePresentation, B: ModulePresentation) -> ModulePresentation:
    """A (+) B over a common base step"""
    if A.base_step != B.base_step:
        raise ValidationError("direct_sum needs a common base step")
    D1, D2 = A.ambient_rank, B.ambient_rank
    rels = [embed(r, D1 + D2, 0) for r in A.relations] + [embed(r, D1 + D2, D1) for r in B.relations]
    return ModulePresentation(D1 + D2, rels, A.base_step)


def embed(v: LaurentVec, rank: int, offset: int) -> LaurentVec:
    """Place v at coordinates offset.. of a rank-`rank` zero vector"""
    entries = [LaurentPoly()] * rank
    for i, p in enumerate(v):
        entries[offset + i] = p
    return LaurentVec(entries)


class ScalarRestriction:
    """
    Bookkeeping of Z[X^{+-1}]^D as Z[X^{+-d}]^{D*d}

    Coordinate p*d + r holds g_r where the p-th coordinate is g = sum X^r g_r.
    """

    def __init__(self, ambient_rank: int, step: int):
        self.ambient_rank = ambient_rank
        self.step = step

    @property
    def target_rank(self) -> int:
        return self.ambient_rank * self.step

    def __call__(self, v: ElementLike) -> LaurentVec:
        vec = _coerce(v, self.ambient_rank)
        if self.step == 1:
            return vec
        entries: List[LaurentPoly] = []
        for p in vec:
            entries.extend(p.split_residues(self.step))
        return LaurentVec(entries)

    def inverse(self, w: LaurentVec) -> LaurentVec:
        if w.rank != self.target_rank:
            raise RankMismatchError(self.target_rank, w.rank, "restricted vector")
        d = self.step
        out = []
        for p in range(self.ambient_rank):
            total = LaurentPoly()
            for r in range(d):
                total = total + w[p * d + r].shift(r)
            out.append(total)
        return LaurentVec(out)


def restrict_scalars(A: ModulePresentation, d: int) -> Tuple[ModulePresentation, ScalarRestriction]:
    """
    A viewed as a Z[X^{+-d}]-module

    Relations are the images of X^r * n for every relation n and r in [0, d).
    d = 1 returns A with the identity map.
    """
    if A.base_step != 1:
        raise ValidationError("restrict_scalars expects a Z[X^{+-1}]-module")
    if d < 1:
        raise ValidationError(f"restriction step must be positive, got {d}")
    phi = ScalarRestriction(A.ambient_rank, d)
    if d == 1:
        return A, phi
    rels = [phi(n.shift(r)) for n in A.relations for r in range(d)]
    return ModulePresentation(phi.target_rank, rels, d), phi


def scalar_multiple(A: ModulePresentation, f: IntOrPoly, a: ElementLike) -> ModuleElement:
    """f * a, checking that f lies in Z[X^{+-d}]"""
    f = LaurentPoly.coerce(f)
    if A.base_step > 1 and any(e % A.base_step for e in f.terms):
        raise ValidationError(f"Scalar {f} does not lie in Z[X^(+-{A.base_step})]")
    return A.element(a) * f


def named_presentation(name: str) -> ModulePresentation:
    """
    Presets: wreath, lamplighter:p, baumslag-solitar:p, free:D

    Raises:
        ValidationError: for unknown names or malformed parameters
    """
    head, _, arg = name.strip().lower().partition(":")
    try:
        value = int(arg) if arg else None
    except ValueError:
        raise ValidationError(f"Preset parameter must be an integer: {name!r}")

    if head == "wreath" and value is None:
        return ModulePresentation(1)
    if head == "lamplighter" and value is not None and value >= 2:
        return ModulePresentation(1, [value])
    if head == "baumslag-solitar" and value is not None and value != 0:
        return ModulePresentation(1, [LaurentPoly({1: 1, 0: -value})])
    if head == "free" and value is not None and value >= 1:
        return ModulePresentation(value)
    raise ValidationError(
        f"Unknown preset {name!r}; expected wreath, lamplighter:p, baumslag-solitar:p or free:D"
    )
