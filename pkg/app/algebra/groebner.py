"""Strong Groebner bases over Z for submodules of Z[X,Y]^r

Z[X, X^-1] is encoded as Z[X,Y]/(XY - 1): a Laurent vector maps X^-k to Y^k
and every ambient position i carries the relation row (XY - 1)*e_i. The
engine closes a generating set under S-vectors and G-vectors (Bezout
combinations of leading coefficients), reducing with strong reduction plus
remainder reduction of coefficients, so normal forms are canonical.
"""

from collections import defaultdict
from enum import Enum
from heapq import heappop, heappush
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from loguru import logger
try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from ..config import settings
from ..utils.errors import RankMismatchError, ResourceBudgetExceeded, ValidationError
from ..utils.metrics import record_groebner_run
from .laurent import LaurentPoly, LaurentVec
from .zlinalg import IntMatrix, row_lattice_basis

Term = Tuple[int, int, int]  # (position, exponent of X, exponent of Y)
Terms = Dict[Term, int]


class TermOrder(str, Enum):
    """Module term orders; monomials are graded, then lex with X > Y"""
    POT_GRADED = "pot_graded"
    ELIM_GRADED = "elim_graded"

    def key_function(self) -> Callable[[Term], tuple]:
        """Sort key: larger key means larger term; position 0 is the largest position"""
        if self is TermOrder.POT_GRADED:
            return lambda t: (-t[0], t[1] + t[2], t[1])
        return lambda t: (t[1] + t[2], t[1], -t[0])


def _axpy(target: Terms, source: Terms, q: int, da: int = 0, db: int = 0):
    """target -= q * X^da * Y^db * source, in place"""
    if not q:
        return
    for (p, a, b), c in source.items():
        k = (p, a + da, b + db)
        v = target.get(k, 0) - q * c
        if v:
            target[k] = v
        elif k in target:
            del target[k]


class PolyVecXY:
    """Vector of bivariate integer polynomials, stored as {(pos, a, b): coeff}"""

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Optional[Dict[Term, int]] = None):
        self.rank = rank
        clean: Terms = {}
        for (p, a, b), c in (terms or {}).items():
            if not 0 <= p < rank:
                raise RankMismatchError(rank, p + 1, "term position out of range")
            if a < 0 or b < 0:
                raise ValidationError("Bivariate exponents must be nonnegative")
            if c:
                clean[(p, a, b)] = int(c)
        self._terms = clean

    @classmethod
    def _wrap(cls, rank: int, terms: Terms) -> "PolyVecXY":
        vec = cls.__new__(cls)
        vec.rank = rank
        vec._terms = terms
        return vec

    @classmethod
    def from_components(cls, components: Sequence[Dict[Tuple[int, int], int]]) -> "PolyVecXY":
        terms = {(p, a, b): c for p, comp in enumerate(components) for (a, b), c in comp.items()}
        return cls(len(components), terms)

    @property
    def terms(self) -> Terms:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def component(self, pos: int) -> Dict[Tuple[int, int], int]:
        return {(a, b): c for (p, a, b), c in self._terms.items() if p == pos}

    @property
    def is_constant(self) -> bool:
        return all(a == 0 and b == 0 for (_, a, b) in self._terms)

    def constant_row(self) -> List[int]:
        row = [0] * self.rank
        for (p, a, b), c in self._terms.items():
            if a or b:
                raise ValidationError("Vector is not constant")
            row[p] = c
        return row

    def leading_term(self, order: TermOrder) -> Optional[Tuple[Term, int]]:
        if not self._terms:
            return None
        t = max(self._terms, key=order.key_function())
        return t, self._terms[t]

    def __add__(self, other: "PolyVecXY") -> "PolyVecXY":
        self._check(other)
        out = dict(self._terms)
        _axpy(out, other._terms, -1)
        return PolyVecXY._wrap(self.rank, out)

    def __sub__(self, other: "PolyVecXY") -> "PolyVecXY":
        self._check(other)
        out = dict(self._terms)
        _axpy(out, other._terms, 1)
        return PolyVecXY._wrap(self.rank, out)

    def __neg__(self) -> "PolyVecXY":
        return PolyVecXY._wrap(self.rank, {t: -c for t, c in self._terms.items()})

    def mul_poly(self, poly: Dict[Tuple[int, int], int]) -> "PolyVecXY":
        """Multiply every component by a bivariate polynomial {(a, b): c}"""
        out: Terms = {}
        for (a, b), c in poly.items():
            _axpy(out, self._terms, -c, a, b)
        return PolyVecXY._wrap(self.rank, out)

    def _check(self, other: "PolyVecXY"):
        if other.rank != self.rank:
            raise RankMismatchError(self.rank, other.rank)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVecXY):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._terms.items())))

    def to_text(self) -> str:
        """Coordinates as sums c*X^a*Y^b, highest total degree first"""
        parts = []
        for p in range(self.rank):
            comp = self.component(p)
            if not comp:
                parts.append("0")
                continue
            monos = []
            for (a, b), c in sorted(comp.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
                mono = "*".join(s for s in (f"X^{a}" if a else "", f"Y^{b}" if b else "") if s) or "1"
                monos.append(f"{c}*{mono}")
            parts.append(" + ".join(monos))
        return f"({', '.join(parts)})"

    def __repr__(self) -> str:
        return f"PolyVecXY{self.to_text()}"


def encode_laurent(v: Union[LaurentVec, LaurentPoly]) -> PolyVecXY:
    """Substitute X^-k -> Y^k coordinate-wise"""
    if isinstance(v, LaurentPoly):
        v = LaurentVec([v])
    terms: Terms = {}
    for p, poly in enumerate(v):
        for e, c in poly.terms.items():
            terms[(p, e, 0) if e >= 0 else (p, 0, -e)] = c
    return PolyVecXY._wrap(v.rank, terms)


def decode(w: PolyVecXY) -> LaurentVec:
    """Substitute Y -> X^-1; XY collapses to 1"""
    comps: List[Dict[int, int]] = [{} for _ in range(w.rank)]
    for (p, a, b), c in w._terms.items():
        comps[p][a - b] = comps[p].get(a - b, 0) + c
    return LaurentVec(LaurentPoly(c) for c in comps)


def laurent_rows(rank: int, positions: Optional[Iterable[int]] = None) -> List[PolyVecXY]:
    """Relation rows (XY - 1)*e_i"""
    positions = range(rank) if positions is None else positions
    return [PolyVecXY._wrap(rank, {(p, 1, 1): 1, (p, 0, 0): -1}) for p in positions]


def combine(coeffs: PolyVecXY, gens: Sequence[PolyVecXY]) -> PolyVecXY:
    """Sum of coeffs[i] * gens[i]"""
    if coeffs.rank != len(gens):
        raise RankMismatchError(len(gens), coeffs.rank, "coefficient vector")
    if not gens:
        raise ValidationError("combine needs at least one generator")
    out: Terms = {}
    for i, g in enumerate(gens):
        for (a, b), c in coeffs.component(i).items():
            _axpy(out, g._terms, -c, a, b)
    return PolyVecXY._wrap(gens[0].rank, out)


class _Budget:
    __slots__ = ("limit", "steps", "operation")

    def __init__(self, limit: Optional[int], operation: str):
        self.limit = settings.gb_step_budget if limit is None else limit
        self.steps = 0
        self.operation = operation

    def tick(self, n: int = 1):
        self.steps += n
        if self.steps > self.limit:
            raise ResourceBudgetExceeded(self.limit, self.steps, self.operation)


class _Element:
    __slots__ = ("index", "terms", "lt", "lc", "origin")

    def __init__(self, index: int, terms: Terms, lt: Term, lc: int, origin: Optional[Terms]):
        self.index = index
        self.terms = terms
        self.lt = lt
        self.lc = lc
        self.origin = origin


def _find_reducer(by_pos: Dict[int, List[_Element]], t: Term, c: int) -> Tuple[Optional[_Element], bool]:
    p, a, b = t
    best = None
    for el in by_pos.get(p, ()):
        _, ea, eb = el.lt
        if ea <= a and eb <= b:
            if c % el.lc == 0:
                return el, True
            if best is None or el.lc < best.lc:
                best = el
    return best, False


def _reduce(
    terms: Terms,
    by_pos: Dict[int, List[_Element]],
    key: Callable[[Term], tuple],
    budget: _Budget,
    origin: Optional[Terms] = None
) -> Tuple[Terms, Optional[Terms]]:
    """Full strong reduction with coefficient remainders; origin follows every step"""
    h = dict(terms)
    rem: Terms = {}
    while h:
        t = max(h, key=key)
        c = h[t]
        el, exact = _find_reducer(by_pos, t, c)
        if el is not None:
            q = c // el.lc
            if q:
                budget.tick()
                da, db = t[1] - el.lt[1], t[2] - el.lt[2]
                _axpy(h, el.terms, q, da, db)
                if origin is not None:
                    _axpy(origin, el.origin, q, da, db)
            if exact:
                continue
        r = h.pop(t, 0)
        if r:
            rem[t] = r
    return rem, origin


class StrongGB:
    """
    Strong Groebner basis with optional origin tracking

    elements: autoreduced basis vectors, leading coefficients positive
    origin: when tracked, origin[i] expresses elements[i] over the inputs
        exactly (rank = number of inputs)
    """

    def __init__(
        self,
        order: TermOrder,
        rank: int,
        n_inputs: int,
        els: List[_Element],
        tracked: bool,
        steps: int
    ):
        self.order = order
        self.rank = rank
        self.n_inputs = n_inputs
        self.steps = steps
        self.tracked = tracked
        self._key = order.key_function()
        self._els = els
        self._by_pos: Dict[int, List[_Element]] = defaultdict(list)
        for el in els:
            self._by_pos[el.lt[0]].append(el)
        self.elements = [PolyVecXY._wrap(rank, el.terms) for el in els]
        self.origin = [PolyVecXY._wrap(n_inputs, el.origin) for el in els] if tracked else None

    def __len__(self) -> int:
        return len(self._els)

    def _check(self, v: PolyVecXY):
        if v.rank != self.rank:
            raise RankMismatchError(self.rank, v.rank, "normal form")

    def normal_form(self, v: PolyVecXY, budget: Optional[int] = None) -> PolyVecXY:
        self._check(v)
        rem, _ = _reduce(v._terms, self._by_pos, self._key, _Budget(budget, "normal_form"))
        return PolyVecXY._wrap(self.rank, rem)

    def contains(self, v: PolyVecXY) -> bool:
        return self.normal_form(v).is_zero

    def reduce_with_certificate(self, v: PolyVecXY) -> Tuple[PolyVecXY, PolyVecXY]:
        """
        Returns:
            (remainder, coefficients) with v - remainder = sum coefficients_i * input_i

        Raises:
            ValidationError: if the basis was built without origin tracking
        """
        if not self.tracked:
            raise ValidationError("Certificates need a basis built with track=True")
        self._check(v)
        rem, origin = _reduce(v._terms, self._by_pos, self._key, _Budget(None, "certificate"), {})
        coeffs = {t: -c for t, c in origin.items()}
        return PolyVecXY._wrap(self.rank, rem), PolyVecXY._wrap(self.n_inputs, coeffs)

    def constant_rows(self) -> List[List[int]]:
        """Rows of basis elements whose every term has monomial 1"""
        return [vec.constant_row() for vec in self.elements if vec.is_constant]


def _pair_vectors(f: _Element, g: _Element, tracked: bool):
    p, fa, fb = f.lt
    _, ga, gb = g.lt
    A, B = max(fa, ga), max(fb, gb)
    l = f.lc * g.lc // gcd(f.lc, g.lc)

    s: Terms = {}
    _axpy(s, f.terms, -(l // f.lc), A - fa, B - fb)
    _axpy(s, g.terms, l // g.lc, A - ga, B - gb)
    s_origin: Optional[Terms] = None
    if tracked:
        s_origin = {}
        _axpy(s_origin, f.origin, -(l // f.lc), A - fa, B - fb)
        _axpy(s_origin, g.origin, l // g.lc, A - ga, B - gb)
    yield s, s_origin

    if f.lc % g.lc and g.lc % f.lc:
        u, v, _ = igcdex(f.lc, g.lc)
        gv: Terms = {}
        _axpy(gv, f.terms, -int(u), A - fa, B - fb)
        _axpy(gv, g.terms, -int(v), A - ga, B - gb)
        g_origin: Optional[Terms] = None
        if tracked:
            g_origin = {}
            _axpy(g_origin, f.origin, -int(u), A - fa, B - fb)
            _axpy(g_origin, g.origin, -int(v), A - ga, B - gb)
        yield gv, g_origin


def strong_groebner(
    gens: Sequence[PolyVecXY],
    order: TermOrder = TermOrder.POT_GRADED,
    track: bool = False,
    budget: Optional[int] = None,
    rank: Optional[int] = None
) -> StrongGB:
    """
    Strong Groebner basis of the submodule generated by gens

    Relation rows (XY - 1)*e_i are not added here; callers wanting Laurent
    semantics append them (see laurent_rows).

    Args:
        gens: generators of one common rank
        order: term order
        track: record each element's combination of the inputs
        budget: reduction-step limit, defaults to settings.gb_step_budget
        rank: ambient rank, required only when gens is empty

    Raises:
        ResourceBudgetExceeded: when the step budget runs out
    """
    if rank is None:
        if not gens:
            raise ValidationError("strong_groebner needs a rank when no generators are given")
        rank = gens[0].rank
    for g in gens:
        if g.rank != rank:
            raise RankMismatchError(rank, g.rank, "generator")

    key = order.key_function()
    steps = _Budget(budget, "groebner")
    els: List[_Element] = []
    by_pos: Dict[int, List[_Element]] = defaultdict(list)
    pairs: List[tuple] = []

    def add(terms: Terms, origin: Optional[Terms]):
        lt = max(terms, key=key)
        lc = terms[lt]
        if lc < 0:
            terms = {t: -c for t, c in terms.items()}
            if origin is not None:
                origin = {t: -c for t, c in origin.items()}
            lc = -lc
        el = _Element(len(els), terms, lt, lc, origin)
        for other in by_pos[lt[0]]:
            lcm = (lt[0], max(lt[1], other.lt[1]), max(lt[2], other.lt[2]))
            heappush(pairs, (key(lcm), other.index, el.index))
        els.append(el)
        by_pos[lt[0]].append(el)

    for i, g in enumerate(gens):
        origin = {(i, 0, 0): 1} if track else None
        terms, origin = _reduce(g._terms, by_pos, key, steps, origin)
        if terms:
            add(terms, origin)

    while pairs:
        _, i, j = heappop(pairs)
        steps.tick()
        for vec, origin in _pair_vectors(els[i], els[j], track):
            rem, origin = _reduce(vec, by_pos, key, steps, origin)
            if rem:
                add(rem, origin)

    # drop elements whose leading term another element strongly divides
    kept: List[_Element] = []
    for el in sorted(els, key=lambda e: (key(e.lt), e.lc, e.index)):
        p, a, b = el.lt
        if any(
            k.lt[0] == p and k.lt[1] <= a and k.lt[2] <= b and el.lc % k.lc == 0
            for k in kept
        ):
            continue
        kept.append(el)

    kept_by_pos: Dict[int, List[_Element]] = defaultdict(list)
    for el in kept:
        kept_by_pos[el.lt[0]].append(el)
    for el in kept:
        tail = dict(el.terms)
        del tail[el.lt]
        origin = dict(el.origin) if track else None
        tail, origin = _reduce(tail, kept_by_pos, key, steps, origin)
        tail[el.lt] = el.lc
        el.terms = tail
        el.origin = origin

    for new_index, el in enumerate(kept):
        el.index = new_index

    logger.debug(
        f"strong_groebner: {len(gens)} inputs -> {len(kept)} elements "
        f"({len(els)} before autoreduction, {steps.steps} steps, order={order.value})"
    )
    record_groebner_run(order.value, steps.steps, len(kept))
    return StrongGB(order, rank, len(gens), kept, track, steps.steps)


def normal_form(v: PolyVecXY, gb: StrongGB) -> PolyVecXY:
    """Strongly irreducible representative of v modulo the basis"""
    return gb.normal_form(v)


def syzygy_basis(
    gens: Sequence[PolyVecXY],
    relations: Sequence[PolyVecXY] = (),
    laurent: bool = True,
    budget: Optional[int] = None
) -> List[PolyVecXY]:
    """
    Generators of {s : sum s_i * gens_i lies in the relation submodule}

    The generators are lifted into rank D + k as gens_i + e_{D+i}; a POT basis
    of the lifted module (relations padded with zeros) restricted to the
    positions D.. gives the syzygies. With laurent=True both blocks also
    receive the (XY - 1) rows, so the result generates the syzygy module over
    Z[X, X^-1] after decoding.

    Returns:
        rank-k vectors; empty when gens is empty
    """
    if not gens:
        return []
    D, k = gens[0].rank, len(gens)
    for g in list(gens) + list(relations):
        if g.rank != D:
            raise RankMismatchError(D, g.rank, "syzygy input")

    lifted: List[PolyVecXY] = []
    for i, g in enumerate(gens):
        terms = dict(g._terms)
        terms[(D + i, 0, 0)] = 1
        lifted.append(PolyVecXY._wrap(D + k, terms))
    for r in relations:
        lifted.append(PolyVecXY._wrap(D + k, dict(r._terms)))
    if laurent:
        lifted.extend(laurent_rows(D + k))

    gb = strong_groebner(lifted, TermOrder.POT_GRADED, budget=budget, rank=D + k)
    syzygies = []
    for el in gb._els:
        if el.lt[0] >= D:
            syzygies.append(PolyVecXY._wrap(k, {(p - D, a, b): c for (p, a, b), c in el.terms.items()}))
    return syzygies


def constant_intersection(
    gens: Sequence[PolyVecXY],
    rank: int,
    laurent: bool = True,
    budget: Optional[int] = None
) -> IntMatrix:
    """
    Z-generators (in Hermite normal form) of {v in Z^rank : v in module}

    An ELIM_graded basis is computed; an element whose leading monomial is 1
    is constant throughout, and those elements Z-generate the intersection.
    """
    gens = list(gens)
    for g in gens:
        if g.rank != rank:
            raise RankMismatchError(rank, g.rank, "constant_intersection input")
    if laurent:
        gens.extend(laurent_rows(rank))
    gb = strong_groebner(gens, TermOrder.ELIM_GRADED, budget=budget, rank=rank)
    return row_lattice_basis(gb.constant_rows(), rank)
