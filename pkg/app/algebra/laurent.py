"""Sparse exact Laurent polynomials over the integers and fixed-rank vectors of them"""

import re
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import sympy

from ..utils.errors import ParseError, RankMismatchError, ValidationError


class LaurentPoly:
    """
    Immutable element of Z[X, X^-1] stored as {exponent: coefficient}

    No stored coefficient is ever zero, so two polynomials are equal exactly
    when their term dictionaries are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        if terms:
            for exponent, coeff in terms.items():
                if coeff:
                    clean[int(exponent)] = int(coeff)
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, clean: Dict[int, int]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._terms = clean
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls._wrap({0: int(c)} if c else {})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._wrap({int(exponent): int(coeff)} if coeff else {})

    @classmethod
    def coerce(cls, value: "IntOrPoly") -> "LaurentPoly":
        """Accept ints where a polynomial is expected"""
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls.constant(value)
        raise TypeError(f"Cannot interpret {type(value).__name__} as a Laurent polynomial")

    # Inspection

    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._terms)

    def items(self) -> List[Tuple[int, int]]:
        """Terms in decreasing exponent order"""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> Optional[int]:
        return max(self._terms) if self._terms else None

    @property
    def valuation(self) -> Optional[int]:
        return min(self._terms) if self._terms else None

    def at_one(self) -> int:
        return sum(self._terms.values())

    def evaluate(self, value) -> sympy.Rational:
        """Exact value at X = value (value must be nonzero if negative exponents occur)"""
        base = sympy.Rational(value)
        return sum((c * base ** e for e, c in self._terms.items()), sympy.Rational(0))

    # Ring operations

    def __add__(self, other: "IntOrPoly") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        result = dict(self._terms)
        for e, c in other._terms.items():
            v = result.get(e, 0) + c
            if v:
                result[e] = v
            else:
                result.pop(e, None)
        return LaurentPoly._wrap(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "IntOrPoly") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "IntOrPoly") -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: "IntOrPoly") -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                k = e1 + e2
                v = result.get(k, 0) + c1 * c2
                if v:
                    result[k] = v
                else:
                    result.pop(k, None)
        return LaurentPoly._wrap(result)

    def __rmul__(self, other: int) -> "LaurentPoly":
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._terms) == 1:
                (e, c), = self._terms.items()
                if c in (1, -1):
                    return LaurentPoly.monomial(-e * (-n), c ** (-n))
            raise ValueError("Only monomial units have negative powers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by X^k"""
        if not k:
            return self
        return LaurentPoly._wrap({e + k: c for e, c in self._terms.items()})

    def stretch(self, d: int) -> "LaurentPoly":
        """Substitute X -> X^d"""
        return LaurentPoly._wrap({e * d: c for e, c in self._terms.items()})

    def compress(self, d: int) -> "LaurentPoly":
        """Substitute X^d -> X; every exponent must be divisible by d"""
        if d == 1:
            return self
        if any(e % d for e in self._terms):
            raise ValidationError(f"Exponents of {self} are not divisible by {d}")
        return LaurentPoly._wrap({e // d: c for e, c in self._terms.items()})

    def reflect(self) -> "LaurentPoly":
        """Substitute X -> X^-1"""
        return LaurentPoly._wrap({-e: c for e, c in self._terms.items()})

    def split_residues(self, d: int) -> List["LaurentPoly"]:
        """Return g_0..g_{d-1} in Z[X^{+-d}] with self = sum X^r g_r"""
        parts: List[Dict[int, int]] = [{} for _ in range(d)]
        for e, c in self._terms.items():
            r = e % d
            parts[r][e - r] = c
        return [LaurentPoly._wrap(p) for p in parts]

    # Identity

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentPoly('{format_laurent(self)}')"


IntOrPoly = Union[int, LaurentPoly]

ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
X = LaurentPoly.monomial(1)


def poly_arith(op: str, f: LaurentPoly, g: Union[LaurentPoly, int]) -> LaurentPoly:
    """
    Dispatch a named ring operation

    Args:
        op: one of add, sub, mul, negate, shift
        f: left operand
        g: right operand, or the exponent k for shift (ignored by negate)

    Returns:
        The exact result in canonical form
    """
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "negate":
        return -f
    if op == "shift":
        if not isinstance(g, int):
            raise ValidationError("shift takes an integer exponent")
        return f.shift(g)
    raise ValidationError(f"Unknown polynomial operation '{op}'")


def divides(p: LaurentPoly, f: LaurentPoly) -> Optional[LaurentPoly]:
    """
    Exact division in Z[X, X^-1]

    Both operands are shifted so their lowest exponent is 0 and the division
    runs as integer polynomial long division. 0 divides only 0.

    Returns:
        h with f = p*h, or None when no such h exists
    """
    if p.is_zero:
        return ZERO if f.is_zero else None
    if f.is_zero:
        return ZERO

    p_low, f_low = p.valuation, f.valuation
    divisor = {e - p_low: c for e, c in p._terms.items()}
    rem = {e - f_low: c for e, c in f._terms.items()}
    top_deg = max(divisor)
    lead = divisor[top_deg]

    quotient: Dict[int, int] = {}
    while rem:
        top = max(rem)
        if top < top_deg:
            return None
        q, r = divmod(rem[top], lead)
        if r:
            return None
        offset = top - top_deg
        quotient[offset] = q
        for e, c in divisor.items():
            k = e + offset
            v = rem.get(k, 0) - q * c
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)

    return LaurentPoly._wrap(quotient).shift(f_low - p_low)


def power_sum(step: int, m: int) -> LaurentPoly:
    """
    Coefficient of a in (a, step)^m, for any integer step

    Sum_{i<m} X^{i*step} for m >= 0 and -Sum_{1<=i<=-m} X^{-i*step} for m < 0.
    """
    terms: Dict[int, int] = {}
    if m >= 0:
        for i in range(m):
            k = i * step
            terms[k] = terms.get(k, 0) + 1
    else:
        for i in range(1, -m + 1):
            k = -i * step
            terms[k] = terms.get(k, 0) - 1
    return LaurentPoly(terms)


def geometric_sum(d: int, m: int) -> LaurentPoly:
    """
    (X^{md} - 1) / (X^d - 1) as a Laurent polynomial

    Args:
        d: step, at least 1
        m: any integer

    Raises:
        ValidationError: if d < 1
    """
    if d < 1:
        raise ValidationError(f"geometric_sum needs d >= 1, got {d}")
    return power_sum(d, m)


def geometric_ratio(e: int, d: int) -> LaurentPoly:
    """(X^d - 1)/(X^e - 1) for e dividing d"""
    if d % e:
        raise ValidationError(f"{e} does not divide {d}")
    return geometric_sum(e, d // e)


def _falling(e: int, j: int) -> int:
    value = 1
    for i in range(j):
        value *= e - i
    return value


def taylor_at_one(f: LaurentPoly, k: int) -> List[int]:
    """
    Derivatives f(1), f'(1), ..., f^(k-1)(1)

    All of them vanish exactly when (X - 1)^k divides f.
    """
    return [sum(c * _falling(e, j) for e, c in f._terms.items()) for j in range(k)]


def x_minus_one_power(k: int) -> LaurentPoly:
    """(X - 1)^k"""
    return (X - 1) ** k


def format_laurent(f: LaurentPoly) -> str:
    """Canonical text: terms in strictly decreasing exponent order"""
    if f.is_zero:
        return "0"
    parts = []
    for i, (e, c) in enumerate(f.items()):
        mag = abs(c)
        body = f"X^{e}" if mag == 1 else f"{mag}*X^{e}"
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[Xx])|(?P<op>[-+*^(){}]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            column = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[column - 1]!r}", column=column)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start + 1))
        pos = match.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> Tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of polynomial", column=len(self.text) + 1)
        self.i += 1
        return tok

    def fail(self, tok: Tuple[str, str, int], expected: str):
        raise ParseError(f"expected {expected}, found {tok[1]!r}", column=tok[2])

    def sign(self) -> int:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            return -1 if tok[1] == "-" else 1
        return 1

    def exponent(self) -> int:
        tok = self.peek()
        closer = None
        if tok and tok[0] == "op" and tok[1] in "({":
            self.i += 1
            closer = ")" if tok[1] == "(" else "}"
        sgn = self.sign()
        tok = self.take()
        if tok[0] != "int":
            self.fail(tok, "an integer exponent")
        value = sgn * int(tok[1])
        if closer:
            tok = self.take()
            if tok[1] != closer:
                self.fail(tok, repr(closer))
        return value

    def monomial(self) -> int:
        self.take()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.i += 1
            return self.exponent()
        return 1

    def term(self) -> Tuple[int, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of polynomial", column=len(self.text) + 1)
        if tok[0] == "int":
            self.i += 1
            coeff = int(tok[1])
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "*":
                self.i += 1
                nxt = self.peek()
                if nxt is None or nxt[0] != "var":
                    self.fail(nxt or ("end", "end of input", len(self.text) + 1), "'X'")
                return coeff, self.monomial()
            if nxt and nxt[0] == "var":
                return coeff, self.monomial()
            return coeff, 0
        if tok[0] == "var":
            return 1, self.monomial()
        self.fail(tok, "a term")

    def parse(self) -> LaurentPoly:
        if not self.tokens:
            raise ParseError("empty polynomial", column=1)
        terms: Dict[int, int] = {}
        sgn = self.sign()
        while True:
            sgn *= self.sign()
            coeff, exponent = self.term()
            terms[exponent] = terms.get(exponent, 0) + sgn * coeff
            tok = self.peek()
            if tok is None:
                break
            if tok[0] == "op" and tok[1] in "+-":
                self.i += 1
                sgn = -1 if tok[1] == "-" else 1
                continue
            self.fail(tok, "'+' or '-'")
        return LaurentPoly(terms)


def parse_laurent(text: str) -> LaurentPoly:
    """
    Parse the polynomial text grammar

    Accepts the canonical printer output as well as whitespace variations,
    implicit exponent 1 (X), bare constants and juxtaposed coefficients (3X^2).

    Raises:
        ParseError: with the 1-based column of the offending character
    """
    return _PolyParser(text).parse()


class LaurentVec:
    """Immutable vector of fixed rank over Z[X, X^-1]"""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Iterable[IntOrPoly]):
        values = tuple(LaurentPoly.coerce(e) for e in entries)
        if not values:
            raise ValidationError("LaurentVec needs a positive rank")
        self._entries = values
        self._hash: Optional[int] = None

    @classmethod
    def zero(cls, rank: int) -> "LaurentVec":
        return cls([ZERO] * rank)

    @classmethod
    def unit(cls, rank: int, index: int, value: IntOrPoly = 1) -> "LaurentVec":
        entries = [ZERO] * rank
        entries[index] = LaurentPoly.coerce(value)
        return cls(entries)

    @property
    def rank(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> Tuple[LaurentPoly, ...]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[LaurentPoly]:
        return iter(self._entries)

    def __getitem__(self, index: int) -> LaurentPoly:
        return self._entries[index]

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self._entries)

    def _check(self, other: "LaurentVec"):
        if not isinstance(other, LaurentVec):
            raise TypeError(f"Expected LaurentVec, got {type(other).__name__}")
        if other.rank != self.rank:
            raise RankMismatchError(self.rank, other.rank)

    def __add__(self, other: "LaurentVec") -> "LaurentVec":
        self._check(other)
        return LaurentVec(a + b for a, b in zip(self._entries, other._entries))

    def __sub__(self, other: "LaurentVec") -> "LaurentVec":
        self._check(other)
        return LaurentVec(a - b for a, b in zip(self._entries, other._entries))

    def __neg__(self) -> "LaurentVec":
        return LaurentVec(-a for a in self._entries)

    def __mul__(self, scalar: IntOrPoly) -> "LaurentVec":
        if not isinstance(scalar, (int, LaurentPoly)):
            return NotImplemented
        return LaurentVec(a * scalar for a in self._entries)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentVec":
        return LaurentVec(a.shift(k) for a in self._entries)

    def map(self, fn) -> "LaurentVec":
        return LaurentVec(fn(a) for a in self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentVec):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._entries)
        return self._hash

    def __str__(self) -> str:
        return "(" + ", ".join(format_laurent(e) for e in self._entries) + ")"

    def __repr__(self) -> str:
        return f"LaurentVec({[format_laurent(e) for e in self._entries]!r})"


def linear_combination(coeffs: Iterable[IntOrPoly], vectors: Iterable[LaurentVec], rank: int) -> LaurentVec:
    """Sum of coeff_i * vector_i (zero vector of the given rank when empty)"""
    total = LaurentVec.zero(rank)
    for c, v in zip(coeffs, vectors):
        total = total + v * c
    return total
