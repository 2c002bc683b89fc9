"""Semidirect products A x| Z: arithmetic, words, commutators and subgroup structure"""

import re
from enum import Enum
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import sympy
from loguru import logger

from ..utils.errors import (
    NotDivisibleError,
    ParseError,
    RankMismatchError,
    UnassignedVariableError,
    ValidationError,
)
from .fpmod import (
    ModulePresentation,
    elem_equal,
    integer_syzygies,
    restrict_scalars,
    submodule_membership,
)
from .laurent import (
    LaurentPoly,
    LaurentVec,
    X,
    divides,
    format_laurent,
    parse_laurent,
    power_sum,
    taylor_at_one,
)
from .zlinalg import (
    IntMatrix,
    bezout_vector,
    integer_kernel,
    lattice_hits_last_one,
    lattice_point_with_last_one,
)


class GroupElement:
    """(a, z) with (a, z) * (a', z') = (a + X^z a', z + z')"""

    __slots__ = ("a", "z")

    def __init__(self, a: LaurentVec, z: int = 0):
        if not isinstance(a, LaurentVec):
            a = LaurentVec([LaurentPoly.coerce(a)])
        self.a = a
        self.z = int(z)

    @classmethod
    def identity(cls, rank: int = 1) -> "GroupElement":
        return cls(LaurentVec.zero(rank), 0)

    @classmethod
    def of(cls, *coords, z: int = 0) -> "GroupElement":
        """Shorthand: GroupElement.of(poly1, poly2, z=3)"""
        return cls(LaurentVec(coords), z)

    @property
    def rank(self) -> int:
        return self.a.rank

    @property
    def in_base(self) -> bool:
        """True when the element lies in A (z-part zero)"""
        return self.z == 0

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.rank != self.rank:
            raise RankMismatchError(self.rank, other.rank, "group product")
        return GroupElement(self.a + other.a.shift(self.z), self.z + other.z)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.a.shift(-self.z), -self.z)

    def __pow__(self, m: int) -> "GroupElement":
        return GroupElement(self.a * power_sum(self.z, m), self.z * m)

    def conjugate(self, x: "GroupElement") -> "GroupElement":
        """self * x * self^-1"""
        return self * x * self.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.z == other.z and self.a == other.a

    def __hash__(self) -> int:
        return hash((self.a, self.z))

    def __str__(self) -> str:
        return format_group_element(self)

    def __repr__(self) -> str:
        return f"GroupElement({format_group_element(self)!r})"


def format_group_element(g: GroupElement) -> str:
    coords = ", ".join(format_laurent(p) for p in g.a)
    return f"( {coords} ; {g.z} )"


def parse_group_element(text: str, source: Optional[str] = None) -> GroupElement:
    """
    Parse "( p1, ..., pD ; z )"

    Raises:
        ParseError: with the column inside text
    """
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (stripped.startswith("(") and stripped.endswith(")")):
        raise ParseError("group element must look like ( p1, ..., pD ; z )", source, 1, lead + 1)
    body = stripped[1:-1]
    if body.count(";") != 1:
        raise ParseError("expected exactly one ';' before the z-part", source, 1, lead + 2)
    coords_text, z_text = body.split(";")
    try:
        z = int(z_text.strip())
    except ValueError:
        raise ParseError(f"z-part {z_text.strip()!r} is not an integer", source, 1, lead + 2 + len(coords_text) + 1)
    polys = []
    offset = lead + 2
    for chunk in coords_text.split(","):
        try:
            polys.append(parse_laurent(chunk))
        except ParseError as e:
            raise e.relocate(source, 1, offset - 1)
        offset += len(chunk) + 1
    return GroupElement(LaurentVec(polys), z)


def commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    """[x, y] = x^-1 y^-1 x y"""
    return x.inverse() * y.inverse() * x * y


def nested_commutator(elements: Sequence[GroupElement]) -> GroupElement:
    """[[...[x1, x2], x3]..., xn]"""
    if len(elements) < 2:
        raise ValidationError("nested commutator needs at least two elements")
    acc = elements[0]
    for e in elements[1:]:
        acc = commutator(acc, e)
    return acc


def group_arith(op: str, *args) -> GroupElement:
    """
    Dispatch mul, inv, conj and pow

    mul: any number of elements; inv: one element; conj(g, x) = g x g^-1;
    pow(g, m) with m an integer.
    """
    if op == "mul":
        if not args:
            raise ValidationError("mul needs at least one element")
        acc = args[0]
        for g in args[1:]:
            acc = acc * g
        return acc
    if op == "inv" and len(args) == 1:
        return args[0].inverse()
    if op == "conj" and len(args) == 2:
        return args[0].conjugate(args[1])
    if op == "pow" and len(args) == 2:
        return args[0] ** int(args[1])
    raise ValidationError(f"Unknown group operation {op!r} with {len(args)} arguments")


def group_equal(A: ModulePresentation, g: GroupElement, h: GroupElement) -> bool:
    """Equality in A x| Z (a-parts compared modulo relations)"""
    return g.z == h.z and elem_equal(A, g.a, h.a)


class Letter(NamedTuple):
    symbol: Optional[str] = None
    inverse: bool = False
    constant: Optional[GroupElement] = None


class Word:
    """Finite word over variables, their inverses and constants"""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters: Tuple[Letter, ...] = tuple(letters)

    @classmethod
    def var(cls, name: str, inverse: bool = False) -> "Word":
        return cls([Letter(symbol=name, inverse=inverse)])

    @classmethod
    def const(cls, g: GroupElement) -> "Word":
        return cls([Letter(constant=g)])

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        flipped = []
        for letter in reversed(self.letters):
            if letter.constant is not None:
                flipped.append(Letter(constant=letter.constant.inverse()))
            else:
                flipped.append(Letter(symbol=letter.symbol, inverse=not letter.inverse))
        return Word(flipped)

    def variables(self) -> List[str]:
        seen: Dict[str, None] = {}
        for letter in self.letters:
            if letter.symbol is not None:
                seen.setdefault(letter.symbol)
        return list(seen)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        parts = []
        for letter in self.letters:
            if letter.constant is not None:
                parts.append(str(letter.constant))
            else:
                parts.append(f"{letter.symbol}^-1" if letter.inverse else letter.symbol)
        return " ".join(parts) if parts else "e"


def commutator_word(x: Word, y: Word) -> Word:
    return x.inverse() + y.inverse() + x + y


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _WordParser:
    """Letters separated by whitespace: name, name^-1, ( p ; z ), [u, v]"""

    def __init__(self, text: str, source: Optional[str]):
        self.text = text
        self.source = source
        self.i = 0

    def fail(self, message: str):
        raise ParseError(message, self.source, 1, self.i + 1)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def inverse_suffix(self) -> bool:
        if self.text.startswith("^-1", self.i):
            self.i += 3
            return True
        return False

    def constant(self) -> Word:
        start, depth = self.i, 0
        while self.i < len(self.text):
            ch = self.text[self.i]
            depth += {"(": 1, ")": -1}.get(ch, 0)
            self.i += 1
            if depth == 0:
                break
        if depth:
            self.i = start
            self.fail("unbalanced '(' in constant")
        try:
            g = parse_group_element(self.text[start:self.i], self.source)
        except ParseError as e:
            raise e.relocate(self.source, 1, start)
        return Word.const(g.inverse() if self.inverse_suffix() else g)

    def letter(self) -> Word:
        ch = self.text[self.i]
        if ch == "(":
            return self.constant()
        if ch == "[":
            self.i += 1
            left = self.sequence("],")
            if self.i >= len(self.text) or self.text[self.i] != ",":
                self.fail("expected ',' inside commutator")
            self.i += 1
            right = self.sequence("]")
            if self.i >= len(self.text) or self.text[self.i] != "]":
                self.fail("expected ']' closing commutator")
            self.i += 1
            word = commutator_word(left, right)
            return word.inverse() if self.inverse_suffix() else word
        match = _IDENT.match(self.text, self.i)
        if not match:
            self.fail(f"unexpected character {ch!r}")
        self.i = match.end()
        return Word.var(match.group(0), inverse=self.inverse_suffix())

    def sequence(self, stop: str = "") -> Word:
        word = Word()
        self.skip()
        while self.i < len(self.text) and self.text[self.i] not in stop:
            word = word + self.letter()
            self.skip()
        return word


def parse_word(text: str, source: Optional[str] = None) -> Word:
    """
    Parse the word printer's output; "e" is the empty word and [u, v]
    expands to u^-1 v^-1 u v

    Raises:
        ParseError: with the column of the offending character
    """
    if text.strip() == "e":
        return Word()
    parser = _WordParser(text, source)
    word = parser.sequence()
    if parser.i < len(text):
        parser.fail(f"unexpected character {text[parser.i]!r}")
    return word


def evaluate_word(word: Word, assignment: Mapping[str, GroupElement], rank: int = 1) -> GroupElement:
    """
    Left-to-right product after substitution

    Raises:
        UnassignedVariableError: for a variable missing from assignment
    """
    acc = GroupElement.identity(rank)
    for letter in word.letters:
        if letter.constant is not None:
            g = letter.constant
        else:
            if letter.symbol not in assignment:
                raise UnassignedVariableError(letter.symbol)
            g = assignment[letter.symbol]
            if letter.inverse:
                g = g.inverse()
        acc = acc * g
    return acc


def commutator_witness(f: LaurentPoly, k: int) -> Tuple[GroupElement, ...]:
    """
    Elements of Z wr Z whose k-fold nested commutator equals (-f, 0)

    Raises:
        NotDivisibleError: if (X - 1)^k does not divide f
    """
    if k < 1:
        raise ValidationError(f"commutator depth must be at least 1, got {k}")
    if any(taylor_at_one(f, k)):
        raise NotDivisibleError(f"(X - 1)^{k}", format_laurent(f))
    g = divides(X - 1, f)
    if g is None:
        raise NotDivisibleError("X - 1", format_laurent(f))
    shift = GroupElement.of(0, z=-1)
    if k == 1:
        return (shift, GroupElement.of(g, z=0))
    return commutator_witness(g, k - 1) + (shift,)


class StructureKind(str, Enum):
    ALL_IN_A = "all_in_a"
    MIXED = "mixed"


Definition = List[Tuple[int, int]]  # product of generators[i] ** e over (i, e)


def evaluate_definition(generators: Sequence[GroupElement], definition: Definition) -> GroupElement:
    acc = GroupElement.identity(generators[0].rank)
    for i, e in definition:
        acc = acc * generators[i] ** e
    return acc


class SubgroupStructure:
    """
    Decomposition of a finitely generated subgroup <G>

    ALL_IN_A: <G> is the Z-span of the a-parts (lattice).
    MIXED: <G> = {(b, 0) * pivot^m}, with b ranging over the
        Z[X^{+-d}]-module generated by S and pivot = (a, d).
    definitions[i] records S[i] as a product of generators.
    """

    def __init__(
        self,
        presentation: ModulePresentation,
        generators: Sequence[GroupElement],
        kind: StructureKind,
        lattice: Sequence[LaurentVec] = (),
        d: int = 0,
        S: Sequence[LaurentVec] = (),
        pivot: Optional[GroupElement] = None,
        definitions: Sequence[Definition] = (),
        pivot_definition: Definition = ()
    ):
        self.presentation = presentation
        self.generators = tuple(generators)
        self.kind = kind
        self.lattice = tuple(lattice)
        self.d = d
        self.S = tuple(S)
        self.pivot = pivot
        self.definitions = tuple(list(x) for x in definitions)
        self.pivot_definition = list(pivot_definition)

    @property
    def rank(self) -> int:
        return self.presentation.ambient_rank

    def with_pivot(self, pivot: GroupElement) -> "SubgroupStructure":
        """Same structure with another pivot (must still lie in <G> with z-part d)"""
        if self.kind != StructureKind.MIXED or pivot.z != self.d:
            raise ValidationError("replacement pivot must have z-part d on a mixed structure")
        return SubgroupStructure(
            self.presentation, self.generators, self.kind, d=self.d, S=self.S,
            pivot=pivot, definitions=self.definitions
        )

    def describe(self) -> List[str]:
        if self.kind == StructureKind.ALL_IN_A:
            return ["ALL_IN_A"] + [f"L {v}" for v in self.lattice]
        lines = [f"MIXED d={self.d}", f"PIVOT {self.pivot}"]
        return lines + [f"S {v}" for v in self.S]


def subgroup_structure(A: ModulePresentation, gens: Sequence[GroupElement]) -> SubgroupStructure:
    """
    Raises:
        ValidationError: for an empty generator list
    """
    if not gens:
        raise ValidationError("subgroup_structure needs at least one generator")
    for g in gens:
        A.element(g.a)
    zs = [g.z for g in gens]
    if not any(zs):
        return SubgroupStructure(A, gens, StructureKind.ALL_IN_A, lattice=[g.a for g in gens])

    K = len(gens)
    S: List[LaurentVec] = []
    definitions: List[Definition] = []
    for i in range(K):
        for j in range(i + 1, K):
            defn = [(i, 1), (j, 1), (i, -1), (j, -1)]
            S.append(evaluate_definition(gens, defn).a)
            definitions.append(defn)
    kernel = integer_kernel(IntMatrix.from_rows([zs], K))
    for row in kernel.to_rows():
        defn = [(i, e) for i, e in enumerate(row) if e]
        S.append(evaluate_definition(gens, defn).a)
        definitions.append(defn)

    d, coeffs = bezout_vector(zs)
    pivot_definition = [(i, c) for i, c in enumerate(coeffs) if c]
    pivot = evaluate_definition(gens, pivot_definition)
    logger.debug(f"subgroup_structure: d={d}, |S|={len(S)}, pivot={pivot}")
    return SubgroupStructure(
        A, gens, StructureKind.MIXED, d=d, S=S, pivot=pivot,
        definitions=definitions, pivot_definition=pivot_definition
    )


def lattice_membership(A: ModulePresentation, a: LaurentVec, lattice: Sequence[LaurentVec]) -> Optional[List[int]]:
    """Integers y with sum y_i * lattice_i = a in A, or None"""
    basis = integer_syzygies(A, list(lattice) + [-a])
    point = lattice_point_with_last_one(basis)
    return None if point is None else point[:-1]


def base_membership(S: SubgroupStructure, b: LaurentVec) -> Optional[List[LaurentPoly]]:
    """Coefficients in Z[X^{+-d}] writing b over S (MIXED structures), or None"""
    A = S.presentation
    if not S.S:
        return [] if elem_equal(A, b, A.zero()) else None
    restricted, phi = restrict_scalars(A, S.d)
    return submodule_membership(restricted, phi(b), [phi(s) for s in S.S])


def subgroup_membership(g: GroupElement, S: SubgroupStructure) -> bool:
    """True iff g lies in the subgroup described by S"""
    A = S.presentation
    if S.kind == StructureKind.ALL_IN_A:
        if g.z != 0:
            return False
        if elem_equal(A, g.a, A.zero()):
            return True
        return lattice_hits_last_one(integer_syzygies(A, list(S.lattice) + [-g.a]))
    if g.z % S.d:
        return False
    b = g * S.pivot ** (-(g.z // S.d))
    return base_membership(S, b.a) is not None


def affine_matrix(g: GroupElement) -> sympy.Matrix:
    """[[X^z, a], [0, 1]] for rank-1 elements; products match the group law"""
    if g.rank != 1:
        raise RankMismatchError(1, g.rank, "affine_matrix")
    x = sympy.Symbol("X")
    a = sum((c * x ** e for e, c in g.a[0].terms.items()), sympy.Integer(0))
    return sympy.Matrix([[x ** g.z, a], [0, 1]])


def bs_rational(g: GroupElement, p: int) -> Tuple[sympy.Rational, int]:
    """Image of a rank-1 element in Z[1/p] x| Z, i.e. (a(p), z)"""
    if g.rank != 1:
        raise RankMismatchError(1, g.rank, "bs_rational")
    if p == 0:
        raise ValidationError("bs_rational needs a nonzero p")
    return g.a[0].evaluate(p), g.z
