"""
Divisibility gadgets and the reductions built on them

A DivisibilitySystem is a list of rows p | X^{z_1} f_1 + ... + X^{z_n} f_n - f_0
with p in {0, (X-1)^2, (X-1)^3}; p = 0 means the expression vanishes. Integer
polynomial equations compile into such systems, and systems compile into
module equations, spherical quadratic equations, knapsack instances and
word systems over Z wr Z.
"""

import re
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import sympy
from loguru import logger
from sympy.parsing.sympy_parser import parse_expr

from ..utils.errors import ArityError, GadgetError, NotDivisibleError, ParseError, ValidationError
from .abc_group import (
    GroupElement,
    Word,
    commutator_witness,
    commutator_word,
    evaluate_word,
    group_equal,
)
from .fpmod import ModulePresentation, elem_equal
from .laurent import ONE, ZERO, LaurentPoly, LaurentVec, X, format_laurent, taylor_at_one

SQUARE_MODULUS = (X - 1) ** 3
SUM_MODULUS = (X - 1) ** 2
_ALLOWED_MODULI = {ZERO: 0, SUM_MODULUS: 2, SQUARE_MODULUS: 3}


class GadgetKind(str, Enum):
    SQUARE = "square"
    SUM = "sum"


def _gadget_coefficients(kind: GadgetKind) -> Tuple[LaurentPoly, Tuple[LaurentPoly, ...], LaurentPoly]:
    """(p, coefficients on z_i, z_j, z_k, rhs)"""
    if kind == GadgetKind.SQUARE:
        return SQUARE_MODULUS, (ONE, 1 - X, ONE), 3 - X
    return SUM_MODULUS, (ONE, ONE, -ONE), ONE


def _divisible(p_order: int, F: LaurentPoly) -> bool:
    if p_order == 0:
        return F.is_zero
    return not any(taylor_at_one(F, p_order))


def gadget_holds(kind: GadgetKind, z: Sequence[int]) -> bool:
    """
    Square: (X-1)^3 | X^{z1} + X^{z2}(1 - X) + X^{z3} + X - 3
    Sum:    (X-1)^2 | X^{z1} + X^{z2} - X^{z3} - 1
    """
    if len(z) != 3:
        raise ArityError(3, len(z))
    p, coeffs, rhs = _gadget_coefficients(GadgetKind(kind))
    F = sum((f.shift(e) for f, e in zip(coeffs, z)), LaurentPoly()) - rhs
    return _divisible(_ALLOWED_MODULI[p], F)


def derive_product_witness(z1: int, z2: int, z3: int) -> Tuple[int, ...]:
    """Auxiliary tuple z1..z12 of the product gadget"""
    return (
        z1, z2, z3,
        z1 * z1, z2 * z2, z1 * z1 + z2 * z2,
        z1 + z2, (z1 + z2) ** 2, 2 * z3,
        -z1, -z2, -z1 - z2,
    )


# (kind, local indices) of the seven product rows; locals are 1-based
PRODUCT_ROWS: Tuple[Tuple[GadgetKind, Tuple[int, int, int]], ...] = (
    (GadgetKind.SQUARE, (1, 4, 10)),
    (GadgetKind.SQUARE, (2, 5, 11)),
    (GadgetKind.SUM, (4, 5, 6)),
    (GadgetKind.SUM, (1, 2, 7)),
    (GadgetKind.SQUARE, (7, 8, 12)),
    (GadgetKind.SUM, (3, 3, 9)),
    (GadgetKind.SUM, (6, 9, 8)),
)


def product_rows_hold(z: Sequence[int]) -> List[bool]:
    """Evaluate the seven product rows on a 12-tuple"""
    if len(z) != 12:
        raise ArityError(12, len(z))
    return [gadget_holds(kind, [z[i - 1] for i in idx]) for kind, idx in PRODUCT_ROWS]


# Equation chains

class Prod(NamedTuple):
    """z_k = z_i * z_j"""
    k: int
    i: int
    j: int


class Sum(NamedTuple):
    """z_k = z_i + z_j"""
    k: int
    i: int
    j: int


class Const(NamedTuple):
    """z_k = b"""
    k: int
    b: int


Equation = Union[Prod, Sum, Const]


class EquationChain:
    """
    Primitive equations over z_1..z_{n_vars}; z_1..z_{n_inputs} are free

    Every other variable is defined exactly once, after the variables it
    reads. `output` is the variable tied to the target value.
    """

    def __init__(
        self,
        n_inputs: int,
        equations: Sequence[Equation] = (),
        output: Optional[int] = None,
        target: Optional[int] = None
    ):
        self.n_inputs = n_inputs
        self.equations = list(equations)
        defined = set(range(1, n_inputs + 1))
        for eq in self.equations:
            reads = (eq.i, eq.j) if not isinstance(eq, Const) else ()
            for v in reads:
                if v not in defined:
                    raise GadgetError(f"{eq!r} reads z{v} before it is defined", {"equation": repr(eq)})
            if eq.k in defined:
                raise GadgetError(f"z{eq.k} is defined twice", {"equation": repr(eq)})
            defined.add(eq.k)
        self.n_vars = max(defined) if defined else 0
        if defined != set(range(1, self.n_vars + 1)):
            raise GadgetError("chain variables must be numbered contiguously from 1")
        if output is None:
            output = self.equations[-1].k if self.equations else n_inputs
        if not 1 <= output <= self.n_vars:
            raise GadgetError(f"output variable z{output} is out of range")
        self.output = output
        self.target = target

    def evaluate(self, inputs: Sequence[int]) -> Tuple[int, ...]:
        """Full assignment z_1..z_{n_vars} determined by the free inputs"""
        if len(inputs) != self.n_inputs:
            raise ArityError(self.n_inputs, len(inputs))
        z = [0] * (self.n_vars + 1)
        z[1:self.n_inputs + 1] = list(inputs)
        for eq in self.equations:
            if isinstance(eq, Prod):
                z[eq.k] = z[eq.i] * z[eq.j]
            elif isinstance(eq, Sum):
                z[eq.k] = z[eq.i] + z[eq.j]
            else:
                z[eq.k] = eq.b
        return tuple(z[1:])

    def __str__(self) -> str:
        lines = []
        for eq in self.equations:
            if isinstance(eq, Prod):
                lines.append(f"z{eq.k} = z{eq.i} * z{eq.j}")
            elif isinstance(eq, Sum):
                lines.append(f"z{eq.k} = z{eq.i} + z{eq.j}")
            else:
                lines.append(f"z{eq.k} = {eq.b}")
        return "\n".join(lines)


Monomials = List[Tuple[int, Tuple[int, ...]]]
_VAR = re.compile(r"^z(\d+)$")


def polynomial_from_text(text: str) -> Tuple[Monomials, int]:
    """
    Integer polynomial in z1, z2, ... to monomial list

    Returns:
        (monomials, number of variables)

    Raises:
        ParseError: when the text is not a polynomial with integer coefficients
    """
    try:
        expr = parse_expr(text.replace("^", "**"), evaluate=True)
    except Exception as e:
        raise ParseError(f"cannot parse polynomial: {e}", line=1, column=1)
    indices = []
    for sym in expr.free_symbols:
        match = _VAR.match(str(sym))
        if not match or int(match.group(1)) < 1:
            raise ParseError(f"unexpected symbol {sym}; variables are z1, z2, ...")
        indices.append(int(match.group(1)))
    n = max(indices) if indices else 1
    gens = sympy.symbols(f"z1:{n + 1}")
    try:
        poly = sympy.Poly(expr, *gens)
    except sympy.PolynomialError as e:
        raise ParseError(f"not a polynomial in z1..z{n}: {e}")
    monomials: Monomials = []
    for exps, c in poly.terms():
        if not c.is_integer:
            raise ParseError(f"coefficient {c} is not an integer")
        monomials.append((int(c), tuple(int(e) for e in exps)))
    return monomials, n


def flatten_polynomial(
    P: Union[str, Monomials],
    a: Optional[int] = None,
    n_vars: Optional[int] = None
) -> EquationChain:
    """
    Equation chain whose output variable equals P(z_1..z_n)

    Monomials go in descending (degree, exponents) order. Powers are built by
    repeated Prod from the right, small coefficients by repeated Sum, other
    coefficients by Const then Prod; terms are accumulated with Sum.
    """
    if isinstance(P, str):
        P, parsed_n = polynomial_from_text(P)
        n_vars = max(n_vars or 0, parsed_n)
    combined: Dict[Tuple[int, ...], int] = {}
    for c, exps in P:
        exps = tuple(exps)
        combined[exps] = combined.get(exps, 0) + c
    width = max([len(e) for e in combined] + [n_vars or 0, 1])
    terms = sorted(
        ((tuple(e) + (0,) * (width - len(e)), c) for e, c in combined.items() if c),
        key=lambda t: (sum(t[0]), t[0]),
        reverse=True,
    )
    n = width
    equations: List[Equation] = []
    counter = [n]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    if not terms:
        k = fresh()
        return EquationChain(n, [Const(k, 0)], output=k, target=a)

    acc: Optional[int] = None
    for exps, c in terms:
        factors = [i + 1 for i, e in enumerate(exps) for _ in range(e)]
        if not factors:
            term = fresh()
            equations.append(Const(term, c))
        else:
            cur = factors[-1]
            for f in reversed(factors[:-1]):
                k = fresh()
                equations.append(Prod(k, f, cur))
                cur = k
            if c == 1:
                term = cur
            elif 2 <= c <= 8:
                term = cur
                for _ in range(c - 1):
                    k = fresh()
                    equations.append(Sum(k, term, cur))
                    term = k
            else:
                const = fresh()
                equations.append(Const(const, c))
                term = fresh()
                equations.append(Prod(term, const, cur))
        if acc is None:
            acc = term
        else:
            k = fresh()
            equations.append(Sum(k, acc, term))
            acc = k
    logger.debug(f"flatten_polynomial: {len(terms)} monomials -> {len(equations)} equations")
    return EquationChain(n, equations, output=acc, target=a)


# Divisibility systems

class DivisibilityRow(NamedTuple):
    p: LaurentPoly
    coeffs: Tuple[LaurentPoly, ...]
    rhs: LaurentPoly


class DivisibilitySystem:
    """
    Rows p | sum X^{z_i} coeffs_i - rhs over n variables

    product_blocks lists, for every compiled product gadget, the global
    indices of its twelve local variables.
    """

    def __init__(
        self,
        n: int,
        rows: Sequence[DivisibilityRow] = (),
        product_blocks: Sequence[Tuple[int, ...]] = ()
    ):
        self.n = n
        checked = []
        for row in rows:
            p = LaurentPoly.coerce(row.p)
            if p not in _ALLOWED_MODULI:
                raise GadgetError(f"row modulus {p} is not 0, (X-1)^2 or (X-1)^3")
            if len(row.coeffs) != n:
                raise GadgetError(f"row has {len(row.coeffs)} coefficients, expected {n}")
            checked.append(DivisibilityRow(
                p, tuple(LaurentPoly.coerce(f) for f in row.coeffs), LaurentPoly.coerce(row.rhs)
            ))
        self.rows = checked
        self.product_blocks = [tuple(b) for b in product_blocks]

    def row_value(self, index: int, z: Sequence[int]) -> LaurentPoly:
        row = self.rows[index]
        total = LaurentPoly()
        for f, e in zip(row.coeffs, z):
            if not f.is_zero:
                total = total + f.shift(e)
        return total - row.rhs

    def __str__(self) -> str:
        return format_system(self)


def modulus_label(p: LaurentPoly) -> str:
    return {0: "0", 2: "(X-1)^2", 3: "(X-1)^3"}[_ALLOWED_MODULI[p]]


def format_system(sys: DivisibilitySystem) -> str:
    """One line per row: p | X^z1*(f1) + ... - (f0)"""
    lines = [f"VARS {sys.n}"]
    for row in sys.rows:
        parts = [f"X^z{i + 1}*({format_laurent(f)})" for i, f in enumerate(row.coeffs) if not f.is_zero]
        body = " + ".join(parts) if parts else "0"
        lines.append(f"{modulus_label(row.p)} | {body} - ({format_laurent(row.rhs)})")
    return "\n".join(lines)


def single_gadget_system(kind: GadgetKind, variables: Tuple[int, int, int], n: int) -> DivisibilitySystem:
    """One gadget row over n variables (1-based indices)"""
    p, coeffs, rhs = _gadget_coefficients(GadgetKind(kind))
    row = [LaurentPoly() for _ in range(n)]
    for v, f in zip(variables, coeffs):
        row[v - 1] = row[v - 1] + f
    return DivisibilitySystem(n, [DivisibilityRow(p, tuple(row), rhs)])


def compile_system(chain: EquationChain, a: Optional[int] = None) -> DivisibilitySystem:
    """
    Translate a chain plus the final tie z_out = a into divisibility rows

    Prod: seven gadget rows with nine fresh auxiliaries (locals 4..12, in
    order); Sum: one (X-1)^2 row; Const and the final tie: 0-rows.
    """
    a = chain.target if a is None else a
    if a is None:
        raise GadgetError("compile_system needs a target value a")
    sparse: List[Tuple[LaurentPoly, Dict[int, LaurentPoly], LaurentPoly]] = []
    blocks: List[Tuple[int, ...]] = []
    next_var = chain.n_vars

    def gadget_row(kind: GadgetKind, variables: Tuple[int, int, int]):
        p, coeffs, rhs = _gadget_coefficients(kind)
        entry: Dict[int, LaurentPoly] = {}
        for v, f in zip(variables, coeffs):
            entry[v] = entry.get(v, LaurentPoly()) + f
        sparse.append((p, entry, rhs))

    for eq in chain.equations:
        if isinstance(eq, Prod):
            local = [eq.i, eq.j, eq.k] + list(range(next_var + 1, next_var + 10))
            next_var += 9
            blocks.append(tuple(local))
            for kind, idx in PRODUCT_ROWS:
                gadget_row(kind, tuple(local[i - 1] for i in idx))
        elif isinstance(eq, Sum):
            gadget_row(GadgetKind.SUM, (eq.i, eq.j, eq.k))
        else:
            sparse.append((ZERO, {eq.k: ONE}, LaurentPoly.monomial(eq.b)))
    sparse.append((ZERO, {chain.output: ONE}, LaurentPoly.monomial(a)))

    n = next_var
    rows = []
    for p, entry, rhs in sparse:
        coeffs = [LaurentPoly() for _ in range(n)]
        for v, f in entry.items():
            coeffs[v - 1] = f
        rows.append(DivisibilityRow(p, tuple(coeffs), rhs))
    logger.debug(f"compile_system: {len(chain.equations)} equations -> {len(rows)} rows over {n} variables")
    return DivisibilitySystem(n, rows, blocks)


def complete_assignment(chain: EquationChain, system: DivisibilitySystem, inputs: Sequence[int]) -> Tuple[int, ...]:
    """Assignment of every system variable forced by the chain inputs"""
    base = list(chain.evaluate(inputs))
    z = base + [0] * (system.n - len(base))
    for block in system.product_blocks:
        i, j, k = block[:3]
        witness = derive_product_witness(z[i - 1], z[j - 1], z[k - 1])
        for idx, value in zip(block[3:], witness[3:]):
            z[idx - 1] = value
    return tuple(z)


def row_status(sys: DivisibilitySystem, z: Sequence[int]) -> List[bool]:
    """
    Raises:
        ArityError: when len(z) != sys.n
    """
    if len(z) != sys.n:
        raise ArityError(sys.n, len(z))
    return [_divisible(_ALLOWED_MODULI[row.p], sys.row_value(k, z)) for k, row in enumerate(sys.rows)]


def evaluate_system(sys: DivisibilitySystem, z: Sequence[int]) -> bool:
    return all(row_status(sys, z))


# Module equations

class ModuleInstance(NamedTuple):
    """X^{z_1} f_1 + ... + X^{z_n} f_n = f_0 in A"""
    presentation: ModulePresentation
    f0: LaurentVec
    fs: Tuple[LaurentVec, ...]


def to_module_instance(sys: DivisibilitySystem) -> ModuleInstance:
    """A = Z[X^{+-1}]^k / (p_j e_j), f_i = (f_i1, ..., f_ik)"""
    k = len(sys.rows)
    if k == 0:
        zero = LaurentVec.zero(1)
        return ModuleInstance(ModulePresentation(1), zero, tuple(zero for _ in range(sys.n)))
    relations = [LaurentVec.unit(k, j, row.p) for j, row in enumerate(sys.rows) if not row.p.is_zero]
    A = ModulePresentation(k, relations)
    fs = tuple(LaurentVec(row.coeffs[i] for row in sys.rows) for i in range(sys.n))
    f0 = LaurentVec(row.rhs for row in sys.rows)
    return ModuleInstance(A, f0, fs)


def module_equation_holds(inst: ModuleInstance, z: Sequence[int]) -> bool:
    if len(z) != len(inst.fs):
        raise ArityError(len(inst.fs), len(z))
    total = LaurentVec.zero(inst.presentation.ambient_rank)
    for f, e in zip(inst.fs, z):
        total = total + f.shift(e)
    return elem_equal(inst.presentation, total, inst.f0)


# Spherical quadratic equations

class QuadraticInstance(NamedTuple):
    presentation: ModulePresentation
    constants: Tuple[GroupElement, ...]  # h_0 = (-f_0, 0), h_i = (f_i, 0)
    word: Word


def to_quadratic_instance(inst: ModuleInstance) -> QuadraticInstance:
    """(g_0 h_0 g_0^-1)(g_1 h_1 g_1^-1)...(g_n h_n g_n^-1) = e"""
    constants = (GroupElement(-inst.f0, 0),) + tuple(GroupElement(f, 0) for f in inst.fs)
    word = Word()
    for i, h in enumerate(constants):
        word = word + Word.var(f"g{i}") + Word.const(h) + Word.var(f"g{i}", inverse=True)
    return QuadraticInstance(inst.presentation, constants, word)


def verify_quadratic(inst: QuadraticInstance, z: Sequence[int]) -> bool:
    """Substitute g_0 = e, g_i = (0, z_i) and test for the identity"""
    n = len(inst.constants) - 1
    if len(z) != n:
        raise ArityError(n, len(z))
    rank = inst.presentation.ambient_rank
    assignment = {"g0": GroupElement.identity(rank)}
    for i, e in enumerate(z, start=1):
        assignment[f"g{i}"] = GroupElement(LaurentVec.zero(rank), e)
    value = evaluate_word(inst.word, assignment, rank)
    return group_equal(inst.presentation, value, GroupElement.identity(rank))


# Knapsack

class KnapsackInstance(NamedTuple):
    presentation: ModulePresentation
    generators: Tuple[GroupElement, ...]  # g_1..g_{n+1}
    target: GroupElement


def to_knapsack_instance(inst: ModuleInstance) -> KnapsackInstance:
    """
    g_1 = (0, 1), g_{i+1} = (h_1...h_i)(0, 1)(h_1...h_i)^-1 and
    target (f_0, 0) h_n^-1 ... h_1^-1, where h_i = (f_i, 0)
    """
    rank = inst.presentation.ambient_rank
    step = GroupElement(LaurentVec.zero(rank), 1)
    prefix = GroupElement.identity(rank)
    generators = [step]
    for f in inst.fs:
        prefix = prefix * GroupElement(f, 0)
        generators.append(prefix.conjugate(step))
    target = GroupElement(inst.f0, 0) * prefix.inverse()
    return KnapsackInstance(inst.presentation, tuple(generators), target)


def module_solution_to_exponents(z: Sequence[int]) -> Tuple[int, ...]:
    """b_1 = z_1, b_i = z_i - z_{i-1}, b_{n+1} = -z_n"""
    b, prev = [], 0
    for value in z:
        b.append(value - prev)
        prev = value
    b.append(-prev)
    return tuple(b)


def exponents_to_module_solution(b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Prefix sums z_i = b_1 + ... + b_i, or None when sum(b) != 0"""
    if sum(b) != 0:
        return None
    z, total = [], 0
    for value in b[:-1]:
        total += value
        z.append(total)
    return tuple(z)


def exponents_to_doubled(b: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return tuple(max(x, 0) for x in b), tuple(max(-x, 0) for x in b)


def verify_knapsack(
    inst: KnapsackInstance,
    b: Optional[Sequence[int]] = None,
    doubled: Optional[Tuple[Sequence[int], Sequence[int]]] = None
) -> bool:
    """
    Check g_1^{b_1}...g_{n+1}^{b_{n+1}} = target, or the doubled form
    g_1^{z_1} (g_1^-1)^{z'_1} ... with nonnegative z, z'
    """
    gens = inst.generators
    rank = inst.presentation.ambient_rank
    value = GroupElement.identity(rank)
    if b is not None:
        if len(b) != len(gens):
            raise ArityError(len(gens), len(b))
        for g, e in zip(gens, b):
            value = value * g ** e
    elif doubled is not None:
        z, z_bar = doubled
        if len(z) != len(gens) or len(z_bar) != len(gens):
            raise ArityError(len(gens), min(len(z), len(z_bar)))
        if any(x < 0 for x in list(z) + list(z_bar)):
            raise ValidationError("doubled knapsack exponents must be nonnegative")
        for g, e, e_bar in zip(gens, z, z_bar):
            value = value * g ** e * g.inverse() ** e_bar
    else:
        raise ValidationError("verify_knapsack needs b or a doubled exponent tuple")
    return group_equal(inst.presentation, value, inst.target)


# Word systems over Z wr Z

class WreathInstance(NamedTuple):
    alphabet: Tuple[str, ...]
    words: Tuple[Word, ...]
    system: DivisibilitySystem


def _commutator_variables(j: int, depth: int) -> List[str]:
    return [f"y{j}_{t}" for t in range(1, depth + 2)]


def to_wreath_instance(sys: DivisibilitySystem) -> WreathInstance:
    """
    Row j: (x_0 h_0j x_0^-1)(x_1 h_1j x_1^-1)...(x_n h_nj x_n^-1), followed by
    [[y_1, y_2], y_3] for p = (X-1)^2 and [[[y_1, y_2], y_3], y_4] for p = (X-1)^3
    """
    alphabet = [f"x{i}" for i in range(sys.n + 1)]
    words = []
    for j, row in enumerate(sys.rows):
        consts = [GroupElement.of(-row.rhs)] + [GroupElement.of(f) for f in row.coeffs]
        word = Word()
        for i, h in enumerate(consts):
            word = word + Word.var(f"x{i}") + Word.const(h) + Word.var(f"x{i}", inverse=True)
        depth = _ALLOWED_MODULI[row.p]
        if depth:
            names = _commutator_variables(j, depth)
            alphabet.extend(names)
            nested = Word.var(names[0])
            for name in names[1:]:
                nested = commutator_word(nested, Word.var(name))
            word = word + nested
        words.append(word)
    return WreathInstance(tuple(alphabet), tuple(words), sys)


def verify_wreath(inst: WreathInstance, b: Sequence[int]) -> bool:
    """
    Homogeneous check: x_i = (0, b_i), commutator variables from
    commutator_witness; True iff every word evaluates to the identity
    """
    sys = inst.system
    if len(b) != sys.n + 1:
        raise ArityError(sys.n + 1, len(b))
    assignment: Dict[str, GroupElement] = {f"x{i}": GroupElement.of(0, z=e) for i, e in enumerate(b)}
    for j, row in enumerate(sys.rows):
        F = sum((f.shift(e) for f, e in zip(row.coeffs, b[1:]) if not f.is_zero), LaurentPoly())
        F = F - row.rhs.shift(b[0])
        depth = _ALLOWED_MODULI[row.p]
        if not depth:
            continue
        try:
            witness = commutator_witness(F, depth)
        except NotDivisibleError:
            return False
        for name, g in zip(_commutator_variables(j, depth), witness):
            assignment[name] = g
    identity = GroupElement.identity(1)
    return all(evaluate_word(w, assignment, 1) == identity for w in inst.words)


def dehomogenize(b: Sequence[int]) -> Tuple[int, ...]:
    """(b_i - b_0) for i = 1..n"""
    return tuple(x - b[0] for x in b[1:])


def homogenize(z: Sequence[int], shift: int = 0) -> Tuple[int, ...]:
    return (shift,) + tuple(x + shift for x in z)
