"""
Toolkit service: instance records in, result records out

Shared by the command-line front end and the HTTP routers. Converts records
into algebra objects (with line/column diagnostics against the source
document), runs the decision procedures, logs every computation and records
verdict metrics.
"""

import functools
import time
from typing import Callable, Optional, Type, TypeVar

import pydantic
from loguru import logger

from ..algebra.abc_group import (
    GroupElement,
    SubgroupStructure,
    StructureKind,
    evaluate_word,
    group_equal,
    parse_group_element,
    parse_word,
    subgroup_membership,
    subgroup_structure,
)
from ..algebra.coset_intersection import coset_intersect
from ..algebra.fpmod import (
    ModulePresentation,
    canonical_form,
    integer_syzygies,
    named_presentation,
    submodule_membership,
    syzygies_in_quotient,
)
from ..algebra.gadgets import (
    SQUARE_MODULUS,
    SUM_MODULUS,
    Const,
    DivisibilityRow,
    DivisibilitySystem,
    EquationChain,
    Prod,
    Sum,
    compile_system,
    complete_assignment,
    exponents_to_doubled,
    flatten_polynomial,
    format_system,
    gadget_holds,
    homogenize,
    modulus_label,
    module_equation_holds,
    module_solution_to_exponents,
    product_rows_hold,
    row_status,
    to_knapsack_instance,
    to_module_instance,
    to_quadratic_instance,
    to_wreath_instance,
    verify_knapsack,
    verify_quadratic,
    verify_wreath,
)
from ..algebra.groebner import constant_intersection, encode_laurent, laurent_rows, strong_groebner
from ..algebra.laurent import ZERO, LaurentPoly, LaurentVec, format_laurent, parse_laurent
from ..algebra.monomial_eq import SolveConfig, solve_monomial
from ..config import Settings
from ..models.instances import (
    ChainOp,
    CosetInstance,
    GadgetCheckInstance,
    GadgetCompileInstance,
    GroebnerInstance,
    LatticeInstance,
    MembershipInstance,
    MonomialInstance,
    PresentationRecord,
    ReductionInstance,
    Reduction,
    RowRecord,
    SolverOptions,
    SubgroupInstance,
    SyzygyInstance,
    SystemRecord,
    VectorText,
    WordInstance,
)
from ..models.results import (
    CheckResult,
    CompileResult,
    CosetRecord,
    GroebnerResult,
    InstanceRecord,
    LatticeResult,
    MembershipResult,
    MonomialRecord,
    ResultRecord,
    StructureRecord,
    SubgroupRecord,
    SyzygyResult,
    WordResult,
)
from ..utils.errors import ParseError, RankMismatchError, ToolkitException
from ..utils.logging import computation_logger
from ..utils.metrics import record_verdict
from ..utils.validators import ValidationUtils, parse_probe_list

M = TypeVar("M", bound=pydantic.BaseModel)

_VERDICT_NAMES = {0: "positive", 1: "negative", 2: "unknown"}
_MODULI = {modulus_label(p): p for p in (ZERO, SUM_MODULUS, SQUARE_MODULUS)}


class InputSource:
    """The raw document a record was read from, for error positions"""

    def __init__(self, text: Optional[str] = None, name: Optional[str] = None):
        self.text = text
        self.name = name

    def locate(self, error: ParseError, needle: str) -> ParseError:
        """Move a diagnostic about the string needle to its place in the document"""
        if self.text is None:
            return error.relocate(self.name)
        line, column = ValidationUtils.locate_in_json(self.text, needle)
        return error.relocate(self.name, line, column - 1)


def _logged(procedure: str) -> Callable:
    """Log and time one service call; verdict metrics follow the record's exit code"""
    def decorator(fn: Callable[..., ResultRecord]) -> Callable[..., ResultRecord]:
        @functools.wraps(fn)
        def wrapper(self, *args, **kwargs) -> ResultRecord:
            started = time.perf_counter()
            try:
                result = fn(self, *args, **kwargs)
            except ToolkitException as e:
                computation_logger.log_computation(
                    procedure, fn.__name__, time.perf_counter() - started,
                    success=False, error=e.message, code=e.code
                )
                raise
            duration = time.perf_counter() - started
            verdict = _VERDICT_NAMES.get(result.exit_code, "unknown")
            computation_logger.log_computation(procedure, fn.__name__, duration, verdict=verdict)
            record_verdict(procedure, verdict, duration)
            return result
        return wrapper
    return decorator


class ToolkitService:
    """Record-level entry points for every subcommand"""

    def __init__(self, settings: Settings):
        self.settings = settings

    # Parsing

    def load(self, model: Type[M], text: str, source: Optional[str] = None) -> M:
        """
        Parse a JSON instance document into a record

        Raises:
            ParseError: for malformed JSON or a record that fails validation
        """
        data = ValidationUtils.load_json(text, source)
        try:
            return model.model_validate(data)
        except pydantic.ValidationError as e:
            err = e.errors()[0]
            keys = [p for p in err["loc"] if isinstance(p, str)]
            line, column = ValidationUtils.locate_in_json(text, keys[-1]) if keys else (1, 1)
            where = ".".join(str(p) for p in err["loc"]) or "document"
            raise ParseError(f"{where}: {err['msg']}", source, line, column)

    def _poly(self, text: str, src: InputSource) -> LaurentPoly:
        try:
            return parse_laurent(text)
        except ParseError as e:
            raise src.locate(e, text)

    def _vector(self, value: VectorText, rank: int, src: InputSource) -> LaurentVec:
        entries = [value] if isinstance(value, str) else list(value)
        if len(entries) != rank:
            raise RankMismatchError(rank, len(entries), f"vector {value!r}")
        return LaurentVec(self._poly(e, src) for e in entries)

    def _presentation(self, rec: PresentationRecord, src: InputSource) -> ModulePresentation:
        if rec.preset:
            return named_presentation(rec.preset)
        rels = [self._vector(r, rec.ambient_rank, src) for r in rec.relations]
        return ModulePresentation(rec.ambient_rank, rels, rec.base_step)

    def _group_element(self, text: str, rank: int, src: InputSource) -> GroupElement:
        try:
            g = parse_group_element(text)
        except ParseError as e:
            raise src.locate(e, text)
        if g.rank != rank:
            raise RankMismatchError(rank, g.rank, f"group element {text!r}")
        return g

    def _solve_config(
        self,
        options: SolverOptions,
        bound: Optional[int] = None,
        probes: Optional[str] = None
    ) -> SolveConfig:
        """Command-line flags override the record, the record overrides settings"""
        values = {}
        search_bound = bound or options.search_bound
        if search_bound is not None:
            values["search_bound"] = search_bound
        probe_text = probes if probes is not None else options.probes
        if probe_text is not None:
            values["probe_list"] = parse_probe_list(probe_text)
        return SolveConfig(**values)

    def _system(self, rec: SystemRecord, src: InputSource) -> DivisibilitySystem:
        rows = [
            DivisibilityRow(
                _MODULI[row.p.value],
                tuple(self._poly(f, src) for f in row.coeffs),
                self._poly(row.rhs, src),
            )
            for row in rec.rows
        ]
        return DivisibilitySystem(rec.n, rows, [tuple(b) for b in rec.product_blocks])

    @staticmethod
    def _system_record(sys: DivisibilitySystem) -> SystemRecord:
        return SystemRecord(
            n=sys.n,
            rows=[
                RowRecord(
                    p=modulus_label(row.p),
                    coeffs=[format_laurent(f) for f in row.coeffs],
                    rhs=format_laurent(row.rhs),
                )
                for row in sys.rows
            ],
            product_blocks=[list(b) for b in sys.product_blocks],
        )

    @staticmethod
    def _structure_record(S: SubgroupStructure) -> StructureRecord:
        return StructureRecord(
            kind=S.kind.value,
            d=S.d,
            pivot=str(S.pivot) if S.pivot is not None else None,
            S=[str(v) for v in S.S],
            lattice=[str(v) for v in S.lattice],
            lines=S.describe(),
        )

    # Module computations

    @_logged("groebner")
    def groebner(self, inst: GroebnerInstance, src: Optional[InputSource] = None) -> GroebnerResult:
        src = src or InputSource()
        gens = [encode_laurent(self._vector(g, inst.rank, src)) for g in inst.generators]
        if inst.laurent:
            gens += laurent_rows(inst.rank)
        gb = strong_groebner(gens, inst.order, rank=inst.rank)
        return GroebnerResult(order=inst.order.value, steps=gb.steps, basis=[e.to_text() for e in gb.elements])

    @_logged("membership")
    def member(self, inst: MembershipInstance, src: Optional[InputSource] = None) -> MembershipResult:
        src = src or InputSource()
        A = self._presentation(inst.presentation, src)
        a = self._vector(inst.element, A.ambient_rank, src)
        gens = [self._vector(g, A.ambient_rank, src) for g in inst.generators]
        coeffs = submodule_membership(A, a, gens)
        if coeffs is None:
            return MembershipResult(member=False)
        return MembershipResult(member=True, coefficients=[format_laurent(c) for c in coeffs])

    @_logged("syzygy")
    def syzygy(self, inst: SyzygyInstance, src: Optional[InputSource] = None) -> ResultRecord:
        src = src or InputSource()
        A = self._presentation(inst.presentation, src)
        elems = [self._vector(e, A.ambient_rank, src) for e in inst.elements]
        if inst.integer:
            basis = integer_syzygies(A, elems)
            return LatticeResult(columns=len(elems), rows=basis.to_rows())
        return SyzygyResult(generators=[str(s) for s in syzygies_in_quotient(A, elems)])

    @_logged("zlattice")
    def zlattice(self, inst: LatticeInstance, src: Optional[InputSource] = None) -> LatticeResult:
        src = src or InputSource()
        gens = [encode_laurent(self._vector(g, inst.rank, src)) for g in inst.generators]
        basis = constant_intersection(gens, inst.rank)
        return LatticeResult(columns=inst.rank, rows=basis.to_rows())

    # Decision procedures

    @_logged("monomial")
    def solve_monomial(
        self,
        inst: MonomialInstance,
        src: Optional[InputSource] = None,
        bound: Optional[int] = None,
        probes: Optional[str] = None
    ) -> MonomialRecord:
        src = src or InputSource()
        A = self._presentation(inst.presentation, src)
        f1 = self._vector(inst.f1, A.ambient_rank, src)
        f0 = self._vector(inst.f0, A.ambient_rank, src)
        res = solve_monomial(A, f1, f0, self._solve_config(inst, bound, probes))
        return MonomialRecord(
            verdict=res.verdict.value,
            z=res.z,
            certificate=res.certificate.describe() if res.certificate else None,
            bound=res.bound,
            particular=res.particular,
            annihilator=res.annihilator,
            text=res.to_text(),
        )

    @_logged("coset")
    def coset(
        self,
        inst: CosetInstance,
        src: Optional[InputSource] = None,
        bound: Optional[int] = None,
        probes: Optional[str] = None
    ) -> CosetRecord:
        src = src or InputSource()
        A = self._presentation(inst.presentation, src)
        D = A.ambient_rank
        G = [self._group_element(g, D, src) for g in inst.G]
        H = [self._group_element(g, D, src) for g in inst.H]
        h = self._group_element(inst.h, D, src)
        SG, SH = subgroup_structure(A, G), subgroup_structure(A, H)
        res = coset_intersect(A, G, H, h, self._solve_config(inst, bound, probes), structures=(SG, SH))
        return CosetRecord(
            verdict=res.verdict.value,
            case=res.case,
            witness=str(res.witness) if res.witness is not None else None,
            bound=res.bound,
            structure_G=self._structure_record(SG),
            structure_H=self._structure_record(SH),
            text=res.to_text(),
        )

    @_logged("subgroup")
    def subgroup(self, inst: SubgroupInstance, src: Optional[InputSource] = None) -> SubgroupRecord:
        src = src or InputSource()
        A = self._presentation(inst.presentation, src)
        D = A.ambient_rank
        S = subgroup_structure(A, [self._group_element(g, D, src) for g in inst.generators])
        membership = [subgroup_membership(self._group_element(e, D, src), S) for e in inst.elements]
        if S.kind == StructureKind.MIXED:
            logger.debug(f"subgroup: d={S.d}, {len(S.S)} module generators")
        return SubgroupRecord(structure=self._structure_record(S), membership=membership)

    @_logged("word")
    def eval_word(self, inst: WordInstance, src: Optional[InputSource] = None) -> WordResult:
        src = src or InputSource()
        A = self._presentation(inst.presentation, src)
        D = A.ambient_rank
        try:
            word = parse_word(inst.word)
        except ParseError as e:
            raise src.locate(e, inst.word)
        assignment = {name: self._group_element(text, D, src) for name, text in inst.assignment.items()}
        value = evaluate_word(word, assignment, D)
        shown = GroupElement(canonical_form(A, value.a), value.z)
        matches = None
        if inst.expect is not None:
            matches = group_equal(A, value, self._group_element(inst.expect, D, src))
        return WordResult(value=str(shown), matches=matches)

    # Gadgets and reductions

    @_logged("gadget_compile")
    def gadget_compile(self, inst: GadgetCompileInstance, src: Optional[InputSource] = None) -> CompileResult:
        src = src or InputSource()
        if inst.polynomial is not None:
            try:
                chain = flatten_polynomial(inst.polynomial, a=inst.target)
            except ParseError as e:
                raise src.locate(e, inst.polynomial)
        else:
            chain = EquationChain(inst.n_inputs, [self._equation(eq) for eq in inst.chain], target=inst.target)
        system = compile_system(chain, inst.target)
        assignment = None
        if inst.inputs is not None:
            assignment = list(complete_assignment(chain, system, inst.inputs))
        return CompileResult(
            chain=str(chain),
            system=self._system_record(system),
            text=format_system(system),
            assignment=assignment,
        )

    @staticmethod
    def _equation(rec):
        if rec.op == ChainOp.PROD:
            return Prod(rec.k, rec.i, rec.j)
        if rec.op == ChainOp.SUM:
            return Sum(rec.k, rec.i, rec.j)
        return Const(rec.k, rec.b)

    @_logged("gadget_check")
    def gadget_check(self, inst: GadgetCheckInstance, src: Optional[InputSource] = None) -> CheckResult:
        src = src or InputSource()
        if inst.gadget == "product":
            rows = product_rows_hold(inst.z)
        elif inst.gadget is not None:
            rows = [gadget_holds(inst.gadget, inst.z)]
        else:
            rows = row_status(self._system(inst.system, src), inst.z)
        return CheckResult(satisfied=all(rows), rows=rows)

    @_logged("instance")
    def instance(self, inst: ReductionInstance, src: Optional[InputSource] = None) -> InstanceRecord:
        src = src or InputSource()
        system = self._system(inst.system, src)
        z = inst.z
        if inst.reduction == Reduction.WREATH:
            wreath = to_wreath_instance(system)
            lines = ["ALPHABET " + " ".join(wreath.alphabet)]
            lines += [f"W{j + 1} {w}" for j, w in enumerate(wreath.words)]
            verified = verify_wreath(wreath, homogenize(z)) if z is not None else None
            return InstanceRecord(reduction=inst.reduction, lines=lines, verified=verified)

        module = to_module_instance(system)
        if inst.reduction == Reduction.MODULE:
            lines = [f"MODULE {module.presentation!r}", f"F0 {module.f0}"]
            lines += [f"F{i + 1} {f}" for i, f in enumerate(module.fs)]
            verified = module_equation_holds(module, z) if z is not None else None
        elif inst.reduction == Reduction.QUADRATIC:
            quadratic = to_quadratic_instance(module)
            lines = [f"MODULE {module.presentation!r}", f"WORD {quadratic.word}"]
            verified = verify_quadratic(quadratic, z) if z is not None else None
        else:
            knapsack = to_knapsack_instance(module)
            lines = [f"MODULE {module.presentation!r}"]
            lines += [f"G{i + 1} {g}" for i, g in enumerate(knapsack.generators)]
            lines.append(f"TARGET {knapsack.target}")
            verified = None
            if z is not None:
                b = module_solution_to_exponents(z)
                verified = verify_knapsack(knapsack, b=b) and verify_knapsack(knapsack, doubled=exponents_to_doubled(b))
        return InstanceRecord(reduction=inst.reduction, lines=lines, verified=verified)
