"""Instance records read by the CLI and accepted as HTTP request bodies"""

from enum import Enum
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..algebra.gadgets import GadgetKind
from ..algebra.groebner import TermOrder
from ..utils.errors import ConfigurationError
from ..utils.validators import parse_probe_list

# A bare string is a rank-1 vector; a list gives one polynomial per coordinate.
VectorText = Union[str, List[str]]


class PresentationRecord(BaseModel):
    """Finitely presented module, explicit or by preset name"""
    ambient_rank: int = Field(1, ge=1, description="Rank D of the free module")
    base_step: int = Field(1, ge=1, description="Step d of the scalar ring Z[X^(+-d)]")
    relations: List[VectorText] = Field(default_factory=list, description="Relation generators")
    preset: Optional[str] = Field(
        None, description="wreath, lamplighter:p, baumslag-solitar:p or free:D; overrides the explicit fields"
    )


class SolverOptions(BaseModel):
    """Per-instance overrides of the monomial solver defaults"""
    search_bound: Optional[int] = Field(None, ge=1, description="Bounded search range B")
    probes: Optional[str] = Field(None, description="Probe list q:r,q:r,...")

    @field_validator("probes")
    @classmethod
    def validate_probes(cls, v):
        if v is not None:
            try:
                parse_probe_list(v)
            except ConfigurationError as e:
                raise ValueError(e.message)
        return v


class GroebnerInstance(BaseModel):
    """Strong Groebner basis of a submodule of Z[X^(+-1)]^rank"""
    rank: int = Field(1, ge=1, description="Ambient rank")
    generators: List[VectorText] = Field(..., description="Submodule generators")
    order: TermOrder = Field(TermOrder.POT_GRADED, description="Term order")
    laurent: bool = Field(True, description="Add the XY - 1 rows (Laurent module)")


class MembershipInstance(BaseModel):
    """Is element in the submodule generated by generators, inside presentation?"""
    presentation: PresentationRecord = Field(default_factory=PresentationRecord)
    element: VectorText = Field(..., description="Element to test")
    generators: List[VectorText] = Field(default_factory=list, description="Submodule generators")


class SyzygyInstance(BaseModel):
    """Syzygies of elements of a presented module"""
    presentation: PresentationRecord = Field(default_factory=PresentationRecord)
    elements: List[VectorText] = Field(..., min_length=1, description="Elements a_1..a_k")
    integer: bool = Field(False, description="Only the integer syzygies (Z-lattice)")


class LatticeInstance(BaseModel):
    """Integer points M cap Z^rank of a submodule M of Z[X^(+-1)]^rank"""
    rank: int = Field(..., ge=1, description="Ambient rank")
    generators: List[VectorText] = Field(..., description="Submodule generators")


class MonomialInstance(SolverOptions):
    """X^(zd) * f1 = f0 in a presented Z[X^(+-d)]-module"""
    presentation: PresentationRecord = Field(default_factory=PresentationRecord)
    f1: VectorText = Field(..., description="Orbit start")
    f0: VectorText = Field(..., description="Target")


class CosetInstance(SolverOptions):
    """<G> cap h<H> in A x| Z"""
    presentation: PresentationRecord = Field(default_factory=PresentationRecord)
    G: List[str] = Field(..., min_length=1, description="Generators of the first subgroup")
    H: List[str] = Field(..., min_length=1, description="Generators of the second subgroup")
    h: str = Field(..., description="Translate")


class SubgroupInstance(BaseModel):
    """Structure of <generators> and optional membership queries"""
    presentation: PresentationRecord = Field(default_factory=PresentationRecord)
    generators: List[str] = Field(..., min_length=1, description="Subgroup generators")
    elements: List[str] = Field(default_factory=list, description="Elements to test for membership")


class WordInstance(BaseModel):
    """Evaluate a word under an assignment of its variables"""
    presentation: PresentationRecord = Field(default_factory=PresentationRecord)
    word: str = Field(..., description="Word text, e.g. x [y, z] ( X^1 ; 0 )^-1")
    assignment: Dict[str, str] = Field(default_factory=dict, description="Variable -> group element")
    expect: Optional[str] = Field(None, description="Compare the value against this element")


class ChainOp(str, Enum):
    PROD = "prod"
    SUM = "sum"
    CONST = "const"


class ChainEquationRecord(BaseModel):
    """z_k = z_i * z_j, z_k = z_i + z_j or z_k = b"""
    op: ChainOp
    k: int = Field(..., ge=1)
    i: Optional[int] = Field(None, ge=1)
    j: Optional[int] = Field(None, ge=1)
    b: Optional[int] = None

    @model_validator(mode="after")
    def check_operands(self):
        if self.op == ChainOp.CONST and self.b is None:
            raise ValueError("const equations need b")
        if self.op != ChainOp.CONST and (self.i is None or self.j is None):
            raise ValueError(f"{self.op.value} equations need i and j")
        return self


class GadgetCompileInstance(BaseModel):
    """Integer polynomial or explicit chain, compiled for the target value"""
    polynomial: Optional[str] = Field(None, description="Polynomial in z1, z2, ...")
    n_inputs: Optional[int] = Field(None, ge=1, description="Free variables of an explicit chain")
    chain: List[ChainEquationRecord] = Field(default_factory=list)
    target: int = Field(0, description="Value a the output variable is tied to")
    inputs: Optional[List[int]] = Field(None, description="Also complete this input assignment")

    @model_validator(mode="after")
    def check_source(self):
        if (self.polynomial is None) == (not self.chain):
            raise ValueError("give exactly one of polynomial and chain")
        if self.chain and self.n_inputs is None:
            raise ValueError("an explicit chain needs n_inputs")
        return self


class Modulus(str, Enum):
    ZERO = "0"
    SQUARE_OF_X_MINUS_ONE = "(X-1)^2"
    CUBE_OF_X_MINUS_ONE = "(X-1)^3"


class RowRecord(BaseModel):
    p: Modulus = Field(..., description="Row modulus")
    coeffs: List[str] = Field(..., description="f_1 .. f_n")
    rhs: str = Field("0", description="f_0")


class SystemRecord(BaseModel):
    """Divisibility system in data form; the compiler emits the same shape"""
    n: int = Field(..., ge=0)
    rows: List[RowRecord] = Field(default_factory=list)
    product_blocks: List[List[int]] = Field(default_factory=list)


class GadgetCheckInstance(BaseModel):
    """Evaluate one gadget, the product family or a whole system on z"""
    gadget: Optional[Union[GadgetKind, Literal["product"]]] = None
    system: Optional[SystemRecord] = None
    z: List[int] = Field(..., description="Assignment")

    @model_validator(mode="after")
    def check_target(self):
        if (self.gadget is None) == (self.system is None):
            raise ValueError("give exactly one of gadget and system")
        return self


class Reduction(str, Enum):
    MODULE = "module"
    QUADRATIC = "quadratic"
    KNAPSACK = "knapsack"
    WREATH = "wreath"


class ReductionInstance(BaseModel):
    """Build one reduction of a system and optionally verify an assignment through it"""
    system: SystemRecord
    reduction: Reduction = Field(Reduction.MODULE)
    z: Optional[List[int]] = Field(None, description="Solution of the system to push through")
