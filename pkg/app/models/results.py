"""
Result records shared by the CLI and the HTTP surface

Every record renders its canonical text with to_text() and maps its
verdict onto the CLI exit code (0 positive, 1 negative, 2 unknown).
"""

from typing import List, Optional

from pydantic import BaseModel, Field

from .instances import Reduction, SystemRecord

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2


class ResultRecord(BaseModel):
    """Base class of all result records"""

    @property
    def exit_code(self) -> int:
        return EXIT_POSITIVE

    def to_text(self) -> str:
        raise NotImplementedError


class GroebnerResult(ResultRecord):
    order: str = Field(..., description="Term order used")
    steps: int = Field(..., description="Reduction steps spent")
    basis: List[str] = Field(default_factory=list, description="Basis vectors in the X, Y encoding")

    def to_text(self) -> str:
        return "\n".join([f"BASIS {len(self.basis)} order={self.order}"] + [f"G {b}" for b in self.basis])


class MembershipResult(ResultRecord):
    member: bool
    coefficients: Optional[List[str]] = Field(None, description="Certificate over the generators")

    @property
    def exit_code(self) -> int:
        return EXIT_POSITIVE if self.member else EXIT_NEGATIVE

    def to_text(self) -> str:
        if not self.member:
            return "NOT MEMBER"
        return f"MEMBER coefficients=({', '.join(self.coefficients or [])})"


class SyzygyResult(ResultRecord):
    generators: List[str] = Field(default_factory=list)

    def to_text(self) -> str:
        return "\n".join([f"SYZYGIES {len(self.generators)}"] + [f"S {g}" for g in self.generators])


class LatticeResult(ResultRecord):
    """Hermite normal form rows of an integer lattice"""
    columns: int
    rows: List[List[int]] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"LATTICE rank={len(self.rows)} columns={self.columns}"]
        return "\n".join(lines + ["ROW " + " ".join(str(x) for x in row) for row in self.rows])


class MonomialRecord(ResultRecord):
    verdict: str
    z: Optional[int] = None
    certificate: Optional[str] = None
    bound: Optional[int] = None
    particular: Optional[str] = None
    annihilator: List[str] = Field(default_factory=list)
    text: str = Field(..., description="Canonical verdict line")

    @property
    def exit_code(self) -> int:
        return {"found": EXIT_POSITIVE, "empty": EXIT_NEGATIVE}.get(self.verdict, EXIT_UNKNOWN)

    def to_text(self) -> str:
        return self.text


class StructureRecord(BaseModel):
    kind: str
    d: int = 0
    pivot: Optional[str] = None
    S: List[str] = Field(default_factory=list)
    lattice: List[str] = Field(default_factory=list)
    lines: List[str] = Field(default_factory=list, description="Canonical description")


class CosetRecord(ResultRecord):
    verdict: str
    case: int
    witness: Optional[str] = None
    bound: Optional[int] = None
    structure_G: StructureRecord
    structure_H: StructureRecord
    text: str

    @property
    def exit_code(self) -> int:
        return {"nonempty": EXIT_POSITIVE, "empty": EXIT_NEGATIVE}.get(self.verdict, EXIT_UNKNOWN)

    def to_text(self) -> str:
        lines = [f"G {line}" for line in self.structure_G.lines]
        lines += [f"H {line}" for line in self.structure_H.lines]
        lines.append(f"CASE {self.case}")
        return "\n".join(lines + [self.text])


class SubgroupRecord(ResultRecord):
    structure: StructureRecord
    membership: List[bool] = Field(default_factory=list, description="One answer per queried element")

    @property
    def exit_code(self) -> int:
        return EXIT_POSITIVE if all(self.membership) else EXIT_NEGATIVE

    def to_text(self) -> str:
        lines = list(self.structure.lines)
        lines += ["MEMBER" if m else "NOT MEMBER" for m in self.membership]
        return "\n".join(lines)


class WordResult(ResultRecord):
    value: str
    matches: Optional[bool] = Field(None, description="Comparison with the expected element")

    @property
    def exit_code(self) -> int:
        return EXIT_NEGATIVE if self.matches is False else EXIT_POSITIVE

    def to_text(self) -> str:
        if self.matches is None:
            return f"VALUE {self.value}"
        return f"VALUE {self.value}\n{'EQUAL' if self.matches else 'NOT EQUAL'}"


class CompileResult(ResultRecord):
    chain: str = Field(..., description="Equation chain, one equation per line")
    system: SystemRecord
    text: str = Field(..., description="Canonical system text")
    assignment: Optional[List[int]] = Field(None, description="Completed assignment of all variables")

    def to_text(self) -> str:
        lines = [self.text]
        if self.assignment is not None:
            lines.append("ASSIGNMENT " + " ".join(str(z) for z in self.assignment))
        return "\n".join(lines)


class CheckResult(ResultRecord):
    satisfied: bool
    rows: List[bool] = Field(default_factory=list, description="Per-row outcome where applicable")

    @property
    def exit_code(self) -> int:
        return EXIT_POSITIVE if self.satisfied else EXIT_NEGATIVE

    def to_text(self) -> str:
        if self.satisfied:
            return "SATISFIED"
        failed = [str(i + 1) for i, ok in enumerate(self.rows) if not ok]
        return f"VIOLATED rows={','.join(failed)}" if failed else "VIOLATED"


class InstanceRecord(ResultRecord):
    reduction: Reduction
    lines: List[str] = Field(default_factory=list, description="Constructed instance")
    verified: Optional[bool] = Field(None, description="Outcome of pushing z through the reduction")

    @property
    def exit_code(self) -> int:
        return EXIT_NEGATIVE if self.verified is False else EXIT_POSITIVE

    def to_text(self) -> str:
        lines = [f"REDUCTION {self.reduction.value}"] + self.lines
        if self.verified is not None:
            lines.append("VERIFIED" if self.verified else "NOT VERIFIED")
        return "\n".join(lines)
