"""
Coset intersection <G> cap h<H> in A x| Z

Three cases by where the generators live:
  both subgroups inside A      -> integer syzygies with an affine column
  exactly one inside A         -> the same test over the other side's module
  neither                      -> a monomial equation in an extension module
"""

from enum import Enum
from math import gcd
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..utils.errors import PresentationMismatchError, RankMismatchError, ValidationError
from .abc_group import (
    GroupElement,
    StructureKind,
    SubgroupStructure,
    subgroup_membership,
    subgroup_structure,
)
from .fpmod import (
    ModulePresentation,
    embed,
    integer_syzygies,
    quotient,
    restrict_scalars,
    submodule_membership,
)
from .laurent import LaurentVec, X, geometric_ratio, geometric_sum, linear_combination
from .monomial_eq import MonomialSolveResult, SolveConfig, Verdict, solve_monomial
from .zlinalg import lattice_point_with_last_one, solve_affine


class CosetVerdict(str, Enum):
    NONEMPTY = "nonempty"
    EMPTY = "empty"
    UNKNOWN = "unknown"


class Case3Data(BaseModel):
    """Bookkeeping of the monomial-equation case"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    d_G: int
    d_H: int
    d: int
    z_G: int
    z_H: int
    a_prime: LaurentVec
    a_dprime: LaurentVec
    Mprime_gens: List[LaurentVec] = Field(default_factory=list)


class CosetResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    verdict: CosetVerdict
    case: int
    witness: Optional[GroupElement] = None
    bound: Optional[int] = None
    case3: Optional[Case3Data] = None
    monomial: Optional[MonomialSolveResult] = None

    def to_text(self) -> str:
        if self.verdict == CosetVerdict.NONEMPTY:
            return f"NONEMPTY witness={self.witness}" if self.witness is not None else "NONEMPTY"
        if self.verdict == CosetVerdict.EMPTY:
            return "EMPTY"
        return f"UNKNOWN bound={self.bound}"


def _check_inputs(A: ModulePresentation, elements: Sequence[GroupElement]):
    if A.base_step != 1:
        raise ValidationError("coset intersection works over a Z[X^{+-1}]-module")
    for g in elements:
        if g.rank != A.ambient_rank:
            raise RankMismatchError(A.ambient_rank, g.rank, "group element")


def _structure(A: ModulePresentation, gens: Sequence[GroupElement], given: Optional[SubgroupStructure]) -> SubgroupStructure:
    if given is None:
        return subgroup_structure(A, gens)
    if given.presentation != A:
        raise PresentationMismatchError("precomputed structure belongs to another presentation")
    return given


def coset_intersect(
    A: ModulePresentation,
    G: Sequence[GroupElement],
    H: Sequence[GroupElement],
    h: GroupElement,
    cfg: Optional[SolveConfig] = None,
    structures: Tuple[Optional[SubgroupStructure], Optional[SubgroupStructure]] = (None, None)
) -> CosetResult:
    """
    Decide whether <G> cap h<H> is empty

    Args:
        structures: optional precomputed (struct(G), struct(H)); lets callers
            pin a particular pivot

    Raises:
        PresentationMismatchError, RankMismatchError: on inconsistent inputs
    """
    if not G or not H:
        raise ValidationError("coset_intersect needs nonempty generator lists")
    _check_inputs(A, list(G) + list(H) + [h])
    cfg = cfg or SolveConfig()
    SG = _structure(A, G, structures[0])
    SH = _structure(A, H, structures[1])

    g_in_a = SG.kind == StructureKind.ALL_IN_A
    h_in_a = SH.kind == StructureKind.ALL_IN_A
    if g_in_a and h_in_a:
        result = _both_in_base(A, SG, SH, h)
    elif g_in_a:
        swapped = _one_in_base(A, SH, SG, h.inverse())
        witness = h * swapped.witness if swapped.witness is not None else None
        result = CosetResult(verdict=swapped.verdict, case=2, witness=witness)
    elif h_in_a:
        result = _one_in_base(A, SG, SH, h)
    else:
        result = _neither_in_base(A, SG, SH, h, cfg)

    if result.witness is not None and not verify_coset_witness(A, G, H, h, result.witness, (SG, SH)):
        logger.warning(f"coset_intersect: dropping unverifiable witness {result.witness}")
        result.witness = None
    logger.debug(f"coset_intersect: case {result.case} -> {result.verdict.value}")
    return result


def _both_in_base(A: ModulePresentation, SG: SubgroupStructure, SH: SubgroupStructure, h: GroupElement) -> CosetResult:
    if h.z != 0:
        return CosetResult(verdict=CosetVerdict.EMPTY, case=1)
    K = len(SG.lattice)
    elems = list(SG.lattice) + [-v for v in SH.lattice] + [-h.a]
    point = lattice_point_with_last_one(integer_syzygies(A, elems))
    if point is None:
        return CosetResult(verdict=CosetVerdict.EMPTY, case=1)
    witness_a = linear_combination(point[:K], SG.lattice, A.ambient_rank)
    return CosetResult(verdict=CosetVerdict.NONEMPTY, case=1, witness=GroupElement(witness_a, 0))


def _one_in_base(A: ModulePresentation, SG: SubgroupStructure, SH: SubgroupStructure, h: GroupElement) -> CosetResult:
    """SG mixed, SH inside A"""
    d_G = SG.d
    if h.z % d_G:
        return CosetResult(verdict=CosetVerdict.EMPTY, case=2)
    m = h.z // d_G
    restricted, phi = restrict_scalars(A, d_G)
    Q = quotient(restricted, [phi(s) for s in SG.S])
    shifted = [v.shift(h.z) for v in SH.lattice]
    affine = h.a - SG.pivot.a * geometric_sum(d_G, m)
    point = lattice_point_with_last_one(integer_syzygies(Q, [phi(v) for v in shifted] + [phi(affine)]))
    if point is None:
        return CosetResult(verdict=CosetVerdict.EMPTY, case=2)
    c = linear_combination(point[:-1], SH.lattice, A.ambient_rank)
    witness = GroupElement(h.a + c.shift(h.z), h.z)
    return CosetResult(verdict=CosetVerdict.NONEMPTY, case=2, witness=witness)


def _mprime_generators(SG: SubgroupStructure, SH: SubgroupStructure, z_h: int, d: int) -> Tuple[List[LaurentVec], int]:
    """Z[X^{+-d}]-generators of M_G + X^{z_h} M_H; returns (gens, number from the G side)"""
    gens = [s.shift(r * SG.d) for s in SG.S for r in range(d // SG.d)]
    n_g = len(gens)
    gens += [s.shift(z_h + r * SH.d) for s in SH.S for r in range(d // SH.d)]
    return gens, n_g


def _neither_in_base(
    A: ModulePresentation,
    SG: SubgroupStructure,
    SH: SubgroupStructure,
    h: GroupElement,
    cfg: SolveConfig
) -> CosetResult:
    d_G, d_H, z_h = SG.d, SH.d, h.z
    affine = solve_affine(d_G, d_H, z_h)
    if affine is None:
        return CosetResult(verdict=CosetVerdict.EMPTY, case=3)
    m, n = affine
    d = d_G * d_H // gcd(d_G, d_H)
    z_G, z_H = m * d_G, n * d_H
    a_G, a_H = SG.pivot.a, SH.pivot.a

    step_G = geometric_ratio(d_G, d)
    step_H = geometric_ratio(d_H, d)
    a_prime = (a_G * step_G - a_H * step_H).shift(z_G)
    a_dprime = a_G * step_G - (a_H * step_H).shift(z_h) + h.a * (X ** d - 1)
    mprime, n_g = _mprime_generators(SG, SH, z_h, d)
    data = Case3Data(
        d_G=d_G, d_H=d_H, d=d, z_G=z_G, z_H=z_H,
        a_prime=a_prime, a_dprime=a_dprime, Mprime_gens=mprime
    )

    def T(k: int) -> LaurentVec:
        mk = (z_G + k * d) // d_G
        nk = (z_H + k * d) // d_H
        return a_G * geometric_sum(d_G, mk) - (a_H * geometric_sum(d_H, nk)).shift(z_h) - h.a

    restricted, phi = restrict_scalars(A, d)
    width = phi.target_rank
    eps = LaurentVec.unit(width + 1, width)
    rels = [embed(r, width + 1, 0) for r in restricted.relations]
    rels += [embed(phi(g), width + 1, 0) for g in mprime]
    rels.append(embed(-phi(a_prime), width + 1, 0) + eps * (X ** d - 1))
    extended = ModulePresentation(width + 1, rels, d)
    target = eps - embed(phi(T(0)), width + 1, 0)

    logger.debug(f"coset case 3: d_G={d_G}, d_H={d_H}, d={d}, (m, n)=({m}, {n}), |M'|={len(mprime)}")
    solved = solve_monomial(extended, eps, target, cfg)
    if solved.verdict == Verdict.EMPTY:
        return CosetResult(verdict=CosetVerdict.EMPTY, case=3, case3=data, monomial=solved)
    if solved.verdict == Verdict.UNKNOWN:
        return CosetResult(verdict=CosetVerdict.UNKNOWN, case=3, case3=data, monomial=solved, bound=solved.bound)

    k = solved.z
    witness = None
    coeffs = submodule_membership(restricted, phi(T(k)), [phi(g) for g in mprime])
    if coeffs is not None:
        g_part = linear_combination(coeffs[:n_g], mprime[:n_g], A.ambient_rank)
        mk = (z_G + k * d) // d_G
        witness = GroupElement(a_G * geometric_sum(d_G, mk) - g_part, mk * d_G)
    return CosetResult(
        verdict=CosetVerdict.NONEMPTY, case=3, witness=witness, case3=data, monomial=solved
    )


def verify_coset_witness(
    A: ModulePresentation,
    G: Sequence[GroupElement],
    H: Sequence[GroupElement],
    h: GroupElement,
    w: GroupElement,
    structures: Tuple[Optional[SubgroupStructure], Optional[SubgroupStructure]] = (None, None)
) -> bool:
    """True iff w lies in <G> and h^-1 w lies in <H>"""
    SG = _structure(A, G, structures[0])
    SH = _structure(A, H, structures[1])
    return subgroup_membership(w, SG) and subgroup_membership(h.inverse() * w, SH)
