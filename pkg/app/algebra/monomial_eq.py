"""
Three-valued solver for X^{zd} * f1 = f0 in a finitely presented Z[X^{+-d}]-module

Every Found is re-verified; every Empty carries a certificate (a period of
the orbit of f1, a finite probe ring separating f0 from the orbit, or f0
lying outside the cyclic submodule spanned by f1). Anything else is
Unknown with the exhausted bound.
"""

from enum import Enum
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, Field, field_validator
from sympy import divisors

from ..config import settings
from ..utils.validators import validate_positive_bound, validate_probes_field
from .fpmod import ElementLike, ModulePresentation, annihilator, elem_equal, submodule_membership
from .laurent import LaurentVec, format_laurent
from .zlinalg import reduce_mod_p, rref_mod_p


class Verdict(str, Enum):
    FOUND = "found"
    EMPTY = "empty"
    UNKNOWN = "unknown"


class CertificateKind(str, Enum):
    PERIOD = "period"
    PROBE = "probe"
    SPAN = "span"


class SolveConfig(BaseModel):
    """Search bound and probe rings; defaults come from settings"""
    search_bound: int = Field(default_factory=lambda: settings.search_bound)
    probe_list: List[Tuple[int, int]] = Field(default_factory=lambda: settings.default_probes)
    probe_search_cap: int = Field(default_factory=lambda: settings.probe_search_cap)

    @field_validator("search_bound", "probe_search_cap")
    @classmethod
    def check_bound(cls, v: int) -> int:
        return validate_positive_bound(cls, v)

    @field_validator("probe_list")
    @classmethod
    def check_probes(cls, v: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        return validate_probes_field(cls, v)


class Certificate(BaseModel):
    kind: CertificateKind
    period: Optional[int] = None
    probes: List[Tuple[int, int]] = Field(default_factory=list)

    def describe(self) -> str:
        if self.kind == CertificateKind.PERIOD:
            return f"period={self.period}"
        if self.kind == CertificateKind.PROBE:
            return "probe=" + ",".join(f"{q}:{r}" for q, r in self.probes)
        return "span"


class ProbeResult(BaseModel):
    """Exact residues {z mod period : X^{zd} f1 = f0} in the probe image"""
    q: int
    r: int
    period: int
    residues: List[int]


class MonomialSolveResult(BaseModel):
    verdict: Verdict
    z: Optional[int] = None
    certificate: Optional[Certificate] = None
    bound: Optional[int] = None
    particular: Optional[str] = None
    annihilator: List[str] = Field(default_factory=list)
    probe_results: List[ProbeResult] = Field(default_factory=list)

    @classmethod
    def found(cls, z: int, **kwargs) -> "MonomialSolveResult":
        return cls(verdict=Verdict.FOUND, z=z, **kwargs)

    @classmethod
    def empty(cls, certificate: Certificate, **kwargs) -> "MonomialSolveResult":
        return cls(verdict=Verdict.EMPTY, certificate=certificate, **kwargs)

    def to_text(self) -> str:
        if self.verdict == Verdict.FOUND:
            return f"FOUND z={self.z}"
        if self.verdict == Verdict.EMPTY:
            return f"EMPTY {self.certificate.describe()}"
        return f"UNKNOWN bound={self.bound}"


def _zigzag(limit: int) -> Iterator[int]:
    """0, 1, -1, 2, -2, ..., limit, -limit"""
    yield 0
    for k in range(1, limit + 1):
        yield k
        yield -k


def _orbit_hits(A: ModulePresentation, f1: LaurentVec, f0: LaurentVec, z: int) -> bool:
    return elem_equal(A, f1.shift(z * A.base_step), f0)


def detect_period(A: ModulePresentation, f1: ElementLike, B: int) -> Optional[int]:
    """Least p in [1, B] with (X^{pd} - 1) * f1 = 0 in A"""
    f1 = A.element(f1)
    for p in range(1, B + 1):
        if elem_equal(A, f1.shift(p * A.base_step), f1):
            return p
    return None


class _ProbeImage:
    """A tensored with F_q[T]/(T^r - 1), T = X^d, as F_q-coordinates"""

    def __init__(self, A: ModulePresentation, q: int, r: int):
        self.A = A
        self.q = q
        self.r = r
        self.width = A.ambient_rank * r
        rows = [self.image(rel.shift(i * A.base_step)) for rel in A.relations for i in range(r)]
        self.basis, self.pivots = rref_mod_p(rows, q, self.width)

    def image(self, v: LaurentVec) -> List[int]:
        d, r = self.A.base_step, self.r
        out = [0] * self.width
        for p, poly in enumerate(v):
            for e, c in poly.terms.items():
                k = p * r + (e // d) % r
                out[k] = (out[k] + c) % self.q
        return out

    def canonical(self, v: LaurentVec) -> Tuple[int, ...]:
        return reduce_mod_p(self.image(v), self.basis, self.pivots, self.q)


def finite_probe(
    A: ModulePresentation,
    f1: ElementLike,
    f0: ElementLike,
    q: int,
    r: int
) -> ProbeResult:
    """Residues of z compatible with X^{zd} f1 = f0 after mapping into F_q[T]/(T^r - 1)"""
    f1, f0 = A.element(f1), A.element(f0)
    probe = _ProbeImage(A, q, r)
    d = A.base_step
    start = probe.canonical(f1)
    period = next(t for t in divisors(r) if probe.canonical(f1.shift(t * d)) == start)
    target = probe.canonical(f0)
    residues = [z for z in range(period) if probe.canonical(f1.shift(z * d)) == target]
    return ProbeResult(q=q, r=r, period=period, residues=residues)


def combine_residues(results: Sequence[ProbeResult]) -> Tuple[int, List[int]]:
    """Intersect residue classes of several probes over the lcm of their periods"""
    modulus, allowed = 1, [0]
    for res in results:
        lcm = modulus * res.period // gcd(modulus, res.period)
        keep = set(res.residues)
        allowed_set = set(allowed)
        allowed = [x for x in range(lcm) if x % modulus in allowed_set and x % res.period in keep]
        modulus = lcm
        if not allowed:
            break
    return modulus, allowed


def solve_monomial(
    A: ModulePresentation,
    f1: ElementLike,
    f0: ElementLike,
    cfg: Optional[SolveConfig] = None
) -> MonomialSolveResult:
    """
    Decide X^{zd} * f1 = f0 where the certificates allow

    Order: z = 0, orbit period, cyclic span, bounded search, probes.
    """
    cfg = cfg or SolveConfig()
    f1, f0 = A.element(f1), A.element(f0)
    B = cfg.search_bound

    if _orbit_hits(A, f1, f0, 0):
        return MonomialSolveResult.found(0)

    period = detect_period(A, f1, B)
    if period is not None:
        logger.debug(f"solve_monomial: orbit period {period}")
        for z in range(period):
            if _orbit_hits(A, f1, f0, z):
                return MonomialSolveResult.found(z)
        return MonomialSolveResult.empty(Certificate(kind=CertificateKind.PERIOD, period=period))

    coeffs = submodule_membership(A, f0, [f1])
    if coeffs is None:
        return MonomialSolveResult.empty(Certificate(kind=CertificateKind.SPAN))
    extras = {
        "particular": format_laurent(coeffs[0]),
        "annihilator": [format_laurent(f) for f in annihilator(A, f1)],
    }

    for z in _zigzag(B):
        if z and _orbit_hits(A, f1, f0, z):
            return MonomialSolveResult.found(z, **extras)

    probe_results: List[ProbeResult] = []
    for q, r in cfg.probe_list:
        res = finite_probe(A, f1, f0, q, r)
        probe_results.append(res)
        if not res.residues:
            return MonomialSolveResult.empty(
                Certificate(kind=CertificateKind.PROBE, probes=[(q, r)]),
                probe_results=probe_results,
                **extras
            )
    extras["probe_results"] = probe_results

    if probe_results:
        modulus, allowed = combine_residues(probe_results)
        if not allowed:
            return MonomialSolveResult.empty(
                Certificate(kind=CertificateKind.PROBE, probes=list(cfg.probe_list)), **extras
            )
        allowed_set = set(allowed)
        tested = 0
        for z in _zigzag(B * modulus):
            if abs(z) <= B or z % modulus not in allowed_set:
                continue
            if tested >= cfg.probe_search_cap:
                break
            tested += 1
            if _orbit_hits(A, f1, f0, z):
                return MonomialSolveResult.found(z, **extras)
        logger.debug(f"solve_monomial: {tested} candidates in {len(allowed)} classes mod {modulus} failed")

    return MonomialSolveResult(verdict=Verdict.UNKNOWN, bound=B, **extras)
