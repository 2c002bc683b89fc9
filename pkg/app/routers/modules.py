"""Module computations: Groebner bases, membership, syzygies and integer lattices"""

from typing import Union

from fastapi import APIRouter

from ..dependencies import ToolkitServiceDep
from ..models.instances import GroebnerInstance, LatticeInstance, MembershipInstance, SyzygyInstance
from ..models.results import GroebnerResult, LatticeResult, MembershipResult, SyzygyResult

router = APIRouter(prefix="/v1/modules", tags=["Modules"])


@router.post(
    "/groebner",
    response_model=GroebnerResult,
    summary="Strong Groebner basis",
    description="""
    Strong Groebner basis over Z of a submodule of Z[X^(+-1)]^rank.

    Generators are encoded with X^-1 -> Y; with `laurent` the rows (XY - 1)e_i
    are added. Basis vectors are returned in the X, Y encoding.
    """
)
def groebner(instance: GroebnerInstance, toolkit_service: ToolkitServiceDep) -> GroebnerResult:
    return toolkit_service.groebner(instance)


@router.post(
    "/member",
    response_model=MembershipResult,
    summary="Submodule membership",
    description="Decide membership in a submodule of a presented module and return a certificate"
)
def member(instance: MembershipInstance, toolkit_service: ToolkitServiceDep) -> MembershipResult:
    return toolkit_service.member(instance)


@router.post(
    "/syzygy",
    response_model=Union[SyzygyResult, LatticeResult],
    summary="Syzygies",
    description="Generators of the syzygy module of elements of a presented module, or its integer points"
)
def syzygy(instance: SyzygyInstance, toolkit_service: ToolkitServiceDep):
    return toolkit_service.syzygy(instance)


@router.post(
    "/zlattice",
    response_model=LatticeResult,
    summary="Integer points of a submodule",
    description="Hermite normal form basis of M cap Z^rank"
)
def zlattice(instance: LatticeInstance, toolkit_service: ToolkitServiceDep) -> LatticeResult:
    return toolkit_service.zlattice(instance)
