"""Divisibility gadgets, compiled systems and the reductions built on them"""

from fastapi import APIRouter

from ..dependencies import ToolkitServiceDep
from ..models.instances import GadgetCheckInstance, GadgetCompileInstance, ReductionInstance
from ..models.results import CheckResult, CompileResult, InstanceRecord

router = APIRouter(prefix="/v1/gadgets", tags=["Gadgets"])


@router.post(
    "/compile",
    response_model=CompileResult,
    summary="Compile a polynomial equation",
    description="""
    Flatten P(z) = a (or an explicit equation chain) into a divisibility
    system with moduli 0, (X-1)^2 and (X-1)^3.
    """
)
def compile_gadgets(instance: GadgetCompileInstance, toolkit_service: ToolkitServiceDep) -> CompileResult:
    return toolkit_service.gadget_compile(instance)


@router.post(
    "/check",
    response_model=CheckResult,
    summary="Evaluate a gadget or a system on an assignment"
)
def check(instance: GadgetCheckInstance, toolkit_service: ToolkitServiceDep) -> CheckResult:
    return toolkit_service.gadget_check(instance)


@router.post(
    "/instance",
    response_model=InstanceRecord,
    summary="Build a reduction",
    description="Module equation, spherical quadratic equation, knapsack instance or word system over Z wr Z"
)
def build_instance(instance: ReductionInstance, toolkit_service: ToolkitServiceDep) -> InstanceRecord:
    return toolkit_service.instance(instance)
