"""Decision procedures over A x| Z"""

from fastapi import APIRouter

from ..dependencies import ToolkitServiceDep
from ..models.instances import CosetInstance, MonomialInstance, SubgroupInstance, WordInstance
from ..models.results import CosetRecord, MonomialRecord, SubgroupRecord, WordResult

router = APIRouter(prefix="/v1/decide", tags=["Decisions"])


@router.post(
    "/monomial",
    response_model=MonomialRecord,
    summary="Monomial equation",
    description="""
    Decide X^(zd) * f1 = f0 in a presented module.

    The verdict is `found` (with z), `empty` (with a period, probe or span
    certificate) or `unknown` with the exhausted search bound.
    """
)
def monomial(instance: MonomialInstance, toolkit_service: ToolkitServiceDep) -> MonomialRecord:
    return toolkit_service.solve_monomial(instance)


@router.post(
    "/coset",
    response_model=CosetRecord,
    summary="Coset intersection",
    description="Decide whether <G> cap h<H> is empty; nonempty answers carry a verified witness"
)
def coset(instance: CosetInstance, toolkit_service: ToolkitServiceDep) -> CosetRecord:
    return toolkit_service.coset(instance)


@router.post(
    "/subgroup",
    response_model=SubgroupRecord,
    summary="Subgroup structure and membership"
)
def subgroup(instance: SubgroupInstance, toolkit_service: ToolkitServiceDep) -> SubgroupRecord:
    return toolkit_service.subgroup(instance)


@router.post(
    "/word",
    response_model=WordResult,
    summary="Evaluate a word"
)
def word(instance: WordInstance, toolkit_service: ToolkitServiceDep) -> WordResult:
    return toolkit_service.eval_word(instance)
