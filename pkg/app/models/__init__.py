"""Pydantic models package"""

from .common import *
from .instances import *
from .results import *

__all__ = [
    # Common models
    "OutputFormat", "ErrorDetail", "ErrorResponse", "SystemInfo", "HealthResponse",

    # Instance records
    "VectorText", "PresentationRecord", "SolverOptions", "GroebnerInstance", "MembershipInstance",
    "SyzygyInstance", "LatticeInstance", "MonomialInstance", "CosetInstance", "SubgroupInstance",
    "WordInstance", "ChainOp", "ChainEquationRecord", "GadgetCompileInstance", "Modulus",
    "RowRecord", "SystemRecord", "GadgetCheckInstance", "Reduction", "ReductionInstance",

    # Result records
    "ResultRecord", "GroebnerResult", "MembershipResult", "SyzygyResult", "LatticeResult",
    "MonomialRecord", "StructureRecord", "CosetRecord", "SubgroupRecord", "WordResult",
    "CompileResult", "CheckResult", "InstanceRecord",
]
