"""Utility modules for the ABC group toolkit"""

# logging and metrics read settings at import; use their module paths
from .errors import *
from .validators import *

__all__ = [
    # Error handling
    "ToolkitException",
    "ValidationError",
    "ParseError",
    "RankMismatchError",
    "PresentationMismatchError",
    "NotDivisibleError",
    "UnassignedVariableError",
    "ArityError",
    "GadgetError",
    "ResourceBudgetExceeded",
    "ConfigurationError",
    "exit_code_for",

    # Validation utilities
    "ValidationUtils",
    "parse_probe_list",
    "validate_probes_field",
    "validate_positive_bound",
]
