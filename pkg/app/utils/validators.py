"""Validation utilities for probes, bounds and input-file diagnostics"""

import json
import re
from typing import Any, List, Optional, Sequence, Tuple

from sympy import isprime

from .errors import ConfigurationError, ParseError

_PROBE = re.compile(r"^\s*(\d+)\s*:\s*(\d+)\s*$")


class ValidationUtils:
    """Utility class for common validation functions"""

    @staticmethod
    def is_valid_probe(q: int, r: int) -> bool:
        """A probe needs a prime field size and a positive cycle length"""
        return isinstance(q, int) and isinstance(r, int) and r >= 1 and bool(isprime(q))

    @staticmethod
    def locate_in_json(text: str, needle: str) -> Tuple[int, int]:
        """
        1-based (line, column) of the first JSON string literal equal to needle

        Falls back to (1, 1) when the literal cannot be found verbatim.
        """
        literal = json.dumps(needle)
        pos = text.find(literal)
        if pos < 0:
            return 1, 1
        line = text.count("\n", 0, pos) + 1
        column = pos - (text.rfind("\n", 0, pos) + 1) + 2  # skip the opening quote
        return line, column

    @staticmethod
    def load_json(text: str, source: Optional[str] = None) -> Any:
        """json.loads with errors mapped to ParseError carrying line and column"""
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, source=source, line=e.lineno, column=e.colno)


def parse_probe_list(text: str) -> List[Tuple[int, int]]:
    """
    Parse "q:r,q:r,..." into probe pairs

    Raises:
        ConfigurationError: on grammar errors, non-prime q or r < 1
    """
    probes: List[Tuple[int, int]] = []
    if not text.strip():
        return probes
    for chunk in text.split(","):
        match = _PROBE.match(chunk)
        if not match:
            raise ConfigurationError(f"Malformed probe {chunk.strip()!r}; expected q:r", "probe_list")
        q, r = int(match.group(1)), int(match.group(2))
        if not ValidationUtils.is_valid_probe(q, r):
            raise ConfigurationError(f"Probe {q}:{r} needs a prime q and r >= 1", "probe_list")
        probes.append((q, r))
    return probes


def validate_probes_field(cls, v: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Pydantic validator for probe lists"""
    probes = []
    for q, r in v:
        if not ValidationUtils.is_valid_probe(int(q), int(r)):
            raise ValueError(f"Probe {q}:{r} needs a prime q and r >= 1")
        probes.append((int(q), int(r)))
    return probes


def validate_positive_bound(cls, v: int) -> int:
    """Pydantic validator for search bounds"""
    if v < 1:
        raise ValueError("Bound must be at least 1")
    return v
