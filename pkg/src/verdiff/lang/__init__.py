"""Frontend for the supported C-like subset: parse, type-check, enumerate."""

from .candidates import CandidateExpression, enumerate_candidates
from .errors import FrontendError, ParseError, TypeCheckError
from .program import Program, count_asserts, parse, program_from_ast, source_digest, strip_assertions
from .types import Ty

__all__ = [
    "CandidateExpression",
    "FrontendError",
    "ParseError",
    "Program",
    "Ty",
    "TypeCheckError",
    "count_asserts",
    "enumerate_candidates",
    "parse",
    "program_from_ast",
    "source_digest",
    "strip_assertions",
]
