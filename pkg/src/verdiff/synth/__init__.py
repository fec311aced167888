"""Check synthesis: strategies, constants, and variant instrumentation."""

from .constants import constant_width, generate_constant, sample_random_constant
from .pool import ConstantPool, build_constant_pool
from .strategies import (
    CandidateSelector, NoCandidatesError, Strategy, StrategyWeight,
    select_candidate, strategy_weights,
)
from .synthesize import (
    CheckSpec, CheckSynthesizer, Variant, budget, check_from_indices,
    constant_literal, instrument, synthesize,
)

__all__ = [
    "CandidateSelector",
    "CheckSpec",
    "CheckSynthesizer",
    "ConstantPool",
    "NoCandidatesError",
    "Strategy",
    "StrategyWeight",
    "Variant",
    "budget",
    "build_constant_pool",
    "check_from_indices",
    "constant_literal",
    "constant_width",
    "generate_constant",
    "instrument",
    "sample_random_constant",
    "select_candidate",
    "strategy_weights",
    "synthesize",
]
