"""Random constant generation for synthesized checks.

To avoid a heavy skew toward huge values, the random path first draws a
bit-width uniformly from 1..width(type) and then draws a value of exactly
that width (top bit set).  The resulting pattern is reinterpreted in the
candidate's type, so full-width patterns produce negative values for
signed types.  Pool constants complement the random ones with probability
`pool_probability`.
"""

from __future__ import annotations

import random

from ..lang.candidates import CandidateExpression
from ..lang.types import Ty, wrap
from .pool import ConstantPool


def sample_random_constant(value_type: Ty, rng: random.Random) -> int:
    width = rng.randint(1, value_type.width)
    if width == 1:
        pattern = 1
    else:
        pattern = (1 << (width - 1)) | rng.getrandbits(width - 1)
    return wrap(pattern, value_type)


def generate_constant(
    pool: ConstantPool,
    candidate: CandidateExpression,
    rng: random.Random,
    pool_probability: float = 0.5,
) -> int:
    """Draw one constant that is representable in the candidate's type."""
    if pool.entries and rng.random() < pool_probability:
        entry = rng.choice(pool.sorted_entries())
        return wrap(entry, candidate.value_type)
    return sample_random_constant(candidate.value_type, rng)


def constant_width(value: int, value_type: Ty) -> int:
    """Width of the bit pattern a value occupies in the given type.

    Inverse of the sampler's reinterpretation: negative values (and
    unsigned values with the top bit set) occupy the full width.
    """
    if value < 0:
        return value_type.width
    width = max(value.bit_length(), 1)
    return width
