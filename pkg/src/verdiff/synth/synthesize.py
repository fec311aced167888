"""Variant synthesis: build one assertion and instrument the seed with it.

A check has one or more conjuncts `e != k` sharing a single insertion
location; conjuncts are joined with `&&` into a single assert statement
inserted immediately before the statement at that location.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..lang.candidates import CandidateExpression, enumerate_candidates
from ..lang.nodes import (
    Assert, Binary, Compound, IntLit, Node, TranslationUnit, Unary, deep_copy,
    find_by_id, walk,
)
from ..lang.program import Program, program_from_ast
from ..lang.types import Ty, wrap
from .constants import generate_constant
from .pool import ConstantPool, build_constant_pool
from .strategies import CandidateSelector, Strategy


@dataclass(frozen=True)
class CheckSpec:
    """Conjuncts (candidate, constant) plus their shared insertion location."""

    conjuncts: tuple[tuple[CandidateExpression, int], ...]
    location: int

    def __post_init__(self) -> None:
        if not self.conjuncts:
            raise ValueError("a check needs at least one conjunct")
        for cand, k in self.conjuncts:
            if cand.location != self.location:
                raise ValueError("all conjuncts must share the insertion location")
            if not (cand.value_type.min <= k <= cand.value_type.max):
                raise ValueError(f"constant {k} does not fit {cand.value_type.cname}")

    def describe(self) -> str:
        return " && ".join(f"{c.text} != {k}" for c, k in self.conjuncts)


@dataclass(frozen=True)
class Variant:
    """A seed program instrumented with exactly one synthesized assertion."""

    base: str  # source_hash of the (assertion-free) seed
    check: CheckSpec
    program: Program
    variant_hash: str = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant_hash", self.program.source_hash)


def constant_literal(k: int, ty: Ty) -> Node:
    """AST for an integer constant, well-typed in any comparison context."""
    if k >= 0:
        return IntLit(k)
    if ty.signed and k == ty.min:
        # `-(2**31)` does not fit the positive literal range; emit MIN as
        # the classic (-MAX - 1) so every literal stays representable.
        return Binary("-", Unary("-", IntLit(ty.max)), IntLit(1))
    return Unary("-", IntLit(-k))


def build_assert(check: CheckSpec) -> Assert:
    conjunct_nodes = [
        Binary("!=", deep_copy(cand.expr), constant_literal(k, cand.value_type))
        for cand, k in check.conjuncts
    ]
    cond = conjunct_nodes[0]
    for nxt in conjunct_nodes[1:]:
        cond = Binary("&&", cond, nxt)
    return Assert(cond)


def instrument(seed: Program, check: CheckSpec) -> Variant:
    """Insert the check's assertion before the statement at its location."""
    root = deep_copy(seed.ast_root)
    assert isinstance(root, TranslationUnit)
    target = find_by_id(root, check.location)
    if target is None:
        raise ValueError(f"location {check.location} not found in seed")
    inserted = False
    for node in walk(root):
        if isinstance(node, Compound) and target in node.stmts:
            node.stmts.insert(node.stmts.index(target), build_assert(check))
            inserted = True
            break
    if not inserted:
        raise ValueError(f"location {check.location} is not inside a compound statement")
    program = program_from_ast(root)
    return Variant(base=seed.source_hash, check=check, program=program)


class CheckSynthesizer:
    """Repeated synthesis against one seed with persistent strategy state."""

    def __init__(
        self,
        seed: Program,
        strategy: Strategy,
        rng: random.Random,
        batch_size: int = 1,
        pool_probability: float = 0.5,
    ):
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.seed = seed
        self.batch_size = batch_size
        self.pool_probability = pool_probability
        self.rng = rng
        self.selector = CandidateSelector(seed, strategy, rng)
        self.pool: ConstantPool = build_constant_pool(seed)

    def synthesize(self) -> Variant:
        first = self.selector.select()
        conjuncts = [(first, self._constant(first))]
        for _ in range(self.batch_size - 1):
            cand = self.selector.select_at(first.location)
            conjuncts.append((cand, self._constant(cand)))
        check = CheckSpec(tuple(conjuncts), first.location)
        return instrument(self.seed, check)

    def _constant(self, cand: CandidateExpression) -> int:
        return generate_constant(self.pool, cand, self.rng, self.pool_probability)


def synthesize(
    seed: Program,
    strategy: Strategy,
    batch_size: int,
    rng: random.Random,
    pool_probability: float = 0.5,
) -> Variant:
    """One-shot synthesis (campaigns hold a CheckSynthesizer instead)."""
    return CheckSynthesizer(seed, strategy, rng, batch_size, pool_probability).synthesize()


def budget(program: Program) -> int:
    """Variants to synthesize per seed: min(100, ceil(20% of candidates))."""
    n = len(enumerate_candidates(program))
    if n == 0:
        return 0
    return min(100, math.ceil(n / 5))


def check_from_indices(
    seed: Program,
    candidate_indices: list[int],
    constants: list[int],
) -> CheckSpec:
    """Rebuild a CheckSpec from enumeration indices (storage round-trip)."""
    cands = enumerate_candidates(seed)
    chosen = [cands[i] for i in candidate_indices]
    return CheckSpec(tuple(zip(chosen, constants)), chosen[0].location)
