"""Deliberately faulty built-in: the size-reduction mutant.

Rewrites every integer literal above a threshold to 10 and then runs the
bounded interpreter on the rewritten program with a generous bound.  The
rewriting makes it unsound (it can claim safety of programs whose large
loop bounds hide violations) and imprecise (it can report violations that
only exist in the shrunken program) in a controlled, reproducible way,
which gives the detector something real to find.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lang.nodes import IntLit, TranslationUnit, deep_copy, walk
from ..lang.program import Program, program_from_ast
from .interp import InterpConfig, bounded_interpret
from .verdicts import Verdict


@dataclass(frozen=True)
class MutantConfig:
    threshold: int = 1000
    interp: InterpConfig = field(
        default_factory=lambda: InterpConfig(loop_bound=10_000, max_steps=2_000_000)
    )

    def __post_init__(self) -> None:
        if self.threshold <= 10:
            raise ValueError("threshold must be greater than 10 (the replacement value)")


def rewrite_large_literals(program: Program, threshold: int) -> Program:
    root = deep_copy(program.ast_root)
    assert isinstance(root, TranslationUnit)
    changed = False
    for node in walk(root):
        if isinstance(node, IntLit) and node.value > threshold:
            node.value = 10
            node.unsigned_suffix = False
            changed = True
    return program_from_ast(root) if changed else program


def size_reduction_mutant(program: Program, cfg: MutantConfig | None = None) -> tuple[Verdict, str]:
    cfg = cfg or MutantConfig()
    rewritten = rewrite_large_literals(program, cfg.threshold)
    result = bounded_interpret(rewritten, cfg.interp)
    note = "literals rewritten" if rewritten is not program else "no literal above threshold"
    return result.verdict, f"{note}; {result.detail}"
