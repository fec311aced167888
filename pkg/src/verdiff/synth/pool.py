"""Constant pool harvested from a seed program.

For every integer literal c in the program the pool contains c-1, c, c+1.
The int boundary values and the neighbors of zero are always included.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..lang.nodes import IntLit, walk
from ..lang.program import Program
from ..lang.types import INT_MAX, INT_MIN


@dataclass(frozen=True)
class ConstantPool:
    entries: frozenset[int]

    def sorted_entries(self) -> list[int]:
        return sorted(self.entries)


def build_constant_pool(program: Program) -> ConstantPool:
    entries = {INT_MIN, 0, INT_MAX, -1, 1}
    for node in walk(program.ast_root):
        if isinstance(node, IntLit):
            entries.update((node.value - 1, node.value, node.value + 1))
    return ConstantPool(frozenset(entries))
