"""AST node definitions for the supported C-like subset.

Nodes are plain dataclasses carrying only their semantic payload.  Source
positions (`line`, `col`), numbering (`location_id`, `depth`), static types
(`ty`) and resolved symbols (`symbol`) are attached as ordinary attributes
by the parser and type checker; structural equality deliberately ignores
them.

Invariants maintained by `assign_positions`:
  - location_id values are unique within a program and assigned in
    pre-order, so they are stable under re-parsing identical text.
  - depth(root) == 1 and depth(child) == depth(parent) + 1.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, fields
from typing import Iterator

from .types import Ty


class Node:
    """Base class; subclasses are dataclasses with semantic fields only."""

    kind: str = "node"

    # Attributes attached after construction.
    line: int = 0
    col: int = 0
    location_id: int = -1
    depth: int = 0

    def children(self) -> Iterator["Node"]:
        for f in fields(self):  # type: ignore[arg-type]
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, list):
                for item in v:
                    if isinstance(item, Node):
                        yield item


# --- expressions -----------------------------------------------------------


@dataclass(eq=False)
class IntLit(Node):
    value: int  # non-negative; negative constants are Unary('-', IntLit)
    unsigned_suffix: bool = False
    kind = "int_lit"


@dataclass(eq=False)
class BoolLit(Node):
    value: bool
    kind = "bool_lit"


@dataclass(eq=False)
class Name(Node):
    name: str
    kind = "name"


@dataclass(eq=False)
class Index(Node):
    base: Name
    index: Node
    kind = "index"


@dataclass(eq=False)
class Unary(Node):
    op: str  # '-', '+', '!', '~'
    operand: Node
    kind = "unary"


@dataclass(eq=False)
class Binary(Node):
    op: str  # arithmetic, bitwise, shift, comparison, '&&', '||'
    left: Node
    right: Node
    kind = "binary"


@dataclass(eq=False)
class Call(Node):
    name: str
    args: list[Node]
    kind = "call"


# --- statements ------------------------------------------------------------


@dataclass(eq=False)
class VarDecl(Node):
    var_type: Ty
    name: str
    array_len: int | None = None
    init: Node | None = None
    kind = "var_decl"


@dataclass(eq=False)
class Assign(Node):
    target: Node  # Name or Index
    value: Node
    kind = "assign"


@dataclass(eq=False)
class IncDec(Node):
    target: Node  # Name or Index
    op: str  # '++' or '--'
    kind = "incdec"


@dataclass(eq=False)
class CallStmt(Node):
    call: Call
    kind = "call_stmt"


@dataclass(eq=False)
class Compound(Node):
    stmts: list[Node]
    kind = "compound"


@dataclass(eq=False)
class If(Node):
    cond: Node
    then: Compound
    els: Compound | None = None
    kind = "if"


@dataclass(eq=False)
class While(Node):
    cond: Node
    body: Compound
    kind = "while"


@dataclass(eq=False)
class For(Node):
    init: Node | None  # Assign | IncDec | CallStmt
    cond: Node | None
    step: Node | None
    body: Compound
    kind = "for"


@dataclass(eq=False)
class Return(Node):
    value: Node | None = None
    kind = "return"


@dataclass(eq=False)
class Assert(Node):
    cond: Node
    kind = "assert"


@dataclass(eq=False)
class Empty(Node):
    kind = "empty"


# --- top level --------------------------------------------------------------


@dataclass(eq=False)
class Param(Node):
    var_type: Ty
    name: str
    kind = "param"


@dataclass(eq=False)
class FunctionDef(Node):
    return_type: Ty
    name: str
    params: list[Param]
    body: Compound
    kind = "function"


@dataclass(eq=False)
class TranslationUnit(Node):
    decls: list[Node]  # FunctionDef | VarDecl
    kind = "translation_unit"


STATEMENT_KINDS = (VarDecl, Assign, IncDec, CallStmt, Compound, If, While, For, Return, Assert, Empty)


# --- generic helpers --------------------------------------------------------


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal."""
    yield node
    for c in node.children():
        yield from walk(c)


def assign_positions(root: Node) -> None:
    next_id = 0

    def visit(node: Node, depth: int) -> None:
        nonlocal next_id
        node.location_id = next_id
        node.depth = depth
        next_id += 1
        for c in node.children():
            visit(c, depth + 1)

    visit(root, 1)


def find_by_id(root: Node, location_id: int) -> Node | None:
    for n in walk(root):
        if n.location_id == location_id:
            return n
    return None


def deep_copy(node: Node) -> Node:
    return copy.deepcopy(node)


_PAYLOAD_SKIP = {"line", "col", "location_id", "depth", "ty", "symbol"}


def structurally_equal(a: Node, b: Node) -> bool:
    """Equality on kinds and semantic payload, ignoring positions and types."""
    if type(a) is not type(b):
        return False
    for f in fields(a):  # type: ignore[arg-type]
        if f.name in _PAYLOAD_SKIP:
            continue
        va, vb = getattr(a, f.name), getattr(b, f.name)
        if isinstance(va, Node):
            if not isinstance(vb, Node) or not structurally_equal(va, vb):
                return False
        elif isinstance(va, list):
            if not isinstance(vb, list) or len(va) != len(vb):
                return False
            for xa, xb in zip(va, vb):
                if isinstance(xa, Node):
                    if not structurally_equal(xa, xb):
                        return False
                elif xa != xb:
                    return False
        elif va != vb:
            return False
    return True
