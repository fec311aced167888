"""Program container: parse, hash, strip assertions."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .nodes import (
    Assert, Compound, FunctionDef, Node, TranslationUnit, VarDecl, deep_copy,
    walk,
)
from .parser import parse_ast
from .printer import to_source
from .typecheck import TypeChecker, typecheck


def source_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class Program:
    """A type-checked translation unit plus its exact source text.

    `source_hash` is the digest of `source_text` (exact bytes), so programs
    with identical text always share a hash.
    """

    source_text: str
    ast_root: TranslationUnit
    source_hash: str
    functions: dict[str, FunctionDef] = field(default_factory=dict)
    globals: list[VarDecl] = field(default_factory=list)

    def pretty(self) -> str:
        return to_source(self.ast_root)

    def find(self, location_id: int) -> Node | None:
        from .nodes import find_by_id

        return find_by_id(self.ast_root, location_id)


def parse(source: str) -> Program:
    """Parse and type-check source text.

    Raises ParseError or TypeCheckError (both FrontendError) on rejection.
    """
    tu = parse_ast(source)
    tc: TypeChecker = typecheck(tu)
    return Program(
        source_text=source,
        ast_root=tu,
        source_hash=source_digest(source),
        functions=tc.functions,
        globals=tc.globals,
    )


def program_from_ast(tu: TranslationUnit) -> Program:
    """Render an AST canonically and re-parse it.

    Going through text keeps location ids, depths and type annotations
    consistent with what parsing the emitted source would produce.
    """
    return parse(to_source(tu))


def strip_assertions(program: Program) -> Program:
    """Return the program with every assert statement removed."""
    stripped = deep_copy(program.ast_root)
    assert isinstance(stripped, TranslationUnit)
    for node in walk(stripped):
        if isinstance(node, Compound):
            node.stmts = [s for s in node.stmts if not isinstance(s, Assert)]
    return program_from_ast(stripped)


def count_asserts(program: Program) -> int:
    return sum(1 for n in walk(program.ast_root) if isinstance(n, Assert))
