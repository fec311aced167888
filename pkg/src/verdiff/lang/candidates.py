"""Candidate-expression enumeration.

A candidate is a pure expression of integral type that reads at least one
variable, paired with the statement before which an assertion about it can
be inserted.  Every maximal pure integral subexpression *and* every proper
subexpression that reads a variable is enumerated as its own candidate.

An expression found inside a statement maps to the nearest enclosing
statement that sits directly in a compound (loop/if headers map to the
loop/if statement itself).  Candidates whose free variables are not all in
scope at that insertion point are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import (
    Assert, Assign, Call, CallStmt, Compound, For, FunctionDef, If, IncDec,
    Index, Name, Node, Return, VarDecl, While,
)
from .printer import expr_to_text
from .program import Program
from .types import Ty


@dataclass(frozen=True)
class CandidateExpression:
    """One assertion-synthesis target."""

    expr: Node = field(repr=False)
    location: int  # location_id of the insertion statement
    value_type: Ty
    free_variables: frozenset[str]
    index: int  # position in the deterministic enumeration
    text: str  # canonical rendering, for reports and storage
    depth: int = 1  # depth of the insertion location in the AST (root = 1)


def _subtree(e: Node):
    yield e
    for c in e.children():
        yield from _subtree(c)


def _is_pure(e: Node) -> bool:
    return not any(isinstance(n, Call) for n in _subtree(e))


def _reads(e: Node) -> list[Name]:
    return [n for n in _subtree(e) if isinstance(n, Name)]


def _expr_roots(stmt: Node) -> list[Node]:
    """Rvalue expression trees of one statement (write targets excluded)."""
    match stmt:
        case VarDecl():
            return [stmt.init] if stmt.init is not None else []
        case Assign():
            roots = []
            if isinstance(stmt.target, Index):
                roots.append(stmt.target.index)
            roots.append(stmt.value)
            return roots
        case IncDec():
            return [stmt.target]  # read-modify-write: the old value is read
        case CallStmt():
            return list(stmt.call.args)
        case Return():
            return [stmt.value] if stmt.value is not None else []
        case Assert():
            return []
        case _:
            return []


class _Enumerator:
    def __init__(self, program: Program):
        self.program = program
        self.found: list[CandidateExpression] = []

    def run(self) -> list[CandidateExpression]:
        visible_globals = frozenset(
            g.symbol.sid for g in self.program.globals  # type: ignore[attr-defined]
        )
        for fn in self.program.functions.values():
            visible = set(visible_globals)
            visible.update(p.symbol.sid for p in fn.params)  # type: ignore[attr-defined]
            self._compound(fn.body, visible)
        return self.found

    def _compound(self, block: Compound, visible: set[int]) -> None:
        local = set(visible)
        for stmt in block.stmts:
            self._statement(stmt, local)
            if isinstance(stmt, VarDecl):
                local.add(stmt.symbol.sid)  # type: ignore[attr-defined]

    def _statement(self, stmt: Node, visible: set[int]) -> None:
        for root in _expr_roots(stmt):
            self._harvest(root, stmt, visible)
        match stmt:
            case If():
                self._harvest(stmt.cond, stmt, visible)
                self._compound(stmt.then, visible)
                if stmt.els is not None:
                    self._compound(stmt.els, visible)
            case While():
                self._harvest(stmt.cond, stmt, visible)
                self._compound(stmt.body, visible)
            case For():
                for part in (stmt.init, stmt.cond, stmt.step):
                    if part is None:
                        continue
                    if isinstance(part, (Assign, IncDec, CallStmt)):
                        for root in _expr_roots(part):
                            self._harvest(root, stmt, visible)
                    else:
                        self._harvest(part, stmt, visible)
                self._compound(stmt.body, visible)
            case Compound():
                self._compound(stmt, visible)

    def _harvest(self, root: Node, anchor: Node, visible: set[int]) -> None:
        for node in _subtree(root):
            ty = getattr(node, "ty", None)
            if ty is None or not isinstance(ty, Ty) or not ty.integral:
                continue
            if isinstance(node, Call) or not _is_pure(node):
                continue
            reads = _reads(node)
            if not reads:
                continue
            syms = {r.symbol.sid for r in reads}  # type: ignore[attr-defined]
            if not syms <= visible:
                continue
            cand = CandidateExpression(
                expr=node,
                location=anchor.location_id,
                value_type=ty,
                free_variables=frozenset(r.name for r in reads),
                index=len(self.found),
                text=expr_to_text(node),
                depth=anchor.depth,
            )
            self.found.append(cand)


def enumerate_candidates(program: Program) -> list[CandidateExpression]:
    """All candidates of an assertion-free, type-checked program, in
    deterministic AST pre-order."""
    return _Enumerator(program).run()
