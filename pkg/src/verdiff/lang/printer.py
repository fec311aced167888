"""Canonical pretty-printer.

Printing then re-parsing yields a structurally identical AST; the printer
and the parser's normalizations are kept in sync (compound bodies, one
declarator per declaration, minimal parentheses by precedence).
"""

from __future__ import annotations

from .nodes import (
    Assert, Assign, Binary, BoolLit, Call, CallStmt, Compound, Empty, For,
    FunctionDef, If, IncDec, Index, IntLit, Name, Node, Return,
    TranslationUnit, Unary, VarDecl, While,
)

_PRECEDENCE = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
_UNARY_PRECEDENCE = 11


def expr_to_text(e: Node) -> str:
    return _expr(e, 0)


def _expr(e: Node, parent_prec: int) -> str:
    match e:
        case IntLit():
            return f"{e.value}u" if e.unsigned_suffix else str(e.value)
        case BoolLit():
            return "true" if e.value else "false"
        case Name():
            return e.name
        case Index():
            return f"{e.base.name}[{_expr(e.index, 0)}]"
        case Call():
            return f"{e.name}({', '.join(_expr(a, 0) for a in e.args)})"
        case Unary():
            inner = _expr(e.operand, _UNARY_PRECEDENCE)
            # avoid gluing '- -x' into '--x'
            sep = " " if e.op in "+-" and inner.startswith(e.op) else ""
            text = f"{e.op}{sep}{inner}"
            return f"({text})" if parent_prec > _UNARY_PRECEDENCE else text
        case Binary():
            prec = _PRECEDENCE[e.op]
            left = _expr(e.left, prec)
            right = _expr(e.right, prec + 1)  # left-associative
            text = f"{left} {e.op} {right}"
            return f"({text})" if parent_prec > prec else text
    raise ValueError(f"cannot print expression node {e.kind}")


def _lvalue(e: Node) -> str:
    return _expr(e, 0)


class _Printer:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.indent = 0

    def emit(self, text: str) -> None:
        self.lines.append("  " * self.indent + text)

    def translation_unit(self, tu: TranslationUnit) -> str:
        for i, decl in enumerate(tu.decls):
            if isinstance(decl, FunctionDef):
                if i:
                    self.emit("")
                self.function(decl)
            else:
                self.emit(self._decl_text(decl))
        return "\n".join(self.lines) + "\n"

    def function(self, fn: FunctionDef) -> None:
        params = ", ".join(f"{p.var_type.cname} {p.name}" for p in fn.params)
        self.emit(f"{fn.return_type.cname} {fn.name}({params}) {{")
        self.indent += 1
        for stmt in fn.body.stmts:
            self.stmt(stmt)
        self.indent -= 1
        self.emit("}")

    @staticmethod
    def _decl_text(d: VarDecl) -> str:
        text = f"{d.var_type.cname} {d.name}"
        if d.array_len is not None:
            text += f"[{d.array_len}]"
        if d.init is not None:
            text += f" = {expr_to_text(d.init)}"
        return text + ";"

    def _simple_text(self, s: Node) -> str:
        match s:
            case Assign():
                return f"{_lvalue(s.target)} = {expr_to_text(s.value)}"
            case IncDec():
                return f"{_lvalue(s.target)}{s.op}"
            case CallStmt():
                return expr_to_text(s.call)
        raise ValueError(f"not a simple statement: {s.kind}")

    def stmt(self, s: Node) -> None:
        match s:
            case VarDecl():
                self.emit(self._decl_text(s))
            case Assign() | IncDec() | CallStmt():
                self.emit(self._simple_text(s) + ";")
            case Compound():
                self.emit("{")
                self.indent += 1
                for inner in s.stmts:
                    self.stmt(inner)
                self.indent -= 1
                self.emit("}")
            case If():
                self.emit(f"if ({expr_to_text(s.cond)}) {{")
                self.indent += 1
                for inner in s.then.stmts:
                    self.stmt(inner)
                self.indent -= 1
                if s.els is not None:
                    self.emit("} else {")
                    self.indent += 1
                    for inner in s.els.stmts:
                        self.stmt(inner)
                    self.indent -= 1
                self.emit("}")
            case While():
                self.emit(f"while ({expr_to_text(s.cond)}) {{")
                self.indent += 1
                for inner in s.body.stmts:
                    self.stmt(inner)
                self.indent -= 1
                self.emit("}")
            case For():
                init = self._simple_text(s.init) if s.init is not None else ""
                cond = expr_to_text(s.cond) if s.cond is not None else ""
                step = self._simple_text(s.step) if s.step is not None else ""
                self.emit(f"for ({init}; {cond}; {step}) {{")
                self.indent += 1
                for inner in s.body.stmts:
                    self.stmt(inner)
                self.indent -= 1
                self.emit("}")
            case Return():
                if s.value is None:
                    self.emit("return;")
                else:
                    self.emit(f"return {expr_to_text(s.value)};")
            case Assert():
                self.emit(f"assert {expr_to_text(s.cond)};")
            case Empty():
                self.emit(";")
            case _:
                raise ValueError(f"cannot print statement node {s.kind}")


def to_source(tu: TranslationUnit) -> str:
    return _Printer().translation_unit(tu)
