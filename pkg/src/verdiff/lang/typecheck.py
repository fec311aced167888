"""Type checker and symbol resolution.

Annotates every expression node with `ty` (its static type) and every
variable reference/declaration with `symbol` (a unique, program-wide
`Symbol`).  Downstream passes (interpreter, interval analysis, candidate
enumeration) rely on these annotations instead of re-resolving names, so
shadowing in nested blocks needs no special handling there.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TypeCheckError
from .nodes import (
    Assert, Assign, Binary, BoolLit, Call, CallStmt, Compound, Empty, For,
    FunctionDef, If, IncDec, Index, IntLit, Name, Node, Param, Return,
    TranslationUnit, Unary, VarDecl, While,
)
from .types import Ty, common_type, promote

INTRINSICS = {
    "nondet_int": Ty.INT,
    "nondet_char": Ty.CHAR,
    "nondet_bool": Ty.BOOL,
}

ARITH_OPS = {"+", "-", "*", "/", "%", "&", "|", "^"}
SHIFT_OPS = {"<<", ">>"}
COMPARE_OPS = {"<", ">", "<=", ">=", "==", "!="}
LOGICAL_OPS = {"&&", "||"}


@dataclass(frozen=True)
class Symbol:
    sid: int
    name: str
    ty: Ty
    is_array: bool
    array_len: int | None
    is_global: bool
    is_param: bool = False


def _err(msg: str, node: Node) -> TypeCheckError:
    return TypeCheckError(msg, node.line, node.col)


class TypeChecker:
    def __init__(self, tu: TranslationUnit):
        self.tu = tu
        self.functions: dict[str, FunctionDef] = {}
        self.globals: list[VarDecl] = []
        self._global_syms: dict[str, Symbol] = {}
        self._scopes: list[dict[str, Symbol]] = []
        self._next_sid = 0
        self._current_fn: FunctionDef | None = None

    # --- entry point ---

    def check(self) -> None:
        for decl in self.tu.decls:
            if isinstance(decl, FunctionDef):
                if decl.name in self.functions:
                    raise _err(f"function {decl.name!r} redefined", decl)
                if decl.name in INTRINSICS:
                    raise _err(f"{decl.name!r} is a reserved intrinsic", decl)
                self.functions[decl.name] = decl
            else:
                assert isinstance(decl, VarDecl)
                self.globals.append(decl)

        for g in self.globals:
            self._declare_global(g)
        main = self.functions.get("main")
        if main is None:
            raise TypeCheckError("program must define int main()")
        if main.return_type is not Ty.INT or main.params:
            raise _err("main must be declared as int main()", main)

        for fn in self.functions.values():
            self._check_function(fn)

    # --- declarations ---

    def _new_symbol(self, name: str, ty: Ty, array_len: int | None, is_global: bool, is_param: bool = False) -> Symbol:
        sym = Symbol(self._next_sid, name, ty, array_len is not None, array_len, is_global, is_param)
        self._next_sid += 1
        return sym

    def _declare_global(self, decl: VarDecl) -> None:
        self._check_decl_type(decl)
        if decl.name in self._global_syms or decl.name in self.functions:
            raise _err(f"{decl.name!r} redefined at file scope", decl)
        if decl.init is not None:
            self._check_constant_expr(decl.init)
            self.expr(decl.init)
        decl.symbol = self._new_symbol(decl.name, decl.var_type, decl.array_len, True)  # type: ignore[attr-defined]
        self._global_syms[decl.name] = decl.symbol  # type: ignore[attr-defined]

    def _check_decl_type(self, decl: VarDecl) -> None:
        if decl.var_type is Ty.VOID:
            raise _err("variables cannot have type void", decl)
        if decl.array_len is not None:
            if decl.array_len < 1:
                raise _err("array bound must be at least 1", decl)
            if decl.init is not None:
                raise _err("arrays cannot be initialized in a declaration", decl)

    def _check_constant_expr(self, expr: Node) -> None:
        bad = next((n for n in _walk_expr(expr) if isinstance(n, (Name, Index, Call))), None)
        if bad is not None:
            raise _err("global initializers must be constant expressions", bad)

    # --- functions and statements ---

    def _check_function(self, fn: FunctionDef) -> None:
        self._current_fn = fn
        self._scopes = [{}]
        for p in fn.params:
            if p.var_type is Ty.VOID:
                raise _err("parameters cannot have type void", p)
            if p.name in self._scopes[0]:
                raise _err(f"parameter {p.name!r} redefined", p)
            p.symbol = self._new_symbol(p.name, p.var_type, None, False, is_param=True)  # type: ignore[attr-defined]
            self._scopes[0][p.name] = p.symbol  # type: ignore[attr-defined]
        self._block(fn.body, new_scope=True)
        self._scopes = []
        self._current_fn = None

    def _block(self, block: Compound, new_scope: bool) -> None:
        if new_scope:
            self._scopes.append({})
        for stmt in block.stmts:
            self.stmt(stmt)
        if new_scope:
            self._scopes.pop()

    def stmt(self, s: Node) -> None:
        match s:
            case VarDecl():
                self._check_decl_type(s)
                scope = self._scopes[-1]
                if s.name in scope:
                    raise _err(f"{s.name!r} redefined in the same scope", s)
                if s.init is not None:
                    ity = self.expr(s.init)
                    self._require_integral(ity, s.init)
                s.symbol = self._new_symbol(s.name, s.var_type, s.array_len, False)  # type: ignore[attr-defined]
                scope[s.name] = s.symbol  # type: ignore[attr-defined]
            case Assign():
                self._lvalue(s.target)
                vty = self.expr(s.value)
                self._require_integral(vty, s.value)
            case IncDec():
                self._lvalue(s.target)
            case CallStmt():
                self._call(s.call, value_used=False)
            case Compound():
                self._block(s, new_scope=True)
            case If():
                self._require_integral(self.expr(s.cond), s.cond)
                self._block(s.then, new_scope=True)
                if s.els is not None:
                    self._block(s.els, new_scope=True)
            case While():
                self._require_integral(self.expr(s.cond), s.cond)
                self._block(s.body, new_scope=True)
            case For():
                if s.init is not None:
                    self.stmt(s.init)
                if s.cond is not None:
                    self._require_integral(self.expr(s.cond), s.cond)
                if s.step is not None:
                    self.stmt(s.step)
                self._block(s.body, new_scope=True)
            case Return():
                fn = self._current_fn
                assert fn is not None
                if fn.return_type is Ty.VOID:
                    if s.value is not None:
                        raise _err("void function cannot return a value", s)
                else:
                    if s.value is None:
                        raise _err("non-void function must return a value", s)
                    self._require_integral(self.expr(s.value), s.value)
            case Assert():
                self._require_integral(self.expr(s.cond), s.cond)
            case Empty():
                pass
            case _:
                raise _err(f"unexpected statement node {s.kind}", s)

    def _lvalue(self, target: Node) -> Ty:
        if isinstance(target, Name):
            sym = self._resolve(target)
            if sym.is_array:
                raise _err("cannot assign to an array name", target)
            target.ty = sym.ty  # type: ignore[attr-defined]
            return sym.ty
        if isinstance(target, Index):
            ty = self._index(target)
            target.ty = ty  # type: ignore[attr-defined]
            return ty
        raise _err("invalid assignment target", target)

    # --- expressions ---

    def expr(self, e: Node) -> Ty:
        ty = self._expr(e)
        e.ty = ty  # type: ignore[attr-defined]
        return ty

    def _expr(self, e: Node) -> Ty:
        match e:
            case IntLit():
                if e.unsigned_suffix:
                    if e.value <= Ty.UINT.max:
                        return Ty.UINT
                    raise _err("integer literal out of range", e)
                if e.value <= Ty.INT.max:
                    return Ty.INT
                if e.value <= Ty.UINT.max:
                    return Ty.UINT
                raise _err("integer literal out of range", e)
            case BoolLit():
                return Ty.BOOL
            case Name():
                sym = self._resolve(e)
                if sym.is_array:
                    raise _err("array name cannot be used as a value", e)
                return sym.ty
            case Index():
                return self._index(e)
            case Unary(op=op, operand=operand):
                oty = self.expr(operand)
                self._require_integral(oty, operand)
                return Ty.INT if op == "!" else promote(oty)
            case Binary(op=op, left=left, right=right):
                lt = self.expr(left)
                rt = self.expr(right)
                self._require_integral(lt, left)
                self._require_integral(rt, right)
                if op in ARITH_OPS:
                    return common_type(lt, rt)
                if op in SHIFT_OPS:
                    return promote(lt)
                if op in COMPARE_OPS or op in LOGICAL_OPS:
                    return Ty.INT
                raise _err(f"unknown operator {op!r}", e)
            case Call():
                return self._call(e, value_used=True)
            case _:
                raise _err(f"unexpected expression node {e.kind}", e)

    def _index(self, e: Index) -> Ty:
        sym = self._resolve(e.base)
        if not sym.is_array:
            raise _err(f"{e.base.name!r} is not an array", e)
        e.base.ty = sym.ty  # type: ignore[attr-defined]
        ity = self.expr(e.index)
        self._require_integral(ity, e.index)
        return sym.ty

    def _call(self, call: Call, value_used: bool) -> Ty:
        if call.name in INTRINSICS:
            if call.args:
                raise _err(f"{call.name} takes no arguments", call)
            return INTRINSICS[call.name]
        fn = self.functions.get(call.name)
        if fn is None:
            raise _err(f"call to undeclared function {call.name!r}", call)
        if len(call.args) != len(fn.params):
            raise _err(
                f"{call.name} expects {len(fn.params)} argument(s), got {len(call.args)}", call
            )
        for arg in call.args:
            self._require_integral(self.expr(arg), arg)
        if value_used and fn.return_type is Ty.VOID:
            raise _err(f"void value of {call.name}() used in an expression", call)
        return fn.return_type

    # --- helpers ---

    def _resolve(self, name: Name) -> Symbol:
        for scope in reversed(self._scopes):
            if name.name in scope:
                sym = scope[name.name]
                name.symbol = sym  # type: ignore[attr-defined]
                return sym
        sym = self._global_syms.get(name.name)
        if sym is None:
            raise _err(f"use of undeclared variable {name.name!r}", name)
        name.symbol = sym  # type: ignore[attr-defined]
        return sym

    def _require_integral(self, ty: Ty, node: Node) -> None:
        if not ty.integral:
            raise _err("expression must have integral type", node)


def _walk_expr(e: Node):
    yield e
    for c in e.children():
        yield from _walk_expr(c)


def typecheck(tu: TranslationUnit) -> TypeChecker:
    tc = TypeChecker(tu)
    tc.check()
    return tc
