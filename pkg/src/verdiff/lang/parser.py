"""Recursive-descent parser producing the normalized AST.

Normalizations applied while parsing (the pretty-printer emits the same
shape, so print -> parse is a fixed point):
  - bodies of if/while/for are always Compound nodes;
  - a declaration with several declarators is split into one VarDecl per
    declarator.
"""

from __future__ import annotations

from .errors import ParseError, TypeCheckError
from .lexer import Token, tokenize
from .nodes import (
    Assert, Assign, Binary, BoolLit, Call, CallStmt, Compound, Empty, For,
    FunctionDef, If, IncDec, Index, IntLit, Name, Node, Param, Return,
    TranslationUnit, Unary, VarDecl, While, assign_positions,
)
from .types import Ty, type_by_name

UNSUPPORTED_KEYWORDS = {
    "struct": "structs are not supported",
    "union": "unions are not supported",
    "goto": "goto is not supported",
    "break": "break is not supported",
    "continue": "continue is not supported",
    "switch": "switch is not supported",
    "do": "do-while loops are not supported",
    "long": "only bool/char/int/unsigned are supported",
    "short": "only bool/char/int/unsigned are supported",
    "static": "storage-class specifiers are not supported",
    "const": "type qualifiers are not supported",
    "signed": "only bool/char/int/unsigned are supported",
}

# Parsed as types so the type checker can reject them with a node location.
TYPE_NAMES = {"int", "unsigned", "char", "bool", "void", "float", "double"}

_BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["|"],
    ["^"],
    ["&"],
    ["==", "!="],
    ["<", ">", "<=", ">="],
    ["<<", ">>"],
    ["+", "-"],
    ["*", "/", "%"],
]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token utilities ---

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in ops

    def at_keyword(self, *kws: str) -> bool:
        t = self.peek()
        return t.kind == "keyword" and t.text in kws

    def expect_op(self, op: str) -> Token:
        t = self.peek()
        if not self.at_op(op):
            raise ParseError(f"expected {op!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def fail(self, message: str) -> ParseError:
        t = self.peek()
        return ParseError(message, t.line, t.col)

    def check_supported(self) -> None:
        t = self.peek()
        if t.kind == "keyword" and t.text in UNSUPPORTED_KEYWORDS:
            raise ParseError(UNSUPPORTED_KEYWORDS[t.text], t.line, t.col)

    @staticmethod
    def pin(node: Node, tok: Token) -> Node:
        node.line, node.col = tok.line, tok.col
        return node

    # --- types ---

    def at_type(self) -> bool:
        t = self.peek()
        return t.kind == "keyword" and t.text in TYPE_NAMES

    def parse_type(self) -> tuple[Ty, Token]:
        t = self.next()
        if t.text in ("float", "double"):
            # Grammatically a type, semantically out of range of the subset.
            raise TypeCheckError("floating-point types are not supported", t.line, t.col)
        if t.text == "unsigned" and self.at_keyword("int"):
            self.next()
        ty = type_by_name(t.text)
        if ty is None:
            raise ParseError(f"expected a type name, found {t.text!r}", t.line, t.col)
        return ty, t

    # --- top level ---

    def parse_translation_unit(self) -> TranslationUnit:
        decls: list[Node] = []
        first = self.peek()
        while self.peek().kind != "eof":
            self.check_supported()
            if not self.at_type():
                raise self.fail("expected a function definition or declaration")
            save = self.pos
            ty, ty_tok = self.parse_type()
            if self.peek().kind == "ident" and self.peek(1).kind == "op" and self.peek(1).text == "(":
                decls.append(self.parse_function(ty, ty_tok))
            else:
                self.pos = save
                decls.extend(self.parse_declaration())
        tu = TranslationUnit(decls)
        self.pin(tu, first)
        return tu

    def parse_function(self, return_type: Ty, ty_tok: Token) -> FunctionDef:
        name_tok = self.next()
        self.expect_op("(")
        params: list[Param] = []
        if not self.at_op(")"):
            if self.at_keyword("void") and self.peek(1).text == ")":
                self.next()
            else:
                while True:
                    pty, pty_tok = self.parse_type()
                    p_name = self.next()
                    if p_name.kind != "ident":
                        raise ParseError("expected parameter name", p_name.line, p_name.col)
                    if self.at_op("["):
                        raise self.fail("array parameters are not supported")
                    params.append(self.pin(Param(pty, p_name.text), pty_tok))  # type: ignore[arg-type]
                    if self.at_op(","):
                        self.next()
                        continue
                    break
        self.expect_op(")")
        body = self.parse_compound()
        fn = FunctionDef(return_type, name_tok.text, params, body)
        self.pin(fn, ty_tok)
        return fn

    # --- statements ---

    def parse_declaration(self) -> list[VarDecl]:
        ty, ty_tok = self.parse_type()
        decls: list[VarDecl] = []
        while True:
            name_tok = self.next()
            if name_tok.kind != "ident":
                if name_tok.text == "*":
                    raise ParseError("pointers are not supported", name_tok.line, name_tok.col)
                raise ParseError("expected variable name", name_tok.line, name_tok.col)
            array_len: int | None = None
            if self.at_op("["):
                self.next()
                len_tok = self.next()
                if len_tok.kind != "number":
                    raise ParseError("array bound must be an integer constant", len_tok.line, len_tok.col)
                array_len = len_tok.value
                self.expect_op("]")
            init: Node | None = None
            if self.at_op("="):
                self.next()
                if self.at_op("{"):
                    raise self.fail("array initializer lists are not supported")
                init = self.parse_expr()
            d = VarDecl(ty, name_tok.text, array_len, init)
            self.pin(d, name_tok)
            decls.append(d)
            if self.at_op(","):
                self.next()
                continue
            self.expect_op(";")
            return decls

    def parse_compound(self) -> Compound:
        open_tok = self.expect_op("{")
        stmts: list[Node] = []
        while not self.at_op("}"):
            if self.peek().kind == "eof":
                raise self.fail("unterminated compound statement")
            stmts.extend(self.parse_statement())
        self.expect_op("}")
        block = Compound(stmts)
        self.pin(block, open_tok)
        return block

    def parse_statement(self) -> list[Node]:
        self.check_supported()
        tok = self.peek()
        if self.at_op("{"):
            return [self.parse_compound()]
        if self.at_op(";"):
            self.next()
            return [self.pin(Empty(), tok)]
        if self.at_type():
            return list(self.parse_declaration())
        if self.at_keyword("if"):
            return [self.parse_if()]
        if self.at_keyword("while"):
            return [self.parse_while()]
        if self.at_keyword("for"):
            return [self.parse_for()]
        if self.at_keyword("return"):
            self.next()
            value = None if self.at_op(";") else self.parse_expr()
            self.expect_op(";")
            return [self.pin(Return(value), tok)]
        if self.at_keyword("assert"):
            self.next()
            cond = self.parse_expr()
            self.expect_op(";")
            return [self.pin(Assert(cond), tok)]
        if self.at_keyword("else"):
            raise self.fail("'else' without matching 'if'")
        stmt = self.parse_simple_statement()
        self.expect_op(";")
        return [stmt]

    def parse_body(self) -> Compound:
        """Body of if/while/for: always normalized to a Compound."""
        if self.at_op("{"):
            return self.parse_compound()
        tok = self.peek()
        stmts = self.parse_statement()
        block = Compound(stmts)
        self.pin(block, tok)
        return block

    def parse_if(self) -> If:
        tok = self.next()
        self.expect_op("(")
        cond = self.parse_expr()
        self.expect_op(")")
        then = self.parse_body()
        els = None
        if self.at_keyword("else"):
            self.next()
            els = self.parse_body()
        return self.pin(If(cond, then, els), tok)  # type: ignore[return-value]

    def parse_while(self) -> While:
        tok = self.next()
        self.expect_op("(")
        cond = self.parse_expr()
        self.expect_op(")")
        body = self.parse_body()
        return self.pin(While(cond, body), tok)  # type: ignore[return-value]

    def parse_for(self) -> For:
        tok = self.next()
        self.expect_op("(")
        init = None
        if not self.at_op(";"):
            if self.at_type():
                raise self.fail("declarations in for-init are not supported")
            init = self.parse_simple_statement()
        self.expect_op(";")
        cond = None if self.at_op(";") else self.parse_expr()
        self.expect_op(";")
        step = None if self.at_op(")") else self.parse_simple_statement()
        self.expect_op(")")
        body = self.parse_body()
        return self.pin(For(init, cond, step, body), tok)  # type: ignore[return-value]

    def parse_simple_statement(self) -> Node:
        """Assignment, increment/decrement, or a call; used for expression
        statements and for-loop headers."""
        tok = self.peek()
        if self.at_op("++", "--"):
            op = self.next().text
            target = self.parse_lvalue()
            return self.pin(IncDec(target, op), tok)
        if tok.kind == "ident" and self.peek(1).text == "(":
            call = self.parse_primary()
            assert isinstance(call, Call)
            return self.pin(CallStmt(call), tok)
        if tok.kind != "ident":
            raise self.fail("expected a statement")
        target = self.parse_lvalue()
        if self.at_op("++", "--"):
            op = self.next().text
            return self.pin(IncDec(target, op), tok)
        if not self.at_op("="):
            raise self.fail("expression statements must be assignments, increments, or calls")
        self.expect_op("=")
        value = self.parse_expr()
        return self.pin(Assign(target, value), tok)

    def parse_lvalue(self) -> Node:
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError("expected a variable", tok.line, tok.col)
        base = self.pin(Name(tok.text), tok)
        if self.at_op("["):
            self.next()
            idx = self.parse_expr()
            self.expect_op("]")
            return self.pin(Index(base, idx), tok)  # type: ignore[arg-type]
        return base

    # --- expressions ---

    def parse_expr(self) -> Node:
        return self.parse_binary(0)

    def parse_binary(self, level: int) -> Node:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        while self.at_op(*_BINARY_LEVELS[level]):
            op_tok = self.next()
            right = self.parse_binary(level + 1)
            left = self.pin(Binary(op_tok.text, left, right), op_tok)
        return left

    def parse_unary(self) -> Node:
        tok = self.peek()
        if self.at_op("-", "+", "!", "~"):
            self.next()
            operand = self.parse_unary()
            return self.pin(Unary(tok.text, operand), tok)
        if self.at_op("*"):
            raise ParseError("pointers are not supported", tok.line, tok.col)
        if self.at_op("&"):
            raise ParseError("address-of is not supported (pointers are rejected)", tok.line, tok.col)
        if self.at_op("++", "--"):
            raise self.fail("increment/decrement is only allowed as a statement")
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        node = self.parse_primary()
        while True:
            if self.at_op("["):
                if not isinstance(node, Name):
                    raise self.fail("only variables can be indexed")
                self.next()
                idx = self.parse_expr()
                self.expect_op("]")
                indexed = Index(node, idx)
                indexed.line, indexed.col = node.line, node.col
                node = indexed
            elif self.at_op("++", "--"):
                raise self.fail("increment/decrement is only allowed as a statement")
            else:
                return node

    def parse_primary(self) -> Node:
        tok = self.peek()
        if self.at_op("("):
            self.next()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "number":
            self.next()
            return self.pin(IntLit(tok.value, unsigned_suffix=tok.unsigned_suffix), tok)
        if self.at_keyword("true", "false"):
            self.next()
            return self.pin(BoolLit(tok.text == "true"), tok)
        if tok.kind == "ident":
            self.next()
            if self.at_op("("):
                self.next()
                args: list[Node] = []
                if not self.at_op(")"):
                    while True:
                        args.append(self.parse_expr())
                        if self.at_op(","):
                            self.next()
                            continue
                        break
                self.expect_op(")")
                return self.pin(Call(tok.text, args), tok)
            return self.pin(Name(tok.text), tok)
        self.check_supported()
        raise self.fail(f"unexpected token {tok.text or 'end of input'!r} in expression")


def parse_ast(source: str) -> TranslationUnit:
    """Parse source text into a numbered (but not yet type-checked) AST."""
    tu = _Parser(tokenize(source)).parse_translation_unit()
    assign_positions(tu)
    return tu
