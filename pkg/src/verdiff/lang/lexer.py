"""Hand-rolled lexer for the supported subset."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

KEYWORDS = {
    "int", "unsigned", "char", "bool", "void",
    "if", "else", "while", "for", "return", "assert",
    "true", "false",
    # Recognized so the parser can reject them with a useful message.
    "float", "double", "struct", "union", "goto", "break", "continue",
    "switch", "do", "long", "short", "static", "const", "signed",
}

# Longest-match first.
OPERATORS = [
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--",
    "+", "-", "*", "/", "%", "<", ">", "!", "~", "&", "|", "^", "=",
    "(", ")", "{", "}", "[", "]", ",", ";",
]


@dataclass
class Token:
    kind: str  # 'ident' | 'number' | 'keyword' | 'op' | 'eof'
    text: str
    line: int
    col: int
    value: int = 0
    unsigned_suffix: bool = False


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            advance((j - i) if j != -1 else (n - i))
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j == -1:
                raise ParseError("unterminated block comment", line, col)
            advance(j + 2 - i)
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, col))
            advance(j - i)
            continue
        if c.isdigit():
            j = i
            if source.startswith("0x", i) or source.startswith("0X", i):
                j = i + 2
                while j < n and source[j] in "0123456789abcdefABCDEF":
                    j += 1
                if j == i + 2:
                    raise ParseError("malformed hex literal", line, col)
                value = int(source[i:j], 16)
            else:
                while j < n and source[j].isdigit():
                    j += 1
                value = int(source[i:j])  # leading zeros read as decimal
            unsigned_suffix = False
            while j < n and source[j] in "uUlL":
                if source[j] in "uU":
                    unsigned_suffix = True
                j += 1
            if j < n and (source[j].isalpha() or source[j] == "_" or source[j] == "."):
                raise ParseError(f"malformed numeric literal near {source[i:j + 1]!r}", line, col)
            tokens.append(Token("number", source[i:j], line, col, value=value, unsigned_suffix=unsigned_suffix))
            advance(j - i)
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("op", op, line, col))
                advance(len(op))
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens
