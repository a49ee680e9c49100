####################################################################################################
#                                            parser.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: Lexer and recursive-descent parser for the ``.cdsl`` diagram language:                  #
#                                                                                                  #
#              file      := "diagram" STRING "{" stmt* "}"                                         #
#              stmt      := node_stmt | edge_stmt                                                  #
#              node_stmt := "node" IDENT attrs                                                     #
#              attrs     := ("kind" "=" KIND)? ("role" "=" ROLE)? ("label" "=" STRING)?            #
#              edge_stmt := "edge" IDENT "->" IDENT                                                #
#                                                                                                  #
#          Keywords are recognised by position only, so any identifier (``node``, ``kind``, ...)  #
#          is a legal node id. The first lexical or syntax error aborts; every semantic           #
#          (diagram validation) error is reported, spanning the statement that caused it.         #
#                                                                                                  #
####################################################################################################


#*************#
#   imports   #
#*************#
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

# own
from shiftdiag.core.diagram import (CausalDiagram, Edge, Node, NodeKind, NodeRole, ValidationMode,
                                    validate_diagram)
from shiftdiag.core.errors import DslParseError

logger = logging.getLogger(__name__)

KINDS = tuple(k.value for k in NodeKind)
ROLES = ("image", "target", "anatomy")
ATTRIBUTES = ("kind", "role", "label")
ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}

_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_BLANK_RE = re.compile(r"[ \t\r\n]+")


# ----------------------------- error types -----------------------------------

@dataclass(frozen=True)
class SourceSpan:
    """Position of an error in the decoded source.

    End-of-input errors point one past the last character (``offset == len(text)``),
    so ``'diagram'`` fails at 1:8 and empty input at 1:1. ``offset`` never exceeds
    the input length.
    """

    line: int       # 1-based
    column: int     # 1-based, in characters
    length: int = 1
    offset: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseErrorCode(str, Enum):
    LEX = "LEX"
    SYNTAX = "SYNTAX"
    SEMANTIC = "SEMANTIC"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    code: ParseErrorCode
    message: str

    def __str__(self) -> str:
        return f"{self.span}: {self.code.value}: {self.message}"


class _Abort(Exception):
    """Internal: first lexical/syntax error stops the parse."""

    def __init__(self, error: ParseError):
        self.error = error


# ----------------------------- lexer -----------------------------------------

class TokenType(str, Enum):
    WORD = "identifier"
    STRING = "string"
    LBRACE = "`{`"
    RBRACE = "`}`"
    ARROW = "`->`"
    EQUALS = "`=`"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    type: TokenType
    value: str
    span: SourceSpan

    def describe(self) -> str:
        if self.type is TokenType.WORD:
            return f"`{self.value}`"
        if self.type is TokenType.STRING:
            return "string"
        return self.type.value


class Lexer:
    """Single left-to-right pass; runs in time linear in the input."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.line_start = 0

    def _span(self, start: int, length: int = 1) -> SourceSpan:
        # start is always on the current line when this is called
        return SourceSpan(self.line, start - self.line_start + 1, max(length, 1), start)

    def _advance_to(self, end: int) -> None:
        chunk = self.text[self.pos:end]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.line_start = self.pos + chunk.rfind("\n") + 1
        self.pos = end

    def _fail(self, start: int, message: str, length: int = 1) -> None:
        raise _Abort(ParseError(self._span(start, length), ParseErrorCode.LEX, message))

    def tokens(self) -> list[Token]:
        text = self.text
        out: list[Token] = []
        while True:
            blank = _BLANK_RE.match(text, self.pos)
            if blank:
                self._advance_to(blank.end())
            if self.pos >= len(text):
                out.append(Token(TokenType.EOF, "", self._span(self.pos)))
                return out
            ch = text[self.pos]
            start = self.pos
            if ch == "#":
                end = text.find("\n", start)
                self._advance_to(len(text) if end < 0 else end)
                continue
            word = _WORD_RE.match(text, start)
            if word:
                out.append(Token(TokenType.WORD, word.group(), self._span(start, word.end() - start)))
                self._advance_to(word.end())
            elif ch == '"':
                out.append(self._string())
            elif ch in "{}=":
                kind = {"{": TokenType.LBRACE, "}": TokenType.RBRACE, "=": TokenType.EQUALS}[ch]
                out.append(Token(kind, ch, self._span(start)))
                self._advance_to(start + 1)
            elif text.startswith("->", start):
                out.append(Token(TokenType.ARROW, "->", self._span(start, 2)))
                self._advance_to(start + 2)
            else:
                self._fail(start, f"illegal character {ch!r}")

    def _string(self) -> Token:
        text = self.text
        start = self.pos
        i = start + 1
        chars: list[str] = []
        while i < len(text):
            ch = text[i]
            if ch == '"':
                token = Token(TokenType.STRING, "".join(chars), self._span(start, i + 1 - start))
                self._advance_to(i + 1)
                return token
            if ch == "\n":
                self._fail(start, "unterminated string (newline before closing quote)", i - start)
            if ch == "\\":
                nxt = text[i + 1] if i + 1 < len(text) else ""
                if nxt not in ESCAPES:
                    sequence = "\\" + nxt
                    self._fail(start, f"invalid escape sequence {sequence!r} in string", i + 1 - start)
                chars.append(ESCAPES[nxt])
                i += 2
                continue
            chars.append(ch)
            i += 1
        self._fail(start, "unterminated string (end of input before closing quote)", len(text) - start)
        raise AssertionError("unreachable")


# ----------------------------- parser ----------------------------------------

@dataclass
class _Statement:
    element: Node | Edge
    span: SourceSpan


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = Lexer(text).tokens()
        self.index = 0
        self.statements: list[_Statement] = []

    # ------------------------------------------------------------ helpers
    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _next(self) -> Token:
        token = self.current
        if token.type is not TokenType.EOF:
            self.index += 1
        return token

    def _syntax(self, expected: str, token: Token | None = None) -> None:
        token = token or self.current
        raise _Abort(ParseError(token.span, ParseErrorCode.SYNTAX,
                                f"expected {expected}, found {token.describe()}"))

    def _expect(self, type_: TokenType, expected: str) -> Token:
        if self.current.type is not type_:
            self._syntax(expected)
        return self._next()

    def _keyword(self, word: str) -> Token:
        if self.current.type is not TokenType.WORD or self.current.value != word:
            self._syntax(f"keyword `{word}`")
        return self._next()

    def _stmt_span(self, first: Token) -> SourceSpan:
        last = self.tokens[self.index - 1].span
        return SourceSpan(first.span.line, first.span.column,
                          last.offset + last.length - first.span.offset, first.span.offset)

    # ------------------------------------------------------------ grammar
    def parse_file(self) -> str:
        self._keyword("diagram")
        name = self._expect(TokenType.STRING, "string (diagram name)").value
        self._expect(TokenType.LBRACE, "`{`")
        while True:
            token = self.current
            if token.type is TokenType.RBRACE:
                self._next()
                break
            if token.type is TokenType.WORD and token.value == "node":
                self._node_stmt()
            elif token.type is TokenType.WORD and token.value == "edge":
                self._edge_stmt()
            else:
                self._syntax("keyword `node`, keyword `edge` or `}`")
        self._expect(TokenType.EOF, "end of input")
        return name

    def _node_stmt(self) -> None:
        first = self._next()
        node_id = self._expect(TokenType.WORD, "identifier (node id)").value
        values = {"kind": NodeKind.OBSERVED.value, "role": NodeRole.NONE.value, "label": None}
        last_attr = -1
        while self.current.type is TokenType.WORD and self.current.value not in ("node", "edge"):
            key_token = self._next()
            key = key_token.value
            if key not in ATTRIBUTES:
                self._syntax("attribute `kind`, `role` or `label`", key_token)
            order = ATTRIBUTES.index(key)
            if order <= last_attr:
                raise _Abort(ParseError(
                    key_token.span, ParseErrorCode.SYNTAX,
                    f"attribute `{key}` repeated or out of order; expected attributes in the order kind, role, label"))
            last_attr = order
            self._expect(TokenType.EQUALS, "`=`")
            if key == "label":
                values["label"] = self._expect(TokenType.STRING, "string (label)").value
                continue
            allowed = KINDS if key == "kind" else ROLES
            token = self.current
            if token.type is not TokenType.WORD or token.value not in allowed:
                self._syntax(f"{key} ({', '.join(allowed)})")
            values[key] = self._next().value
        node = Node(node_id, NodeKind(values["kind"]), NodeRole(values["role"]), values["label"])
        self.statements.append(_Statement(node, self._stmt_span(first)))

    def _edge_stmt(self) -> None:
        first = self._next()
        source = self._expect(TokenType.WORD, "identifier (edge source)").value
        self._expect(TokenType.ARROW, "`->`")
        target = self._expect(TokenType.WORD, "identifier (edge target)").value
        self.statements.append(_Statement(Edge(source, target), self._stmt_span(first)))

    def span_of(self, element) -> SourceSpan:
        for stmt in self.statements:
            if stmt.element is element:
                return stmt.span
        for stmt in self.statements:
            if isinstance(element, Edge) and stmt.element == element:
                return stmt.span
        return SourceSpan(1, 1, 1, 0)


# ----------------------------- public API ------------------------------------

def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[:exc.start].decode("utf-8")
        line = prefix.count("\n") + 1
        column = len(prefix) - (prefix.rfind("\n") + 1) + 1
        error = ParseError(SourceSpan(line, column, 1, len(prefix)), ParseErrorCode.LEX,
                           f"invalid UTF-8 byte 0x{data[exc.start]:02x}")
        raise DslParseError([error])


def parse_dsl(text: str | bytes, mode: ValidationMode | str = ValidationMode.STRICT) -> CausalDiagram:
    """Parse ``.cdsl`` source into a validated diagram.

    Raises:
        DslParseError: with the list of ParseError (one LEX/SYNTAX error, or every SEMANTIC one).
    """
    if isinstance(text, (bytes, bytearray)):
        text = _decode(bytes(text))
    try:
        parser = Parser(text)
        name = parser.parse_file()
    except _Abort as abort:
        raise DslParseError([abort.error])

    nodes = [s.element for s in parser.statements if isinstance(s.element, Node)]
    edges = [s.element for s in parser.statements if isinstance(s.element, Edge)]
    report = validate_diagram(name, nodes, edges, mode)
    if report.errors:
        errors = [ParseError(parser.span_of(issue.element), ParseErrorCode.SEMANTIC,
                             f"{issue.code}: {issue.message}")
                  for issue in report.errors]
        raise DslParseError(sorted(errors, key=lambda e: (e.span.line, e.span.column)))
    logger.info("parsed diagram '%s' (%d nodes, %d edges)", name, len(nodes), len(edges))
    return CausalDiagram(name, tuple(nodes), tuple(edges), report)


def load_diagram(path: str | Path, mode: ValidationMode | str = ValidationMode.STRICT) -> CausalDiagram:
    """Read and parse a ``.cdsl`` file; parse errors carry the path as their source."""
    path = Path(path)
    data = path.read_bytes()
    try:
        return parse_dsl(data, mode)
    except DslParseError as exc:
        raise DslParseError(exc.errors, source=str(path)) from None
