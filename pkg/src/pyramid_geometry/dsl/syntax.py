"""Lexer, AST, parser and pretty-printer for ``.geo`` construction scripts.

Grammar (statements end at a newline, ``;`` or end of input; ``#`` starts a comment)::

    program  := stmt* ;
    stmt     := binding | assert ;
    binding  := ("point"|"line"|"circle"|"num"|"angle") IDENT "=" expr ;
    assert   := "assert" "approx" "(" expr "," expr "," expr ")" ;
    expr     := term (("+"|"-") term)* ;
    term     := unary (("*"|"/") unary)* ;
    unary    := "-" unary | power ;
    power    := primary ("^" unary)? ;
    primary  := NUMBER ["deg"] | call | ref | IDENT
              | "(" expr ")" | "(" expr "," expr ")" ;
    call     := FNAME "(" [expr ("," expr)*] ")" ;
    ref      := IDENT "." IDENT ["[" IDENT "]"] ;

``ref`` names a measurement (``monument.dimension[source]``) and only
resolves when a measurement resolver is supplied at evaluation time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

KINDS = ("point", "line", "circle", "num", "angle")

# name -> (min args, max args)
BUILTINS: dict[str, tuple[int, int]] = {
    "point": (2, 2),
    "midpoint": (2, 2),
    "line": (2, 2),
    "ray": (2, 2),
    "circle": (2, 2),
    "perp_at": (2, 2),
    "perp_bisector": (2, 2),
    "intersect": (2, 3),
    "dist": (2, 2),
    "angle_at": (3, 3),
    "sphere_vol": (1, 1),
    "sphere_area": (1, 1),
    "circle_circ": (1, 1),
    "sqrt": (1, 1),
    "cbrt": (1, 1),
    "abs": (1, 1),
    "pi": (0, 0),
    "dms": (1, 3),
}

RESERVED = frozenset(KINDS) | frozenset(BUILTINS) | {"assert", "approx", "deg"}


class DslError(Exception):
    """A diagnostic anchored at a 1-based line and column."""

    def __init__(self, message: str, line: int, col: int, filename: str | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.filename = filename

    def format(self, filename: str | None = None) -> str:
        name = filename or self.filename or "<input>"
        return f"{name}:{self.line}:{self.col}: error: {self.message}"

    def __str__(self):
        return self.format()


class ParseError(DslError):
    pass


# --- lexer --------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER IDENT OP NEWLINE EOF
    text: str
    line: int
    col: int
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),=;.\[\]])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "newline":
            tokens.append(Token("NEWLINE", text, line, col, pos))
            line += 1
            line_start = m.end()
        elif kind in ("number", "ident", "op"):
            tokens.append(Token(kind.upper(), text, line, col, pos))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1, pos))
    return tokens


# --- AST ----------------------------------------------------------------------
# Positions are carried for diagnostics but excluded from equality so that
# printed-and-reparsed trees compare equal.


@dataclass(frozen=True)
class Node:
    pass


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Num(Node):
    value: float
    unit: str | None = None
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Name(Node):
    id: str
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Ref(Node):
    monument: str
    dimension: str
    source: str | None = None
    pos: tuple[int, int] = _pos()

    @property
    def key(self) -> str:
        return f"{self.monument}.{self.dimension}"


@dataclass(frozen=True)
class Call(Node):
    func: str
    args: tuple[Node, ...]
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Pair(Node):
    x: Node
    y: Node
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Neg(Node):
    operand: Node
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Binding(Node):
    kind: str
    name: str
    expr: Node
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Assert(Node):
    actual: Node
    expected: Node
    tol: Node
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Program(Node):
    statements: tuple[Node, ...]


# --- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at_op(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            raise self.error(f"expected '{text}', found {_describe(self.tok)}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "IDENT":
            raise self.error(f"expected {what}, found {_describe(self.tok)}")
        return self.advance()

    # statements

    def program(self) -> Program:
        stmts = []
        while True:
            while self.tok.kind == "NEWLINE" or self.at_op(";"):
                self.advance()
            if self.tok.kind == "EOF":
                return Program(tuple(stmts))
            stmts.append(self.statement())
            if not (self.tok.kind in ("NEWLINE", "EOF") or self.at_op(";")):
                raise self.error(f"expected end of statement, found {_describe(self.tok)}")

    def statement(self) -> Node:
        tok = self.tok
        if tok.kind == "IDENT" and tok.text == "assert":
            self.advance()
            word = self.expect_ident("'approx'")
            if word.text != "approx":
                raise self.error("expected 'approx' after 'assert'", word)
            self.expect_op("(")
            actual = self.expr()
            self.expect_op(",")
            expected = self.expr()
            self.expect_op(",")
            tol = self.expr()
            self.expect_op(")")
            return Assert(actual, expected, tol, pos=(tok.line, tok.col))
        if tok.kind == "IDENT" and tok.text in KINDS:
            self.advance()
            name = self.expect_ident("a name to bind")
            if name.text in RESERVED:
                raise self.error(f"'{name.text}' is reserved and cannot be bound", name)
            self.expect_op("=")
            return Binding(tok.text, name.text, self.expr(), pos=(tok.line, tok.col))
        raise self.error(f"expected a binding or assert, found {_describe(tok)}")

    # expressions

    def expr(self) -> Node:
        node = self.term()
        while self.at_op("+") or self.at_op("-"):
            op = self.advance()
            node = BinOp(op.text, node, self.term(), pos=(op.line, op.col))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.at_op("*") or self.at_op("/"):
            op = self.advance()
            node = BinOp(op.text, node, self.unary(), pos=(op.line, op.col))
        return node

    def unary(self) -> Node:
        if self.at_op("-"):
            op = self.advance()
            return Neg(self.unary(), pos=(op.line, op.col))
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.at_op("^"):
            op = self.advance()
            return BinOp("^", base, self.unary(), pos=(op.line, op.col))
        return base

    def primary(self) -> Node:
        tok = self.tok
        pos = (tok.line, tok.col)
        if tok.kind == "NUMBER":
            self.advance()
            unit = None
            if self.tok.kind == "IDENT" and self.tok.text == "deg":
                self.advance()
                unit = "deg"
            return Num(float(tok.text), unit, pos=pos)
        if tok.kind == "IDENT":
            self.advance()
            if self.at_op("("):
                return self.call(tok)
            if self.at_op("."):
                self.advance()
                dim = self.expect_ident("a dimension name")
                source = None
                if self.at_op("["):
                    self.advance()
                    source = self.expect_ident("a source name").text
                    self.expect_op("]")
                return Ref(tok.text, dim.text, source, pos=pos)
            if tok.text in RESERVED and tok.text != "pi":
                raise self.error(f"'{tok.text}' cannot be used as a value", tok)
            return Name(tok.text, pos=pos)
        if self.at_op("("):
            self.advance()
            first = self.expr()
            if self.at_op(","):
                self.advance()
                second = self.expr()
                self.expect_op(")")
                return Pair(first, second, pos=pos)
            self.expect_op(")")
            return first
        raise self.error(f"expected an expression, found {_describe(tok)}")

    def call(self, name: Token) -> Node:
        if name.text not in BUILTINS:
            raise self.error(f"unknown builtin '{name.text}'", name)
        self.expect_op("(")
        args = []
        if not self.at_op(")"):
            args.append(self.expr())
            while self.at_op(","):
                self.advance()
                args.append(self.expr())
        self.expect_op(")")
        lo, hi = BUILTINS[name.text]
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise self.error(f"{name.text}() takes {want} arguments, got {len(args)}", name)
        return Call(name.text, tuple(args), pos=(name.line, name.col))


def _describe(tok: Token) -> str:
    if tok.kind == "EOF":
        return "end of input"
    if tok.kind == "NEWLINE":
        return "end of line"
    return f"'{tok.text}'"


def parse(source: str, filename: str | None = None) -> Program:
    """Parse a whole script. Raises :class:`ParseError` with a position."""
    try:
        return _Parser(tokenize(source)).program()
    except ParseError as exc:
        exc.filename = filename
        raise


def parse_expression(source: str) -> Node:
    """Parse a single expression (used for claim formulas)."""
    p = _Parser(tokenize(source))
    node = p.expr()
    while p.tok.kind == "NEWLINE":
        p.advance()
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {_describe(p.tok)} after expression")
    return node


# --- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def to_source(node: Node) -> str:
    """Canonical text for a node; ``parse(to_source(p)) == p``."""
    if isinstance(node, Program):
        return "".join(to_source(s) + "\n" for s in node.statements)
    if isinstance(node, Binding):
        return f"{node.kind} {node.name} = {to_source(node.expr)}"
    if isinstance(node, Assert):
        return f"assert approx({to_source(node.actual)}, {to_source(node.expected)}, {to_source(node.tol)})"
    if isinstance(node, Num):
        return repr(node.value) + (" deg" if node.unit else "")
    if isinstance(node, Name):
        return node.id
    if isinstance(node, Ref):
        return f"{node.monument}.{node.dimension}" + (f"[{node.source}]" if node.source else "")
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_source(a) for a in node.args)})"
    if isinstance(node, Pair):
        return f"({to_source(node.x)}, {to_source(node.y)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        return f"-({inner})" if isinstance(node.operand, BinOp) else f"-{inner}"
    if isinstance(node, BinOp):
        return f"{_operand(node.left)} {node.op} {_operand(node.right)}"
    raise TypeError(f"cannot print {type(node).__name__}")


def _operand(node: Node) -> str:
    text = to_source(node)
    return f"({text})" if isinstance(node, (BinOp, Neg)) else text
