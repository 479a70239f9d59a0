"""symbol_parser.py

Маленький язык выражений для символов σ(x, ξ): лексер, AST, парсер
рекурсивного спуска и принтер.

Грамматика (приоритет: ^ > унарный минус > *, / > +, − > сравнения):

    expr       := additive (cmp additive)?
    additive   := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := atom ("^" unary)?                 правоассоциативно
    atom       := number | var | call | "(" expr ")"
    var        := "norm_x" | "norm_xi" | "bracket_xi"
    call       := "digit" "(" "x" "," int ")"
                | ("re_char" | "im_char") "(" literal ("," literal)* "," "x" ")"
                | func "(" expr ("," expr)* ")"
    func       := exp | log | sin | cos | abs | min | max | if
    cmp        := "<" | "<=" | ">" | ">=" | "==" | "!="     (а также ≤, ≥)
    literal    := ["-"] int ["/" int]

Функции проверяются по арности на этапе разбора; деление и логарифм
охраняются при вычислении (см. symbols.py).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TypeAlias

from GENERAL.errors import ExprSyntaxError

VARIABLES = frozenset({"norm_x", "norm_xi", "bracket_xi"})
XI_VARIABLES = frozenset({"norm_xi", "bracket_xi"})

# имя -> (min, max) число аргументов
FUNCTIONS: dict[str, tuple[int, int | None]] = {
    "exp": (1, 1),
    "log": (1, 1),
    "sin": (1, 1),
    "cos": (1, 1),
    "abs": (1, 1),
    "min": (2, None),
    "max": (2, None),
    "if": (3, 3),
}
CHARACTER_FUNCTIONS = frozenset({"re_char", "im_char"})
COMPARISONS = frozenset({"<", "<=", ">", ">=", "==", "!="})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|==|!=|≤|≥|−|[-+*/^(),<>])
    """,
    re.VERBOSE,
)
_CANONICAL_OPS = {"−": "-", "≤": "<=", "≥": ">="}


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if match is None:
            raise ExprSyntaxError(line, col, "лексема", text[pos])
        kind = match.lastgroup or ""
        if kind == "nl":
            line, line_start = line + 1, match.end()
        elif kind != "ws":
            value = match.group()
            tokens.append(Token(kind, _CANONICAL_OPS.get(value, value), line, col))
        pos = match.end()
    tokens.append(Token("end", "", line, len(text) - line_start + 1))
    return tokens


# ----------------------------
# AST
# ----------------------------

Position: TypeAlias = tuple[int, int]


@dataclass(frozen=True)
class Number:
    value: float
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Variable:
    name: str
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Digit:
    index: int
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Character:
    """re_char/im_char(ξ0, x); frequency — дроби (padic) или DFT-индекс (Виленкин)."""

    frequency: tuple[Fraction, ...]
    real: bool = True
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Unary:
    operand: Node
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: Node
    right: Node
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Compare:
    op: str
    left: Node
    right: Node
    pos: Position = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple[Node, ...]
    pos: Position = field(default=(0, 0), compare=False)


Node: TypeAlias = Number | Variable | Digit | Character | Unary | Binary | Compare | Call


@dataclass(frozen=True)
class SymbolExpr:
    """Разобранное выражение символа; равенство — по дереву."""

    root: Node
    source: str = field(default="", compare=False)

    def uses_xi(self) -> bool:
        return _uses_xi(self.root)

    def __str__(self) -> str:
        return format_symbol(self)


def _uses_xi(node: Node) -> bool:
    match node:
        case Variable(name=name):
            return name in XI_VARIABLES
        case Unary(operand=operand):
            return _uses_xi(operand)
        case Binary(left=left, right=right) | Compare(left=left, right=right):
            return _uses_xi(left) or _uses_xi(right)
        case Call(args=args):
            return any(_uses_xi(a) for a in args)
        case _:
            return False


# ----------------------------
# Парсер
# ----------------------------


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def error(self, expected: str) -> ExprSyntaxError:
        token = self.current
        return ExprSyntaxError(token.line, token.col, expected, token.text or "конец ввода")

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            raise self.error(repr(text))
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise self.error("оператор или конец выражения")
        return node

    def expr(self) -> Node:
        left = self.additive()
        if self.current.kind == "op" and self.current.text in COMPARISONS:
            token = self.advance()
            right = self.additive()
            return Compare(token.text, left, right, (token.line, token.col))
        return left

    def additive(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in ("+", "-"):
            token = self.advance()
            node = Binary(token.text, node, self.term(), (token.line, token.col))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in ("*", "/"):
            token = self.advance()
            node = Binary(token.text, node, self.unary(), (token.line, token.col))
        return node

    def unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            token = self.advance()
            return Unary(self.unary(), (token.line, token.col))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            token = self.advance()
            return Binary("^", base, self.unary(), (token.line, token.col))
        return base

    def atom(self) -> Node:
        token = self.current
        pos = (token.line, token.col)
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(token.line, token.col, "конечное число", token.text)
            self.advance()
            return Number(value, pos)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if token.kind != "name":
            raise self.error("число, переменная, функция или '('")

        self.advance()
        name = token.text
        if name in VARIABLES:
            return Variable(name, pos)
        if name == "digit":
            return self.digit(pos)
        if name in CHARACTER_FUNCTIONS:
            return self.character(name, pos)
        if name in FUNCTIONS:
            return self.call(name, pos)
        raise ExprSyntaxError(token.line, token.col, "переменная или функция", name)

    def digit(self, pos: Position) -> Node:
        self.expect("(")
        self.expect_x()
        self.expect(",")
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self.error("неотрицательное целое")
        self.advance()
        self.expect(")")
        return Digit(int(token.text), pos)

    def expect_x(self) -> None:
        if self.current.kind != "name" or self.current.text != "x":
            raise self.error("'x'")
        self.advance()

    def literal(self) -> Fraction:
        sign = 1
        if self.current.text == "-":
            self.advance()
            sign = -1
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self.error("целое или дробь a/b")
        self.advance()
        value = Fraction(int(token.text))
        if self.current.text == "/":
            self.advance()
            den = self.current
            if den.kind != "number" or not den.text.isdigit() or int(den.text) == 0:
                raise self.error("ненулевой знаменатель")
            self.advance()
            value /= int(den.text)
        return sign * value

    def character(self, name: str, pos: Position) -> Node:
        self.expect("(")
        frequency = [self.literal()]
        self.expect(",")
        while not (self.current.kind == "name" and self.current.text == "x"):
            frequency.append(self.literal())
            self.expect(",")
        self.expect_x()
        self.expect(")")
        return Character(tuple(frequency), name == "re_char", pos)

    def call(self, name: str, pos: Position) -> Node:
        self.expect("(")
        args = [self.expr()]
        while self.current.text == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        low, high = FUNCTIONS[name]
        if len(args) < low or (high is not None and len(args) > high):
            expected = f"{low}" if low == high else f"≥ {low}"
            raise ExprSyntaxError(pos[0], pos[1], f"{expected} аргумент(а) у {name}", str(len(args)))
        return Call(name, tuple(args), pos)


def parse_symbol(text: str) -> SymbolExpr:
    """Разбирает текст выражения в AST; ошибки — ExprSyntaxError с позицией."""
    return SymbolExpr(_Parser(text).parse(), text)


# ----------------------------
# Принтер
# ----------------------------


def _format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_node(node: Node) -> str:
    match node:
        case Number(value=value):
            return repr(float(value))
        case Variable(name=name):
            return name
        case Digit(index=index):
            return f"digit(x, {index})"
        case Character(frequency=frequency, real=real):
            literals = ", ".join(_format_fraction(q) for q in frequency)
            return f"{'re_char' if real else 'im_char'}({literals}, x)"
        case Unary(operand=operand):
            return f"(-{format_node(operand)})"
        case Binary(op=op, left=left, right=right) | Compare(op=op, left=left, right=right):
            return f"({format_node(left)} {op} {format_node(right)})"
        case Call(name=name, args=args):
            return f"{name}({', '.join(format_node(a) for a in args)})"
    raise TypeError(f"Неизвестный узел {node!r}")


def format_symbol(expr: SymbolExpr) -> str:
    return format_node(expr.root)
