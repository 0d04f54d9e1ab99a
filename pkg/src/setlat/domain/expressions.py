"""Infix expressions and guards for piecewise function descriptions.

Arithmetic grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := base ('^' '-'? INT)?
    base   := NUMBER | 'x'i | 't' | '(' expr ')'
            | ('min' | 'max') '(' expr (',' expr)+ ')' | 'abs' '(' expr ')'

Guards combine chained comparisons (``0 <= x1 <= 1``) with ``and``/``or``
and the literals ``true``/``false``.  Comparisons use an absolute tolerance.
"""

import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from .exceptions import EvaluationError, ExpressionParseError
from .models import DEFAULT_TOLERANCES


class Token(NamedTuple):
    kind: str
    text: str
    position: int


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|==|[-+*/^(),<>])"
    r")"
)

_FUNCTIONS = {"min", "max", "abs"}
_COMPARISONS = {"<=", "<", ">=", ">", "=="}


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionParseError(
                f"unexpected character {text[start]!r}", text, start
            )
        kind = match.lastgroup or ""
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# -- syntax tree -----------------------------------------------------------------

class Node:
    """Base class of expression tree nodes."""

    def evaluate(self, x: Sequence[float], t: float) -> float:
        raise NotImplementedError

    def variables(self) -> FrozenSet[int]:
        return frozenset()


@dataclass(frozen=True)
class Number(Node):
    value: float

    def evaluate(self, x: Sequence[float], t: float) -> float:
        return self.value


@dataclass(frozen=True)
class Variable(Node):
    """``x<index+1>``, or the parameter ``t`` when index is -1."""

    index: int

    def evaluate(self, x: Sequence[float], t: float) -> float:
        if self.index < 0:
            return float(t)
        try:
            return float(x[self.index])
        except IndexError as e:
            raise EvaluationError(
                f"point has no coordinate x{self.index + 1}",
                {"dimension": len(x)},
            ) from e

    def variables(self) -> FrozenSet[int]:
        return frozenset() if self.index < 0 else frozenset({self.index})


@dataclass(frozen=True)
class Negate(Node):
    operand: Node

    def evaluate(self, x: Sequence[float], t: float) -> float:
        return -self.operand.evaluate(x, t)

    def variables(self) -> FrozenSet[int]:
        return self.operand.variables()


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node

    def evaluate(self, x: Sequence[float], t: float) -> float:
        a = self.left.evaluate(x, t)
        b = self.right.evaluate(x, t)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b == 0:
            raise EvaluationError("division by zero", {"point": list(x)})
        return a / b

    def variables(self) -> FrozenSet[int]:
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True)
class Power(Node):
    base: Node
    exponent: int

    def evaluate(self, x: Sequence[float], t: float) -> float:
        b = self.base.evaluate(x, t)
        if b == 0 and self.exponent < 0:
            raise EvaluationError("zero raised to a negative power",
                                  {"point": list(x)})
        try:
            return float(b ** self.exponent)
        except OverflowError:
            return math.inf if b > 0 or self.exponent % 2 == 0 else -math.inf

    def variables(self) -> FrozenSet[int]:
        return self.base.variables()


_CALLS: Dict[str, Callable[..., float]] = {"min": min, "max": max, "abs": abs}


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: Tuple[Node, ...]

    def evaluate(self, x: Sequence[float], t: float) -> float:
        values = [a.evaluate(x, t) for a in self.args]
        return float(_CALLS[self.name](*values))

    def variables(self) -> FrozenSet[int]:
        return frozenset().union(*(a.variables() for a in self.args))


@dataclass(frozen=True)
class Compare(Node):
    """Chained comparison; every link must hold."""

    operands: Tuple[Node, ...]
    ops: Tuple[str, ...]
    tol: float

    def evaluate(self, x: Sequence[float], t: float) -> float:
        values = [o.evaluate(x, t) for o in self.operands]
        for op, a, b in zip(self.ops, values, values[1:]):
            if not _compare(op, a, b, self.tol):
                return 0.0
        return 1.0

    def variables(self) -> FrozenSet[int]:
        return frozenset().union(*(o.variables() for o in self.operands))


def _compare(op: str, a: float, b: float, tol: float) -> bool:
    if op == "<=":
        return a <= b + tol
    if op == "<":
        return a < b - tol
    if op == ">=":
        return a >= b - tol
    if op == ">":
        return a > b + tol
    return abs(a - b) <= tol


@dataclass(frozen=True)
class Logical(Node):
    op: str
    operands: Tuple[Node, ...]

    def evaluate(self, x: Sequence[float], t: float) -> float:
        if self.op == "and":
            return 1.0 if all(o.evaluate(x, t) for o in self.operands) else 0.0
        return 1.0 if any(o.evaluate(x, t) for o in self.operands) else 0.0

    def variables(self) -> FrozenSet[int]:
        return frozenset().union(*(o.variables() for o in self.operands))


# -- parser ----------------------------------------------------------------------

class _Parser:
    """Recursive descent over a token list."""

    def __init__(self, text: str, n: Optional[int], tol: float):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.n = n
        self.tol = tol

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Optional[Token] = None) -> ExpressionParseError:
        token = token or self.current
        found = token.text or "end of input"
        return ExpressionParseError(f"{message}, found {found!r}", self.text,
                                    token.position)

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind in ("op", "name") and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error(f"expected {text!r}")

    def finish(self) -> None:
        if self.current.kind != "end":
            raise self.error("unexpected trailing input")

    # guards

    def guard(self) -> Node:
        operands = [self.conjunction()]
        while self.accept("or"):
            operands.append(self.conjunction())
        return operands[0] if len(operands) == 1 else Logical("or", tuple(operands))

    def conjunction(self) -> Node:
        operands = [self.condition()]
        while self.accept("and"):
            operands.append(self.condition())
        return operands[0] if len(operands) == 1 else Logical("and", tuple(operands))

    def condition(self) -> Node:
        if self.accept("true"):
            return Number(1.0)
        if self.accept("false"):
            return Number(0.0)
        start = self.index
        try:
            return self.comparison()
        except ExpressionParseError as first:
            if self.tokens[start].text != "(":
                raise
            self.index = start + 1
            try:
                inner = self.guard()
                self.expect(")")
            except ExpressionParseError as second:
                raise (second if second.position > first.position else first)
            return inner

    def comparison(self) -> Node:
        operands = [self.expr()]
        ops: List[str] = []
        while self.current.kind == "op" and self.current.text in _COMPARISONS:
            ops.append(self.advance().text)
            operands.append(self.expr())
        if not ops:
            raise self.error("expected a comparison operator")
        return Compare(tuple(operands), tuple(ops), self.tol)

    # arithmetic

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in ("+", "-"):
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind == "op" and self.current.text in ("*", "/"):
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.accept("-"):
            return Negate(self.factor())
        return self.power()

    def power(self) -> Node:
        node = self.base()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            token = self.current
            if token.kind != "number" or not token.text.isdigit():
                raise self.error("expected an integer exponent")
            self.advance()
            node = Power(node, sign * int(token.text))
        return node

    def base(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Number(float(token.text))
        if token.kind == "name":
            return self.name(token)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("expected a number, variable or '('")

    def name(self, token: Token) -> Node:
        text = token.text
        if text in _FUNCTIONS:
            self.advance()
            self.expect("(")
            args = [self.expr()]
            while self.accept(","):
                args.append(self.expr())
            self.expect(")")
            if text == "abs" and len(args) != 1:
                raise self.error("abs takes one argument", token)
            if text != "abs" and len(args) < 2:
                raise self.error(f"{text} takes at least two arguments", token)
            return Call(text, tuple(args))
        if text == "t":
            self.advance()
            return Variable(-1)
        match = re.fullmatch(r"x([1-9]\d*)", text)
        if match:
            index = int(match.group(1)) - 1
            if self.n is not None and index >= self.n:
                raise ExpressionParseError(
                    f"unknown variable {text!r} in a space of dimension {self.n}",
                    self.text, token.position,
                )
            self.advance()
            return Variable(index)
        raise ExpressionParseError(f"unknown name {text!r}", self.text,
                                   token.position)


@dataclass(frozen=True)
class Expr:
    """A parsed expression together with its source text."""

    text: str
    root: Node
    is_guard: bool = False

    def evaluate(self, x: Sequence[float], t: float = 0.0) -> float:
        return self.root.evaluate(x, t)

    def holds(self, x: Sequence[float], t: float = 0.0) -> bool:
        return bool(self.root.evaluate(x, t))

    @property
    def variables(self) -> FrozenSet[int]:
        return self.root.variables()

    def __str__(self) -> str:
        return self.text


def parse_expression(text: str, n: Optional[int] = None) -> Expr:
    """Parse an arithmetic expression over x1..xn and t."""
    parser = _Parser(str(text), n, DEFAULT_TOLERANCES.guard_tol)
    root = parser.expr()
    parser.finish()
    return Expr(str(text), root)


def parse_guard(text: str, n: Optional[int] = None,
                tol: float = DEFAULT_TOLERANCES.guard_tol) -> Expr:
    """Parse a boolean guard; comparisons use the absolute tolerance ``tol``."""
    parser = _Parser(str(text), n, tol)
    root = parser.guard()
    parser.finish()
    return Expr(str(text), root, is_guard=True)


def constant(value: float) -> Expr:
    return Expr(repr(float(value)), Number(float(value)))


ALWAYS = Expr("true", Number(1.0), is_guard=True)
