"""Summand expressions in the variable k: tokenizer, Pratt parser, evaluator.

Grammar, loosest binding first: + and -, then * and /, then unary minus,
then ^ (right associative). Functions take one parenthesised argument.
Parentheses and operator chains may nest at most MAX_NESTING levels deep.
"""

import logging
import math
import re
from dataclasses import dataclass
from functools import partial
from typing import Callable, Dict, Iterator, List, NamedTuple, NoReturn, Tuple, Union

from gauss_summation.exceptions import ArgumentError, EvaluationError, ExprSyntaxError
from gauss_summation.models import Side, Summand

logger = logging.getLogger(__name__)

MAX_EXPR_BYTES = 4096
MAX_NESTING = 128

FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "abs": math.fabs,
}

ADD_BP = 10
MUL_BP = 20
NEG_BP = 25
POW_BP = 30

_BINDING = {"+": ADD_BP, "-": ADD_BP, "*": MUL_BP, "/": MUL_BP, "^": POW_BP}

_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str = "k"


@dataclass(frozen=True)
class Constant:
    name: str = "pi"


@dataclass(frozen=True)
class Negate:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprAst"


ExprAst = Union[Number, Variable, Constant, Negate, BinaryOp, Call]
_Parsed = Tuple[ExprAst, int]


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    """1-based byte position of text[index] in the UTF-8 encoding."""
    return len(text[:index].encode("utf-8")) + 1


def tokenize(text: str) -> Iterator[Token]:
    """Yield tokens, ending with an 'end' token positioned after the input."""
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            yield Token("end", "", _byte_offset(text, pos))
            return
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(
                f"unexpected character {text[pos]!r}",
                offset=_byte_offset(text, pos),
                expected="number, name, operator or parenthesis",
            )
        kind = match.lastgroup or "op"
        yield Token(kind, match.group(), _byte_offset(text, pos))
        pos = match.end()


class _Parser:
    """Top-down operator precedence parser over a token list.

    Every method returns the node together with its height so deep trees are
    refused while they are built, before evaluation could exhaust the stack.
    """

    def __init__(self, text: str):
        self.tokens: List[Token] = list(tokenize(text))
        self.index = 0
        self.level = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "end":
            self.index += 1
        return token

    def expect(self, text: str) -> None:
        token = self.advance()
        if token.text != text or token.kind != "op":
            raise ExprSyntaxError(
                f"unexpected {_describe(token)}",
                offset=token.offset,
                expected=repr(text),
            )

    def left_binding(self, token: Token) -> int:
        if token.kind == "op":
            return _BINDING.get(token.text, 0)
        return 0

    def expression(self, rbp: int = 0) -> _Parsed:
        self.level += 1
        try:
            if self.level > MAX_NESTING:
                _too_deep(self.peek())
            left = self.nud(self.advance())
            while rbp < self.left_binding(self.peek()):
                left = self.led(self.advance(), left)
            return left
        finally:
            self.level -= 1

    def nud(self, token: Token) -> _Parsed:
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(
                    f"number {token.text} overflows",
                    offset=token.offset,
                    expected="a finite number",
                )
            return Number(value), 1
        if token.kind == "name":
            if token.text == "k":
                return Variable(), 1
            if token.text == "pi":
                return Constant(), 1
            if token.text in FUNCTIONS:
                self.expect("(")
                arg, height = self.expression()
                self.expect(")")
                return _node(Call(token.text, arg), height + 1, token)
            raise ExprSyntaxError(
                f"unknown name {token.text!r}",
                offset=token.offset,
                expected="'k', 'pi' or one of " + ", ".join(sorted(FUNCTIONS)),
            )
        if token.kind == "op" and token.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if token.kind == "op" and token.text == "-":
            operand, height = self.expression(NEG_BP)
            return _node(Negate(operand), height + 1, token)
        raise ExprSyntaxError(
            f"unexpected {_describe(token)}", offset=token.offset, expected="operand"
        )

    def led(self, token: Token, left: _Parsed) -> _Parsed:
        if token.text == "^":
            # right associative: 2^3^2 == 2^(3^2)
            right = self.expression(POW_BP - 1)
        else:
            right = self.expression(_BINDING[token.text])
        height = max(left[1], right[1]) + 1
        return _node(BinaryOp(token.text, left[0], right[0]), height, token)


def _too_deep(token: Token) -> NoReturn:
    raise ExprSyntaxError(
        f"expression nests deeper than {MAX_NESTING} levels",
        offset=token.offset,
        expected="a less deeply nested expression",
    )


def _node(node: ExprAst, height: int, token: Token) -> _Parsed:
    if height > MAX_NESTING:
        _too_deep(token)
    return node, height


def _describe(token: Token) -> str:
    if token.kind == "end":
        return "end of input"
    return f"{token.text!r}"


def parse_expr(text: str) -> ExprAst:
    """Parse a summand expression in k.

    Raises:
        ArgumentError: input longer than 4096 bytes
        ExprSyntaxError: syntax error or nesting deeper than MAX_NESTING, with
            1-based byte offset
    """
    if len(text.encode("utf-8")) > MAX_EXPR_BYTES:
        raise ArgumentError(f"expression exceeds {MAX_EXPR_BYTES} bytes")
    parser = _Parser(text)
    tree, _ = parser.expression()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ExprSyntaxError(
            f"unexpected {_describe(trailing)}",
            offset=trailing.offset,
            expected="operator or end of input",
        )
    return tree


def to_text(node: ExprAst) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(node, Number):
        return repr(node.value)
    if isinstance(node, (Variable, Constant)):
        return node.name
    if isinstance(node, Negate):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, BinaryOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    return f"{node.func}({to_text(node.arg)})"


def _apply(op: str, left: float, right: float) -> float:
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        return left / right
    return math.pow(left, right)


def _eval(node: ExprAst, k: float) -> float:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Variable):
        return k
    if isinstance(node, Constant):
        return math.pi
    if isinstance(node, Negate):
        return -_eval(node.operand, k)
    if isinstance(node, BinaryOp):
        return _apply(node.op, _eval(node.left, k), _eval(node.right, k))
    return FUNCTIONS[node.func](_eval(node.arg, k))


def evaluate(node: ExprAst, k: float) -> float:
    """Value of the expression at k.

    Raises:
        EvaluationError: division by zero, domain or range failure, or a
            non-finite result
    """
    try:
        value = _eval(node, k)
    except (ArithmeticError, ValueError) as e:
        raise EvaluationError(f"expression failed at k={k}: {e}", k=k) from e
    if not math.isfinite(value):
        raise EvaluationError(f"expression is not finite at k={k}", k=k)
    return value


def compile_summand(text: str, side: Side = Side.TWO_SIDED) -> Summand:
    """Parse text and wrap it as a Summand."""
    tree = parse_expr(text)
    logger.debug(f"Parsed summand {to_text(tree)}")
    return Summand(g=partial(evaluate, tree), side=side, description=text)
