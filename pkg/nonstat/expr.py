"""Expression mini-language: AST, parser, evaluator and printer."""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Union

import numpy as np

from .errors import ExprSyntaxError, UnboundVariable, UnknownFunction

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class UnaryOp(str, Enum):
    NEG = "neg"
    SIN = "sin"
    COS = "cos"
    EXP = "exp"
    LOG = "log"
    SQRT = "sqrt"
    ABS = "abs"


class BinaryOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    POW = "pow"


FUNCTIONS: Dict[str, UnaryOp] = {op.value: op for op in UnaryOp if op is not UnaryOp.NEG}


@dataclass(frozen=True)
class Constant:
    """A literal as the parser produces it: non-negative, possibly +inf, never nan or -0.0.

    Negative values are written as ``Unary(NEG, Constant(...))``.
    """

    value: float

    def __post_init__(self) -> None:
        value = float(self.value)
        if math.isnan(value) or math.copysign(1.0, value) < 0:
            raise ValueError(f"invalid constant {value!r}; negate with Unary(NEG, ...) instead")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not IDENTIFIER.fullmatch(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Unary:
    op: UnaryOp
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: BinaryOp
    left: "Expr"
    right: "Expr"


Expr = Union[Constant, Variable, Unary, Binary]


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_PATTERN = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(source: str) -> List[Token]:
    """Split ``source`` into tokens; offsets are byte offsets into its UTF-8 encoding."""
    tokens: List[Token] = []
    position = 0
    byte_offset = 0
    while position < len(source):
        match = _TOKEN_PATTERN.match(source, position)
        if match is None:
            raise ExprSyntaxError(
                byte_offset,
                "a number, name, operator or parenthesis",
                f"unexpected character {source[position]!r} at offset {byte_offset}",
            )
        text = match.group()
        if match.lastgroup != "ws":
            tokens.append(Token(match.lastgroup, text, byte_offset))
        byte_offset += len(text.encode("utf-8"))
        position = match.end()
    tokens.append(Token("end", "", byte_offset))
    return tokens


# ---------------------------------------------------------------------------
# Parser

_INFIX: Dict[str, tuple[int, BinaryOp]] = {
    "+": (10, BinaryOp.ADD),
    "-": (10, BinaryOp.SUB),
    "*": (20, BinaryOp.MUL),
    "/": (20, BinaryOp.DIV),
    "^": (40, BinaryOp.POW),
}
_NEGATION_BP = 30


class Parser:
    """Pratt parser over a token list."""

    def __init__(self, tokens: List[Token]) -> None:
        self._tokens = tokens
        self._index = 0

    @property
    def token(self) -> Token:
        return self._tokens[self._index]

    def advance(self) -> Token:
        token = self.token
        if token.kind != "end":
            self._index += 1
        return token

    def expect(self, text: str) -> Token:
        if self.token.text != text or self.token.kind != "op":
            raise ExprSyntaxError(self.token.offset, f"'{text}'")
        return self.advance()

    def parse(self) -> Expr:
        tree = self.expression(0)
        if self.token.kind != "end":
            raise ExprSyntaxError(self.token.offset, "an operator or end of input")
        return tree

    def expression(self, rbp: int) -> Expr:
        left = self.prefix()
        while self.token.kind == "op" and self.token.text in _INFIX:
            lbp, op = _INFIX[self.token.text]
            if lbp <= rbp:
                break
            self.advance()
            # pow is right-associative
            right = self.expression(lbp - 1 if op is BinaryOp.POW else lbp)
            left = Binary(op, left, right)
        return left

    def prefix(self) -> Expr:
        token = self.token
        logger.debug("prefix token: %r", token)
        if token.kind == "number":
            self.advance()
            return Constant(float(token.text))
        if token.kind == "name":
            self.advance()
            if self.token.kind == "op" and self.token.text == "(":
                if token.text not in FUNCTIONS:
                    raise UnknownFunction(token.text, token.offset)
                self.advance()
                argument = self.expression(0)
                self.expect(")")
                return Unary(FUNCTIONS[token.text], argument)
            return Variable(token.text)
        if token.kind == "op" and token.text == "-":
            self.advance()
            return Unary(UnaryOp.NEG, self.expression(_NEGATION_BP))
        if token.kind == "op" and token.text == "(":
            self.advance()
            inner = self.expression(0)
            self.expect(")")
            return inner
        raise ExprSyntaxError(token.offset, "an operand")


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree."""
    return Parser(tokenize(source)).parse()


# ---------------------------------------------------------------------------
# Evaluation

_UNARY_UFUNCS = {
    UnaryOp.NEG: np.negative,
    UnaryOp.SIN: np.sin,
    UnaryOp.COS: np.cos,
    UnaryOp.EXP: np.exp,
    UnaryOp.LOG: np.log,
    UnaryOp.SQRT: np.sqrt,
    UnaryOp.ABS: np.abs,
}

_BINARY_UFUNCS = {
    BinaryOp.ADD: np.add,
    BinaryOp.SUB: np.subtract,
    BinaryOp.MUL: np.multiply,
    BinaryOp.DIV: np.divide,
    BinaryOp.POW: np.power,
}


def _evaluate(node: Expr, bindings: Mapping[str, Any]) -> Any:
    if isinstance(node, Constant):
        return np.float64(node.value)
    if isinstance(node, Variable):
        try:
            return bindings[node.name]
        except KeyError:
            raise UnboundVariable(node.name) from None
    if isinstance(node, Unary):
        return _UNARY_UFUNCS[node.op](_evaluate(node.child, bindings))
    if isinstance(node, Binary):
        left = _evaluate(node.left, bindings)
        right = _evaluate(node.right, bindings)
        return _BINARY_UFUNCS[node.op](left, right)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate ``e`` in IEEE double precision; inf and nan are returned, not raised."""
    scalars = {name: np.float64(value) for name, value in bindings.items()}
    with np.errstate(all="ignore"):
        return float(_evaluate(e, scalars))


def evaluate_columns(e: Expr, columns: Mapping[str, np.ndarray], n_rows: int) -> np.ndarray:
    """Evaluate ``e`` row-wise over aligned columns, returning a fresh float64 vector."""
    with np.errstate(all="ignore"):
        result = _evaluate(e, columns)
    return np.array(np.broadcast_to(result, (n_rows,)), dtype=np.float64)


def variables(e: Expr) -> List[str]:
    """Distinct variable names in first-appearance order."""
    seen: Dict[str, None] = {}
    stack: List[Expr] = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Variable):
            seen.setdefault(node.name, None)
        elif isinstance(node, Unary):
            stack.append(node.child)
        elif isinstance(node, Binary):
            stack.append(node.right)
            stack.append(node.left)
    return list(seen)


# ---------------------------------------------------------------------------
# Printing

_SYMBOLS = {
    BinaryOp.ADD: "+",
    BinaryOp.SUB: "-",
    BinaryOp.MUL: "*",
    BinaryOp.DIV: "/",
    BinaryOp.POW: "^",
}
_PRECEDENCE = {
    BinaryOp.ADD: 1,
    BinaryOp.SUB: 1,
    BinaryOp.MUL: 2,
    BinaryOp.DIV: 2,
    BinaryOp.POW: 4,
}
_NEG_PRECEDENCE = 3
_ATOM_PRECEDENCE = 5


def _precedence(node: Expr) -> int:
    if isinstance(node, Binary):
        return _PRECEDENCE[node.op]
    if isinstance(node, Unary) and node.op is UnaryOp.NEG:
        return _NEG_PRECEDENCE
    return _ATOM_PRECEDENCE


def _format_number(value: float) -> str:
    if math.isinf(value):
        # overflows back to inf when re-parsed
        return "1e999"
    if value.is_integer() and value < 1e16:
        return str(int(value))
    return repr(value)


def _wrap(node: Expr, parenthesize: bool) -> str:
    text = pretty_print(node)
    return f"({text})" if parenthesize else text


def pretty_print(e: Expr) -> str:
    """Render ``e`` with the fewest parentheses that still re-parse to the same tree."""
    if isinstance(e, Constant):
        return _format_number(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        if e.op is UnaryOp.NEG:
            return "-" + _wrap(e.child, _precedence(e.child) < _NEG_PRECEDENCE)
        return f"{e.op.value}({pretty_print(e.child)})"
    if isinstance(e, Binary):
        own = _PRECEDENCE[e.op]
        left_prec = _precedence(e.left)
        right_prec = _precedence(e.right)
        if e.op is BinaryOp.POW:
            left = _wrap(e.left, left_prec <= own)
            right = _wrap(e.right, right_prec < _NEG_PRECEDENCE)
            return f"{left}^{right}"
        left = _wrap(e.left, left_prec < own)
        right = _wrap(e.right, right_prec <= own)
        return f"{left} {_SYMBOLS[e.op]} {right}"
    raise TypeError(f"not an expression node: {e!r}")


def dump(e: Expr) -> Dict[str, Any]:
    """Nested-dict form of the tree, used for JSON output."""
    if isinstance(e, Constant):
        # JSON has no infinity; keep the literal that re-parses to it
        return {"node": "constant", "value": e.value if math.isfinite(e.value) else _format_number(e.value)}
    if isinstance(e, Variable):
        return {"node": "variable", "name": e.name}
    if isinstance(e, Unary):
        return {"node": "unary", "op": e.op.value, "child": dump(e.child)}
    return {"node": "binary", "op": e.op.value, "left": dump(e.left), "right": dump(e.right)}


def is_variable_product(e: Expr) -> bool:
    """True for the exact shape ``a * b`` with two distinct variables."""
    return (
        isinstance(e, Binary)
        and e.op is BinaryOp.MUL
        and isinstance(e.left, Variable)
        and isinstance(e.right, Variable)
        and e.left.name != e.right.name
    )
