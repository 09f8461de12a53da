"""Tiny expression language for inline curve definitions.

Three comma-separated components over one variable t, built from
+ - * / ^, sin, cos, sqrt, numeric literals and pi.  Expressions are
parsed into a small AST that supports symbolic differentiation, so inline
curves get analytic derivatives up to order 3.  The unicode operators
that appear in printed sources (×, ÷, −) are accepted as synonyms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import Curve3
from .errors import ExpressionError

__all__ = ["parse_curve_expression", "parse_component"]

_FUNCTIONS = ("sin", "cos", "sqrt")
_CONSTANTS = {"pi": math.pi}
_SYNONYMS = {"×": "*", "÷": "/", "−": "-", "·": "*"}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Node:
    def eval(self, t: float) -> float:
        raise NotImplementedError

    def diff(self) -> "Node":
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Node):
    value: float

    def eval(self, t):
        return self.value

    def diff(self):
        return Num(0.0)


@dataclass(frozen=True)
class Var(Node):
    def eval(self, t):
        return t

    def diff(self):
        return Num(1.0)


def _num(node: Node) -> float | None:
    return node.value if isinstance(node, Num) else None


def _add(a: Node, b: Node) -> Node:
    if _num(a) == 0.0:
        return b
    if _num(b) == 0.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Add(a, b)


def _sub(a: Node, b: Node) -> Node:
    if _num(b) == 0.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return Sub(a, b)


def _mul(a: Node, b: Node) -> Node:
    if _num(a) == 0.0 or _num(b) == 0.0:
        return Num(0.0)
    if _num(a) == 1.0:
        return b
    if _num(b) == 1.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return Mul(a, b)


def _div(a: Node, b: Node) -> Node:
    if _num(a) == 0.0:
        return Num(0.0)
    if _num(b) == 1.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num) and b.value != 0.0:
        return Num(a.value / b.value)
    return Div(a, b)


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node

    def eval(self, t):
        return self.left.eval(t) + self.right.eval(t)

    def diff(self):
        return _add(self.left.diff(), self.right.diff())


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node

    def eval(self, t):
        return self.left.eval(t) - self.right.eval(t)

    def diff(self):
        return _sub(self.left.diff(), self.right.diff())


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node

    def eval(self, t):
        return self.left.eval(t) * self.right.eval(t)

    def diff(self):
        return _add(_mul(self.left.diff(), self.right), _mul(self.left, self.right.diff()))


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node

    def eval(self, t):
        return self.left.eval(t) / self.right.eval(t)

    def diff(self):
        num = _sub(_mul(self.left.diff(), self.right), _mul(self.left, self.right.diff()))
        return _div(num, _mul(self.right, self.right))


@dataclass(frozen=True)
class Neg(Node):
    operand: Node

    def eval(self, t):
        return -self.operand.eval(t)

    def diff(self):
        return Neg(self.operand.diff())


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: float  # exponents must be constant so derivatives stay in-language
    position: int

    def eval(self, t):
        return self.base.eval(t) ** self.exponent

    def diff(self):
        e = self.exponent
        if e == 0.0:
            return Num(0.0)
        if e == 1.0:
            return self.base.diff()
        return _mul(_mul(Num(e), Pow(self.base, e - 1.0, self.position)), self.base.diff())


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node

    def eval(self, t):
        v = self.arg.eval(t)
        if self.func == "sin":
            return math.sin(v)
        if self.func == "cos":
            return math.cos(v)
        return math.sqrt(v)

    def diff(self):
        inner = self.arg.diff()
        if self.func == "sin":
            return _mul(Call("cos", self.arg), inner)
        if self.func == "cos":
            return Neg(_mul(Call("sin", self.arg), inner))
        return _div(inner, _mul(Num(2.0), Call("sqrt", self.arg)))


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | lparen | rparen | end
    text: str
    position: int
    value: float = 0.0


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = _SYNONYMS.get(text[i], text[i])
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_e = False
            while j < n:
                c = text[j]
                if c.isdigit() or c == ".":
                    j += 1
                elif c in "eE" and not seen_e and j + 1 < n and (text[j + 1].isdigit() or text[j + 1] in "+-"):
                    seen_e = True
                    j += 2 if text[j + 1] in "+-" else 1
                else:
                    break
            try:
                value = float(text[i:j])
            except ValueError:
                raise ExpressionError(f"malformed number {text[i:j]!r}", i) from None
            tokens.append(_Token("num", text[i:j], i, value))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
            continue
        raise ExpressionError(f"unexpected character {text[i]!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    """Recursive descent with standard precedence; ^ binds tightest and right."""

    def __init__(self, text: str, offset: int = 0):
        self.text = text
        self.offset = offset
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token):
        raise ExpressionError(message, self.offset + tok.position)

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.fail(f"unexpected {tok.text!r}", tok)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = _add(node, rhs) if op == "+" else _sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.unary()
            node = _mul(node, rhs) if op == "*" else _div(node, rhs)
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if tok.kind == "op" and tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            exp_tok = self.peek()
            exponent = self.unary()  # right associative, so 2^3^2 = 2^(3^2)
            value = _constant_value(exponent)
            if value is None:
                self.fail("exponent must be a constant expression", exp_tok)
            return Pow(base, value, self.offset + tok.position)
        return base

    def atom(self) -> Node:
        tok = self.advance()
        if tok.kind == "num":
            return Num(tok.value)
        if tok.kind == "lparen":
            node = self.expr()
            closing = self.advance()
            if closing.kind != "rparen":
                self.fail("expected ')'", closing)
            return node
        if tok.kind == "name":
            if tok.text == "t":
                return Var()
            if tok.text in _CONSTANTS:
                return Num(_CONSTANTS[tok.text])
            if tok.text in _FUNCTIONS:
                opening = self.advance()
                if opening.kind != "lparen":
                    self.fail(f"{tok.text} needs parenthesized argument", opening)
                arg = self.expr()
                closing = self.advance()
                if closing.kind != "rparen":
                    self.fail("expected ')'", closing)
                return Call(tok.text, arg)
            self.fail(f"unknown identifier {tok.text!r}", tok)
        self.fail("expected a value", tok)


def _constant_value(node: Node) -> float | None:
    """Value of a Var-free subtree, None if it references t."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, (Add, Sub, Mul, Div)):
        a = _constant_value(node.left)
        b = _constant_value(node.right)
        if a is None or b is None:
            return None
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        if isinstance(node, Mul):
            return a * b
        return a / b
    if isinstance(node, Neg):
        v = _constant_value(node.operand)
        return None if v is None else -v
    if isinstance(node, Pow):
        v = _constant_value(node.base)
        return None if v is None else v**node.exponent
    if isinstance(node, Call):
        v = _constant_value(node.arg)
        return None if v is None else Call(node.func, Num(v)).eval(0)
    return None


def parse_component(text: str, offset: int = 0) -> Node:
    """Parse one scalar component expression; offset shifts error positions."""
    return _Parser(text, offset).parse()


def _split_components(text: str) -> list[tuple[str, int]]:
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ExpressionError("unbalanced ')'", i)
        elif ch == "," and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return parts


def parse_curve_expression(text: str, domain=(0.0, 2.0 * math.pi), name: str | None = None) -> Curve3:
    """Build a curve from three comma-separated component expressions.

    Derivatives up to order 3 come from symbolic differentiation of the
    parsed trees.

    Raises
    ------
    ExpressionError
        On malformed input, with the source position of the problem.
    """
    parts = _split_components(text)
    if len(parts) != 3:
        raise ExpressionError(f"expected 3 comma-separated components, got {len(parts)}", 0)
    trees = [parse_component(part, offset) for part, offset in parts]
    derivs = [trees]
    for _ in range(3):
        derivs.append([node.diff() for node in derivs[-1]])

    def make_eval(nodes) -> Callable[[float], np.ndarray]:
        def fn(t: float) -> np.ndarray:
            return np.array([node.eval(float(t)) for node in nodes])

        return fn

    return Curve3(
        make_eval(derivs[0]),
        domain,
        d1=make_eval(derivs[1]),
        d2=make_eval(derivs[2]),
        d3=make_eval(derivs[3]),
        name=name or f"expr({text})",
    )
