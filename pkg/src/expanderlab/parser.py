"""Polynomial expression parser with source spans.

Grammar (``^`` binds tightest, then unary minus, then ``*`` and ``/``, then
``+`` and ``-``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" exponent)?
    atom   := INT | NAME | "(" expr ")"

Division is only allowed by a nonzero constant, which is how rational
literals such as ``1/2`` are written.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NegativeExponent, PolySyntaxError, UnknownVariable
from .poly import RatPoly

MAX_EXPONENT = 10_000

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    start: int
    end: int


def tokenize(src):
    out, pos = [], 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            j = pos
            while j < len(src) and src[j].isspace():
                j += 1
            raise PolySyntaxError(f"unexpected character {src[j]!r}", (j, j + 1), src)
        if m.group(1) is not None:
            out.append(Token("int", m.group(1), m.start(1), m.end(1)))
        elif m.group(2) is not None:
            out.append(Token("name", m.group(2), m.start(2), m.end(2)))
        else:
            text = "^" if m.group(3) == "**" else m.group(3)
            out.append(Token("op", text, m.start(3), m.end(3)))
        pos = m.end()
    out.append(Token("end", "", len(src), len(src)))
    return out


# -- AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyExpr:
    span: tuple


@dataclass(frozen=True)
class Num(PolyExpr):
    value: int


@dataclass(frozen=True)
class Var(PolyExpr):
    name: str
    index: int


@dataclass(frozen=True)
class Neg(PolyExpr):
    operand: PolyExpr


@dataclass(frozen=True)
class BinOp(PolyExpr):
    op: str
    left: PolyExpr
    right: PolyExpr


@dataclass(frozen=True)
class Pow(PolyExpr):
    base: PolyExpr
    exponent: int


class _Parser:
    def __init__(self, src, names):
        self.src = src
        self.names = list(names)
        self.toks = tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        span = (tok.start, max(tok.end, tok.start + 1))
        return PolySyntaxError(msg, span, self.src)

    def is_op(self, *ops):
        t = self.peek()
        return t.kind == "op" and t.text in ops

    def parse(self):
        if self.peek().kind == "end":
            raise PolySyntaxError("empty expression", (0, 0), self.src)
        node = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.is_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            node = BinOp((node.span[0], rhs.span[1]), op, node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.is_op("*", "/"):
            op = self.take().text
            rhs = self.unary()
            node = BinOp((node.span[0], rhs.span[1]), op, node, rhs)
        return node

    def unary(self):
        if self.is_op("-", "+"):
            t = self.take()
            inner = self.unary()
            if t.text == "+":
                return inner
            return Neg((t.start, inner.span[1]), inner)
        return self.power()

    def power(self):
        base = self.atom()
        if not self.is_op("^"):
            return base
        self.take()
        neg = None
        paren = self.is_op("(")
        if paren:
            self.take()
        if self.is_op("-"):
            neg = self.take()
        t = self.peek()
        if t.kind != "int":
            raise self.error("exponent must be a nonnegative integer literal")
        self.take()
        end = t.end
        if paren:
            if not self.is_op(")"):
                raise self.error("expected ')'")
            end = self.take().end
        if neg is not None:
            raise NegativeExponent((neg.start, t.end), self.src)
        k = int(t.text)
        if k > MAX_EXPONENT:
            raise PolySyntaxError(f"exponent {k} exceeds {MAX_EXPONENT}", (t.start, t.end), self.src)
        return Pow((base.span[0], end), base, k)

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            self.take()
            return Num((t.start, t.end), int(t.text))
        if t.kind == "name":
            self.take()
            if t.text not in self.names:
                raise UnknownVariable(t.text, (t.start, t.end), self.src)
            return Var((t.start, t.end), t.text, self.names.index(t.text))
        if self.is_op("("):
            open_ = self.take()
            node = self.expr()
            if not self.is_op(")"):
                raise self.error("expected ')'")
            close = self.take()
            return _respan(node, (open_.start, close.end))
        if t.kind == "end":
            raise self.error("unexpected end of expression")
        raise self.error(f"unexpected {t.text!r}")


def _respan(node, span):
    # Parenthesized nodes carry the span including the parentheses.
    return type(node)(span, *[getattr(node, f) for f in node.__dataclass_fields__ if f != "span"])


def parse_expr(src, vars=("x", "y")):
    """Parse ``src`` into a PolyExpr tree."""
    return _Parser(src, vars).parse()


def to_poly(node, arity, src=None):
    """Evaluate a PolyExpr to an exact RatPoly."""
    if isinstance(node, Num):
        return RatPoly.const(node.value, arity)
    if isinstance(node, Var):
        return RatPoly.var(node.index, arity)
    if isinstance(node, Neg):
        return -to_poly(node.operand, arity, src)
    if isinstance(node, Pow):
        return to_poly(node.base, arity, src) ** node.exponent
    left = to_poly(node.left, arity, src)
    right = to_poly(node.right, arity, src)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if not right.is_constant():
        raise PolySyntaxError("division is only allowed by a constant", node.right.span, src)
    c = right.constant_term()
    if c == 0:
        raise PolySyntaxError("division by zero", node.right.span, src)
    return left.scale(1 / Fraction(c))


def parse_poly(src, vars=("x", "y")):
    """Exact polynomial for ``src`` in the variables ``vars``."""
    if not isinstance(src, str):
        raise TypeError("src must be a string")
    return to_poly(parse_expr(src, vars), len(vars), src)
