import random
from fractions import Fraction

import pytest

from expanderlab.errors import NegativeExponent, PolySyntaxError, UnknownVariable
from expanderlab.parser import BinOp, Neg, Num, Pow, Var, parse_expr, parse_poly, tokenize
from expanderlab.poly import RatPoly

x = RatPoly.var(0, 2)
y = RatPoly.var(1, 2)


def test_examples():
    assert parse_poly("x^2 + x*y") == x ** 2 + x * y
    assert parse_poly("(x+y)^0") == RatPoly.const(1, 2)
    with pytest.raises(NegativeExponent) as ei:
        parse_poly("x^-1")
    assert ei.value.span == (2, 4)


def test_precedence():
    assert parse_poly("2*x^2") == 2 * x ** 2
    assert parse_poly("-x^2") == -(x ** 2)
    assert parse_poly("x - y - 1") == x - y - 1
    assert parse_poly("x*y + 1*x") == x * y + x
    assert parse_poly("1/2*x") == x.scale(Fraction(1, 2))
    assert parse_poly("x/3/2") == x.scale(Fraction(1, 6))
    assert parse_poly("x**3") == x ** 3
    assert parse_poly("x^(2)") == x ** 2
    assert parse_poly("--x") == x and parse_poly("+x") == x


def test_ast_spans():
    src = "3*(x + y)^2"
    node = parse_expr(src)
    assert isinstance(node, BinOp) and node.op == "*" and node.span == (0, 11)
    assert isinstance(node.left, Num) and node.left.span == (0, 1)
    pw = node.right
    assert isinstance(pw, Pow) and pw.exponent == 2 and pw.span == (2, 11)
    assert src[slice(*pw.base.span)] == "(x + y)"
    n = parse_expr("-y")
    assert isinstance(n, Neg) and isinstance(n.operand, Var) and n.operand.index == 1


def test_custom_variables():
    P = parse_poly("a*b^2 - c", ("a", "b", "c"))
    assert P.arity == 3 and P.terms == {(1, 2, 0): 1, (0, 0, 1): -1}
    with pytest.raises(UnknownVariable) as ei:
        parse_poly("x + z")
    assert ei.value.name == "z" and ei.value.span == (4, 5)


@pytest.mark.parametrize("src,span", [
    ("", (0, 0)),
    ("x +", (3, 4)),
    ("x $ y", (2, 3)),
    ("(x + y", (6, 7)),
    ("x^y", (2, 3)),
    ("x y", (2, 3)),
    ("x / y", (4, 5)),
    ("x / (y - y)", (4, 11)),
    ("x^10001", (2, 7)),
])
def test_errors_carry_spans(src, span):
    with pytest.raises(PolySyntaxError) as ei:
        parse_poly(src)
    assert ei.value.span == span
    assert "at %d:%d" % span in str(ei.value)


def test_error_message_caret():
    with pytest.raises(PolySyntaxError) as ei:
        parse_poly("x + q")
    lines = str(ei.value).splitlines()
    assert lines[1].strip() == "x + q" and lines[2].index("^") == lines[1].index("q")


def test_tokenize():
    kinds = [(t.kind, t.text) for t in tokenize("12*x**2")]
    assert kinds == [("int", "12"), ("op", "*"), ("name", "x"), ("op", "^"), ("int", "2"), ("end", "")]


def test_round_trip_500():
    rng = random.Random(0)
    for _ in range(500):
        arity = rng.choice([1, 2, 3])
        terms = {}
        for _ in range(rng.randint(0, 6)):
            e = tuple(rng.randint(0, 5) for _ in range(arity))
            terms[e] = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        P = RatPoly(arity, terms)
        names = {1: ("t",), 2: ("x", "y"), 3: ("x", "y", "z")}[arity]
        assert parse_poly(P.to_str(names), names) == P


def test_non_string_rejected():
    with pytest.raises(TypeError):
        parse_poly(3)
