from fractions import Fraction
from math import factorial

import pytest

from hyperseq.errors import LoweringError, ParseError
from hyperseq.exactarith import ONE, X, UniPoly
from hyperseq.hyperterm import ONE_CLASS, IndicatorClass, hts_eval, rising_factorial
from hyperseq.parser import (
    BinOp,
    Call,
    FactorialOp,
    Neg,
    Num,
    Pow,
    Var,
    lower_expr,
    parse_expr,
    parse_hts,
    parse_recurrence,
)
from hyperseq.recurrence import RecOperator

CORPUS = [
    "n!*mfoldInd(n,4,2)+2^n*mfoldInd(n,2,1)",
    "n! - (n-7)*mfoldInd(n,5,1)",
    "1/2 + (-1)^(n/2)*mfoldInd(n,2,0)/2",
    "4/9+31/12*n-3*n^2+67/36*n^3-1/4*n*mfoldInd(n,2,0)-4/9*mfoldInd(n,3,0)-8/9*mfoldInd(n,3,1)",
    "3^n*mfoldInd(n,3,1)+(2^n+n)*mfoldInd(n,2,0)",
    "n!*mfoldInd(n, 4, 3) + pochhammer(2, n)",
    "(n!)^2*mfoldInd(n, 3, 1) + n^3*mfoldInd(n, 2, 1)",
    "(n + 1)*mfoldInd(n, 4, 3)/n! + (n + 2)*mfoldInd(n, 2, 0)",
    "binomial(2*n,n)",
    "binomial(n+3,3)",
    "factorial(n/2)*mfoldInd(n,2,0)",
    "factorial((n-1)/2)*mfoldInd(n,2,1)",
    "pochhammer(1/2,n)/n!",
    "(1/2)^n*(n^2+1)",
    "2^(-n)*(2*n+1)!",
    "(n+1)!/(n+2)",
    "(n-3)^2*mfoldInd(n,3,0)",
    "mfoldInd(n,2,0)*mfoldInd(n,3,1)",
    "(mfoldInd(n,2,0)+n)*(mfoldInd(n,3,2)-1)",
    "(-1)^n*n!",
    "3*(2*n)!/(n!)^2",
    "n^5 - 3*n^2 + 7/3",
    "(2/3)^(2*n+1)",
    "-2^n + 3",
    "pochhammer(-1/2,n)*pochhammer(3,2*n)",
    "1/pochhammer(3,n)",
    "n/(n+1)*mfoldInd(n,3,0)",
    "binomial(n, n/2)*mfoldInd(n,2,0)",
    "2^(n/3)*mfoldInd(n,3,0)",
    "(n+1)*(n+2)/((n+1)*(n+2))",
]


def interpret(node, n):
    """Direct exact evaluation of a syntax tree; None where undefined."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return Fraction(n)
    if isinstance(node, Neg):
        value = interpret(node.operand, n)
        return None if value is None else -value
    if isinstance(node, BinOp):
        a, b = interpret(node.left, n), interpret(node.right, n)
        if node.op == "*":
            if a == 0 or b == 0:
                return Fraction(0)
            return None if a is None or b is None else a * b
        if node.op == "/":
            if a == 0 and b not in (None, 0):
                return Fraction(0)
            return None if a is None or not b else a / b
        if a is None or b is None:
            return None
        return a + b if node.op == "+" else a - b
    if isinstance(node, Pow):
        base, e = interpret(node.base, n), interpret(node.exponent, n)
        if base is None or e is None or e.denominator != 1 or (base == 0 and e < 0):
            return None
        return base ** int(e)
    if isinstance(node, FactorialOp):
        return _fact(interpret(node.operand, n))
    if isinstance(node, Call):
        args = [interpret(a, n) for a in node.args]
        if node.name == "factorial":
            return _fact(args[0])
        if node.name == "pochhammer":
            x, k = args
            if k is None or k.denominator != 1 or k < 0:
                return None
            return rising_factorial(x, int(k))
        if node.name == "binomial":
            a, b = args
            top, low, rest = _fact(a), _fact(b), _fact(a - b)
            if None in (top, low, rest):
                return None
            return top / (low * rest)
        if node.name == "mfoldInd":
            _, m, j = args
            return Fraction(1 if n % int(m) == int(j) else 0)
    raise AssertionError(f"unexpected node {node!r}")


def _fact(x):
    if x is None or x.denominator != 1 or x < 0:
        return None
    return Fraction(factorial(int(x)))


class TestParseExpr:
    def test_example_input_shape(self):
        tree = parse_expr("n!*mfoldInd(n,4,2)+2^n*mfoldInd(n,2,1)")
        assert isinstance(tree, BinOp) and tree.op == "+"
        assert tree.left == BinOp("*", FactorialOp(Var("n")), Call("mfoldInd", (Var("n"), Num(4), Num(2))))

    def test_call_node(self):
        assert parse_expr("pochhammer(2,n)") == Call("pochhammer", (Num(2), Var("n")))

    def test_power_is_right_associative(self):
        assert parse_expr("2^n^2") == Pow(Num(2), Pow(Var("n"), Num(2)))
        assert parse_expr("2**n") == Pow(Num(2), Var("n"))

    def test_factorial_binds_tighter_than_power(self):
        assert parse_expr("n!^2") == Pow(FactorialOp(Var("n")), Num(2))

    def test_unary_minus_binds_to_an_atom(self):
        assert parse_expr("-2^n") == Pow(Neg(Num(2)), Var("n"))
        assert parse_expr("-n!") == Neg(FactorialOp(Var("n")))
        assert parse_expr("-(2^n)") == Neg(Pow(Num(2), Var("n")))
        assert hts_eval(parse_hts("-2^n"), 2) == 4
        assert hts_eval(parse_hts("-(2^n)"), 2) == -4

    def test_rational_literal(self):
        assert parse_expr("3/4") == Num(Fraction(3, 4))

    def test_custom_variable(self):
        assert parse_expr("k!", var="k") == FactorialOp(Var("k"))
        with pytest.raises(ParseError):
            parse_expr("n!", var="k")

    @pytest.mark.parametrize(
        "text",
        ["n^", "", "n +", "(n", "n)", "foo(n)", "factorial(n, 2)", "mfoldInd(n, 2)", "m + 1", "n = 1", "1.5"],
    )
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse_expr(text)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_expr("n + $")
        assert (info.value.line, info.value.column) == (1, 5)
        with pytest.raises(ParseError) as info:
            parse_expr("n +\n  (n")
        assert info.value.line == 2


class TestLowering:
    def test_cos_squared_form(self):
        S = parse_hts("1/2 + (-1)^(n/2)*mfoldInd(n,2,0)/2")
        assert [c.cls for c in S.components] == [ONE_CLASS, IndicatorClass(0, 2)]
        assert S.components[0].coefficient.monomials[0].constant == Fraction(1, 2)

    def test_closed_form_has_four_components(self):
        S = parse_hts(CORPUS[3])
        assert len(S.components) == 4

    @pytest.mark.parametrize(
        "text,kind",
        [
            ("factorial(n/2)", "support"),
            ("(n/2)!*mfoldInd(n,2,1)", "support"),
            ("1/(n-3)", "support"),
            ("factorial(n^2)", "non-affine"),
            ("2^(n^2)", "non-affine"),
            ("n^n", "non-affine"),
            ("pochhammer(n,n)", "non-affine"),
            ("1/(n!+1)", "divisor"),
            ("1/mfoldInd(n,2,0)", "divisor"),
            ("1/(n-n)", "divisor"),
            ("mfoldInd(n,k,0)", None),
            ("mfoldInd(n,2,5)", "unsupported"),
            ("n^(1/2)", "unsupported"),
        ],
    )
    def test_lowering_errors(self, text, kind):
        if kind is None:
            with pytest.raises(ParseError):
                parse_hts(text)
            return
        with pytest.raises(LoweringError) as info:
            parse_hts(text)
        assert info.value.kind == kind

    def test_large_constant_exponents(self):
        (comp,) = parse_hts("2^1000").components
        (mono,) = comp.coefficient.monomials
        assert mono.constant == 2**1000 and not mono.has_atoms
        assert parse_hts("1^1000000000") == parse_hts("1")
        assert parse_hts("(-1)^1000000001") == parse_hts("-1")
        (mono,) = parse_hts("(n!)^1000000").components[0].coefficient.monomials
        assert mono.factorials[0].exponent == 1000000
        assert parse_hts("(2^n)^1000000000") == parse_hts("2^(1000000000*n)")

    @pytest.mark.parametrize("text", ["(n+1)^5", "(n!+1)^3", "(2^n - n)^4/(n+1)^2", "(n!*mfoldInd(n,2,0) + 1)^3"])
    def test_integer_powers_of_sums(self, text):
        tree = parse_expr(text)
        S = lower_expr(tree)
        for n in range(21):
            assert hts_eval(S, n) == interpret(tree, n)

    def test_zero_indicator_class(self):
        assert parse_hts("n!*mfoldInd(n,0,0)").is_empty

    @pytest.mark.parametrize("text", CORPUS)
    def test_lowering_matches_direct_interpretation(self, text):
        tree = parse_expr(text)
        S = lower_expr(tree)
        for n in range(41):
            expected = interpret(tree, n)
            assert expected is not None, (text, n)
            assert hts_eval(S, n) == expected, (text, n)


class TestParseRecurrence:
    def test_simple(self):
        L = parse_recurrence("a(n+1) = (n+1)*a(n)")
        assert L == RecOperator((-(X + 1), ONE))

    def test_coefficients_kept_as_written(self):
        L = parse_recurrence("(n-6)*a(n+6) - 2*a(n) = 0")
        assert L.order == 6
        assert L.coeffs[6] == X - 6
        assert L.coeffs[0] == UniPoly.constant(-2)
        assert all(L.coeffs[t].is_zero for t in range(1, 6))

    def test_assignment_prefix_and_terminator(self):
        assert parse_recurrence("RE:= a(n+1) - 2*a(n) = 0:") == parse_recurrence("a(n+1) - 2*a(n)")

    def test_other_sequence_name(self):
        assert parse_recurrence("b(n+1) - b(n);") == RecOperator((-ONE, ONE))

    @pytest.mark.parametrize(
        "text",
        [
            "a(n) + b(n+1) = 0",
            "a(n+1) - a(n) + 1 = 0",
            "a(n-1) - a(n) = 0",
            "a(2*n) - a(n) = 0",
            "a(n)*a(n+1) = 0",
            "n! * a(n) = 0",
            "0 = 0",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(LoweringError):
            parse_recurrence(text)

    def test_syntax_error(self):
        with pytest.raises(ParseError):
            parse_recurrence("a(n+1) = = a(n)")
