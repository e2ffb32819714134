from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given

from hyperseq.errors import ArithmeticDomainError, OrderBoundError, PoleError
from hyperseq.exactarith import ONE, X, UniPoly, poly_content_gcd, strip_natural_root_factors
from hyperseq.hyperterm import IndicatorClass, hts_eval, hts_sub
from hyperseq.parser import parse_hts, parse_recurrence
from hyperseq.recurrence import (
    RecOperator,
    component_to_recurrence,
    first_order_from_ratio,
    hts_equal,
    hts_is_zero,
    hts_to_recurrence,
    leading_zero_bound,
    make_primitive,
    polynomial_kernel_vector,
    rec_add_closure,
    rec_dilate,
    rec_verify,
)
from tests.strategies import expressions

ORDER_7_INPUT = "3^n*mfoldInd(n,3,1)+(2^n+n)*mfoldInd(n,2,0)"
ORDER_7_REC = (
    "(-353808*n^2-586764*n-150444)*a(n) - 78732*a(n+1)"
    " + (442260*n^2+25839*n-44901)*a(n+2) + (13104*n^2+21732*n+25255)*a(n+3)"
    " + (-88452*n^2+30213*n+23544)*a(n+4) + (-16380*n^2-957*n+1663)*a(n+5)"
    " - 729*a(n+6) + (3276*n^2-1119*n-764)*a(n+7) = 0"
)

ORDER_5_INPUT = "n!*mfoldInd(n, 4, 3) + pochhammer(2, n)"
ORDER_5_REC = (
    "(n+4)*(n+3)*(n+2)*(n+1)*(n+5)*a(n) - (n+5)*(n+4)*(n+3)*(n+2)*a(n+1)"
    " + (-n-5)*a(n+4) + a(n+5) = 0"
)

ORDER_6_INPUT = "n! - (n-7)*mfoldInd(n,5,1)"
ORDER_6_REC = (
    "RE:= (n + 1)*(n^6 + 14*n^5 + 35*n^4 - 350*n^3 - 2436*n^2 - 5545*n - 4319)*(n - 2)*a(n)"
    " - (n - 1)*(n^6 + 8*n^5 - 20*n^4 - 370*n^3 - 1301*n^2 - 1799*n - 838)*a(n + 1)"
    " - (n + 1)*(n - 7)*(n^6 + 14*n^5 + 35*n^4 - 350*n^3 - 2436*n^2 - 5545*n - 4319)*a(n + 5)"
    " + (n^6 + 8*n^5 - 20*n^4 - 370*n^3 - 1301*n^2 - 1799*n - 838)*(n - 6)*a(n + 6) = 0:"
)


def poly(*coeffs) -> UniPoly:
    return UniPoly(coeffs)


def op(*coeffs) -> RecOperator:
    return RecOperator(tuple(c if isinstance(c, UniPoly) else UniPoly.constant(c) for c in coeffs))


class TestRecOperator:
    def test_zero_leading_coefficient_rejected(self):
        with pytest.raises(ArithmeticDomainError):
            RecOperator((ONE, UniPoly()))

    def test_apply(self):
        L = op(-2, 1)
        assert L.apply(lambda n: Fraction(2) ** n, 5) == 0
        assert L.apply(lambda n: Fraction(3) ** n, 0) == 1

    def test_shifted(self):
        L = RecOperator((-X, ONE))
        assert L.shifted(2) == [UniPoly(), UniPoly(), -(X + 2), ONE]

    def test_make_primitive_divides_root_free_content(self):
        assert make_primitive([2 * X + 2, 4 * X + 4]) == [ONE, UniPoly.constant(2)]

    def test_make_primitive_keeps_factors_vanishing_on_n(self):
        assert make_primitive([X, 2 * X]) == [X, 2 * X]
        assert make_primitive([Fraction(-1, 2) * X, Fraction(-1, 4) * X]) == [2 * X, X]

    def test_first_order_from_ratio(self):
        assert first_order_from_ratio(X + 1, ONE) == RecOperator((-(X + 1), ONE))
        with pytest.raises(ArithmeticDomainError):
            first_order_from_ratio(ONE, UniPoly())


class TestClosure:
    def test_kernel_vector(self):
        matrix = [[ONE, X], [X, X * X]]
        x = polynomial_kernel_vector(matrix, 2)
        assert x is not None
        for row in matrix:
            assert sum((a * b for a, b in zip(row, x)), UniPoly()).is_zero
        assert polynomial_kernel_vector([[ONE, UniPoly()], [UniPoly(), ONE]], 2) is None

    def test_kernel_vector_clears_denominators(self):
        matrix = [[X + Fraction(1, 2), Fraction(1, 3) * X * X, ONE], [2 * X, X + 1, X - 5]]
        x = polynomial_kernel_vector(matrix, 3)
        assert x is not None and any(not p.is_zero for p in x)
        assert all(c.denominator == 1 for p in x for c in p.coeffs)
        for row in matrix:
            assert sum((a * b for a, b in zip(row, x)), UniPoly()).is_zero

    def test_kernel_vector_of_wide_matrix(self):
        matrix = [[ONE, X, X * X, X**3]]
        x = polynomial_kernel_vector(matrix, 4)
        assert sum((a * b for a, b in zip(matrix[0], x)), UniPoly()).is_zero

    def test_constants_and_powers(self):
        assert rec_add_closure(op(-1, 1), op(-2, 1)) == op(2, -3, 1)

    def test_identical_operators(self):
        L = op(-2, 1)
        assert rec_add_closure(L, op(-4, 2)) == L

    def test_order_bound_and_annihilation(self):
        a, b = parse_hts("n!"), parse_hts("2^n*mfoldInd(n,3,2)")
        L = rec_add_closure(hts_to_recurrence(a), hts_to_recurrence(b))
        assert L.order <= 1 + 3
        assert rec_verify(L, a + b, 60)

    @pytest.mark.parametrize(
        "text",
        [
            "(2^n+n)*mfoldInd(n,4,1) + (3^n+n!)*mfoldInd(n,3,2)",
            "(2^n+n!)*mfoldInd(n,5,2) + (n+1)*3^n*mfoldInd(n,2,1) + pochhammer(1/2,n)",
            "(1/(n+1) - 5/2*binomial(2*n,n))*mfoldInd(n,5,4) + (n^2+(-1)^n)*mfoldInd(n,4,0)",
        ],
    )
    def test_wide_interlaced_sums(self, text):
        S = parse_hts(text)
        L = hts_to_recurrence(S)
        assert L.order <= sum(c.cls.m * len(c.coefficient.monomials) for c in S.components)
        assert rec_verify(L, S, 200)


class TestDilate:
    def test_constant_coefficients(self):
        assert rec_dilate(op(-2, 1), IndicatorClass(1, 3)) == op(-2, 0, 0, 1)

    def test_factorial_section(self):
        S = parse_hts("n!*mfoldInd(n,4,2)")
        L = hts_to_recurrence(S)
        assert L.order == 4
        assert all(L.coeffs[t].is_zero for t in (1, 2, 3))
        assert rec_verify(L, S, 80)

    def test_zero_class(self):
        with pytest.raises(ArithmeticDomainError):
            rec_dilate(op(-1, 1), IndicatorClass(0, 0))


class TestHtsToRecurrence:
    def test_factorial(self):
        assert hts_to_recurrence(parse_hts("n!")) == RecOperator((poly(-1, -1), ONE))

    def test_empty_expression(self):
        assert hts_to_recurrence(parse_hts("0")) == op(-1, 1)

    def test_order_seven_example(self):
        S = parse_hts(ORDER_7_INPUT)
        L = hts_to_recurrence(S)
        assert L.order <= 7
        assert rec_verify(L, S, 200)

    def test_order_five_example(self):
        S = parse_hts(ORDER_5_INPUT)
        L = hts_to_recurrence(S)
        assert L.order <= 5
        assert rec_verify(L, S, 200)

    def test_interlaced_example(self):
        S = parse_hts(ORDER_6_INPUT)
        L = hts_to_recurrence(S)
        assert L.order <= 6
        assert rec_verify(L, S, 150)

    @given(expressions())
    def test_annihilates_random_expressions(self, text):
        S = parse_hts(text)
        L = hts_to_recurrence(S)
        bound = sum(c.cls.m * len(c.coefficient.monomials) for c in S.components)
        assert L.order <= max(bound, 1)
        assert rec_verify(L, S, 200)

    def test_order_bound(self):
        S = parse_hts(ORDER_5_INPUT)
        assert hts_to_recurrence(S, max_order=5) == hts_to_recurrence(S)
        with pytest.raises(OrderBoundError) as info:
            hts_to_recurrence(S, max_order=4)
        assert info.value.bound == 4 and info.value.order > 4

    def test_order_bound_stops_at_a_component(self):
        with pytest.raises(OrderBoundError) as info:
            hts_to_recurrence(parse_hts("2^n*mfoldInd(n,3,1) + n!"), max_order=2)
        assert (info.value.order, info.value.bound) == (3, 2)

    def test_pole_at_section_start(self):
        S = parse_hts("1/pochhammer(0,n)*mfoldInd(n,2,1)")
        with pytest.raises(PoleError):
            hts_eval(S, 1)
        L = hts_to_recurrence(S)
        assert L.order == 2
        assert L.coeffs[1].is_zero

    @given(expressions())
    def test_derivation_is_deterministic(self, text):
        assert hts_to_recurrence(parse_hts(text)) == hts_to_recurrence(parse_hts(text))

    @given(expressions())
    def test_result_is_primitive(self, text):
        L = hts_to_recurrence(parse_hts(text))
        values = [c for p in L.coeffs for c in p.coeffs]
        assert all(c.denominator == 1 for c in values)
        assert gcd(*(int(c) for c in values)) == 1
        assert L.leading.leading > 0
        assert strip_natural_root_factors(poly_content_gcd(L.coeffs)).degree == 0


class TestPrintedRecurrences:
    @pytest.mark.parametrize(
        "rec,expr",
        [(ORDER_7_REC, ORDER_7_INPUT), (ORDER_5_REC, ORDER_5_INPUT), (ORDER_6_REC, ORDER_6_INPUT)],
    )
    def test_printed_operator_annihilates(self, rec, expr):
        assert rec_verify(parse_recurrence(rec), parse_hts(expr), 100)

    def test_verify_detects_failure(self):
        S = parse_hts("n!")
        assert not rec_verify(op(-1, 1), S, 10)
        assert rec_verify(op(-1, 1), S, 0, n_min=0)
        assert rec_verify(op(-1, 1), S, 5, n_min=6)


IDENTITIES = [
    ("mfoldInd(n,1,0)", "mfoldInd(n,2,0)+mfoldInd(n,2,1)"),
    ("binomial(n+2,2)", "(n+2)*(n+1)/2"),
    ("(n+1)!", "(n+1)*n!"),
    ("pochhammer(1,n)", "n!"),
    ("2^(n+1)", "2*2^n"),
    ("4^n", "2^(2*n)"),
    ("(-1)^n", "mfoldInd(n,2,0) - mfoldInd(n,2,1)"),
    ("mfoldInd(n,2,0)*mfoldInd(n,3,0)", "mfoldInd(n,6,0)"),
    ("(-1)^(n/2)*mfoldInd(n,2,0)", "mfoldInd(n,4,0) - mfoldInd(n,4,2)"),
    ("factorial(n/2)*mfoldInd(n,2,0)", "pochhammer(1,n/2)*mfoldInd(n,2,0)"),
    ("(n+1)!/(n+1)", "n!"),
    ("binomial(2*n,n)", "(2*n)!/(n!)^2"),
    ("pochhammer(2,n)", "(n+1)!"),
    ("(n+1)*mfoldInd(n,3,1)", "n*mfoldInd(n,3,1) + mfoldInd(n,3,1)"),
    ("1/2 + (-1)^(n/2)*mfoldInd(n,2,0)/2", "mfoldInd(n,4,0) + 1/2*mfoldInd(n,2,1)"),
    ("n!*mfoldInd(n,4,2)", "n*(n-1)!*mfoldInd(n,4,2)"),
    ("3^n*mfoldInd(n,2,0)", "9^(n/2)*mfoldInd(n,2,0)"),
    ("2^n*mfoldInd(n,3,2)", "4*8^((n-2)/3)*mfoldInd(n,3,2)"),
    ("(n^2-1)/(n+1)", "n-1"),
    ("n!*(n+1) - (n+1)!", "0"),
]

NON_IDENTITIES = [
    ("n!", "n^2"),
    ("2^n", "3^n"),
    ("mfoldInd(n,2,0)", "mfoldInd(n,2,1)"),
    ("n!*mfoldInd(n,5,1)", "n!*mfoldInd(n,5,2)"),
    ("(n-3)*mfoldInd(n,4,3)", "0"),
    ("n*(n-1)*(n-2)*(n-3)*(n-4)", "0"),
    ("n! - (n-7)*mfoldInd(n,5,1)", "n!"),
    ("(n-10)*(n-20)", "0"),
    ("pochhammer(-3,n)", "0"),
    ("(-1)^n", "1"),
    ("binomial(2*n,n)", "4^n"),
    ("n!*mfoldInd(n,3,0)", "n!*mfoldInd(n,6,0)"),
    ("1/(n+1)", "1/(n+2)"),
    ("(n+1)!", "n!"),
    ("2^n*mfoldInd(n,2,0)", "4^(n/2)*mfoldInd(n,4,0)"),
    ("mfoldInd(n,7,6)", "0"),
    ("n^3", "n^2"),
    ("(1/2)^n", "2^n"),
    ("pochhammer(1/2,n)", "pochhammer(3/2,n)"),
    ("3^(n+1)*mfoldInd(n,2,1)", "3*3^n"),
]


class TestZeroTest:
    def test_leading_zero_bound(self):
        assert leading_zero_bound(RecOperator((ONE, X - 6))) == 6
        assert leading_zero_bound(op(-1, 1)) == -1

    @pytest.mark.parametrize("left,right", IDENTITIES)
    def test_planted_identities(self, left, right):
        assert hts_equal(parse_hts(left), parse_hts(right))

    @pytest.mark.parametrize("left,right", NON_IDENTITIES)
    def test_planted_non_identities(self, left, right):
        assert not hts_equal(parse_hts(left), parse_hts(right))

    @pytest.mark.parametrize("left,right", IDENTITIES + NON_IDENTITIES)
    def test_verdict_agrees_with_values(self, left, right):
        a, b = parse_hts(left), parse_hts(right)
        pointwise = all(hts_eval(a, n) == hts_eval(b, n) for n in range(101))
        assert hts_equal(a, b) == pointwise

    @given(expressions())
    def test_random_expressions(self, text):
        S = parse_hts(text)
        assert hts_is_zero(hts_sub(S, S))
        assert hts_is_zero(S) == all(hts_eval(S, n) == 0 for n in range(101))

    def test_zero_with_late_nonzero_value(self):
        S = parse_hts("n*(n-1)*(n-2)*(n-3)*(n-4)*(n-5)*(n-6)*(n-7)*(n-8)")
        assert all(hts_eval(S, n) == 0 for n in range(9))
        assert not hts_is_zero(S)


def test_component_to_recurrence():
    (C,) = parse_hts("(n+1)*2^n*mfoldInd(n,3,1)").components
    L = component_to_recurrence(C)
    assert L.order == 3
    assert rec_verify(L, parse_hts("(n+1)*2^n*mfoldInd(n,3,1)"), 60)
