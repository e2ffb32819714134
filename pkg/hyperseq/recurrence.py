"""
P-recursive annihilators for hypergeometric-type terms.

Every operator produced here is valid at every n >= 0, not only for generic
n: sections are annihilated by first-order operators built from exact shift
quotients, dilation only substitutes n -> (n - j)/m, and the addition closure
is a left common multiple computed with polynomial multipliers, so the result
is a polynomial combination of shifted copies of the inputs.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Callable, List, Optional, Sequence, Tuple

from sympy import QQ, Integer, Poly, Rational, Symbol, cancel, fraction
from sympy.polys.matrices import DomainMatrix

from hyperseq.errors import ArithmeticDomainError, OrderBoundError
from hyperseq.exactarith import (
    ONE,
    AffineMap,
    UniPoly,
    nonneg_integer_roots,
    poly_content_gcd,
    poly_subst_affine,
    strip_natural_root_factors,
)
from hyperseq.hyperterm import (
    Component,
    HTSExpr,
    IndicatorClass,
    hts_eval,
    hts_normalize,
    hts_sub,
    section_ratio,
)

logger = logging.getLogger(__name__)

ZERO = UniPoly()

_N = Symbol("n")
_FIELD = QQ.frac_field(_N)
# specialization point for the rank test in polynomial_kernel_vector
_SAMPLE_POINT = 1009


@dataclass(frozen=True)
class RecOperator:
    """sum_{t=0}^{D} coeffs[t](n) * s(n+t) = 0, required for all n >= 0."""

    coeffs: Tuple[UniPoly, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs or coeffs[-1].is_zero:
            raise ArithmeticDomainError("recurrence operator needs a nonzero leading coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> UniPoly:
        return self.coeffs[-1]

    def apply(self, seq: Callable[[int], Fraction], n: int) -> Fraction:
        """Value of the operator applied to seq at index n."""
        return sum((c(n) * seq(n + t) for t, c in enumerate(self.coeffs) if not c.is_zero), Fraction(0))

    def shifted(self, i: int) -> List[UniPoly]:
        """Coefficient list of S^i * L (shift operator applied on the left)."""
        return [ZERO] * i + [c.shift(i) for c in self.coeffs]

    def primitive(self) -> "RecOperator":
        return RecOperator(tuple(make_primitive(self.coeffs)))


def make_primitive(coeffs: Sequence[UniPoly]) -> List[UniPoly]:
    """
    Remove the content of a coefficient list.

    Common polynomial factors are divided out only where they have no root in
    N; integer content is removed and the last nonzero coefficient gets a
    positive leading coefficient.
    """
    coeffs = list(coeffs)
    common = strip_natural_root_factors(poly_content_gcd(coeffs))
    if common.degree > 0:
        coeffs = [c // common for c in coeffs]
    nonzero = [c for c in coeffs if not c.is_zero]
    if not nonzero:
        return coeffs
    den = lcm(*(a.denominator for c in nonzero for a in c.coeffs))
    num = gcd(*(int(a * den) for c in nonzero for a in c.coeffs))
    scale = Fraction(den, num)
    if nonzero[-1].leading < 0:
        scale = -scale
    return [c.scale(scale) for c in coeffs]


def first_order_from_ratio(p: UniPoly, q: UniPoly) -> RecOperator:
    """The operator q(k)*s(k+1) - p(k)*s(k), content removed."""
    if q.is_zero:
        raise ArithmeticDomainError("shift quotient with zero denominator")
    return RecOperator((-p, q)).primitive()


def _primitive_row(row: List[UniPoly]) -> List[UniPoly]:
    g = poly_content_gcd(row)
    if g.degree > 0:
        row = [a // g for a in row]
    return _integer_row(row)


def _integer_row(row: List[UniPoly]) -> List[UniPoly]:
    values = [a for p in row for a in p.coeffs]
    if not values:
        return row
    den = lcm(*(a.denominator for a in values))
    num = gcd(*(int(a * den) for a in values))
    scale = Fraction(den, num)
    return row if scale == 1 else [p.scale(scale) for p in row]


def _to_sympy(p: UniPoly):
    return sum((Rational(c.numerator, c.denominator) * _N**i for i, c in enumerate(p.coeffs)), Integer(0))


def _from_poly(poly: Poly) -> UniPoly:
    return UniPoly(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


def _full_column_rank_at(matrix: List[List[UniPoly]], ncols: int, point: int) -> bool:
    """Rank test of the matrix specialized at n = point, over Q."""
    rows = [[QQ(v.numerator, v.denominator) for v in (p(point) for p in row)] for row in matrix]
    return DomainMatrix(rows, (len(rows), ncols), QQ).rank() == ncols


def polynomial_kernel_vector(matrix: List[List[UniPoly]], ncols: int) -> Optional[List[UniPoly]]:
    """
    A nonzero polynomial vector x with matrix * x = 0, or None if the columns
    are independent over Q(n).

    Full column rank at one integer point implies full rank over Q(n), so
    that case is settled over Q. Otherwise the nullspace is computed over
    the fraction field Q(n) and its first basis vector is cleared of
    denominators.
    """
    if _full_column_rank_at(matrix, ncols, _SAMPLE_POINT):
        return None
    rows = [[_FIELD.from_sympy(_to_sympy(p)) for p in row] for row in matrix]
    basis = DomainMatrix(rows, (len(rows), ncols), _FIELD).nullspace()
    if basis.shape[0] == 0:
        return None
    parts = [fraction(cancel(e)) for e in basis.to_Matrix().row(0)]
    parts = [(Poly(num, _N, domain=QQ), Poly(den, _N, domain=QQ)) for num, den in parts]
    common = reduce(lambda a, b: a.lcm(b), (den for _, den in parts))
    return _primitive_row([_from_poly(num * common.exquo(den)) for num, den in parts])


def rec_add_closure(L1: RecOperator, L2: RecOperator) -> RecOperator:
    """
    An operator annihilating a + b whenever L1 annihilates a and L2 annihilates b.

    Searches the least N in [max(d1, d2), d1 + d2] with polynomial operators
    A, B such that A*L1 = B*L2 has order N, and returns A*L1 made primitive.
    """
    d1, d2 = L1.order, L2.order
    if L1.primitive() == L2.primitive():
        return L1.primitive()
    for N in range(max(d1, d2), d1 + d2 + 1):
        columns = [L1.shifted(i) for i in range(N - d1 + 1)]
        columns += [[-c for c in L2.shifted(k)] for k in range(N - d2 + 1)]
        matrix = [[col[t] if t < len(col) else ZERO for col in columns] for t in range(N + 1)]
        kernel = polynomial_kernel_vector(matrix, len(columns))
        if kernel is None:
            continue
        combined = [ZERO] * (N + 1)
        for i, alpha in enumerate(kernel[: N - d1 + 1]):
            if alpha.is_zero:
                continue
            for t, c in enumerate(L1.shifted(i)):
                combined[t] = combined[t] + alpha * c
        while combined and combined[-1].is_zero:
            combined.pop()
        if not combined:
            continue
        result = RecOperator(tuple(combined)).primitive()
        logger.debug(f"addition closure of orders {d1} and {d2} has order {result.order}")
        return result
    raise ArithmeticDomainError(f"no common left multiple found up to order {d1 + d2}")


def rec_dilate(Lk: RecOperator, cls: IndicatorClass) -> RecOperator:
    """
    Turn an annihilator of v(k) into one of u(n) = v((n - j)/m) * chi^{[j]}_m(n).

    The result only has nonzero coefficients at shifts that are multiples of m.
    """
    m, j = cls.m, cls.j
    if m < 1:
        raise ArithmeticDomainError("cannot dilate onto the zero class")
    if m == 1:
        return Lk.primitive()
    back = AffineMap(Fraction(1, m), Fraction(-j, m))
    coeffs = [ZERO] * (m * Lk.order + 1)
    for t, P in enumerate(Lk.coeffs):
        coeffs[t * m] = poly_subst_affine(P, back)
    return RecOperator(tuple(coeffs)).primitive()


def _within(L: RecOperator, max_order: Optional[int]) -> RecOperator:
    if max_order is not None and L.order > max_order:
        raise OrderBoundError(L.order, max_order)
    return L


def component_to_recurrence(C: Component, max_order: Optional[int] = None) -> RecOperator:
    """Annihilator of one interlaced component, valid for all n >= 0."""
    sections = []
    for mono in C.coefficient.monomials:
        p, q, _ = section_ratio(mono, C.cls)
        sections.append(first_order_from_ratio(p, q))
    if not sections:
        return RecOperator((-ONE, ONE))
    Lk = sections[0]
    for L in sections[1:]:
        Lk = rec_add_closure(Lk, L)
        # dilation multiplies the order by m
        if max_order is not None and C.cls.m * Lk.order > max_order:
            raise OrderBoundError(C.cls.m * Lk.order, max_order)
    return _within(rec_dilate(Lk, C.cls), max_order)


def hts_to_recurrence(S: HTSExpr, max_order: Optional[int] = None) -> RecOperator:
    """
    P-recursive annihilator of a hypergeometric-type expression.

    The empty expression gets s(n+1) - s(n).

    Raises:
        OrderBoundError: max_order is given and the result would exceed it.
            Closure orders never decrease, so the search stops at the first
            intermediate operator above the bound.
    """
    S = hts_normalize(S)
    if S.is_empty:
        return _within(RecOperator((-ONE, ONE)), max_order)
    ops = [component_to_recurrence(C, max_order) for C in S.components]
    result = ops[0]
    for L in ops[1:]:
        result = _within(rec_add_closure(result, L), max_order)
    logger.debug(f"derived recurrence of order {result.order} for {len(ops)} components")
    return result


def rec_verify(L: RecOperator, S: HTSExpr, n_max: int, n_min: int = 0) -> bool:
    """True iff L applied to S vanishes exactly at every n_min <= n <= n_max."""
    if n_max < n_min:
        return True
    values = {n: hts_eval(S, n) for n in range(n_min, n_max + L.order + 1)}
    for n in range(n_min, n_max + 1):
        if L.apply(values.__getitem__, n) != 0:
            logger.debug(f"recurrence fails at n = {n}")
            return False
    return True


def leading_zero_bound(L: RecOperator) -> int:
    """Largest nonnegative integer root of the leading coefficient, or -1."""
    roots = nonneg_integer_roots(L.leading)
    return max(roots) if roots else -1


def hts_is_zero(S: HTSExpr) -> bool:
    """
    Decide whether S is the zero sequence.

    With L of order D annihilating S and K the last natural root of its
    leading coefficient, S vanishes iff S(n) = 0 for 0 <= n <= K + D: from
    there on the recurrence propagates zero forward.
    """
    S = hts_normalize(S)
    if S.is_empty:
        return True
    L = hts_to_recurrence(S)
    bound = leading_zero_bound(L) + L.order
    logger.debug(f"zero test checks indices 0..{bound}")
    return all(hts_eval(S, n) == 0 for n in range(bound + 1))


def hts_equal(S1: HTSExpr, S2: HTSExpr) -> bool:
    return hts_is_zero(hts_sub(S1, S2))
