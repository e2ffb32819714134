"""
Exact arithmetic over Q: rationals, dense univariate polynomials, rational
functions and affine maps.

Every value here is immutable once built. Polynomials are stored as tuples of
Fraction coefficients in ascending degree with no trailing zeros, so the zero
polynomial is the empty tuple and equality is plain tuple equality.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Set, Tuple, Union

from sympy import divisors

from hyperseq.errors import ArithmeticDomainError, PoleError

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]


def to_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, a Fraction or a "p/q" string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise TypeError(f"cannot interpret {value!r} as an exact rational")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Render a rational as "p" or "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class UniPoly:
    """Dense univariate polynomial in n with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Scalar) -> "UniPoly":
        return cls((c,))

    @classmethod
    def variable(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], leading: Scalar = 1) -> "UniPoly":
        """Build leading * prod (n - r) over the given roots."""
        result = cls.constant(leading)
        for r in roots:
            result = result * cls((-to_rational(r), 1))
        return result

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly.constant(other)
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "UniPoly":
        other = _as_poly(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coefficient(i) + other.coefficient(i) for i in range(size))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "UniPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UniPoly":
        if exponent < 0:
            raise ArithmeticDomainError("negative power of a polynomial")
        result = UniPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: Scalar) -> "UniPoly":
        c = to_rational(c)
        return UniPoly(c * a for a in self.coeffs)

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __divmod__(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        other = _as_poly(other)
        if other.is_zero:
            raise ArithmeticDomainError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            factor = rem[k + dq] / lead
            quot[k] = factor
            if factor:
                for i, c in enumerate(other.coeffs):
                    rem[k + i] -= factor * c
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    # -- normalizations ----------------------------------------------------

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def integer_primitive(self) -> "UniPoly":
        """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero:
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        nums = [int(c * den) for c in self.coeffs]
        g = gcd(*nums)
        if nums[-1] < 0:
            g = -g
        return UniPoly(Fraction(a, g) for a in nums)

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """Return self(inner(n))."""
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, t: int) -> "UniPoly":
        return poly_shift(self, t)


def _as_poly(value) -> UniPoly:
    if isinstance(value, UniPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return UniPoly.constant(value)
    raise TypeError(f"cannot use {value!r} as a polynomial")


ONE = UniPoly.constant(1)
X = UniPoly.variable()


@dataclass(frozen=True)
class AffineMap:
    """The map n -> slope*n + intercept."""

    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", to_rational(self.slope))
        object.__setattr__(self, "intercept", to_rational(self.intercept))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def constant(cls, c: Scalar) -> "AffineMap":
        return cls(Fraction(0), to_rational(c))

    @property
    def is_constant(self) -> bool:
        return self.slope == 0

    @property
    def is_zero(self) -> bool:
        return self.slope == 0 and self.intercept == 0

    def __call__(self, n: Scalar) -> Fraction:
        return self.slope * n + self.intercept

    def __add__(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(self.slope + other.slope, self.intercept + other.intercept)

    def __neg__(self) -> "AffineMap":
        return AffineMap(-self.slope, -self.intercept)

    def __sub__(self, other: "AffineMap") -> "AffineMap":
        return self + (-other)

    def scaled(self, c: Scalar) -> "AffineMap":
        return AffineMap(self.slope * c, self.intercept * c)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """Return the map n -> self(inner(n))."""
        return AffineMap(self.slope * inner.slope, self.slope * inner.intercept + self.intercept)

    def shifted(self, t: int) -> "AffineMap":
        """Return the map n -> self(n + t)."""
        return AffineMap(self.slope, self.intercept + self.slope * t)

    def as_poly(self) -> UniPoly:
        return UniPoly((self.intercept, self.slope))

    def sort_key(self) -> Tuple[Fraction, Fraction]:
        return (self.slope, self.intercept)


# -- operations ------------------------------------------------------------


def poly_shift(p: UniPoly, t: int) -> UniPoly:
    """Return q with q(n) = p(n + t)."""
    if t == 0 or p.is_constant:
        return p
    return p.compose(UniPoly((t, 1)))


def poly_subst_affine(p: UniPoly, a: AffineMap) -> UniPoly:
    """Return q with q(n) = p(a(n))."""
    return p.compose(a.as_poly())


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic greatest common divisor of two polynomials, not both zero."""
    if p.is_zero and q.is_zero:
        raise ArithmeticDomainError("gcd of two zero polynomials is undefined")
    a, b = p, q
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_lcm(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic least common multiple of two nonzero polynomials."""
    if p.is_zero or q.is_zero:
        raise ArithmeticDomainError("lcm with the zero polynomial is undefined")
    return ((p * q) // poly_gcd(p, q)).monic()


def nonneg_integer_roots(p: UniPoly) -> Set[int]:
    """
    All n0 in N with p(n0) = 0, by the rational-root candidate method.

    Args:
        p: a nonzero polynomial

    Returns:
        The set of nonnegative integer roots.

    Raises:
        ArithmeticDomainError: p is the zero polynomial.
    """
    if p.is_zero:
        raise ArithmeticDomainError("the zero polynomial vanishes everywhere")
    roots: Set[int] = set()
    coeffs = list(p.coeffs)
    if coeffs[0] == 0:
        roots.add(0)
        while coeffs[0] == 0:
            coeffs.pop(0)
    q = UniPoly(coeffs).integer_primitive()
    if q.degree < 1:
        return roots
    ints = [int(c) for c in q.coeffs]
    # Cauchy bound on the size of any root
    bound = 1 + max(abs(c) for c in ints[:-1]) // abs(ints[-1])
    for d in map(int, divisors(abs(ints[0]))):
        if d > bound:
            break
        if q(d) == 0:
            roots.add(d)
    return roots


def strip_natural_root_factors(g: UniPoly) -> UniPoly:
    """Remove every linear factor (n - r), r in N, from g (with multiplicity)."""
    if g.is_zero:
        raise ArithmeticDomainError("cannot strip factors from the zero polynomial")
    for r in sorted(nonneg_integer_roots(g)):
        linear = UniPoly((-r, 1))
        while g.degree >= 1 and g(r) == 0:
            g = g // linear
    return g


class RatFun:
    """Rational function num/den over Q, gcd-reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[UniPoly, Scalar], den: Union[UniPoly, Scalar, None] = None):
        num = _as_poly(num)
        den = ONE if den is None else _as_poly(den)
        if den.is_zero:
            raise ArithmeticDomainError("rational function with zero denominator")
        if num.is_zero:
            den = ONE
        elif not den.is_constant:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lead = den.leading
        if lead != 1:
            num, den = num.scale(1 / lead), den.scale(1 / lead)
        self.num: UniPoly = num
        self.den: UniPoly = den

    @classmethod
    def constant(cls, c: Scalar) -> "RatFun":
        return cls(UniPoly.constant(c))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, UniPoly)):
            other = RatFun(other)
        return isinstance(other, RatFun) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFun", self.num.coeffs, self.den.coeffs))

    def __repr__(self) -> str:
        return f"RatFun({self.num!r}, {self.den!r})"

    def __add__(self, other) -> "RatFun":
        other = _as_ratfun(other)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other) -> "RatFun":
        return self + (-_as_ratfun(other))

    def __mul__(self, other) -> "RatFun":
        other = _as_ratfun(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        return self * _as_ratfun(other).inverse()

    def inverse(self) -> "RatFun":
        if self.is_zero:
            raise ArithmeticDomainError("inverse of the zero rational function")
        return RatFun(self.den, self.num)

    def __call__(self, x: Scalar) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise PoleError(f"rational factor has a pole at n = {x}")
        return self.num(x) / d

    def shift(self, t: int) -> "RatFun":
        return ratfun_shift(self, t)

    def subst_affine(self, a: AffineMap) -> "RatFun":
        return RatFun(poly_subst_affine(self.num, a), poly_subst_affine(self.den, a))


def _as_ratfun(value) -> RatFun:
    if isinstance(value, RatFun):
        return value
    return RatFun(_as_poly(value))


def ratfun_shift(r: RatFun, t: int) -> RatFun:
    """Return r(n + t)."""
    return RatFun(poly_shift(r.num, t), poly_shift(r.den, t))


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


def poly_content_gcd(polys: List[UniPoly]) -> UniPoly:
    """Monic gcd of a list of polynomials, ignoring zeros; 1 if all are zero."""
    result = UniPoly()
    for p in polys:
        if p.is_zero:
            continue
        result = p.monic() if result.is_zero else poly_gcd(result, p)
        if result.degree == 0:
            break
    return ONE if result.is_zero else result
