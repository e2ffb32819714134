"""
Hypergeometric-type terms: atoms, monomials, components and full expressions.

A term sum_i H_i(sigma_i(n)) * chi^{[j_i]}_{m_i} is stored with each sigma_i
absorbed into the affine arguments of the atoms, so a HypMonomial is directly
a function of n. Support-integrality (arguments land in N, exponents in Z) is
checked per Component against its indicator class, never globally.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import ClassVar, Dict, Iterable, List, Optional, Tuple

from sympy import divisors

from hyperseq.errors import DomainError, PoleError
from hyperseq.exactarith import (
    ONE,
    AffineMap,
    RatFun,
    UniPoly,
    nonneg_integer_roots,
    poly_gcd,
    poly_subst_affine,
    strip_natural_root_factors,
    to_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndicatorClass:
    """The residue class {j + m*k : k in N}; (0, 0) is the zero sequence."""

    j: int
    m: int

    def __post_init__(self):
        if not isinstance(self.j, int) or not isinstance(self.m, int):
            raise DomainError(f"indicator class needs integers, got ({self.j!r}, {self.m!r})")
        if self.m < 0 or self.j < 0:
            raise DomainError(f"indicator class ({self.j}, {self.m}) has a negative entry")
        if self.m == 0 and self.j != 0:
            raise DomainError("modulus 0 is only allowed as the zero class (0, 0)")
        if self.m >= 1 and self.j >= self.m:
            raise DomainError(f"residue {self.j} is not below modulus {self.m}")

    @property
    def is_zero(self) -> bool:
        return self.m == 0

    def contains(self, n: int) -> bool:
        return self.m >= 1 and n % self.m == self.j

    def as_affine(self) -> AffineMap:
        """The map k -> m*k + j enumerating the class."""
        return AffineMap(self.m, self.j)

    def __str__(self) -> str:
        return f"({self.j} mod {self.m})"


ZERO_CLASS = IndicatorClass(0, 0)
ONE_CLASS = IndicatorClass(0, 1)


def mfold_indicator(n: int, cls: IndicatorClass) -> int:
    """Evaluate chi^{[j]}_m at n: 1 on the class, 0 elsewhere and for (0, 0)."""
    return 1 if cls.contains(n) else 0


def _is_integer(x: Fraction) -> bool:
    return x.denominator == 1


def _is_natural(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


# -- atoms -----------------------------------------------------------------


@dataclass(frozen=True)
class PowerAtom:
    """base ** exponent(n)."""

    base: Fraction
    exponent: AffineMap
    rank: ClassVar[int] = 0

    def __post_init__(self):
        object.__setattr__(self, "base", to_rational(self.base))
        if self.base == 0:
            raise DomainError("power atom with base 0")

    def merge_key(self):
        return self.base

    def sort_key(self) -> tuple:
        return (self.rank, self.base, self.exponent.slope, self.exponent.intercept)

    def evaluate(self, n: int) -> Fraction:
        e = self.exponent(n)
        if not _is_integer(e):
            raise DomainError(f"power exponent {e} is not an integer at n = {n}")
        return self.base ** int(e)

    def check_support(self, cls: IndicatorClass) -> None:
        on = self.exponent.compose(cls.as_affine())
        if not (_is_integer(on.slope) and _is_integer(on.intercept)):
            raise DomainError(f"exponent of {self.base}^(...) is not integral on class {cls}")

    def shifted(self, t: int) -> "PowerAtom":
        return PowerAtom(self.base, self.exponent.shifted(t))

    def inverse(self) -> "PowerAtom":
        return PowerAtom(self.base, -self.exponent)


@dataclass(frozen=True)
class FactorialAtom:
    """argument(n)! ** exponent."""

    argument: AffineMap
    exponent: int
    rank: ClassVar[int] = 1

    def merge_key(self):
        return self.argument

    def sort_key(self) -> tuple:
        return (self.rank, self.argument.slope, self.argument.intercept, self.exponent)

    def evaluate(self, n: int) -> Fraction:
        a = self.argument(n)
        if not _is_natural(a):
            raise DomainError(f"factorial argument {a} is not a natural number at n = {n}")
        return Fraction(factorial(int(a))) ** self.exponent

    def check_support(self, cls: IndicatorClass) -> None:
        on = self.argument.compose(cls.as_affine())
        if not (_is_natural(on.slope) and _is_natural(on.intercept)):
            raise DomainError(f"factorial argument does not stay in N on class {cls}")

    def shifted(self, t: int) -> "FactorialAtom":
        return FactorialAtom(self.argument.shifted(t), self.exponent)

    def inverse(self) -> "FactorialAtom":
        return FactorialAtom(self.argument, -self.exponent)


def rising_factorial(x: Fraction, count: int) -> Fraction:
    """Pochhammer symbol (x)_count = x (x+1) ... (x+count-1); (x)_0 = 1."""
    value = Fraction(1)
    for i in range(count):
        value *= x + i
    return value


@dataclass(frozen=True)
class PochhammerAtom:
    """(parameter)_{argument(n)} ** exponent."""

    parameter: Fraction
    argument: AffineMap
    exponent: int
    rank: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(self, "parameter", to_rational(self.parameter))

    def merge_key(self):
        return (self.parameter, self.argument)

    def sort_key(self) -> tuple:
        return (self.rank, self.parameter, self.argument.slope, self.argument.intercept, self.exponent)

    def evaluate(self, n: int) -> Fraction:
        a = self.argument(n)
        if not _is_natural(a):
            raise DomainError(f"Pochhammer length {a} is not a natural number at n = {n}")
        value = rising_factorial(self.parameter, int(a))
        if value == 0 and self.exponent < 0:
            raise PoleError(f"inverse Pochhammer ({self.parameter})_{a} vanishes at n = {n}")
        return value ** self.exponent

    def check_support(self, cls: IndicatorClass) -> None:
        on = self.argument.compose(cls.as_affine())
        if not (_is_natural(on.slope) and _is_natural(on.intercept)):
            raise DomainError(f"Pochhammer length does not stay in N on class {cls}")

    def shifted(self, t: int) -> "PochhammerAtom":
        return PochhammerAtom(self.parameter, self.argument.shifted(t), self.exponent)

    def inverse(self) -> "PochhammerAtom":
        return PochhammerAtom(self.parameter, self.argument, -self.exponent)


# -- monomials and coefficients ---------------------------------------------


@dataclass(frozen=True)
class HypMonomial:
    """constant * prod(powers) * prod(factorials) * prod(pochhammers) * ratfactor."""

    constant: Fraction
    powers: Tuple[PowerAtom, ...] = ()
    factorials: Tuple[FactorialAtom, ...] = ()
    pochhammers: Tuple[PochhammerAtom, ...] = ()
    ratfactor: RatFun = field(default_factory=lambda: RatFun(ONE))

    def __post_init__(self):
        object.__setattr__(self, "constant", to_rational(self.constant))
        object.__setattr__(self, "powers", tuple(self.powers))
        object.__setattr__(self, "factorials", tuple(self.factorials))
        object.__setattr__(self, "pochhammers", tuple(self.pochhammers))

    @classmethod
    def constant_term(cls, c) -> "HypMonomial":
        return cls(to_rational(c))

    @classmethod
    def rational(cls, r: RatFun) -> "HypMonomial":
        return cls(Fraction(1), ratfactor=r)

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 or self.ratfactor.is_zero

    @property
    def atoms(self) -> tuple:
        return self.powers + self.factorials + self.pochhammers

    @property
    def has_atoms(self) -> bool:
        return bool(self.powers or self.factorials or self.pochhammers)

    def atoms_key(self) -> tuple:
        return tuple(a.sort_key() for a in self.atoms)

    def sort_key(self) -> tuple:
        return (self.atoms_key(), self.ratfactor.den.coeffs, self.ratfactor.num.coeffs, self.constant)

    def rational_part(self) -> RatFun:
        return self.ratfactor * self.constant

    def with_rational_part(self, r: RatFun) -> "HypMonomial":
        """Same atoms, rational part r (leading coefficient moved into the constant)."""
        if r.is_zero:
            return HypMonomial(Fraction(0), self.powers, self.factorials, self.pochhammers, RatFun(ONE))
        lead = r.num.leading
        return HypMonomial(lead, self.powers, self.factorials, self.pochhammers, RatFun(r.num.monic(), r.den))

    def evaluate(self, n: int) -> Fraction:
        return monomial_eval(self, n)

    def check_support(self, cls: IndicatorClass) -> None:
        for atom in self.atoms:
            atom.check_support(cls)
        den = self.ratfactor.den
        if not den.is_constant:
            on_class = poly_subst_affine(den, cls.as_affine())
            if nonneg_integer_roots(on_class):
                raise PoleError(f"rational factor has a pole on class {cls}")

    def shifted(self, t: int) -> "HypMonomial":
        return HypMonomial(
            self.constant,
            tuple(a.shifted(t) for a in self.powers),
            tuple(a.shifted(t) for a in self.factorials),
            tuple(a.shifted(t) for a in self.pochhammers),
            self.ratfactor.shift(t),
        )

    def inverse(self) -> "HypMonomial":
        if self.is_zero:
            raise DomainError("cannot invert a zero monomial")
        return HypMonomial(
            1 / self.constant,
            tuple(a.inverse() for a in self.powers),
            tuple(a.inverse() for a in self.factorials),
            tuple(a.inverse() for a in self.pochhammers),
            self.ratfactor.inverse(),
        )


def monomial_eval(M: HypMonomial, n: int) -> Fraction:
    """
    Exact value of a monomial at a supported index.

    Raises:
        DomainError: a factorial/Pochhammer argument leaves N or a power
            exponent is not an integer.
        PoleError: the rational factor or an inverse Pochhammer vanishes.
    """
    value = M.constant
    if value == 0:
        return value
    for atom in M.atoms:
        value *= atom.evaluate(n)
    return value * M.ratfactor(n)


def _group_atoms(atoms: Iterable, combine) -> List:
    grouped: Dict = {}
    for atom in atoms:
        key = atom.merge_key()
        grouped[key] = combine(grouped[key], atom) if key in grouped else atom
    return list(grouped.values())


def monomial_canonicalize(M: HypMonomial) -> HypMonomial:
    """
    Sort and merge atoms, drop trivial ones and fold constant-argument atoms.

    The result evaluates identically to M at every supported index. A monomial
    that is identically zero comes back with constant 0 and no atoms.

    Raises:
        DomainError: a constant-argument factorial or power is not defined.
    """
    constant = M.constant
    if M.is_zero:
        return HypMonomial(Fraction(0))

    powers = []
    for atom in _group_atoms(M.powers, lambda a, b: PowerAtom(a.base, a.exponent + b.exponent)):
        if atom.base == 1 or atom.exponent.is_zero:
            continue
        if atom.exponent.is_constant:
            e = atom.exponent.intercept
            if not _is_integer(e):
                raise DomainError(f"{atom.base}^{e} is not rational")
            constant *= atom.base ** int(e)
            continue
        powers.append(atom)

    factorials = []
    for atom in _group_atoms(M.factorials, lambda a, b: FactorialAtom(a.argument, a.exponent + b.exponent)):
        if atom.exponent == 0:
            continue
        if atom.argument.is_constant:
            c = atom.argument.intercept
            if not _is_natural(c):
                raise DomainError(f"factorial of {c} is undefined")
            constant *= Fraction(factorial(int(c))) ** atom.exponent
            continue
        factorials.append(atom)

    pochhammers = []
    merge_poch = lambda a, b: PochhammerAtom(a.parameter, a.argument, a.exponent + b.exponent)
    for atom in _group_atoms(M.pochhammers, merge_poch):
        if atom.exponent == 0:
            continue
        if atom.argument.is_constant:
            constant *= atom.evaluate(0)
            continue
        pochhammers.append(atom)

    if constant == 0:
        return HypMonomial(Fraction(0))

    ratfactor = M.ratfactor
    lead = ratfactor.num.leading
    constant *= lead
    ratfactor = RatFun(ratfactor.num.monic(), ratfactor.den)

    return HypMonomial(
        constant,
        tuple(sorted(powers, key=lambda a: a.sort_key())),
        tuple(sorted(factorials, key=lambda a: a.sort_key())),
        tuple(sorted(pochhammers, key=lambda a: a.sort_key())),
        ratfactor,
    )


def merge_monomials(monomials: Iterable[HypMonomial]) -> Tuple[HypMonomial, ...]:
    """Canonicalize, then sum monomials sharing identical atoms; zeros dropped."""
    buckets: Dict[tuple, Tuple[HypMonomial, RatFun]] = {}
    for mono in monomials:
        mono = monomial_canonicalize(mono)
        if mono.is_zero:
            continue
        key = mono.atoms_key()
        if key in buckets:
            first, total = buckets[key]
            buckets[key] = (first, total + mono.rational_part())
        else:
            buckets[key] = (mono, mono.rational_part())
    merged = [first.with_rational_part(total) for first, total in buckets.values()]
    return tuple(sorted((m for m in merged if not m.is_zero), key=lambda m: m.sort_key()))


@dataclass(frozen=True)
class HypCoefficient:
    """A finite sum of monomials; the empty sum is the zero coefficient."""

    monomials: Tuple[HypMonomial, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "monomials", tuple(self.monomials))

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def evaluate(self, n: int) -> Fraction:
        return sum((monomial_eval(m, n) for m in self.monomials), Fraction(0))


@dataclass(frozen=True)
class Component:
    """One summand coefficient * chi^{[j]}_m, validated against its class."""

    coefficient: HypCoefficient
    cls: IndicatorClass

    def __post_init__(self):
        if self.cls.m < 1:
            raise DomainError("components must live on a class with modulus >= 1")
        for mono in self.coefficient.monomials:
            mono.check_support(self.cls)

    def evaluate(self, n: int) -> Fraction:
        if not self.cls.contains(n):
            return Fraction(0)
        return self.coefficient.evaluate(n)


@dataclass(frozen=True)
class HTSExpr:
    """A finite sum of components; the empty sum is the zero sequence."""

    components: Tuple[Component, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def zero(cls) -> "HTSExpr":
        return cls(())

    @classmethod
    def from_monomial(cls, mono: HypMonomial, cls_: IndicatorClass = ONE_CLASS) -> "HTSExpr":
        if cls_.is_zero or mono.is_zero:
            return cls(())
        return cls((Component(HypCoefficient((mono,)), cls_),))

    @classmethod
    def indicator(cls, j: int, m: int) -> "HTSExpr":
        return cls.from_monomial(HypMonomial.constant_term(1), IndicatorClass(j, m))

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __call__(self, n: int) -> Fraction:
        return hts_eval(self, n)

    def __add__(self, other: "HTSExpr") -> "HTSExpr":
        return hts_add(self, other)

    def __sub__(self, other: "HTSExpr") -> "HTSExpr":
        return hts_sub(self, other)

    def __neg__(self) -> "HTSExpr":
        return hts_scale(self, -1)

    def __mul__(self, other: "HTSExpr") -> "HTSExpr":
        from hyperseq.product import hts_product

        return hts_product(self, other)


# -- operations on expressions ---------------------------------------------


def hts_eval(S: HTSExpr, n: int) -> Fraction:
    """Exact value of S at index n; the empty expression is 0 everywhere."""
    if n < 0:
        raise DomainError(f"sequences are indexed by N, got n = {n}")
    return sum((c.coefficient.evaluate(n) for c in S.components if c.cls.contains(n)), Fraction(0))


def refine_component(C: Component, mu: int) -> List[Component]:
    """Split C onto the mu/m residue classes of modulus mu that cover its class."""
    m = C.cls.m
    if mu < 1 or mu % m:
        raise DomainError(f"cannot refine modulus {m} to {mu}")
    return [Component(C.coefficient, IndicatorClass(C.cls.j + t * m, mu)) for t in range(mu // m)]


def section_ratio(M: HypMonomial, cls: IndicatorClass) -> Tuple[UniPoly, UniPoly, Optional[Fraction]]:
    """
    Shift quotient of the section v(k) = M(m*k + j).

    Args:
        M: a monomial valid on cls
        cls: indicator class with modulus >= 1

    Returns:
        (p, q, v0) with v(k+1)*q(k) = v(k)*p(k) for every k >= 0 and v0 = M(j),
        or v0 = None when M has a pole at j.
        Common factors of p and q are cancelled only when they have no root in N.
    """
    if cls.m < 1:
        raise DomainError("sectioning needs a modulus >= 1")
    M.check_support(cls)
    on = cls.as_affine()
    p, q = ONE, ONE
    scalar = Fraction(1)

    for atom in M.powers:
        step = atom.exponent.compose(on).slope
        scalar *= atom.base ** int(step)

    for atom in M.factorials:
        arg = atom.argument.compose(on)
        a, b = int(arg.slope), int(arg.intercept)
        block = ONE
        for i in range(1, a + 1):
            block = block * UniPoly((b + i, a))
        if atom.exponent > 0:
            p = p * block ** atom.exponent
        else:
            q = q * block ** (-atom.exponent)

    for atom in M.pochhammers:
        arg = atom.argument.compose(on)
        a, b = int(arg.slope), int(arg.intercept)
        block = ONE
        for i in range(a):
            block = block * UniPoly((atom.parameter + b + i, a))
        if atom.exponent > 0:
            p = p * block ** atom.exponent
        else:
            q = q * block ** (-atom.exponent)

    num = poly_subst_affine(M.ratfactor.num, on)
    den = poly_subst_affine(M.ratfactor.den, on)
    p = p * num.shift(1) * den
    q = q * den.shift(1) * num
    p = p.scale(scalar)

    common = strip_natural_root_factors(poly_gcd(p, q))
    if common.degree > 0:
        p, q = p // common, q // common
    try:
        v0: Optional[Fraction] = monomial_eval(M, cls.j)
    except PoleError:
        v0 = None
    logger.debug(f"section of {M} on {cls}: p={p}, q={q}, v0={v0}")
    return p, q, v0


def hts_normalize(S: HTSExpr) -> HTSExpr:
    """
    Normal form: one component per class, merged monomials, no empty
    components, followed by one coarsening pass over the moduli.
    """
    groups: Dict[Tuple[int, int], List[HypMonomial]] = {}
    for comp in S.components:
        groups.setdefault((comp.cls.j, comp.cls.m), []).extend(comp.coefficient.monomials)

    merged: Dict[Tuple[int, int], Tuple[HypMonomial, ...]] = {}
    for key, monos in groups.items():
        coeff = merge_monomials(monos)
        if coeff:
            merged[key] = coeff

    _coarsen(merged)
    ordered = sorted(merged, key=lambda k: (k[1], k[0]))
    return HTSExpr(tuple(Component(HypCoefficient(merged[k]), IndicatorClass(*k)) for k in ordered))


def _coarsen(merged: Dict[Tuple[int, int], Tuple[HypMonomial, ...]]) -> None:
    processed = set()
    while True:
        pending = [m for (_, m) in merged if m > 1 and m not in processed]
        if not pending:
            return
        mu = max(pending)
        processed.add(mu)
        for d in map(int, divisors(mu)[:-1]):
            for r in range(d):
                family = [(r + t * d, mu) for t in range(mu // d)]
                if not all(k in merged for k in family):
                    continue
                coeff = merged[family[0]]
                if any(merged[k] != coeff for k in family[1:]):
                    continue
                for k in family:
                    del merged[k]
                target = (r, d)
                combined = merge_monomials(merged.get(target, ()) + coeff)
                if combined:
                    merged[target] = combined
                else:
                    merged.pop(target, None)
                logger.debug(f"coarsened modulus {mu} family onto ({r} mod {d})")


def hts_add(S1: HTSExpr, S2: HTSExpr) -> HTSExpr:
    return hts_normalize(HTSExpr(S1.components + S2.components))


def hts_scale(S: HTSExpr, c) -> HTSExpr:
    c = to_rational(c)
    if c == 0:
        return HTSExpr.zero()
    scaled = []
    for comp in S.components:
        monos = tuple(
            HypMonomial(m.constant * c, m.powers, m.factorials, m.pochhammers, m.ratfactor)
            for m in comp.coefficient.monomials
        )
        scaled.append(Component(HypCoefficient(monos), comp.cls))
    return hts_normalize(HTSExpr(tuple(scaled)))


def hts_sub(S1: HTSExpr, S2: HTSExpr) -> HTSExpr:
    return hts_add(S1, hts_scale(S2, -1))


def hts_shift(S: HTSExpr, t: int) -> HTSExpr:
    """
    Return S' with S'(n) = S(n + t).

    Raises:
        DomainError: a shifted atom leaves N on its new support.
    """
    if t < 0:
        raise DomainError("only forward shifts keep the support inside N")
    shifted = []
    for comp in S.components:
        cls = IndicatorClass((comp.cls.j - t) % comp.cls.m, comp.cls.m)
        monos = tuple(m.shifted(t) for m in comp.coefficient.monomials)
        shifted.append(Component(HypCoefficient(monos), cls))
    return hts_normalize(HTSExpr(tuple(shifted)))


def coefficient_of(S: HTSExpr, cls: IndicatorClass) -> Optional[HypCoefficient]:
    for comp in S.components:
        if comp.cls == cls:
            return comp.coefficient
    return None
