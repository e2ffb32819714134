"""
Hadamard products of hypergeometric-type terms.

Indicator products follow the Chinese remainder rule: chi^{[j1]}_{m1} *
chi^{[j2]}_{m2} is chi^{[j0]}_{lcm(m1, m2)} when the congruences are
compatible and the zero sequence otherwise.
"""

import logging
from typing import Iterable, List, Optional, Tuple

from sympy.ntheory.modular import solve_congruence

from hyperseq.hyperterm import (
    Component,
    HTSExpr,
    HypCoefficient,
    HypMonomial,
    IndicatorClass,
    hts_normalize,
    monomial_canonicalize,
)

logger = logging.getLogger(__name__)

Term = Tuple[HypMonomial, IndicatorClass]


def indicator_product(c1: IndicatorClass, c2: IndicatorClass) -> Optional[IndicatorClass]:
    """
    Product of two indicator sequences.

    Args:
        c1: first class
        c2: second class

    Returns:
        The class (j0, lcm(m1, m2)), or None when the product is the zero
        sequence (either input is (0, 0) or the residues are incompatible).
    """
    if c1.is_zero or c2.is_zero:
        return None
    solution = solve_congruence((c1.j, c1.m), (c2.j, c2.m))
    if solution is None:
        return None
    j0, mu = solution
    return IndicatorClass(int(j0), int(mu))


def monomial_product(M1: HypMonomial, M2: HypMonomial) -> HypMonomial:
    """Pointwise product of two monomials, canonicalized."""
    return monomial_canonicalize(
        HypMonomial(
            M1.constant * M2.constant,
            M1.powers + M2.powers,
            M1.factorials + M2.factorials,
            M1.pochhammers + M2.pochhammers,
            M1.ratfactor * M2.ratfactor,
        )
    )


def distribute_terms(left: Iterable[Term], right: Iterable[Term]) -> List[Term]:
    """Multiply two sums of (monomial, class) terms without validating supports."""
    right = list(right)
    out: List[Term] = []
    for mono1, cls1 in left:
        for mono2, cls2 in right:
            cls = indicator_product(cls1, cls2)
            if cls is None:
                continue
            mono = monomial_product(mono1, mono2)
            if not mono.is_zero:
                out.append((mono, cls))
    return out


def expr_terms(S: HTSExpr) -> List[Term]:
    return [(mono, comp.cls) for comp in S.components for mono in comp.coefficient.monomials]


def hts_product(S1: HTSExpr, S2: HTSExpr) -> HTSExpr:
    """
    Hadamard product of two expressions.

    Every pair of components is multiplied on the intersection of their
    classes; pairs with disjoint classes are dropped.
    """
    components = []
    for C1 in S1.components:
        for C2 in S2.components:
            cls = indicator_product(C1.cls, C2.cls)
            if cls is None:
                logger.debug(f"classes {C1.cls} and {C2.cls} are disjoint")
                continue
            monos = tuple(
                monomial_product(a, b)
                for a in C1.coefficient.monomials
                for b in C2.coefficient.monomials
            )
            components.append(Component(HypCoefficient(monos), cls))
    return hts_normalize(HTSExpr(tuple(components)))
