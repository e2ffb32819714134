"""
Pretty-printers for expressions and recurrence operators (text, LaTeX, JSON)
and the JSON decoder.

The text format is the parser's own input language, so rendered expressions
can be fed back to parse_expr.
"""

import json
import logging
from fractions import Fraction
from typing import List, Tuple, Union

from hyperseq.exactarith import AffineMap, RatFun, UniPoly, format_rational, to_rational
from hyperseq.hyperterm import (
    ONE_CLASS,
    Component,
    FactorialAtom,
    HTSExpr,
    HypCoefficient,
    HypMonomial,
    IndicatorClass,
    PochhammerAtom,
    PowerAtom,
)
from hyperseq.recurrence import RecOperator

logger = logging.getLogger(__name__)

FORMATS = ("text", "latex", "json")

Signed = Tuple[int, str]


def _leading_factor_has_power(body: str) -> bool:
    """True when the first top-level factor of body carries a '^'."""
    depth = 0
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "*/":
            return False
        elif depth == 0 and ch == "^":
            return True
    return False


def _join(terms: List[Signed], guard: bool = False) -> str:
    if not terms:
        return "0"
    sign, body = terms[0]
    # unary minus binds to an atom, so -2^n would read as (-2)^n
    if sign < 0 and guard and _leading_factor_has_power(body):
        body = f"({body})"
    out = ("-" if sign < 0 else "") + body
    for sign, body in terms[1:]:
        out += (" - " if sign < 0 else " + ") + body
    return out


class _Style:
    """Formatting rules shared by the text and LaTeX printers."""

    latex = False

    def __init__(self, var: str = "n"):
        self.var = var

    # scalars and polynomials

    def rational(self, c: Fraction) -> str:
        return format_rational(c)

    def group(self, s: str) -> str:
        return f"({s})"

    def monomial_power(self, k: int) -> str:
        if k == 0:
            return ""
        return self.var if k == 1 else f"{self.var}^{k}"

    def product(self, factors: List[str]) -> str:
        return "*".join(factors)

    def join(self, terms: List[Signed]) -> str:
        return _join(terms, guard=not self.latex)

    def poly_terms(self, p: UniPoly) -> List[Signed]:
        terms: List[Signed] = []
        for k in range(p.degree, -1, -1):
            c = p.coefficient(k)
            if c == 0:
                continue
            factors = []
            if abs(c) != 1 or k == 0:
                factors.append(self.rational(abs(c)))
            if k:
                factors.append(self.monomial_power(k))
            terms.append((1 if c > 0 else -1, self.product(factors)))
        return terms

    def poly_compact(self, p: UniPoly) -> str:
        return self.join(self.poly_terms(p)).replace(" ", "")

    def affine(self, a: AffineMap) -> str:
        return self.poly_compact(a.as_poly())

    def affine_atom(self, a: AffineMap) -> str:
        """Affine argument as a factor: bare when it is the variable or a natural."""
        text = self.affine(a)
        if a == AffineMap.identity() or (a.is_constant and a.intercept >= 0 and a.intercept.denominator == 1):
            return text
        return self.group(text)

    # atoms

    def power(self, atom: PowerAtom) -> str:
        base = atom.base
        base_text = self.rational(base)
        if base < 0 or base.denominator != 1:
            base_text = self.group(base_text)
        exp_text = self.affine(atom.exponent)
        if atom.exponent != AffineMap.identity():
            exp_text = self.group(exp_text)
        return f"{base_text}^{exp_text}"

    def exponent(self, text: str, e: int) -> str:
        return text if e == 1 else f"{text}^{e}"

    def factorial(self, atom: FactorialAtom, e: int) -> str:
        return self.exponent(f"{self.affine_atom(atom.argument)}!", e)

    def pochhammer(self, atom: PochhammerAtom, e: int) -> str:
        return self.exponent(f"pochhammer({self.rational(atom.parameter)},{self.affine(atom.argument)})", e)

    def fraction(self, num: str, den: List[str]) -> str:
        if not den:
            return num
        den_text = den[0] if len(den) == 1 else self.group(self.product(den))
        return f"{num}/{den_text}"

    def indicator(self, cls: IndicatorClass) -> str:
        return f"mfoldInd({self.var},{cls.m},{cls.j})"

    def attach(self, body: str, cls: IndicatorClass) -> str:
        return self.indicator(cls) if body == "1" else f"{body}*{self.indicator(cls)}"

    # monomials

    def monomial(self, mono: HypMonomial) -> Signed:
        P = mono.ratfactor.num.scale(mono.constant)
        num_factors: List[str] = []
        den_factors: List[str] = []
        sign = 1
        if len([c for c in P.coeffs if c != 0]) == 1:
            k = P.degree
            c = P.leading
            sign = 1 if c > 0 else -1
            if abs(c) != 1:
                num_factors.append(self.rational(abs(c)))
            if k:
                num_factors.append(self.monomial_power(k))
        else:
            if P.leading < 0:
                sign, P = -1, -P
            num_factors.append(self.group(self.poly_compact(P)))

        for atom in mono.powers:
            num_factors.append(self.power(atom))
        for atom in mono.factorials:
            target = num_factors if atom.exponent > 0 else den_factors
            target.append(self.factorial(atom, abs(atom.exponent)))
        for atom in mono.pochhammers:
            target = num_factors if atom.exponent > 0 else den_factors
            target.append(self.pochhammer(atom, abs(atom.exponent)))

        den = mono.ratfactor.den
        if not den.is_constant:
            if len([c for c in den.coeffs if c != 0]) == 1:
                den_factors.insert(0, self.monomial_power(den.degree))
            else:
                den_factors.insert(0, self.group(self.poly_compact(den)))

        num = self.product(num_factors) if num_factors else "1"
        return sign, self.fraction(num, den_factors)

    def component(self, comp: Component) -> List[Signed]:
        monos = comp.coefficient.monomials
        if comp.cls == ONE_CLASS:
            terms: List[Signed] = []
            for mono in monos:
                if not mono.has_atoms and mono.ratfactor.is_polynomial:
                    terms.extend(self.poly_terms(mono.ratfactor.num.scale(mono.constant)))
                else:
                    terms.append(self.monomial(mono))
            return terms
        if len(monos) == 1:
            sign, body = self.monomial(monos[0])
            return [(sign, self.attach(body, comp.cls))]
        inner = self.join([self.monomial(m) for m in monos])
        return [(1, self.attach(self.group(inner), comp.cls))]

    def expression(self, S: HTSExpr) -> str:
        terms: List[Signed] = []
        for comp in S.components:
            terms.extend(self.component(comp))
        return self.join(terms)

    def operator(self, L: RecOperator) -> str:
        terms: List[Signed] = []
        for t, c in enumerate(L.coeffs):
            if c.is_zero:
                continue
            seq = self.sequence_term(t)
            nonzero = [a for a in c.coeffs if a != 0]
            if len(nonzero) == 1:
                sign, body = self.poly_terms(c)[0]
                body = seq if body == "1" else self.product([body, seq])
            else:
                sign = 1
                if c.leading < 0:
                    sign, c = -1, -c
                body = self.product([self.group(self.poly_compact(c)), seq])
            terms.append((sign, body))
        return self.join(terms) + " = 0"

    def sequence_term(self, t: int) -> str:
        return f"a({self.var})" if t == 0 else f"a({self.var}+{t})"


class _LatexStyle(_Style):
    latex = True

    def rational(self, c: Fraction) -> str:
        c = Fraction(c)
        if c.denominator == 1:
            return str(c.numerator)
        sign = "-" if c < 0 else ""
        return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"

    def monomial_power(self, k: int) -> str:
        if k == 0:
            return ""
        return self.var if k == 1 else f"{self.var}^{{{k}}}"

    def product(self, factors: List[str]) -> str:
        return " ".join(factors)

    def power(self, atom: PowerAtom) -> str:
        base = atom.base
        base_text = self.rational(base)
        if base < 0 or base.denominator != 1:
            base_text = self.group(base_text)
        return f"{base_text}^{{{self.affine(atom.exponent)}}}"

    def exponent(self, text: str, e: int) -> str:
        return text if e == 1 else f"{text}^{{{e}}}"

    def pochhammer(self, atom: PochhammerAtom, e: int) -> str:
        return self.exponent(f"({self.rational(atom.parameter)})_{{{self.affine(atom.argument)}}}", e)

    def fraction(self, num: str, den: List[str]) -> str:
        if not den:
            return num
        return f"\\frac{{{num}}}{{{self.product(den)}}}"

    def indicator(self, cls: IndicatorClass) -> str:
        return f"\\chi_{{\\{{{self.var} \\bmod {cls.m} = {cls.j}\\}}}}"

    def attach(self, body: str, cls: IndicatorClass) -> str:
        return self.indicator(cls) if body == "1" else f"{body}\\,{self.indicator(cls)}"

    def sequence_term(self, t: int) -> str:
        return f"a({self.var})" if t == 0 else f"a({self.var}+{t})"


# -- JSON ------------------------------------------------------------------


def _rat_list(p: UniPoly) -> List[str]:
    return [format_rational(c) for c in p.coeffs]


def _monomial_json(mono: HypMonomial) -> dict:
    return {
        "constant": format_rational(mono.constant),
        "powers": [
            {
                "base": format_rational(a.base),
                "slope": format_rational(a.exponent.slope),
                "intercept": format_rational(a.exponent.intercept),
            }
            for a in mono.powers
        ],
        "factorials": [
            {
                "slope": format_rational(a.argument.slope),
                "intercept": format_rational(a.argument.intercept),
                "exp": a.exponent,
            }
            for a in mono.factorials
        ],
        "pochhammers": [
            {
                "param": format_rational(a.parameter),
                "slope": format_rational(a.argument.slope),
                "intercept": format_rational(a.argument.intercept),
                "exp": a.exponent,
            }
            for a in mono.pochhammers
        ],
        "ratnum": _rat_list(mono.ratfactor.num),
        "ratden": _rat_list(mono.ratfactor.den),
    }


def to_json_data(obj: Union[HTSExpr, RecOperator]) -> dict:
    """JSON-ready dict for an expression or an operator."""
    if isinstance(obj, RecOperator):
        return {"order": obj.order, "coeffs": [_rat_list(c) for c in obj.coeffs]}
    return {
        "components": [
            {
                "j": comp.cls.j,
                "m": comp.cls.m,
                "monomials": [_monomial_json(m) for m in comp.coefficient.monomials],
            }
            for comp in obj.components
        ]
    }


def _poly(values: List[str]) -> UniPoly:
    return UniPoly(to_rational(v) for v in values)


def _affine(entry: dict) -> AffineMap:
    return AffineMap(to_rational(entry["slope"]), to_rational(entry["intercept"]))


def _monomial_from_json(entry: dict) -> HypMonomial:
    return HypMonomial(
        to_rational(entry["constant"]),
        tuple(PowerAtom(to_rational(a["base"]), _affine(a)) for a in entry.get("powers", [])),
        tuple(FactorialAtom(_affine(a), int(a["exp"])) for a in entry.get("factorials", [])),
        tuple(
            PochhammerAtom(to_rational(a["param"]), _affine(a), int(a["exp"]))
            for a in entry.get("pochhammers", [])
        ),
        RatFun(_poly(entry.get("ratnum", ["1"])), _poly(entry.get("ratden", ["1"]))),
    )


def decode_json(data: Union[str, dict]) -> Union[HTSExpr, RecOperator]:
    """Rebuild an expression or an operator from its JSON rendering."""
    if isinstance(data, str):
        data = json.loads(data)
    if "coeffs" in data:
        coeffs = tuple(_poly(c) for c in data["coeffs"])
        if len(coeffs) != int(data.get("order", len(coeffs) - 1)) + 1:
            raise ValueError("operator order does not match its coefficient list")
        return RecOperator(coeffs)
    components = []
    for comp in data["components"]:
        monos = tuple(_monomial_from_json(m) for m in comp["monomials"])
        components.append(Component(HypCoefficient(monos), IndicatorClass(int(comp["j"]), int(comp["m"]))))
    return HTSExpr(tuple(components))


# -- entry point -----------------------------------------------------------


def render(obj: Union[HTSExpr, RecOperator], fmt: str = "text", var: str = "n") -> str:
    """
    Render an expression or a recurrence operator.

    Args:
        obj: HTSExpr or RecOperator
        fmt: "text", "latex" or "json"
        var: name of the index variable

    Returns:
        The rendered string.
    """
    if fmt == "json":
        return json.dumps(to_json_data(obj), separators=(",", ":"))
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    style = _LatexStyle(var) if fmt == "latex" else _Style(var)
    if isinstance(obj, RecOperator):
        return style.operator(obj)
    return style.expression(obj)


def render_value(value: Fraction, fmt: str = "text") -> str:
    if fmt == "latex":
        return _LatexStyle().rational(value)
    return format_rational(value)
