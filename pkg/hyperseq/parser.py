"""
Expression front-end: tokenizer, recursive-descent parser and lowering of the
syntax tree into hypergeometric-type normal form.

Grammar:

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' factor]
    atom   := NUMBER | NAME | call | '(' expr ')' | atom '!' | '-' atom
    call   := NAME '(' expr (',' expr)* ')'

Unary minus binds to an atom, so -2^n is (-2)^n and -n! is -(n!). '**' is
accepted for '^'.

Recurrences use the same grammar plus one '=' and calls a(n+t) of a single
sequence name.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from hyperseq.errors import DomainError, LoweringError, ParseError
from hyperseq.exactarith import ONE, X, AffineMap, RatFun, UniPoly
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
    hts_normalize,
    merge_monomials,
)
from hyperseq.product import Term, distribute_terms
from hyperseq.recurrence import RecOperator

logger = logging.getLogger(__name__)

FUNCTIONS: Dict[str, int] = {
    "factorial": 1,
    "pochhammer": 2,
    "binomial": 2,
    "mfoldInd": 3,
}


# -- syntax tree -----------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: object


@dataclass(frozen=True)
class FactorialOp:
    operand: object


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[object, ...]


@dataclass(frozen=True)
class Equation:
    lhs: object
    rhs: object


# -- tokenizer -------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^!(),=]))")
_ASSIGNMENT_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*\s*:=")


def tokenize(text: str, allow_equals: bool = False) -> List[Token]:
    """Split text into tokens; raises ParseError on an unknown character."""
    tokens: List[Token] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        line, column = _position(text, pos)
        if pos >= len(text):
            tokens.append(Token("eof", "", line, column))
            return tokens
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        number, name, op = match.groups()
        if op == "=" and not allow_equals:
            raise ParseError("unexpected '=' in an expression", line, column)
        start = match.start(1) if number else match.start(2) if name else match.start(3)
        line, column = _position(text, start)
        if number:
            tokens.append(Token("int", number, line, column))
        elif name:
            tokens.append(Token("name", name, line, column))
        else:
            tokens.append(Token("op", "^" if op == "**" else op, line, column))
        pos = match.end()


def _position(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


class Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, text: str, var: str = "n", recurrence: bool = False):
        self.var = var
        self.recurrence = recurrence
        self.tokens = tokenize(text, allow_equals=recurrence)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, text: str) -> bool:
        token = self.peek()
        if token.kind == "op" and token.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.kind != "op" or token.text != text:
            self.error(f"expected '{text}'", token)
        return self.advance()

    def error(self, message: str, token: Optional[Token] = None):
        token = token or self.peek()
        if token.kind == "eof":
            message = f"{message}: unexpected end of input"
        else:
            message = f"{message} near {token.text!r}"
        raise ParseError(message, token.line, token.column)

    def parse(self):
        node = self.expr()
        if self.recurrence and self.accept("="):
            node = Equation(node, self.expr())
        if self.peek().kind != "eof":
            self.error("unexpected token")
        return node

    def expr(self):
        node = self.term()
        while True:
            if self.accept("+"):
                node = BinOp("+", node, self.term())
            elif self.accept("-"):
                node = BinOp("-", node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            if self.accept("*"):
                node = BinOp("*", node, self.factor())
            elif self.accept("/"):
                right = self.factor()
                if _is_int_literal(node) and _is_int_literal(right) and right.value != 0:
                    node = Num(node.value / right.value)
                else:
                    node = BinOp("/", node, right)
            else:
                return node

    def factor(self):
        node = self.atom()
        if self.accept("^"):
            return Pow(node, self.factor())
        return node

    def atom(self):
        if self.accept("-"):
            return Neg(self.atom())
        token = self.peek()
        if token.kind == "int":
            self.advance()
            node = Num(Fraction(int(token.text)))
        elif token.kind == "name":
            self.advance()
            if self.accept("("):
                node = self.call(token)
            elif token.text == self.var:
                node = Var(token.text)
            else:
                self.error(f"unknown symbol {token.text!r}", token)
        elif self.accept("("):
            node = self.expr()
            self.expect(")")
        else:
            self.error("expected a number, a name or '('")
        while self.accept("!"):
            node = FactorialOp(node)
        return node

    def call(self, name: Token):
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        arity = FUNCTIONS.get(name.text)
        if arity is None:
            if self.recurrence and len(args) == 1:
                return Call(name.text, tuple(args))
            raise ParseError(f"unknown function {name.text!r}", name.line, name.column)
        if len(args) != arity:
            raise ParseError(
                f"{name.text} takes {arity} argument(s), got {len(args)}", name.line, name.column
            )
        return Call(name.text, tuple(args))


def _is_int_literal(node) -> bool:
    return isinstance(node, Num) and node.value.denominator == 1


def parse_expr(text: str, var: str = "n"):
    """Parse an expression into its syntax tree."""
    return Parser(text, var=var).parse()


# -- lowering --------------------------------------------------------------


def _collect(terms: List[Term]) -> List[Term]:
    """Merge terms sharing a class; zero terms vanish."""
    groups: Dict[IndicatorClass, List[HypMonomial]] = {}
    for mono, cls in terms:
        groups.setdefault(cls, []).append(mono)
    out: List[Term] = []
    for cls, monos in groups.items():
        out.extend((mono, cls) for mono in merge_monomials(monos))
    return out


def _scale(terms: List[Term], c: Fraction) -> List[Term]:
    return [
        (HypMonomial(m.constant * c, m.powers, m.factorials, m.pochhammers, m.ratfactor), cls)
        for m, cls in terms
    ]


def _monomial_power(mono: HypMonomial, k: int) -> HypMonomial:
    """mono ** k for k >= 0 by scaling the atom exponents."""
    return HypMonomial(
        mono.constant ** k,
        tuple(PowerAtom(a.base, a.exponent.scaled(k)) for a in mono.powers),
        tuple(FactorialAtom(a.argument, a.exponent * k) for a in mono.factorials),
        tuple(PochhammerAtom(a.parameter, a.argument, a.exponent * k) for a in mono.pochhammers),
        RatFun(mono.ratfactor.num ** k, mono.ratfactor.den ** k),
    )


def _power_by_squaring(terms: List[Term], k: int) -> List[Term]:
    result: List[Term] = [(HypMonomial.constant_term(1), ONE_CLASS)]
    while k:
        if k & 1:
            result = _collect(distribute_terms(result, terms))
        k >>= 1
        if k:
            terms = _collect(distribute_terms(terms, terms))
    return result


def _plain(terms: List[Term]) -> Optional[HypMonomial]:
    """The single class-free, atom-free monomial of terms, or None."""
    if not terms:
        return HypMonomial(Fraction(0))
    if len(terms) != 1:
        return None
    mono, cls = terms[0]
    if cls != ONE_CLASS or mono.has_atoms:
        return None
    return mono


def _as_constant(terms: List[Term]) -> Optional[Fraction]:
    mono = _plain(terms)
    if mono is None or not mono.ratfactor.is_constant:
        return None
    return mono.constant * mono.ratfactor.num.coefficient(0)


def _as_affine(terms: List[Term], what: str) -> AffineMap:
    mono = _plain(terms)
    if mono is None or not mono.ratfactor.is_polynomial or mono.ratfactor.num.degree > 1:
        raise LoweringError(f"{what} must be affine in the index variable", kind="non-affine")
    poly = mono.ratfactor.num.scale(mono.constant / mono.ratfactor.den.coefficient(0))
    return AffineMap(poly.coefficient(1), poly.coefficient(0))


def _int_literal(node, what: str) -> int:
    if not _is_int_literal(node):
        raise LoweringError(f"{what} must be an integer literal", kind="unsupported")
    return int(node.value)


class _Lowering:
    def __init__(self, var: str):
        self.var = var

    def lower(self, node) -> List[Term]:
        if isinstance(node, Num):
            return [] if node.value == 0 else [(HypMonomial.constant_term(node.value), ONE_CLASS)]
        if isinstance(node, Var):
            return [(HypMonomial.rational(RatFun(X)), ONE_CLASS)]
        if isinstance(node, Neg):
            return _scale(self.lower(node.operand), Fraction(-1))
        if isinstance(node, BinOp):
            return self.binop(node)
        if isinstance(node, Pow):
            return self.power(node)
        if isinstance(node, FactorialOp):
            arg = _as_affine(self.lower(node.operand), "factorial argument")
            return [(HypMonomial(Fraction(1), factorials=(FactorialAtom(arg, 1),)), ONE_CLASS)]
        if isinstance(node, Call):
            return self.call(node)
        raise LoweringError(f"cannot lower {type(node).__name__}", kind="unsupported")

    def binop(self, node: BinOp) -> List[Term]:
        left = self.lower(node.left)
        right = self.lower(node.right)
        if node.op == "+":
            return _collect(left + right)
        if node.op == "-":
            return _collect(left + _scale(right, Fraction(-1)))
        if node.op == "*":
            return _collect(distribute_terms(left, right))
        return _collect(distribute_terms(left, [(self.invert(right), ONE_CLASS)]))

    def invert(self, terms: List[Term]) -> HypMonomial:
        if not terms:
            raise LoweringError("division by zero", kind="divisor")
        if len(terms) != 1:
            raise LoweringError("divisor must be a single hypergeometric monomial", kind="divisor")
        mono, cls = terms[0]
        if cls != ONE_CLASS:
            raise LoweringError("divisor must not carry an indicator", kind="divisor")
        return mono.inverse()

    def power(self, node: Pow) -> List[Term]:
        base = self.lower(node.base)
        exponent = self.lower(node.exponent)
        k = _as_constant(exponent)
        c = _as_constant(base)
        if k is not None:
            if k.denominator != 1:
                raise LoweringError(f"non-integer constant exponent {k}", kind="unsupported")
            k = int(k)
            if c is not None:
                if c == 0 and k < 0:
                    raise LoweringError("division by zero", kind="divisor")
                value = c ** k
                return [(HypMonomial.constant_term(value), ONE_CLASS)] if value else []
            if k == 0:
                return [(HypMonomial.constant_term(1), ONE_CLASS)]
            if k < 0:
                base, k = [(self.invert(base), ONE_CLASS)], -k
            if len(base) == 1:
                mono, cls = base[0]
                return _collect([(_monomial_power(mono, k), cls)])
            return _power_by_squaring(base, k)
        if c is None:
            raise LoweringError("symbolic exponents need a rational base", kind="non-affine")
        if c == 0:
            raise LoweringError("0 raised to a symbolic exponent", kind="unsupported")
        affine = _as_affine(exponent, "exponent")
        return [(HypMonomial(Fraction(1), powers=(PowerAtom(c, affine),)), ONE_CLASS)]

    def call(self, node: Call) -> List[Term]:
        name, args = node.name, node.args
        if name == "factorial":
            arg = _as_affine(self.lower(args[0]), "factorial argument")
            return [(HypMonomial(Fraction(1), factorials=(FactorialAtom(arg, 1),)), ONE_CLASS)]
        if name == "pochhammer":
            x = _as_constant(self.lower(args[0]))
            if x is None:
                raise LoweringError("Pochhammer parameter must be a rational constant", kind="non-affine")
            arg = _as_affine(self.lower(args[1]), "Pochhammer length")
            atom = PochhammerAtom(x, arg, 1)
            return [(HypMonomial(Fraction(1), pochhammers=(atom,)), ONE_CLASS)]
        if name == "binomial":
            top = _as_affine(self.lower(args[0]), "binomial argument")
            bottom = _as_affine(self.lower(args[1]), "binomial argument")
            atoms = (FactorialAtom(top, 1), FactorialAtom(bottom, -1), FactorialAtom(top - bottom, -1))
            return [(HypMonomial(Fraction(1), factorials=atoms), ONE_CLASS)]
        if name == "mfoldInd":
            if args[0] != Var(self.var):
                raise LoweringError(f"mfoldInd takes the index variable {self.var} first", kind="unsupported")
            m = _int_literal(args[1], "mfoldInd modulus")
            j = _int_literal(args[2], "mfoldInd residue")
            if m == 0 and j == 0:
                return []
            try:
                cls = IndicatorClass(j, m)
            except DomainError as e:
                raise LoweringError(str(e), kind="unsupported", cause=e)
            return [(HypMonomial.constant_term(1), cls)]
        raise LoweringError(f"{name} is not allowed in a term", kind="unsupported")


def lower_expr(e, var: str = "n") -> HTSExpr:
    """
    Lower a syntax tree to a normalized HTSExpr, pointwise equal on N.

    Raises:
        LoweringError: non-affine arguments, bad divisors or a support
            violation on the final indicator classes.
    """
    try:
        terms = _Lowering(var).lower(e)
        groups: Dict[IndicatorClass, List[HypMonomial]] = {}
        for mono, cls in terms:
            groups.setdefault(cls, []).append(mono)
        components = tuple(Component(HypCoefficient(tuple(monos)), cls) for cls, monos in groups.items())
        return hts_normalize(HTSExpr(components))
    except DomainError as e:
        raise LoweringError(f"support violation: {e}", kind="support", cause=e)


def parse_hts(text: str, var: str = "n") -> HTSExpr:
    """parse_expr followed by lower_expr."""
    return lower_expr(parse_expr(text, var), var)


# -- recurrences -------------------------------------------------------------


class _Linearizer:
    """Collects sum_t c_t(n) * a(n+t) with None keying the inhomogeneous part."""

    def __init__(self, var: str):
        self.var = var
        self.sequence: Optional[str] = None

    def linear(self, node) -> Dict[Optional[int], UniPoly]:
        if isinstance(node, Num):
            return {None: UniPoly.constant(node.value)}
        if isinstance(node, Var):
            return {None: X}
        if isinstance(node, Neg):
            return {k: -v for k, v in self.linear(node.operand).items()}
        if isinstance(node, Call) and node.name not in FUNCTIONS:
            return {self.shift_of(node): ONE}
        if isinstance(node, BinOp):
            left, right = self.linear(node.left), self.linear(node.right)
            if node.op == "+":
                return _lin_add(left, right)
            if node.op == "-":
                return _lin_add(left, {k: -v for k, v in right.items()})
            if node.op == "*":
                if _is_pure(left):
                    return {k: v * left.get(None, UniPoly()) for k, v in right.items()}
                if _is_pure(right):
                    return {k: v * right.get(None, UniPoly()) for k, v in left.items()}
                raise LoweringError("recurrence is not linear in the sequence", kind="unsupported")
            divisor = right.get(None, UniPoly())
            if not _is_pure(right) or not divisor.is_constant or divisor.is_zero:
                raise LoweringError("recurrence coefficients may only be divided by constants", kind="divisor")
            return {k: v.scale(1 / divisor.leading) for k, v in left.items()}
        if isinstance(node, Pow):
            base, exponent = self.linear(node.base), self.linear(node.exponent)
            e = exponent.get(None, UniPoly())
            if not (_is_pure(base) and _is_pure(exponent) and e.is_constant):
                raise LoweringError("only polynomial powers are allowed in coefficients", kind="unsupported")
            k = e.coefficient(0)
            if k.denominator != 1 or k < 0:
                raise LoweringError("coefficient powers must be natural numbers", kind="unsupported")
            return {None: base.get(None, UniPoly()) ** int(k)}
        raise LoweringError("recurrence coefficients must be polynomials", kind="unsupported")

    def shift_of(self, node: Call) -> int:
        if self.sequence is None:
            self.sequence = node.name
        elif node.name != self.sequence:
            raise LoweringError(f"recurrence mixes sequences {self.sequence} and {node.name}", kind="unsupported")
        arg = self.linear(node.args[0])
        poly = arg.get(None, UniPoly())
        if not _is_pure(arg) or poly.degree != 1 or poly.coefficient(1) != 1:
            raise LoweringError(f"{node.name}(...) needs an argument {self.var}+t", kind="non-affine")
        t = poly.coefficient(0)
        if t.denominator != 1 or t < 0:
            raise LoweringError(f"shift {t} is not a natural number", kind="non-affine")
        return int(t)


def _is_pure(lin: Dict[Optional[int], UniPoly]) -> bool:
    return all(k is None or v.is_zero for k, v in lin.items())


def _lin_add(a: Dict[Optional[int], UniPoly], b: Dict[Optional[int], UniPoly]) -> Dict[Optional[int], UniPoly]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, UniPoly()) + v
    return out


def parse_recurrence(text: str, var: str = "n") -> RecOperator:
    """
    Parse a linear recurrence such as "(n-6)*a(n+6) - a(n) = 0".

    Coefficients are kept exactly as written (no content removal), so the
    operator verifies the same identity the text states. A leading "RE :="
    style assignment and a trailing ":" or ";" are ignored.
    """
    text = _ASSIGNMENT_RE.sub("", text.strip()).rstrip(":;").strip()
    node = Parser(text, var=var, recurrence=True).parse()
    linearizer = _Linearizer(var)
    if isinstance(node, Equation):
        lin = _lin_add(linearizer.linear(node.lhs), {k: -v for k, v in linearizer.linear(node.rhs).items()})
    else:
        lin = linearizer.linear(node)
    inhomogeneous = lin.pop(None, UniPoly())
    if not inhomogeneous.is_zero:
        raise LoweringError("recurrence has a term without the sequence", kind="unsupported")
    shifts = [t for t, c in lin.items() if not c.is_zero]
    if not shifts:
        raise LoweringError("recurrence does not mention the sequence", kind="unsupported")
    coeffs = [lin.get(t, UniPoly()) for t in range(max(shifts) + 1)]
    return RecOperator(tuple(coeffs))
