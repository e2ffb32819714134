# Exception hierarchy shared by the arithmetic core, the parser and the CLI

from typing import Optional


class HyperSeqError(Exception):
    """Base class for every error raised by hyperseq."""


class ArithmeticDomainError(HyperSeqError):
    """An exact-arithmetic precondition was violated (e.g. gcd(0, 0))."""


class DomainError(HyperSeqError):
    """A term was evaluated or validated outside of its support."""


class PoleError(DomainError):
    """A rational factor or an inverse Pochhammer symbol hit a zero divisor."""


class ParseError(HyperSeqError):
    """Syntax error in an expression or recurrence, with a 1-based position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class LoweringError(HyperSeqError):
    """A well-formed expression that has no hypergeometric-type lowering.

    kind is one of "non-affine", "divisor", "support" or "unsupported".
    """

    def __init__(self, message: str, kind: str = "unsupported", cause: Optional[Exception] = None):
        super().__init__(message)
        self.kind = kind
        self.cause = cause


class OrderBoundError(HyperSeqError):
    """A derived recurrence would exceed the requested maximal order."""

    def __init__(self, order: int, bound: int):
        super().__init__(f"recurrence order {order} exceeds the bound {bound}")
        self.order = order
        self.bound = bound
