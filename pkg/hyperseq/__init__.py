"""
hyperseq - exact arithmetic on hypergeometric-type sequences.

Evaluate, normalize, multiply and compare finite sums of interlaced
hypergeometric terms, and derive linear recurrences with polynomial
coefficients that annihilate them.
"""

from hyperseq.errors import (
    ArithmeticDomainError,
    DomainError,
    HyperSeqError,
    LoweringError,
    OrderBoundError,
    ParseError,
    PoleError,
)
from hyperseq.hyperterm import HTSExpr, IndicatorClass, hts_add, hts_eval, hts_normalize, hts_scale, hts_shift
from hyperseq.parser import lower_expr, parse_expr, parse_hts, parse_recurrence
from hyperseq.product import hts_product
from hyperseq.recurrence import RecOperator, hts_equal, hts_is_zero, hts_to_recurrence, rec_verify
from hyperseq.render import decode_json, render

__version__ = "1.0.0"

__all__ = [
    "ArithmeticDomainError",
    "DomainError",
    "HTSExpr",
    "HyperSeqError",
    "IndicatorClass",
    "LoweringError",
    "OrderBoundError",
    "ParseError",
    "PoleError",
    "RecOperator",
    "decode_json",
    "hts_add",
    "hts_equal",
    "hts_eval",
    "hts_is_zero",
    "hts_normalize",
    "hts_product",
    "hts_scale",
    "hts_shift",
    "hts_to_recurrence",
    "lower_expr",
    "parse_expr",
    "parse_hts",
    "parse_recurrence",
    "rec_verify",
    "render",
]
