"""Invariant means of two-variable mean-type mappings."""

from ._invmean import (
    Error,
    Expr,
    Pair,
    ParseError,
    bo,
    check_two_limit_like,
    invariance_residual,
    lower_upper,
    orbit,
    parse,
    transfinite,
)

__all__ = [
    "Error",
    "Expr",
    "Pair",
    "ParseError",
    "bo",
    "check_two_limit_like",
    "invariance_residual",
    "lower_upper",
    "orbit",
    "parse",
    "transfinite",
]
