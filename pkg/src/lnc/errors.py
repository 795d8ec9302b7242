"""Typed errors and explicit resource budgets.

Budgets bound the enumeration sizes of the exhaustive engines.  Exceeding
one raises `BudgetExceeded` (a typed refusal, never silent truncation);
callers that catch it are expected to fall back to formula- or
certificate-level evidence rather than pretend the exhaustive check ran.
"""

from __future__ import annotations

from dataclasses import dataclass


class LncError(Exception):
    """Base for package errors."""


class InputError(LncError):
    """Invalid parameters or malformed input data."""


class BudgetExceeded(LncError):
    """An enumeration or search would exceed its configured budget."""

    def __init__(self, what: str, needed, budget):
        super().__init__(f"{what}: needs {needed}, budget {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class Budgets:
    """Default resource caps for the enumeration engines.

    enumeration_bits: full GL(L, p) scans allowed while L*L*log2(p) stays
        under this many bits.
    receiver_subsets: candidate layer-4 subsets when instantiating a
        five-layer network.
    product_choices: product combinations in the matrix condition checkers.
    scalar_tuples: canonical tuples in the exhaustive scalar code search.
    factor_ms: time slice for integer factorization attempts.
    """

    enumeration_bits: float = 25.0
    receiver_subsets: int = 10**7
    product_choices: int = 2**24
    scalar_tuples: int = 2**24
    factor_ms: int = 5000


DEFAULT_BUDGETS = Budgets()
