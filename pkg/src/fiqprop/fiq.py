"""Propensities and finite-information quantities (FIQs).

A :class:`Fiq` is a list of binary-digit propensities ``q_1 .. q_L`` after the
radix point. Every digit past ``L`` has propensity exactly 1/2 and so carries
no information; total information is therefore always finite.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .rng import ExactSampler

DEFAULT_MAX_LENGTH = 4096

HALF = Fraction(1, 2)


class ResourceLimitError(RuntimeError):
    """Explicit digit storage would exceed the configured maximum."""


class FiqParseError(ValueError):
    pass


class Propensity(Fraction):
    """Exact rational in [0, 1]."""

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        if isinstance(numerator, float) or isinstance(denominator, float):
            raise TypeError("propensities are exact; pass ints, Fractions or 'a/b' strings")
        self = super().__new__(cls, numerator, denominator)
        if not 0 <= self <= 1:
            raise ValueError(f"propensity {self} outside [0, 1]")
        return self

    def is_determined(self) -> bool:
        return self.numerator == 0 or self.numerator == self.denominator

    def __repr__(self):
        return f"Propensity({self.numerator}, {self.denominator})"


def as_propensity(q) -> Propensity:
    return q if isinstance(q, Propensity) else Propensity(q)


P0 = Propensity(0)
P1 = Propensity(1)
PHALF = Propensity(1, 2)


def binary_entropy(q) -> float:
    """Binary entropy in bits, with 0*lg(0) = 0."""
    q = as_propensity(q)
    if q.is_determined():
        return 0.0
    p1 = float(q)
    p0 = float(1 - q)  # complement computed exactly before rounding
    return -p1 * math.log2(p1) - p0 * math.log2(p0)


def info_content(q) -> float:
    """Information carried by one digit: ``1 - H(q)`` bits."""
    return 1.0 - binary_entropy(q)


@dataclass(frozen=True)
class DeterminedInterval:
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, value) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True, init=False)
class Fiq:
    """Finite-information quantity in canonical form.

    ``digits[0]`` is the propensity of the most significant bit (index j=1).
    Trailing explicit 1/2 digits are trimmed, so equality is semantic.
    """

    digits: tuple

    def __init__(self, digits: Iterable = ()):
        ds = [as_propensity(q) for q in digits]
        while ds and ds[-1] == HALF:
            ds.pop()
        object.__setattr__(self, "digits", tuple(ds))

    @classmethod
    def _trusted(cls, digits: tuple) -> "Fiq":
        """Wrap an already canonical tuple of Propensity (e.g. a slice of one)."""
        self = object.__new__(cls)
        object.__setattr__(self, "digits", digits)
        return self

    @classmethod
    def parse(cls, text: str) -> "Fiq":
        return parse_fiq(text)

    def __len__(self):
        return len(self.digits)

    def digit(self, j: int) -> Propensity:
        """Propensity of digit ``j`` (1-based); the implicit tail gives 1/2."""
        if j < 1:
            raise IndexError("digit indices start at 1")
        return self.digits[j - 1] if j <= len(self.digits) else PHALF

    def with_digit(self, j: int, q, max_length: int = DEFAULT_MAX_LENGTH) -> "Fiq":
        if j < 1:
            raise IndexError("digit indices start at 1")
        if j > max_length:
            raise ResourceLimitError(f"digit index {j} exceeds max explicit length {max_length}")
        ds = list(self.digits)
        if j > len(ds):
            ds.extend([PHALF] * (j - len(ds)))
        ds[j - 1] = as_propensity(q)
        return Fiq(ds)

    def __str__(self):
        return format_fiq(self)

    def __repr__(self):
        return f"Fiq('{format_fiq(self)}')"


def fiq_total_information(x: Fiq) -> float:
    return math.fsum(info_content(q) for q in x.digits)


def determined_prefix(x: Fiq) -> tuple[str, int]:
    """Leading run of determined digits as a bit string, and its length."""
    bits = []
    for q in x.digits:
        if not q.is_determined():
            break
        bits.append("1" if q == 1 else "0")
    return "".join(bits), len(bits)


def fiq_interval(x: Fiq) -> DeterminedInterval:
    bits, n = determined_prefix(x)
    lower = Fraction(int(bits, 2) if bits else 0, 2**n)
    return DeterminedInterval(lower, lower + Fraction(1, 2**n))


def actualize_digit(x: Fiq, j: int, rng: ExactSampler,
                    max_length: int = DEFAULT_MAX_LENGTH) -> tuple[Fiq, int]:
    """Resolve digit ``j`` to 0 or 1 with probability given by its propensity."""
    if j < 1:
        raise IndexError("digit indices start at 1")
    if j > max_length:
        raise ResourceLimitError(f"digit index {j} exceeds max explicit length {max_length}")
    q = x.digit(j)
    if q.is_determined():
        return x, int(q)
    bit = 1 if rng.bernoulli(q) else 0
    return x.with_digit(j, bit, max_length), bit


# text format: "0." then "0"/"1" for determined digits and "(a/b)" otherwise

_TOKEN = re.compile(r"[01]|\((\s*\d+\s*/\s*\d+\s*|\s*[01]\s*)\)")


def format_fiq(x: Fiq) -> str:
    if not x.digits:
        return "0.(1/2)"
    out = ["0."]
    for q in x.digits:
        if q.is_determined():
            out.append(str(q.numerator))
        else:
            out.append(f"({q.numerator}/{q.denominator})")
    return "".join(out)


def parse_fiq(text: str) -> Fiq:
    s = text.strip()
    if not s.startswith("0."):
        raise FiqParseError(f"FIQ text must start with '0.': {text!r}")
    pos, digits = 2, []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise FiqParseError(f"bad FIQ token at position {pos} in {text!r}")
        tok = m.group(0)
        try:
            digits.append(Propensity(tok.strip("()").replace(" ", "")))
        except (ValueError, ZeroDivisionError) as exc:
            raise FiqParseError(f"bad propensity {tok!r} in {text!r}: {exc}") from None
        pos = m.end()
    return Fiq(digits)
