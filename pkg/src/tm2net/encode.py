"""Exact Godel encoding of configurations onto the unit square.

The two halves of a configuration become radix fractions: the right half
``beta`` is read as base-``n_symbols`` digits, the left half ``alpha`` as
one base-``n_states`` digit (the state) followed by base-``n_symbols``
digits.  Because the blank enumerates to 0, every finitely inhabited tape
encodes to a terminating expansion, and everything stays an exact
``Fraction``: decoding is the literal inverse and round trips are equality,
not approximation.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, NamedTuple

from .machine import Config, TuringMachine

Rational = Fraction

DIGIT_BOUND_ENV = "TM2NET_DIGIT_BOUND"
DIGIT_BOUND_FACTOR = 64


class EncodingError(ValueError):
    """Base class for encode/decode errors."""


class DigitRangeError(EncodingError):
    """A digit or value outside the valid radix range."""


class NonTerminatingExpansionError(EncodingError):
    """A value whose radix expansion does not terminate within the bound."""


class Point(NamedTuple):
    """A configuration encoded as a point of the unit square."""

    x: Fraction
    y: Fraction


def rat_str(value) -> str:
    """Serialize exactly as ``num/den`` (the only wire format for rationals)."""
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise EncodingError(f"not a rational: {text!r}") from exc


def digit_bound(denominator: int) -> int:
    """Max digits extracted before an expansion is declared non-terminating.

    Defaults to 64 times the bit length of the denominator; the
    ``TM2NET_DIGIT_BOUND`` environment variable overrides it outright.
    """
    env = os.environ.get(DIGIT_BOUND_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise EncodingError(f"{DIGIT_BOUND_ENV} must be an integer") from exc
    return DIGIT_BOUND_FACTOR * max(1, denominator.bit_length())


def godel_value(digits: Iterable[int], base: int) -> Fraction:
    """Radix fraction of a digit sequence, most significant first."""
    value = Fraction(0)
    for d in reversed(list(digits)):
        if not 0 <= d < base:
            raise DigitRangeError(f"digit {d} out of range for base {base}")
        value = (value + d) / base
    return value


def _digits(value: Fraction, base: int, bound: int | None) -> list[int]:
    """Greedy digit extraction; inverse of ``godel_value`` on [0, 1)."""
    if not 0 <= value < 1:
        raise DigitRangeError(f"value {value} outside [0, 1)")
    limit = bound if bound is not None else digit_bound(value.denominator)
    digits = []
    r = value
    while r:
        if len(digits) >= limit:
            raise NonTerminatingExpansionError(
                f"no terminating base-{base} expansion within {limit} digits"
            )
        r *= base
        d = int(r)
        digits.append(d)
        r -= d
    return digits


def encode_left(m: TuringMachine, alpha: Iterable[str]) -> Fraction:
    """Godel value of the reversed left half (state digit, then tape digits)."""
    alpha = tuple(alpha)
    tail = godel_value([m.symbol_index(s) for s in alpha[1:]], m.n_symbols)
    return (m.state_index(alpha[0]) + tail) / m.n_states


def encode_right(m: TuringMachine, beta: Iterable[str]) -> Fraction:
    """Godel value of the right half (tape digits only)."""
    return godel_value([m.symbol_index(s) for s in beta], m.n_symbols)


def encode_config(m: TuringMachine, c: Config) -> Point:
    return Point(encode_left(m, c.alpha), encode_right(m, c.beta))


def decode_left(m: TuringMachine, x: Fraction, bound: int | None = None) -> tuple[str, ...]:
    """Recover the canonical left half from its Godel value."""
    if not 0 <= x < 1:
        raise DigitRangeError(f"value {x} outside [0, 1)")
    scaled = x * m.n_states
    qi = int(scaled)
    tail = _digits(scaled - qi, m.n_symbols, bound)
    return (m.states[qi],) + tuple(m.tape_symbols[d] for d in tail)


def decode_right(m: TuringMachine, y: Fraction, bound: int | None = None) -> tuple[str, ...]:
    """Recover the canonical right half from its Godel value."""
    return tuple(m.tape_symbols[d] for d in _digits(y, m.n_symbols, bound))


def decode_point(m: TuringMachine, pt: Point, bound: int | None = None) -> Config:
    return Config(decode_left(m, pt.x, bound), decode_right(m, pt.y, bound))


def affine_substitute(v: Fraction, position: int, old_digit: int,
                      new_digit: int, base: int) -> Fraction:
    """Godel value after replacing the digit at ``position`` (1-based)."""
    return v + Fraction(new_digit - old_digit, base ** position)


def affine_shift_left(v: Fraction, first_digit: int, base: int) -> Fraction:
    """Godel value after dropping the leading digit (which must be given)."""
    return v * base - first_digit


def affine_shift_right(v: Fraction, new_digit: int, base: int) -> Fraction:
    """Godel value after prepending a digit."""
    return (v + new_digit) / base
