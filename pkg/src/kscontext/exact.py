"""Exact rational helpers.

Core modules never use ``/`` directly; the only true division lives in
:func:`qdiv`, which always produces a :class:`~fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Fraction", "qdiv", "to_fraction", "fraction_str", "is_exact"]


def qdiv(a, b) -> Fraction:
    return Fraction(a) / Fraction(b)


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string. Floats and bools are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if any(ch in s for ch in ".eE"):
            raise ValueError(f"decimal literal {x!r} refused; write it as p/q")
        return Fraction(s)
    raise TypeError(f"inexact value {x!r} of type {type(x).__name__}")


def fraction_str(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)
