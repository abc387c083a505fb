"""Exact p-adic valuations.

Valuations are either exact rationals (``fractions.Fraction``) or the
distinguished infinite value ``INF``.  Infinity is a tagged variant of
:class:`Valuation`, never a float sentinel, so arithmetic and comparisons
stay total and exact: ``INF + v == INF``, ``INF > v`` for every finite
``v``, and ``0 * INF`` is rejected rather than guessed at.

The normalization is v_p(p) = 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


class Valuation:
    """An exact valuation: a rational number or positive infinity.

    Instances are immutable.  Construct finite values with ``Valuation(q)``
    and use the module constant :data:`INF` for the infinite one.

    Examples
    --------
    >>> Valuation(3) + Valuation(Fraction(1, 2))
    Valuation(7/2)
    >>> min(INF, Valuation(5))
    Valuation(5)
    >>> INF.is_infinite
    True
    """

    __slots__ = ("_value",)

    def __init__(self, value: Union[Rational, None] = None, *, _infinite: bool = False):
        if _infinite:
            self._value = None
        else:
            if value is None:
                raise TypeError("finite Valuation requires a rational value")
            self._value = Fraction(value)

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def value(self) -> Fraction:
        """The finite rational value; raises on INF."""
        if self._value is None:
            raise ValueError("infinite valuation has no finite value")
        return self._value

    def __add__(self, other: "Valuation") -> "Valuation":
        other = _coerce(other)
        if self._value is None or other._value is None:
            return INF
        return Valuation(self._value + other._value)

    __radd__ = __add__

    def __mul__(self, scalar: Rational) -> "Valuation":
        # Scalar multiple by a positive rational; 0 * INF is undefined.
        s = Fraction(scalar)
        if self._value is None:
            if s <= 0:
                raise ValueError("nonpositive multiple of an infinite valuation")
            return INF
        return Valuation(self._value * s)

    __rmul__ = __mul__

    def _key(self):
        # Order key: finite values by magnitude, INF above everything.
        return (1,) if self._value is None else (0, self._value)

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        return self._key() < _coerce(other)._key()

    def __le__(self, other) -> bool:
        return self._key() <= _coerce(other)._key()

    def __gt__(self, other) -> bool:
        return self._key() > _coerce(other)._key()

    def __ge__(self, other) -> bool:
        return self._key() >= _coerce(other)._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "INF" if self._value is None else f"Valuation({self._value})"


def _coerce(x) -> Valuation:
    if isinstance(x, Valuation):
        return x
    if isinstance(x, (int, Fraction)):
        return Valuation(x)
    raise TypeError(f"cannot interpret {x!r} as a Valuation")


#: The infinite valuation (valuation of 0).
INF = Valuation(_infinite=True)


def vp_int(n: int, p: int) -> Valuation:
    """p-adic valuation of an integer, INF at 0.

    Parameters
    ----------
    n : int
    p : int
        A prime (primality is the caller's responsibility at this level).

    Examples
    --------
    >>> vp_int(98, 7)
    Valuation(2)
    >>> vp_int(0, 7)
    INF
    """
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    if n == 0:
        return INF
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return Valuation(e)


def vp_int_raw(n: int, p: int) -> int:
    """Like :func:`vp_int` for nonzero n, returning a plain int (hot path)."""
    if n == 0:
        raise ValueError("vp_int_raw requires nonzero n")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def weight_distance(k1: int, k2: int, p: int) -> Valuation:
    """Valuation of the difference of the weight-space points of k1 and k2.

    For weights in a fixed congruence class mod p-1 this is
    1 + v_p(k1 - k2); equal weights give INF.  The identity
    v_p(k1 - k2) = v_p((k1 - k_eps)/(p-1) - (k2 - k_eps)/(p-1)) holds
    because p does not divide p - 1, so callers may pass either the
    weights themselves or their bullet indices scaled back up.

    Examples
    --------
    >>> weight_distance(24, 66, 7)
    Valuation(2)
    >>> weight_distance(24, 24, 7)
    INF
    """
    if k1 == k2:
        return INF
    return Valuation(1 + vp_int_raw(k1 - k2, p))


def weight_distance_raw(k1: int, k2: int, p: int) -> int:
    """Integer weight distance for k1 != k2 (hot path)."""
    return 1 + vp_int_raw(k1 - k2, p)


def format_rational(x) -> str:
    """Canonical string for a rational or Valuation: "num/den" in lowest
    terms, bare "num" when the denominator is 1, "inf" for INF.

    Examples
    --------
    >>> format_rational(Fraction(22, 4))
    '11/2'
    >>> format_rational(Valuation(3))
    '3'
    >>> format_rational(INF)
    'inf'
    """
    if isinstance(x, Valuation):
        if x.is_infinite:
            return "inf"
        x = x.value
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational` for finite values ("3", "11/2")."""
    return Fraction(text.strip())
