"""Exponent arithmetic: validation, duality, the set E and signed real powers.

E is the set of rationals 2i/(2j+1) lying in (2, inf).  For p in E the map
t -> t**p extends to all of R as an even, non-negative, C^2 function and
t -> t**(p-1) as an odd one.  Floating point code cannot decide membership
in E, so the power helpers below accept any real exponent and apply the same
semantics (|t|**p for even-type powers, sign(t)*|t|**q for odd-type powers);
membership is only enforced where a claim is specific to E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

import numpy as np

from .exceptions import DomainError

INF = math.inf


def _as_fraction(num, den=1):
    if den == 0:
        raise DomainError("zero denominator")
    try:
        return Fraction(num, den)
    except TypeError as exc:
        raise DomainError(f"not a rational: {num!r}/{den!r}") from exc


@dataclass(frozen=True)
class ERational:
    """An element of E stored exactly in lowest terms.

    Construction fails with :class:`DomainError` unless ``num/den > 2``
    with an even numerator and odd denominator after reduction.
    """

    num: int
    den: int = 1

    def __post_init__(self):
        q = _as_fraction(self.num, self.den)
        if not _in_E(q):
            raise DomainError(f"{q} is not of the form 2i/(2j+1) > 2")
        object.__setattr__(self, "num", q.numerator)
        object.__setattr__(self, "den", q.denominator)

    @classmethod
    def parse(cls, text):
        q = parse_rational(text)
        return cls(q.numerator, q.denominator)

    @property
    def fraction(self):
        return Fraction(self.num, self.den)

    @property
    def value(self):
        return self.num / self.den

    def __float__(self):
        return self.value

    def __str__(self):
        return f"{self.num}/{self.den}" if self.den != 1 else str(self.num)


@dataclass(frozen=True)
class Exponent:
    """A validated exponent ``p`` in (1, inf] together with its dual.

    ``exact`` keeps the rational form when the exponent was given as one,
    so that E-gated claims can be checked without floating point guesswork.
    Infinity is stored as ``math.inf``.
    """

    p: float
    exact: Fraction | None = None

    def __post_init__(self):
        if math.isnan(self.p) or self.p <= 1:
            raise DomainError(f"exponent must satisfy p > 1, got {self.p!r}")

    @classmethod
    def parse(cls, value):
        """Build from a float, a Fraction, ``"a/b"``, a decimal string or ``"inf"``."""
        if isinstance(value, Exponent):
            return value
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("inf", "infinity", "oo", "∞"):
                return cls(INF)
            q = parse_rational(text)
            return cls(float(q), q)
        if isinstance(value, Rational):
            q = Fraction(value)
            return cls(float(q), q)
        if isinstance(value, Real):
            return cls(float(value))
        raise DomainError(f"cannot interpret {value!r} as an exponent")

    @property
    def is_infinite(self):
        return math.isinf(self.p)

    @property
    def dual(self):
        if self.is_infinite:
            return 1.0
        if self.exact is not None:
            return float(self.exact / (self.exact - 1))
        return self.p / (self.p - 1.0)

    def in_E(self):
        return self.exact is not None and _in_E(self.exact)

    def __float__(self):
        return self.p

    def __str__(self):
        if self.is_infinite:
            return "inf"
        if self.exact is not None:
            return str(self.exact)
        return repr(self.p)


def parse_rational(text):
    """Parse ``"a/b"``, ``"a"`` or a finite decimal literal into a Fraction."""
    if isinstance(text, Fraction):
        return text
    s = str(text).strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return _as_fraction(int(num), int(den))
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {text!r} as a rational") from exc


def _in_E(q):
    return q > 2 and q.numerator % 2 == 0 and q.denominator % 2 == 1


def dual_exponent(p):
    """Return p' with 1/p + 1/p' = 1 (1 for p = inf).

    Rational input yields an exact Fraction; float input a float.
    """
    if isinstance(p, Exponent):
        return p.dual
    if isinstance(p, Rational) and not isinstance(p, bool):
        q = Fraction(p)
        if q <= 1:
            raise DomainError(f"dual exponent needs p > 1, got {q}")
        return q / (q - 1)
    p = float(p)
    if math.isnan(p) or p <= 1:
        raise DomainError(f"dual exponent needs p > 1, got {p!r}")
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def is_in_E(num, den=1):
    """True iff num/den equals 2i/(2j+1) for integers i, j and exceeds 2."""
    if isinstance(num, Fraction) and den == 1:
        return _in_E(num)
    if isinstance(num, str):
        return _in_E(parse_rational(num))
    return _in_E(_as_fraction(num, den))


def as_E(p):
    """Coerce ``p`` to an :class:`ERational`, raising DomainError otherwise."""
    if isinstance(p, ERational):
        return p
    if isinstance(p, Exponent):
        if p.exact is None:
            raise DomainError(f"{p} has no exact rational form; E-membership is undecidable")
        return ERational(p.exact.numerator, p.exact.denominator)
    if isinstance(p, str):
        return ERational.parse(p)
    if isinstance(p, Rational):
        q = Fraction(p)
        return ERational(q.numerator, q.denominator)
    raise DomainError(f"{p!r} is not an exact rational; E-membership is undecidable")


def _float_exponent(p):
    return float(p.value) if isinstance(p, ERational) else float(p)


def pow_even(t, p):
    """t**p under E semantics, i.e. |t|**p."""
    p = _float_exponent(p)
    return np.abs(t) ** p


def spow(t, q):
    """Odd-type real power sign(t)*|t|**q, the value of t**q when q = odd/odd."""
    q = _float_exponent(q)
    return np.sign(t) * np.abs(t) ** q


def dpow_even(t, p):
    """Derivative of :func:`pow_even`: p*sign(t)*|t|**(p-1)."""
    p = _float_exponent(p)
    return p * spow(t, p - 1.0)
