"""The function f_p, its critical point t_p, the minimum m_p and the norm formula.

    f_p(t) = p t^(p-1) + (1-t)^p - t^p,   0 <= t <= 1/2.

For p > 2, f_p' changes sign exactly once on (0, 1/2) and f_p'' > 0 there,
so bisection on f_p' always converges.  The norm of C - I on l^p is

    1/(p-1)        for 1 < p <= 2,
    m_p^(-1/p)     for 2 < p < inf,
    2              for p = inf,

and the norm of C^T - I on l^p is p - 1 for p >= 2.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .exceptions import DomainError, NumericError
from .exponents import Exponent, dual_exponent, pow_even, spow

DELTA = 1e-12
MAX_ITER = 400


@dataclass(frozen=True)
class CriticalPointResult:
    """Outcome of :func:`solve_tp`.

    ``residual`` is |f_p'(t_p)|; ``r`` is 1/t_p, the decay exponent of the
    extremal family.
    """

    p: float
    t_p: float
    m_p: float
    residual: float
    iterations: int

    @property
    def r(self):
        return 1.0 / self.t_p

    @property
    def norm(self):
        return self.m_p ** (-1.0 / self.p)

    def to_dict(self):
        d = asdict(self)
        d["r"] = self.r
        return d


def _require(p, lower, strict, name):
    p = float(p)
    if math.isnan(p) or (p <= lower if strict else p < lower):
        op = ">" if strict else ">="
        raise DomainError(f"{name} requires p {op} {lower}, got {p!r}")
    return p


def f_p(t, p, extended=False):
    """Evaluate f_p(t) = p t^(p-1) + (1-t)^p - t^p.

    With ``extended=True`` the powers use E semantics on all of R
    (t^p even, t^(p-1) odd); otherwise t must lie in [0, 1].
    """
    p = _require(p, 2.0, False, "f_p")
    t = np.asarray(t, dtype=float)
    if not extended and np.any((t < 0) | (t > 1)):
        raise DomainError("t must lie in [0, 1]; pass extended=True for E semantics")
    out = p * spow(t, p - 1) + pow_even(1 - t, p) - pow_even(t, p)
    return out[()] if out.ndim == 0 else out


def f_p_prime(t, p, extended=False):
    """f_p'(t) = p((p-1) t^(p-2) - (1-t)^(p-1) - t^(p-1))."""
    p = _require(p, 2.0, True, "f_p_prime")
    t = np.asarray(t, dtype=float)
    if not extended and np.any((t < 0) | (t > 1)):
        raise DomainError("t must lie in [0, 1]; pass extended=True for E semantics")
    out = p * ((p - 1) * pow_even(t, p - 2) - spow(1 - t, p - 1) - spow(t, p - 1))
    return out[()] if out.ndim == 0 else out


def f_p_second(t, p):
    """f_p''(t) = p(p-1)((p-2) t^(p-3) + (1-t)^(p-2) - t^(p-2)) on (0, 1/2]."""
    p = _require(p, 2.0, True, "f_p_second")
    t = np.asarray(t, dtype=float)
    out = p * (p - 1) * ((p - 2) * spow(t, p - 3) + pow_even(1 - t, p - 2) - pow_even(t, p - 2))
    return out[()] if out.ndim == 0 else out


def _scaled_prime(t, p):
    # f_p'(t) / (p (1-t)^(p-1)), formed in log space so huge p cannot underflow
    lt, l1t = math.log(t), math.log1p(-t)
    a = math.exp(math.log(p - 1) + (p - 2) * lt - (p - 1) * l1t)
    b = math.exp((p - 1) * (lt - l1t))
    return a - 1.0 - b


def _f_p_logspace(t, p):
    lt, l1t = math.log(t), math.log1p(-t)
    inner = math.exp(math.log(p) + (p - 1) * lt - p * l1t) + 1.0 - math.exp(p * (lt - l1t))
    return math.exp(p * l1t) * inner


def solve_tp(p, tol=1e-13):
    """Locate the unique critical point t_p of f_p in (0, 1/2).

    Bisection on the sign of f_p' over [DELTA, 1/2 - DELTA], run until the
    bracket cannot shrink further, followed by one guarded Newton step.

    Raises
    ------
    DomainError
        If p <= 2 or tol is outside (0, 1e-10].
    NumericError
        If the final residual exceeds ``tol * p``.
    """
    p = _require(p, 2.0, True, "solve_tp")
    if math.isinf(p):
        raise DomainError("solve_tp requires finite p")
    if not 0 < tol <= 1e-10:
        raise DomainError(f"tol must lie in (0, 1e-10], got {tol!r}")
    lo, hi = DELTA, 0.5 - DELTA
    if not (_scaled_prime(lo, p) < 0 < _scaled_prime(hi, p)):
        raise NumericError(f"f_p' does not change sign on [{lo}, {hi}] for p={p}")
    it = 0
    while it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        it += 1
        if _scaled_prime(mid, p) < 0:
            lo = mid
        else:
            hi = mid
    t = lo if abs(_scaled_prime(lo, p)) <= abs(_scaled_prime(hi, p)) else hi
    res = abs(float(f_p_prime(t, p)))
    d2 = float(f_p_second(t, p))
    if d2 > 0:
        t_new = t - float(f_p_prime(t, p)) / d2
        if lo - 1e-15 <= t_new <= hi + 1e-15:
            res_new = abs(float(f_p_prime(t_new, p)))
            if res_new < res:
                t, res = t_new, res_new
        it += 1
    if res > tol * p:
        raise NumericError(f"residual {res:.3e} exceeds {tol * p:.3e} at p={p}")
    return CriticalPointResult(p=p, t_p=t, m_p=_f_p_logspace(t, p), residual=res, iterations=it)


def m_p(p):
    """Minimum of f_p over [0, 1/2]; equals 1 at p = 2."""
    p = _require(p, 2.0, False, "m_p")
    if p == 2.0:
        return 1.0
    return solve_tp(p).m_p


def norm_formula(p):
    """Exact operator norm of C - I on l^p for 1 < p <= inf.

    The 1/(p-1) branch is used at exactly p = 2, where both branches equal 1.
    Rational input on the first branch is evaluated exactly before rounding.
    """
    if isinstance(p, (str, Exponent)):
        e = Exponent.parse(p)
        p = e.exact if e.exact is not None else e.p
    if isinstance(p, Rational) and not isinstance(p, bool):
        q = Fraction(p)
        if q <= 1:
            raise DomainError(f"norm_formula requires p > 1, got {q}")
        if q <= 2:
            return float(1 / (q - 1))
        p = float(q)
    p = _require(p, 1.0, True, "norm_formula")
    if math.isinf(p):
        return 2.0
    if p <= 2.0:
        return 1.0 / (p - 1.0)
    return solve_tp(p).m_p ** (-1.0 / p)


def norm_formula_transpose(p):
    """Exact operator norm of C^T - I on l^p for 2 <= p < inf, namely p - 1."""
    if isinstance(p, (str, Exponent)):
        e = Exponent.parse(p)
        p = e.exact if e.exact is not None else e.p
    if isinstance(p, Rational) and not isinstance(p, bool):
        q = Fraction(p)
        if q < 2:
            raise DomainError(f"norm_formula_transpose requires p >= 2, got {q}")
        return float(q - 1)
    p = _require(p, 2.0, False, "norm_formula_transpose")
    if math.isinf(p):
        raise DomainError("norm_formula_transpose requires finite p")
    return p - 1.0


def transpose_norm(p):
    """Norm of C^T - I on l^p for any 1 < p < inf, via duality with C - I."""
    q = dual_exponent(p)
    return norm_formula(q)
