"""Grid checks of the scalar inequalities behind the norm formulas.

Each ``check_*`` function evaluates one inequality at one point and returns
its margin (left side minus right side, so ``>= 0`` means it holds).  The
``sweep_*`` functions evaluate a check on a dense grid, refined around the
analytic critical points, and summarize the result as a :class:`CheckReport`.
Grids stand in for interval arithmetic; they are not proofs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DomainError
from .exponents import as_E, pow_even, spow
from .minimizer import f_p, f_p_prime, solve_tp
from .operators import (
    adjointness_defect,
    check_mean_identity,
    check_telescoping,
    check_transpose_identity,
)

SLACK = 1e-12
T_MAX = 50.0
GRID_POINTS = 100_000
DEFAULT_E = ("12/5", "8/3", "4", "10/3", "6", "22/3")
SUITES = ("lemma1", "lemma2", "mvt", "tangent", "logpiece", "identities")


@dataclass
class CheckReport:
    """Worst case of one inequality over a grid.

    ``worst_margin`` is LHS - RHS at the grid point where the scaled margin
    (LHS - RHS) / scale is smallest; ``worst_point`` is that point.
    """

    name: str
    p: float
    grid_size: int
    worst_margin: float
    worst_point: float
    passed: bool

    FIELDS = ("name", "p", "grid_size", "worst_margin", "worst_point", "passed")

    def to_dict(self):
        return asdict(self)


def _report(name, p, points, margins, scales, slack=SLACK):
    points = np.asarray(points, dtype=float).reshape(-1)
    margins = np.asarray(margins, dtype=float).reshape(-1)
    scales = np.broadcast_to(np.asarray(scales, dtype=float), margins.shape)
    if points.size < 2:
        raise DomainError("a check grid needs at least two points")
    rel = margins / scales
    i = int(np.argmin(rel))
    passed = bool(np.all(np.isfinite(margins)) and np.all(margins >= -slack * scales))
    return CheckReport(name, float(p), int(points.size), float(margins[i]), float(points[i]), passed)


# --- mean value sandwich ---------------------------------------------------


def check_mvt(p, a, b):
    """Margins of  p a^(p-1)(b-a) <= b^p - a^p <= p b^(p-1)(b-a)  for p in E.

    Returns ``(lower, upper)``: the gap under the middle term and over it.
    """
    p = as_E(p)
    q = p.value
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid = pow_even(b, q) - pow_even(a, q)
    lower = mid - q * spow(a, q - 1) * (b - a)
    upper = q * spow(b, q - 1) * (b - a) - mid
    return lower, upper


def sweep_mvt(p, n_pairs=10_000, bound=20.0, seed=0x5EED):
    p = as_E(p)
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(-bound, bound, size=(2, n_pairs))
    lower, upper = check_mvt(p, a, b)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b))) ** p.value
    lo = _report("mvt_lower", p.value, a, lower, scale)
    hi = _report("mvt_upper", p.value, b, upper, scale)
    return [lo, hi]


# --- the polynomial-type lower bound with equality at t = 1/(p-1) -----------


def lemma1_lhs(p, t):
    q = float(p)
    t = np.asarray(t, dtype=float)
    return (q - 1) * q ** (q - 2) * pow_even(t, q) + pow_even(t + 1, q) - q * spow(t + 1, q - 1) * t


def lemma1_rhs(p):
    q = float(p)
    return math.exp((q - 2) * math.log(q) + (1 - q) * math.log(q - 1))


def check_lemma1(p, t):
    """(p-1)p^(p-2) t^p + (t+1)^p - p (t+1)^(p-1) t  minus  p^(p-2)(p-1)^(1-p)."""
    p = as_E(p)
    return lemma1_lhs(p.value, t) - lemma1_rhs(p.value)


def check_lemma1_critical_values(p):
    """The three candidate minima 1, p^(p-2)(p-1)^(1-p), p^(p-2)(2p-1)(p+1)^(1-p).

    Accepts real p >= 2 (at p = 2 all three equal 1).  Raises
    :class:`AssertionError` if the middle value is not the smallest.
    """
    p = float(p)
    if p < 2:
        raise DomainError(f"critical values require p >= 2, got {p}")
    lp = math.log(p)
    second = math.exp((p - 2) * lp + (1 - p) * math.log(p - 1))
    third = math.exp((p - 2) * lp + math.log(2 * p - 1) + (1 - p) * math.log(p + 1))
    vals = (1.0, second, third)
    tol = SLACK * max(vals)
    if not (second <= 1.0 + tol and second <= third + tol):
        raise AssertionError(f"middle critical value is not the smallest at p={p}: {vals}")
    return vals


def lemma1_grid(p, n_points=GRID_POINTS, t_max=T_MAX, refine=2001, width=1e-3):
    q = float(p)
    crit = (0.0, 1.0 / (q - 1), -1.0 / (q + 1))
    base = np.linspace(-t_max, t_max, n_points)
    extra = [c + np.linspace(-width, width, refine) for c in crit]
    return np.unique(np.concatenate([base, *extra, np.asarray(crit)]))


def sweep_lemma1(p, n_points=GRID_POINTS, t_max=T_MAX):
    """The lower bound over a grid, plus the equality check at t = 1/(p-1)."""
    p = as_E(p)
    t = lemma1_grid(p.value, n_points, t_max)
    lhs = lemma1_lhs(p.value, t)
    rhs = lemma1_rhs(p.value)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), rhs))
    main = _report("lemma1", p.value, t, lhs - rhs, scale)
    t_eq = 1.0 / (p.value - 1)
    eq = abs(float(check_lemma1(p, t_eq))) / max(1.0, rhs)
    equality = CheckReport("lemma1_equality", p.value, 2, -eq, t_eq, eq <= 1e-10)
    return [main, equality]


def g_critical(x):
    """g(x) = x^(x-2) (x-1)^(1-x) for x >= 2, in log space; g(2) = 1."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 2):
        raise DomainError("g is only needed on x >= 2")
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = (x - 2) * np.log(x) + (1 - x) * np.log(x - 1)
    lg = np.where(x == 2, 0.0, lg)
    out = np.exp(lg)
    return out[()] if out.ndim == 0 else out


def check_g_decreasing(x, h):
    """g(x) - g(x+h); non-negative since g decreases on (2, inf)."""
    if not x > 2:
        raise DomainError(f"x must exceed 2, got {x}")
    if not h > 0 or not math.isfinite(x + h):
        raise DomainError(f"h must be positive with x+h finite, got {h}")
    return float(g_critical(x)) - float(g_critical(x + h))


def sweep_g_decreasing(x_max=100.0, n_points=20_000):
    x = np.linspace(2.0, x_max, n_points)
    g = g_critical(x)
    drop = g[:-1] - g[1:]
    boundary_ok = float(g_critical(2.0)) == 1.0
    rep = _report("g_decreasing", 2.0, x[:-1], drop, 1.0, slack=0.0)
    rep.passed = rep.passed and boundary_ok
    return rep


def sweep_critical_values(p_values=None):
    """Middle critical value is the smallest, on a real grid of p (p = 2 included)."""
    if p_values is None:
        p_values = np.linspace(2.0, 60.0, 5801)
    margins, points = [], []
    for p in np.asarray(p_values, dtype=float):
        one, second, third = check_lemma1_critical_values(p)
        margins.append(min(one - second, third - second))
        points.append(p)
    return _report("lemma1_critical_values", float(points[0]), points, margins, 1.0)


# --- tangent lines of the logarithm and the piecewise bound -----------------

TANGENT_POINTS = (1.0, 2.0, 3.0)


def check_tangent_lines(x):
    """Margins of ln x <= x-1, ln x <= x/2-1+ln 2, ln x <= x/3-1+ln 3."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("tangent-line checks need x > 0")
    lx = np.log(x)
    out = (x - 1 - lx, x / 2 - 1 + math.log(2) - lx, x / 3 - 1 + math.log(3) - lx)
    if x.ndim == 0:
        return tuple(float(m) for m in out)
    return out


def sweep_tangent(x_max=10.0, n_points=100_001):
    x = np.unique(np.concatenate([np.linspace(x_max / n_points, x_max, n_points), TANGENT_POINTS]))
    reports = []
    for k, (margin, x0) in enumerate(zip(check_tangent_lines(x), TANGENT_POINTS), start=1):
        rep = _report(f"tangent_{k}", x0, x, margin, 1.0, slack=1e-14)
        at_touch = float(check_tangent_lines(x0)[k - 1])
        near_zero = margin < 1e-8
        localized = bool(np.all(np.abs(x[near_zero] - x0) < 1e-3))
        rep.passed = rep.passed and at_touch == 0.0 and localized
        reports.append(rep)
    return reports


def check_log_piecewise(p):
    """ln(2p-1) - (p-1) ln((p+1)/(p-1)); non-negative for p >= 2."""
    p = float(p)
    if p < 2:
        raise DomainError(f"log piecewise bound needs p >= 2, got {p}")
    return math.log(2 * p - 1) - (p - 1) * math.log((p + 1) / (p - 1))


PIECE_RANGES = ((5.0, math.inf), (3.0, 5.0), (2.0, 3.0))


def log_pieces(p):
    """The three tangent-line lower bounds for :func:`check_log_piecewise`.

    Each piece bounds the exact expression from below for every p >= 2;
    piece k is non-negative on ``PIECE_RANGES[k]``.
    """
    p = float(p)
    l = math.log(2 * p - 1)
    return (
        l - 2.0,
        l - 1.0 + (p - 1) * (0.5 - math.log(2)),
        l - 2.0 / 3.0 + (p - 1) * (2.0 / 3.0 - math.log(3)),
    )


def sweep_logpiece(p_max=60.0, n_points=20_000):
    ps = np.unique(np.concatenate([np.linspace(2.0, p_max, n_points), [3.0, 5.0]]))
    exact = np.array([check_log_piecewise(p) for p in ps])
    pieces = np.array([log_pieces(p) for p in ps])
    reports = [_report("logpiece_exact", 2.0, ps, exact, 1.0, slack=1e-14)]
    for k, (lo, hi) in enumerate(PIECE_RANGES):
        on = (ps >= lo) & (ps <= hi)
        bound = _report(f"logpiece_{k + 1}_below", lo, ps[on], exact[on] - pieces[on, k], 1.0, slack=1e-14)
        nonneg = _report(f"logpiece_{k + 1}_nonneg", lo, ps[on], pieces[on, k], 1.0, slack=1e-14)
        reports += [bound, nonneg]
    return reports


# --- the critical-point inequality extended to all of R ----------------------


def check_lemma2_extended(p, t, m=None):
    """f_p(t) - m_p under E semantics; non-negative for every real t."""
    p = as_E(p)
    if m is None:
        m = solve_tp(p.value).m_p
    return f_p(t, p.value, extended=True) - m


def sweep_lemma2(p, n_points=GRID_POINTS, t_max=T_MAX):
    p = as_E(p)
    q = p.value
    res = solve_tp(q)
    t = np.unique(np.concatenate([
        np.linspace(-t_max, t_max, n_points),
        res.t_p + np.linspace(-1e-3, 1e-3, 2001),
        [0.0, 0.5, res.t_p],
    ]))
    vals = f_p(t, q, extended=True)
    scale = np.maximum(1.0, np.abs(vals))
    main = _report("lemma2_min", q, t, vals - res.m_p, scale)

    d = f_p_prime(t, q, extended=True)
    left, right = t < 0, t > 0.5
    neg = _report("lemma2_decreasing_left", q, t[left], -d[left], 1.0, slack=0.0)
    neg.passed = neg.passed and bool(np.all(d[left] < 0))
    pos = _report("lemma2_increasing_right", q, t[right], d[right], 1.0, slack=0.0)
    pos.passed = pos.passed and bool(np.all(d[right] > 0))
    return [main, neg, pos]


# --- algebraic identities -----------------------------------------------------


def sweep_identities(p="10/3", sizes=(2, 10, 100, 1000, 100_000), seed=0x5EED):
    """Mean, transpose and telescoping identities on random vectors."""
    p = as_E(p)
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in (("mean_identity", check_mean_identity),
                     ("transpose_identity", check_transpose_identity)):
        defects = [fn(rng.uniform(-1, 1, n)) for n in sizes]
        out.append(_report(name, p.value, list(sizes), [-d for d in defects], 1.0))
    tele = [check_telescoping(rng.uniform(-1, 1, n + 1), p) for n in sizes]
    out.append(_report("telescoping", p.value, list(sizes), [-d for d in tele], 1.0))
    adj = [adjointness_defect(rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)) for n in sizes]
    out.append(_report("adjointness", p.value, list(sizes), [-d for d in adj], 1.0))
    return out


def run_suite(name, p_values=None, n_points=GRID_POINTS):
    """Run one named suite (or ``"all"``) and return its reports in order."""
    if name == "all":
        reports = []
        for s in SUITES:
            reports += run_suite(s, p_values, n_points)
        return reports
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    ps = [as_E(p) for p in (p_values or DEFAULT_E)] if name in ("lemma1", "lemma2", "mvt") else None
    if name == "lemma1":
        reports = []
        for p in ps:
            reports += sweep_lemma1(p, n_points)
        reports.append(sweep_critical_values())
        reports.append(sweep_g_decreasing())
        return reports
    if name == "lemma2":
        return [r for p in ps for r in sweep_lemma2(p, n_points)]
    if name == "mvt":
        return [r for p in ps for r in sweep_mvt(p)]
    if name == "tangent":
        return sweep_tangent()
    if name == "logpiece":
        return sweep_logpiece()
    return sweep_identities()

