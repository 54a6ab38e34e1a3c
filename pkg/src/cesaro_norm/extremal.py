"""Near-extremal sequences and functions for C - I and P - I when p > 2.

With r = 1/t_p and a cutoff m >= 2 the sequence

    x_n = -m^(-r)                     (n <= m)
    x_n = (n-1)^(1-r) - n^(1-r)       (n > m)

has Cesaro means y_n = -max(m, n)^(-r), and the ratio
sum |Cx - x|^p / sum |x|^p increases to 1/m_p as m grows.  The continuous
analogue x(s) = -1 on (0,1), (r-1) s^(-r) on (1, inf) attains 1/m_p exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .exceptions import DomainError, NumericError
from .exponents import Exponent
from .minimizer import solve_tp

CHUNK = 1 << 20
TAIL_RTOL = 1e-12
SLACK = 1e-9


@dataclass
class ExtremalReport:
    """Ratio certificate for one member of the extremal family.

    ``m`` is ``None`` for the continuous family.  ``lower_bound`` is the
    explicit m-dependent bound from the Riemann-sum estimates and
    ``tail_bound`` the relative size of everything dropped beyond N.
    """

    p: float
    r: float
    m: int | None
    N: int | None
    sum_x_p: float
    sum_z_p: float
    ratio_p: float
    analytic_limit: float
    gap: float
    lower_bound: float = math.nan
    tail_bound: float = 0.0

    FIELDS = ("p", "r", "m", "N", "sum_x_p", "sum_z_p", "ratio_p", "analytic_limit", "gap")

    def to_dict(self):
        d = asdict(self)
        return {k: d[k] for k in self.FIELDS}

    def to_json(self):
        return json.dumps(self.to_dict())


def _r_for(p):
    return solve_tp(p).r


def _check_family_args(p, m, N):
    p = float(p)
    if not p > 2 or math.isinf(p):
        raise DomainError(f"extremal family needs 2 < p < inf, got {p}")
    if int(m) != m or m < 2:
        raise DomainError(f"cutoff m must be an integer >= 2, got {m}")
    if int(N) != N or N <= m:
        raise DomainError(f"truncation N must be an integer > m, got N={N}, m={m}")
    return p, int(m), int(N)


def _tail_parts(r, n):
    # x_n = n^(1-r) expm1(u) > 0 and z_n = -n^(-r) (1 + n expm1(u)) < 0,
    # with u = (1-r) log(1 - 1/n); no cancellation for large n
    n = np.asarray(n, dtype=float)
    e = np.expm1((1 - r) * np.log1p(-1.0 / n))
    log_n = np.log(n)
    log_x = (1 - r) * log_n + np.log(e)
    log_z = -r * log_n + np.log1p(n * e)
    return log_x, log_z


def build_discrete_extremal(p, m, N, r=None):
    """The truncated extremal sequence (x_1, ..., x_N) for exponent p and cutoff m."""
    p, m, N = _check_family_args(p, m, N)
    r = _r_for(p) if r is None else float(r)
    x = np.empty(N)
    x[:m] = -float(m) ** (-r)
    log_x, _ = _tail_parts(r, np.arange(m + 1, N + 1))
    x[m:] = np.exp(log_x)
    return x


def extremal_closed_forms(r, m, N):
    """Closed forms of y = Cx and z = y - x for the extremal sequence."""
    n = np.arange(1, N + 1, dtype=float)
    y = -np.maximum(float(m), n) ** (-r)
    z = np.zeros(N)
    _, log_z = _tail_parts(r, n[m:])
    z[m:] = -np.exp(log_z)
    return y, z


def riemann_lower_bound(p, r, m):
    """Explicit lower bound on the ratio at cutoff m from the Riemann-sum estimates."""
    pr1 = p * r - 1
    a = math.log1p(-1.0 / (m + 1))          # log(m/(m+1))
    b = math.log1p(-2.0 / (m + 1))          # log((m-1)/(m+1))
    num = p * math.log(r) + p * a
    den1 = math.log(pr1) + (1 - p * r) * a
    den2 = p * math.log(r - 1) + (1 - p * r) * b
    big = max(den1, den2)
    return math.exp(num - big) / (math.exp(den1 - big) + math.exp(den2 - big))


def limit_ratio(p, r):
    """r^p / ((pr - 1) + (r - 1)^p), the m -> inf limit; equals 1/m_p at r = 1/t_p."""
    return 1.0 / (math.exp(-p * math.log(r)) * (p * r - 1) + ((r - 1) / r) ** p)


def discrete_ratio(p, m, N=None, r=None):
    """Certify sum|z|^p / sum|x|^p for the extremal sequence truncated at N.

    Sums are accumulated in chunks with every term scaled by m^(pr) so
    that large p cannot underflow.  The neglected tails are bounded by
    integral comparison; a relative tail above 1e-12 raises NumericError.
    """
    if N is None:
        N = 1000 * int(m)
    p, m, N = _check_family_args(p, m, N)
    res = solve_tp(p)
    r = res.r if r is None else float(r)
    shift = p * r * math.log(m)
    parts_x, parts_z = [float(m)], []
    for lo in range(m + 1, N + 1, CHUNK):
        n = np.arange(lo, min(lo + CHUNK, N + 1), dtype=float)
        log_x, log_z = _tail_parts(r, n)
        parts_x.append(float(np.sum(np.exp(p * log_x + shift))))
        parts_z.append(float(np.sum(np.exp(p * log_z + shift))))
    sx, sz = math.fsum(parts_x), math.fsum(parts_z)

    # sum_{n>N} (n-1)^(-pr) <= (N-1)^(1-pr)/(pr-1), scaled by m^(pr)
    pr1 = p * r - 1
    log_tail = (1 - p * r) * math.log(N - 1) - math.log(pr1) + shift
    tail_x = math.exp(p * math.log(r - 1) + log_tail)
    tail_z = math.exp(p * math.log(r) + log_tail)
    tail = max(tail_x / sx, tail_z / sz)
    if tail > TAIL_RTOL:
        raise NumericError(f"tail beyond N={N} is {tail:.2e} relative; increase N")

    ratio = sz / sx
    limit = 1.0 / res.m_p
    lower = riemann_lower_bound(p, r, m)
    if ratio > limit * (1 + SLACK):
        raise NumericError(f"ratio {ratio!r} exceeds the upper bound 1/m_p = {limit!r}")
    if lower > ratio * (1 + SLACK):
        raise NumericError(f"ratio {ratio!r} is below the explicit lower bound {lower!r}")
    scale = math.exp(-shift)
    return ExtremalReport(
        p=p, r=r, m=m, N=N, sum_x_p=sx * scale, sum_z_p=sz * scale,
        ratio_p=ratio, analytic_limit=limit, gap=limit - ratio,
        lower_bound=lower, tail_bound=tail,
    )


# --- continuous family --------------------------------------------------------


def _continuous_p(p):
    p = float(p.p if isinstance(p, Exponent) else p)
    if not p > 2 or math.isinf(p):
        raise DomainError(f"continuous family needs 2 < p < inf, got {p}")
    return p


def continuous_extremal_integrals(p):
    """Closed forms of  int |x|^p  and  int |Px - x|^p  over (0, inf)."""
    p = _continuous_p(p)
    r = _r_for(p)
    pr1 = p * r - 1
    return 1.0 + (r - 1) ** p / pr1, r ** p / pr1


def continuous_report(p):
    p = _continuous_p(p)
    res = solve_tp(p)
    ix, iz = continuous_extremal_integrals(p)
    ratio = iz / ix
    limit = 1.0 / res.m_p
    return ExtremalReport(p=p, r=res.r, m=None, N=None, sum_x_p=ix, sum_z_p=iz,
                          ratio_p=ratio, analytic_limit=limit, gap=limit - ratio)


def continuous_extremal_functions(r):
    """x, Px and Px - x for the continuous extremal function, as callables."""
    def x(s):
        s = np.asarray(s, dtype=float)
        return np.where(s < 1, -1.0, (r - 1) * s ** -r)

    def y(s):
        s = np.asarray(s, dtype=float)
        return np.where(s < 1, -1.0, -(s ** -r))

    def z(s):
        return y(s) - x(s)

    return x, y, z


def _gauss_panels(f, edges, order):
    nodes, weights = leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    s = 0.5 * (a + b) + half * nodes
    return float(np.sum(half * weights * f(s)))


def quadrature_check_continuous(p, panels=10_000, T=1e3, order=8, tol=1e-6):
    """Integrate |x|^p and |Px - x|^p numerically and compare with the closed forms.

    Panels are spaced geometrically on (1, T); the truncation at T and the
    difference between ``panels`` and ``panels // 2`` form the error budget.
    Returns the larger of the two relative discrepancies.
    """
    p = _continuous_p(p)
    if panels < 2 or T <= 1:
        raise DomainError("need at least two panels and T > 1")
    r = _r_for(p)
    x, _, z = continuous_extremal_functions(r)

    def integrals(k):
        edges = np.geomspace(1.0, T, k + 1)
        head = _gauss_panels(lambda s: np.abs(x(s)) ** p, np.array([0.0, 1.0]), order)
        ix = head + _gauss_panels(lambda s: np.abs(x(s)) ** p, edges, order)
        iz = _gauss_panels(lambda s: np.abs(z(s)) ** p, edges, order)
        return ix, iz

    ix, iz = integrals(panels)
    hx, hz = integrals(max(1, panels // 2))
    ex, ez = continuous_extremal_integrals(p)
    tail = T ** (1 - p * r) / (p * r - 1)
    truncation = max((r - 1) ** p * tail / ex, r ** p * tail / ez)
    refinement = max(abs(ix - hx) / ex, abs(iz - hz) / ez)
    if truncation + refinement > tol:
        raise NumericError(
            f"quadrature budget {truncation + refinement:.2e} exceeds tol={tol:.1e}; "
            "raise panels or T"
        )
    return max(abs(ix - ex) / ex, abs(iz - ez) / ez)


# --- dual operator P^T on step functions ----------------------------------------


def _int_abs_affine_pow(alpha, beta, p, L, scale, order=48, panels=8):
    # int_0^L |alpha v + beta|^p * scale * e^(-v) dv, split at the zero of the affine part
    cuts = [0.0, L]
    if alpha != 0:
        v0 = -beta / alpha
        if 0 < v0 < L:
            cuts = [0.0, v0, L]
    edges = np.concatenate([np.linspace(a, b, panels + 1)[:-1] for a, b in zip(cuts[:-1], cuts[1:])] + [[L]])
    return scale * _gauss_panels(lambda v: np.abs(alpha * v + beta) ** p * np.exp(-v), edges, order)


def step_function_dual_ratio(breaks, coeffs, p):
    """int |P^T x - x|^p / ((p-1)^p int |x|^p) for a step function x.

    ``x = coeffs[i]`` on ``(breaks[i], breaks[i+1])`` and zero elsewhere.
    P^T x is integrated exactly: on each step it is affine in log s.
    """
    a = np.asarray(breaks, dtype=float)
    c = np.asarray(coeffs, dtype=float)
    p = float(p)
    if a.ndim != 1 or c.size != a.size - 1 or np.any(a[0] <= 0) or np.any(np.diff(a) <= 0):
        raise DomainError("breaks must be increasing positive numbers, one more than coeffs")
    denom = math.fsum((np.abs(c) ** p * np.diff(a)).tolist())
    if denom == 0:
        raise DomainError("step function must be nonzero")
    logs = np.log(a[1:] / a[:-1])
    # B[j] = int_{a_{j+1}}^inf x(t) dt/t
    B = np.append(np.cumsum((c * logs)[::-1])[::-1][1:], 0.0)
    parts = [a[0] * abs(B[0] + c[0] * logs[0]) ** p]
    for j in range(c.size):
        # s = a_{j+1} e^(-v):  y - x = c_j v + B_j - c_j
        parts.append(_int_abs_affine_pow(c[j], B[j] - c[j], p, logs[j], a[j + 1]))
    return math.fsum(parts) / ((p - 1) ** p * denom)


def dual_continuous_check(p, n_functions=64, n_steps=6, seed=0x5EED):
    """Largest dual-operator ratio over a seeded family of random step functions."""
    p = float(p.p if isinstance(p, Exponent) else p)
    if not p >= 2 or math.isinf(p):
        raise DomainError(f"dual check needs 2 <= p < inf, got {p}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_functions):
        breaks = np.sort(np.exp(rng.uniform(-4, 4, n_steps + 1)))
        coeffs = rng.standard_normal(n_steps)
        worst = max(worst, step_function_dual_ratio(breaks, coeffs, p))
    return worst

