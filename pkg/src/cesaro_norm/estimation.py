"""Certified lower bounds on finite-section norms of C - I and C^T - I.

The dual power method for the p -> p norm of a matrix M,

    x <- Phi_{p'}(M^T Phi_p(M x)) / ||.||_p,   Phi_q(v) = sign(v) |v|^(q-1),

never decreases ||Mx||_p / ||x||_p, and every iterate gives a valid lower
bound on the section norm, which in turn lower-bounds the operator norm on
l^p.  :class:`SectionNormEstimator` wraps it in the scikit-learn estimator
interface.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DomainError
from .exponents import dual_exponent
from .extremal import build_discrete_extremal
from .minimizer import norm_formula
from .operators import (
    CESARO,
    CESARO_TRANSPOSE,
    KINDS,
    apply_section,
    apply_section_adjoint,
    as_vector,
    p_norm,
)

DEFAULT_SEED = 0x5EED
DEFAULT_MAX_ITER = 10_000
DEFAULT_TOL = 1e-12
PATIENCE = 3


@dataclass
class NormEstimate:
    """Lower bound on ||A_N - I||_{p->p} for one section, with its history."""

    p: float
    N: int
    kind: str
    lower_bound: float
    analytic: float
    rel_gap: float
    iterations: int
    ratio_trace: list = field(default_factory=list, repr=False)

    FIELDS = ("p", "N", "kind", "lower_bound", "analytic", "rel_gap", "iterations")

    def to_dict(self, trace=False):
        d = asdict(self)
        if not trace:
            d.pop("ratio_trace")
        return d

    def to_json(self, trace=False):
        return json.dumps(self.to_dict(trace))


def analytic_norm(kind, p):
    """Operator norm on l^p of C - I (``cesaro``) or C^T - I (``cesaro_transpose``)."""
    if kind == CESARO:
        return norm_formula(p)
    if kind == CESARO_TRANSPOSE:
        return norm_formula(dual_exponent(float(p)))
    raise DomainError(f"unknown operator kind {kind!r}; expected one of {KINDS}")


def _phi(v, q):
    return np.sign(v) * np.abs(v) ** (q - 1.0)


def _check_p(p):
    p = float(p)
    if math.isnan(p) or p <= 1 or math.isinf(p):
        raise DomainError(f"section estimates need 1 < p < inf, got {p!r}")
    return p


def dual_power_lower_bound(kind, p, N, x0=None, max_iter=DEFAULT_MAX_ITER, tol=DEFAULT_TOL):
    """Run the dual power method on the N-section of C - I or C^T - I.

    Stops once the relative ratio improvement stays below ``tol`` for three
    consecutive steps, or after ``max_iter`` steps.  The returned
    ``lower_bound`` is the best ratio seen, a valid bound whether or not
    the iteration converged.
    """
    p = _check_p(p)
    if kind not in KINDS:
        raise DomainError(f"unknown operator kind {kind!r}; expected one of {KINDS}")
    N = int(N)
    x = default_seed(kind, p, N) if x0 is None else as_vector(x0)
    if x.size != N:
        raise DomainError(f"seed has length {x.size}, expected N={N}")
    nx = p_norm(x, p)
    if nx == 0:
        raise DomainError("seed vector must be nonzero")
    q = dual_exponent(p)
    x = x / nx
    trace = []
    best = 0.0
    calm = 0
    it = 0
    while True:
        y = apply_section(kind, x)
        ratio = p_norm(y, p)
        trace.append(ratio)
        if ratio > best:
            gain = (ratio - best) / ratio
            best = ratio
            calm = calm + 1 if gain < tol else 0
        else:
            calm += 1
        if it >= max_iter or calm >= PATIENCE or ratio == 0.0:
            break
        # rescale by max|y| before powering so nothing overflows
        w = apply_section_adjoint(kind, _phi(y / np.abs(y).max(), p))
        w_max = np.abs(w).max()
        if w_max == 0.0:
            break
        x = _phi(w / w_max, q)
        x /= p_norm(x, p)
        it += 1
    analytic = analytic_norm(kind, p)
    return NormEstimate(
        p=p, N=N, kind=kind, lower_bound=best, analytic=analytic,
        rel_gap=(analytic - best) / analytic, iterations=it, ratio_trace=trace,
    )


def _unit(v):
    v = np.asarray(v, dtype=float)
    big = np.abs(v).max()
    return v / big if big > 0 else v


def structured_seeds(kind, p, N):
    """Deterministic starting vectors for the section of ``kind`` at exponent p.

    C - I with p > 2 starts from truncated extremal sequences at several
    cutoffs (N // 2 first); C^T - I starts from the Hardy profile n^(-1/p);
    the remaining cases use the dual image Phi_{p'}(M^T x) of the partner
    operator's seed.  Vectors are scaled to max-norm 1.
    """
    p = _check_p(p)
    if kind not in KINDS:
        raise DomainError(f"unknown operator kind {kind!r}; expected one of {KINDS}")
    n = np.arange(1, N + 1, dtype=float)
    q = dual_exponent(p)
    seeds = []
    if kind == CESARO and p > 2 and N > 2:
        cutoffs = dict.fromkeys(min(max(2, m), N - 1) for m in (N // 2, N // 4, 4, 2))
        seeds += [build_discrete_extremal(p, m, N) for m in cutoffs]
    if kind == CESARO_TRANSPOSE and q > 2 and N > 2:
        for m in dict.fromkeys(min(max(2, m), N - 1) for m in (N // 2, 4)):
            seeds.append(_phi(_unit(apply_section(CESARO, build_discrete_extremal(q, m, N))), q))
    if kind == CESARO_TRANSPOSE:
        seeds.append(n ** (-1.0 / p))
    else:
        seeds.append(_phi(_unit(apply_section(CESARO_TRANSPOSE, n ** (-1.0 / q))), q))
        seeds.append(n ** (-1.0 / p))
    seeds = [_unit(v) for v in seeds if np.any(v)]
    return seeds or [np.ones(N)]


def default_seed(kind, p, N):
    """First structured seed; the truncated extremal sequence when one exists."""
    return structured_seeds(kind, p, N)[0]


def multistart_seeds(kind, p, N, starts=8, random_state=DEFAULT_SEED):
    """Structured seeds topped up with randomized ones to ``starts`` vectors.

    Randomized seeds alternately perturb the first basis vector and the
    first structured seed with Gaussian noise drawn from ``random_state``.
    """
    rng = np.random.default_rng(random_state)
    seeds = structured_seeds(kind, p, N)[:max(1, starts)]
    base = seeds[0]
    e1 = np.zeros(N)
    e1[0] = 1.0
    k = 0
    while len(seeds) < starts:
        noise = rng.standard_normal(N)
        if k % 2 == 0:
            seeds.append(e1 + 0.1 * noise / math.sqrt(N))
        else:
            seeds.append(base + 0.1 * noise * np.abs(base))
        k += 1
    return seeds


def section_lower_bound(kind, p, N, starts=8, max_iter=DEFAULT_MAX_ITER, tol=DEFAULT_TOL,
                        random_state=DEFAULT_SEED):
    """Best :class:`NormEstimate` over a multi-start run."""
    best = None
    for x0 in multistart_seeds(kind, p, N, starts, random_state):
        est = dual_power_lower_bound(kind, p, N, x0, max_iter, tol)
        if best is None or est.lower_bound > best.lower_bound:
            best = est
    return best


def duality_check(p, N, max_iter=DEFAULT_MAX_ITER, tol=DEFAULT_TOL, x0=None):
    """Relative discrepancy between section bounds for C - I at p and C^T - I at p'.

    The two sections are exact transposes, so their p- and p'-norms agree;
    any discrepancy is iteration truncation.  The transpose run starts
    from Phi_p((C - I) x0), the dual image of the first seed.
    """
    p = _check_p(p)
    q = dual_exponent(p)
    N = int(N)
    if x0 is None:
        x0 = default_seed(CESARO, p, N)
    x0 = as_vector(x0)
    a = dual_power_lower_bound(CESARO, p, N, x0, max_iter, tol)
    y0 = _phi(apply_section(CESARO, x0), p)
    if not np.any(y0):
        y0 = np.ones(N)
    b = dual_power_lower_bound(CESARO_TRANSPOSE, q, N, y0, max_iter, tol)
    hi = max(a.lower_bound, b.lower_bound)
    return 0.0 if hi == 0 else abs(a.lower_bound - b.lower_bound) / hi


@dataclass
class InterpolationReport:
    p0: float
    p: float
    p1: float
    theta: float
    norm_p0: float
    norm_p: float
    norm_p1: float
    interpolated: float
    holds: bool
    transpose_holds: bool
    section_p: float | None = None

    FIELDS = ("p0", "p", "p1", "theta", "norm_p0", "norm_p", "norm_p1", "interpolated",
              "holds", "transpose_holds", "section_p")

    def to_dict(self):
        return asdict(self)


def interpolation_spot_check(p0, p, p1, N=None):
    """Check the Riesz-Thorin consequence on the analytic norm values.

    theta solves 1/p = (1 - theta)/p0 + theta/p1 and the check is
    ||C - I||_p <= ||C - I||_p0^(1-theta) ||C - I||_p1^theta, together with
    the same statement for C^T - I.  When ``N`` is given a section lower
    bound at p is attached for context only.
    """
    p0, p, p1 = float(p0), float(p), float(p1)
    if not 2 < p0 < p < p1 < math.inf:
        raise DomainError(f"need 2 < p0 < p < p1 < inf, got {p0}, {p}, {p1}")
    theta = (1 / p0 - 1 / p) / (1 / p0 - 1 / p1)
    n0, n, n1 = norm_formula(p0), norm_formula(p), norm_formula(p1)
    bound = n0 ** (1 - theta) * n1 ** theta
    t_bound = (p0 - 1) ** (1 - theta) * (p1 - 1) ** theta
    section = None
    if N is not None:
        section = section_lower_bound(CESARO, p, int(N), starts=2, max_iter=2000).lower_bound
    return InterpolationReport(
        p0=p0, p=p, p1=p1, theta=theta, norm_p0=n0, norm_p=n, norm_p1=n1,
        interpolated=bound, holds=n <= bound * (1 + 1e-12),
        transpose_holds=(p - 1) <= t_bound * (1 + 1e-12), section_p=section,
    )


class SectionNormEstimator(TransformerMixin, BaseEstimator):
    """Lower-bound the l^p norm of a finite section of C - I or C^T - I.

    Parameters
    ----------
    kind : {"cesaro", "cesaro_transpose"}
        Which operator's section to use.
    p : float
        Exponent, 1 < p < inf.
    n_starts : int
        Number of starting vectors when ``fit`` is given no seeds.
    max_iter, tol : int, float
        Iteration budget and relative-improvement stopping threshold.
    random_state : int
        Seed for the randomized starting vectors.
    n_features : int or None
        Section size used when ``fit`` is called without data.

    Attributes
    ----------
    lower_bound_ : float
        Best ratio ||(A - I)x||_p / ||x||_p found.
    estimate_ : NormEstimate
        Report for the best start.
    estimates_ : list of NormEstimate
        One report per start.
    n_features_in_ : int
        Section size N.
    """

    def __init__(self, kind=CESARO, p=2.0, n_starts=8, max_iter=DEFAULT_MAX_ITER,
                 tol=DEFAULT_TOL, random_state=DEFAULT_SEED, n_features=None):
        self.kind = kind
        self.p = p
        self.n_starts = n_starts
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state
        self.n_features = n_features

    def fit(self, X=None, y=None):
        """Run the dual power method from each row of ``X`` (or from default seeds)."""
        if self.kind not in KINDS:
            raise DomainError(f"unknown operator kind {self.kind!r}; expected one of {KINDS}")
        p = _check_p(self.p)
        if X is None:
            if not self.n_features:
                raise DomainError("pass seed vectors X or set n_features")
            N = int(self.n_features)
            seeds = multistart_seeds(self.kind, p, N, self.n_starts, self.random_state)
        else:
            X = check_array(X, ensure_2d=False, dtype=float)
            seeds = [X] if X.ndim == 1 else list(X)
            N = seeds[0].size
        self.estimates_ = [
            dual_power_lower_bound(self.kind, p, N, x0, self.max_iter, self.tol) for x0 in seeds
        ]
        self.estimate_ = max(self.estimates_, key=lambda e: e.lower_bound)
        self.lower_bound_ = self.estimate_.lower_bound
        self.analytic_ = self.estimate_.analytic
        self.n_features_in_ = N
        return self

    def transform(self, X):
        """Apply the section of A - I to each row of ``X``."""
        check_is_fitted(self, "lower_bound_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise DomainError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return np.vstack([apply_section(self.kind, row) for row in X])

    def score(self, X, y=None):
        """Largest ratio ||(A - I)x||_p / ||x||_p over the rows of ``X``."""
        Y = self.transform(X)
        X = check_array(X, dtype=float)
        return max(p_norm(yr, self.p) / p_norm(xr, self.p) for xr, yr in zip(X, Y) if np.any(xr))
