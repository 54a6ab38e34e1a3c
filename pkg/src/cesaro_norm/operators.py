"""Matrix-free finite sections of C, C^T, their differences with I, and p-norms.

The N-section of C is lower triangular with row n equal to 1/n on k <= n;
the N-section of C^T is its exact transpose.  Neither is ever materialized:
both are applied in O(N) with a running prefix (or suffix) sum.  The
identity checks here replay the algebraic steps of the norm proofs on
concrete vectors.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError
from .exponents import pow_even

COMPENSATED_THRESHOLD = 10_000

CESARO = "cesaro"
CESARO_TRANSPOSE = "cesaro_transpose"
KINDS = (CESARO, CESARO_TRANSPOSE)


def as_vector(x):
    """Validate a finite, non-empty 1-d real vector."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        v = v.reshape(-1)
    if v.size == 0:
        raise DomainError("vector must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise DomainError("vector entries must be finite")
    return v


def _neumaier_cumsum(v):
    out = np.empty_like(v)
    s = c = 0.0
    for i, a in enumerate(v.tolist()):
        t = s + a
        if abs(s) >= abs(a):
            c += (s - t) + a
        else:
            c += (a - t) + s
        s = t
        out[i] = s + c
    return out


def prefix_sum(v):
    """Running sum, compensated once the vector is long enough to need it."""
    v = np.asarray(v, dtype=float)
    if v.size > COMPENSATED_THRESHOLD:
        return _neumaier_cumsum(v)
    return np.cumsum(v)


def apply_cesaro(x):
    """y_n = (1/n) sum_{k<=n} x_k."""
    v = as_vector(x)
    return prefix_sum(v) / np.arange(1, v.size + 1)


def apply_cesaro_transpose(x):
    """y_n = sum_{k=n..N} x_k / k, the section of C^T (tail beyond N dropped)."""
    v = as_vector(x)
    w = v / np.arange(1, v.size + 1)
    return prefix_sum(w[::-1])[::-1]


def apply_section(kind, x):
    """(A - I) x for the N-section A of C or C^T."""
    v = as_vector(x)
    if kind == CESARO:
        return apply_cesaro(v) - v
    if kind == CESARO_TRANSPOSE:
        return apply_cesaro_transpose(v) - v
    raise DomainError(f"unknown operator kind {kind!r}; expected one of {KINDS}")


def apply_section_adjoint(kind, x):
    """(A - I)^T x; the adjoint of one kind is the other."""
    other = CESARO_TRANSPOSE if kind == CESARO else CESARO
    if kind not in KINDS:
        raise DomainError(f"unknown operator kind {kind!r}; expected one of {KINDS}")
    return apply_section(other, x)


def cesaro_matrix(N, kind=CESARO):
    """Dense N-section of C (or C^T).  Test oracle only; O(N^2) memory."""
    n = np.arange(1, N + 1)
    A = np.tril(np.ones((N, N))) / n[:, None]
    return A if kind == CESARO else A.T


def naive_cesaro(x):
    """O(N^2) double-loop evaluation of C x, kept as an oracle."""
    v = as_vector(x)
    return np.array([sum(v[: n + 1].tolist()) / (n + 1) for n in range(v.size)])


def naive_cesaro_transpose(x):
    v = as_vector(x)
    N = v.size
    return np.array([sum(v[k] / (k + 1) for k in range(n, N)) for n in range(N)])


def p_norm(v, p):
    """l^p norm with max-rescaling; p = inf gives max |v_n|."""
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"p-norm requires p >= 1, got {p!r}")
    a = np.abs(np.asarray(v, dtype=float))
    if a.size == 0:
        return 0.0
    big = float(a.max())
    if big == 0.0 or math.isinf(p):
        return big
    return big * float(np.sum((a / big) ** p)) ** (1.0 / p)


def check_mean_identity(x):
    """max_n |(n-1)(y_{n-1} - y_n) - (y_n - x_n)| for y = Cx, n = 2..N.

    Returns the defect relative to max(1, max|x|, max|n y_n|), the size of
    the prefix sums the identity is built from.
    """
    v = as_vector(x)
    if v.size < 2:
        return 0.0
    y = apply_cesaro(v)
    n = np.arange(2, v.size + 1)
    defect = np.abs((n - 1) * (y[:-1] - y[1:]) - (y[1:] - v[1:]))
    scale = max(1.0, float(np.abs(v).max()), float(np.abs(np.arange(1, v.size + 1) * y).max()))
    return float(defect.max()) / scale


def check_transpose_identity(x):
    """max_n |x_n - n(y_n - y_{n+1})| for y = C^T x with y_{N+1} = 0, relative."""
    v = as_vector(x)
    y = apply_cesaro_transpose(v)
    n = np.arange(1, v.size + 1)
    y_next = np.append(y[1:], 0.0)
    defect = np.abs(v - n * (y - y_next))
    scale = max(1.0, float(np.abs(v).max()), float(np.abs(n * y).max()))
    return float(defect.max()) / scale


def check_telescoping(y, p):
    """|sum_{n=1..N} (n y_{n+1}^p - (n-1) y_n^p) - N y_{N+1}^p|, relative.

    ``y`` holds y_1..y_{N+1}; powers use E semantics (|y|^p).  The defect
    is divided by max(1, sum of |terms|).
    """
    v = as_vector(y)
    N = v.size - 1
    if N < 1:
        return 0.0
    yp = pow_even(v, p)
    n = np.arange(1, N + 1, dtype=float)
    terms = n * yp[1:] - (n - 1) * yp[:-1]
    total = math.fsum(terms.tolist())
    scale = max(1.0, math.fsum(np.abs(terms).tolist()), N * float(yp[-1]))
    return abs(total - N * float(yp[-1])) / scale


def adjointness_defect(x, w):
    """|<Cx, w> - <x, C^T w>| relative to ||x||_2 ||w||_2 (times sqrt N)."""
    x, w = as_vector(x), as_vector(w)
    if x.size != w.size:
        raise DomainError("vectors must have the same length")
    lhs = math.fsum((apply_cesaro(x) * w).tolist())
    rhs = math.fsum((x * apply_cesaro_transpose(w)).tolist())
    scale = max(1.0, float(np.linalg.norm(x) * np.linalg.norm(w)) * math.sqrt(x.size))
    return abs(lhs - rhs) / scale


def read_vector(path):
    """Read one value per line, or comma separated values, into a vector."""
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            values.extend(float(tok) for tok in line.split(",") if tok.strip())
    return as_vector(values)


def write_vector(path, v):
    with open(path, "w", newline="\n") as fh:
        for a in np.asarray(v, dtype=float).tolist():
            fh.write(f"{a:.17g}\n")
