import math

import numpy as np
import pytest

from cesaro_norm.exceptions import DomainError, NumericError
from cesaro_norm.extremal import (
    ExtremalReport,
    build_discrete_extremal,
    continuous_extremal_functions,
    continuous_extremal_integrals,
    continuous_report,
    discrete_ratio,
    dual_continuous_check,
    extremal_closed_forms,
    limit_ratio,
    riemann_lower_bound,
    quadrature_check_continuous,
    step_function_dual_ratio,
)
from cesaro_norm.minimizer import m_p, solve_tp
from cesaro_norm.operators import apply_cesaro

# Oracle: mpmath at 40 digits, summing the p=4, m=10 family to N=10^4 term by term.
RATIO_P4_M10 = 2.4808687170047324633
# Oracle: mpmath quadrature of (1 + int_0^1 u^p e^u du) / ((p-1)^p (e-1)),
# the dual ratio of the indicator of [1, e].
INDICATOR_RATIO = {4: 0.010522544491721358748, 10 / 3: 0.052706995130611136772}


def test_build_example():
    x = build_discrete_extremal(4, 2, 3, r=3)
    np.testing.assert_allclose(x, [-1 / 8, -1 / 8, 5 / 36], rtol=1e-15)
    y, z = extremal_closed_forms(3.0, 2, 3)
    np.testing.assert_allclose(y, [-1 / 8, -1 / 8, -1 / 27], rtol=1e-15)
    np.testing.assert_allclose(z, [0, 0, -19 / 108], rtol=1e-14, atol=0)


@pytest.mark.parametrize("p, m", [(3, 5), (4, 10), (6, 37)])
def test_closed_forms_match_operator(p, m):
    N = 40 * m
    r = solve_tp(p).r
    x = build_discrete_extremal(p, m, N)
    y, z = extremal_closed_forms(r, m, N)
    np.testing.assert_allclose(apply_cesaro(x), y, rtol=1e-12, atol=1e-15 * m ** -r)
    np.testing.assert_allclose(y - x, z, rtol=1e-9, atol=1e-13 * m ** -r)


def test_argument_validation():
    with pytest.raises(DomainError):
        build_discrete_extremal(2, 4, 10)
    with pytest.raises(DomainError):
        build_discrete_extremal(4, 1, 10)
    with pytest.raises(DomainError):
        build_discrete_extremal(4, 10, 10)
    with pytest.raises(DomainError):
        discrete_ratio(math.inf, 10)


def test_frozen_ratio_oracle():
    rep = discrete_ratio(4, 10, 10_000)
    assert rep.ratio_p == pytest.approx(RATIO_P4_M10, rel=1e-13)


def test_small_truncation_is_rejected():
    with pytest.raises(NumericError):
        discrete_ratio(3, 10, 20)


@pytest.mark.parametrize("p", [2.5, 3, 4, 10 / 3, 8])
def test_ratio_increases_to_the_limit(p):
    reps = [discrete_ratio(p, m) for m in (10, 100, 1000)]
    ratios = [rep.ratio_p for rep in reps]
    assert ratios[0] < ratios[1] < ratios[2] < 1 / m_p(p)
    for rep in reps:
        assert rep.lower_bound <= rep.ratio_p
        assert rep.tail_bound <= 1e-12
        assert rep.gap == pytest.approx(rep.analytic_limit - rep.ratio_p)


def test_limit_is_reciprocal_minimum():
    for p in (2.2, 3, 5, 12, 40):
        res = solve_tp(p)
        assert limit_ratio(p, res.r) == pytest.approx(1 / res.m_p, rel=1e-12)


def test_lower_bound_tends_to_limit():
    p = 4.0
    r = solve_tp(p).r
    assert riemann_lower_bound(p, r, 10 ** 8) == pytest.approx(limit_ratio(p, r), rel=1e-6)


def test_report_serialization():
    rep = discrete_ratio(3, 10)
    assert isinstance(rep, ExtremalReport)
    assert list(rep.to_dict()) == list(ExtremalReport.FIELDS)
    assert '"ratio_p"' in rep.to_json()


def test_continuous_integrals_exact_at_four():
    # at p = 4 the critical point is t = 1/3, so r = 3 and pr - 1 = 11
    ix, iz = continuous_extremal_integrals(4)
    assert ix == pytest.approx(27 / 11, rel=1e-12)
    assert iz == pytest.approx(81 / 11, rel=1e-12)


@pytest.mark.parametrize("p", np.linspace(2.05, 30, 25))
def test_continuous_ratio_matches_minimum(p):
    rep = continuous_report(p)
    assert abs(rep.ratio_p * m_p(p) - 1) <= 1e-11


@pytest.mark.parametrize("p", [3, 4, 10 / 3])
def test_quadrature_agrees_with_closed_form(p):
    assert quadrature_check_continuous(p) <= 1e-6


def test_quadrature_budget_exceeded():
    with pytest.raises(NumericError):
        quadrature_check_continuous(2.2, panels=50, T=1.5)


def test_continuous_functions_shape():
    x, y, z = continuous_extremal_functions(3.0)
    s = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(x(s), [-1, 2, 2 * 2 ** -3])
    np.testing.assert_allclose(y(s), [-1, -1, -(2 ** -3)])
    np.testing.assert_allclose(z(s), y(s) - x(s))


@pytest.mark.parametrize("p", [4, 10 / 3])
def test_indicator_dual_ratio_oracle(p):
    ratio = step_function_dual_ratio([1.0, math.e], [1.0], p)
    assert ratio == pytest.approx(INDICATOR_RATIO[p], rel=1e-12)


def test_dual_ratio_is_homogeneous():
    breaks, coeffs = [0.5, 1.0, 3.0, 7.0], [1.0, -2.0, 0.5]
    base = step_function_dual_ratio(breaks, coeffs, 3.0)
    assert step_function_dual_ratio(breaks, [-4 * c for c in coeffs], 3.0) == pytest.approx(base, rel=1e-12)


def test_dual_ratio_validation():
    with pytest.raises(DomainError):
        step_function_dual_ratio([2.0, 1.0], [1.0], 3.0)
    with pytest.raises(DomainError):
        step_function_dual_ratio([1.0, 2.0], [0.0], 3.0)


@pytest.mark.parametrize("p", [2, 3, 4, 6])
def test_dual_continuous_bound(p):
    assert dual_continuous_check(p) <= 1 + 1e-9
