import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cesaro_norm.estimation import (
    NormEstimate,
    SectionNormEstimator,
    analytic_norm,
    default_seed,
    dual_power_lower_bound,
    duality_check,
    interpolation_spot_check,
    multistart_seeds,
    section_lower_bound,
)
from cesaro_norm.exceptions import DomainError
from cesaro_norm.extremal import build_discrete_extremal, discrete_ratio
from cesaro_norm.minimizer import norm_formula


def _nondecreasing(trace):
    t = np.asarray(trace)
    return bool(np.all(np.diff(t) >= -1e-13 * max(1.0, t.max())))


def test_l2_section_near_one():
    N = 256
    est = dual_power_lower_bound("cesaro", 2, N, default_seed("cesaro", 2, N))
    assert 0.9 <= est.lower_bound <= 1.0
    assert est.analytic == 1.0


def test_seeded_floor_at_p4():
    N, m = 4096, 64
    x0 = build_discrete_extremal(4, m, N)
    est = dual_power_lower_bound("cesaro", 4, N, x0, max_iter=50)
    assert est.lower_bound >= discrete_ratio(4, m, N).ratio_p ** 0.25
    assert est.lower_bound >= est.ratio_trace[0]


def test_near_one_exponent_smoke():
    est = dual_power_lower_bound("cesaro", 1.0001, 16, default_seed("cesaro", 1.0001, 16))
    assert np.isfinite(est.lower_bound)
    assert 0 < est.lower_bound <= est.analytic
    assert est.analytic == pytest.approx(1e4, rel=1e-9)


def test_one_by_one_section_is_zero():
    est = dual_power_lower_bound("cesaro", 3, 1, [1.0])
    assert est.lower_bound == 0.0
    assert duality_check(3, 1) == 0.0


def test_input_validation():
    with pytest.raises(DomainError):
        dual_power_lower_bound("cesaro", 3, 4, np.zeros(4))
    with pytest.raises(DomainError):
        dual_power_lower_bound("cesaro", 3, 4, np.ones(5))
    with pytest.raises(DomainError):
        dual_power_lower_bound("cesaro", 1.0, 4, np.ones(4))
    with pytest.raises(DomainError):
        dual_power_lower_bound("hilbert", 3, 4, np.ones(4))


@pytest.mark.parametrize("kind, p", [("cesaro", 1.5), ("cesaro", 3), ("cesaro_transpose", 3),
                                     ("cesaro_transpose", 1.5), ("cesaro", 6)])
def test_traces_monotone_and_below_analytic(kind, p):
    est = section_lower_bound(kind, p, 256, starts=4, max_iter=500)
    assert _nondecreasing(est.ratio_trace)
    assert est.lower_bound <= analytic_norm(kind, p) * (1 + 1e-9)


def test_transpose_analytic_values():
    assert analytic_norm("cesaro_transpose", 4) == pytest.approx(3.0)
    assert analytic_norm("cesaro", 4) == pytest.approx(norm_formula(4))


def test_section_monotone_in_N():
    bounds = []
    for N in (64, 256, 1024, 4096):
        bounds.append(dual_power_lower_bound("cesaro", 3, N, default_seed("cesaro", 3, N),
                                             max_iter=N // 2).lower_bound)
    assert bounds == sorted(bounds)


def test_duality_l2():
    assert duality_check(2, 128) <= 1e-6


def test_multistart_is_reproducible():
    a = multistart_seeds("cesaro", 3, 64, starts=8, random_state=7)
    b = multistart_seeds("cesaro", 3, 64, starts=8, random_state=7)
    assert len(a) == 8
    for u, v in zip(a, b):
        np.testing.assert_array_equal(u, v)


def test_estimate_serialization():
    est = section_lower_bound("cesaro", 3, 64, starts=2, max_iter=50)
    assert isinstance(est, NormEstimate)
    assert list(est.to_dict()) == list(NormEstimate.FIELDS)
    assert "ratio_trace" in est.to_dict(trace=True)
    assert '"lower_bound"' in est.to_json()


@pytest.mark.parametrize("p0, p, p1", [(3, 3.5, 4), (2.5, 3, 4)])
def test_interpolation_holds(p0, p, p1):
    rep = interpolation_spot_check(p0, p, p1)
    assert rep.holds and rep.transpose_holds
    assert 0 < rep.theta < 1


def test_interpolation_strict_margin():
    rep = interpolation_spot_check(2.5, 3, 4)
    assert rep.interpolated - rep.norm_p > 1e-3


def test_interpolation_with_section_context():
    rep = interpolation_spot_check(3, 3.5, 4, N=64)
    assert 0 < rep.section_p <= rep.norm_p


@pytest.mark.parametrize("args", [(3, 3, 3), (4, 3.5, 3), (2, 3, 4)])
def test_interpolation_rejects_bad_order(args):
    with pytest.raises(DomainError):
        interpolation_spot_check(*args)


# --- estimator interface ------------------------------------------------------


def test_estimator_params_and_clone():
    est = SectionNormEstimator(p=3, n_starts=2, max_iter=100)
    params = est.get_params()
    assert params["p"] == 3 and params["kind"] == "cesaro"
    est.set_params(kind="cesaro_transpose")
    assert clone(est).get_params() == est.get_params()


def test_estimator_fit_transform_score():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, (3, 32))
    est = SectionNormEstimator(p=3, max_iter=200).fit(X)
    assert est.n_features_in_ == 32
    assert len(est.estimates_) == 3
    assert est.lower_bound_ <= est.analytic_ * (1 + 1e-9)
    Y = est.transform(X)
    assert Y.shape == X.shape
    assert est.score(X) <= est.lower_bound_ * (1 + 1e-12)


def test_estimator_default_seeds():
    est = SectionNormEstimator(p=4, n_starts=3, max_iter=100, n_features=128).fit()
    assert len(est.estimates_) == 3
    assert est.lower_bound_ == max(e.lower_bound for e in est.estimates_)


def test_estimator_errors():
    with pytest.raises(NotFittedError):
        SectionNormEstimator().transform(np.ones((1, 4)))
    with pytest.raises(DomainError):
        SectionNormEstimator(p=3).fit()
    est = SectionNormEstimator(p=3, max_iter=10).fit(np.ones(8))
    with pytest.raises(DomainError):
        est.transform(np.ones((1, 9)))
