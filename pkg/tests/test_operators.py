import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cesaro_norm.exceptions import DomainError
from cesaro_norm.operators import (
    adjointness_defect,
    apply_cesaro,
    apply_cesaro_transpose,
    apply_section,
    apply_section_adjoint,
    cesaro_matrix,
    check_mean_identity,
    check_telescoping,
    check_transpose_identity,
    naive_cesaro,
    naive_cesaro_transpose,
    p_norm,
    read_vector,
    write_vector,
)

vectors = arrays(np.float64, st.integers(1, 64), elements=st.floats(-1e3, 1e3))


def test_apply_cesaro_examples():
    np.testing.assert_allclose(apply_cesaro([1, 0, 0]), [1, 1 / 2, 1 / 3], rtol=1e-15)
    np.testing.assert_allclose(apply_cesaro([1, 1, 1]), [1, 1, 1], rtol=1e-15)
    np.testing.assert_allclose(apply_cesaro([-1 / 8, -1 / 8, 5 / 36]), [-1 / 8, -1 / 8, -1 / 27], rtol=1e-14)


def test_apply_cesaro_transpose_examples():
    np.testing.assert_allclose(apply_cesaro_transpose([0, 0, 1]), [1 / 3] * 3, rtol=1e-15)
    np.testing.assert_allclose(apply_cesaro_transpose([1, 0, 0]), [1, 0, 0])
    np.testing.assert_allclose(apply_cesaro_transpose([1, 1 / 2]), [1 + 1 / 4, 1 / 4], rtol=1e-15)


def test_p_norm_examples():
    assert p_norm([3, 4], 2) == 5.0
    assert p_norm([1, 1, 1], np.inf) == 1.0
    assert p_norm([1, -1], 4) == pytest.approx(2 ** 0.25, rel=1e-15)
    assert p_norm([0.0, 0.0], 3) == 0.0
    with pytest.raises(DomainError):
        p_norm([1.0], 0.5)


def test_p_norm_does_not_overflow():
    assert p_norm([1e300, 1e300], 4) == pytest.approx(1e300 * 2 ** 0.25)


def test_vector_validation():
    with pytest.raises(DomainError):
        apply_cesaro([])
    with pytest.raises(DomainError):
        apply_cesaro([1.0, np.nan])
    with pytest.raises(DomainError):
        apply_section("hardy", [1.0])


def test_mean_identity_examples():
    assert check_mean_identity([1, 0, 0]) <= 1e-15
    assert check_mean_identity([5.0]) == 0.0
    rng = np.random.default_rng(1)
    assert check_mean_identity(rng.uniform(-1, 1, 100)) <= 1e-13


def test_transpose_identity_examples():
    assert check_transpose_identity([0, 0, 1]) <= 1e-15
    assert check_transpose_identity(np.ones(10)) <= 1e-13
    rng = np.random.default_rng(2)
    assert check_transpose_identity(rng.uniform(-1, 1, 100)) <= 1e-13


def test_telescoping_examples():
    assert check_telescoping(np.ones(6), 4) == 0.0
    assert check_telescoping([1, 1 / 2, 1 / 3], 4) <= 1e-15
    rng = np.random.default_rng(3)
    assert check_telescoping(rng.uniform(-1, 1, 51), 10 / 3) <= 1e-12


@pytest.mark.parametrize("N", [1, 2, 7, 64, 512])
def test_prefix_sums_match_naive_oracle(N):
    rng = np.random.default_rng(N)
    x = rng.uniform(-1, 1, N)
    scale = max(1.0, np.abs(x).sum())
    assert np.max(np.abs(apply_cesaro(x) - naive_cesaro(x))) <= 1e-13 * scale
    assert np.max(np.abs(apply_cesaro_transpose(x) - naive_cesaro_transpose(x))) <= 1e-13 * scale


def test_dense_sections_are_transposes():
    A = cesaro_matrix(16)
    np.testing.assert_array_equal(cesaro_matrix(16, "cesaro_transpose"), A.T)
    x = np.arange(1.0, 17.0)
    np.testing.assert_allclose(apply_cesaro(x), A @ x, rtol=1e-14)
    np.testing.assert_allclose(apply_cesaro_transpose(x), A.T @ x, rtol=1e-14)


def test_compensated_path_agrees_with_fsum():
    rng = np.random.default_rng(4)
    x = rng.uniform(-1, 1, 20_000)
    y = apply_cesaro(x)
    assert y[-1] * x.size == pytest.approx(math.fsum(x.tolist()), abs=1e-13)


@settings(max_examples=60, deadline=None)
@given(vectors, st.integers(0, 2**32 - 1))
def test_adjointness(x, seed):
    w = np.random.default_rng(seed).uniform(-1, 1, x.size)
    assert adjointness_defect(x, w) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(vectors)
def test_section_adjoint_is_other_kind(x):
    w = np.linspace(-1, 1, x.size)
    for kind in ("cesaro", "cesaro_transpose"):
        lhs = apply_section(kind, x) @ w
        rhs = x @ apply_section_adjoint(kind, w)
        assert lhs == pytest.approx(rhs, abs=1e-9 * max(1.0, np.abs(x).sum()))


@settings(max_examples=60, deadline=None)
@given(vectors)
def test_identities_hold_on_random_vectors(x):
    assert check_mean_identity(x) <= 1e-13
    assert check_transpose_identity(x) <= 1e-13


@settings(max_examples=40, deadline=None)
@given(vectors)
def test_p_norm_positive_definite(x):
    n = p_norm(x, 3)
    assert n >= 0
    assert (n == 0) == (not np.any(x))


def test_vector_file_roundtrip(tmp_path):
    v = np.array([1 / 3, -2.5e-300, 7.0])
    path = tmp_path / "v.txt"
    write_vector(path, v)
    np.testing.assert_array_equal(read_vector(path), v)


def test_transpose_tail_holder_bound():
    # |y_N| <= ||tail||_p * (sum_{n>=N} n^{-p'})^{1/p'}, second factor via the integral bound
    p = 4.0
    q = p / (p - 1)
    N = 50
    x = 1.0 / np.arange(1, N + 1)
    y = apply_cesaro_transpose(x)
    tail = p_norm(x[N - 1:], p)
    factor = (N ** -q + (N ** (1 - q)) / (q - 1)) ** (1 / q)
    assert abs(y[N - 1]) <= tail * factor
