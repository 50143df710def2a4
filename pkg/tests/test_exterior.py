import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wirtinger.errors import BadMetric, NotSkew, OddDimension, RankDeficient, TooLarge
from wirtinger.exterior import (
    SkewMatrix,
    _pf_expand,
    _pf_householder,
    block_matrix,
    orthonormalize,
    perfect_matchings,
    pfaffian,
    skew_canonical,
    wedge_power_oracle,
)

from conftest import random_rotation, random_skew


def rel_err(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# -- orthonormalize


def test_orthonormal_input_is_fixed_point():
    e = np.eye(4)[:2]
    np.testing.assert_allclose(orthonormalize(e), e, atol=1e-15, rtol=0)


def test_rotated_orthonormal_input_is_fixed_point(rng):
    q = random_rotation(rng, 6)[:4]
    np.testing.assert_allclose(orthonormalize(q), q, atol=1e-15, rtol=0)


def test_two_step_gram_schmidt():
    out = orthonormalize([[2, 0, 0, 0], [1, 1, 0, 0]])
    np.testing.assert_allclose(out, np.eye(4)[:2], atol=1e-15)


def test_dependent_basis_is_rank_deficient():
    with pytest.raises(RankDeficient):
        orthonormalize([[1, 0, 0, 0], [2, 0, 0, 0]])


def test_bad_metric():
    with pytest.raises(BadMetric):
        orthonormalize(np.eye(2), metric=[[1, 0.5], [0, 1]])
    with pytest.raises(BadMetric):
        orthonormalize(np.eye(2), metric=[[1, 0], [0, -1]])


@pytest.mark.parametrize("k,d", [(2, 2), (2, 5), (4, 6), (6, 12)])
def test_metric_orthonormal_same_span_same_orientation(rng, k, d):
    a = rng.standard_normal((d, d))
    g = a.T @ a + 0.1 * np.eye(d)
    v = rng.standard_normal((k, d))
    e = orthonormalize(v, g)
    np.testing.assert_allclose(e @ g @ e.T, np.eye(k), atol=1e-12)
    # e = C v with C lower triangular, positive diagonal
    c = np.linalg.lstsq(v.T, e.T, rcond=None)[0].T
    np.testing.assert_allclose(c @ v, e, atol=1e-10)
    assert np.linalg.det(c) > 0
    np.testing.assert_allclose(np.triu(c, 1), 0, atol=1e-10)


# -- pfaffian and the matching oracle


def test_pfaffian_2x2():
    assert pfaffian([[0, 1], [-1, 0]]) == 1.0
    assert wedge_power_oracle([[0, 1], [-1, 0]]) == 1.0


def test_pfaffian_blocks_multiply():
    assert pfaffian(block_matrix([0.5, -0.25])) == pytest.approx(-0.125, abs=1e-16)


def test_odd_dimension():
    with pytest.raises(OddDimension):
        pfaffian(np.zeros((3, 3)))


def test_non_skew_rejected():
    with pytest.raises(NotSkew):
        pfaffian([[0, 1], [1, 0]])


def test_4x4_three_matchings(rng):
    a = random_skew(rng, 4)
    hand = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
    assert wedge_power_oracle(a) == pytest.approx(hand, rel=1e-14)
    assert pfaffian(a) == pytest.approx(hand, rel=1e-14)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_zero_row_gives_zero(rng, n):
    a = random_skew(rng, n)
    a[n // 2, :] = 0
    a[:, n // 2] = 0
    assert wedge_power_oracle(a) == 0.0
    assert pfaffian(a) == pytest.approx(0.0, abs=1e-12)


def test_oracle_size_cap():
    with pytest.raises(TooLarge):
        wedge_power_oracle(np.zeros((14, 14)))


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_matching_count(n):
    rows, cols, signs = perfect_matchings(n)
    double_factorial = int(np.prod(np.arange(n - 1, 0, -2)))
    assert len(signs) == double_factorial
    assert np.all(rows < cols)


def test_matching_signs_against_permutation_expansion(rng):
    # Pf = 1 / (2^m m!) sum over all permutations of sgn * prod a[s(2i), s(2i+1)]
    n = 6
    a = random_skew(rng, n)
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inv * np.prod([a[perm[2 * i], perm[2 * i + 1]] for i in range(n // 2)])
    total /= 2 ** (n // 2) * 6
    assert wedge_power_oracle(a) == pytest.approx(total, rel=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_pfaffian_matches_oracle(rng, n):
    for _ in range(20):
        a = random_skew(rng, n)
        assert rel_err(pfaffian(a), wedge_power_oracle(a)) <= 1e-10


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_householder_path_matches_expansion(rng, n):
    for _ in range(10):
        a = random_skew(rng, n)
        assert rel_err(_pf_householder(a), _pf_expand(a)) <= 1e-12


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 16, 20, 30])
def test_pfaffian_squared_is_det(rng, n):
    a = random_skew(rng, n)
    assert rel_err(pfaffian(a) ** 2, np.linalg.det(a)) <= 1e-9


@pytest.mark.parametrize("n", [2, 4, 6, 10, 12])
def test_pfaffian_congruence(rng, n):
    a = random_skew(rng, n)
    for proper in (True, False):
        r = random_rotation(rng, n, proper)
        lhs = pfaffian(SkewMatrix(r.T @ a @ r, symmetrize=True))
        assert rel_err(lhs, np.linalg.det(r) * pfaffian(a)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_pfaffian_oracle_property(m, seed):
    a = random_skew(np.random.default_rng(seed), 2 * m)
    assert rel_err(pfaffian(a), wedge_power_oracle(a)) <= 1e-10


def test_skew_matrix_is_exactly_antisymmetric(rng):
    a = rng.standard_normal((6, 6))
    s = SkewMatrix(a, symmetrize=True)
    assert np.array_equal(s.array, -s.array.T)
    assert SkewMatrix.from_upper(s.upper(), 6) == s


# -- canonical form


def _check_canonical(a, c):
    r = c.rotation
    n = a.shape[0]
    assert np.abs(r.T @ r - np.eye(n)).max() <= 1e-12
    assert abs(np.linalg.det(r) - 1) <= 1e-12
    assert np.abs(r.T @ a @ r - block_matrix(c.lambdas)).max() <= 1e-10 * (1 + np.abs(a).max())
    assert np.abs(c.reconstruct() - a).max() <= 1e-10 * (1 + np.abs(a).max())
    mags = np.abs(c.lambdas)
    assert np.all(np.diff(mags) <= 1e-12)


def test_block_input_is_own_canonical_form():
    a = block_matrix([0.9, 0.3])
    c = skew_canonical(a)
    _check_canonical(a, c)
    np.testing.assert_allclose(c.lambdas, [0.9, 0.3], atol=1e-15)
    # per-block: each rotation block maps the coordinate plane to itself
    r = np.abs(c.rotation)
    np.testing.assert_allclose(r[:2, 2:], 0, atol=1e-15)
    np.testing.assert_allclose(r[2:, :2], 0, atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_zero_matrix(n):
    c = skew_canonical(np.zeros((n, n)))
    assert np.all(c.lambdas == 0)
    _check_canonical(np.zeros((n, n)), c)


@pytest.mark.parametrize(
    "lams",
    [[0.9, 0.3], [1.0, -0.5, 0.25], [0.7, 0.7, 0.2], [2.0, 0.0, 0.0, -1.0], [0.5, 0.5, 0.5, 0.5], [-0.3]],
)
def test_conjugated_blocks_recovered(rng, lams):
    n = 2 * len(lams)
    r0 = random_rotation(rng, n)
    a = r0 @ block_matrix(lams) @ r0.T
    c = skew_canonical(SkewMatrix(a, symmetrize=True))
    _check_canonical(a, c)
    np.testing.assert_allclose(np.sort(np.abs(c.lambdas)), np.sort(np.abs(lams)), atol=1e-10)
    assert np.prod(c.lambdas) == pytest.approx(pfaffian(SkewMatrix(a, symmetrize=True)), abs=1e-10)


def test_tie_order_prefers_nonnegative():
    # det(rotation) = +1 forces one negative entry here; it must come last among ties
    c = skew_canonical(block_matrix([0.5, -0.5]))
    assert list(c.lambdas) == pytest.approx([0.5, -0.5])


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_canonical_random(rng, n):
    for _ in range(10):
        a = random_skew(rng, n)
        c = skew_canonical(a)
        _check_canonical(a, c)
        assert rel_err(np.prod(c.lambdas), pfaffian(a)) <= 1e-10


@pytest.mark.parametrize("n", [4, 6, 10])
def test_singular_values_invariant(rng, n):
    a = random_skew(rng, n)
    r = random_rotation(rng, n, proper=False)
    s1 = np.linalg.svd(a, compute_uv=False)
    s2 = np.linalg.svd(r.T @ a @ r, compute_uv=False)
    np.testing.assert_allclose(s1, s2, atol=1e-9)
    lam = np.abs(skew_canonical(a).lambdas)
    np.testing.assert_allclose(np.repeat(lam, 2), s1, atol=1e-9)
