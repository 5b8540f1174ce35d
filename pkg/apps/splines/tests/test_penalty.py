import numpy as np
import pytest
from scipy.integrate import trapezoid

from apps.simulations.services.acceptance import DEFAULT_GOLDEN_FILE, load_golden
from apps.splines.exceptions import InvalidArgumentError
from apps.splines.services.basis import BasisSpec, design_matrix
from apps.splines.services.knots import KnotVector, place_uniform
from apps.splines.services.oracles import penalty_oracle, random_knot_vector, relative_deviation
from apps.splines.services.penalty import (
    build_penalty,
    derivative_penalty,
    general_diff,
    gram,
    null_space_basis,
    standard_diff,
)


@pytest.fixture(scope='module')
def golden():
    return load_golden(DEFAULT_GOLDEN_FILE)


@pytest.mark.parametrize('m', [1, 2, 3])
def test_general_diff_golden(golden, m):
    kv, general, _ = golden
    np.testing.assert_allclose(general_diff(kv, 4, m).to_dense(), general[m], rtol=0, atol=1e-12)


def test_standard_diff_golden(golden):
    _, _, standard = golden
    for p, m, expected in standard:
        np.testing.assert_array_equal(standard_diff(p, m).to_dense(), expected)


def test_worked_example_first_row(worked_knots):
    first = general_diff(worked_knots, 4, 3).to_dense()[0]
    np.testing.assert_allclose(first, [-6, 26 / 3, -19 / 6, 1 / 2, 0, 0], rtol=1e-12)


@pytest.mark.parametrize('d', [2, 3, 4, 5, 6])
def test_uniform_knots_reduce_to_scaled_standard(d):
    kv = place_uniform((0.0, 2.0), 9, d)
    h = 0.2
    for m in range(1, d):
        expected = standard_diff(kv.p, m).to_dense() / h ** m
        np.testing.assert_allclose(general_diff(kv, d, m).to_dense(), expected, rtol=1e-12, atol=1e-12 * abs(expected).max())


def test_order_bound(worked_knots):
    with pytest.raises(InvalidArgumentError, match='m <= d - 1'):
        general_diff(worked_knots, 4, 4)
    with pytest.raises(InvalidArgumentError):
        build_penalty(worked_knots, 0, 'derivative')


def test_order_must_match_knots(worked_knots):
    with pytest.raises(InvalidArgumentError):
        general_diff(worked_knots, 3, 1)


def test_general_diff_annihilates_polynomials(uneven_basis):
    kv = uneven_basis.kv
    for m in range(1, kv.d):
        D = general_diff(kv, kv.d, m)
        H = null_space_basis(build_penalty(kv, m, 'difference-general'), uneven_basis)
        assert H.shape == (kv.p, m)
        np.testing.assert_allclose(D @ H, 0.0, atol=1e-10)


def test_standard_null_space_is_index_polynomials():
    kv = place_uniform((0, 1), 6, 4)
    penalty = build_penalty(kv, 3, 'difference-standard')
    H = null_space_basis(penalty, BasisSpec(kv))
    np.testing.assert_allclose(penalty.root.matvec(H), 0.0, atol=1e-12)


def test_gram_matches_quadrature(worked_knots):
    G = gram(worked_knots, 4, 2)
    lower = BasisSpec(worked_knots.lowered(2))
    x = np.linspace(0, 4, 40001)
    B = design_matrix(lower, x).to_dense()
    expected = trapezoid(B[:, :, None] * B[:, None, :], x, axis=0)
    np.testing.assert_allclose(G.to_dense(), expected, atol=1e-7)
    np.testing.assert_allclose(G.U.to_dense().T @ G.U.to_dense(), G.to_dense(), atol=1e-12)


@pytest.mark.parametrize('seed', range(10))
def test_sandwich_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    kv = random_knot_vector(rng)
    m = int(rng.integers(1, kv.d))
    penalty = derivative_penalty(kv, kv.d, m)
    assert relative_deviation(penalty.to_dense(), penalty_oracle(kv, m)) < 1e-8


def test_finite_difference_oracle_agrees(worked_knots):
    np.testing.assert_allclose(
        penalty_oracle(worked_knots, 2, method='finite-difference'),
        penalty_oracle(worked_knots, 2, method='scipy'),
        rtol=1e-4, atol=1e-4,
    )


@pytest.mark.parametrize('seed', range(8))
def test_sparse_root(seed):
    rng = np.random.default_rng(100 + seed)
    kv = random_knot_vector(rng)
    m = int(rng.integers(1, kv.d))
    penalty = derivative_penalty(kv, kv.d, m)
    K = penalty.root.to_dense()
    S = penalty.to_dense()
    np.testing.assert_allclose(K.T @ K, S, atol=1e-10 * max(1.0, abs(S).max()))
    assert K.shape == (kv.p - m, kv.p)
    # d nonzeros per row, d - 1 super-diagonals
    assert penalty.root.width == kv.d
    assert np.all(K[np.tril_indices_from(K, -1)] == 0)
    singular = np.linalg.svd(K, compute_uv=False)
    assert np.sum(singular > 1e-10 * singular.max()) == kv.p - m


@pytest.mark.parametrize('flavor', ['difference-standard', 'difference-general', 'derivative'])
def test_penalty_is_root_gram(worked_knots, flavor, rng):
    penalty = build_penalty(worked_knots, 2, flavor)
    beta = rng.normal(size=penalty.p)
    assert penalty.flavor == flavor
    assert penalty.quadratic_form(beta) == pytest.approx(beta @ penalty.to_dense() @ beta, rel=1e-10)
    assert penalty.bandwidth == (worked_knots.d - 1 if flavor == 'derivative' else 2)


def test_derivative_penalty_integrates_squared_derivative(worked_knots):
    # f(x) = x^2 has f'' = 2, so the penalty is 4 * (b - a)
    bs = BasisSpec(worked_knots)
    x = np.linspace(0, 4, 200)
    beta, *_ = np.linalg.lstsq(design_matrix(bs, x).to_dense(), x ** 2, rcond=None)
    penalty = derivative_penalty(worked_knots, 4, 2)
    assert penalty.quadratic_form(beta) == pytest.approx(16.0, rel=1e-9)


def test_unknown_flavor(worked_knots):
    with pytest.raises(InvalidArgumentError):
        build_penalty(worked_knots, 2, 'ridge')


def test_penalty_shapes():
    kv = KnotVector([0, 0, 0, 0.2, 0.7, 1, 1, 1], 3)
    penalty = build_penalty(kv, 2, 'derivative')
    assert penalty.diff.shape == (kv.p - 2, kv.p)
    assert penalty.gram.to_dense().shape == (kv.p - 2, kv.p - 2)


@pytest.mark.parametrize('flavor', ['difference-standard', 'difference-general', 'derivative'])
def test_null_dimension_equals_order(uneven_basis, flavor):
    kv = uneven_basis.kv
    for m in range(1, kv.d):
        eigenvalues = np.linalg.eigvalsh(build_penalty(kv, m, flavor).to_dense())
        assert np.sum(np.abs(eigenvalues) < 1e-10 * eigenvalues.max()) == m


def _line_residual(bs, flavor):
    H = null_space_basis(build_penalty(bs.kv, 2, flavor), bs)
    x = np.linspace(*bs.domain, 201)
    X = design_matrix(bs, x).to_dense() @ H
    coefficients, *_ = np.linalg.lstsq(X, x, rcond=None)
    return float(np.max(np.abs(X @ coefficients - x)))


def test_standard_null_space_misses_the_line_on_uneven_knots(uneven_basis):
    assert _line_residual(uneven_basis, 'difference-standard') > 1e-3
    assert _line_residual(uneven_basis, 'difference-general') < 1e-10
