import numpy as np
import pytest

from apps.splines.exceptions import InvalidArgumentError, NumericalError
from apps.splines.services.banded import RowBand, SymmetricBand


def random_spd(rng, n, upper):
    R = RowBand(rng.uniform(0.5, 1.5, (n, upper + 1)), n)
    return R.gram() + SymmetricBand.from_dense(np.eye(n), 0)


def test_row_band_dense_roundtrip(rng):
    values = rng.normal(size=(4, 3))
    band = RowBand(values, 6)
    dense = band.to_dense()
    assert dense.shape == (4, 6)
    np.testing.assert_array_equal(RowBand.from_dense(dense, 2).values, band.values)
    np.testing.assert_array_equal(band.to_sparse().toarray(), dense)


def test_slots_past_last_column_are_zeroed():
    band = RowBand(np.ones((3, 3)), 3)
    np.testing.assert_array_equal(band.to_dense(), np.triu(np.ones((3, 3))))
    assert band.values[2, 1] == 0 and band.values[2, 2] == 0


def test_band_product_matches_dense(rng):
    a = RowBand(rng.normal(size=(4, 2)), 5)
    b = RowBand(rng.normal(size=(5, 3)), 7)
    product = a @ b
    assert product.width == 4
    np.testing.assert_allclose(product.to_dense(), a.to_dense() @ b.to_dense(), atol=1e-14)


def test_matvec_accepts_matrices(rng):
    band = RowBand(rng.normal(size=(4, 3)), 6)
    X = rng.normal(size=(6, 2))
    np.testing.assert_allclose(band @ X, band.to_dense() @ X)
    with pytest.raises(InvalidArgumentError):
        band.matvec(np.ones(5))


def test_triplets_cover_the_band(rng):
    band = RowBand(rng.normal(size=(3, 2)), 4)
    rows, cols, values = band.triplets()
    assert len(rows) == 6
    dense = np.zeros((3, 4))
    dense[rows, cols] = values
    np.testing.assert_array_equal(dense, band.to_dense())


def test_symmetric_band_storage(rng):
    S = random_spd(rng, 7, 2)
    dense = S.to_dense()
    np.testing.assert_allclose(dense, dense.T)
    assert S.upper == 2
    np.testing.assert_allclose(S.diagonal(1), np.diag(dense, 1))
    np.testing.assert_allclose(SymmetricBand.from_dense(dense, 2).ab, S.ab)


def test_widen_and_add(rng):
    A = random_spd(rng, 6, 1)
    B = random_spd(rng, 6, 3)
    total = A + B
    assert total.upper == 3
    np.testing.assert_allclose(total.to_dense(), A.to_dense() + B.to_dense())
    with pytest.raises(InvalidArgumentError):
        B.widened(1)


def test_cholesky_solve(rng):
    S = random_spd(rng, 9, 3)
    factor = S.cholesky()
    U = factor.band.to_dense()
    np.testing.assert_allclose(U.T @ U, S.to_dense(), atol=1e-12)
    rhs = rng.normal(size=9)
    np.testing.assert_allclose(factor.solve(rhs), np.linalg.solve(S.to_dense(), rhs), rtol=1e-10)


@pytest.mark.parametrize('seed', range(20))
def test_banded_solve_matches_dense_solver(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 31))
    S = random_spd(rng, n, int(rng.integers(1, 4)))
    rhs = rng.normal(size=n)
    expected = np.linalg.solve(S.to_dense(), rhs)
    np.testing.assert_allclose(S.cholesky().solve(rhs), expected, rtol=1e-9, atol=1e-12)


def test_cholesky_of_indefinite_matrix():
    with pytest.raises(NumericalError):
        SymmetricBand.from_dense(np.array([[1.0, 2.0], [2.0, 1.0]]), 1).cholesky()
