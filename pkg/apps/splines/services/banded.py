"""
Banded matrix containers used by the difference, Gram and penalty matrices.

Two layouts are used throughout:

* ``RowBand`` stores a rectangular matrix whose row ``i`` is nonzero only on
  columns ``i .. i + width - 1`` (difference matrices, Cholesky factors and the
  sparse root of a penalty).
* ``SymmetricBand`` stores a symmetric matrix in LAPACK upper form, the layout
  expected by ``scipy.linalg.cholesky_banded`` and ``cho_solve_banded``.

Dense arrays are only produced on export.
"""
import numpy as np
from scipy import sparse
from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded

from apps.splines.exceptions import InvalidArgumentError, NumericalError


class RowBand:
    """
    Row-banded matrix of shape (rows, cols).

    ``values[i, s]`` holds the entry at ``(i, i + s)``. Slots that fall outside
    the matrix (``i + s >= cols``) are kept at zero.
    """

    def __init__(self, values, cols):
        values = np.array(values, dtype=float, ndmin=2)
        rows, width = values.shape
        if cols < rows:
            raise InvalidArgumentError(f'row band needs cols >= rows, got {rows}x{cols}')
        for s in range(width):
            values[max(cols - s, 0):, s] = 0.0
        values.flags.writeable = False
        self.values = values
        self.cols = int(cols)

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def upper(self):
        """Number of super-diagonals in the band"""
        return self.width - 1

    @property
    def shape(self):
        return (self.rows, self.cols)

    @classmethod
    def from_dense(cls, matrix, upper):
        matrix = np.asarray(matrix, dtype=float)
        rows, cols = matrix.shape
        values = np.zeros((rows, upper + 1))
        for s in range(upper + 1):
            stop = min(rows, cols - s)
            if stop > 0:
                values[:stop, s] = matrix[np.arange(stop), np.arange(stop) + s]
        return cls(values, cols)

    def to_dense(self):
        out = np.zeros(self.shape)
        for s in range(self.width):
            stop = min(self.rows, self.cols - s)
            if stop > 0:
                out[np.arange(stop), np.arange(stop) + s] = self.values[:stop, s]
        return out

    def to_sparse(self):
        rows, cols, data = self.triplets()
        return sparse.csr_matrix((data, (rows, cols)), shape=self.shape)

    def triplets(self):
        """Row indices, column indices and values of the stored band"""
        row_idx, offset = np.meshgrid(np.arange(self.rows), np.arange(self.width), indexing='ij')
        col_idx = row_idx + offset
        inside = col_idx < self.cols
        return row_idx[inside], col_idx[inside], self.values[inside]

    def matvec(self, vector):
        vector = np.asarray(vector, dtype=float)
        if vector.shape[0] != self.cols:
            raise InvalidArgumentError(f'expected a vector of length {self.cols}, got {vector.shape[0]}')
        padded = np.concatenate([vector, np.zeros((self.width,) + vector.shape[1:])])
        out = np.zeros((self.rows,) + vector.shape[1:])
        for s in range(self.width):
            weights = self.values[:, s]
            out += weights.reshape((-1,) + (1,) * (vector.ndim - 1)) * padded[s:s + self.rows]
        return out

    def __matmul__(self, other):
        if not isinstance(other, RowBand):
            return self.matvec(other)
        if self.cols != other.rows:
            raise InvalidArgumentError(f'cannot multiply {self.shape} by {other.shape}')
        out = np.zeros((self.rows, self.width + other.width - 1))
        padded = np.vstack([other.values, np.zeros((self.width, other.width))])
        for u in range(self.width):
            out[:, u:u + other.width] += self.values[:, u, None] * padded[u:u + self.rows]
        return RowBand(out, other.cols)

    def gram(self):
        """RᵀR as a symmetric band"""
        return SymmetricBand.from_sparse(self.to_sparse().T @ self.to_sparse(), self.upper)

    def scaled(self, factor):
        return RowBand(self.values * factor, self.cols)

    def __repr__(self):
        return f'RowBand(shape={self.shape}, upper={self.upper})'


class SymmetricBand:
    """
    Symmetric n x n band matrix in LAPACK upper storage.

    ``ab[upper + i - j, j]`` holds entry ``(i, j)`` for ``i <= j``.
    """

    def __init__(self, ab):
        ab = np.array(ab, dtype=float, ndmin=2)
        ab.flags.writeable = False
        self.ab = ab

    @property
    def n(self):
        return self.ab.shape[1]

    @property
    def upper(self):
        return self.ab.shape[0] - 1

    @property
    def shape(self):
        return (self.n, self.n)

    @classmethod
    def from_sparse(cls, matrix, upper):
        matrix = sparse.csr_matrix(matrix)
        n = matrix.shape[0]
        ab = np.zeros((upper + 1, n))
        for s in range(min(upper, n - 1) + 1):
            ab[upper - s, s:] = matrix.diagonal(s)
        return cls(ab)

    @classmethod
    def from_dense(cls, matrix, upper):
        return cls.from_sparse(sparse.csr_matrix(np.asarray(matrix, dtype=float)), upper)

    def diagonal(self, offset=0):
        return np.array(self.ab[self.upper - offset, offset:])

    def to_sparse(self):
        diagonals, offsets = [], []
        for s in range(min(self.upper, self.n - 1) + 1):
            diag = self.diagonal(s)
            diagonals.append(diag)
            offsets.append(s)
            if s:
                diagonals.append(diag)
                offsets.append(-s)
        return sparse.diags(diagonals, offsets, shape=self.shape, format='csr')

    def to_dense(self):
        return self.to_sparse().toarray()

    def widened(self, upper):
        """Same matrix stored with a larger number of super-diagonals"""
        if upper < self.upper:
            raise InvalidArgumentError(f'cannot narrow a band from {self.upper} to {upper}')
        padding = np.zeros((upper - self.upper, self.n))
        return SymmetricBand(np.vstack([padding, self.ab]))

    def __add__(self, other):
        if self.n != other.n:
            raise InvalidArgumentError(f'dimension mismatch: {self.n} and {other.n}')
        upper = max(self.upper, other.upper)
        return SymmetricBand(self.widened(upper).ab + other.widened(upper).ab)

    def scaled(self, factor):
        return SymmetricBand(self.ab * factor)

    def matvec(self, vector):
        return self.to_sparse() @ np.asarray(vector, dtype=float)

    def cholesky(self):
        """
        Upper Cholesky factor U with UᵀU equal to this matrix.

        Raises NumericalError when the matrix is not positive definite.
        """
        try:
            factor = cholesky_banded(self.ab, lower=False, check_finite=True)
        except LinAlgError as exc:
            raise NumericalError(f'matrix is not positive definite: {exc}') from exc
        values = np.zeros((self.n, self.upper + 1))
        for s in range(self.upper + 1):
            values[:self.n - s, s] = factor[self.upper - s, s:]
        return CholeskyFactor(factor, RowBand(values, self.n))

    def __repr__(self):
        return f'SymmetricBand(n={self.n}, upper={self.upper})'


class CholeskyFactor:
    """Banded Cholesky factor kept in both LAPACK and row-band layouts"""

    def __init__(self, lapack, band):
        self.lapack = lapack
        self.band = band

    def solve(self, rhs):
        return cho_solve_banded((self.lapack, False), np.asarray(rhs, dtype=float), check_finite=False)
