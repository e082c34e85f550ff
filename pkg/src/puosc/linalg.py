"""Small dense real linear algebra kernels.

Everything in the package runs through 4x4 (occasionally 16x16) matrices, so
the kernels below favour transparency over asymptotics: SVD-based nullspaces,
Gauss-Jordan inversion with an explicit pivot tolerance, and a fixed-order
scaling-and-squaring matrix exponential.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidInputError, SingularMatrixError

DEFAULT_TOL = 1e-9

# Taylor order / scaling threshold for expm.  At ||A|| <= _EXPM_THETA the
# order-8 remainder is below double rounding.
_EXPM_ORDER = 8
_EXPM_THETA = 0.1


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Validate and return a float copy of a 2-D matrix."""
    a = np.array(m, dtype=float)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_vector(v, size: int | None = None) -> np.ndarray:
    """Validate and return a float copy of a 1-D vector."""
    a = np.array(v, dtype=float)
    if a.ndim != 1:
        raise InvalidInputError(f"expected a vector, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("vector has non-finite entries")
    if size is not None and a.size != size:
        raise InvalidInputError(f"expected a vector of size {size}, got {a.size}")
    return a


def nullspace(m, tol: float = 1e-12) -> list[np.ndarray]:
    """Orthonormal kernel basis of ``m``.

    Uses the SVD as the rank-revealing factorization.  A right singular
    vector v belongs to the kernel when ||m v|| = sigma <= tol*(1 + ||m||),
    which makes the returned span maximal under that residual bound.
    """
    a = as_matrix(m)
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    _, sigma, vt = np.linalg.svd(a)
    thresh = tol * (1.0 + np.linalg.norm(a))
    basis = [vt[i] for i in range(len(sigma)) if sigma[i] <= thresh]
    # svd(full) rows beyond min(m, n) span the coordinate deficit exactly
    basis.extend(vt[i] for i in range(len(sigma), vt.shape[0]))
    return basis


def inverse(m, pivot_tol: float = 1e-12) -> np.ndarray:
    """Invert a square matrix by Gauss-Jordan with partial pivoting.

    Raises SingularMatrixError when a pivot falls below
    ``pivot_tol * max(1, max|entry|)``.
    """
    a = as_matrix(m, square=True)
    n = a.shape[0]
    floor = pivot_tol * max(1.0, float(np.max(np.abs(a)))) if a.size else pivot_tol
    work = np.hstack([a, np.eye(n)])
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(work[col:, col])))
        if abs(work[pivot_row, col]) < floor:
            raise SingularMatrixError(f"pivot {work[pivot_row, col]:.3e} below tolerance in column {col}")
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
        work[col] /= work[col, col]
        for row in range(n):
            if row != col and work[row, col] != 0.0:
                work[row] -= work[row, col] * work[col]
    return work[:, n:]


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with an order-8 Taylor kernel."""
    a = as_matrix(m, square=True)
    n = a.shape[0]
    norm = np.linalg.norm(a, ord=1)
    squarings = max(0, int(np.ceil(np.log2(norm / _EXPM_THETA)))) if norm > _EXPM_THETA else 0
    b = a / (2.0 ** squarings)
    # Horner evaluation of sum_{k<=order} b^k / k!
    result = np.eye(n) + b / _EXPM_ORDER
    for k in range(_EXPM_ORDER - 1, 0, -1):
        result = np.eye(n) + (b @ result) / k
    for _ in range(squarings):
        result = result @ result
    return result


def leading_minors(m, sym_tol: float = 1e-10) -> list[float]:
    """Determinants of the leading principal blocks of a symmetric matrix.

    Sylvester's criterion: all minors positive iff the matrix is positive
    definite.  Asymmetric input (beyond ``sym_tol`` relative) is rejected
    because the criterion is meaningless there.
    """
    a = as_matrix(m, square=True)
    scale = 1.0 + np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > sym_tol * scale:
        raise InvalidInputError("leading_minors requires a symmetric matrix")
    return [float(np.linalg.det(a[:k, :k])) for k in range(1, a.shape[0] + 1)]


def is_positive_definite(m, sym_tol: float = 1e-10) -> bool:
    """Sylvester test on the leading principal minors."""
    return all(d > 0.0 for d in leading_minors(m, sym_tol=sym_tol))
