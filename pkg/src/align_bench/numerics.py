"""Complex linear-algebra kernels shared by the whole workbench.

Conventions
-----------
A *diagonal operator* is stored as its diagonal: a 1-D complex array of
length M.  A *dense matrix* is a 2-D complex array.  Rank and subspace tests
normalize every column to unit Euclidean norm before factorizing: the
beamformer columns are products of many channel ratios and can span a huge
dynamic range, and normalization changes no span while keeping the pivot
threshold meaningful.

Rank is computed from a column-pivoted QR factorization (LAPACK zgeqp3): a
pivot counts as nonzero when its magnitude exceeds ``tol_rel`` times the
largest pivot magnitude.  Square systems are solved with partially pivoted
LU (LAPACK zgesv) after an explicit singularity screen.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionError, ParameterError, SingularDiagonalError, SingularMatrixError

#: Default relative pivot tolerance for rank decisions.
DEFAULT_RANK_TOL = 1e-9

#: Default magnitude floor below which a diagonal entry is treated as zero.
DEFAULT_DIAG_EPS = 1e-12


def _as_diagonal(d) -> np.ndarray:
    d = np.asarray(d, dtype=complex)
    if d.ndim != 1:
        raise DimensionError(f"diagonal operator must be 1-D, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ParameterError("diagonal operator contains non-finite entries")
    return d


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ParameterError("matrix contains non-finite entries")
    return a


def diag_apply(d, a) -> np.ndarray:
    """Apply a diagonal operator to a matrix or vector: scale row i by d[i]."""
    d = _as_diagonal(d)
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        if a.shape[0] != d.shape[0]:
            raise DimensionError(f"operator length {d.shape[0]} vs vector length {a.shape[0]}")
        return d * a
    a = _as_matrix(a)
    if a.shape[0] != d.shape[0]:
        raise DimensionError(f"operator length {d.shape[0]} vs matrix rows {a.shape[0]}")
    return d[:, None] * a


def diag_inverse(d, eps: float = DEFAULT_DIAG_EPS) -> np.ndarray:
    """Entrywise reciprocal of a diagonal operator.

    Raises :class:`SingularDiagonalError` naming the first offending index
    when any entry magnitude is at or below ``eps``.
    """
    d = _as_diagonal(d)
    mags = np.abs(d)
    bad = np.flatnonzero(mags <= eps)
    if bad.size:
        i = int(bad[0])
        raise SingularDiagonalError(i, float(mags[i]), eps)
    return 1.0 / d


def unit_columns(a) -> np.ndarray:
    """Scale every nonzero column to unit Euclidean norm (zero columns kept)."""
    a = _as_matrix(a)
    norms = np.linalg.norm(a, axis=0)
    return a / np.where(norms > 0.0, norms, 1.0)


def _qr_pivots(a: np.ndarray) -> np.ndarray:
    """Magnitudes of the R diagonal from a column-pivoted QR factorization."""
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros(0)
    r = scipy.linalg.qr(a, mode="r", pivoting=True)[0]
    return np.abs(np.diagonal(r))


def matrix_rank(a, tol_rel: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank of ``a`` (columns unit-normalized first).

    A pivot counts as nonzero when its magnitude exceeds ``tol_rel`` times
    the largest pivot magnitude.  An empty matrix has rank 0.
    """
    a = _as_matrix(a)
    piv = _qr_pivots(unit_columns(a))
    if piv.size == 0 or piv.max() == 0.0:
        return 0
    return int(np.count_nonzero(piv > tol_rel * piv.max()))


def span_inclusion_ranks(a, b, tol_rel: float = DEFAULT_RANK_TOL) -> tuple[bool, int, int]:
    """Test span(a) <= span(b); returns (included, rank(b), rank([b | a])).

    Both inputs are column-normalized, so the verdict depends only on the
    spans, never on per-column scaling.
    """
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"row mismatch: {a.shape[0]} vs {b.shape[0]}")
    rank_b = matrix_rank(b, tol_rel)
    rank_joint = matrix_rank(np.hstack([unit_columns(b), unit_columns(a)]), tol_rel)
    return rank_joint == rank_b, rank_b, rank_joint


def subspace_included(a, b, tol_rel: float = DEFAULT_RANK_TOL) -> bool:
    """True iff every column of ``a`` lies in the column span of ``b``."""
    return span_inclusion_ranks(a, b, tol_rel)[0]


def condition_indicator(a) -> float:
    """Cheap conditioning estimate: largest/smallest pivot magnitude ratio.

    Returns ``inf`` for singular or empty input.  This is a pivot-based
    indicator, not a true condition number; it is used for diagnostics and
    singularity screens only.
    """
    a = _as_matrix(a)
    piv = _qr_pivots(a)
    if piv.size == 0 or piv.min() == 0.0:
        return float("inf")
    return float(piv.max() / piv.min())


def solve_square(a, rhs, tol_rel: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Solve the square system ``a @ x = rhs`` with partially pivoted LU.

    Raises :class:`SingularMatrixError` carrying the pivot-ratio condition
    indicator when ``a`` is singular at ``tol_rel``.  ``rhs`` may be a
    vector or a matrix; the result has matching shape.
    """
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {a.shape}")
    rhs_arr = np.asarray(rhs, dtype=complex)
    if rhs_arr.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs rows {rhs_arr.shape[0]} vs matrix size {a.shape[0]}")
    if a.shape[0] == 0:
        return np.zeros_like(rhs_arr)
    piv = _qr_pivots(a)
    if piv.min() <= tol_rel * piv.max():
        cond = float("inf") if piv.min() == 0.0 else float(piv.max() / piv.min())
        raise SingularMatrixError("square system is singular at tolerance", cond)
    return np.linalg.solve(a, rhs_arr)
