"""Field-generic dense factorizations for small matrices.

Everything here operates on plain numpy arrays (square, real or complex, of
modest size) and is pure: no state is kept, so the functions are safe to call
concurrently.  The elimination routine deliberately does *not* pivot; hitting
a negligible pivot is meaningful information for the callers (it detects that
the input left the open cell where the factorization exists) and is reported
through :class:`~flatbary.errors.PivotBreakdown`.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPositiveDefinite, NumericallySingular, PivotBreakdown

#: Relative pivot threshold, measured against the largest entry of the
#: active submatrix at each elimination step.
DEFAULT_PIVOT_RTOL = 1e-9

#: Cheap conditioning bound for the triangular/unitary split, estimated from
#: the triangular factor (entry spread over the smallest diagonal entry).
DEFAULT_DIAG_RATIO_BOUND = 1e12

#: Relative eigenvalue floor below which a Hermitian matrix is rejected as
#: not positive definite.
DEFAULT_PD_RTOL = 1e-12


def as_square(mat):
    """Coerce ``mat`` to a square float64/complex128 array.

    Raises
    ------
    ValueError
        If the input is not a finite square matrix.
    """
    a = np.asarray(mat)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError("expected a nonempty square matrix")
    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    a = a.astype(dtype)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def eliminate(mat, rel_pivot_tol=DEFAULT_PIVOT_RTOL):
    """Run unpivoted Gaussian elimination, reporting margins instead of raising.

    Returns
    -------
    (lower, upper, margin, failed_step)
        ``lower`` is unit lower triangular and ``upper`` upper triangular with
        ``lower @ upper == mat`` when ``failed_step`` is None.  ``margin`` is
        the smallest relative pivot magnitude seen (pivot over the largest
        entry of the active submatrix); ``failed_step`` is the zero-based step
        at which that margin fell below ``rel_pivot_tol``, or None on success.
    """
    a = as_square(mat)
    n = a.shape[0]
    lower = np.eye(n, dtype=a.dtype)
    upper = a.copy()
    margin = np.inf
    for k in range(n):
        scale = float(np.max(np.abs(upper[k:, k:])))
        if scale == 0.0:
            return lower, upper, 0.0, k
        rel = float(np.abs(upper[k, k])) / scale
        margin = min(margin, rel)
        if rel <= rel_pivot_tol:
            return lower, upper, margin, k
        if k + 1 < n:
            factors = upper[k + 1 :, k] / upper[k, k]
            lower[k + 1 :, k] = factors
            upper[k + 1 :, k:] -= np.outer(factors, upper[k, k:])
            upper[k + 1 :, k] = 0.0
    return lower, upper, margin, None


def lu_unit_lower(mat, rel_pivot_tol=DEFAULT_PIVOT_RTOL):
    """Factor ``mat = L @ U`` with L unit lower triangular, without pivoting.

    Parameters
    ----------
    mat : array_like
        Square invertible matrix.
    rel_pivot_tol : float
        Relative threshold below which a pivot counts as a breakdown.

    Returns
    -------
    (L, U) : pair of ndarray
        Unit lower triangular and upper triangular factors.

    Raises
    ------
    PivotBreakdown
        When some leading principal minor vanishes within tolerance.  The
        exception records the failing step and the relative pivot margin.
    """
    lower, upper, margin, failed = eliminate(mat, rel_pivot_tol)
    if failed is not None:
        raise PivotBreakdown(failed, margin)
    return lower, upper


def triangular_unitary_split(mat, diag_ratio_bound=DEFAULT_DIAG_RATIO_BOUND):
    """Factor ``mat = T @ Q`` with T upper triangular, diag(T) > 0, Q unitary.

    The factorization is computed from a QR decomposition of the
    row-reversed conjugate transpose, with the usual phase correction so the
    triangular diagonal comes out real and strictly positive.  It is unique
    for invertible input.

    Returns
    -------
    (T, Q) : pair of ndarray
        Upper triangular factor with strictly positive real diagonal, and a
        unitary factor.

    Raises
    ------
    NumericallySingular
        If the input is singular to working precision, or the triangular
        factor's entry spread exceeds ``diag_ratio_bound`` (a cheap
        condition estimate).
    """
    a = as_square(mat)
    flipped = a[::-1, :].conj().T
    q1, r1 = np.linalg.qr(flipped)
    d = np.diagonal(r1).copy()
    if float(np.min(np.abs(d))) == 0.0:
        raise NumericallySingular("matrix is numerically singular")
    phase = d / np.abs(d)
    q1 = q1 * phase[None, :]
    r1 = r1 / phase[:, None]
    # mat = J r1^H q1^H with J the row reversal, so T = J r1^H J, Q = J q1^H.
    t = r1.conj().T[::-1, ::-1]
    q = q1.conj().T[::-1, :]
    t = np.triu(t)
    diag = np.diagonal(t).real.copy()
    idx = np.diag_indices_from(t)
    t[idx] = diag
    estimate = float(np.max(np.abs(t))) / float(np.min(diag))
    if estimate > diag_ratio_bound:
        raise NumericallySingular(
            f"triangular factor spread {estimate:.3e} exceeds bound"
        )
    return t, q


def herm_pd_power(mat, lam, pd_rel_tol=DEFAULT_PD_RTOL):
    """Real power of a Hermitian positive definite matrix.

    Parameters
    ----------
    mat : array_like
        Hermitian positive definite matrix (symmetrized defensively).
    lam : float
        Exponent; ``lam = 0.5`` gives the unique positive definite square
        root, ``lam = -1`` the inverse.
    pd_rel_tol : float
        Relative eigenvalue floor for the positive definiteness check.

    Returns
    -------
    ndarray
        ``mat ** lam`` computed through the eigendecomposition, Hermitian by
        construction.

    Raises
    ------
    NotPositiveDefinite
        When the smallest eigenvalue is nonpositive within tolerance.
    """
    a = as_square(mat)
    h = (a + a.conj().T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(h)
    top = float(np.max(np.abs(eigvals)))
    if top == 0.0 or float(eigvals[0]) <= pd_rel_tol * top:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {eigvals[0]:.3e} fails the positivity floor"
        )
    powered = (eigvecs * np.power(eigvals, float(lam))) @ eigvecs.conj().T
    return (powered + powered.conj().T) / 2.0
