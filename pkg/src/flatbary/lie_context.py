"""Group data for the determinant-one matrix groups over R and C.

A :class:`GroupContext` fixes the matrix size, the ground field, a tolerance
bundle, and a cached enumeration of the Weyl group by signed permutation
representatives of determinant one.  The torus, unipotent and Weyl element
types are thin wrappers around numpy arrays; all functions are pure and the
context is treated as immutable, so everything here is safe to share across
threads.

Conventions:

* the positive diagonal torus consists of vectors of strictly positive reals
  with product one,
* unipotent elements are unit upper triangular matrices,
* a Weyl element stores the permutation ``perm`` (images of ``0..n-1``) and a
  representative ``rep`` with ``rep[perm[j], j]`` nonzero; conjugating a
  diagonal matrix by ``rep`` permutes the diagonal exactly, signs cancel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import BadDimension, NumericallySingular
from .matrix_kernel import triangular_unitary_split

_FIELDS = ("real", "complex")

#: Absolute tolerance on ``|det - 1|`` accepted by :func:`iwasawa`.
DET_ONE_TOL = 1e-6


@dataclass(frozen=True)
class TolBundle:
    """Numerical thresholds used throughout a context."""

    pivot_rel: float = 1e-9
    eq_rel: float = 1e-9


@dataclass(frozen=True, eq=False)
class WeylElement:
    """A permutation together with a fixed determinant-one representative."""

    perm: tuple
    rep: np.ndarray
    inversions: int

    @cached_property
    def _perm_array(self):
        return np.asarray(self.perm, dtype=np.intp)

    @property
    def is_identity(self):
        return self.inversions == 0

    def conjugate_diag(self, diag):
        """Entries of ``rep @ diag(d) @ rep^{-1}`` (exact, signs cancel)."""
        d = np.asarray(diag, dtype=np.float64)
        out = np.empty_like(d)
        out[self._perm_array] = d
        return out

    def conjugate_diag_inv(self, diag):
        """Entries of ``rep^{-1} @ diag(d) @ rep``."""
        return np.asarray(diag, dtype=np.float64)[self._perm_array]


@dataclass(frozen=True, eq=False)
class TorusElement:
    """Positive diagonal with product one (up to roundoff)."""

    diag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=np.float64)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("torus diagonal must be a nonempty vector")
        if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
            raise ValueError("torus entries must be finite and strictly positive")
        object.__setattr__(self, "diag", d)

    @classmethod
    def identity(cls, n):
        return cls(np.ones(n))

    @classmethod
    def from_log(cls, logs):
        return cls(np.exp(np.asarray(logs, dtype=np.float64)))

    @property
    def log_diag(self):
        return np.log(self.diag)

    def matrix(self, dtype=np.float64):
        return np.diag(self.diag).astype(dtype)

    def times(self, other):
        return TorusElement(self.diag * other.diag)

    def inverse(self):
        return TorusElement(1.0 / self.diag)

    def power(self, lam):
        return TorusElement(self.diag ** float(lam))


def torus_power(a, lam):
    """Entrywise power of a torus element; product stays one."""
    return a.power(lam)


@dataclass(frozen=True, eq=False)
class UnipotentElement:
    """Unit upper triangular matrix with the structure stored exactly."""

    mat: np.ndarray

    @classmethod
    def from_matrix(cls, mat, tol=1e-9):
        """Validate and exactify a matrix that should be unit upper triangular."""
        a = np.asarray(mat)
        dtype = np.complex128 if np.iscomplexobj(a) else np.float64
        a = a.astype(dtype)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        n = a.shape[0]
        scale = max(1.0, float(np.max(np.abs(a))))
        strict_lower = np.tril(a, -1)
        diag_defect = np.abs(np.diagonal(a) - 1.0)
        if float(np.max(np.abs(strict_lower))) > tol * scale:
            raise ValueError("matrix has a nonzero strictly lower part")
        if float(np.max(diag_defect)) > tol * scale:
            raise ValueError("matrix diagonal is not one")
        exact = np.triu(a, 1) + np.eye(n, dtype=dtype)
        return cls(exact)

    @classmethod
    def identity(cls, n, dtype=np.float64):
        return cls(np.eye(n, dtype=dtype))

    @property
    def n(self):
        return self.mat.shape[0]

    def inverse_matrix(self):
        """Inverse through the nilpotent series; exact for exact input."""
        n = self.n
        nilpotent = np.triu(self.mat, 1)
        acc = np.eye(n, dtype=self.mat.dtype)
        term = np.eye(n, dtype=self.mat.dtype)
        for _ in range(n - 1):
            term = -term @ nilpotent
            acc = acc + term
        return acc


class Iwasawa(NamedTuple):
    a: TorusElement
    n: UnipotentElement
    k: np.ndarray


@dataclass(frozen=True, eq=False)
class GroupContext:
    """Size, field, tolerances and the cached Weyl enumeration."""

    n: int
    field: str
    tol: TolBundle
    weyl: tuple
    w0_index: int

    @property
    def dtype(self):
        return np.complex128 if self.field == "complex" else np.float64

    @property
    def w0(self):
        return self.weyl[self.w0_index]

    @property
    def w0_rep(self):
        return self.weyl[self.w0_index].rep

    @property
    def order(self):
        return len(self.weyl)


def _inversion_count(perm):
    n = len(perm)
    return sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])


def _signed_permutation(perm, inversions):
    n = len(perm)
    rep = np.zeros((n, n))
    for col, row in enumerate(perm):
        rep[row, col] = 1.0
    if inversions % 2:
        # flip one sign so the determinant is +1 rather than the permutation sign
        rep[perm[0], 0] = -1.0
    return rep


def _longest_element_rep(n):
    rep = np.zeros((n, n))
    for i in range(n):
        rep[i, n - 1 - i] = (-1.0) ** i
    if round(float(np.linalg.det(rep))) != 1:
        rep[0, n - 1] *= -1.0
    return rep


def make_context(n, field="real", tol=None):
    """Build a :class:`GroupContext` for size ``n`` over ``field``.

    Raises
    ------
    BadDimension
        For ``n < 2``.
    ValueError
        For an unknown field name.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise BadDimension("matrix size must be an integer")
    if n < 2:
        raise BadDimension(f"matrix size must be at least 2, got {n}")
    if field not in _FIELDS:
        raise ValueError(f"field must be one of {_FIELDS}, got {field!r}")
    if tol is None:
        tol = TolBundle()
    elements = []
    for perm in itertools.permutations(range(n)):
        inversions = _inversion_count(perm)
        elements.append(
            WeylElement(perm=perm, rep=_signed_permutation(perm, inversions),
                        inversions=inversions)
        )
    w0_index = len(elements) - 1  # lexicographically last permutation is the reversal
    assert elements[w0_index].perm == tuple(range(n - 1, -1, -1))
    elements[w0_index] = WeylElement(
        perm=elements[w0_index].perm,
        rep=_longest_element_rep(n),
        inversions=elements[w0_index].inversions,
    )
    return GroupContext(n=int(n), field=field, tol=tol,
                        weyl=tuple(elements), w0_index=w0_index)


def weyl_elements(ctx):
    """The Weyl group enumeration, in the context's fixed (lexicographic) order."""
    return list(ctx.weyl)


def weyl_by_perm(ctx, perm):
    """Look up the stored Weyl element with the given permutation."""
    target = tuple(int(p) for p in perm)
    for w in ctx.weyl:
        if w.perm == target:
            return w
    raise ValueError(f"no Weyl element with permutation {target}")


def pi_a(ctx, g):
    """Positive-diagonal projection of an invertible matrix.

    For ``g = a n k`` (positive diagonal times unit upper triangular times
    unitary) this returns ``a``.  For upper triangular input it agrees with
    the entrywise modulus of the diagonal.
    """
    t, _ = triangular_unitary_split(np.asarray(g, dtype=ctx.dtype))
    return TorusElement(np.diagonal(t).real.copy())


def iwasawa(ctx, g):
    """Decompose ``g = a n k`` with a positive diagonal, n unit upper
    triangular and k unitary.

    Raises
    ------
    NumericallySingular
        If the determinant is not one within :data:`DET_ONE_TOL`, or the
        matrix is too ill conditioned to split.
    """
    a_mat = np.asarray(g, dtype=ctx.dtype)
    if a_mat.shape != (ctx.n, ctx.n):
        raise ValueError(f"expected a {ctx.n}x{ctx.n} matrix")
    det = complex(np.linalg.det(a_mat))
    if abs(det - 1.0) > DET_ONE_TOL:
        raise NumericallySingular(f"determinant {det:.6g} is not 1")
    t, q = triangular_unitary_split(a_mat)
    diag = np.diagonal(t).real.copy()
    a = TorusElement(diag)
    n_mat = t / diag[:, None]
    return Iwasawa(a, UnipotentElement.from_matrix(n_mat, tol=1e-12), q)


def w0_is_minus_one(ctx):
    """Whether conjugation by the longest element inverts the whole torus.

    Checked exactly on the standard basis of torus generators; true for
    size 2 and false beyond in this family.
    """
    w0 = ctx.w0
    for i in range(ctx.n - 1):
        gen = np.ones(ctx.n)
        gen[i] = 2.0
        gen[i + 1] = 0.5
        if not np.array_equal(w0.conjugate_diag(gen), 1.0 / gen):
            return False
    return True


def sample_m(ctx, rng):
    """Random torus-centralizer element as a matrix.

    Real field: a diagonal of signs with product one.  Complex field: a
    unit-modulus diagonal with determinant one, i.e. the full diagonal
    subgroup of the unitary group rather than just signs.
    """
    if ctx.field == "real":
        signs = rng.integers(0, 2, ctx.n) * 2.0 - 1.0
        if float(np.prod(signs)) < 0:
            signs[-1] *= -1.0
        return np.diag(signs)
    theta = rng.uniform(0.0, 2.0 * np.pi, ctx.n)
    theta[-1] = -float(np.sum(theta[:-1]))
    return np.diag(np.exp(1j * theta))


def twist_representatives(ctx, rng):
    """Context with every Weyl representative left-multiplied by a random
    centralizer element.  Used to confirm outputs do not depend on the
    choice of representatives."""
    twisted = tuple(
        WeylElement(perm=w.perm, rep=sample_m(ctx, rng) @ w.rep,
                    inversions=w.inversions)
        for w in ctx.weyl
    )
    return replace(ctx, weyl=twisted)
