"""Determinant-one positive-definite model of the symmetric space, with
flat projections and the Karcher mean.

A coset of the maximal compact subgroup is charted as the Hermitian
positive-definite matrix g·g*.  Maximal flats appear as congruence orbits of
the positive diagonal; projecting a boundary flag onto a flat reduces, after
pulling back by a flat representative, to one of the torus-valued
projections of :mod:`.projections`.  Multi-flag barycenters are Karcher
means of the projected feet, computed by the standard intrinsic fixed-point
iteration (globally convergent here since the space is nonpositively
curved).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NoConvergence,
    NotGeneric,
    NotOpposite,
    NotPositiveDefinite,
    NumericallySingular,
    WrongGroupType,
)
from .flag_boundary import chi_inverse, flag_of, flat_from_pair, genericity_check
from .lie_context import w0_is_minus_one
from .projections import psi_general, psi_minus_one, psi_tilde

_HERM_RTOL = 1e-6
_DET_ONE_TOL = 1e-6


def _herm(mat):
    return 0.5 * (mat + mat.conj().T)


@dataclass(frozen=True)
class SpdPoint:
    """Hermitian positive-definite matrix of determinant one.

    The constructor symmetrizes, verifies positivity, and renormalizes the
    determinant to exactly one (rejecting inputs whose determinant is not
    already close).
    """

    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("expected a square matrix")
        mat = mat.astype(np.complex128 if np.iscomplexobj(mat) else np.float64)
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix entries must be finite")
        scale = max(np.abs(mat).max(), 1e-300)
        if np.abs(mat - mat.conj().T).max() > _HERM_RTOL * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        mat = _herm(mat)
        eigvals = np.linalg.eigvalsh(mat)
        if eigvals[0] <= 0.0:
            raise NotPositiveDefinite(
                f"smallest eigenvalue {eigvals[0]:.3e} is not positive"
            )
        logdet = float(np.sum(np.log(eigvals)))
        if abs(logdet) > 1e-3:
            raise ValueError("determinant is not 1 within tolerance")
        mat = mat * np.exp(-logdet / mat.shape[0])
        object.__setattr__(self, "mat", mat)

    @property
    def n(self):
        return self.mat.shape[0]

    def same_as(self, other, tol=1e-8):
        return spd_distance(self, other) < tol


@dataclass(frozen=True)
class KarcherConfig:
    """Parameters of the intrinsic fixed-point iteration."""

    step: float = 1.0
    grad_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not 0.0 < self.step < 2.0:
            raise ValueError("step must lie in the open interval (0, 2)")
        if self.grad_tol <= 0.0:
            raise ValueError("grad_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def spd_of_coset(ctx, g):
    """Chart the coset of ``g`` as the positive-definite matrix g·g*."""
    g = np.asarray(g, dtype=ctx.dtype)
    if g.shape != (ctx.n, ctx.n):
        raise ValueError(f"expected a {ctx.n} x {ctx.n} matrix")
    det = np.linalg.det(g)
    if abs(abs(det) - 1.0) > _DET_ONE_TOL:
        raise NumericallySingular(
            f"|det| = {abs(det):.6e} is not 1 within tolerance"
        )
    return SpdPoint(g @ g.conj().T)


def _eigh_pd(mat):
    w, v = np.linalg.eigh(_herm(mat))
    if w[0] <= 0.0:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {w[0]:.3e} is not positive"
        )
    return w, v


def _herm_log_pd(mat):
    w, v = _eigh_pd(mat)
    return _herm((v * np.log(w)) @ v.conj().T)


def _herm_exp(mat):
    w, v = np.linalg.eigh(_herm(mat))
    return _herm((v * np.exp(w)) @ v.conj().T)


def spd_distance(x, y):
    """Invariant Riemannian distance between positive-definite matrices.

    Frobenius norm of log(x^{-1/2} y x^{-1/2}), computed through a Cholesky
    congruence (same eigenvalues, cheaper than a matrix square root).
    """
    low = np.linalg.cholesky(x.mat)
    inner = np.linalg.solve(low, np.linalg.solve(low, y.mat).conj().T)
    w = np.linalg.eigvalsh(_herm(inner))
    return float(np.linalg.norm(np.log(w)))


def _mean_tangent(x_mat, points):
    # mean of log(X^{-1/2} P X^{-1/2}) over the points, evaluated through
    # the Cholesky factor (unitarily equivalent, so the Frobenius norm and
    # the resulting iterate are identical to the square-root form)
    low = np.linalg.cholesky(x_mat)
    acc = np.zeros_like(x_mat)
    for p in points:
        inner = np.linalg.solve(low, np.linalg.solve(low, p.mat).conj().T)
        acc += _herm_log_pd(inner)
    return low, acc / len(points)


def karcher_gradient_norm(x, points):
    """Norm of the tangent gradient of the squared-distance objective at x."""
    _, tangent = _mean_tangent(x.mat, points)
    return float(np.linalg.norm(tangent))


def _mean_square_distance(x_mat, points):
    low = np.linalg.cholesky(x_mat)
    total = 0.0
    for p in points:
        inner = np.linalg.solve(low, np.linalg.solve(low, p.mat).conj().T)
        w = np.linalg.eigvalsh(_herm(inner))
        total += float(np.sum(np.log(w) ** 2))
    return 0.5 * total / len(points)


def karcher_mean(points, cfg=None):
    """Karcher mean of positive-definite determinant-one matrices.

    Iterates X <- X^{1/2} exp(d * mean_i log(X^{-1/2} P_i X^{-1/2})) X^{1/2}
    from the first point until the tangent gradient norm drops below
    ``cfg.grad_tol``.  The step d starts at ``cfg.step`` and is halved until
    the mean squared distance decreases (Armijo): the objective is convex
    along geodesics, so the damped step always makes progress, while a fixed
    unit step can overshoot and cycle when the points are widely spread.

    Raises
    ------
    NoConvergence
        After ``cfg.max_iter`` iterations; carries the last iterate and its
        gradient norm.
    """
    if len(points) == 0:
        raise ValueError("karcher_mean needs at least one point")
    if cfg is None:
        cfg = KarcherConfig()
    n = points[0].n

    def advance(low, tangent, step):
        cand = low @ _herm_exp(step * tangent) @ low.conj().T
        logdet = float(np.sum(np.log(np.linalg.eigvalsh(_herm(cand)))))
        return _herm(cand) * np.exp(-logdet / n)

    x = points[0].mat.copy()
    value = _mean_square_distance(x, points)
    trial = cfg.step
    safe = cfg.step
    for _ in range(cfg.max_iter):
        low, tangent = _mean_tangent(x, points)
        gnorm = float(np.linalg.norm(tangent))
        if gnorm < cfg.grad_tol:
            return SpdPoint(x)
        slack = 8.0 * np.finfo(float).eps * max(1.0, value)
        if gnorm < 100.0 * np.sqrt(slack):
            # objective differences are beneath float resolution here, so a
            # line search would be reading noise; run the plain fixed-point
            # update at the last step size that demonstrably contracted
            x = advance(low, tangent, safe)
            continue
        step = trial
        gnorm2 = gnorm * gnorm
        while True:
            cand = advance(low, tangent, step)
            cand_value = _mean_square_distance(cand, points)
            decrease = value - cand_value
            if decrease >= 1e-4 * step * gnorm2 - slack or step <= 2**-20:
                break
            step *= 0.5
        if decrease > slack:
            safe = step
        x, value = cand, cand_value
        trial = min(cfg.step, 2.0 * step)
    last = SpdPoint(x)
    grad = karcher_gradient_norm(last, points)
    if grad < cfg.grad_tol:
        return last
    raise NoConvergence(last, grad, cfg.max_iter)


def project_to_flat(ctx, g, z, projector):
    """Project the flag ``z`` onto the flat charted by ``g``.

    Pulls ``z`` back through ``g``, reads off the unipotent coordinate,
    applies the torus-valued ``projector``, and pushes the squared torus
    value forward: the result is g·diag(a²)·g*, a point of the flat
    {g·(positive diagonal)·g*}.
    """
    pulled = flag_of(ctx, np.linalg.solve(g, z.rep))
    nu = chi_inverse(ctx, pulled)
    a = projector(ctx, nu)
    d = a.diag.astype(ctx.dtype) ** 2
    return SpdPoint((g * d[np.newaxis, :]) @ g.conj().T)


def phi_flat(ctx, flat, x):
    """Flat-and-flag projection: the point of ``flat`` assigned to ``x``.

    Uses the fully averaged torus projection, so the value does not depend
    on which representative of the flat was stored (the representative is
    ambiguous up to the torus normalizer and the positive diagonal).

    Raises
    ------
    NotGeneric
        When ``x`` fails to be opposite to some boundary flag of the flat.
    """
    try:
        return project_to_flat(ctx, flat.g, x, psi_tilde)
    except NotOpposite as exc:
        raise NotGeneric(
            "flag-generic-for-flat", margin=exc.margin, witness=exc.witness
        ) from exc


def phi_triple(ctx, x, y, z, mode="generic"):
    """Project ``z`` onto the unique maximal flat joining ``x`` and ``y``.

    mode "generic" requires the triple to be generic and uses the averaged
    projection; mode "w0opp" requires only pairwise oppositeness but is
    available just when the longest Weyl element acts as inversion on the
    torus, where the cheaper square-root projection applies.

    Raises
    ------
    WrongGroupType
        Mode "w0opp" outside the inversion case.
    NotGeneric, NotOpposite
        Domain failures per mode.
    """
    if mode not in ("generic", "w0opp"):
        raise ValueError(f"unknown phi_triple mode {mode!r}")
    if mode == "w0opp":
        if not w0_is_minus_one(ctx):
            raise WrongGroupType("longest-element-acts-as-inversion")
        g = flat_from_pair(ctx, x, y).g
        return project_to_flat(ctx, g, z, psi_minus_one)
    try:
        g = flat_from_pair(ctx, x, y).g
        return project_to_flat(ctx, g, z, psi_general)
    except NotOpposite as exc:
        raise NotGeneric(
            "triple-generic", margin=exc.margin, witness=exc.witness
        ) from exc


def bar_q_feet(ctx, flags, mode="generic"):
    """Projection feet over all ordered distinct index triples (i, j, k)."""
    feet = []
    q = len(flags)
    for i in range(q):
        for j in range(q):
            if j == i:
                continue
            for k in range(q):
                if k == i or k == j:
                    continue
                feet.append(phi_triple(ctx, flags[i], flags[j], flags[k], mode))
    return feet


def bar_q(ctx, flags, mode="generic", cfg=None):
    """Barycenter of q >= 3 flags: Karcher mean of all projection feet.

    Symmetric in the input list; equivariant under the group action.  The
    genericity of the whole tuple is verified up front so a failure surfaces
    as a single domain error rather than partway through the feet.

    Raises
    ------
    NotGeneric, WrongGroupType, NoConvergence
    """
    if len(flags) < 3:
        raise ValueError("bar_q needs at least three flags")
    if mode not in ("generic", "w0opp"):
        raise ValueError(f"unknown bar_q mode {mode!r}")
    if mode == "w0opp" and not w0_is_minus_one(ctx):
        raise WrongGroupType("longest-element-acts-as-inversion")
    check_mode = "tuple" if mode == "generic" else "pairwise"
    verdict = genericity_check(ctx, check_mode, flags)
    if not verdict:
        raise NotGeneric("tuple-generic", margin=verdict.margin)
    return karcher_mean(bar_q_feet(ctx, flags, mode), cfg)
