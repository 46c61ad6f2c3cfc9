"""Full flags, oppositeness, and the unipotent chart on the opposite cell.

A flag is an invertible matrix modulo right multiplication by invertible
upper triangular matrices.  The base flag is the identity coset; the flag of
the longest Weyl representative is its distinguished opposite.  Two flags are
opposite exactly when an unpivoted elimination of the twisted quotient
succeeds, which is also how the chart and its inverse are computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotOpposite, NumericallySingular, PivotBreakdown
from .lie_context import GroupContext, UnipotentElement
from .matrix_kernel import eliminate, lu_unit_lower


@dataclass(frozen=True, eq=False)
class Flag:
    """An invertible representative of a full flag."""

    rep: np.ndarray
    ctx: GroupContext

    def same_as(self, other, tol=None):
        """Coset equality: the quotient must be upper triangular."""
        if tol is None:
            tol = self.ctx.tol.eq_rel
        quotient = np.linalg.solve(self.rep, other.rep)
        scale = float(np.max(np.abs(quotient)))
        lower = float(np.max(np.abs(np.tril(quotient, -1)))) if self.ctx.n > 1 else 0.0
        return lower <= tol * scale


@dataclass(frozen=True, eq=False)
class FlatRep:
    """A matrix moving the standard flat to the flat it represents.

    Representatives of the same flat differ by right multiplication by a
    monomial matrix (torus normalizer times positive diagonal).
    """

    g: np.ndarray
    ctx: GroupContext

    def same_as(self, other, tol=None):
        if tol is None:
            tol = self.ctx.tol.eq_rel
        quotient = np.linalg.solve(self.g, other.g)
        scale = float(np.max(np.abs(quotient)))
        if scale == 0.0 or not np.isfinite(scale):
            return False
        mask = np.abs(quotient) > tol * scale
        # exactly one surviving entry per row and per column
        return bool(np.all(mask.sum(axis=0) == 1) and np.all(mask.sum(axis=1) == 1))


class OppositenessResult(NamedTuple):
    """Boolean verdict plus the relative pivot margin that produced it."""

    opposite: bool
    margin: float

    def __bool__(self):
        return self.opposite


class GenericityResult(NamedTuple):
    ok: bool
    margin: float

    def __bool__(self):
        return self.ok


def flag_of(ctx, g):
    """Wrap a matrix as a flag, rejecting (numerically) singular input."""
    a = np.asarray(g, dtype=ctx.dtype)
    if a.shape != (ctx.n, ctx.n):
        raise ValueError(f"expected a {ctx.n}x{ctx.n} matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("flag representative must be finite")
    det = complex(np.linalg.det(a))
    if not np.isfinite(det) or abs(det) < 1e-250:
        raise NumericallySingular("flag representative is numerically singular")
    return Flag(a, ctx)


def base_flag(ctx):
    """The identity coset."""
    return Flag(np.eye(ctx.n, dtype=ctx.dtype), ctx)


def opposite_base_flag(ctx):
    """The flag of the longest Weyl representative."""
    return Flag(ctx.w0_rep.astype(ctx.dtype), ctx)


def is_opposite(ctx, x, y):
    """Whether two flags are in general position, with a margin.

    The test runs the unpivoted elimination on the longest-element twist of
    the quotient; the margin is the smallest relative pivot encountered.
    """
    quotient = np.linalg.solve(x.rep, y.rep)
    twisted = ctx.w0_rep.conj().T @ quotient
    _, _, margin, failed = eliminate(twisted, ctx.tol.pivot_rel)
    return OppositenessResult(failed is None, margin)


def chi(ctx, nu):
    """Chart from unipotent elements onto the cell opposite the base flag."""
    return Flag(nu.mat @ ctx.w0_rep, ctx)


def chi_inverse(ctx, y):
    """Unipotent coordinates of a flag opposite the base flag.

    Raises
    ------
    NotOpposite
        When the flag is not opposite the base flag (elimination breaks
        down); the witness names the vanishing leading minor.
    """
    twisted = ctx.w0_rep.conj().T @ y.rep
    try:
        lower, _ = lu_unit_lower(twisted, ctx.tol.pivot_rel)
    except PivotBreakdown as exc:
        raise NotOpposite(
            "opposite-to-base-flag",
            margin=exc.margin,
            witness=f"leading-minor-{exc.step + 1}",
        ) from exc
    n_mat = ctx.w0_rep @ lower @ ctx.w0_rep.conj().T
    n = ctx.n
    exact = np.triu(n_mat, 1) + np.eye(n, dtype=n_mat.dtype)
    return UnipotentElement(exact)


def sl3_degeneracy_witness(ctx, nu, tol=None):
    """For size three, name which of x, y, z, xy-z vanish for a unipotent
    ``[[1, x, z], [0, 1, y], [0, 0, 1]]``; None when none do."""
    if ctx.n != 3:
        return None
    if tol is None:
        tol = ctx.tol.pivot_rel
    x = nu.mat[0, 1]
    y = nu.mat[1, 2]
    z = nu.mat[0, 2]
    quantities = (("x", x), ("y", y), ("z", z), ("xy-z", x * y - z))
    scale = max(1.0, float(np.max(np.abs([x, y, z]))))
    vanished = [name for name, value in quantities if abs(value) <= tol * scale]
    return ",".join(vanished) if vanished else None


def iota(ctx, h, nu):
    """Twisted action of ``h`` on a unipotent chart coordinate.

    Moves the charted flag by ``h`` and pulls the result back through the
    chart.  Defined exactly when the moved flag stays opposite the base
    flag.  For torus-centralizer and diagonal ``h`` this is plain
    conjugation; for Weyl representatives it is a genuinely different map.
    """
    h_mat = np.asarray(h, dtype=ctx.dtype)
    moved = flag_of(ctx, h_mat @ nu.mat @ ctx.w0_rep)
    try:
        return chi_inverse(ctx, moved)
    except NotOpposite as exc:
        witness = sl3_degeneracy_witness(ctx, nu) or exc.witness
        raise NotOpposite(
            "twisted-action-defined", margin=exc.margin, witness=witness
        ) from exc


def _canonical_unitary_rep(ctx, g):
    """Deterministic unitary determinant-one representative of a flag."""
    q, r = np.linalg.qr(g)
    d = np.diagonal(r).copy()
    phase = d / np.abs(d)
    q = q * phase[None, :]
    if ctx.field == "real":
        if float(np.linalg.det(q)) < 0:
            q = q.copy()
            q[:, -1] *= -1.0
    else:
        det = complex(np.linalg.det(q))
        q = q * det ** (-1.0 / ctx.n)
    return q


def flat_from_pair(ctx, x, y):
    """Representative of the unique flat whose boundary contains an opposite
    pair of flags, with ``x`` at the base position and ``y`` at the
    longest-element position.

    Raises
    ------
    NotOpposite
        When the two flags are not opposite.
    """
    verdict = is_opposite(ctx, x, y)
    if not verdict:
        raise NotOpposite("pair-opposite", margin=verdict.margin)
    unitary = _canonical_unitary_rep(ctx, x.rep)
    nu = chi_inverse(ctx, flag_of(ctx, np.linalg.solve(unitary, y.rep)))
    return FlatRep(unitary @ nu.mat, ctx)


def flat_boundary(ctx, flat):
    """The Weyl orbit of flags in the boundary of a flat, in context order."""
    return [Flag(flat.g @ w.rep, ctx) for w in ctx.weyl]


def unipotent_cell_margins(ctx, nu, elements=None):
    """Aggregate oppositeness of a charted flag to the Weyl orbit of the
    base flat: returns (all_opposite, min margin)."""
    if elements is None:
        elements = ctx.weyl
    charted = chi(ctx, nu)
    ok = True
    margin = np.inf
    for w in elements:
        verdict = is_opposite(ctx, Flag(w.rep.astype(ctx.dtype), ctx), charted)
        margin = min(margin, verdict.margin)
        ok = ok and verdict.opposite
    return GenericityResult(ok, float(margin))


_MODE_ALIASES = {
    "triple": "triple",
    "tuple": "tuple",
    "pairwise": "pairwise-opposite",
    "pairwise-opposite": "pairwise-opposite",
    "n-opp": "n-opp",
    "nopp": "n-opp",
    "w0-opp": "w0-opp",
    "w0opp": "w0-opp",
}


def _triple_check(ctx, x, y, z):
    base = is_opposite(ctx, x, y)
    if not base:
        return GenericityResult(False, base.margin)
    flat = flat_from_pair(ctx, x, y)
    ok = True
    margin = base.margin
    for boundary_flag in flat_boundary(ctx, flat):
        verdict = is_opposite(ctx, boundary_flag, z)
        margin = min(margin, verdict.margin)
        if not verdict:
            ok = False
            break
    return GenericityResult(ok, margin)


def _membership_check(ctx, x, y, z, mode):
    base = is_opposite(ctx, x, y)
    if not base:
        raise NotOpposite("base-pair-opposite", margin=base.margin)
    flat = flat_from_pair(ctx, x, y)
    try:
        nu = chi_inverse(ctx, flag_of(ctx, np.linalg.solve(flat.g, z.rep)))
    except NotOpposite as exc:
        return GenericityResult(False, exc.margin if exc.margin is not None else 0.0)
    if mode == "w0-opp":
        elements = (ctx.weyl[0], ctx.w0)
    else:
        elements = ctx.weyl
    ok, margin = unipotent_cell_margins(ctx, nu, elements)
    return GenericityResult(ok, min(margin, base.margin))


def genericity_check(ctx, mode, flags):
    """Genericity predicates for flag configurations.

    Modes
    -----
    ``triple``
        First two flags opposite and the third opposite to every flag in the
        boundary of their flat.
    ``tuple``
        Every ordered triple of distinct indices passes ``triple``.
    ``pairwise-opposite``
        Every pair of flags is opposite.
    ``n-opp`` / ``w0-opp``
        Chart membership of the third flag after moving the first two to the
        standard positions; ``w0-opp`` only requires oppositeness to the two
        ends of the flat.  These two modes raise :class:`NotOpposite` when
        the base pair is not opposite, since the chart does not exist then.
    """
    if mode not in _MODE_ALIASES:
        raise ValueError(f"unknown genericity mode {mode!r}")
    mode = _MODE_ALIASES[mode]
    flags = list(flags)
    if mode in ("triple", "n-opp", "w0-opp") and len(flags) != 3:
        raise ValueError(f"mode {mode} takes exactly three flags")
    if len(flags) < 2:
        raise ValueError("need at least two flags")

    if mode == "triple":
        return _triple_check(ctx, *flags)
    if mode in ("n-opp", "w0-opp"):
        return _membership_check(ctx, *flags, mode=mode)
    if mode == "pairwise-opposite":
        ok = True
        margin = np.inf
        for i in range(len(flags)):
            for j in range(i + 1, len(flags)):
                verdict = is_opposite(ctx, flags[i], flags[j])
                margin = min(margin, verdict.margin)
                ok = ok and verdict.opposite
        return GenericityResult(ok, float(margin))
    # tuple mode: share the flat of each ordered pair across third indices
    if len(flags) < 3:
        raise ValueError("tuple mode needs at least three flags")
    margin = np.inf
    for i in range(len(flags)):
        for j in range(len(flags)):
            if i == j:
                continue
            base = is_opposite(ctx, flags[i], flags[j])
            margin = min(margin, base.margin)
            if not base:
                return GenericityResult(False, float(margin))
            boundary = flat_boundary(ctx, flat_from_pair(ctx, flags[i], flags[j]))
            for k in range(len(flags)):
                if k == i or k == j:
                    continue
                for boundary_flag in boundary:
                    verdict = is_opposite(ctx, boundary_flag, flags[k])
                    margin = min(margin, verdict.margin)
                    if not verdict:
                        return GenericityResult(False, float(margin))
    return GenericityResult(True, float(margin))
