"""Torus-valued projections of generic unipotent coordinates.

``psi_w`` sends a unipotent chart coordinate to the positive-diagonal
projection of a chamber comparison: the charted flag is moved by a Weyl
representative, pulled back through the chart, and compared against the
original inside the upper triangular subgroup.  Averaging the Weyl orbit of
these maps in log-space yields ``psi_general`` (invariant under centralizer
conjugation, equivariant under diagonal conjugation) and one more round of
averaging yields ``psi_tilde`` (equivariant under the full torus
normalizer).  When the longest element acts as inversion on the torus there
is a cheaper square-root formula, ``psi_minus_one``.

The module ends with hand-coded closed forms for size three over the complex
numbers (:func:`sl3_reference`), used as an independent cross-check of the
general pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormulaDomain, NotGeneric, NotOpposite, WrongGroupType
from .flag_boundary import iota
from .lie_context import TorusElement, UnipotentElement, pi_a, w0_is_minus_one


def psi_w(ctx, w, nu):
    """Chamber projection of a unipotent coordinate relative to ``w``.

    Computes the positive-diagonal projection of
    ``w0^-1 n^-1 w^-1 iota_w(n) w0``.  The output does not depend on the
    representative chosen for ``w`` (left centralizer twists cancel).

    Raises
    ------
    NotOpposite
        When the twisted action ``iota_w`` is undefined at ``nu``.
    """
    twisted = iota(ctx, w.rep, nu)
    w0_rep = ctx.w0_rep
    chain = (
        w0_rep.conj().T
        @ nu.inverse_matrix()
        @ w.rep.conj().T
        @ twisted.mat
        @ w0_rep
    )
    return pi_a(ctx, chain)


def psi_general(ctx, nu):
    """Log-space geometric mean of the longest-element conjugates of all
    chamber projections.

    Invariant under conjugation of ``nu`` by the torus centralizer and
    equivariant under conjugation by the positive diagonal (the diagonal
    comes out in front).  The reduction order is the context's fixed Weyl
    enumeration, so results are deterministic.

    Raises
    ------
    NotGeneric
        When some chamber projection is undefined at ``nu``.
    """
    logs = np.zeros(ctx.n)
    w0 = ctx.w0
    for w in ctx.weyl:
        try:
            projected = psi_w(ctx, w, nu)
        except NotOpposite as exc:
            raise NotGeneric(
                "all-chamber-projections-defined",
                margin=exc.margin,
                witness=exc.witness,
            ) from exc
        logs += np.log(w0.conjugate_diag(projected.diag))
    return TorusElement.from_log(logs / ctx.order)


def psi_minus_one(ctx, nu):
    """Inverse square root of the longest-element chamber projection.

    Only meaningful when the longest element acts as inversion on the torus
    (size two in this family); agrees with :func:`psi_general` there.

    Raises
    ------
    WrongGroupType
        When the longest element does not act as inversion.
    NotOpposite
        When the longest-element projection is undefined at ``nu``.
    """
    if not w0_is_minus_one(ctx):
        raise WrongGroupType("longest-element-acts-as-inversion")
    return psi_w(ctx, ctx.w0, nu).power(-0.5)


def psi_tilde(ctx, nu):
    """Second averaging pass, equivariant under the full torus normalizer.

    For each Weyl element the coordinate is moved by the twisted action,
    projected with :func:`psi_general`, conjugated back, and the results are
    combined as a log-space geometric mean in the context's fixed order.

    Raises
    ------
    NotGeneric
        When any of the moved coordinates leaves the generic cell.
    """
    logs = np.zeros(ctx.n)
    for w in ctx.weyl:
        try:
            moved = iota(ctx, w.rep, nu)
        except NotOpposite as exc:
            raise NotGeneric(
                "orbit-stays-generic", margin=exc.margin, witness=exc.witness
            ) from exc
        inner = psi_general(ctx, moved)
        logs += np.log(w.conjugate_diag_inv(inner.diag))
    return TorusElement.from_log(logs / ctx.order)


# ---------------------------------------------------------------------------
# Closed forms for size three over the complex numbers.
#
# Unipotent coordinates are read off as
#     [[1, x, z],
#      [0, 1, y],
#      [0, 0, 1]].
# The fixed generator representatives below realize the two simple
# reflections s (swapping the first two diagonal slots) and t (swapping the
# last two), their products, and the longest element w0 = sts.


@dataclass(frozen=True)
class Sl3Coords:
    """Unipotent coordinates (x, y, z) for size three."""

    x: complex
    y: complex
    z: complex

    def as_tuple(self):
        return (self.x, self.y, self.z)


SL3_GENERATORS = {
    "e": np.eye(3),
    "s": np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
    "t": np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]),
    "st": np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    "ts": np.array([[0.0, -1.0, 0.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]]),
    "w0": np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]]),
}

SL3_PERMUTATIONS = {
    "e": (0, 1, 2),
    "s": (1, 0, 2),
    "t": (0, 2, 1),
    "st": (1, 2, 0),
    "ts": (2, 0, 1),
    "w0": (2, 1, 0),
}

#: Denominators each closed form needs to be nonzero.
_SL3_DOMAINS = {
    "iota_s": ("x",),
    "iota_t": ("y",),
    "iota_st": ("y", "xy-z"),
    "iota_ts": ("x", "z"),
    "iota_w0": ("z", "xy-z"),
    "psi_s": ("x",),
    "psi_t": ("y",),
    "psi_st": ("y", "xy-z"),
    "psi_ts": ("x", "z"),
    "psi_w0": ("z", "xy-z"),
    "Psi": ("x", "y", "z", "xy-z"),
    "PsiPrime": ("x", "y", "z", "xy-z"),
    "PsiTilde": ("x", "y", "z", "xy-z"),
    "PsiTildePrime": ("x", "y", "z", "xy-z"),
}

SL3_REFERENCE_KINDS = tuple(_SL3_DOMAINS)


def sl3_unipotent(coords, dtype=np.complex128):
    """Unipotent element with the given (x, y, z) coordinates."""
    if isinstance(coords, Sl3Coords):
        x, y, z = coords.as_tuple()
    else:
        x, y, z = coords
    mat = np.eye(3, dtype=dtype)
    mat[0, 1] = x
    mat[1, 2] = y
    mat[0, 2] = z
    return UnipotentElement(mat)


def sl3_coords(nu):
    """Read (x, y, z) off a size-three unipotent element."""
    return Sl3Coords(
        complex(nu.mat[0, 1]), complex(nu.mat[1, 2]), complex(nu.mat[0, 2])
    )


def sl3_reference(kind, coords, tol=1e-12):
    """Closed-form size-three values for cross-checking the pipeline.

    Parameters
    ----------
    kind : str
        One of ``iota_{s,t,st,ts,w0}`` (returns :class:`Sl3Coords`),
        ``psi_{s,t,st,ts,w0}``, ``Psi``, ``PsiPrime``, ``PsiTilde`` or
        ``PsiTildePrime`` (return :class:`TorusElement`).  The primed kinds
        are alternative projections with the same equivariance, witnessing
        that the equivariance laws alone do not pin the map down.
    coords : Sl3Coords or 3-tuple
        Unipotent coordinates.
    tol : float
        Absolute threshold below which a required denominator counts as zero.

    Raises
    ------
    FormulaDomain
        When a required denominator vanishes within ``tol``.
    """
    if kind not in _SL3_DOMAINS:
        raise ValueError(f"unknown reference kind {kind!r}")
    if isinstance(coords, Sl3Coords):
        x, y, z = coords.as_tuple()
    else:
        x, y, z = (complex(c) for c in coords)
    corner = x * y - z
    values = {"x": x, "y": y, "z": z, "xy-z": corner}
    for name in _SL3_DOMAINS[kind]:
        if abs(values[name]) <= tol:
            raise FormulaDomain(
                f"{kind}-denominator-nonzero", margin=abs(values[name]), witness=name
            )

    if kind == "iota_s":
        return Sl3Coords(-1.0 / x, z, -y)
    if kind == "iota_t":
        return Sl3Coords(corner, -1.0 / y, z / y)
    if kind == "iota_st":
        return Sl3Coords(1.0 / (z - x * y), z / y, 1.0 / y)
    if kind == "iota_ts":
        return Sl3Coords(corner / x, -1.0 / z, -y / z)
    if kind == "iota_w0":
        return Sl3Coords(-x / corner, -y / z, 1.0 / z)

    ax, ay, az, ac = abs(x), abs(y), abs(z), abs(corner)
    if kind == "psi_s":
        return TorusElement([1.0, 1.0 / ax, ax])
    if kind == "psi_t":
        return TorusElement([1.0 / ay, ay, 1.0])
    if kind == "psi_st":
        return TorusElement([1.0 / ay, ay / ac, ac])
    if kind == "psi_ts":
        return TorusElement([1.0 / az, az / ax, ax])
    if kind == "psi_w0":
        return TorusElement([1.0 / az, az / ac, ac])
    if kind == "Psi":
        inner = np.array(
            [
                ax**2 * ac**2,
                ay**2 * az**2 / (ax**2 * ac**2),
                1.0 / (ay**2 * az**2),
            ]
        )
        return TorusElement(inner ** (1.0 / 6.0))
    if kind == "PsiPrime":
        inner = np.array(
            [ax**2 * az**2, ay**2 / ax**2, 1.0 / (ay**2 * az**2)]
        )
        return TorusElement(inner ** (1.0 / 6.0))
    if kind == "PsiTilde":
        inner = np.array(
            [
                ac * ax * az**2 / ay,
                ac * ay**2 / (ax**2 * az),
                ax / (ac**2 * ay * az),
            ]
        )
        return TorusElement(inner ** (1.0 / 6.0))
    # PsiTildePrime
    inner = np.array(
        [
            ac ** (2 / 3) * ax ** (2 / 3) * az ** (8 / 3) / ay ** (4 / 3),
            ac ** (2 / 3) * ay ** (8 / 3) / (ax ** (4 / 3) * az ** (4 / 3)),
            ax ** (2 / 3) / (ac ** (4 / 3) * ay ** (4 / 3) * az ** (4 / 3)),
        ]
    )
    return TorusElement(inner ** (1.0 / 6.0))
