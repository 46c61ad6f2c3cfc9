"""Upper half-space model of real hyperbolic space and its ideal-triangle
barycenter.

The boundary is R^{n-1} together with a distinguished point at infinity.
Isometries are handled synthetically, as words in translations, positive
homotheties, and one fixed boundary involution (inversion composed with a
flip of the first coordinate), each of which acts on both boundary and
interior points.  This keeps the rank-one computations in exactly the
coordinates where the closed forms live: the projection of an ideal vertex
onto the geodesic joining the pair (infinity, 0) is read off a homothety
parameter, and the general case is conjugated to that one by a short
normalizing word.

The three-point barycenter is the Karcher mean of the three projection
feet, computed in the hyperboloid model where the exponential and
logarithm maps are elementary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barycenter import KarcherConfig, SpdPoint
from .errors import DegenerateBoundary, DegeneratePair, NoConvergence
from .flag_boundary import Flag, flag_of


class _Infinity:
    """The distinguished boundary point at infinity (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(x):
    return isinstance(x, _Infinity)


def as_boundary(x):
    """Coerce a boundary point: INFINITY, a scalar, or a coordinate vector."""
    if is_infinity(x):
        return INFINITY
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise ValueError("boundary point must be a flat coordinate vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("boundary coordinates must be finite")
    return arr


def _same_boundary(x, y):
    if is_infinity(x) or is_infinity(y):
        return is_infinity(x) and is_infinity(y)
    return x.shape == y.shape and bool(np.array_equal(x, y))


@dataclass(frozen=True)
class HypPoint:
    """Interior point: horizontal coordinates plus a positive height."""

    horizontal: np.ndarray
    height: float

    def __post_init__(self):
        horiz = np.atleast_1d(np.asarray(self.horizontal, dtype=float))
        if not np.all(np.isfinite(horiz)):
            raise ValueError("horizontal coordinates must be finite")
        h = float(self.height)
        if not (np.isfinite(h) and h > 0.0):
            raise ValueError("height must be positive and finite")
        object.__setattr__(self, "horizontal", horiz)
        object.__setattr__(self, "height", h)

    @property
    def dim(self):
        return self.horizontal.shape[0] + 1


def _invert_boundary(x):
    # inversion in the unit sphere composed with negating the first
    # coordinate; exchanges 0 and infinity
    if is_infinity(x):
        return np.zeros(1)
    nrm2 = float(x @ x)
    if nrm2 == 0.0:
        return INFINITY
    out = x / nrm2
    out = out.copy()
    out[0] = -out[0]
    return out


def _invert_interior(p):
    full = np.append(p.horizontal, p.height)
    nrm2 = float(full @ full)
    out = full / nrm2
    out[0] = -out[0]
    return HypPoint(out[:-1], out[-1])


@dataclass(frozen=True)
class Mobius:
    """Word of boundary-and-interior isometry generators.

    Atoms are ``("translate", v)``, ``("scale", lam)`` with lam > 0, and
    ``("invert",)``; they are applied left to right.
    """

    word: tuple = ()

    def apply_boundary(self, x):
        x = as_boundary(x)
        for atom in self.word:
            if atom[0] == "translate":
                if not is_infinity(x):
                    x = x + atom[1]
            elif atom[0] == "scale":
                if not is_infinity(x):
                    x = atom[1] * x
            elif atom[0] == "invert":
                x = _invert_boundary(x)
            else:
                raise ValueError(f"unknown atom {atom[0]!r}")
        return x

    def apply_interior(self, p):
        for atom in self.word:
            if atom[0] == "translate":
                p = HypPoint(p.horizontal + atom[1], p.height)
            elif atom[0] == "scale":
                p = HypPoint(atom[1] * p.horizontal, atom[1] * p.height)
            elif atom[0] == "invert":
                p = _invert_interior(p)
            else:
                raise ValueError(f"unknown atom {atom[0]!r}")
        return p

    def inverse(self):
        inv = []
        for atom in reversed(self.word):
            if atom[0] == "translate":
                inv.append(("translate", -atom[1]))
            elif atom[0] == "scale":
                inv.append(("scale", 1.0 / atom[1]))
            else:
                inv.append(atom)
        return Mobius(tuple(inv))

    def then(self, other):
        return Mobius(self.word + other.word)


def translation(v):
    return Mobius((("translate", np.atleast_1d(np.asarray(v, dtype=float))),))


def homothety(lam):
    lam = float(lam)
    if not (np.isfinite(lam) and lam > 0.0):
        raise ValueError("homothety ratio must be positive")
    return Mobius((("scale", lam),))


def involution():
    return Mobius((("invert",),))


def hyp_w0_boundary(x):
    """Boundary involution (x - 2 x_1 e_1)/|x|^2, exchanging 0 and infinity."""
    return _invert_boundary(as_boundary(x))


def hyp_psi(v):
    """Homothety parameters (1/|v|^2, |v|) of the two torus projections
    attached to the boundary vector v.

    Raises
    ------
    DegenerateBoundary
        For v = 0.
    """
    v = as_boundary(v)
    if is_infinity(v):
        raise ValueError("expected a finite boundary vector")
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise DegenerateBoundary("boundary-vector-nonzero", witness="v")
    return 1.0 / nrm**2, nrm


def mobius_normalize(x, y):
    """Shortest generator word sending x to infinity and y to 0.

    Raises
    ------
    DegeneratePair
        When x and y coincide.
    """
    x = as_boundary(x)
    y = as_boundary(y)
    if _same_boundary(x, y):
        raise DegeneratePair("boundary-points-distinct")
    atoms = []
    if is_infinity(x):
        if np.any(y != 0.0):
            atoms.append(("translate", -y))
        return Mobius(tuple(atoms))
    if np.any(x != 0.0):
        atoms.append(("translate", -x))
    atoms.append(("invert",))
    if not is_infinity(y):
        image = _invert_boundary(y - x)
        if np.any(image != 0.0):
            atoms.append(("translate", -image))
    return Mobius(tuple(atoms))


def hyp_project_triple(x, y, z):
    """Orthogonal-projection foot of the ideal vertex z on the geodesic
    with endpoints x and y.

    After normalizing (x, y) to (infinity, 0) the geodesic is the vertical
    axis and the foot sits at height |image of z|; the answer is pulled
    back through the normalizing word.

    Raises
    ------
    DegeneratePair
        When x = y.
    DegenerateBoundary
        When z coincides with x or y.
    """
    word = mobius_normalize(x, y)
    image = word.apply_boundary(z)
    if is_infinity(image):
        raise DegenerateBoundary("vertex-distinct-from-endpoints", witness="z=x")
    nrm = float(np.linalg.norm(image))
    if nrm == 0.0:
        raise DegenerateBoundary("vertex-distinct-from-endpoints", witness="z=y")
    foot = HypPoint(np.zeros_like(image), nrm)
    return word.inverse().apply_interior(foot)


# -- hyperboloid model helpers (for the Karcher mean) -----------------------


def _embed(p):
    s = float(p.horizontal @ p.horizontal) + p.height**2
    t = p.height
    return np.concatenate(([(s + 1.0) / (2.0 * t)], p.horizontal / t,
                           [(s - 1.0) / (2.0 * t)]))


def _unembed(vec):
    t = 1.0 / (vec[0] - vec[-1])
    return HypPoint(vec[1:-1] * t, t)


def _minkowski(u, v):
    return float(u[0] * v[0] - u[1:] @ v[1:])


def _hyp_log(base, other):
    c = _minkowski(base, other)
    if c < 1.0:
        c = 1.0
    u = other - c * base
    nrm = np.sqrt(max(-_minkowski(u, u), 0.0))
    if nrm == 0.0:
        return np.zeros_like(base)
    return np.arccosh(c) * u / nrm


def _hyp_exp(base, tangent):
    nrm = np.sqrt(max(-_minkowski(tangent, tangent), 0.0))
    if nrm == 0.0:
        return base
    return np.cosh(nrm) * base + np.sinh(nrm) * tangent / nrm


def hyp_distance(p, q):
    return float(np.arccosh(max(_minkowski(_embed(p), _embed(q)), 1.0)))


def _hyp_objective(x, embedded):
    total = 0.0
    for e in embedded:
        total += np.arccosh(max(_minkowski(x, e), 1.0)) ** 2
    return 0.5 * total / len(embedded)


def hyp_karcher_mean(points, cfg=None):
    """Karcher mean of interior points, iterated in the hyperboloid model.

    Same damped gradient scheme as the positive-definite mean: the step is
    halved until the mean squared distance decreases, so thin
    configurations with far-apart points cannot make the iteration cycle.
    """
    if len(points) == 0:
        raise ValueError("need at least one point")
    if cfg is None:
        cfg = KarcherConfig()
    embedded = [_embed(p) for p in points]
    x = embedded[0]
    value = _hyp_objective(x, embedded)
    grad = np.inf
    trial = cfg.step
    safe = cfg.step
    for _ in range(cfg.max_iter):
        tangent = np.mean([_hyp_log(x, e) for e in embedded], axis=0)
        gnorm2 = max(-_minkowski(tangent, tangent), 0.0)
        grad = np.sqrt(gnorm2)
        if grad < cfg.grad_tol:
            return _unembed(x)
        slack = 8.0 * np.finfo(float).eps * max(1.0, value)
        if grad < 100.0 * np.sqrt(slack):
            # below float resolution of the objective the search would read
            # noise; iterate at the last step that demonstrably contracted
            x = _hyp_exp(x, safe * tangent)
            continue
        step = trial
        while True:
            cand = _hyp_exp(x, step * tangent)
            cand_value = _hyp_objective(cand, embedded)
            decrease = value - cand_value
            if decrease >= 1e-4 * step * gnorm2 - slack or step <= 2**-20:
                break
            step *= 0.5
        if decrease > slack:
            safe = step
        x, value = cand, cand_value
        trial = min(cfg.step, 2.0 * step)
    raise NoConvergence(_unembed(x), grad, cfg.max_iter)


def hyp_bar3(x, y, z, cfg=None):
    """Barycenter of the ideal triangle with vertices x, y, z.

    Karcher mean of the three orthogonal-projection feet, one per vertex
    onto the opposite geodesic.  Symmetric in the arguments and equivariant
    under the isometry words.
    """
    feet = [
        hyp_project_triple(x, y, z),
        hyp_project_triple(y, z, x),
        hyp_project_triple(z, x, y),
    ]
    return hyp_karcher_mean(feet, cfg)


# -- dictionary with the size-two group model -------------------------------


def boundary_flag(ctx, u):
    """Flag of the size-two real group matching the boundary point u."""
    if ctx.n != 2 or ctx.field != "real":
        raise ValueError("the dictionary needs the size-two real context")
    if is_infinity(u):
        return flag_of(ctx, np.eye(2))
    u = as_boundary(u)
    if u.shape != (1,):
        raise ValueError("expected a one-dimensional boundary point")
    return flag_of(ctx, np.array([[float(u[0]), -1.0], [1.0, 0.0]]))


def halfplane_point_of_spd(point):
    """Half-plane coordinates of a determinant-one positive 2x2 matrix."""
    mat = np.asarray(point.mat, dtype=float)
    if mat.shape != (2, 2):
        raise ValueError("expected a 2 x 2 matrix")
    r = mat[1, 1]
    return HypPoint(np.array([mat[0, 1] / r]), 1.0 / r)


def spd_of_halfplane(p):
    """Inverse dictionary: half-plane point to the positive matrix chart."""
    if p.horizontal.shape != (1,):
        raise ValueError("expected a point of the half-plane")
    xcoord = float(p.horizontal[0])
    t = p.height
    mat = np.array([[xcoord**2 + t**2, xcoord], [xcoord, 1.0]]) / t
    return SpdPoint(mat)
