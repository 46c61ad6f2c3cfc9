"""Seeded random generators for group elements, flags, and test instances.

All samplers take an explicit ``numpy.random.Generator`` so callers control
reproducibility.  Genericity-constrained samplers use rejection with a
margin floor: a candidate is kept only when the relevant pivot margins are
comfortably away from the breakdown threshold, which keeps downstream
comparisons well conditioned.
"""

from __future__ import annotations

import numpy as np

from .errors import GenerationExhausted
from .flag_boundary import flag_of, genericity_check, unipotent_cell_margins
from .lie_context import TorusElement, UnipotentElement, sample_m


def default_rng(seed):
    return np.random.default_rng(seed)


def _gauss_matrix(ctx, rng):
    g = rng.standard_normal((ctx.n, ctx.n))
    if ctx.field == "complex":
        g = (g + 1j * rng.standard_normal((ctx.n, ctx.n))) / np.sqrt(2.0)
    return g.astype(ctx.dtype)


def sample_sl(ctx, rng, cond_cap=1e4, max_tries=100):
    """Random determinant-one matrix with a condition-number cap."""
    for _ in range(max_tries):
        g = _gauss_matrix(ctx, rng)
        det = np.linalg.det(g)
        if abs(det) < 1e-2:
            continue
        if ctx.field == "real" and det < 0:
            g[0] *= -1.0
            det = -det
        g = g * (det ** (-1.0 / ctx.n))
        if np.linalg.cond(g) <= cond_cap:
            return g
    raise GenerationExhausted(
        f"no well-conditioned determinant-one sample in {max_tries} tries"
    )


def sample_torus(ctx, rng, spread=0.5):
    """Random positive diagonal of determinant one, log-normal entries."""
    logs = rng.normal(0.0, spread, ctx.n)
    logs -= logs.mean()
    return TorusElement(np.exp(logs))


def sample_unipotent(ctx, rng, scale=1.0, min_margin=0.02, max_tries=200):
    """Random unit upper triangular element whose chart coordinate is
    generic with pivot margins at least ``min_margin``."""
    n = ctx.n
    rows, cols = np.triu_indices(n, k=1)
    for _ in range(max_tries):
        mat = np.eye(n, dtype=ctx.dtype)
        vals = rng.standard_normal(rows.size) * scale
        if ctx.field == "complex":
            vals = (vals + 1j * rng.standard_normal(rows.size) * scale) / np.sqrt(2.0)
        mat[rows, cols] = vals
        nu = UnipotentElement(mat)
        verdict = unipotent_cell_margins(ctx, nu)
        if verdict.ok and verdict.margin >= min_margin:
            return nu
    raise GenerationExhausted(
        f"no generic unipotent sample with margin {min_margin} in {max_tries} tries"
    )


def sample_generic_coords3(rng, floor=0.05, max_tries=1000):
    """Random complex chart coordinates (x, y, z) for size three with all
    four denominators |x|, |y|, |z|, |xy - z| at least ``floor``."""
    for _ in range(max_tries):
        vals = (rng.standard_normal(3) + 1j * rng.standard_normal(3)) / np.sqrt(2.0)
        x, y, z = vals
        if min(abs(x), abs(y), abs(z), abs(x * y - z)) >= floor:
            return complex(x), complex(y), complex(z)
    raise GenerationExhausted(
        f"no generic size-three coordinates above floor {floor} in {max_tries} tries"
    )


def sample_ma(ctx, rng, spread=0.5):
    """Random element of the centralizer-times-diagonal subgroup, as a matrix."""
    m = sample_m(ctx, rng)
    a = sample_torus(ctx, rng, spread)
    return m @ a.matrix(ctx.dtype)


def sample_ta(ctx, rng, spread=0.5):
    """Random element of the torus normalizer times the positive diagonal."""
    w = ctx.weyl[rng.integers(ctx.order)]
    m = sample_m(ctx, rng)
    a = sample_torus(ctx, rng, spread)
    return w.rep @ m @ a.matrix(ctx.dtype)


def sample_flag_tuple(ctx, rng, q, mode="tuple", min_margin=1e-8,
                      max_tries=10000):
    """Tuple of q random flags passing the requested genericity check with
    margin at least ``min_margin``.

    Raises
    ------
    GenerationExhausted
        After ``max_tries`` rejected tuples.
    """
    for _ in range(max_tries):
        flags = [flag_of(ctx, sample_sl(ctx, rng)) for _ in range(q)]
        verdict = genericity_check(ctx, mode, flags)
        if verdict.ok and verdict.margin >= min_margin:
            return flags
    raise GenerationExhausted(
        f"no {mode}-generic {q}-tuple with margin {min_margin} in {max_tries} tries"
    )


def sample_boundary_vector(rng, dim, floor=0.05, max_tries=1000):
    """Random nonzero boundary vector for the half-space model."""
    for _ in range(max_tries):
        v = rng.standard_normal(dim)
        if np.linalg.norm(v) >= floor:
            return v
    raise GenerationExhausted(
        f"no boundary vector of norm at least {floor} in {max_tries} tries"
    )
