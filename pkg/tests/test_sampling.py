import numpy as np
import pytest

from flatbary import (
    GenerationExhausted,
    genericity_check,
    make_context,
    unipotent_cell_margins,
)
from flatbary.sampling import (
    default_rng,
    sample_boundary_vector,
    sample_flag_tuple,
    sample_generic_coords3,
    sample_sl,
    sample_torus,
    sample_unipotent,
)


def test_sample_sl_determinant_and_conditioning(any_ctx):
    ctx = any_ctx
    rng = default_rng(2)
    for _ in range(20):
        g = sample_sl(ctx, rng)
        assert abs(np.linalg.det(g) - 1.0) < 1e-10
        assert np.linalg.cond(g) < 1e4
    with pytest.raises(GenerationExhausted):
        sample_sl(ctx, rng, cond_cap=1.0000001, max_tries=30)


def test_sample_torus_properties(ctx3):
    rng = default_rng(3)
    for _ in range(20):
        a = sample_torus(ctx3, rng)
        assert np.all(a.diag > 0)
        assert abs(np.sum(np.log(a.diag))) < 1e-12


def test_sample_unipotent_margin(ctx3):
    rng = default_rng(5)
    for _ in range(10):
        nu = sample_unipotent(ctx3, rng, min_margin=0.05)
        verdict = unipotent_cell_margins(ctx3, nu)
        assert verdict.ok
        assert verdict.margin >= 0.05


def test_sample_coords3_floor():
    rng = default_rng(7)
    for _ in range(50):
        x, y, z = sample_generic_coords3(rng, floor=0.1)
        assert min(abs(x), abs(y), abs(z), abs(x * y - z)) >= 0.1


def test_sample_flag_tuple_margins(any_ctx):
    ctx = any_ctx
    rng = default_rng(11)
    flags = sample_flag_tuple(ctx, rng, 3, min_margin=0.01)
    assert len(flags) == 3
    verdict = genericity_check(ctx, "tuple", flags)
    assert verdict.ok
    assert verdict.margin >= 0.01


def test_sample_flag_tuple_is_reproducible():
    ctx = make_context(2, "real")
    a = sample_flag_tuple(ctx, default_rng(13), 3)
    b = sample_flag_tuple(ctx, default_rng(13), 3)
    for f, g in zip(a, b):
        assert np.array_equal(f.rep, g.rep)


def test_sample_boundary_vector_gap():
    rng = default_rng(17)
    for _ in range(30):
        v = sample_boundary_vector(rng, 2, floor=0.1)
        assert np.linalg.norm(v) >= 0.1
