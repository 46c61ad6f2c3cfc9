import numpy as np
import pytest

from flatbary import (
    FlatRep,
    NotOpposite,
    UnipotentElement,
    base_flag,
    chi,
    chi_inverse,
    flag_of,
    flat_boundary,
    flat_from_pair,
    genericity_check,
    iota,
    is_opposite,
    opposite_base_flag,
    sl3_unipotent,
    sl3_coords,
    unipotent_cell_margins,
)
from flatbary.projections import SL3_GENERATORS


def _random_unipotent(ctx, rng, scale=1.0):
    mat = np.eye(ctx.n, dtype=ctx.dtype)
    idx = np.triu_indices(ctx.n, 1)
    vals = rng.normal(size=len(idx[0])) * scale
    if ctx.field == "complex":
        vals = vals + 1j * rng.normal(size=len(idx[0])) * scale
    mat[idx] = vals
    return UnipotentElement(mat)


def test_flag_same_as_ignores_triangular_factor(ctx3):
    rng = np.random.default_rng(0)
    g = rng.normal(size=(3, 3)) + 2.0 * np.eye(3)
    upper = np.triu(rng.normal(size=(3, 3))) + np.diag([1.0, 2.0, 3.0])
    assert flag_of(ctx3, g).same_as(flag_of(ctx3, g @ upper))
    assert not flag_of(ctx3, g).same_as(flag_of(ctx3, g + 0.3 * rng.normal(size=(3, 3))))


def test_base_and_opposite_base_are_opposite(any_ctx):
    verdict = is_opposite(any_ctx, base_flag(any_ctx), opposite_base_flag(any_ctx))
    assert verdict.opposite
    assert verdict.margin == 1.0
    degenerate = is_opposite(any_ctx, base_flag(any_ctx), base_flag(any_ctx))
    assert not degenerate.opposite


def test_is_opposite_is_symmetric(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(21)
    for _ in range(25):
        x = flag_of(ctx, rng.normal(size=(ctx.n, ctx.n)))
        y = flag_of(ctx, rng.normal(size=(ctx.n, ctx.n)))
        assert is_opposite(ctx, x, y).opposite == is_opposite(ctx, y, x).opposite


def test_chi_inverse_hand_example(ctx2):
    y = flag_of(ctx2, np.array([[-1.0, 1.0], [-1.0, 0.0]]))
    nu = chi_inverse(ctx2, y)
    assert np.allclose(nu.mat, [[1.0, 1.0], [0.0, 1.0]], atol=1e-14)


def test_chi_round_trip(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(31)
    for _ in range(30):
        nu = _random_unipotent(ctx, rng)
        back = chi_inverse(ctx, chi(ctx, nu))
        assert np.allclose(back.mat, nu.mat, atol=1e-12 * max(1.0, np.abs(nu.mat).max()))


def test_chi_inverse_rejects_non_opposite(any_ctx):
    with pytest.raises(NotOpposite) as info:
        chi_inverse(any_ctx, base_flag(any_ctx))
    assert info.value.witness == "leading-minor-1"


def test_iota_rank_one_inversion(ctx2):
    for t in (4.0, -0.7, 2.5):
        nu = UnipotentElement(np.array([[1.0, t], [0.0, 1.0]]))
        moved = iota(ctx2, ctx2.w0_rep, nu)
        assert np.allclose(moved.mat[0, 1], -1.0 / t, atol=1e-14)


def test_iota_longest_element_size_three(ctx3c):
    nu = sl3_unipotent((1.0, 1.0, 2.0))
    moved = iota(ctx3c, SL3_GENERATORS["w0"].astype(complex), nu)
    got = sl3_coords(moved).as_tuple()
    assert np.allclose(got, (1.0, -0.5, 0.5), atol=1e-13)


def test_iota_is_conjugation_on_diagonals(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(41)
    for _ in range(15):
        nu = _random_unipotent(ctx, rng)
        d = np.exp(rng.normal(size=ctx.n) * 0.5)
        d /= np.prod(d) ** (1.0 / ctx.n)
        h = np.diag(d).astype(ctx.dtype)
        moved = iota(ctx, h, nu)
        direct = h @ nu.mat @ np.linalg.inv(h)
        assert np.allclose(moved.mat, direct, atol=1e-11 * np.abs(direct).max())


def test_iota_composes(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(51)
    for _ in range(15):
        nu = _random_unipotent(ctx, rng, scale=0.8)
        g1 = np.eye(ctx.n, dtype=ctx.dtype) + 0.2 * rng.normal(size=(ctx.n, ctx.n))
        g2 = np.eye(ctx.n, dtype=ctx.dtype) + 0.2 * rng.normal(size=(ctx.n, ctx.n))
        try:
            combined = iota(ctx, g1 @ g2, nu)
            stepped = iota(ctx, g1, iota(ctx, g2, nu))
        except NotOpposite:
            continue
        assert np.allclose(combined.mat, stepped.mat,
                           atol=1e-10 * max(1.0, np.abs(combined.mat).max()))


def test_flat_from_pair_standard_positions(any_ctx):
    ctx = any_ctx
    flat = flat_from_pair(ctx, base_flag(ctx), opposite_base_flag(ctx))
    assert flat.same_as(FlatRep(np.eye(ctx.n, dtype=ctx.dtype), ctx))
    swapped = flat_from_pair(ctx, opposite_base_flag(ctx), base_flag(ctx))
    assert swapped.same_as(FlatRep(ctx.w0_rep.astype(ctx.dtype), ctx))


def test_flat_from_pair_puts_flags_at_the_ends(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(61)
    for _ in range(20):
        x = flag_of(ctx, rng.normal(size=(ctx.n, ctx.n)))
        y = flag_of(ctx, rng.normal(size=(ctx.n, ctx.n)))
        if not is_opposite(ctx, x, y):
            continue
        flat = flat_from_pair(ctx, x, y)
        assert flag_of(ctx, flat.g).same_as(x)
        assert flag_of(ctx, flat.g @ ctx.w0_rep).same_as(y)


def test_flat_from_pair_rejects_degenerate(ctx2):
    with pytest.raises(NotOpposite):
        flat_from_pair(ctx2, base_flag(ctx2), base_flag(ctx2))


def test_flat_boundary_order(ctx2):
    flat = flat_from_pair(ctx2, base_flag(ctx2), opposite_base_flag(ctx2))
    boundary = flat_boundary(ctx2, flat)
    assert len(boundary) == 2
    assert boundary[0].same_as(base_flag(ctx2))
    assert boundary[1].same_as(opposite_base_flag(ctx2))


def test_cell_margins_match_individual_checks(ctx3):
    rng = np.random.default_rng(71)
    nu = _random_unipotent(ctx3, rng)
    verdict = unipotent_cell_margins(ctx3, nu)
    margins = []
    charted = chi(ctx3, nu)
    for w in ctx3.weyl:
        single = is_opposite(ctx3, flag_of(ctx3, w.rep), charted)
        margins.append(single.margin)
    assert verdict.margin == min(margins)


def test_genericity_size_three_witness_cases(ctx3c):
    base = base_flag(ctx3c)
    far = opposite_base_flag(ctx3c)
    bad = chi(ctx3c, sl3_unipotent((1.0, 1.0, 1.0)))
    assert not genericity_check(ctx3c, "triple", [base, far, bad]).ok
    # x = 0 only breaks the full-orbit condition, not the two flat ends
    partial = chi(ctx3c, sl3_unipotent((0.0, 5.0, 1.0)))
    assert not genericity_check(ctx3c, "triple", [base, far, partial]).ok
    assert genericity_check(ctx3c, "w0opp", [base, far, partial]).ok
    good = chi(ctx3c, sl3_unipotent((2.0, 3.0, 1.0)))
    assert genericity_check(ctx3c, "triple", [base, far, good]).ok


def test_genericity_tuple_vs_triples(ctx2):
    rng = np.random.default_rng(81)
    flags = [flag_of(ctx2, rng.normal(size=(2, 2))) for _ in range(4)]
    verdict = genericity_check(ctx2, "tuple", flags)
    triples_ok = all(
        genericity_check(ctx2, "triple", [flags[i], flags[j], flags[k]]).ok
        for i in range(4) for j in range(4) for k in range(4)
        if len({i, j, k}) == 3
    )
    assert verdict.ok == triples_ok


def test_genericity_mode_validation(ctx2):
    flags = [base_flag(ctx2), opposite_base_flag(ctx2)]
    with pytest.raises(ValueError):
        genericity_check(ctx2, "sideways", flags)
    with pytest.raises(ValueError):
        genericity_check(ctx2, "triple", flags)
    assert genericity_check(ctx2, "pairwise", flags).ok
