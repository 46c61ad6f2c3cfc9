import numpy as np
import pytest

from flatbary import (
    DegenerateBoundary,
    DegeneratePair,
    HypPoint,
    INFINITY,
    KarcherConfig,
    SpdPoint,
    bar_q,
    boundary_flag,
    flag_of,
    halfplane_point_of_spd,
    homothety,
    hyp_bar3,
    hyp_distance,
    hyp_karcher_mean,
    hyp_project_triple,
    hyp_psi,
    hyp_w0_boundary,
    involution,
    is_infinity,
    make_context,
    mobius_normalize,
    phi_triple,
    spd_of_halfplane,
    translation,
)


def test_boundary_involution_values():
    assert is_infinity(hyp_w0_boundary(np.zeros(2)))
    assert np.allclose(hyp_w0_boundary(INFINITY), 0.0, atol=0.0)
    assert np.allclose(hyp_w0_boundary(np.array([1.0, 0.0])), [-1.0, 0.0],
                       atol=0.0)
    assert np.allclose(hyp_w0_boundary(np.array([3.0, 4.0])), [-0.12, 0.16],
                       atol=1e-15)


def test_boundary_involution_is_involutive(rng):
    for _ in range(25):
        v = rng.normal(size=3)
        if np.linalg.norm(v) < 1e-3:
            continue
        assert np.allclose(hyp_w0_boundary(hyp_w0_boundary(v)), v, atol=1e-12)


def test_interior_involution_is_involutive(rng):
    move = involution()
    for _ in range(15):
        p = HypPoint(rng.normal(size=2), float(np.exp(rng.normal())))
        back = move.apply_interior(move.apply_interior(p))
        assert np.allclose(back.horizontal, p.horizontal, atol=1e-12)
        assert abs(back.height - p.height) < 1e-12 * p.height


def test_psi_values_and_degeneracy():
    first, second = hyp_psi(np.array([3.0, 4.0]))
    assert abs(first - 0.04) < 1e-15
    assert abs(second - 5.0) < 1e-15
    with pytest.raises(DegenerateBoundary) as info:
        hyp_psi(np.zeros(2))
    assert info.value.predicate == "boundary-vector-nonzero"


def test_normalize_word_contents():
    word = mobius_normalize(INFINITY, np.zeros(2))
    assert word.word == ()
    word = mobius_normalize(np.zeros(2), INFINITY)
    assert word.word == (("invert",),)
    with pytest.raises(DegeneratePair):
        mobius_normalize(np.array([1.0]), np.array([1.0]))


def test_normalize_sends_pair_to_standard_position(rng):
    for trial in range(30):
        x = rng.normal(size=2) * 2.0
        y = rng.normal(size=2) * 2.0
        if np.linalg.norm(x - y) < 0.05:
            continue
        if trial % 3 == 0:
            x = INFINITY
        word = mobius_normalize(x, y)
        assert is_infinity(word.apply_boundary(x))
        assert np.allclose(word.apply_boundary(y), 0.0, atol=1e-10)


def test_project_standard_position():
    foot = hyp_project_triple(INFINITY, np.zeros(2), np.array([3.0, 4.0]))
    assert np.allclose(foot.horizontal, 0.0, atol=1e-12)
    assert abs(foot.height - 5.0) < 1e-12


def test_project_swap_invariance(rng):
    for _ in range(15):
        x, y, z = rng.normal(size=(3, 2)) * 2.0
        if min(np.linalg.norm(x - y), np.linalg.norm(x - z),
               np.linalg.norm(y - z)) < 0.05:
            continue
        a = hyp_project_triple(x, y, z)
        b = hyp_project_triple(y, x, z)
        assert np.allclose(a.horizontal, b.horizontal, atol=1e-9)
        assert abs(a.height - b.height) < 1e-9 * a.height


def test_project_rejects_repeated_vertex():
    v = np.array([1.0, 2.0])
    with pytest.raises(DegenerateBoundary):
        hyp_project_triple(v, np.zeros(2), v)


def _busemann(v, p):
    """Horofunction of an ideal point, normalized at (0, 1)."""
    if is_infinity(v):
        return -np.log(p.height)
    diff = np.linalg.norm(np.atleast_1d(v) - p.horizontal) ** 2
    return np.log((diff + p.height ** 2) / p.height)


def test_project_minimizes_horofunction(rng):
    """The foot of an ideal vertex has minimal Busemann value along the
    geodesic through the other two vertices."""
    for _ in range(10):
        x, y, z = rng.normal(size=(3, 2)) * 2.0
        if min(np.linalg.norm(x - y), np.linalg.norm(x - z),
               np.linalg.norm(y - z)) < 0.1:
            continue
        word = mobius_normalize(x, y)
        inverse = word.inverse()
        foot = hyp_project_triple(x, y, z)
        height = word.apply_interior(foot).height
        best = _busemann(z, foot)
        for delta in (-0.5, -0.1, -0.01, 0.01, 0.1, 0.5):
            on_geodesic = inverse.apply_interior(
                HypPoint(np.zeros(2), height * np.exp(delta)))
            assert _busemann(z, on_geodesic) >= best - 1e-10


def test_distance_vertical_line():
    p = HypPoint(np.zeros(2), 1.0)
    q = HypPoint(np.zeros(2), np.e)
    assert abs(hyp_distance(p, q) - 1.0) < 1e-12
    assert hyp_distance(p, p) == 0.0
    assert abs(hyp_distance(q, p) - 1.0) < 1e-12


def test_karcher_vertical_midpoint():
    p = HypPoint(np.zeros(1), 1.0)
    q = HypPoint(np.zeros(1), np.e ** 2)
    mean = hyp_karcher_mean([p, q])
    assert np.allclose(mean.horizontal, 0.0, atol=1e-10)
    assert abs(mean.height - np.e) < 1e-10


def test_bar3_symmetric_cases():
    left = np.array([-1.0])
    right = np.array([1.0])
    center = hyp_bar3(left, right, INFINITY)
    assert np.allclose(center.horizontal, 0.0, atol=1e-9)
    assert abs(center.height - np.sqrt(3.0)) < 1e-8

    v = np.array([3.0, 4.0])
    other = hyp_bar3(INFINITY, np.zeros(2), v)
    # the configuration is preserved by the reflection across the plane
    # through v/2, so the barycenter must sit on that plane
    assert abs(np.dot(other.horizontal, v / 5.0) - 2.5) < 1e-8


def test_bar3_permutation_invariance(rng):
    x, y, z = rng.normal(size=(3, 2)) * 2.0
    a = hyp_bar3(x, y, z)
    b = hyp_bar3(z, x, y)
    assert np.allclose(a.horizontal, b.horizontal, atol=1e-8)
    assert abs(a.height - b.height) < 1e-8 * a.height


def test_bar3_mobius_equivariance(rng):
    for _ in range(5):
        x, y, z = rng.normal(size=(3, 2)) * 2.0
        if min(np.linalg.norm(x - y), np.linalg.norm(x - z),
               np.linalg.norm(y - z)) < 0.1:
            continue
        move = translation(rng.normal(size=2)).then(
            homothety(float(np.exp(rng.normal())))).then(involution())
        lhs = hyp_bar3(move.apply_boundary(x), move.apply_boundary(y),
                       move.apply_boundary(z))
        rhs = move.apply_interior(hyp_bar3(x, y, z))
        assert np.allclose(lhs.horizontal, rhs.horizontal, atol=1e-7)
        assert abs(lhs.height - rhs.height) < 1e-7 * rhs.height


def test_halfplane_dictionary_round_trip(rng):
    assert np.allclose(spd_of_halfplane(HypPoint(np.zeros(1), 1.0)).mat,
                       np.eye(2), atol=0.0)
    for _ in range(20):
        p = HypPoint(rng.normal(size=1), float(np.exp(rng.normal())))
        back = halfplane_point_of_spd(spd_of_halfplane(p))
        assert np.allclose(back.horizontal, p.horizontal, atol=1e-12)
        assert abs(back.height - p.height) < 1e-12 * p.height


def test_boundary_flag_values():
    ctx = make_context(2, "real")
    assert np.allclose(boundary_flag(ctx, INFINITY).rep, np.eye(2), atol=0.0)
    got = boundary_flag(ctx, 3.0).rep
    assert np.allclose(got, [[3.0, -1.0], [1.0, 0.0]], atol=0.0)


def test_rank_one_models_agree(rng):
    """The matrix triple projection and the half-plane one compute the same
    foot through the boundary dictionary."""
    ctx = make_context(2, "real")
    for trial in range(20):
        u = rng.normal(size=3) * 2.0
        if min(abs(u[0] - u[1]), abs(u[0] - u[2]), abs(u[1] - u[2])) < 0.1:
            continue
        verts = [np.array([t]) for t in u]
        if trial % 4 == 1:
            verts[trial % 3] = INFINITY
        flags = [boundary_flag(ctx, v if is_infinity(v) else float(v[0]))
                 for v in verts]
        foot = phi_triple(ctx, flags[0], flags[1], flags[2])
        translated = halfplane_point_of_spd(foot)
        direct = hyp_project_triple(verts[0], verts[1], verts[2])
        assert np.allclose(translated.horizontal, direct.horizontal, atol=1e-8)
        assert abs(translated.height - direct.height) < 1e-8 * direct.height


def test_rank_one_barycenters_agree(rng):
    ctx = make_context(2, "real")
    cfg = KarcherConfig(max_iter=500)
    for _ in range(5):
        u = rng.normal(size=3) * 2.0
        if min(abs(u[0] - u[1]), abs(u[0] - u[2]), abs(u[1] - u[2])) < 0.2:
            continue
        flags = [boundary_flag(ctx, float(t)) for t in u]
        center = bar_q(ctx, flags, cfg=cfg)
        translated = halfplane_point_of_spd(center)
        direct = hyp_bar3(np.array([u[0]]), np.array([u[1]]),
                          np.array([u[2]]), cfg=cfg)
        assert np.allclose(translated.horizontal, direct.horizontal, atol=1e-7)
        assert abs(translated.height - direct.height) < 1e-7 * direct.height
