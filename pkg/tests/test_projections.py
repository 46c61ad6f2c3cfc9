import numpy as np
import pytest

from flatbary import (
    FormulaDomain,
    NotGeneric,
    WrongGroupType,
    UnipotentElement,
    make_context,
    psi_general,
    psi_minus_one,
    psi_tilde,
    psi_w,
    sl3_coords,
    sl3_reference,
    sl3_unipotent,
    twist_representatives,
    weyl_by_perm,
)
from flatbary.projections import SL3_GENERATORS, SL3_PERMUTATIONS, SL3_REFERENCE_KINDS
from flatbary.flag_boundary import iota
from flatbary.sampling import sample_generic_coords3


def _rank_one(t):
    return UnipotentElement(np.array([[1.0, t], [0.0, 1.0]]))


def test_identity_element_projects_to_one(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(1)
    mat = np.eye(ctx.n, dtype=ctx.dtype)
    idx = np.triu_indices(ctx.n, 1)
    mat[idx] = rng.normal(size=len(idx[0]))
    nu = UnipotentElement(mat)
    diag = psi_w(ctx, ctx.weyl[0], nu).diag
    assert np.allclose(diag, 1.0, atol=1e-12)


def test_rank_one_hand_values(ctx2):
    nu = _rank_one(4.0)
    assert np.allclose(psi_w(ctx2, ctx2.w0, nu).diag, [0.25, 4.0], atol=1e-14)
    assert np.allclose(psi_general(ctx2, nu).diag, [2.0, 0.5], atol=1e-14)
    assert np.allclose(psi_minus_one(ctx2, nu).diag, [2.0, 0.5], atol=1e-14)
    assert np.allclose(psi_tilde(ctx2, nu).diag, [2.0, 0.5], atol=1e-14)


def test_rank_one_projections_coincide(ctx2):
    rng = np.random.default_rng(17)
    for _ in range(100):
        t = rng.normal() * 2.0
        if abs(t) < 1e-3:
            continue
        nu = _rank_one(t)
        a = psi_general(ctx2, nu).diag
        b = psi_minus_one(ctx2, nu).diag
        assert np.allclose(a, b, atol=1e-12 * a.max())
        assert np.allclose(a, [np.sqrt(abs(t)), 1.0 / np.sqrt(abs(t))],
                           atol=1e-12 * a.max())


def test_chamber_projection_simple_reflection(ctx3c):
    nu = sl3_unipotent((2.0, -3.0, 7.0))
    w = weyl_by_perm(ctx3c, SL3_PERMUTATIONS["s"])
    assert np.allclose(psi_w(ctx3c, w, nu).diag, [1.0, 0.5, 2.0], atol=1e-13)


def test_spot_values_at_one_one_two(ctx3c):
    nu = sl3_unipotent((1.0, 1.0, 2.0))
    cube = 2.0 ** (1.0 / 3.0)
    assert np.allclose(psi_general(ctx3c, nu).diag, [1.0, cube, 1.0 / cube],
                       atol=1e-13)
    sixth = 4.0 ** (1.0 / 6.0)
    want = [sixth, 2.0 ** (-1.0 / 6.0), 2.0 ** (-1.0 / 6.0)]
    assert np.allclose(psi_tilde(ctx3c, nu).diag, want, atol=1e-13)


def test_closed_forms_match_pipeline(ctx3c):
    """All size-three reference formulas against the generic pipeline."""
    rng = np.random.default_rng(23)
    worst = 0.0
    for _ in range(100):
        coords = sample_generic_coords3(rng)
        nu = sl3_unipotent(coords)
        for kind in SL3_REFERENCE_KINDS:
            value = sl3_reference(kind, coords)
            if kind.startswith("iota_"):
                name = kind[len("iota_"):]
                rep = SL3_GENERATORS[name].astype(np.complex128)
                got = np.array(sl3_coords(iota(ctx3c, rep, nu)).as_tuple())
                want = np.array(value.as_tuple())
            elif kind.startswith("psi_"):
                name = kind[len("psi_"):]
                w = weyl_by_perm(ctx3c, SL3_PERMUTATIONS[name])
                got = psi_w(ctx3c, w, nu).diag
                want = value.diag
            elif kind == "Psi":
                got = psi_general(ctx3c, nu).diag
                want = value.diag
            elif kind == "PsiTilde":
                got = psi_tilde(ctx3c, nu).diag
                want = value.diag
            else:
                continue
            err = float(np.max(np.abs(got - want)))
            scale = float(np.max(np.abs(want)))
            worst = max(worst, err / scale)
    assert worst < 1e-9


def test_reference_formula_domains():
    with pytest.raises(FormulaDomain) as info:
        sl3_reference("Psi", (1.0, 1.0, 1.0))
    assert info.value.witness == "xy-z"
    with pytest.raises(FormulaDomain) as info:
        sl3_reference("psi_s", (0.0, 1.0, 1.0))
    assert info.value.witness == "x"
    with pytest.raises(ValueError):
        sl3_reference("nonsense", (1.0, 2.0, 3.0))


def test_degenerate_coordinates_raise(ctx3c):
    nu = sl3_unipotent((1.0, 1.0, 1.0))
    with pytest.raises(NotGeneric) as info:
        psi_general(ctx3c, nu)
    assert "xy-z" in info.value.witness
    with pytest.raises(NotGeneric):
        psi_tilde(ctx3c, nu)


def test_minus_one_needs_inverting_longest_element(ctx3c):
    with pytest.raises(WrongGroupType):
        psi_minus_one(ctx3c, sl3_unipotent((1.0, 1.0, 2.0)))


def test_projection_determinants_are_one(any_ctx):
    ctx = any_ctx
    rng = np.random.default_rng(29)
    for _ in range(10):
        mat = np.eye(ctx.n, dtype=ctx.dtype)
        idx = np.triu_indices(ctx.n, 1)
        mat[idx] = rng.normal(size=len(idx[0])) + 1.0
        nu = UnipotentElement(mat)
        try:
            for diag in (psi_general(ctx, nu).diag, psi_tilde(ctx, nu).diag):
                assert abs(np.sum(np.log(diag))) < 1e-12
        except NotGeneric:
            continue


def test_m_invariance_spot(ctx3c):
    nu = sl3_unipotent((1.5, -2.0, 0.7))
    m = np.diag(np.exp(1j * np.array([0.4, 1.1, -1.5])))
    twisted = iota(ctx3c, m, nu)
    for w in ctx3c.weyl:
        a = psi_w(ctx3c, w, nu).diag
        b = psi_w(ctx3c, w, twisted).diag
        assert np.allclose(a, b, atol=1e-12 * a.max())


def test_torus_law_spot(ctx3c):
    """Conjugating the argument by a positive diagonal rescales each
    chamber projection by a known monomial twist."""
    nu = sl3_unipotent((1.2, 0.8, -1.9))
    d = np.array([2.0, 1.0, 0.5])
    conj = iota(ctx3c, np.diag(d).astype(complex), nu)
    for w in ctx3c.weyl:
        lhs = psi_w(ctx3c, w, conj).diag
        twist = ctx3c.w0.conjugate_diag_inv(d * w.conjugate_diag(1.0 / d))
        rhs = twist * psi_w(ctx3c, w, nu).diag
        assert np.allclose(lhs, rhs, atol=1e-12 * rhs.max())


def test_averaged_projection_equivariance_spot(ctx3c):
    nu = sl3_unipotent((0.9, 1.4, -0.6))
    d = np.array([1.5, 1.0, 1.0 / 1.5])
    m = np.diag(np.exp(1j * np.array([0.3, -0.2, -0.1])))
    moved = iota(ctx3c, m @ np.diag(d).astype(complex), nu)
    lhs = psi_general(ctx3c, moved).diag
    rhs = d * psi_general(ctx3c, nu).diag
    assert np.allclose(lhs, rhs, atol=1e-12 * rhs.max())


def test_full_average_is_weyl_equivariant(ctx3c):
    nu = sl3_unipotent((1.1, -0.7, 2.3))
    base = psi_tilde(ctx3c, nu).diag
    for w in ctx3c.weyl:
        moved = iota(ctx3c, w.rep.astype(complex), nu)
        lhs = psi_tilde(ctx3c, moved).diag
        rhs = w.conjugate_diag(base)
        assert np.allclose(lhs, rhs, atol=1e-11 * rhs.max())


def test_independent_of_representatives():
    rng = np.random.default_rng(37)
    base = make_context(3, "complex")
    nu = sl3_unipotent((0.8, -1.3, 0.5))
    want_psi = psi_general(base, nu).diag
    want_tilde = psi_tilde(base, nu).diag
    for _ in range(5):
        twisted = twist_representatives(base, rng)
        assert np.allclose(psi_general(twisted, nu).diag, want_psi,
                           atol=1e-12 * want_psi.max())
        assert np.allclose(psi_tilde(twisted, nu).diag, want_tilde,
                           atol=1e-12 * want_tilde.max())
        for w_base, w_twist in zip(base.weyl, twisted.weyl):
            a = psi_w(base, w_base, nu).diag
            b = psi_w(twisted, w_twist, nu).diag
            assert np.allclose(a, b, atol=1e-12 * a.max())
