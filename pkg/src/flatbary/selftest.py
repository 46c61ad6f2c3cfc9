"""Self-contained acceptance checks.

Each criterion function draws its own seeded samples, measures the worst
deviation against the pinned tolerance, and returns a report.  The same
functions back the ``selftest`` CLI subcommand and the acceptance test
module, so a shipped binary can re-certify itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barycenter import (
    KarcherConfig,
    bar_q,
    bar_q_feet,
    karcher_gradient_norm,
    karcher_mean,
    phi_flat,
    phi_triple,
    project_to_flat,
    spd_distance,
)
from .errors import (
    DegenerateBoundary,
    DegeneratePair,
    FormulaDomain,
    NotGeneric,
    NotOpposite,
    WrongGroupType,
)
from .flag_boundary import (
    base_flag,
    chi,
    chi_inverse,
    flag_of,
    flat_from_pair,
    iota,
    is_opposite,
    opposite_base_flag,
)
from .hyperbolic import (
    INFINITY,
    boundary_flag,
    halfplane_point_of_spd,
    hyp_project_triple,
    hyp_psi,
    mobius_normalize,
)
from .lie_context import (
    UnipotentElement,
    make_context,
    sample_m,
    twist_representatives,
    weyl_by_perm,
)
from .projections import (
    SL3_GENERATORS,
    SL3_PERMUTATIONS,
    psi_general,
    psi_minus_one,
    psi_tilde,
    psi_w,
    sl3_coords,
    sl3_reference,
    sl3_unipotent,
)
from .sampling import (
    default_rng,
    sample_boundary_vector,
    sample_flag_tuple,
    sample_generic_coords3,
    sample_ma,
    sample_sl,
    sample_ta,
    sample_torus,
    sample_unipotent,
)


@dataclass(frozen=True)
class CriterionReport:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{status}] {self.title}: {self.detail}"


def _rel_vec(got, want):
    got = np.asarray(got)
    want = np.asarray(want)
    return float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)))


def _rel_mat(got, want):
    scale = float(np.max(np.abs(want)))
    return float(np.max(np.abs(got - want))) / max(scale, 1e-300)


_SL3_SEED = 101
_SL3_SAMPLES = 1000


def _sl3_sample_stream():
    rng = default_rng(_SL3_SEED)
    ctx = make_context(3, "complex")
    for _ in range(_SL3_SAMPLES):
        coords = sample_generic_coords3(rng, floor=0.05)
        yield ctx, coords, sl3_unipotent(coords)


def criterion_1():
    """Closed forms of the five twisted actions on size-three coordinates."""
    tol = 1e-9
    worst = 0.0
    for ctx, coords, nu in _sl3_sample_stream():
        for name, rep in SL3_GENERATORS.items():
            if name == "e":
                continue
            got = sl3_coords(iota(ctx, rep.astype(np.complex128), nu))
            want = sl3_reference("iota_" + name, coords)
            worst = max(worst, _rel_vec(got.as_tuple(), want.as_tuple()))
    return CriterionReport(
        1, "size-three twisted-action closed forms", worst <= tol,
        f"worst rel err {worst:.3e} over {_SL3_SAMPLES} samples x 5 maps (tol {tol:g})")


def criterion_2():
    """Closed forms of the five chamber projections on the same samples."""
    tol = 1e-9
    worst = 0.0
    for ctx, coords, nu in _sl3_sample_stream():
        for name, perm in SL3_PERMUTATIONS.items():
            if name == "e":
                continue
            got = psi_w(ctx, weyl_by_perm(ctx, perm), nu)
            want = sl3_reference("psi_" + name, coords)
            worst = max(worst, _rel_vec(got.diag, want.diag))
    return CriterionReport(
        2, "size-three chamber-projection closed forms", worst <= tol,
        f"worst rel err {worst:.3e} over {_SL3_SAMPLES} samples x 5 maps (tol {tol:g})")


def criterion_3():
    """Closed forms of the two averaged projections, plus a pinned value."""
    tol = 1e-9
    worst = 0.0
    for ctx, coords, nu in _sl3_sample_stream():
        worst = max(worst, _rel_vec(
            psi_general(ctx, nu).diag, sl3_reference("Psi", coords).diag))
        worst = max(worst, _rel_vec(
            psi_tilde(ctx, nu).diag, sl3_reference("PsiTilde", coords).diag))
    ctx = make_context(3, "complex")
    spot = psi_general(ctx, sl3_unipotent((1.0, 1.0, 2.0)))
    worst = max(worst, _rel_vec(
        spot.diag, np.array([1.0, 2.0 ** (1 / 3), 2.0 ** (-1 / 3)])))
    return CriterionReport(
        3, "size-three averaged-projection closed forms", worst <= tol,
        f"worst rel err {worst:.3e} over {_SL3_SAMPLES} samples x 2 maps (tol {tol:g})")


def criterion_4():
    """The averaged and the square-root projections agree in rank one."""
    tol = 1e-10
    samples = 1000
    rng = default_rng(104)
    ctx = make_context(2, "real")
    worst = 0.0
    count = 0
    while count < samples:
        t = rng.normal(0.0, 2.0)
        if abs(t) < 1e-2:
            continue
        count += 1
        nu = UnipotentElement(np.array([[1.0, t], [0.0, 1.0]]))
        worst = max(worst, _rel_vec(
            psi_general(ctx, nu).diag, psi_minus_one(ctx, nu).diag))
    return CriterionReport(
        4, "rank-one agreement of the two projections", worst <= tol,
        f"worst rel err {worst:.3e} over {samples} samples (tol {tol:g})")


def criterion_5():
    """Invariance and equivariance laws of the torus projections."""
    tol = 1e-9
    counts = {2: 60, 3: 30, 4: 10}
    rng = default_rng(105)
    worst = {"m-invariance": 0.0, "a-law": 0.0, "ma-equivariance": 0.0,
             "t-equivariance": 0.0}
    total = 0
    for n, per_combo in counts.items():
        for field in ("real", "complex"):
            ctx = make_context(n, field)
            w0 = ctx.w0
            done = 0
            while done < per_combo:
                nu = sample_unipotent(ctx, rng, min_margin=0.05)
                w = ctx.weyl[rng.integers(1, ctx.order)]
                a = sample_torus(ctx, rng, spread=0.3)
                m_diag = np.diagonal(sample_m(ctx, rng)).copy()

                base_w = psi_w(ctx, w, nu)
                conj_m = UnipotentElement.from_matrix(
                    (nu.mat * m_diag[:, None]) * (1.0 / m_diag)[None, :])
                err_m = _rel_vec(psi_w(ctx, w, conj_m).diag, base_w.diag)

                conj_a = UnipotentElement.from_matrix(
                    (nu.mat * a.diag[:, None]) * (1.0 / a.diag)[None, :])
                twist = w0.conjugate_diag_inv(
                    a.diag * w.conjugate_diag(1.0 / a.diag))
                err_a = _rel_vec(psi_w(ctx, w, conj_a).diag, twist * base_w.diag)

                scale = m_diag * a.diag
                conj_ma = UnipotentElement.from_matrix(
                    (nu.mat * scale[:, None]) * (1.0 / scale)[None, :])
                err_ma = _rel_vec(psi_general(ctx, conj_ma).diag,
                                  a.diag * psi_general(ctx, nu).diag)

                u = w.rep @ sample_m(ctx, rng)
                try:
                    moved = iota(ctx, u, nu)
                    tilde = psi_tilde(ctx, nu)
                    tilde_moved = psi_tilde(ctx, moved)
                except NotGeneric:
                    continue
                err_t = _rel_vec(tilde_moved.diag,
                                 w.conjugate_diag(tilde.diag))

                done += 1
                total += 1
                worst["m-invariance"] = max(worst["m-invariance"], err_m)
                worst["a-law"] = max(worst["a-law"], err_a)
                worst["ma-equivariance"] = max(worst["ma-equivariance"], err_ma)
                worst["t-equivariance"] = max(worst["t-equivariance"], err_t)
    bad = max(worst.values())
    parts = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    return CriterionReport(
        5, "equivariance laws of the torus projections", bad <= tol,
        f"{total} samples per law across 6 contexts; worst {parts} (tol {tol:g})")


def criterion_6():
    """Projections are blind to the stored Weyl representatives."""
    tol = 1e-10
    rng = default_rng(106)
    combos = [(2, "real"), (2, "complex"), (3, "real"), (3, "complex"),
              (4, "complex")]
    worst = 0.0
    total = 0
    for n, field in combos:
        ctx = make_context(n, field)
        for _ in range(10):
            nu = sample_unipotent(ctx, rng, min_margin=0.05)
            twisted = twist_representatives(ctx, rng)
            idx = int(rng.integers(1, ctx.order))
            worst = max(worst, _rel_vec(
                psi_w(twisted, twisted.weyl[idx], nu).diag,
                psi_w(ctx, ctx.weyl[idx], nu).diag))
            worst = max(worst, _rel_vec(
                psi_general(twisted, nu).diag, psi_general(ctx, nu).diag))
            try:
                lhs = psi_tilde(twisted, nu)
                rhs = psi_tilde(ctx, nu)
            except NotGeneric:
                continue
            worst = max(worst, _rel_vec(lhs.diag, rhs.diag))
            total += 1
    return CriterionReport(
        6, "independence from representative choices", worst <= tol,
        f"worst rel err {worst:.3e} over {total} twisted contexts (tol {tol:g})")


def criterion_7():
    """Contracts of the flat projections: membership, equivariance,
    well-definedness under the representative ambiguity."""
    tol = 1e-8
    per_n = 200
    rng = default_rng(107)
    worst = {"membership": 0.0, "equivariance": 0.0, "ma-twist": 0.0,
             "ta-twist": 0.0}
    for n in (2, 3):
        ctxs = {f: make_context(n, f) for f in ("real", "complex")}
        for i in range(per_n):
            ctx = ctxs["real" if i % 2 == 0 else "complex"]
            x, y, z = sample_flag_tuple(ctx, rng, 3, "triple",
                                        min_margin=0.01, max_tries=500)
            base = phi_triple(ctx, x, y, z)
            flat = flat_from_pair(ctx, x, y)

            pulled = np.linalg.solve(
                flat.g, np.linalg.solve(flat.g, base.mat).conj().T).conj().T
            off = pulled - np.diag(np.diagonal(pulled))
            worst["membership"] = max(
                worst["membership"],
                float(np.max(np.abs(off))) / float(np.max(np.abs(pulled))))

            g = sample_sl(ctx, rng, cond_cap=50.0)
            moved = [flag_of(ctx, g @ f.rep) for f in (x, y, z)]
            lhs = phi_triple(ctx, *moved).mat
            rhs = g @ base.mat @ g.conj().T
            worst["equivariance"] = max(worst["equivariance"],
                                        _rel_mat(lhs, rhs))

            h = sample_ma(ctx, rng, spread=0.4)
            twisted = project_to_flat(ctx, flat.g @ h, z, psi_general)
            worst["ma-twist"] = max(worst["ma-twist"],
                                    _rel_mat(twisted.mat, base.mat))

            flat_val = phi_flat(ctx, flat, z)
            ta = sample_ta(ctx, rng, spread=0.4)
            twisted2 = project_to_flat(ctx, flat.g @ ta, z, psi_tilde)
            worst["ta-twist"] = max(worst["ta-twist"],
                                    _rel_mat(twisted2.mat, flat_val.mat))
    bad = max(worst.values())
    parts = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    return CriterionReport(
        7, "flat-projection contracts", bad <= tol,
        f"{per_n} instances each for sizes 2 and 3; worst {parts} (tol {tol:g})")


def criterion_8():
    """Half-space closed forms and the rank-one dictionary."""
    formula_tol = 1e-12
    dict_tol = 1e-8
    rng = default_rng(108)
    worst_formula = 0.0
    worst_foot = 0.0
    for trial in range(200):
        dim = 1 + trial % 3
        v = sample_boundary_vector(rng, dim, floor=0.05)
        nrm = float(np.linalg.norm(v))
        got = hyp_psi(v)
        worst_formula = max(
            worst_formula,
            abs(got[0] - 1.0 / nrm**2) / (1.0 / nrm**2),
            abs(got[1] - nrm) / nrm)
        foot = hyp_project_triple(INFINITY, np.zeros(dim), v)
        worst_foot = max(
            worst_foot,
            float(np.max(np.abs(foot.horizontal))) / nrm,
            abs(foot.height - nrm) / nrm)
    ctx = make_context(2, "real")
    worst_dict = 0.0
    done = 0
    while done < 200:
        us = list(rng.normal(0.0, 2.0, 3))
        if min(abs(us[0] - us[1]), abs(us[0] - us[2]), abs(us[1] - us[2])) < 0.05:
            continue
        if done % 4 == 1:
            us[done % 3] = INFINITY
        flags = [boundary_flag(ctx, u) for u in us]
        spd = phi_triple(ctx, flags[0], flags[1], flags[2])
        hp = halfplane_point_of_spd(spd)
        hf = hyp_project_triple(*us)
        err = max(abs(float(hp.horizontal[0]) - float(hf.horizontal[0])),
                  abs(hp.height - hf.height)) / max(1.0, hf.height)
        worst_dict = max(worst_dict, err)
        done += 1
    ok = (worst_formula <= formula_tol and worst_foot <= formula_tol
          and worst_dict <= dict_tol)
    return CriterionReport(
        8, "half-space model agreement", ok,
        f"formulas {worst_formula:.2e}, axis feet {worst_foot:.2e} "
        f"(tol {formula_tol:g}); dictionary {worst_dict:.2e} (tol {dict_tol:g})")


def criterion_9():
    """Barycenter contracts: symmetry, equivariance, foot count, optimality."""
    perm_tol = 1e-9
    equiv_tol = 1e-8
    grad_tol = 1e-12
    rng = default_rng(109)
    cfg = KarcherConfig(max_iter=1000)
    worst_perm = 0.0
    worst_equiv = 0.0
    worst_grad = 0.0
    counts_ok = True
    for n, field in ((2, "real"), (3, "complex")):
        ctx = make_context(n, field)
        for q in (3, 4, 5):
            flags = sample_flag_tuple(ctx, rng, q, "tuple",
                                      min_margin=0.01, max_tries=2000)
            feet = bar_q_feet(ctx, flags)
            counts_ok = counts_ok and len(feet) == q * (q - 1) * (q - 2)
            mean = karcher_mean(feet, cfg)
            worst_grad = max(worst_grad, karcher_gradient_norm(mean, feet))
            order = rng.permutation(q)
            permuted = bar_q(ctx, [flags[i] for i in order], cfg=cfg)
            worst_perm = max(worst_perm, spd_distance(mean, permuted))
            g = sample_sl(ctx, rng, cond_cap=50.0)
            moved = bar_q(ctx, [flag_of(ctx, g @ f.rep) for f in flags],
                          cfg=cfg)
            worst_equiv = max(worst_equiv,
                              _rel_mat(moved.mat, g @ mean.mat @ g.conj().T))
    ok = (counts_ok and worst_perm <= perm_tol and worst_equiv <= equiv_tol
          and worst_grad < grad_tol)
    return CriterionReport(
        9, "multi-flag barycenter contracts", ok,
        f"foot counts {'ok' if counts_ok else 'WRONG'}; permutation "
        f"{worst_perm:.2e} (tol {perm_tol:g}); equivariance {worst_equiv:.2e} "
        f"(tol {equiv_tol:g}); gradient {worst_grad:.2e} (tol {grad_tol:g})")


def _int_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = 0
    for j in range(n):
        if mat[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        sign = -1 if j % 2 else 1
        total += sign * mat[0][j] * _int_det(minor)
    return total


def _int_adjugate(mat):
    n = len(mat)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:]
                     for k, row in enumerate(mat) if k != j]
            sign = -1 if (i + j) % 2 else 1
            out[i][j] = sign * (_int_det(minor) if minor else 1)
    return out


def _int_matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)]
            for i in range(n)]


def criterion_10():
    """Designated degeneracy errors, and exact transversality agreement."""
    rng = default_rng(110)
    failures = []

    ctx3 = make_context(3, "complex")
    bad = sl3_unipotent((1.0, 1.0, 1.0))
    try:
        psi_general(ctx3, bad)
        failures.append("degenerate size-three coordinate was not rejected")
    except NotGeneric as exc:
        if "xy-z" not in (exc.witness or ""):
            failures.append(f"wrong witness {exc.witness!r} for xy-z degeneracy")
    try:
        phi_triple(ctx3, base_flag(ctx3), opposite_base_flag(ctx3),
                   chi(ctx3, bad))
        failures.append("degenerate triple projection was not rejected")
    except NotGeneric:
        pass
    try:
        sl3_reference("Psi", (1.0, 1.0, 1.0))
        failures.append("closed form accepted a vanishing denominator")
    except FormulaDomain as exc:
        if exc.witness != "xy-z":
            failures.append(f"wrong closed-form witness {exc.witness!r}")
    try:
        hyp_psi(np.zeros(2))
        failures.append("zero boundary vector was not rejected")
    except DegenerateBoundary:
        pass
    try:
        mobius_normalize(np.array([1.0]), np.array([1.0]))
        failures.append("coincident boundary pair was not rejected")
    except DegeneratePair:
        pass
    try:
        psi_minus_one(ctx3, sl3_unipotent((1.0, 1.0, 2.0)))
        failures.append("square-root projection ran outside rank one")
    except WrongGroupType:
        pass
    try:
        chi_inverse(make_context(2, "real"), base_flag(make_context(2, "real")))
        failures.append("chart inversion accepted a non-opposite flag")
    except NotOpposite:
        pass

    cases = 0
    disagreements = 0
    for n in (3, 4):
        ctx = make_context(n, "real")
        w0_int = [[int(round(v)) for v in row] for row in ctx.w0_rep]
        w0_t = [list(col) for col in zip(*w0_int)]
        done = 0
        while done < 500:
            x_int = [[int(v) for v in row]
                     for row in rng.integers(-2, 3, (n, n))]
            y_int = [[int(v) for v in row]
                     for row in rng.integers(-2, 3, (n, n))]
            if _int_det(x_int) == 0 or _int_det(y_int) == 0:
                continue
            done += 1
            cases += 1
            mat = _int_matmul(_int_matmul(w0_t, _int_adjugate(x_int)), y_int)
            want = all(
                _int_det([row[:k] for row in mat[:k]]) != 0
                for k in range(1, n))
            got = is_opposite(
                ctx,
                flag_of(ctx, np.array(x_int, dtype=float)),
                flag_of(ctx, np.array(y_int, dtype=float))).opposite
            if got != want:
                disagreements += 1
    if disagreements:
        failures.append(
            f"{disagreements} transversality disagreements with exact minors")
    detail = (f"designated errors raised; exact-minor agreement on {cases} "
              f"integer cases" if not failures else "; ".join(failures))
    return CriterionReport(10, "degeneracy detection and exact transversality",
                           not failures, detail)


REGISTRY = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run(numbers=None, stream=None):
    """Run the selected criteria (all by default), print one line each,
    and return the reports."""
    if numbers is None:
        numbers = sorted(REGISTRY)
    reports = []
    for num in numbers:
        if num not in REGISTRY:
            raise ValueError(f"unknown criterion {num}")
        try:
            report = REGISTRY[num]()
        except Exception as exc:  # surface bugs as failed criteria
            report = CriterionReport(num, REGISTRY[num].__doc__ or "",
                                     False, f"raised {type(exc).__name__}: {exc}")
        reports.append(report)
        if stream is not None:
            print(report.line(), file=stream)
        else:
            print(report.line())
    return reports
