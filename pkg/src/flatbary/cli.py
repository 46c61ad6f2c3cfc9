"""Batch front end: JSON documents on stdin, JSON documents on stdout.

An instance document looks like

    {"schema_version": "1",
     "context": {"n": 3, "field": "complex"},
     "flags": [[[...], ...], ...],
     "options": {"mode": "generic"}}

with matrices row major and complex entries written as ``[re, im]`` pairs.
Hyperbolic subcommands read ``{"hyp": {"dim": k, "points": [...]}}`` instead,
where a point is a length-``dim`` array of floats or the string ``"inf"``.

Exit codes: 0 on success, 1 for malformed input, 2 for a domain violation
(the offending predicate and margin are reported in an error object), 3 when
an iteration or rejection sampler fails to finish.
"""

import argparse
import io
import json
import sys

import numpy as np

from .barycenter import KarcherConfig, bar_q, phi_flat, phi_triple
from .errors import (
    BadDimension,
    DomainViolation,
    GenerationExhausted,
    NoConvergence,
    NotPositiveDefinite,
    NumericallySingular,
    PivotBreakdown,
)
from .flag_boundary import flag_of, flat_from_pair, genericity_check, is_opposite
from .hyperbolic import (
    INFINITY,
    hyp_bar3,
    hyp_project_triple,
    hyp_psi,
    hyp_w0_boundary,
    is_infinity,
)
from .lie_context import (
    TolBundle,
    UnipotentElement,
    iwasawa,
    make_context,
    weyl_by_perm,
)
from .projections import psi_general, psi_minus_one, psi_tilde, psi_w
from .sampling import default_rng, sample_flag_tuple
from . import selftest

SCHEMA_VERSION = "1"

# user-facing mode names accepted everywhere; the checker itself speaks
# tuple/triple/pairwise
_MODE_ALIASES = {"generic": "tuple", "w0opp": "pairwise"}


class MalformedInput(ValueError):
    """Raised for anything structurally wrong with a document or argv."""


class _Parser(argparse.ArgumentParser):
    # argparse exits the process on bad arguments; surface them as malformed
    # input instead so run_command stays usable as a library call
    def error(self, message):
        raise MalformedInput(message)


def _require(cond, message):
    if not cond:
        raise MalformedInput(message)


# ---------------------------------------------------------------------------
# document parsing and serialization


def _load_doc(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    _require(isinstance(doc, dict), "document must be a JSON object")
    version = doc.get("schema_version")
    _require(version == SCHEMA_VERSION,
             f"unsupported schema_version {version!r}")
    return doc


def _number(entry):
    if isinstance(entry, bool) or not isinstance(entry, (int, float)):
        raise MalformedInput(f"expected a number, got {entry!r}")
    value = float(entry)
    _require(np.isfinite(value), "numbers must be finite")
    return value


def _entry(entry, field):
    if field == "complex" and isinstance(entry, list):
        _require(len(entry) == 2, "complex entries are [re, im] pairs")
        return complex(_number(entry[0]), _number(entry[1]))
    return _number(entry)


def _matrix(rows, n, field):
    _require(isinstance(rows, list) and len(rows) == n,
             f"expected a {n}x{n} matrix")
    dtype = np.complex128 if field == "complex" else np.float64
    out = np.zeros((n, n), dtype=dtype)
    for i, row in enumerate(rows):
        _require(isinstance(row, list) and len(row) == n,
                 f"expected {n} entries in row {i}")
        for j, cell in enumerate(row):
            out[i, j] = _entry(cell, field)
    return out


def _emit_entry(value, field):
    if field == "complex":
        z = complex(value)
        return [z.real, z.imag]
    return float(np.real(value))


def _emit_matrix(mat, field):
    return [[_emit_entry(v, field) for v in row] for row in np.asarray(mat)]


def _emit_vector(vec):
    return [float(v) for v in np.asarray(vec)]


def _serialize(doc, style):
    if style == "compact":
        return json.dumps(doc, separators=(",", ":")) + "\n"
    return json.dumps(doc, indent=2) + "\n"


def _error_doc(exc):
    info = {"type": type(exc).__name__, "message": str(exc)}
    for name in ("predicate", "margin", "witness"):
        value = getattr(exc, name, None)
        if value is not None:
            info[name] = value if isinstance(value, str) else float(value)
    return {"error": info}


# ---------------------------------------------------------------------------
# shared context and option plumbing


def _context_of(doc, args):
    ctx_doc = doc.get("context")
    _require(isinstance(ctx_doc, dict), "document needs a context object")
    n = ctx_doc.get("n")
    _require(isinstance(n, int) and not isinstance(n, bool),
             "context.n must be an integer")
    field = ctx_doc.get("field", "real")
    _require(field in ("real", "complex"), f"unknown field {field!r}")
    options = doc.get("options") or {}
    _require(isinstance(options, dict), "options must be an object")
    tols = options.get("tolerances") or {}
    _require(isinstance(tols, dict), "options.tolerances must be an object")
    base = TolBundle()
    pivot = args.tol_pivot if args.tol_pivot is not None else \
        tols.get("pivot", base.pivot_rel)
    eq = args.tol_eq if args.tol_eq is not None else \
        tols.get("eq", base.eq_rel)
    ctx = make_context(n, field, tol=TolBundle(pivot_rel=float(pivot),
                                               eq_rel=float(eq)))
    return ctx, options


def _karcher_config(options, args):
    kc = options.get("karcher") or {}
    _require(isinstance(kc, dict), "options.karcher must be an object")
    step = args.karcher_step if args.karcher_step is not None else \
        kc.get("step", 1.0)
    grad_tol = args.karcher_tol if args.karcher_tol is not None else \
        kc.get("grad_tol", 1e-12)
    max_iter = args.karcher_max_iter if args.karcher_max_iter is not None \
        else kc.get("max_iter", 200)
    try:
        return KarcherConfig(step=float(step), grad_tol=float(grad_tol),
                             max_iter=int(max_iter))
    except (TypeError, ValueError) as exc:
        raise MalformedInput(str(exc)) from None


def _flags_of(doc, ctx, minimum):
    rows = doc.get("flags")
    _require(isinstance(rows, list) and len(rows) >= minimum,
             f"document needs at least {minimum} flag matrices")
    return [flag_of(ctx, _matrix(m, ctx.n, ctx.field)) for m in rows]


def _hyp_points(doc, minimum):
    hyp = doc.get("hyp")
    _require(isinstance(hyp, dict), "document needs a hyp object")
    dim = hyp.get("dim")
    _require(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1,
             "hyp.dim must be a positive integer")
    raw = hyp.get("points")
    _require(isinstance(raw, list) and len(raw) >= minimum,
             f"hyp.points needs at least {minimum} entries")
    points = []
    for item in raw:
        if item == "inf":
            points.append(INFINITY)
            continue
        _require(isinstance(item, list) and len(item) == dim,
                 f'boundary points are length-{dim} arrays or "inf"')
        points.append(np.array([_number(v) for v in item]))
    return dim, points


def _emit_boundary(p, dim):
    if is_infinity(p):
        return "inf"
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if arr.size == 1 and dim > 1 and float(arr[0]) == 0.0:
        # the involution sends infinity to the origin without knowing the
        # ambient dimension; pad the zero vector back out
        arr = np.zeros(dim)
    return _emit_vector(arr)


def _parse_perm(text, n):
    try:
        perm = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise MalformedInput("--perm wants comma-separated integers") from None
    _require(sorted(perm) == list(range(n)),
             f"--perm must be a permutation of 0..{n - 1}")
    return perm


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_decompose(doc, args):
    ctx, _ = _context_of(doc, args)
    rows = doc.get("flags")
    _require(isinstance(rows, list) and len(rows) >= 1,
             "document needs one matrix in flags")
    part = iwasawa(ctx, _matrix(rows[0], ctx.n, ctx.field))
    return {"a": _emit_vector(part.a.diag),
            "n": _emit_matrix(part.n.mat, ctx.field),
            "k": _emit_matrix(part.k, ctx.field)}


def _cmd_opposite(doc, args):
    ctx, _ = _context_of(doc, args)
    flags = _flags_of(doc, ctx, 2)
    verdict = is_opposite(ctx, flags[0], flags[1])
    return {"opposite": bool(verdict.opposite), "margin": float(verdict.margin)}


def _cmd_generic(doc, args):
    ctx, options = _context_of(doc, args)
    mode = args.mode or options.get("mode", "tuple")
    flags = _flags_of(doc, ctx, 3 if mode == "triple" else 2)
    verdict = genericity_check(ctx, _MODE_ALIASES.get(mode, mode), flags)
    return {"generic": bool(verdict.ok), "margin": float(verdict.margin)}


def _cmd_project(doc, args):
    ctx, _ = _context_of(doc, args)
    rows = doc.get("flags")
    _require(isinstance(rows, list) and len(rows) >= 1,
             "document needs one unipotent matrix in flags")
    try:
        nu = UnipotentElement.from_matrix(_matrix(rows[0], ctx.n, ctx.field))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None
    if args.map == "psi_w":
        perm = _parse_perm(args.perm, ctx.n) if args.perm else \
            tuple(reversed(range(ctx.n)))
        diag = psi_w(ctx, weyl_by_perm(ctx, perm), nu).diag
    elif args.map == "Psi":
        diag = psi_general(ctx, nu).diag
    elif args.map == "PsiMinusOne":
        diag = psi_minus_one(ctx, nu).diag
    else:
        diag = psi_tilde(ctx, nu).diag
    return {"diag": _emit_vector(diag)}


def _cmd_phi(doc, args):
    ctx, options = _context_of(doc, args)
    mode = args.mode or options.get("mode", "triple")
    _require(mode in ("flat", "triple", "w0opp"), f"unknown phi mode {mode!r}")
    flags = _flags_of(doc, ctx, 3)
    if mode == "flat":
        flat = flat_from_pair(ctx, flags[0], flags[1])
        point = phi_flat(ctx, flat, flags[2])
    else:
        point = phi_triple(ctx, flags[0], flags[1], flags[2],
                           mode="generic" if mode == "triple" else "w0opp")
    return {"point": _emit_matrix(point.mat, ctx.field)}


def _cmd_barq(doc, args):
    ctx, options = _context_of(doc, args)
    mode = args.mode or options.get("mode", "generic")
    _require(mode in ("generic", "w0opp"), f"unknown barq mode {mode!r}")
    flags = _flags_of(doc, ctx, 3)
    cfg = _karcher_config(options, args)
    point = bar_q(ctx, flags, mode=mode, cfg=cfg)
    return {"point": _emit_matrix(point.mat, ctx.field)}


def _cmd_hyp(doc, args):
    if args.op == "w0":
        dim, points = _hyp_points(doc, 1)
        return {"points": [_emit_boundary(hyp_w0_boundary(p), dim)
                           for p in points]}
    if args.op == "psi":
        _, points = _hyp_points(doc, 1)
        _require(not is_infinity(points[0]),
                 "psi needs a finite boundary vector")
        first, second = hyp_psi(points[0])
        return {"diag": [float(first), float(second)]}
    _, points = _hyp_points(doc, 3)
    if args.op == "project":
        p = hyp_project_triple(points[0], points[1], points[2])
    else:
        p = hyp_bar3(points[0], points[1], points[2])
    return {"point": {"horizontal": _emit_vector(p.horizontal),
                      "height": float(p.height)}}


_HANDLERS = {
    "decompose": _cmd_decompose,
    "opposite": _cmd_opposite,
    "generic": _cmd_generic,
    "project": _cmd_project,
    "phi": _cmd_phi,
    "barq": _cmd_barq,
    "hyp": _cmd_hyp,
}


# ---------------------------------------------------------------------------
# instance generation


def generate_instance(spec, seed):
    """Sample an instance document; deterministic for a fixed seed.

    ``spec`` carries n, field, q and mode.  Flags are rejection-sampled
    until the requested genericity check holds with margin at least ten
    times the pivot tolerance.

    Raises
    ------
    GenerationExhausted
        After 10**4 rejected tuples.
    """
    n = spec.get("n")
    _require(isinstance(n, int) and not isinstance(n, bool),
             "spec.n must be an integer")
    field = spec.get("field", "real")
    _require(field in ("real", "complex"), f"unknown field {field!r}")
    q = spec.get("q", 3)
    _require(isinstance(q, int) and not isinstance(q, bool) and q >= 3,
             "spec.q must be an integer >= 3")
    mode = spec.get("mode", "generic")
    _require(mode in ("generic", "tuple", "triple", "pairwise", "w0opp"),
             f"unknown mode {mode!r}")
    ctx = make_context(n, field)
    rng = default_rng(seed)
    flags = sample_flag_tuple(ctx, rng, q,
                              mode=_MODE_ALIASES.get(mode, mode),
                              min_margin=10.0 * ctx.tol.pivot_rel,
                              max_tries=10**4)
    return {"schema_version": SCHEMA_VERSION,
            "context": {"n": n, "field": field},
            "flags": [_emit_matrix(f.rep, field) for f in flags],
            "options": {"mode": mode, "seed": seed}}


# ---------------------------------------------------------------------------
# driver


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--tol-pivot", type=float, default=None,
                        help="relative pivot tolerance")
    common.add_argument("--tol-eq", type=float, default=None,
                        help="relative equality tolerance")
    common.add_argument("--karcher-step", type=float, default=None)
    common.add_argument("--karcher-tol", type=float, default=None)
    common.add_argument("--karcher-max-iter", type=int, default=None)
    common.add_argument("--output", choices=("pretty", "compact"),
                        default="pretty")
    parser = _Parser(prog="flatbary",
                     description="flat projections and flag barycenters")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    sub.add_parser("decompose", parents=[common],
                   help="Iwasawa parts of the first matrix")
    sub.add_parser("opposite", parents=[common],
                   help="oppositeness of the first two flags")
    p = sub.add_parser("generic", parents=[common],
                       help="genericity of the flag tuple")
    p.add_argument("--mode", default=None,
                   choices=("triple", "tuple", "pairwise", "w0opp", "generic"))
    p = sub.add_parser("project", parents=[common],
                       help="torus projection of a unipotent matrix")
    p.add_argument("--map", default="Psi",
                   choices=("psi_w", "Psi", "PsiMinusOne", "PsiTilde"))
    p.add_argument("--perm", default=None,
                   help="permutation for psi_w, e.g. 2,0,1 (default: longest)")
    p = sub.add_parser("phi", parents=[common],
                       help="project a flag onto the flat of two others")
    p.add_argument("--mode", default=None, choices=("flat", "triple", "w0opp"))
    p = sub.add_parser("barq", parents=[common],
                       help="barycenter of a flag tuple")
    p.add_argument("--mode", default=None, choices=("generic", "w0opp"))
    p = sub.add_parser("hyp", parents=[common],
                       help="half-space model operations")
    p.add_argument("--op", required=True,
                   choices=("w0", "psi", "project", "bar3"))
    p = sub.add_parser("gen", parents=[common],
                       help="sample a reproducible instance document")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--mode", default="generic",
                   choices=("generic", "tuple", "triple", "pairwise", "w0opp"))
    p = sub.add_parser("selftest", parents=[common],
                       help="run the acceptance criteria")
    p.add_argument("--criterion", type=int, default=None)
    return parser


def run_command(argv, input_text=""):
    """Run one subcommand and return ``(exit_code, output_text)``."""
    out = io.StringIO()
    style = "pretty"
    try:
        args = _build_parser().parse_args(argv)
        style = args.output
        if args.command == "selftest":
            numbers = None if args.criterion is None else [args.criterion]
            reports = selftest.run(numbers=numbers, stream=out)
            return (0 if all(r.passed for r in reports) else 2), out.getvalue()
        if args.command == "gen":
            spec = {"n": args.n, "field": args.field, "q": args.q,
                    "mode": args.mode}
            out.write(_serialize(generate_instance(spec, args.seed), style))
            return 0, out.getvalue()
        doc = _load_doc(input_text)
        out.write(_serialize(_HANDLERS[args.command](doc, args), style))
        return 0, out.getvalue()
    except (NoConvergence, GenerationExhausted) as exc:
        out.write(_serialize(_error_doc(exc), style))
        return 3, out.getvalue()
    except (DomainViolation, PivotBreakdown, NumericallySingular,
            NotPositiveDefinite) as exc:
        out.write(_serialize(_error_doc(exc), style))
        return 2, out.getvalue()
    except (MalformedInput, BadDimension, ValueError, TypeError,
            KeyError) as exc:
        out.write(_serialize(_error_doc(exc), style))
        return 1, out.getvalue()
    except SystemExit as exc:
        return int(exc.code or 0), out.getvalue()


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    text = "" if sys.stdin is None or sys.stdin.isatty() else sys.stdin.read()
    code, output = run_command(argv, text)
    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
