"""Command-line interface: ``orbivol <command> [options]``.

Every command prints a report, either as aligned text or (``--json``) as a
versioned JSON document whose numbers are decimal strings.  Exit codes: 0 on
success, 1 on computation errors, 2 when the requested precision cannot be
certified, 64 on usage errors.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
import time
import warnings

import mpmath
from mpmath import mp, mpf

from . import __version__
from .cli_expr import parse_expr
from .errors import DegradedPrecisionWarning, OrbivolError, ParseError
from .numkernel import MIN_DIGITS, default_digits, precision

REPORT_SCHEMA = "orbivol.report/1"
EXIT_OK, EXIT_ERROR, EXIT_DEGRADED, EXIT_USAGE = 0, 1, 2, 64
MIN_CLI_CUTOFF = 10**3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def _digits_arg(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid digits {text!r}") from None
    if d < MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"digits must be at least {MIN_DIGITS}")
    return d


def _cutoff_arg(text: str) -> int:
    try:
        value = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid cutoff {text!r}") from None
    if value < MIN_CLI_CUTOFF:
        raise argparse.ArgumentTypeError(f"cutoff must be at least {MIN_CLI_CUTOFF}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=_digits_arg, default=None, help="output precision in digits (default: ORBIVOL_DIGITS or 60)")
    common.add_argument("--cutoff", type=_cutoff_arg, default=10**7, help="Euler-product prime bound (default 1e7)")
    common.add_argument("--tol", default=None, help="absolute quadrature tolerance (default 10^-(digits-5))")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--fields", default=None, help="field data file (default: bundled data/fields.json)")

    p = _Parser(prog="orbivol", description="Volumes of the Makarov prisms and covolumes of arithmetic lattices in Isom(H^5).")
    p.add_argument("--version", action="version", version=f"orbivol {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("lob", parents=[common], help="Lobachevsky functions lob2, lob3")
    s.add_argument("--omega", required=True, help="argument, e.g. pi/5 or 0.3")
    s.add_argument("--order", type=int, choices=(2, 3), default=2)
    s.add_argument("--method", choices=("series", "integral"), default="series", help="integral is available for order 3")

    s = sub.add_parser("prism", parents=[common], help="volume of P(alpha) = [5,3,3,3,alpha]")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", help="dihedral angle in [pi/4, 2pi/5], e.g. pi/3")
    g.add_argument("--polytope", choices=("P0", "P1", "P2"))
    s.add_argument("--references", action="store_true", help="also print the closed-form reference volumes")

    s = sub.add_parser("coxeter", parents=[common], help="Gram matrix, dashed edges and signature")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--symbol", help='Coxeter symbol, e.g. "[5,3,3,3,4]"')
    g.add_argument("--diagram", help="JSON diagram file")
    g.add_argument("--polytope", choices=("P0", "P1", "P2"))
    s.add_argument("--dashed", action="append", default=[], metavar="I,J[,L]",
                   help="add a dashed edge; without L the length is solved (a new node index adds a node)")
    s.add_argument("--dim", type=int, default=None, help="hyperbolic dimension for solving (default nodes-2)")
    s.add_argument("--check", choices=("signature",), default="signature")
    s.add_argument("--dump", default=None, help="write the resolved diagram to this JSON file")

    s = sub.add_parser("zeta", parents=[common], help="Dedekind zeta and relative L values")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--field", help="FILE#label or a label of the bundled data")
    g.add_argument("--disc", type=int, help="fundamental discriminant of a real quadratic field")
    g.add_argument("--relative", metavar="LABEL", help="relative L of a field record carrying base and beta")
    s.add_argument("--s", type=int, required=True, dest="s_arg")
    s.add_argument("--method", choices=("auto", "hurwitz", "euler"), default="auto")

    s = sub.add_parser("covolume", parents=[common], help="hyperbolic covolume of a lattice case")
    s.add_argument("--case", required=True, choices=("gamma0", "gamma1", "gamma2", "448", "475"))

    s = sub.add_parser("bounds", parents=[common], help="the sieve lower bounds")
    s.add_argument("--eq", required=True, choices=("37", "35", "34", "31"))
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--dk", type=int, default=None)
    s.add_argument("--dl", type=int, default=None)
    s.add_argument("--h", type=int, default=None)

    s = sub.add_parser("verify", parents=[common], help="arithmetic covolume against twice the prism volume")
    s.add_argument("--identity", required=True, choices=("gamma0", "gamma2"))
    s.add_argument("--target", type=int, default=11, help="digits that must be certified (default 11)")

    sub.add_parser("table1", parents=[common], help="all lattice covolumes and polytope volumes")
    return p


# --- report helpers -----------------------------------------------------------


def _num(x, digits: int) -> str:
    return mpmath.nstr(mpf(x), digits)


def _err(x) -> str:
    return mpmath.nstr(mpf(x), 3)


class Report:
    def __init__(self, command: list[str], config: dict):
        self.command = command
        self.config = config
        self.results: list[dict] = []
        self.diagnostics: dict = {}
        self.exit_code = EXIT_OK

    def add(self, label: str, value, digits: int, error=None, error_kind: str = "error_estimate", **extra):
        exact = isinstance(value, (str, int))
        item = {"label": label, "value": value if exact else _num(value, digits)}
        if error is None and not exact:
            # full-precision evaluations: the rounding of the printed value
            error = mpf(10) ** (-digits)
        if error is not None:
            item[error_kind] = _err(error)
        item.update(extra)
        self.results.append(item)

    def to_dict(self, runtime: float) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "timestamp": {
                "utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
                "runtime_s": round(runtime, 3),
            },
        }

    def to_text(self) -> str:
        width = max((len(r["label"]) for r in self.results), default=0)
        lines = []
        for r in self.results:
            line = f"{r['label']:<{width}}  {r['value']}"
            for key in ("error_estimate", "tail_bound"):
                if key in r:
                    line += f"  ({key.replace('_', ' ')} {r[key]})"
            lines.append(line)
        for k, v in self.diagnostics.items():
            if isinstance(v, list):
                lines.append(f"# {k}:")
                lines.extend("#   " + ", ".join(f"{a}={b}" for a, b in item.items()) for item in v)
            else:
                lines.append(f"# {k}: {v}")
        return "\n".join(lines)


# --- commands -----------------------------------------------------------------


def _cmd_lob(args, rep: Report, d: int):
    from .lobachevsky import lob2, lob3, lob3_integral

    omega = parse_expr(args.omega)
    if args.order == 2:
        if args.method != "series":
            raise OrbivolError("the integral method is only available for order 3")
        rep.add(f"lob2({args.omega})", lob2(omega, d), d)
    elif args.method == "series":
        rep.add(f"lob3({args.omega})", lob3(omega, d), d)
    else:
        value, err = lob3_integral(omega, d, _tol(args))
        rep.add(f"lob3({args.omega})", value, d, err)


def _tol(args):
    return None if args.tol is None else parse_expr(args.tol)


def _cmd_prism(args, rep: Report, d: int):
    from .prism import closed_form_references, polytope_alpha, prism_volume_detail

    if args.polytope:
        q = prism_volume_detail(polytope_alpha(args.polytope), _tol(args), d)
        factor = 2 if args.polytope == "P1" else 1
        rep.add(f"vol5({args.polytope})", factor * q.value, d, factor * q.error_estimate)
    else:
        q = prism_volume_detail(parse_expr(args.alpha), _tol(args), d)
        rep.add(f"vol5(P({args.alpha}))", q.value, d, q.error_estimate)
    rep.diagnostics["quadrature_evaluations"] = q.evaluations
    rep.diagnostics["quadrature_levels"] = q.levels
    if args.references:
        for name, value in closed_form_references(d):
            rep.add(f"vol5({name})", value, d)


def _parse_dashed(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ParseError(f"--dashed expects I,J or I,J,L, got {text!r}")
    try:
        i, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"--dashed node indices must be integers, got {text!r}") from None
    length = parse_expr(parts[2]) if len(parts) == 3 else None
    return i, j, length


def _cmd_coxeter(args, rep: Report, d: int):
    from . import coxeter as cx

    if args.polytope:
        diagram = cx.polytope_diagram(args.polytope, d)
    elif args.diagram:
        diagram = cx.load_diagram(args.diagram, d)
    else:
        diagram = cx.parse_symbol(args.symbol)
        if not diagram.solid_connected():
            raise cx.DiagramError("symbol diagram is not connected")
        rep.diagnostics["symbol"] = cx.render_symbol(diagram)
    for text in args.dashed:
        i, j, length = _parse_dashed(text)
        top = max(i, j)
        if top > diagram.n:
            raise cx.DiagramError(f"dashed edge {i},{j} skips node indices")
        if top == diagram.n:
            diagram = cx.CoxeterDiagram(diagram.n + 1, diagram.edges)
        diagram = diagram.with_edge(cx.Edge(i, j, dashed=True, length=length))
    unknown = diagram.unknown_dashed()
    if len(unknown) > 1:
        raise cx.UnresolvedEdgeError(f"only one dashed edge can be solved at a time, got {unknown}")
    if unknown:
        key = unknown[0]
        sol = cx.solve_dashed_detail(diagram, key, args.dim, d)
        diagram = diagram.with_edge(cx.Edge(*key, dashed=True, length=sol.length))
        rep.add(f"length{key}", sol.length, d)
        rep.add("cosh(length)", sol.cosh, d)
        rep.add("det residual", _err(sol.det_residual), d)
    G = cx.gram(diagram, d)
    inert = cx.inertia(G, digits=d)
    with precision(d):
        det = mp.det(G)
    rep.add("nodes", diagram.n, d)
    rep.add("inertia", "({},{},{})".format(*inert.as_tuple()), d)
    rep.add("det", _err(det), d)
    if args.dump:
        cx.dump_diagram(diagram, args.dump, d)
        rep.diagnostics["dumped"] = args.dump


def _cmd_zeta(args, rep: Report, d: int):
    from .numbertheory import zeta as zt
    from .numbertheory.fields import load_field, load_field_records

    s = args.s_arg
    if args.disc is not None:
        if args.method == "euler":
            v = zt.dedekind_zeta_quadratic_euler(args.disc, s, args.cutoff, d)
            rep.add(f"zeta_k({s}), D={args.disc}", v.value, d, v.tail_bound, "tail_bound")
        else:
            rep.add(f"zeta_k({s}), D={args.disc}", zt.dedekind_zeta_quadratic(args.disc, s, d), d)
        return
    if args.relative is not None:
        label = args.relative
        path = args.fields
        if "#" in label:
            path, label = label.split("#", 1)
        rec = load_field_records(path).get(label)
        if rec is None or "beta" not in rec or "base" not in rec:
            raise OrbivolError(f"field record {label!r} needs 'base' and 'beta' for a relative L value")
        base = load_field(rec["base"], path)
        v = zt.relative_L(base.abs_disc, tuple(rec["beta"]), s, args.cutoff, d)
        rep.add(f"L_{label}/{rec['base']}({s})", v.value, d, v.tail_bound, "tail_bound")
        rep.diagnostics["cutoff"] = args.cutoff
        return
    spec = args.field
    F = load_field(spec, args.fields) if "#" not in spec else load_field(spec)
    if F.degree == 2:
        if args.method == "euler":
            v = zt.dedekind_zeta_quadratic_euler(F.abs_disc, s, args.cutoff, d)
            rep.add(f"zeta_{F.label}({s})", v.value, d, v.tail_bound, "tail_bound")
        else:
            rep.add(f"zeta_{F.label}({s})", zt.dedekind_zeta_quadratic(F.abs_disc, s, d), d)
        return
    if args.method == "hurwitz":
        raise OrbivolError("the Hurwitz method applies to quadratic fields only")
    v = zt.dedekind_zeta_quartic(F, s, args.cutoff, d)
    rep.add(f"zeta_{F.label}({s})", v.value, d, v.tail_bound, "tail_bound")
    rep.diagnostics["cutoff"] = args.cutoff
    rep.diagnostics["primes"] = v.primes


def _cmd_covolume(args, rep: Report, d: int):
    from .covolume import hyperbolic_covolume

    r = hyperbolic_covolume(args.case, args.cutoff, d, args.fields)
    rep.add(f"vol({args.case})", r.hyperbolic_covolume, d, r.tail_bound, "tail_bound")
    rep.add(f"mu({args.case})", r.mu_covolume, d)
    rep.diagnostics["provenance"] = [
        {
            "name": p.name,
            "value": _num(p.value, d),
            "cutoff": p.cutoff,
            "tail_bound": None if p.tail_bound is None else _err(p.tail_bound),
        }
        for p in r.provenance
    ]


def _cmd_bounds(args, rep: Report, d: int):
    from . import covolume as cv

    def need(name, value):
        if value is None:
            raise OrbivolError(f"--eq {args.eq} requires --{name}")
        return value

    if args.eq == "37":
        v = cv.bound_deg_ge7(d)
        rep.add("bound(37), d >= 7", v, d)
    elif args.eq == "35":
        dk = need("dk", args.dk)
        v = cv.bound_disc(args.d, dk, d)
        rep.add(f"bound(35), d={args.d}, D_k={dk}", v, d)
        rep.diagnostics["min D_k above threshold"] = cv.min_disc_exceeding(args.d, digits=d)
    elif args.eq == "34":
        dk, dl = need("dk", args.dk), need("dl", args.dl)
        v = cv.bound_disc_pair(args.d, dk, dl, d)
        rep.add(f"bound(34), d={args.d}, D_k={dk}, D_l={dl}", v, d)
        rep.diagnostics["b_k (largest D_l at or below threshold)"] = cv.max_ell_disc(args.d, dk, digits=d)
    else:
        dk, dl, h = need("dk", args.dk), need("dl", args.dl), need("h", args.h)
        v = cv.bound_classno(args.d, dk, dl, h, d)
        rep.add(f"bound(31), d={args.d}, D_k={dk}, D_l={dl}, h={h}", v, d)
    rep.diagnostics["exceeds 4e-3"] = bool(v > cv.THRESHOLD)


def _cmd_verify(args, rep: Report, d: int):
    from .covolume import verify_identity

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegradedPrecisionWarning)
        r = verify_identity(args.identity, args.target, args.cutoff, d, args.fields)
    rep.add("lhs (arithmetic)", r.lhs, d, r.lhs_tail, "tail_bound")
    rep.add("rhs (2 x prism)", r.rhs, d, r.rhs_error)
    rep.add("matched_digits", r.matched_digits, d)
    rep.add("achievable_digits", r.achievable_digits, d)
    rep.diagnostics["matched_digits"] = r.matched_digits
    rep.diagnostics["achievable_digits"] = r.achievable_digits
    rep.diagnostics["target_digits"] = args.target
    rep.diagnostics["degraded"] = r.degraded
    for w in caught:
        rep.diagnostics["warning"] = str(w.message)
    if r.degraded:
        rep.exit_code = EXIT_DEGRADED
    elif r.matched_digits < args.target:
        rep.exit_code = EXIT_ERROR
        rep.diagnostics["failure"] = f"only {r.matched_digits} digits agree"


def _cmd_table1(args, rep: Report, d: int):
    from .covolume import hyperbolic_covolume
    from .prism import polytope_volume, prism_volume_detail, polytope_alpha

    for label in ("gamma0", "gamma1", "gamma2"):
        r = hyperbolic_covolume(label, args.cutoff, d, args.fields)
        name = "Gamma'" + label[-1]
        rep.add(f"vol({name})", r.hyperbolic_covolume, d, r.tail_bound, "tail_bound")
    symbols = {"P0": "[5,3,3,3,3]", "P1": "[5,3,3,3,3^{1,1}]", "P2": "[5,3,3,3,4]"}
    for pid in ("P0", "P1", "P2"):
        q = prism_volume_detail(polytope_alpha(pid), _tol(args), d)
        factor = 2 if pid == "P1" else 1
        v = polytope_volume(pid, _tol(args), d)
        rep.add(f"vol(Delta{pid[1]}) {symbols[pid]}", v, d, factor * q.error_estimate)


COMMANDS = {
    "lob": _cmd_lob,
    "prism": _cmd_prism,
    "coxeter": _cmd_coxeter,
    "zeta": _cmd_zeta,
    "covolume": _cmd_covolume,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
    "table1": _cmd_table1,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command, print its report and return the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(stderr)
        return EXIT_USAGE
    try:
        d = args.digits if args.digits is not None else default_digits()
        if d < MIN_DIGITS:
            raise OrbivolError(f"precision must be at least {MIN_DIGITS} digits")
        config = {"digits": d, "cutoff": args.cutoff, "tol": args.tol, "fields": args.fields}
        rep = Report(argv, config)
        start = time.perf_counter()
        with precision(d):
            COMMANDS[args.command](args, rep, d)
        runtime = time.perf_counter() - start
    except (OrbivolError, OSError, json.JSONDecodeError) as exc:
        stderr.write(f"orbivol {args.command}: {exc}\n")
        return EXIT_ERROR
    if args.json:
        stdout.write(json.dumps(rep.to_dict(runtime), indent=2) + "\n")
    else:
        stdout.write(rep.to_text() + "\n")
    return rep.exit_code


def main() -> None:
    sys.exit(run())


def strip_volatile(report: dict) -> dict:
    """The report without its timestamp, for byte-level comparisons."""
    return {k: v for k, v in report.items() if k != "timestamp"}


__all__ = ["run", "main", "build_parser", "strip_volatile", "Report"]
