"""Command line front end.

Each subcommand maps onto one library call and prints a CSV table or a JSON
document. Exit status: 0 success, 1 usage or domain error, 2 a verification
subcommand found violations.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import analysis, operators, tables
from .errors import BellissardError, UsageError
from .numerics import Backend, format_scalar, parse_decimal, to_float
from .sequence import LambdaParam, generate

EXIT_OK, EXIT_ERROR, EXIT_VIOLATIONS = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, *, lam_default=None):
    p.add_argument("--lambda", dest="lam", default=lam_default, help="coupling as a decimal string, e.g. 2.1")
    p.add_argument("--backend", choices=[b.value for b in Backend], default="float")
    p.add_argument("-N", type=int, default=1024, help="sequence length / matrix size (default 1024)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", type=Path, help="write here instead of standard output")
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--unproven-regime", action="store_true", help="allow lambda <= 2")
    p.add_argument("--precision", type=int, default=128, help="interval endpoint bits")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellissard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("gen", help="generate R_0..R_N"))
    _common(sub.add_parser("verify", help="check the proved four-way bounds"))
    _common(sub.add_parser("conjecture", help="check the conjectured bounds"))
    p = sub.add_parser("splitting", help="check the finer splitting conjecture")
    _common(p)
    p.add_argument("-r", type=int, default=2)
    p.add_argument("--k-max", type=int, default=None)
    p = sub.add_parser("scan", help="conjecture scan over a lambda grid")
    _common(p)
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    p.add_argument("--step", required=True)
    p.add_argument("--workers", type=int, default=1)
    _common(sub.add_parser("prop1", help="check 0 < R_2n < R_n, R_2n <= 1"))
    p = sub.add_parser("decay", help="samples R_{p 2^k}")
    _common(p)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--k-max", type=int, default=None)
    p = sub.add_parser("limits", help="samples |R_{p 2^k + s} - R_s|")
    _common(p)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--batch", action="store_true", help="uniformity table over p <= --p, s <= --s")
    p = sub.add_parser("spectrum", help="spectrum of the truncated H")
    _common(p)
    _spectral(p)
    p.add_argument("--matrix", action="store_true", help="export the matrix (j, a_j, b_j) instead")
    p = sub.add_parser("dyson", help="normal modes of a mass-spring chain")
    _common(p)
    _spectral(p)
    p.add_argument("--chain", type=Path, required=True, help="CSV with columns m,K")
    p.add_argument("--boundary", choices=["free", "fixed"], default="free")
    p = sub.add_parser("mathieu", help="spectrum of the almost Mathieu truncation")
    _common(p, lam_default="2")
    _spectral(p)
    p.add_argument("--alpha", default=None, help="frequency (default: golden mean)")
    p.add_argument("--theta", default="0")
    p.add_argument("--matrix", action="store_true")
    return parser


def _spectral(p):
    p.add_argument("--gap-threshold", type=float, default=0.01)
    p.add_argument("--ids-resolution", type=int, default=64)
    p.add_argument("--eig-tol", type=float, default=1e-12)


# -- helpers --------------------------------------------------------------------


def _lambda(args) -> LambdaParam:
    if args.lam is None:
        raise UsageError(f"{args.command} needs --lambda")
    return LambdaParam.of(args.lam, args.backend, unproven_regime=args.unproven_regime, precision=args.precision)


def _sequence(args):
    return generate(_lambda(args), args.N, precision=args.precision)


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return repr(x)
    return format_scalar(x) if not isinstance(x, (int, str)) else str(x)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _margin_tol(args) -> float:
    return analysis.DEFAULT_MARGIN_TOL if args.tol is None else args.tol


def _bounds_output(report, args):
    if args.format == "json":
        text = _dump(report.to_dict())
    else:
        rows = [[v.n, v.index, v.inequality, _cell(v.lhs), _cell(v.rhs), _cell(v.margin), _cell(v.k)] for v in report.violations]
        text = tables.write_table(rows, "bounds")
    return text, EXIT_VIOLATIONS if report.violations else EXIT_OK


def _spectrum_output(M, args, modes=None):
    if getattr(args, "matrix", False):
        b = list(M.off_diagonal) + [None]
        rows = [[j + 1, _cell(float(a)), _cell(None if bj is None else float(bj))] for j, (a, bj) in enumerate(zip(M.diagonal, b))]
        return tables.write_table(rows, "matrix")
    eigs = operators.eigenvalues(M, tol=args.eig_tol)
    report = operators.spectrum_report(eigs, args.gap_threshold, args.ids_resolution, modes=modes, matrix=M)
    if args.format == "json":
        return _dump(report.to_dict())
    if modes is not None:
        rows = [[k + 1, _cell(m.mu), _cell(m.frequency), _cell(m.stable)] for k, m in enumerate(modes)]
        return tables.write_table(rows, "modes")
    return tables.write_table([[k + 1, _cell(float(e))] for k, e in enumerate(eigs)], "eigenvalues")


def _default_k_max(N: int, p: int, s: int) -> int:
    if N - s < p:
        raise UsageError(f"N = {N} too small for p = {p}, s = {s}")
    return int(math.floor(math.log2((N - s) / p)))


# -- subcommands ----------------------------------------------------------------


def _cmd_gen(args):
    seq = _sequence(args)
    exact = seq.backend is not Backend.FLOAT64
    if args.format == "json":
        doc = {
            "kind": "sequence",
            "lambda": {"decimal": args.lam, **({"exact": format_scalar(seq.lam.value)} if exact else {})},
            "backend": seq.backend.value,
            "N": seq.N,
            "warnings": ["lambda outside the proven regime"] if seq.regime_warning else [],
            "values": [
                {"n": n, "decimal": to_float(v), "exact": format_scalar(v) if exact else None}
                for n, v in enumerate(seq.values)
            ],
        }
        return _dump(doc), EXIT_OK
    rows = [[n, repr(to_float(v)), format_scalar(v) if exact else "", n % 4] for n, v in enumerate(seq.values)]
    return tables.write_table(rows, "gen"), EXIT_OK


def _cmd_verify(args):
    return _bounds_output(analysis.check_theorem(_sequence(args), _margin_tol(args)), args)


def _cmd_conjecture(args):
    return _bounds_output(analysis.check_conjecture(_sequence(args), _margin_tol(args)), args)


def _cmd_splitting(args):
    period = 1 << args.r
    k_max = args.k_max if args.k_max is not None else (args.N - (period - 1)) // period
    return _bounds_output(analysis.check_splitting(_sequence(args), args.r, k_max, tol=_margin_tol(args)), args)


def _cmd_prop1(args):
    return _bounds_output(analysis.check_prop1(_sequence(args), _margin_tol(args)), args)


def _cmd_scan(args):
    report = analysis.scan_conjecture(
        args.lo, args.hi, args.step, args.N, args.backend,
        tol=_margin_tol(args), unproven_regime=args.unproven_regime, workers=args.workers,
    )
    status = EXIT_VIOLATIONS if report.any_violation else EXIT_OK
    if args.format == "json":
        return _dump(report.to_dict()), status
    rows = []
    for row in report.rows:
        firsts = [_cell(row.first_violation[q]) for q in analysis.CONJECTURE_INEQUALITIES]
        rows.append([repr(float(row.lam)), format_scalar(row.lam), *firsts, row.violation_count])
    return tables.write_table(rows, "scan"), status


def _convergence_output(rep, kind, args):
    if args.format == "json":
        return _dump({"kind": kind, **rep.to_dict()}), EXIT_OK
    rows = [[x.k, x.index, _cell(x.value), _cell(x.deviation)] for x in rep.samples]
    return tables.write_table(rows, "convergence"), EXIT_OK


def _cmd_decay(args):
    k_max = args.k_max if args.k_max is not None else _default_k_max(args.N, args.p, 0)
    return _convergence_output(analysis.proposition_decay(_sequence(args), args.p, k_max), "decay", args)


def _cmd_limits(args):
    seq = _sequence(args)
    if not args.batch:
        k_max = args.k_max if args.k_max is not None else _default_k_max(args.N, args.p, args.s)
        return _convergence_output(analysis.proposition_limit(seq, args.p, args.s, k_max), "limit", args)
    k_max = args.k_max if args.k_max is not None else _default_k_max(args.N, args.p, args.s)
    rows = analysis.uniformity_table(seq, range(1, args.p + 1), range(1, args.s + 1), k_max)
    if args.format == "json":
        doc = {"kind": "uniformity", "rows": [{"k": r.k, "max_deviation": r.max_deviation, "worst": list(r.worst)} for r in rows]}
        return _dump(doc), EXIT_OK
    return tables.write_table([[r.k, repr(r.max_deviation), *r.worst] for r in rows], "uniformity"), EXIT_OK


def _cmd_spectrum(args):
    seq = _sequence(args)
    return _spectrum_output(operators.build_bellissard(seq, args.N), args), EXIT_OK


def _cmd_dyson(args):
    chain = tables.read_chain_csv(args.chain, args.boundary)
    M = operators.build_chain(chain)
    if getattr(args, "matrix", False):
        return _spectrum_output(M, args), EXIT_OK
    modes = operators.mode_frequencies(M, tol=args.eig_tol)
    return _spectrum_output(M, args, modes), EXIT_OK


def _cmd_mathieu(args):
    alpha = operators.GOLDEN_MEAN if args.alpha is None else to_float(parse_decimal(args.alpha))
    coupling = to_float(parse_decimal(args.lam))
    theta = to_float(parse_decimal(args.theta))
    M = operators.build_almost_mathieu(coupling, alpha, theta, args.N)
    return _spectrum_output(M, args), EXIT_OK


COMMANDS = {
    "gen": _cmd_gen,
    "verify": _cmd_verify,
    "conjecture": _cmd_conjecture,
    "splitting": _cmd_splitting,
    "scan": _cmd_scan,
    "prop1": _cmd_prop1,
    "decay": _cmd_decay,
    "limits": _cmd_limits,
    "spectrum": _cmd_spectrum,
    "dyson": _cmd_dyson,
    "mathieu": _cmd_mathieu,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Execute one invocation and return its exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        text, status = COMMANDS[args.command](args)
        if args.out is not None:
            args.out.write_text(text)
        else:
            stdout.write(text)
        return status
    except (BellissardError, OverflowError, OSError) as exc:
        stderr.write(f"bellissard: error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
