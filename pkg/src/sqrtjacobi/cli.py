"""Command line front end: solve, compare, gen, trace.

Exit codes: 0 success, 1 input or I/O error, 2 no convergence,
3 the two rotation methods disagree.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .compare import compare_methods, format_comparison
from .core import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, Method, SolverConfig
from .errors import DidNotConverge, JacobiError
from .io import (
    MatrixSpec,
    RunReport,
    format_matrix_market,
    generate_symmetric,
    read_matrix_market,
    write_history_csv,
    write_matrix_market,
    write_report,
)
from .solver import solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_DISAGREE = 3


def _spectrum(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid spectrum {text!r}") from None


def _solver_options(p: argparse.ArgumentParser, method: bool = True) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative stopping tolerance (default %(default)g)")
    p.add_argument("--max-sweeps", type=int, default=DEFAULT_MAX_SWEEPS, help="sweep budget (default %(default)d)")
    if method:
        p.add_argument("--method", choices=[m.value for m in Method], default=Method.SQRT.value)


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for non-convergence
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sqrtjacobi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="eigenvalues of a Matrix Market file")
    p.add_argument("input")
    _solver_options(p)
    p.add_argument("--out", help="write a run report here")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("compare", help="run both rotation methods and compare")
    p.add_argument("input")
    _solver_options(p, method=False)
    p.add_argument("--out", help="write the comparison as JSON")
    p.add_argument("--pivots", type=int, default=None, help="limit the printed pivot log")

    p = sub.add_parser("gen", help="generate a seeded symmetric matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--spectrum", type=_spectrum, default=None, help="comma separated eigenvalues")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="entry scale when no spectrum is given")
    p.add_argument("--out", help="output .mtx path (default: standard output)")

    p = sub.add_parser("trace", help="per-rotation Psi history and quadratic estimate")
    p.add_argument("input")
    _solver_options(p)
    p.add_argument("--gap", type=float, default=None, help="eigenvalue gap for the estimate (default: from the result)")
    p.add_argument("--out", help="CSV path for the per-sweep history (default: standard output)")
    return parser


def _config(args) -> SolverConfig:
    return SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps, method=getattr(args, "method", Method.SQRT))


def _print_summary(result, method, out) -> None:
    rep = result.report
    print(f"method: {Method(method).value}", file=out)
    print("eigenvalues:", file=out)
    for v in result.decomposition.eigenvalues:
        print(f"  {v:.12g}", file=out)
    print(f"sweeps: {rep.sweep}", file=out)
    print(f"rotations: {rep.rotations_applied}", file=out)
    print(f"psi: {rep.psi:.6e}", file=out)
    print(f"converged: {'yes' if rep.converged else 'no'}", file=out)


def _run(A, config, **kwargs):
    try:
        return solve(A, config, **kwargs), EXIT_OK
    except DidNotConverge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.result, EXIT_NO_CONVERGENCE


def cmd_solve(args) -> int:
    A = read_matrix_market(args.input)
    config = _config(args)
    result, code = _run(A, config, record_rotations=False)
    _print_summary(result, config.method, sys.stdout)
    if args.out:
        write_report(RunReport.from_result(result, config.method), args.out, args.format)
    return code


def cmd_compare(args) -> int:
    A = read_matrix_market(args.input)
    cmp = compare_methods(A, tol=args.tol, max_sweeps=args.max_sweeps)
    print(format_comparison(cmp, args.pivots))
    for method, res in cmp.results.items():
        ev = ", ".join(f"{v:.12g}" for v in res.eigenvalues)
        print(f"{method.value} eigenvalues: {ev}")
    if args.out:
        payload = {
            "methods": {m.value: RunReport.from_result(r, m).to_dict() for m, r in cmp.results.items()},
            "eigenvalue_gap": cmp.eigenvalue_gap,
            "agree": cmp.agree,
            "quadrant_mismatches": cmp.mismatched,
            "max_map_error": cmp.max_map_error,
            "pivots": [
                {"p": pc.p + 1, "q": pc.q + 1, "theta": pc.theta, "x": pc.x,
                 "cos2theta_half": pc.mapped_x, "quadrant_match": pc.quadrant_match}
                for pc in cmp.pivots
            ],
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    if not all(r.converged for r in cmp.results.values()):
        print("error: at least one method did not converge", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    if not cmp.agree:
        print("error: methods disagree beyond tolerance", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = MatrixSpec(n=args.n, spectrum=args.spectrum, seed=args.seed, entry_scale=args.scale)
    M = generate_symmetric(spec)
    if args.out:
        write_matrix_market(M, args.out)
        if spec.spectrum is not None:
            print("spectrum: " + " ".join(f"{v:.12g}" for v in spec.spectrum))
    else:
        sys.stdout.write(format_matrix_market(M))
        if spec.spectrum is not None:
            print("spectrum: " + " ".join(f"{v:.12g}" for v in spec.spectrum), file=sys.stderr)
    return EXIT_OK


def cmd_trace(args) -> int:
    A = read_matrix_market(args.input)
    config = _config(args)
    result, code = _run(A, config, gap_delta=args.gap, analyze=args.gap is None)
    rep = result.report
    report = RunReport.from_result(result, config.method)

    if args.out:
        out = Path(args.out)
        write_report(report, out, "csv")
        write_history_csv(out.with_name(out.stem + ".rotations.csv"), rep.psi_history, header=("k", "psi"))
    else:
        write_history_csv(sys.stdout, rep.sweep_psi)

    # with no --out the CSV owns standard output
    target = sys.stdout if args.out else sys.stderr
    print(f"sweeps: {rep.sweep}  rotations: {rep.rotations_applied}  "
          f"converged: {'yes' if rep.converged else 'no'}", file=target)
    est = result.estimate
    if est is None:
        print("quadratic estimate: not available (zero eigenvalue gap or fewer than N+1 samples)", file=target)
    else:
        info = est.to_dict()
        onset = "none" if est.onset is None else f"{est.onset} (psi = {info['onset_psi']:.3e})"
        print(
            f"quadratic estimate: gap_delta = {est.gap_delta:.6g}, N = {est.N}, "
            f"observations = {info['observations']}, violations = {info['violations']}, onset = {onset}",
            file=target,
        )
        threshold = est.gap_delta / (2.0 * math.sqrt(2.0))
        below = est.violations_below(threshold)
        print(f"violations with psi(k) < gap_delta/(2 sqrt 2): {len(below)}", file=target)
        if args.out:
            out = Path(args.out)
            detail = dict(info, bound_satisfied=est.bound_satisfied, violations_below_threshold=below)
            out.with_name(out.stem + ".estimate.json").write_text(json.dumps(detail, indent=2) + "\n")
    return code


COMMANDS = {"solve": cmd_solve, "compare": cmd_compare, "gen": cmd_gen, "trace": cmd_trace}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (JacobiError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
