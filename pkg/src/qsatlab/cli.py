"""Command line front end: `qsatlab solve` and `qsatlab self-check`.

Exit codes follow sysexits for failures (64 usage, 65 bad data, 66 missing
input, 70 internal); under --exit-verdict a produced verdict maps to 10 (SAT)
or 20 (UNSAT). self-check exits 1 on any disagreement.
"""

from __future__ import annotations

import argparse
import sys

from .errors import DimacsParseError, EnumerationCapError, QubitCapError
from .pipeline import AMPLIFIERS, FORMATS, MODES, PipelineConfig, run_pipeline, self_check

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we want >= 64
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="qsatlab", description="SAT decision laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide one DIMACS instance")
    solve.add_argument("--input", required=True, help="DIMACS CNF file")
    solve.add_argument("--mode", choices=MODES, default="oracle")
    solve.add_argument("--amplifier", choices=AMPLIFIERS, default="chaos")
    solve.add_argument("--a", type=float, default=3.71, help="logistic map parameter")
    solve.add_argument("--gamma-re", type=float, default=1.0)
    solve.add_argument("--gamma-im", type=float, default=0.0)
    solve.add_argument("--e0", type=int, default=0)
    solve.add_argument("--e1", type=int, default=2)
    solve.add_argument("--horizon-factor", type=float, default=20.0)
    solve.add_argument("--threshold", type=float, default=0.1)
    solve.add_argument("--emit", default=None, help="write report/trace to this path")
    solve.add_argument("--format", choices=FORMATS, default="json")
    solve.add_argument(
        "--exit-verdict", action="store_true",
        help="exit 10 when SAT, 20 when UNSAT (script-friendly)",
    )

    check = sub.add_parser("self-check", help="regression harness over a corpus directory")
    check.add_argument("--corpus", required=True, help="directory of .cnf files")
    return parser


def _run_solve(args) -> int:
    cfg = PipelineConfig(
        input_path=args.input,
        mode=args.mode,
        amplifier=args.amplifier,
        a=args.a,
        gamma_re=args.gamma_re,
        gamma_im=args.gamma_im,
        e0=args.e0,
        e1=args.e1,
        horizon_factor=args.horizon_factor,
        threshold=args.threshold,
        emit_path=args.emit,
        format=args.format,
    )
    report = run_pipeline(cfg)
    q = report.q_squared_rational
    print(f"input      : {report.input_path}")
    print(f"formula    : n={report.n} m={report.m} mu={report.mu}")
    print(f"q_squared  : {report.q_squared_float!r}" + (f" (= {q})" if q is not None else ""))
    if report.amplifier_satisfiable is None:
        print("amplifier  : none")
    else:
        print(f"amplifier  : {report.amplifier} -> {'SAT' if report.amplifier_satisfiable else 'UNSAT'}")
    if report.reference is not None:
        print(f"brute force: r={report.reference.r} -> {'SAT' if report.reference.r else 'UNSAT'}")
    if report.agreement is not None:
        print(f"agreement  : {report.agreement}")
    if args.emit:
        print(f"emitted    : {args.emit} ({args.format})")
    if args.exit_verdict and report.amplifier_satisfiable is not None:
        return 10 if report.amplifier_satisfiable else 20
    return 0


def _run_self_check(args) -> int:
    summary = self_check(args.corpus)
    print(summary.to_text())
    return 0 if summary.ok else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return _run_solve(args)
        return _run_self_check(args)
    except DimacsParseError as exc:
        print(f"qsatlab: parse error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except FileNotFoundError as exc:
        print(f"qsatlab: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except (EnumerationCapError, QubitCapError, ValueError) as exc:
        print(f"qsatlab: {exc}", file=sys.stderr)
        return EX_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"qsatlab: internal error: {exc}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    raise SystemExit(main())
