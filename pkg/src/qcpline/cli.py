"""Command-line front end.

Exit codes: 0 every hard check passes, 1 a check fails, 2 usage error,
3 numerical degeneracy (or a check that cannot be resolved at this
truncation), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import pullback, qcp
from .report import SUBCOMMAND_SECTIONS, RunConfig, build_document, emit

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE, EXIT_IO = 0, 1, 2, 3, 4

DEGENERACY = (
    qcp.DegenerateTruncationError,
    qcp.DecompositionFailure,
    qcp.TruncationTooSmall,
    pullback.UnreliableSymbolError,
)


def _float_list(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(item) for item in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=2.0, help="deformation parameter, q > 1")
    common.add_argument("--c", type=float, default=1.0, help="family parameter, c > 0")
    common.add_argument("--t1-angle", type=float, default=0.0, help="t1 = exp(i * angle)")
    common.add_argument("--n", type=int, default=256, help="truncation size N")
    common.add_argument("--k", type=int, default=40, help="number of v-basis vectors")
    common.add_argument("--tol", type=float, default=1e-10, help="relative spectral cut")
    common.add_argument("--margin", type=int, default=64, help="untrusted boundary rows")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--q-grid", type=_float_list, default=None, help="comma list overriding --q")
    common.add_argument("--c-grid", type=_float_list, default=None, help="comma list overriding --c")
    common.add_argument("--gauge-angles", type=_float_list, default=None, help="t1 angles compared by gauge")

    parser = argparse.ArgumentParser(prog="qcpline", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMAND_SECTIONS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(
        subcommand=args.subcommand,
        q=args.q,
        c=args.c,
        t1_angle=args.t1_angle,
        N=args.n,
        K=args.k,
        tol=args.tol,
        margin=args.margin,
        fmt=args.format,
        output=args.output,
        q_grid=args.q_grid,
        c_grid=args.c_grid,
    )
    if args.gauge_angles is not None:
        config.gauge_angles = args.gauge_angles
    return config


def run_report(config: RunConfig) -> tuple[int, dict | None]:
    """Run the requested checks and write the document; returns (exit code, document)."""
    try:
        doc = build_document(config)
    except qcp.VerificationFailure as err:
        print(f"qcpline: check failed: {err}", file=sys.stderr)
        return EXIT_FAIL, None
    except DEGENERACY as err:
        print(f"qcpline: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DEGENERATE, None

    text = emit(doc, config.fmt)
    try:
        if config.output == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(config.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as err:
        print(f"qcpline: cannot write report: {err}", file=sys.stderr)
        return EXIT_IO, doc

    code = {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_DEGENERATE}[doc["status"]]
    for row in doc["checks"]:
        if row["status"] != "pass":
            print(f"qcpline: {row['status']}: {row['check']} (value {row['value']}, threshold {row['threshold']})",
                  file=sys.stderr)
            break
    return code, doc


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = config_from_args(args)
    try:
        config.validate()
    except ValueError as err:
        parser.error(str(err))
    start = time.perf_counter()
    code, _ = run_report(config)
    elapsed = time.perf_counter() - start
    if config.output != "-":
        print(f"qcpline {config.subcommand}: exit {code} in {elapsed:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
