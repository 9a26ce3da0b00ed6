"""Command-line interface.

Usage::

    entropic-ricci gen hypercube 3 --out q3.json
    entropic-ricci curvature q3.json --mean log
    entropic-ricci verify all q3.json --kappa auto --out samples.jsonl
    entropic-ricci report samples.jsonl --format csv

Exit codes: 0 success, 1 bad input, 2 curvature solver failure,
3 at least one verification sample failed.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import curvature as curv
from . import estimates as est
from .chain import FAMILIES, diameter, generate
from .errors import RicciError, SolverFailure
from .means import MeanKind
from .serialize import (
    SAMPLE_COLUMNS,
    SUMMARY_COLUMNS,
    dumps,
    format_float,
    load_chain,
    read_jsonl,
    rows_to_csv,
    samples_to_jsonl,
    write_graph,
)

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_FAILED = 0, 1, 2, 3
AUTO_MARGIN = 1e-6
SUITES = ("global", "local", "corollary", "diameter", "be", "all")

log = logging.getLogger("entropic_ricci")


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("grid must be nonempty")
    return values


def _kappa(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--kappa takes 'auto' or a number, got {text!r}") from exc
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("--kappa must be finite")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from exc
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _add_solver_args(p: argparse.ArgumentParser):
    p.add_argument("--mean", choices=("log", "arith"), default="log")
    p.add_argument("--floor-delta", type=float, default=curv.DEFAULT_FLOOR)
    p.add_argument("--starts", type=_positive_int, default=curv.DEFAULT_STARTS)
    p.add_argument("--max-iter", type=_positive_int, default=curv.DEFAULT_MAX_ITER)
    p.add_argument("--tol", type=float, default=curv.DEFAULT_TOL)
    p.add_argument("--seed", type=_seed, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropic-ricci", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as JSON")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("curvature", help="entropic and Bakry-Emery curvature of a graph or kernel")
    p.add_argument("input", type=Path)
    _add_solver_args(p)
    p.add_argument("--extrapolate", action="store_true", help="re-run at floors 1e-3, 1e-4, 1e-5")
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="sample the gradient estimates and the diameter bound")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("input", type=Path)
    _add_solver_args(p)
    p.add_argument("--kappa", type=_kappa, default="auto")
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--t-grid", type=_float_list)
    p.add_argument("--eps-grid", type=_float_list)
    p.add_argument("--slack", type=float, default=est.DEFAULT_SLACK)
    p.add_argument("--out", type=Path, help="samples file; the summary goes to <out>.summary.csv")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("report", help="summarise a JSON-lines sample file")
    p.add_argument("input", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _solver_opts(args) -> dict:
    return {
        "floor_delta": args.floor_delta,
        "starts": args.starts,
        "max_iter": args.max_iter,
        "tol": args.tol,
        "seed": args.seed,
    }


def cmd_gen(args) -> int:
    g = generate(args.family, args.n)
    if args.out is None:
        sys.stdout.write(dumps(g.to_dict(), indent=2) + "\n")
    else:
        write_graph(g, args.out)
    return EXIT_OK


def cmd_curvature(args) -> int:
    chain = load_chain(args.input)
    kind = MeanKind.parse(args.mean)
    report = curv.entropic_curvature_lower_bound(chain, kind, **_solver_opts(args))
    if args.extrapolate:
        opts = {k: v for k, v in _solver_opts(args).items() if k != "floor_delta"}
        report.extrapolation = curv.floor_extrapolation(chain, kind, **opts)
    kappa_be = curv.bakry_emery_curvature(chain)
    payload = {
        "input": str(args.input),
        "n": chain.n,
        "max_degree": chain.max_degree,
        "diameter": diameter(chain),
        "simple_random_walk": chain.is_simple_random_walk(),
        "kappa_entropic": {kind.value: report.to_dict()},
        "kappa_be": kappa_be,
    }
    if args.format == "json":
        _emit(dumps(payload, indent=2) + "\n", args.out)
    else:
        row = {
            "input": str(args.input),
            "n": chain.n,
            "mean": kind.value,
            "kappa": report.kappa,
            "kappa_be": kappa_be,
            "floor_delta": report.floor_delta,
            "starts": report.starts,
            "gradient_norm": report.gradient_norm,
            "eigen_gap": report.eigen_gap,
        }
        _emit(rows_to_csv([row], list(row)), args.out)
    print(f"kappa_entropic[{kind.value}] = {format_float(report.kappa)}  kappa_BE = {format_float(kappa_be)}",
          file=sys.stderr)
    return EXIT_OK


def _run_suites(args, chain) -> list:
    kind = MeanKind.parse(args.mean)
    wanted = est.KINDS if args.suite == "all" else (args.suite,)
    kappa_be = None
    if args.kappa == "auto":
        kappa = curv.entropic_curvature_lower_bound(chain, kind, **_solver_opts(args)).kappa - AUTO_MARGIN
        print(f"auto kappa = {format_float(kappa)}", file=sys.stderr)
    else:
        kappa = args.kappa

    counts = {} if args.samples is None else {"samples": args.samples}
    tg = {} if args.t_grid is None else {"t_grid": args.t_grid}
    common = {"seed": args.seed, "slack": args.slack}
    srw = chain.is_simple_random_walk()
    samples = []
    for suite in wanted:
        if suite == "global":
            samples += est.run_global_suite(chain, kappa, kind, **counts, **tg, **common)
        elif suite == "local":
            samples += est.run_local_suite(chain, kappa, kind, eps_grid=args.eps_grid, **counts, **tg, **common)
        elif suite == "corollary":
            if not srw or chain.max_degree < 2:
                print("corollary suite skipped: needs a simple random walk with maximal degree >= 2",
                      file=sys.stderr)
                continue
            samples += est.run_corollary_suite(chain, kappa, **counts, **tg, **common)
        elif suite == "be":
            if kappa_be is None:
                kappa_be = curv.bakry_emery_curvature(chain)
            k = kappa_be - AUTO_MARGIN if args.kappa == "auto" else kappa
            samples += est.run_be_suite(chain, k, **counts, **tg, **common)
        elif suite == "diameter":
            if not srw or kappa <= 0:
                print("diameter suite skipped: needs a simple random walk and kappa > 0", file=sys.stderr)
                continue
            if kappa_be is None:
                kappa_be = curv.bakry_emery_curvature(chain)
            s = est.check_diameter(chain, kappa, kappa_be, args.slack)
            samples.append(s)
            print(f"diam={int(s.lhs)} {'<=' if s.passed else '>'} bound={format_float(s.rhs)}"
                  f"  (2/kappa_BE={format_float(s.inputs['be_bound'])})", file=sys.stderr)
    return samples


def cmd_verify(args) -> int:
    chain = load_chain(args.input)
    samples = _run_suites(args, chain)
    if args.format == "json":
        body = samples_to_jsonl(samples)
    else:
        body = rows_to_csv([s.to_dict() for s in samples], SAMPLE_COLUMNS)
    _emit(body, args.out)
    summary = est.summarize(samples)
    summary_csv = rows_to_csv(summary, SUMMARY_COLUMNS)
    if args.out is not None:
        Path(str(args.out) + ".summary.csv").write_text(summary_csv)
    sys.stderr.write(summary_csv)
    failures = sum(row["failures"] for row in summary)
    return EXIT_FAILED if failures else EXIT_OK


class _Row:
    def __init__(self, d):
        self.kind = d["kind"]
        self.residual = float(d["residual"])
        self.passed = bool(d["pass"])


def cmd_report(args) -> int:
    rows = read_jsonl(args.input)
    try:
        summary = est.summarize(_Row(d) for d in rows)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{args.input}: not a verification sample file ({exc!r})") from exc
    if args.format == "csv":
        _emit(rows_to_csv(summary, SUMMARY_COLUMNS), args.out)
    else:
        _emit(dumps(summary, indent=2) + "\n", args.out)
    return EXIT_FAILED if any(r["failures"] for r in summary) else EXIT_OK


COMMANDS = {"gen": cmd_gen, "curvature": cmd_curvature, "verify": cmd_verify, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (RicciError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
