"""Command-line interface.

Subcommands: ``simulate`` (Monte Carlo sweep), ``consistency``
(plant-true weight experiment), ``fit`` (fit one CSV and export
DOT/weights), ``version``. Exit codes: 0 success, 1 usage error,
2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .errors import DataError, NumericalError
from .estimator import DagModelAverager
from .io import degree_summary, export_dot, load_csv, standardize, write_weights_csv
from .simulate import BASELINES, ExperimentConfig, run_simulation, run_weight_consistency

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _lambda_rule(text: str):
    if text in ("log_n", "mallows2"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid --lambda {text!r}: expected log_n, mallows2 or a number"
        ) from None
    return value


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}") from None


def _baseline_list(text: str) -> tuple[str, ...]:
    if not text:
        return ()
    names = tuple(tok for tok in text.split(",") if tok)
    unknown = set(names) - set(BASELINES)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown baselines {sorted(unknown)}; choose from {', '.join(BASELINES)}"
        )
    return names


def _add_sweep_flags(sub):
    sub.add_argument("--p", type=_int_list, default=(10,), help="comma-separated node counts")
    sub.add_argument("--rho", type=_float_list, default=(0.2,), help="comma-separated edge probabilities")
    sub.add_argument("--n", type=_int_list, default=(100,), help="comma-separated sample sizes")
    sub.add_argument("--reps", type=int, default=50, help="replications per grid cell")
    sub.add_argument("--candidates", type=int, default=11, help="number of nested candidates (odd)")
    sub.add_argument("--lambda", dest="lambda_rule", type=_lambda_rule, default="log_n",
                     help="penalty rule: log_n, mallows2, or a fixed number")
    sub.add_argument("--seed", type=int, default=0, help="base seed for the sweep")
    sub.add_argument("--out", required=True, help="output directory for results.csv and SVGs")
    sub.add_argument("--baselines", type=_baseline_list, default=BASELINES,
                     help=f"comma-separated subset of {{{','.join(BASELINES)}}}")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers (1 = sequential)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dagavg", description="Model averaging for Gaussian DAG estimation.")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("simulate", help="run the Monte Carlo sweep")
    _add_sweep_flags(sim)

    con = commands.add_parser("consistency", help="run the plant-true weight experiment")
    _add_sweep_flags(con)
    con.add_argument("--plant-true", action=argparse.BooleanOptionalAction, default=True,
                     help="supply the true graph as the initial candidate")

    fit = commands.add_parser("fit", help="fit one CSV dataset")
    fit.add_argument("--data", required=True, help="input CSV (header row, numeric body)")
    fit.add_argument("--candidates", type=int, default=11)
    fit.add_argument("--lambda", dest="lambda_rule", type=_lambda_rule, default="log_n")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--out-dot", default=None, help="write the averaged graph as DOT")
    fit.add_argument("--out-weights", default=None, help="write model weights as CSV")
    fit.add_argument("--standardize", action=argparse.BooleanOptionalAction, default=True,
                     help="center and scale columns before fitting")

    commands.add_parser("version", help="print the package version")
    return parser


def _cmd_sweep(args, consistency: bool) -> int:
    cfg = ExperimentConfig(
        p_list=args.p,
        rho_list=args.rho,
        n_list=args.n,
        reps=args.reps,
        m_candidates=args.candidates,
        lambda_rule=args.lambda_rule,
        base_seed=args.seed,
        baselines=args.baselines,
        output_dir=args.out,
    )
    if consistency and not args.plant_true:
        consistency = False
    runner = run_weight_consistency if consistency else run_simulation
    records = runner(cfg, n_jobs=args.jobs)
    failures = sum(1 for r in records if r.error)
    print(f"wrote {args.out}/results.csv ({len(records) - failures} rows, {failures} failures)")
    return 0


def _cmd_fit(args) -> int:
    x, names = load_csv(args.data)
    if args.standardize:
        x = standardize(x)
    est = DagModelAverager(
        n_candidates=args.candidates,
        lambda_rule=args.lambda_rule,
        random_state=args.seed,
    )
    est.fit(x)
    summary = degree_summary(est.coef_)
    n_edges = int(np.count_nonzero(est.coef_))
    print(f"n={x.shape[0]} p={x.shape[1]}")
    print(f"lambda={est.lambda_!r}")
    print(f"sigma2={est.sigma2_!r}")
    print(f"edges={n_edges}")
    print(f"average_degree={summary.average_degree!r}")
    if args.out_dot is not None:
        export_dot(est.coef_, names, args.out_dot)
        print(f"wrote {args.out_dot}")
    if args.out_weights is not None:
        write_weights_csv(args.out_weights, est.candidates_, est.weights_)
        print(f"wrote {args.out_weights}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "version":
            print(__version__)
            return 0
        if args.command == "simulate":
            return _cmd_sweep(args, consistency=False)
        if args.command == "consistency":
            return _cmd_sweep(args, consistency=True)
        return _cmd_fit(args)
    except DataError as exc:
        print(f"dagavg: data error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"dagavg: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"dagavg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
