"""``minmaxgap`` command line: rate tables, extremal sweeps and hard instances."""
from __future__ import annotations

import argparse
import sys

from .bench import ExperimentConfig, emit_report, run_experiment
from .solvers import BASELINES


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _flatten(groups):
    return tuple(t for g in groups for t in g)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (stdout if omitted)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="minmaxgap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates-scsc", parents=[common], help="slingshot rate vs symmetric floor")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--T-list", type=_int_list, nargs="+", required=True)

    p = sub.add_parser("rates-cc", parents=[common], help="L/(T+1) vs the Q-class minimax value")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--T-list", type=_int_list, nargs="+", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--resolution", type=int, default=4000)

    p = sub.add_parser("extremal", parents=[common], help="minimax polynomial certificates")
    p.add_argument("--set", dest="set_kind", choices=("halfdisc", "intervals"), required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--class", dest="normalization", choices=("P", "Q"), default="P")
    p.add_argument("--T-list", type=_int_list, nargs="+", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--resolution", type=int, default=4000)

    p = sub.add_parser("hard-instance", parents=[common],
                       help="baselines on the instance built from the dual measure")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--methods", nargs="+", choices=BASELINES, default=list(BASELINES))
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--resolution", type=int, default=4000)

    sub.add_parser("conformal-validate", parents=[common], help="exterior map self-checks")
    return parser


def config_from_args(args) -> ExperimentConfig:
    base = {"seed": args.seed, "out": args.out, "format": args.format}
    opt = {k: getattr(args, k) for k in ("tol", "resolution", "eps") if hasattr(args, k)}
    if args.command == "rates-scsc":
        return ExperimentConfig("rates_scsc", kappa=args.kappa,
                                T_list=_flatten(args.T_list), **base)
    if args.command == "rates-cc":
        return ExperimentConfig("rates_cc", L=args.L, T_list=_flatten(args.T_list), **opt, **base)
    if args.command == "extremal":
        return ExperimentConfig("extremal_sweep", mu=args.mu, L=args.L, set_kind=args.set_kind,
                                normalization=args.normalization,
                                T_list=_flatten(args.T_list), **opt, **base)
    if args.command == "hard-instance":
        return ExperimentConfig("hard_instance_run", kappa=args.kappa, T_list=(args.T,),
                                methods=tuple(args.methods), **opt, **base)
    return ExperimentConfig("conformal_validate", **base)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        rows = run_experiment(config)
        text = emit_report(rows, config.format, config.out)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.out is None:
        sys.stdout.write(text)
    return 2 if any(row.get("flagged") for row in rows) else 0


if __name__ == "__main__":
    sys.exit(main())
