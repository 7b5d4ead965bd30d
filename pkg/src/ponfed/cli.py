"""Command-line front door: run, compare, and sweep subcommands.

Data files are the only thing written to the output directory; logs go to
standard error so redirected output stays clean. Flag overrides beat config
file values, which beat built-in defaults.
"""
from __future__ import annotations

import argparse
import os
import sys

from .config import config_from_dict, config_to_dict, load_config
from .errors import InvalidConfig, PonFedError, TooManyRequested
from .orchestrator import compare_modes, run_experiment
from .reporting import (
    ExperimentReport,
    summarize,
    write_comparison_json,
    write_csv,
    write_json_summary,
    write_sweep_csv,
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to a JSON config file")
    parser.add_argument(
        "--out",
        default=os.environ.get("PONFED_OUT", "out"),
        help="output directory (default: $PONFED_OUT or ./out)",
    )
    parser.add_argument("--seed", type=int, help="override the experiment seed")
    parser.add_argument("--rounds", type=int, help="override the number of rounds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ponfed",
        description="Simulate federated learning rounds over a shared PON slice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment, write records and summary")
    _add_common(p_run)
    p_run.add_argument("--mode", choices=("classical", "sfl"), help="override the mode")
    p_run.add_argument("--clients", type=int, help="override clients selected per round")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run both modes under one seed")
    _add_common(p_cmp)
    p_cmp.add_argument("--clients", type=int, help="override clients selected per round")
    p_cmp.set_defaults(func=cmd_compare)

    p_swp = sub.add_parser("sweep", help="compare modes across several cohort sizes")
    _add_common(p_swp)
    p_swp.add_argument(
        "--clients",
        type=int,
        nargs="+",
        required=True,
        help="cohort sizes to sweep over",
    )
    p_swp.set_defaults(func=cmd_sweep)
    return parser


def _raw_config(args, clients_override=None) -> dict:
    raw = load_config(args.config)
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.rounds is not None:
        raw["n_rounds"] = args.rounds
    if getattr(args, "mode", None) is not None:
        raw["mode"] = args.mode
    if clients_override is not None:
        raw["n_selected_per_round"] = clients_override
    return raw


def cmd_run(args) -> int:
    clients = getattr(args, "clients", None)
    cfg = config_from_dict(_raw_config(args, clients))
    records = run_experiment(cfg)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "records.csv")
    write_csv(records, csv_path)
    report = ExperimentReport(
        config=config_to_dict(cfg), records=records, records_path="records.csv"
    )
    json_path = os.path.join(args.out, "summary.json")
    write_json_summary(report, json_path)
    print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    cfg = config_from_dict(_raw_config(args, args.clients))
    comparison = compare_modes(cfg)
    os.makedirs(args.out, exist_ok=True)
    paths = {}
    for mode, records in (("classical", comparison.classical), ("sfl", comparison.sfl)):
        paths[mode] = os.path.join(args.out, f"records_{mode}.csv")
        write_csv(records, paths[mode])
    json_path = os.path.join(args.out, "comparison.json")
    write_comparison_json(
        config_to_dict(cfg),
        comparison,
        "records_classical.csv",
        "records_sfl.csv",
        json_path,
    )
    print(
        f"wrote {paths['classical']}, {paths['sfl']} and {json_path}", file=sys.stderr
    )
    return 0


def cmd_sweep(args) -> int:
    raw = _raw_config(args)
    rows = []
    for n in sorted(set(args.clients)):
        cfg = config_from_dict({**raw, "n_selected_per_round": n})
        comparison = compare_modes(cfg)
        for mode, records in (
            ("classical", comparison.classical),
            ("sfl", comparison.sfl),
        ):
            stats = summarize(records)
            rows.append(
                {
                    "n_selected": n,
                    "mode": mode,
                    "mean_upstream_bits": stats["mean_upstream_bits"],
                    "mean_involved": stats["mean_involved"],
                    "final_accuracy": stats["final_accuracy"],
                }
            )
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "sweep.csv")
    write_sweep_csv(rows, csv_path)
    print(f"wrote {csv_path}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidConfig, TooManyRequested) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PonFedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
