"""Command-line front end.

Subcommands:

- ``run``: execute a campaign from a config file and write its trace.
- ``summarize``: turn a trace into interval statistics (csv or jsonl).
- ``oracle-check``: report per-interval agreement with the reward oracle.
- ``compare``: print the interval x method 5G-selection matrix.

Exit code 0 on success; any failure prints a one-line diagnostic to stderr
and exits nonzero.
"""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, load_config
from .errors import ConfigurationError
from .harness import (
    METHODS,
    export,
    oracle_check,
    read_trace,
    render_summaries,
    run_experiment,
    summarize,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratselect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a selection campaign")
    p_run.add_argument("--config", required=True, help="experiment config file (JSON)")
    p_run.add_argument("--epochs", type=int, help="override the configured epoch count")
    p_run.add_argument("--seed", type=int, help="override the configured seed")
    p_run.add_argument("--trace", help="override the configured trace output path")

    p_sum = sub.add_parser("summarize", help="interval statistics from a trace")
    p_sum.add_argument("--trace", required=True)
    p_sum.add_argument("--interval", type=int, default=500)
    p_sum.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p_sum.add_argument("--out", help="output file (defaults to stdout)")

    p_oracle = sub.add_parser("oracle-check", help="agreement with the reward oracle")
    p_oracle.add_argument("--trace", required=True)
    p_oracle.add_argument("--interval", type=int, default=500)

    p_cmp = sub.add_parser("compare", help="print the 5G-selection matrix per method")
    p_cmp.add_argument("--trace", required=True)
    p_cmp.add_argument("--interval", type=int, default=500)

    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        data = cfg.to_dict()
        data.update(overrides)
        cfg = ExperimentConfig.from_dict(data)
    trace_path = args.trace if args.trace is not None else cfg.trace_path
    if not trace_path:
        raise ConfigurationError("no trace path: set trace_path in the config or pass --trace")

    records = run_experiment(cfg, trace_path=trace_path)
    summaries = summarize(records, cfg.interval_width)
    if cfg.summary_path:
        fmt = "jsonl" if str(cfg.summary_path).endswith(".jsonl") else "csv"
        export(summaries, fmt, cfg.summary_path)
    final = summaries[-1]
    print(
        f"ran {cfg.epochs} epochs (seed {cfg.seed}); trace: {trace_path}; "
        f"dqn 5G selection {final.five_g_pct['dqn']:.2f}%, "
        f"oracle agreement {final.oracle_agreement_pct['dqn']:.2f}% over all epochs"
    )
    return 0


def _cmd_summarize(args) -> int:
    summaries = summarize(read_trace(args.trace), args.interval)
    if args.out:
        export(summaries, args.format, args.out)
        print(f"wrote {len(summaries)} interval rows to {args.out}")
    else:
        sys.stdout.write(render_summaries(summaries, args.format))
    return 0


def _cmd_oracle_check(args) -> int:
    report = oracle_check(read_trace(args.trace), args.interval)
    header = f"{'interval':>12} " + " ".join(f"{m:>8}" for m in METHODS)
    print(header)
    for row in report["intervals"]:
        pcts = row["oracle_agreement_pct"]
        print(f"{row['interval']:>12} " + " ".join(f"{pcts[m]:8.2f}" for m in METHODS))
    head = report["headline"]
    print(f"dqn agreement over epochs {head['interval']}: {head['dqn_agreement_pct']:.2f}%")
    return 0


def _cmd_compare(args) -> int:
    summaries = summarize(read_trace(args.trace), args.interval)
    print(f"{'interval':>12} " + " ".join(f"{m:>8}" for m in METHODS))
    for s in summaries:
        print(f"{s.interval:>12} " + " ".join(f"{s.five_g_pct[m]:8.2f}" for m in METHODS))
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "summarize": _cmd_summarize,
    "oracle-check": _cmd_oracle_check,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"ratselect {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
