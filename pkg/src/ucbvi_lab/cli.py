"""Command line entry point: ``ucbvi-lab {run,bounds,make-env,validate}``."""
from __future__ import annotations

import argparse
import logging
import sys

from .bounds import ratio_report
from .config import ConfigError, load_config
from .environments import random_mdp, riverswim
from .harness import CellError, run_experiment
from .mdp import save_mdp
from .outputs import emit_outputs


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = args.out or cfg.output_dir
    try:
        result = run_experiment(cfg, parallel=args.parallel)
        files = emit_outputs(result, out)
    except (CellError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for agent, s in result.summary.items():
        print(f"{agent:12s} cum_regret@K={s.mean[-1]:.6g}  95% CI [{s.ci_low[-1]:.6g}, {s.ci_high[-1]:.6g}]")
    print(f"wrote {len(files)} files to {out}")
    return 0


def _cmd_bounds(args) -> int:
    T = args.K * args.H
    try:
        report = ratio_report(args.H, args.S, args.A, T, args.delta)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    v = report.values
    print(f"L = {v['L']:.17g}")
    print(f"theorem1 (CH, refined) = {v['theorem1']:.17g}")
    print(f"theorem2 (BF, refined) = {v['theorem2']:.17g}")
    print(f"CH, original constants = {v['ch_original']:.17g}")
    print(f"BF, original constants = {v['bf_original']:.17g}")
    if args.table:
        print()
        print(report.format_table())
    return 0


def _cmd_make_env(args) -> int:
    try:
        if args.kind == "random":
            mdp = random_mdp(args.S, args.A, args.H, args.seed)
        else:
            mdp = riverswim(args.S, args.H)
        save_mdp(mdp, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.kind} MDP (S={mdp.S}, A={mdp.A}, H={mdp.H}) to {args.out}")
    return 0


def _cmd_validate(args) -> int:
    from .validation import diagnostic_counts, run_checks

    results = run_checks()
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    if args.dump_counts:
        print()
        print(diagnostic_counts())
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ucbvi-lab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("bounds", help="evaluate the regret upper bounds")
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--S", type=int, required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--table", action="store_true", help="also print the improvement ratio table")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("make-env", help="write an environment in tabmdp v1 format")
    env_sub = p.add_subparsers(dest="kind", required=True)
    r = env_sub.add_parser("random")
    r.add_argument("--S", type=int, required=True)
    r.add_argument("--A", type=int, required=True)
    r.add_argument("--H", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--out", required=True)
    r = env_sub.add_parser("riverswim")
    r.add_argument("--S", type=int, required=True)
    r.add_argument("--H", type=int, required=True)
    r.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_make_env)

    p = sub.add_parser("validate", help="run the invariant self-checks")
    p.add_argument("--dump-counts", action="store_true")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)
