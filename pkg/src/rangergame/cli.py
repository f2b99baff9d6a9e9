"""Command-line entry point.

Agent specs use the syntax `kind[:key=value,...]`, e.g. `pfa:M=10,s=1`,
`mwu:eta=0.2`, `fp`, `ne`, `pm`, `um`, `level0-uniform`, `level0-sticky`,
`level1`, `level2`. Distributions are comma-separated probabilities. A JSON
config file can supply any of distribution/rounds/poacher/ranger/seed/
repetitions; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, logio, service
from .agents import AgentSpec
from .equilibrium import maximin_oracle, solve_stage_ne
from .game import POACHER, RANGER, RhinoDistribution, warn_if_unprofitable
from .harness import (GameConfig, run_batch, run_game, running_frequencies,
                      significance_sweep)


def _parse_dist(text: str) -> RhinoDistribution:
    try:
        return RhinoDistribution(tuple(float(x) for x in text.split(",")))
    except ValueError as exc:
        raise ValueError(f"bad distribution {text!r}: {exc}") from exc


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _build_config(args, defaults: dict) -> GameConfig:
    def pick(flag, key, fallback=None):
        return flag if flag is not None else defaults.get(key, fallback)

    dist = args.dist if args.dist is not None else defaults.get("distribution")
    if dist is None:
        raise ValueError("a distribution is required (--dist or config file)")
    if not isinstance(dist, RhinoDistribution):
        dist = RhinoDistribution(tuple(dist))
    poacher = pick(args.poacher, "poacher")
    ranger = pick(args.ranger, "ranger")
    if poacher is None or ranger is None:
        raise ValueError("both --poacher and --ranger are required")
    if isinstance(poacher, str):
        poacher = AgentSpec.parse(poacher)
    elif isinstance(poacher, dict):
        poacher = AgentSpec.from_dict(poacher)
    if isinstance(ranger, str):
        ranger = AgentSpec.parse(ranger)
    elif isinstance(ranger, dict):
        ranger = AgentSpec.from_dict(ranger)
    config = GameConfig(
        distribution=dist,
        rounds=int(pick(args.rounds, "rounds", 100)),
        poacher=poacher,
        ranger=ranger,
        seed=int(pick(args.seed, "seed", 0)),
    )
    warn_if_unprofitable(dist, solve_stage_ne(dist).value)
    return config


def cmd_ne(args) -> int:
    d = _parse_dist(args.dist)
    result = maximin_oracle(d) if args.oracle else solve_stage_ne(d)
    warn_if_unprofitable(d, result.value)
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def cmd_run(args) -> int:
    config = _build_config(args, _load_config_file(args.config))
    log = run_game(config, record_estimates=args.trace_estimates)
    out = Path(args.out)
    logio.write_game_log(log, out)
    if args.trace:
        trace = running_frequencies(log, args.player, args.window)
        logio.write_trace_csv(trace, args.trace,
                              {"config": config.to_dict(), "player": args.player,
                               "window": args.window})
    print(f"wrote {log.rounds} rounds to {out} "
          f"(avg poacher utility {log.average_utility(POACHER):+.4f})")
    return 0


def cmd_batch(args) -> int:
    defaults = _load_config_file(args.config)
    config = _build_config(args, defaults)
    reps = args.reps if args.reps is not None else int(defaults.get("repetitions", 100))
    stats = run_batch(config, reps, workers=args.workers)
    logio.write_batch_csv(stats, args.out, {"config": config.to_dict(), "reps": reps})
    print(f"wrote {reps} repetitions to {args.out} "
          f"(mean {stats.mean:+.4f}, median {stats.median:+.4f}, "
          f"IQR [{stats.q1:+.4f}, {stats.q3:+.4f}])")
    return 0


def cmd_sweep(args) -> int:
    s_values = [int(x) for x in args.s.split(",")]
    rows = []
    for dist_text in args.dist:
        d = _parse_dist(dist_text)
        cells = significance_sweep(
            d, s_values, M=args.M, rounds=args.rounds, repetitions=args.reps,
            base_seed=args.seed,
            significance="both" if args.both_significance else "poacher",
            workers=args.workers,
        )
        rows.append((d.probs, cells))
        print(f"{dist_text}: " + " ".join(f"s={s}:{mean:+.4f}" for s, mean in cells))
    logio.write_sweep_csv(rows, args.out, {
        "M": args.M, "rounds": args.rounds, "reps": args.reps, "seed": args.seed,
        "significance": "both" if args.both_significance else "poacher",
    })
    print(f"wrote sweep table to {args.out}")
    return 0


def cmd_analyze(args) -> int:
    paths: list[Path] = []
    for item in args.logs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.jsonl")))
        else:
            paths.append(p)
    if not paths:
        raise ValueError("no log files found")
    logs = [logio.read_game_log(p) for p in paths]
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)

    table = analysis.stickiness(logs, args.player)
    sticky_path = prefix.with_name(prefix.name + "_stickiness.csv")
    logio.write_stickiness_csv(table, args.player, sticky_path,
                               {"logs": len(logs), "player": args.player})
    shown = {u: f"{p:.4f}" for u, p in sorted(table.probs.items())}
    print(f"stickiness by utility ({args.player}, {len(logs)} logs): {shown} "
          f"-> {sticky_path}")

    if args.cluster:
        d = logs[0].distribution
        for log in logs[1:]:
            if log.distribution.probs != d.probs:
                raise ValueError("clustering needs logs that share one distribution")
        vectors = [analysis.last25_frequency(log, args.player) for log in logs]
        assignments = analysis.cluster_levels(vectors, d, k=args.k)
        cluster_path = prefix.with_name(prefix.name + "_clusters.csv")
        logio.write_clusters_csv(assignments, cluster_path,
                                 {"logs": len(logs), "k": args.k,
                                  "distribution": list(d.probs)})
        counts: dict[str, int] = {}
        for a in assignments:
            counts[a.label] = counts.get(a.label, 0) + 1
        print(f"level labels: {counts} -> {cluster_path}")
    return 0


def cmd_serve(args) -> int:
    service.serve(host=args.host, port=args.port, storage_dir=args.storage,
                  ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rangergame",
        description="Ranger-poacher game lab: equilibria, simulations, analytics, play.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ne", help="print the unique stage-game equilibrium as JSON")
    p.add_argument("--dist", required=True, help="comma-separated rhino probabilities")
    p.add_argument("--oracle", action="store_true",
                   help="solve by linear programming instead of the closed form")
    p.set_defaults(func=cmd_ne)

    def common(p, seed_default=None):
        p.add_argument("--dist", type=_parse_dist, help="comma-separated rhino probabilities")
        p.add_argument("--rounds", type=int, help="horizon K")
        p.add_argument("--poacher", help="poacher agent spec, e.g. pfa:M=10,s=1")
        p.add_argument("--ranger", help="ranger agent spec, e.g. fp")
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--config", help="JSON config file supplying defaults")

    p = sub.add_parser("run", help="run one game, write a JSONL log")
    common(p)
    p.add_argument("--out", required=True, help="output JSONL path")
    p.add_argument("--trace-estimates", action="store_true",
                   help="record the poacher's opponent estimate every round")
    p.add_argument("--trace", help="also write a running-frequency CSV here")
    p.add_argument("--player", choices=[POACHER, RANGER], default=POACHER,
                   help="player for the --trace export")
    p.add_argument("--window", type=int, help="trailing window for --trace")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("batch", help="run repeated games, write boxplot stats CSV")
    common(p)
    p.add_argument("--reps", type=int, help="number of repetitions")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("sweep", help="significance sweep, one CSV row per distribution")
    p.add_argument("--dist", action="append", required=True,
                   help="comma-separated probabilities (repeatable)")
    p.add_argument("--s", default="0,1,2,3,4", help="comma-separated s values")
    p.add_argument("--M", type=int, default=1000, help="memory capacity for both agents")
    p.add_argument("--rounds", type=int, default=1000)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--both-significance", action="store_true",
                   help="apply s to the ranger as well as the poacher")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", help="stickiness (and optional level clustering) from logs")
    p.add_argument("--logs", nargs="+", required=True,
                   help="JSONL log files or directories of them")
    p.add_argument("--player", choices=[POACHER, RANGER], default=POACHER)
    p.add_argument("--cluster", action="store_true",
                   help="also k-means-cluster last-25-round frequencies")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--out-prefix", required=True,
                   help="prefix for the generated CSV files")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("serve", help="run the interactive session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--storage", help="directory for per-session JSONL logs")
    p.add_argument("--ui", help="directory of built web-ui files to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
