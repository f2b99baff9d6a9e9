"""File formats: game logs as JSONL, tables as CSV.

A game log file starts with one metadata line (type "meta", schema
"gamelog.v1", the full config including the seed) followed by one record per
round: {"round", "poacher_site", "ranger_site", "rhino_present", "u_p",
"u_r"}. Sites are 0-indexed. CSV exports carry their provenance (seed,
config) in leading `#`-comment lines above the header row.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .game import RhinoDistribution, RoundOutcome
from .harness import BatchStats, GameLog

SCHEMA = "gamelog.v1"


def meta_record(config_dict: dict, digest: str, extra: dict | None = None) -> dict:
    rec = {"type": "meta", "schema": SCHEMA, "config_digest": digest}
    rec.update(config_dict)
    if extra:
        rec.update(extra)
    return rec


def round_record(index: int, outcome: RoundOutcome,
                 estimate: tuple[float, ...] | None = None) -> dict:
    rec = {
        "round": index,
        "poacher_site": outcome.poacher_site,
        "ranger_site": outcome.ranger_site,
        "rhino_present": list(outcome.rhino_present),
        "u_p": outcome.poacher_utility,
        "u_r": outcome.ranger_utility,
    }
    if estimate is not None:
        rec["poacher_estimate"] = [round(x, 9) for x in estimate]
    return rec


def record_to_outcome(rec: dict) -> RoundOutcome:
    return RoundOutcome(
        poacher_site=int(rec["poacher_site"]),
        ranger_site=int(rec["ranger_site"]),
        rhino_present=tuple(bool(b) for b in rec["rhino_present"]),
        poacher_utility=int(rec["u_p"]),
        ranger_utility=int(rec["u_r"]),
    )


def write_game_log(log: GameLog, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        f.write(json.dumps(meta_record(log.config.to_dict(), log.config.digest())) + "\n")
        for t, outcome in enumerate(log.outcomes):
            est = log.poacher_estimates[t] if log.poacher_estimates else None
            f.write(json.dumps(round_record(t, outcome, est)) + "\n")


@dataclass
class LoadedLog:
    """A game log read back from JSONL; duck-compatible with GameLog for the
    analysis functions (outcomes + distribution + rounds)."""

    meta: dict
    outcomes: list[RoundOutcome]

    @property
    def distribution(self) -> RhinoDistribution:
        return RhinoDistribution(tuple(self.meta["distribution"]))

    @property
    def rounds(self) -> int:
        return len(self.outcomes)


def read_game_log(path: str | Path) -> LoadedLog:
    path = Path(path)
    meta: dict = {}
    outcomes: list[RoundOutcome] = []
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("type") == "meta":
                meta = rec
            else:
                outcomes.append(record_to_outcome(rec))
    if not outcomes:
        raise ValueError(f"no round records in {path}")
    if "distribution" not in meta:
        raise ValueError(f"missing meta line in {path}")
    return LoadedLog(meta, outcomes)


def _comment_lines(f, meta: dict) -> None:
    for key, value in meta.items():
        f.write(f"# {key}={json.dumps(value)}\n")


def write_batch_csv(stats: BatchStats, path: str | Path, meta: dict) -> None:
    path = Path(path)
    summary = {
        "mean": stats.mean, "median": stats.median, "q1": stats.q1, "q3": stats.q3,
        "whisker_low": stats.whisker_low, "whisker_high": stats.whisker_high,
        "min": stats.min, "max": stats.max,
        "poacher_frequencies": list(stats.poacher_frequencies),
        "ranger_frequencies": list(stats.ranger_frequencies),
    }
    if stats.poacher_last25 is not None:
        summary["poacher_last25"] = list(stats.poacher_last25)
        summary["ranger_last25"] = list(stats.ranger_last25)
    with path.open("w", encoding="utf-8", newline="") as f:
        _comment_lines(f, {**meta, **summary})
        writer = csv.writer(f)
        writer.writerow(["rep", "avg_poacher_utility"])
        for k, u in enumerate(stats.rep_utilities):
            writer.writerow([k, f"{u:.6f}"])


def write_sweep_csv(rows: list[tuple[tuple[float, ...], list[tuple[int, float]]]],
                    path: str | Path, meta: dict) -> None:
    """One CSV row per distribution, one column per significance weight."""
    path = Path(path)
    s_values = [s for s, _ in rows[0][1]]
    with path.open("w", encoding="utf-8", newline="") as f:
        _comment_lines(f, meta)
        writer = csv.writer(f)
        writer.writerow(["distribution"] + [f"s={s}" for s in s_values])
        for dist, cells in rows:
            writer.writerow(["(" + ",".join(f"{x:g}" for x in dist) + ")"]
                            + [f"{mean:.6f}" for _, mean in cells])


def write_trace_csv(trace, path: str | Path, meta: dict) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        _comment_lines(f, meta)
        writer = csv.writer(f)
        n = trace.shape[1]
        writer.writerow(["round"] + [f"freq_site_{i}" for i in range(n)])
        for t, row in enumerate(trace):
            writer.writerow([t] + [f"{x:.6f}" for x in row])


def write_stickiness_csv(table, player: str, path: str | Path, meta: dict) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        _comment_lines(f, meta)
        writer = csv.writer(f)
        writer.writerow(["player", "utility", "p_stick", "n_pairs"])
        for u in (-1, 0, 1):
            if u in table.probs:
                writer.writerow([player, u, f"{table.probs[u]:.6f}", table.pair_counts[u]])
            else:
                writer.writerow([player, u, "absent", 0])


def write_clusters_csv(assignments, path: str | Path, meta: dict) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        _comment_lines(f, meta)
        writer = csv.writer(f)
        n = len(assignments[0].frequencies) if assignments else 0
        writer.writerow(["index", "cluster_id", "label"] + [f"freq_site_{i}" for i in range(n)])
        for idx, a in enumerate(assignments):
            writer.writerow([idx, a.cluster_id, a.label]
                            + [f"{x:.6f}" for x in a.frequencies])
