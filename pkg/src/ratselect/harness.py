"""Campaign driver: epoch loop, trace files, interval statistics, exports.

Every epoch one fresh QoS state is sampled and all five selectors (the
learning agent plus the four static baselines) choose a network on that
identical state; the brute-force reward maximizer is recorded alongside as
ground truth. Runs are fully deterministic for a given config.

Trace file contract (one JSON object per line, keys in exactly this order):

    epoch, metrics, dqn, ahp, saw, wpm, topsis, oracle, dqn_reward, epsilon

``metrics`` is the flat list of the 24 raw values in network-major order
(5G, 4G, WiFi, LEO) with (bandwidth, latency, jitter, packet loss, load,
cost) inside each block. Selections are network labels. ``epsilon`` is the
exploration rate used for that epoch's selection, before its decay. Records
are appended and flushed one line at a time, so a partial trace from an
aborted run stays parseable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .agent import DqnNetworkSelector
from .config import ExperimentConfig
from .madm import AhpRanker, SawRanker, TopsisRanker, WpmRanker
from .networks import EnvState, RatId, sample_state
from .reward import oracle_best

#: Selection methods in trace/report column order.
METHODS = ("dqn", "ahp", "saw", "wpm", "topsis")

TRACE_FIELDS = ("epoch", "metrics", *METHODS, "oracle", "dqn_reward", "epsilon")


@dataclass(frozen=True)
class EpochRecord:
    """One trace line: the sampled state, every method's choice, the agent's
    reward and the exploration rate in force."""

    epoch: int
    metrics: np.ndarray
    selections: dict  # method name -> RatId, keys in METHODS order
    oracle: RatId
    dqn_reward: float
    epsilon: float

    def to_json_line(self) -> str:
        obj = {"epoch": self.epoch, "metrics": [float(v) for v in self.metrics]}
        for method in METHODS:
            obj[method] = self.selections[method].label
        obj["oracle"] = self.oracle.label
        obj["dqn_reward"] = float(self.dqn_reward)
        obj["epsilon"] = float(self.epsilon)
        return json.dumps(obj)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EpochRecord":
        return cls(
            epoch=int(obj["epoch"]),
            metrics=np.asarray(obj["metrics"], dtype=float),
            selections={m: RatId.from_label(obj[m]) for m in METHODS},
            oracle=RatId.from_label(obj["oracle"]),
            dqn_reward=float(obj["dqn_reward"]),
            epsilon=float(obj["epsilon"]),
        )


def run_experiment(cfg: ExperimentConfig, trace_path=None) -> list[EpochRecord]:
    """Run the full campaign and return its records.

    When ``trace_path`` (or ``cfg.trace_path``) is set, records are appended
    to that file as they are produced and the partial trace is flushed even
    if writing later fails.
    """
    env_rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    agent = DqnNetworkSelector(
        epsilon_start=cfg.agent.epsilon_start,
        epsilon_min=cfg.agent.epsilon_min,
        epsilon_decay=cfg.agent.epsilon_decay,
        gamma=cfg.agent.gamma,
        learning_rate=cfg.agent.learning_rate,
        batch_size=cfg.agent.batch_size,
        memory_capacity=cfg.agent.memory_capacity,
        target_sync_every=cfg.agent.target_sync_every,
        hidden_sizes=cfg.agent.hidden_sizes,
        seed=cfg.agent_seed(),
    )
    rankers = {
        "ahp": AhpRanker(pairwise=cfg.madm.ahp_pairwise).fit(),
        "saw": SawRanker(weights=cfg.madm.weights).fit(),
        "wpm": WpmRanker(weights=cfg.madm.weights).fit(),
        "topsis": TopsisRanker(weights=cfg.madm.weights).fit(),
    }

    path = trace_path if trace_path is not None else cfg.trace_path
    records: list[EpochRecord] = []
    writer = open(path, "w", encoding="utf-8") if path else None
    try:
        for epoch in range(1, cfg.epochs + 1):
            state = sample_state(cfg.ranges, env_rng)
            record = _run_epoch(epoch, state, agent, rankers)
            records.append(record)
            if writer is not None:
                writer.write(record.to_json_line() + "\n")
                writer.flush()
    finally:
        if writer is not None:
            writer.close()
    return records


def _run_epoch(epoch: int, state: EnvState, agent: DqnNetworkSelector, rankers) -> EpochRecord:
    matrix = state.matrix()
    outcome = agent.step_episode(state)
    selections = {"dqn": outcome.action}
    for name, ranker in rankers.items():
        selections[name] = RatId.from_index(ranker.select(matrix))
    selections = {m: selections[m] for m in METHODS}
    return EpochRecord(
        epoch=epoch,
        metrics=state.raw,
        selections=selections,
        oracle=oracle_best(state),
        dqn_reward=outcome.reward,
        epsilon=outcome.epsilon,
    )


def iter_trace(path):
    """Yield EpochRecords from a trace file, one per line."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield EpochRecord.from_json_obj(json.loads(line))


def read_trace(path) -> list[EpochRecord]:
    return list(iter_trace(path))


@dataclass(frozen=True)
class IntervalSummary:
    """Per-interval selection statistics.

    ``five_g_pct`` holds each method's percentage of epochs selecting 5G
    (plus the oracle's own rate); ``oracle_agreement_pct`` holds each
    method's percentage of epochs matching the oracle's choice.
    """

    interval: str
    start: int
    end: int
    five_g_pct: dict
    oracle_agreement_pct: dict

    def to_json_obj(self) -> dict:
        return {
            "interval": self.interval,
            "start": self.start,
            "end": self.end,
            "five_g_pct": dict(self.five_g_pct),
            "oracle_agreement_pct": dict(self.oracle_agreement_pct),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "IntervalSummary":
        return cls(
            interval=obj["interval"],
            start=int(obj["start"]),
            end=int(obj["end"]),
            five_g_pct={k: float(v) for k, v in obj["five_g_pct"].items()},
            oracle_agreement_pct={k: float(v) for k, v in obj["oracle_agreement_pct"].items()},
        )


def _window_bounds(n_epochs: int, interval_width: int) -> list[tuple[int, int]]:
    bounds = []
    start = 1
    while start <= n_epochs:
        bounds.append((start, min(start + interval_width - 1, n_epochs)))
        start += interval_width
    # Mirror the reference reporting layout: a 2000-epoch run at width 500
    # also gets a final-100 tail row before the all-epochs row.
    if n_epochs == 2000 and interval_width == 500:
        bounds.append((1901, 2000))
    if bounds != [(1, n_epochs)]:  # skip a duplicate when one window covers everything
        bounds.append((1, n_epochs))
    return bounds


def _summarize_window(records, start: int, end: int) -> IntervalSummary:
    window = [r for r in records if start <= r.epoch <= end]
    n = len(window)
    five_g = {}
    agreement = {}
    for method in METHODS:
        five_g[method] = 100.0 * sum(r.selections[method] is RatId.FIVE_G for r in window) / n
        agreement[method] = 100.0 * sum(r.selections[method] is r.oracle for r in window) / n
    five_g["oracle"] = 100.0 * sum(r.oracle is RatId.FIVE_G for r in window) / n
    return IntervalSummary(f"{start}-{end}", start, end, five_g, agreement)


def summarize(records, interval_width: int = 500) -> list[IntervalSummary]:
    """Partition a trace into consecutive intervals and compute, per method,
    the 5G-selection and oracle-agreement percentages; ends with an
    all-epochs row. Percentages come from exact epoch counts.
    """
    records = list(records)
    if not records:
        raise ValueError("cannot summarize an empty trace")
    if interval_width < 1:
        raise ValueError(f"interval_width must be >= 1, got {interval_width}")
    n_epochs = max(r.epoch for r in records)
    return [_summarize_window(records, s, e) for s, e in _window_bounds(n_epochs, interval_width)]


def oracle_check(records, interval_width: int = 500) -> dict:
    """Per-interval oracle agreement for every method.

    The headline figure is the agent's agreement over the final regular
    interval (the last full partition window, not the all-epochs row).
    """
    summaries = summarize(records, interval_width)
    n_epochs = max(r.epoch for r in records)
    last_start = ((n_epochs - 1) // interval_width) * interval_width + 1
    final_regular = next(s for s in summaries if s.start == last_start and s.end == n_epochs)
    return {
        "intervals": [
            {"interval": s.interval, "oracle_agreement_pct": dict(s.oracle_agreement_pct)}
            for s in summaries
        ],
        "headline": {
            "interval": final_regular.interval,
            "dqn_agreement_pct": final_regular.oracle_agreement_pct["dqn"],
        },
    }


CSV_HEADER = ("interval", *METHODS)


def export(summaries, format: str, path) -> None:
    """Write interval summaries to ``path``.

    ``csv`` writes the 5G-selection matrix with the documented column order
    (interval, dqn, ahp, saw, wpm, topsis); ``jsonl`` writes one full summary
    object per line. Both round-trip through :func:`read_summaries`.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_summaries(summaries, format))
    except OSError as exc:
        raise OSError(f"cannot write summary to {path}: {exc}") from exc


def render_summaries(summaries, format: str) -> str:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for s in summaries:
            writer.writerow([s.interval] + [repr(s.five_g_pct[m]) for m in METHODS])
        return buf.getvalue()
    if format == "jsonl":
        return "".join(json.dumps(s.to_json_obj()) + "\n" for s in summaries)
    raise ValueError(f"unknown export format: {format!r} (expected 'csv' or 'jsonl')")


def read_summaries(path, format: str):
    """Parse a file written by :func:`export`.

    ``jsonl`` returns the original IntervalSummary objects; ``csv`` returns
    one dict per row keyed by the documented header.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if format == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {rows[0] if rows else 'empty file'}")
        return [
            {"interval": row[0], **{m: float(v) for m, v in zip(METHODS, row[1:])}}
            for row in rows[1:]
        ]
    if format == "jsonl":
        return [
            IntervalSummary.from_json_obj(json.loads(line))
            for line in text.splitlines()
            if line.strip()
        ]
    raise ValueError(f"unknown export format: {format!r} (expected 'csv' or 'jsonl')")
