import json

import numpy as np
import pytest

from ratselect import (
    EpochRecord,
    ExperimentConfig,
    IntervalSummary,
    METHODS,
    RatId,
    export,
    oracle_check,
    read_summaries,
    read_trace,
    run_experiment,
    summarize,
)
from ratselect.harness import CSV_HEADER, TRACE_FIELDS


def small_config(**overrides):
    data = {"epochs": 30, "seed": 5, "interval_width": 10}
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


def synthetic_record(epoch, dqn=RatId.FIVE_G, oracle=RatId.FIVE_G, others=RatId.WIFI):
    return EpochRecord(
        epoch=epoch,
        metrics=np.arange(24, dtype=float),
        selections={"dqn": dqn, "ahp": others, "saw": others, "wpm": others, "topsis": others},
        oracle=oracle,
        dqn_reward=1.5,
        epsilon=0.25,
    )


class TestRunExperiment:
    def test_single_epoch_produces_one_complete_record(self):
        records = run_experiment(small_config(epochs=1))
        assert len(records) == 1
        rec = records[0]
        assert rec.epoch == 1
        assert set(rec.selections) == set(METHODS)
        assert isinstance(rec.oracle, RatId)
        assert rec.metrics.shape == (24,)
        assert rec.epsilon == 1.0

    def test_epochs_are_strictly_increasing(self):
        records = run_experiment(small_config())
        assert [r.epoch for r in records] == list(range(1, 31))

    def test_every_method_sees_the_same_state(self):
        # The recorded metrics are the single sampled state; every recorded
        # pick (oracle and the static baselines) must be recomputable from
        # that state alone.
        from ratselect import AhpRanker, EnvState, SawRanker, TopsisRanker, WpmRanker, oracle_best

        rankers = {
            "ahp": AhpRanker().fit(),
            "saw": SawRanker().fit(),
            "wpm": WpmRanker().fit(),
            "topsis": TopsisRanker().fit(),
        }
        for rec in run_experiment(small_config()):
            state = EnvState.from_raw(rec.metrics)
            assert oracle_best(state) is rec.oracle
            for name, ranker in rankers.items():
                assert ranker.select(state.matrix()) == rec.selections[name].index

    def test_deterministic_trace_files(self, tmp_path):
        cfg = small_config(epochs=60)
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_experiment(cfg, trace_path=p1)
        run_experiment(cfg, trace_path=p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_different_seed_changes_trace(self, tmp_path):
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_experiment(small_config(seed=5), trace_path=p1)
        run_experiment(small_config(seed=6), trace_path=p2)
        assert p1.read_bytes() != p2.read_bytes()

    def test_trace_round_trip(self, tmp_path):
        path = tmp_path / "t.jsonl"
        records = run_experiment(small_config(), trace_path=path)
        loaded = read_trace(path)
        assert len(loaded) == len(records)
        for a, b in zip(records, loaded):
            assert a.epoch == b.epoch
            assert np.array_equal(a.metrics, b.metrics)
            assert a.selections == b.selections
            assert a.oracle is b.oracle
            assert a.dqn_reward == b.dqn_reward
            assert a.epsilon == b.epsilon

    def test_trace_line_field_order_contract(self, tmp_path):
        path = tmp_path / "t.jsonl"
        run_experiment(small_config(epochs=2), trace_path=path)
        for line in path.read_text().splitlines():
            keys = tuple(json.loads(line).keys())
            assert keys == TRACE_FIELDS
        assert TRACE_FIELDS == (
            "epoch", "metrics", "dqn", "ahp", "saw", "wpm", "topsis",
            "oracle", "dqn_reward", "epsilon",
        )

    def test_custom_ranges_are_respected(self):
        cfg = small_config(ranges={"5G": {"bandwidth": [500, 500]}})
        for rec in run_experiment(cfg):
            assert rec.metrics[0] == 500.0


class TestSummarize:
    def test_always_five_g_is_100_percent(self):
        records = [synthetic_record(e) for e in range(1, 9)]
        for s in summarize(records, 4):
            assert s.five_g_pct["dqn"] == 100.0

    def test_half_five_g_is_50_percent(self):
        records = [
            synthetic_record(1), synthetic_record(2, dqn=RatId.WIFI),
            synthetic_record(3), synthetic_record(4, dqn=RatId.LEO),
        ]
        (row,) = [s for s in summarize(records, 4) if s.interval == "1-4"][:1]
        assert row.five_g_pct["dqn"] == 50.0
        assert row.oracle_agreement_pct["dqn"] == 50.0

    def test_interval_partitioning(self):
        records = [synthetic_record(e) for e in range(1, 6)]
        labels = [s.interval for s in summarize(records, 2)]
        assert labels == ["1-2", "3-4", "5-5", "1-5"]

    def test_600_epoch_layout_has_no_tail_row(self):
        records = [synthetic_record(e) for e in range(1, 601)]
        labels = [s.interval for s in summarize(records, 500)]
        assert labels == ["1-500", "501-600", "1-600"]

    def test_2000_epoch_layout_includes_tail_row(self):
        records = [synthetic_record(e) for e in range(1, 2001)]
        labels = [s.interval for s in summarize(records, 500)]
        assert labels == ["1-500", "501-1000", "1001-1500", "1501-2000", "1901-2000", "1-2000"]

    def test_percentages_are_exact_count_ratios(self):
        records = [synthetic_record(e, dqn=RatId.FIVE_G if e <= 3 else RatId.WIFI)
                   for e in range(1, 8)]
        (all_row,) = [s for s in summarize(records, 7) if s.interval == "1-7"]
        assert all_row.five_g_pct["dqn"] == 100.0 * 3 / 7

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError):
            summarize([], 500)

    def test_oracle_rate_included(self):
        records = [synthetic_record(e, oracle=RatId.LEO) for e in range(1, 5)]
        (row,) = [s for s in summarize(records, 4) if s.interval == "1-4"]
        assert row.five_g_pct["oracle"] == 0.0


class TestOracleCheck:
    def test_method_equal_to_oracle_scores_100(self):
        records = [synthetic_record(e, dqn=RatId.LEO, oracle=RatId.LEO) for e in range(1, 21)]
        report = oracle_check(records, 10)
        for row in report["intervals"]:
            assert row["oracle_agreement_pct"]["dqn"] == 100.0

    def test_headline_is_final_regular_interval(self):
        records = [synthetic_record(e) for e in range(1, 26)]
        report = oracle_check(records, 10)
        assert report["headline"]["interval"] == "21-25"
        assert report["headline"]["dqn_agreement_pct"] == 100.0


class TestExport:
    def _summaries(self):
        records = [synthetic_record(e, dqn=RatId.FIVE_G if e % 2 else RatId.WIFI)
                   for e in range(1, 13)]
        return summarize(records, 6)

    def test_csv_header_contract(self, tmp_path):
        path = tmp_path / "s.csv"
        export(self._summaries(), "csv", path)
        header = path.read_text().splitlines()[0]
        assert header == "interval,dqn,ahp,saw,wpm,topsis"
        assert CSV_HEADER == ("interval", "dqn", "ahp", "saw", "wpm", "topsis")

    def test_csv_round_trip(self, tmp_path):
        summaries = self._summaries()
        path = tmp_path / "s.csv"
        export(summaries, "csv", path)
        rows = read_summaries(path, "csv")
        assert len(rows) == len(summaries)
        for row, s in zip(rows, summaries):
            assert row["interval"] == s.interval
            for m in METHODS:
                assert row[m] == s.five_g_pct[m]

    def test_jsonl_round_trip_is_lossless(self, tmp_path):
        summaries = self._summaries()
        path = tmp_path / "s.jsonl"
        export(summaries, "jsonl", path)
        loaded = read_summaries(path, "jsonl")
        assert loaded == summaries
        assert all(isinstance(s, IntervalSummary) for s in loaded)

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            export(self._summaries(), "xml", tmp_path / "s.xml")

    def test_unwritable_path_raises_with_path_in_message(self, tmp_path):
        missing_dir = tmp_path / "no" / "such" / "dir" / "s.csv"
        with pytest.raises(OSError, match="s.csv"):
            export(self._summaries(), "csv", missing_dir)

    def test_one_summary_row_gives_header_plus_one_line(self, tmp_path):
        records = [synthetic_record(1)]
        path = tmp_path / "one.csv"
        export(summarize(records, 500), "csv", path)
        lines = path.read_text().splitlines()
        # A single window covering everything is not duplicated by an
        # all-epochs row.
        assert lines[0] == "interval,dqn,ahp,saw,wpm,topsis"
        assert len(lines) == 2
