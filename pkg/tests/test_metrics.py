import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from headmimic.config import PipelineConfig
from headmimic.metrics import (AngleSeries, DegenerateSeries, LogParseError,
                               align_series, build_report, difference_stats,
                               r_squared, read_session_log, report_to_json)
from headmimic.pipeline import run_replay
from headmimic.synth import synthesize_trace

from oracles import r_squared_by_hand


def series(human, robot, t=None):
    t = t or list(range(len(human)))
    return AngleSeries(tuple(float(x) for x in t),
                       tuple(float(h) for h in human),
                       tuple(float(r) for r in robot))


# --- r_squared -----------------------------------------------------------------

def test_identical_series_scores_one():
    assert r_squared(series([0, 10, 20, 5], [0, 10, 20, 5])) == 1.0


def test_three_point_hand_computation():
    # SS_res = 0 + 100 + 400 = 500; SS_tot about mean 10 = 200 -> 1 - 2.5
    s = series([0, 10, 20], [0, 0, 0])
    assert r_squared(s) == -1.5
    assert r_squared(s) == r_squared_by_hand(s.human_deg, s.robot_deg)


def test_constant_reference_is_degenerate():
    with pytest.raises(DegenerateSeries):
        r_squared(series([5, 5, 5], [1, 2, 3]))


@given(offset=st.floats(min_value=-100, max_value=100))
@settings(max_examples=50, deadline=None)
def test_r_squared_invariant_under_shared_offset(offset):
    human = [0.0, 4.0, -3.0, 8.0, 1.0]
    robot = [0.5, 3.0, -2.0, 9.0, 0.0]
    base = r_squared(series(human, robot))
    shifted = r_squared(series([h + offset for h in human],
                              [r + offset for r in robot]))
    assert shifted == pytest.approx(base, abs=1e-9)


def test_r_squared_one_only_for_identical():
    assert r_squared(series([1, 2, 3], [1, 2, 3.0001])) < 1.0


# --- difference_stats ------------------------------------------------------------

def test_perfect_track_single_zero_bin():
    stats = difference_stats(series([1, 2, 3], [1, 2, 3]))
    assert stats.mean_deg == 0.0
    assert stats.counts == (3,)
    assert stats.bin_edges[0] == 0.0


def test_constant_offset_stats():
    stats = difference_stats(series([10, 11, 12], [8, 9, 10]))
    assert stats.mean_deg == -2.0
    assert stats.min_deg == stats.max_deg == -2.0


def test_histogram_counts_sum_to_frames():
    rng = random.Random(1)
    human = [rng.uniform(-30, 30) for _ in range(250)]
    robot = [h + rng.uniform(-5, 7) for h in human]
    stats = difference_stats(series(human, robot))
    assert sum(stats.counts) == 250


@given(st.lists(st.floats(min_value=-50, max_value=50, allow_nan=False),
                min_size=1, max_size=60),
       st.sampled_from([0.5, 1.0, 2.0]))
@settings(max_examples=150, deadline=None)
def test_every_diff_in_exactly_one_half_open_bin(diffs, width):
    human = [0.0] * len(diffs)
    stats = difference_stats(series(human, diffs), bin_width_deg=width)
    assert sum(stats.counts) == len(diffs)
    edges = stats.bin_edges
    for d in diffs:
        hits = [k for k in range(len(stats.counts))
                if edges[k] <= d < edges[k + 1]
                or (k == len(stats.counts) - 1 and d == edges[k + 1])]
        assert len(hits) >= 1
    assert edges[0] <= min(diffs)
    assert edges[-1] >= max(diffs)


def test_integer_valued_max_lands_in_a_bin():
    stats = difference_stats(series([0, 0], [1, 3]))  # diffs 1.0 and 3.0
    assert sum(stats.counts) == 2


# --- alignment --------------------------------------------------------------------

def test_align_pairs_latest_human_at_or_before():
    human = [(0.0, 1.0), (40.0, 2.0), (80.0, 3.0)]
    robot = [(10.0, 9.0), (40.0, 8.0), (100.0, 7.0)]
    out = align_series(human, robot)
    assert out.t_ms == (10.0, 40.0, 100.0)
    assert out.human_deg == (1.0, 2.0, 3.0)
    assert out.robot_deg == (9.0, 8.0, 7.0)


def test_align_drops_robot_samples_before_first_human():
    out = align_series([(50.0, 1.0)], [(10.0, 9.0), (60.0, 8.0)])
    assert out.t_ms == (60.0,)


def test_series_validation():
    with pytest.raises(ValueError):
        AngleSeries((0.0, 0.0), (1.0, 2.0), (1.0, 2.0))
    with pytest.raises(ValueError):
        AngleSeries((0.0, 1.0), (1.0,), (1.0, 2.0))


# --- build_report -------------------------------------------------------------------

@pytest.fixture(scope="module")
def session_log(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("metrics")
    trace = tmp / "trace.jsonl"
    log = tmp / "session.jsonl"
    synthesize_trace("sinusoid", trace, frames=120)
    run_replay(trace, PipelineConfig(), log)
    return log


def test_report_structure_and_histogram_totals(session_log):
    report = build_report(session_log)
    assert report["frames_analyzed"] == 120
    for joint in ("yaw", "pitch"):
        section = report[joint]
        assert set(section) == {"r_squared", "mean_diff_deg", "min_diff_deg",
                                "max_diff_deg", "histogram"}
        assert sum(section["histogram"]["counts"]) == 120
    assert set(report["blink"]) == {"attempts", "imitated", "noise_runs"}


def test_report_bytes_are_reproducible(session_log, tmp_path):
    a = report_to_json(build_report(session_log, csv_dir=tmp_path / "csv1"))
    b = report_to_json(build_report(session_log, csv_dir=tmp_path / "csv2"))
    assert a == b
    assert (tmp_path / "csv1" / "yaw.csv").read_bytes() == \
        (tmp_path / "csv2" / "yaw.csv").read_bytes()


def test_csv_columns(session_log, tmp_path):
    build_report(session_log, csv_dir=tmp_path)
    lines = (tmp_path / "pitch.csv").read_text().splitlines()
    assert lines[0] == "t_ms,human_deg,robot_deg,diff_deg"
    cols = lines[1].split(",")
    assert len(cols) == 4
    assert float(cols[3]) == pytest.approx(float(cols[2]) - float(cols[1]))


def test_empty_log_raises(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    with pytest.raises(LogParseError):
        build_report(empty)


def test_malformed_line_reports_line_number(tmp_path, session_log):
    bad = tmp_path / "bad.jsonl"
    lines = session_log.read_text().splitlines()
    bad.write_text("\n".join(lines[:3] + ['{"truncated": ']) + "\n")
    with pytest.raises(LogParseError) as err:
        read_session_log(bad)
    assert err.value.line == 4


def test_missing_field_reports_line_number(tmp_path, session_log):
    bad = tmp_path / "missing.jsonl"
    rec = json.loads(session_log.read_text().splitlines()[0])
    del rec["yaw_sensed"]
    bad.write_text(json.dumps(rec) + "\n")
    with pytest.raises(LogParseError, match="yaw_sensed"):
        read_session_log(bad)
