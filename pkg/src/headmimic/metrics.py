"""Imitation fidelity analysis over a session log.

Builds aligned human-command vs robot-sensed angle series for each joint,
scores them with the coefficient of determination (human trajectory as
reference), summarizes the per-frame differences as a histogram, and counts
blink attempts against imitated blinks. Everything is a pure function of
the log file so reports are reproducible byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path


class DegenerateSeries(ValueError):
    """Reference series has zero variance; the score is undefined."""


class LogParseError(ValueError):
    """Session log is empty or malformed; .line is the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, slots=True)
class AngleSeries:
    """Aligned (t_ms, human_deg, robot_deg) samples for one joint."""

    t_ms: tuple[float, ...]
    human_deg: tuple[float, ...]
    robot_deg: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.t_ms) == len(self.human_deg) == len(self.robot_deg)):
            raise ValueError("series columns must have equal length")
        for a, b in zip(self.t_ms, self.t_ms[1:]):
            if b <= a:
                raise ValueError(f"timestamps must strictly increase ({a} then {b})")

    def __len__(self) -> int:
        return len(self.t_ms)

    def diffs(self) -> list[float]:
        return [r - h for h, r in zip(self.human_deg, self.robot_deg)]


def r_squared(series: AngleSeries) -> float:
    """Coefficient of determination of the robot track against the human track.

    1 - SS_res/SS_tot with SS_tot about the human mean. Raises
    DegenerateSeries when the human series is constant.
    """
    n = len(series)
    if n < 2:
        raise ValueError("need at least 2 samples")
    mean_h = sum(series.human_deg) / n
    ss_tot = sum((h - mean_h) ** 2 for h in series.human_deg)
    if ss_tot == 0.0:
        raise DegenerateSeries("human series is constant; r-squared undefined")
    ss_res = sum((r - h) ** 2 for h, r in zip(series.human_deg, series.robot_deg))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True, slots=True)
class DifferenceStats:
    mean_deg: float
    min_deg: float
    max_deg: float
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]


def difference_stats(series: AngleSeries, bin_width_deg: float = 1.0) -> DifferenceStats:
    """Histogram and summary of per-frame (robot - human) differences.

    Bins are half-open [edge_k, edge_k+1), starting at floor(min diff) and
    extended until the largest diff falls inside the final bin, so every
    sample lands in exactly one bin.
    """
    if len(series) == 0:
        raise ValueError("series is empty")
    if bin_width_deg <= 0:
        raise ValueError("bin width must be positive")
    diffs = series.diffs()
    lo = min(diffs)
    hi = max(diffs)
    start = math.floor(lo)
    span = math.ceil(hi) - start
    n_bins = max(1, math.ceil(span / bin_width_deg))
    while start + n_bins * bin_width_deg <= hi:
        n_bins += 1
    counts = [0] * n_bins
    for d in diffs:
        idx = int((d - start) / bin_width_deg)
        if idx >= n_bins:
            idx = n_bins - 1
        counts[idx] += 1
    edges = tuple(start + k * bin_width_deg for k in range(n_bins + 1))
    return DifferenceStats(
        mean_deg=sum(diffs) / len(diffs),
        min_deg=lo,
        max_deg=hi,
        bin_edges=edges,
        counts=tuple(counts),
    )


def align_series(human: list[tuple[float, float]],
                 robot: list[tuple[float, float]]) -> AngleSeries:
    """Pair each robot sample with the latest human sample at or before it.

    Robot samples earlier than every human sample are dropped.
    """
    t_col: list[float] = []
    h_col: list[float] = []
    r_col: list[float] = []
    hi = 0
    for t_r, value_r in robot:
        while hi + 1 < len(human) and human[hi + 1][0] <= t_r:
            hi += 1
        if not human or human[hi][0] > t_r:
            continue
        t_col.append(t_r)
        h_col.append(human[hi][1])
        r_col.append(value_r)
    return AngleSeries(tuple(t_col), tuple(h_col), tuple(r_col))


_REQUIRED_LOG_FIELDS = (
    "t_ms", "seq", "yaw_cmd", "pitch_cmd", "yaw_sensed", "pitch_sensed",
    "human_left_closed", "human_right_closed",
    "robot_left_closed", "robot_right_closed",
)


def read_session_log(path: str | Path) -> list[dict]:
    """Parse a JSONL session log, validating per-record fields."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LogParseError(lineno, f"not valid JSON: {exc}") from exc
            if not isinstance(rec, dict):
                raise LogParseError(lineno, "record must be a JSON object")
            for fieldname in _REQUIRED_LOG_FIELDS:
                if fieldname not in rec:
                    raise LogParseError(lineno, f"missing field {fieldname!r}")
            records.append(rec)
    if not records:
        raise LogParseError(1, "session log holds no records")
    return records


def _closed_runs(flags: list[bool]) -> list[int]:
    """Lengths of maximal True runs."""
    runs = []
    run = 0
    for flag in flags:
        if flag:
            run += 1
        elif run:
            runs.append(run)
            run = 0
    if run:
        runs.append(run)
    return runs


def build_report(log_path: str | Path, bin_width_deg: float = 1.0,
                 min_blink_frames: int = 2,
                 csv_dir: str | Path | None = None) -> dict:
    """Full metrics report for a session log; optionally writes plot CSVs.

    The report is a plain dict whose json.dumps(sort_keys=True) encoding is
    stable for a given log file.
    """
    records = read_session_log(log_path)

    report: dict = {"frames_analyzed": len(records)}
    for joint, cmd_key, sensed_key in (("yaw", "yaw_cmd", "yaw_sensed"),
                                       ("pitch", "pitch_cmd", "pitch_sensed")):
        human = [(float(r["t_ms"]), float(r[cmd_key])) for r in records]
        robot = [(float(r["t_ms"]), float(r[sensed_key])) for r in records]
        series = align_series(human, robot)
        try:
            score = r_squared(series)
        except DegenerateSeries:
            score = None
        stats = difference_stats(series, bin_width_deg)
        report[joint] = {
            "r_squared": score,
            "mean_diff_deg": stats.mean_deg,
            "min_diff_deg": stats.min_deg,
            "max_diff_deg": stats.max_deg,
            "histogram": {
                "bin_edges": list(stats.bin_edges),
                "counts": list(stats.counts),
            },
        }
        if csv_dir is not None:
            _write_series_csv(Path(csv_dir) / f"{joint}.csv", series)

    human_closed = [bool(r["human_left_closed"]) or bool(r["human_right_closed"])
                    for r in records]
    robot_closed = [bool(r["robot_left_closed"]) or bool(r["robot_right_closed"])
                    for r in records]
    human_runs = _closed_runs(human_closed)
    robot_runs = _closed_runs(robot_closed)
    report["blink"] = {
        "attempts": sum(1 for n in human_runs if n >= min_blink_frames),
        "imitated": len(robot_runs),
        "noise_runs": sum(1 for n in human_runs if n < min_blink_frames),
    }
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _write_series_csv(path: Path, series: AngleSeries) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t_ms", "human_deg", "robot_deg", "diff_deg"])
    for t, h, r in zip(series.t_ms, series.human_deg, series.robot_deg):
        writer.writerow([repr(t), repr(h), repr(r), repr(r - h)])
    path.write_text(buf.getvalue(), encoding="utf-8")
