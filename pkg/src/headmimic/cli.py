"""Command-line entry points.

Subcommands: run (live ingest + control loop), replay, analyze, fit-limits,
synth, calibrate, robot-serve. Exit codes: 0 success, 1 usage error, 2 data
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .blink import NonMonotonicSeq
from .config import PipelineConfig
from .emotion import UnknownEmotion
from .geometry import DegenerateLandmarks, NotUnit
from .limits import (FitFailure, InvertedBounds, LimitTable, SvrHyperparams,
                     fit_pitch_limit_model)
from .metrics import LogParseError, build_report, report_to_json
from .pipeline import run_replay
from .robot import ActuatorParams, CommandRejected, RobotHeadSim
from .wire import SchemaError, parse_frame_record

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DATA_ERRORS = (
    SchemaError, LogParseError, DegenerateLandmarks, NotUnit, FitFailure,
    InvertedBounds, UnknownEmotion, NonMonotonicSeq, CommandRejected,
    FileNotFoundError, ValueError, json.JSONDecodeError, OSError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="headmimic",
                     description="Closed-loop head imitation pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="serve the ingest endpoint and run the loop")
    p_run.add_argument("--listen", default=None, help="host:port to bind")
    p_run.add_argument("--robot", default=None,
                       help="'sim' or 'http:<host:port>' robot endpoint")
    p_run.add_argument("--config", default=None, help="pipeline config JSON")
    p_run.add_argument("--log", required=True, help="session log output (JSONL)")

    p_replay = sub.add_parser("replay", help="run the loop over a trace file")
    p_replay.add_argument("--input", required=True, help="newline-delimited frames")
    p_replay.add_argument("--config", default=None, help="pipeline config JSON")
    p_replay.add_argument("--log", required=True, help="session log output (JSONL)")

    p_an = sub.add_parser("analyze", help="score a session log")
    p_an.add_argument("--log", required=True, help="session log (JSONL)")
    p_an.add_argument("--out", required=True, help="report JSON output")
    p_an.add_argument("--csv-dir", default=None, help="write per-joint CSV series here")
    p_an.add_argument("--bin-width", type=float, default=1.0,
                      help="difference histogram bin width, degrees")
    p_an.add_argument("--min-blink-frames", type=int, default=2)

    p_fit = sub.add_parser("fit-limits", help="fit the pitch-limit regressors")
    p_fit.add_argument("--table", required=True, help="limit table JSON")
    p_fit.add_argument("--c", type=float, default=SvrHyperparams().c)
    p_fit.add_argument("--epsilon", type=float, default=SvrHyperparams().epsilon_tube)
    p_fit.add_argument("--gamma", type=float, default=SvrHyperparams().gamma)
    p_fit.add_argument("--out", required=True, help="fitted model JSON output")

    p_synth = sub.add_parser("synth", help="generate a synthetic replay trace")
    p_synth.add_argument("--kind", required=True,
                         choices=["sinusoid", "blinks", "emotions"])
    p_synth.add_argument("--frames", type=int, default=None)
    p_synth.add_argument("--fps", type=float, default=25.0)
    p_synth.add_argument("--events", type=int, default=50,
                         help="blink events (blinks kind)")
    p_synth.add_argument("--noise", type=int, default=10,
                         help="single-frame noise blinks (blinks kind)")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True, help="trace output path")

    p_cal = sub.add_parser("calibrate", help="baselines from a neutral frame")
    p_cal.add_argument("--input", required=True, help="single frame record JSON")
    p_cal.add_argument("--out", required=True, help="baselines JSON output")

    p_rs = sub.add_parser("robot-serve", help="serve the robot sim over HTTP")
    p_rs.add_argument("--listen", required=True, help="host:port to bind")
    p_rs.add_argument("--limits", default=None, help="limit table JSON")
    p_rs.add_argument("--lockstep", action="store_true",
                      help="advance time only via POST /step")
    p_rs.add_argument("--seed", type=int, default=0)

    return parser


def _cmd_run(args) -> int:
    from .server import LiveRunner

    overrides = {}
    if args.listen:
        overrides["listen"] = args.listen
    if args.robot:
        overrides["robot"] = args.robot
    config = PipelineConfig.from_file(args.config, **overrides)
    with open(args.log, "w", encoding="utf-8") as log_file:
        runner = LiveRunner(config, log_file)
        runner.start()
        print(f"ingest listening on {runner.address}, robot={config.robot}",
              file=sys.stderr)
        try:
            runner.serve_until_stopped()
        except KeyboardInterrupt:
            pass
        finally:
            runner.stop()
            with runner.stats.lock:
                print(
                    f"received={runner.stats.received} "
                    f"processed={runner.stats.processed} "
                    f"dropped={runner.slot.dropped}",
                    file=sys.stderr,
                )
    return EXIT_OK


def _cmd_replay(args) -> int:
    config = PipelineConfig.from_file(args.config)
    frames = run_replay(args.input, config, args.log)
    print(f"replayed {frames} frames -> {args.log}", file=sys.stderr)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    report = build_report(args.log, bin_width_deg=args.bin_width,
                          min_blink_frames=args.min_blink_frames,
                          csv_dir=args.csv_dir)
    Path(args.out).write_text(report_to_json(report), encoding="utf-8")
    for joint in ("yaw", "pitch"):
        score = report[joint]["r_squared"]
        shown = "undefined (constant reference)" if score is None else f"{score:.4f}"
        print(f"{joint}: r_squared={shown} "
              f"mean_diff={report[joint]['mean_diff_deg']:.3f} deg", file=sys.stderr)
    blink = report["blink"]
    print(f"blinks: imitated {blink['imitated']}/{blink['attempts']} "
          f"({blink['noise_runs']} noise runs rejected)", file=sys.stderr)
    return EXIT_OK


def _cmd_fit_limits(args) -> int:
    table = LimitTable.from_json_file(args.table)
    model = fit_pitch_limit_model(table, SvrHyperparams(args.c, args.epsilon,
                                                        args.gamma))
    Path(args.out).write_text(model.to_json() + "\n", encoding="utf-8")
    worst = max(
        abs(m.predict(x) - y)
        for m, col in ((model.min_model, table.min_pitches),
                       (model.max_model, table.max_pitches))
        for x, y in zip(table.yaws, col)
    )
    print(f"fitted both regressors; worst knot residual {worst:.3f} deg",
          file=sys.stderr)
    return EXIT_OK


def _cmd_synth(args) -> int:
    from .synth import synthesize_trace

    count = synthesize_trace(args.kind, args.out, frames=args.frames,
                             fps=args.fps, events=args.events,
                             noise_blinks=args.noise, seed=args.seed)
    print(f"wrote {count} frames -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    from .geometry import calibrate_baseline

    frame = parse_frame_record(Path(args.input).read_text(encoding="utf-8"))
    baselines = calibrate_baseline(frame)
    payload = {
        "yaw": baselines.yaw_baseline.as_list(),
        "pitch": baselines.pitch_baseline.as_list(),
    }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n",
                              encoding="utf-8")
    print(f"baselines written -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_robot_serve(args) -> int:
    from .config import packaged_data_path
    from .server import RobotSimServer

    table_path = args.limits or packaged_data_path("limits.json")
    table = LimitTable.from_json_file(table_path)
    sim = RobotHeadSim(table, ActuatorParams(), seed=args.seed)
    server = RobotSimServer(args.listen, sim, realtime=not args.lockstep)
    server.start()
    mode = "lockstep" if args.lockstep else "realtime"
    print(f"robot sim serving on {server.address} ({mode})", file=sys.stderr)
    try:
        while True:
            import time
            time.sleep(1.0)
    except KeyboardInterrupt:
        server.stop()
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "replay": _cmd_replay,
    "analyze": _cmd_analyze,
    "fit-limits": _cmd_fit_limits,
    "synth": _cmd_synth,
    "calibrate": _cmd_calibrate,
    "robot-serve": _cmd_robot_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except DATA_ERRORS as exc:
        print(f"headmimic {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
