"""The imitation control loop.

Per frame: estimate yaw from the eye vector, bound and clamp pitch through
the joint-limit model, debounce blinks, vote on the emotion label, push the
resulting commands into the robot, advance the plant by the inter-frame
interval, and append one session-log record pairing the commands with the
sensed feedback. Replay mode drives the loop from a file; live mode drives
it from the ingest server's latest-wins slot. Both paths share this code so
they produce identical logs for identical frame sequences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Protocol

from . import geometry
from .blink import BlinkState, EyeStatus, eye_ratio, eye_status
from .config import PipelineConfig
from .emotion import EmotionWindow, ResponseMap, select_response
from .geometry import HeadPose
from .limits import (LimitTable, PitchLimitModel, clamp_pitch,
                     fit_pitch_limit_model, pitch_bounds)
from .robot import (BlinkCommand, HeadCommand, RobotFeedback, RobotHeadSim,
                    SayCommand)
from .wire import LandmarkFrame, SchemaError, parse_frame_record

MIN_FRAME_DT_MS = 1.0
MAX_FRAME_DT_MS = 1000.0


class RobotLike(Protocol):
    def apply_command(self, cmd) -> None: ...
    def step(self, dt_ms: float) -> RobotFeedback: ...
    def read_feedback(self) -> RobotFeedback: ...


@dataclass(frozen=True, slots=True)
class SessionLogRecord:
    """One processed frame: commands sent and feedback sensed."""

    t_ms: int
    seq: int
    yaw_cmd: float
    pitch_cmd: float
    yaw_sensed: float
    pitch_sensed: float
    human_left_closed: bool
    human_right_closed: bool
    robot_left_closed: bool
    robot_right_closed: bool
    emotion: str | None
    utterance: str | None

    def to_json_line(self) -> str:
        return json.dumps({
            "t_ms": self.t_ms,
            "seq": self.seq,
            "yaw_cmd": self.yaw_cmd,
            "pitch_cmd": self.pitch_cmd,
            "yaw_sensed": self.yaw_sensed,
            "pitch_sensed": self.pitch_sensed,
            "human_left_closed": self.human_left_closed,
            "human_right_closed": self.human_right_closed,
            "robot_left_closed": self.robot_left_closed,
            "robot_right_closed": self.robot_right_closed,
            "emotion": self.emotion,
            "utterance": self.utterance,
        }, separators=(",", ":"))


def load_limit_model(config: PipelineConfig) -> PitchLimitModel:
    """Load a pre-fitted limit model, or fit one from the limit table."""
    if config.limit_model_path is not None:
        return PitchLimitModel.from_json_file(config.limit_model_path)
    table = LimitTable.from_json_file(config.limits_path)
    return fit_pitch_limit_model(table, config.svr)


class ControlLoop:
    """Frame-by-frame imitation state machine feeding one robot."""

    def __init__(self, config: PipelineConfig, robot: RobotLike):
        self.config = config
        self.robot = robot
        self.limit_model = load_limit_model(config)
        self.responses = ResponseMap.from_json_file(config.responses_path)
        self.blink_state = BlinkState(min_frames=config.min_blink_frames)
        self.emotion_window = EmotionWindow(window_size=config.emotion_window_size)
        self.frames_processed = 0
        self._robot_left_closed = False
        self._robot_right_closed = False
        self._prev_t_ms: int | None = None

    def process(self, frame: LandmarkFrame) -> SessionLogRecord:
        cfg = self.config

        yaw = geometry.estimate_yaw(frame, cfg.baselines)
        if cfg.yaw_sign_flip:
            yaw = -yaw
        raw_pitch = geometry.estimate_pitch_raw(frame, cfg.baselines)
        bounds = pitch_bounds(self.limit_model, yaw, cfg.safe_margin)
        pose = HeadPose(yaw_deg=yaw, pitch_deg=clamp_pitch(raw_pitch, bounds))

        left = eye_status(eye_ratio(frame.face_left), cfg.blink_threshold_left)
        right = eye_status(eye_ratio(frame.face_right), cfg.blink_threshold_right)
        blink_commands = self.blink_state.update(left, right, frame.seq)

        emitted = self.emotion_window.update(frame.emotion)
        utterance = select_response(self.responses, emitted) if emitted else None

        self.robot.apply_command(HeadCommand(pose.yaw_deg, pose.pitch_deg,
                                             cfg.speed_fraction))
        if blink_commands:
            for action, eye in blink_commands:
                closed = action == "blink"
                if eye == "left":
                    self._robot_left_closed = closed
                else:
                    self._robot_right_closed = closed
            self.robot.apply_command(BlinkCommand(self._robot_left_closed,
                                                  self._robot_right_closed))
        if utterance is not None:
            self.robot.apply_command(SayCommand(utterance))

        if self._prev_t_ms is None:
            dt = cfg.actuator.tick_ms
        else:
            dt = float(frame.t_ms - self._prev_t_ms)
            dt = max(MIN_FRAME_DT_MS, min(MAX_FRAME_DT_MS, dt))
        self._prev_t_ms = frame.t_ms
        feedback = self.robot.step(dt)

        self.frames_processed += 1
        return SessionLogRecord(
            t_ms=frame.t_ms,
            seq=frame.seq,
            yaw_cmd=pose.yaw_deg,
            pitch_cmd=pose.pitch_deg,
            yaw_sensed=feedback.sensed_yaw_deg,
            pitch_sensed=feedback.sensed_pitch_deg,
            human_left_closed=left is EyeStatus.CLOSED,
            human_right_closed=right is EyeStatus.CLOSED,
            robot_left_closed=feedback.eye_left_closed,
            robot_right_closed=feedback.eye_right_closed,
            emotion=emitted.value if emitted else None,
            utterance=utterance,
        )


def run_replay(input_path: str | Path, config: PipelineConfig,
               log_path: str | Path, robot: RobotLike | None = None) -> int:
    """Replay a trace file through the loop; returns frames processed.

    Schema problems are re-raised as SchemaError with the 1-based line
    number prefixed, so the CLI can point at the offending record.
    """
    if robot is None:
        table = LimitTable.from_json_file(config.limits_path)
        robot = RobotHeadSim(table, config.actuator, seed=config.seed)
    loop = ControlLoop(config, robot)

    with open(input_path, encoding="utf-8") as src, \
            open(log_path, "w", encoding="utf-8") as log:
        for lineno, line in enumerate(src, start=1):
            if not line.strip():
                continue
            try:
                frame = parse_frame_record(line)
            except SchemaError as exc:
                raise SchemaError(exc.field, f"line {lineno}: {exc}") from exc
            record = loop.process(frame)
            log.write(record.to_json_line())
            log.write("\n")
    return loop.frames_processed


def write_log_record(log: IO[str], record: SessionLogRecord) -> None:
    log.write(record.to_json_line())
    log.write("\n")
