"""Simulated robot head closing the imitation loop.

Stands in for the hardware: head commands set joint targets (clamped to the
hardware envelope), blink commands set eyelid state immediately, say
commands raise a speaking flag for a text-length-proportional duration.
Each step integrates first-order joint dynamics under a rate cap and
returns the sensed state, which is what the metrics layer compares against
the commands.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .geometry import YAW_LIMIT_DEG
from .limits import LimitTable

SAY_MS_PER_CHAR = 50.0

DEFAULT_MAX_SPEED_DEG_S = 120.0
DEFAULT_TIME_CONSTANT_S = 0.06
DEFAULT_TICK_MS = 10.0


class CommandRejected(ValueError):
    """Command refused by the robot (non-finite or malformed values)."""


@dataclass(frozen=True, slots=True)
class HeadCommand:
    yaw_deg: float
    pitch_deg: float
    speed_fraction: float = 1.0


@dataclass(frozen=True, slots=True)
class BlinkCommand:
    """Absolute eyelid state: True = closed."""

    left: bool
    right: bool


@dataclass(frozen=True, slots=True)
class SayCommand:
    text: str


RobotCommand = HeadCommand | BlinkCommand | SayCommand


@dataclass(frozen=True, slots=True)
class ActuatorParams:
    max_speed_deg_s: float = DEFAULT_MAX_SPEED_DEG_S
    time_constant_s: float = DEFAULT_TIME_CONSTANT_S
    sensor_noise_sigma_deg: float = 0.0
    tick_ms: float = DEFAULT_TICK_MS

    def __post_init__(self) -> None:
        if self.max_speed_deg_s < 0 or self.time_constant_s < 0 \
                or self.sensor_noise_sigma_deg < 0:
            raise ValueError("actuator parameters must be non-negative")
        if self.tick_ms <= 0:
            raise ValueError("tick_ms must be positive")


@dataclass(frozen=True, slots=True)
class RobotFeedback:
    t_ms: float
    sensed_yaw_deg: float
    sensed_pitch_deg: float
    eye_left_closed: bool
    eye_right_closed: bool
    speaking: bool

    def to_dict(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "sensed_yaw_deg": self.sensed_yaw_deg,
            "sensed_pitch_deg": self.sensed_pitch_deg,
            "eye_left_closed": self.eye_left_closed,
            "eye_right_closed": self.eye_right_closed,
            "speaking": self.speaking,
        }


@dataclass(slots=True)
class _Joint:
    current: float = 0.0
    target: float = 0.0
    speed_fraction: float = 1.0

    def step(self, dt_ms: float, params: ActuatorParams) -> None:
        dt_s = dt_ms / 1000.0
        tau = params.time_constant_s
        if tau <= 0.0:
            move = self.target - self.current
        else:
            move = (self.target - self.current) * (1.0 - math.exp(-dt_s / tau))
        cap = params.max_speed_deg_s * self.speed_fraction * dt_s
        if move > cap:
            move = cap
        elif move < -cap:
            move = -cap
        self.current += move


class RobotHeadSim:
    """Deterministic plant model of the robot head.

    Owned by the control loop; step() advances simulated time and returns
    the sensed state, read_feedback() reads without advancing.
    """

    def __init__(self, limit_table: LimitTable,
                 params: ActuatorParams | None = None, seed: int = 0):
        self.params = params or ActuatorParams()
        self.limit_table = limit_table
        self._yaw = _Joint()
        self._pitch = _Joint()
        self._eye_left_closed = False
        self._eye_right_closed = False
        self._t_ms = 0.0
        self._speaking_until_ms = 0.0
        self._say_log: list[str] = []
        self._rng = random.Random(seed)
        self._sensed_yaw = 0.0
        self._sensed_pitch = 0.0

    @property
    def say_log(self) -> list[str]:
        return list(self._say_log)

    def apply_command(self, cmd: RobotCommand) -> None:
        if isinstance(cmd, HeadCommand):
            for name, value in (("yaw_deg", cmd.yaw_deg),
                                ("pitch_deg", cmd.pitch_deg),
                                ("speed_fraction", cmd.speed_fraction)):
                if not math.isfinite(value):
                    raise CommandRejected(f"non-finite {name}: {value!r}")
            if not 0.0 < cmd.speed_fraction <= 1.0:
                raise CommandRejected(
                    f"speed_fraction {cmd.speed_fraction} outside (0, 1]"
                )
            yaw = max(-YAW_LIMIT_DEG, min(YAW_LIMIT_DEG, cmd.yaw_deg))
            lo, hi = self.limit_table.interpolate(yaw)
            pitch = max(lo, min(hi, cmd.pitch_deg))
            self._yaw.target = yaw
            self._yaw.speed_fraction = cmd.speed_fraction
            self._pitch.target = pitch
            self._pitch.speed_fraction = cmd.speed_fraction
        elif isinstance(cmd, BlinkCommand):
            self._eye_left_closed = bool(cmd.left)
            self._eye_right_closed = bool(cmd.right)
        elif isinstance(cmd, SayCommand):
            if not isinstance(cmd.text, str):
                raise CommandRejected("say text must be a string")
            self._say_log.append(cmd.text)
            self._speaking_until_ms = self._t_ms + SAY_MS_PER_CHAR * len(cmd.text)
        else:
            raise CommandRejected(f"unsupported command {cmd!r}")

    def step(self, dt_ms: float) -> RobotFeedback:
        if dt_ms <= 0:
            raise ValueError("dt_ms must be positive")
        self._yaw.step(dt_ms, self.params)
        self._pitch.step(dt_ms, self.params)
        self._t_ms += dt_ms
        self._sense()
        return self.read_feedback()

    def read_feedback(self) -> RobotFeedback:
        """Latest sensed state without advancing time.

        Angle readings are the ones sampled by the last step (noise is drawn
        per step, not per read); eyelid and speaking state are current.
        """
        return RobotFeedback(
            t_ms=self._t_ms,
            sensed_yaw_deg=self._sensed_yaw,
            sensed_pitch_deg=self._sensed_pitch,
            eye_left_closed=self._eye_left_closed,
            eye_right_closed=self._eye_right_closed,
            speaking=self._t_ms < self._speaking_until_ms,
        )

    def _sense(self) -> None:
        yaw = self._yaw.current
        pitch = self._pitch.current
        sigma = self.params.sensor_noise_sigma_deg
        if sigma > 0:
            yaw += self._rng.gauss(0.0, sigma)
            pitch += self._rng.gauss(0.0, sigma)
        yaw = max(-YAW_LIMIT_DEG, min(YAW_LIMIT_DEG, yaw))
        lo, hi = self.limit_table.interpolate(yaw)
        self._sensed_yaw = yaw
        self._sensed_pitch = max(lo, min(hi, pitch))


def command_to_dict(cmd: RobotCommand) -> dict:
    """Wire encoding of a robot command (POST /command body)."""
    if isinstance(cmd, HeadCommand):
        return {"type": "head", "yaw_deg": cmd.yaw_deg, "pitch_deg": cmd.pitch_deg,
                "speed_fraction": cmd.speed_fraction}
    if isinstance(cmd, BlinkCommand):
        return {"type": "blink", "left": cmd.left, "right": cmd.right}
    if isinstance(cmd, SayCommand):
        return {"type": "say", "text": cmd.text}
    raise CommandRejected(f"unsupported command {cmd!r}")


def command_from_dict(data: dict) -> RobotCommand:
    """Decode the wire encoding; raises CommandRejected on malformed input."""
    if not isinstance(data, dict):
        raise CommandRejected("command body must be a JSON object")
    kind = data.get("type")
    try:
        if kind == "head":
            return HeadCommand(float(data["yaw_deg"]), float(data["pitch_deg"]),
                               float(data.get("speed_fraction", 1.0)))
        if kind == "blink":
            return BlinkCommand(bool(data["left"]), bool(data["right"]))
        if kind == "say":
            text = data["text"]
            if not isinstance(text, str):
                raise CommandRejected("say text must be a string")
            return SayCommand(text)
    except (KeyError, TypeError, ValueError) as exc:
        raise CommandRejected(f"malformed {kind!r} command: {exc}") from exc
    raise CommandRejected(f"unknown command type {kind!r}")
