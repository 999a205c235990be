"""Pipeline configuration: defaults, JSON file loading, validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .blink import DEFAULT_MIN_BLINK_FRAMES, DEFAULT_RATIO_THRESHOLD
from .emotion import DEFAULT_WINDOW_SIZE
from .geometry import BaselineConfig, DEFAULT_BASELINES, Vec3
from .limits import SvrHyperparams
from .robot import ActuatorParams


def packaged_data_path(name: str) -> Path:
    """Path of a data file shipped inside the package (limits/responses)."""
    return Path(resources.files("headmimic.data") / name)


@dataclass(slots=True)
class PipelineConfig:
    baselines: BaselineConfig = DEFAULT_BASELINES
    blink_threshold_left: float = DEFAULT_RATIO_THRESHOLD
    blink_threshold_right: float = DEFAULT_RATIO_THRESHOLD
    min_blink_frames: int = DEFAULT_MIN_BLINK_FRAMES
    emotion_window_size: int = DEFAULT_WINDOW_SIZE
    limits_path: Path = field(default_factory=lambda: packaged_data_path("limits.json"))
    limit_model_path: Path | None = None
    responses_path: Path = field(default_factory=lambda: packaged_data_path("responses.json"))
    actuator: ActuatorParams = field(default_factory=ActuatorParams)
    svr: SvrHyperparams = field(default_factory=SvrHyperparams)
    listen: str = "127.0.0.1:8089"
    robot: str = "sim"
    yaw_sign_flip: bool = False
    speed_fraction: float = 1.0
    safe_margin: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.emotion_window_size < 1:
            raise ValueError("emotion window size must be >= 1")
        if self.min_blink_frames < 1:
            raise ValueError("min_blink_frames must be >= 1")
        if not 0.0 < self.speed_fraction <= 1.0:
            raise ValueError("speed_fraction must lie in (0, 1]")
        if self.robot != "sim" and not self.robot.startswith("http:"):
            raise ValueError("robot must be 'sim' or 'http:<host:port>'")
        for label, path in (("limits", self.limits_path),
                            ("responses", self.responses_path),
                            ("limit model", self.limit_model_path)):
            if path is not None and not Path(path).exists():
                raise FileNotFoundError(f"{label} file does not exist: {path}")

    @classmethod
    def from_file(cls, path: str | Path | None, **overrides) -> "PipelineConfig":
        """Build a config from an optional JSON file plus keyword overrides."""
        kwargs: dict = {}
        if path is not None:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
            if not isinstance(raw, dict):
                raise ValueError("config file must hold a JSON object")
            kwargs = _config_kwargs(raw, Path(path).parent)
        kwargs.update(overrides)
        return cls(**kwargs)


def _config_kwargs(raw: dict, base_dir: Path) -> dict:
    kwargs: dict = {}

    def resolve(p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else base_dir / p

    if "baselines" in raw:
        b = raw["baselines"]
        kwargs["baselines"] = BaselineConfig.from_vectors(
            Vec3.from_seq(b["yaw"]), Vec3.from_seq(b["pitch"]))
    elif "baselines_path" in raw:
        with open(resolve(raw["baselines_path"]), encoding="utf-8") as fh:
            b = json.load(fh)
        kwargs["baselines"] = BaselineConfig.from_vectors(
            Vec3.from_seq(b["yaw"]), Vec3.from_seq(b["pitch"]))

    blink = raw.get("blink", {})
    if "threshold_left" in blink:
        kwargs["blink_threshold_left"] = float(blink["threshold_left"])
    if "threshold_right" in blink:
        kwargs["blink_threshold_right"] = float(blink["threshold_right"])
    if "min_frames" in blink:
        kwargs["min_blink_frames"] = int(blink["min_frames"])

    emotion = raw.get("emotion", {})
    if "window_size" in emotion:
        kwargs["emotion_window_size"] = int(emotion["window_size"])

    if "limits_path" in raw:
        kwargs["limits_path"] = resolve(raw["limits_path"])
    if "limit_model_path" in raw and raw["limit_model_path"] is not None:
        kwargs["limit_model_path"] = resolve(raw["limit_model_path"])
    if "responses_path" in raw:
        kwargs["responses_path"] = resolve(raw["responses_path"])

    if "actuator" in raw:
        a = raw["actuator"]
        d = ActuatorParams()
        kwargs["actuator"] = ActuatorParams(
            max_speed_deg_s=float(a.get("max_speed_deg_s", d.max_speed_deg_s)),
            time_constant_s=float(a.get("time_constant_s", d.time_constant_s)),
            sensor_noise_sigma_deg=float(a.get("sensor_noise_sigma_deg", 0.0)),
            tick_ms=float(a.get("tick_ms", d.tick_ms)),
        )
    if "svr" in raw:
        s = raw["svr"]
        defaults = SvrHyperparams()
        kwargs["svr"] = SvrHyperparams(
            c=float(s.get("c", defaults.c)),
            epsilon_tube=float(s.get("epsilon", defaults.epsilon_tube)),
            gamma=float(s.get("gamma", defaults.gamma)),
        )

    for key in ("listen", "robot"):
        if key in raw:
            kwargs[key] = str(raw[key])
    if "yaw_sign_flip" in raw:
        kwargs["yaw_sign_flip"] = bool(raw["yaw_sign_flip"])
    if "speed_fraction" in raw:
        kwargs["speed_fraction"] = float(raw["speed_fraction"])
    if "safe_margin" in raw:
        kwargs["safe_margin"] = bool(raw["safe_margin"])
    if "seed" in raw:
        kwargs["seed"] = int(raw["seed"])
    return kwargs
