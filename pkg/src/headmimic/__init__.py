"""Closed-loop head imitation pipeline.

Consumes facial-landmark frames, estimates head yaw and pitch, bounds pitch
through a regressed joint-limit envelope, mirrors blinks and smoothed
emotions onto a (simulated) robot head, and scores imitation fidelity from
the sensed feedback.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .geometry import (BaselineConfig, HeadPose, RotationResult, Vec3,
                       calibrate_baseline, estimate_pitch_raw, estimate_yaw,
                       rotation_from_vectors, rotvec_to_euler)
from .limits import (LimitTable, PitchBounds, PitchLimitModel, SvrHyperparams,
                     clamp_pitch, fit_pitch_limit_model, pitch_bounds)
from .wire import LandmarkFrame, parse_frame_record, serialize_frame_record

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "BaselineConfig",
    "HeadPose",
    "LandmarkFrame",
    "LimitTable",
    "PitchBounds",
    "PitchLimitModel",
    "RotationResult",
    "SvrHyperparams",
    "Vec3",
    "calibrate_baseline",
    "clamp_pitch",
    "estimate_pitch_raw",
    "estimate_yaw",
    "fit_pitch_limit_model",
    "parse_frame_record",
    "pitch_bounds",
    "rotation_from_vectors",
    "rotvec_to_euler",
    "serialize_frame_record",
    "__version__",
]
