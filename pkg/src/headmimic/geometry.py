"""Head yaw/pitch estimation from facial landmarks.

Both joint angles are measured the same way: a unit vector built from the
current landmarks is compared against a baseline vector captured at a neutral
head pose, the minimal rotation between the two is formed as a rotation
vector, and the relevant Euler component is extracted.

Coordinate conventions (normalized image space): x grows rightward in the
image, y grows downward, z is the capture source's depth value passed through
untouched. The subject faces the camera, so the subject's left eye sits at
the larger x. Yaw is positive when the subject turns left; pitch is positive
when the subject looks down. Angles at the module boundary are degrees.

The estimators assume the calibration pose satisfies the usual landmark
alignment for a level neutral face: both eyes on one image row (the eye
vector carries no vertical component) and the nose horizontally centered
between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from . import _kernels

if TYPE_CHECKING:
    from .wire import LandmarkFrame

EPS_LEN = 1e-6
EPS_ANGLE = 1e-7
GIMBAL_BAND_DEG = 0.1
YAW_LIMIT_DEG = 119.5

_UNIT_TOL = 1e-6
_BASELINE_NORM_TOL = 1e-9


class DegenerateLandmarks(ValueError):
    """Landmark points too close together to define a direction."""


class NotUnit(ValueError):
    """A vector that must be unit length is not."""


@dataclass(frozen=True, slots=True)
class Vec3:
    x: float
    y: float
    z: float

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n < EPS_LEN:
            raise DegenerateLandmarks(f"cannot normalize near-zero vector (norm {n:g})")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_seq(cls, seq) -> "Vec3":
        x, y, z = seq
        return cls(float(x), float(y), float(z))


def midpoint(a: Vec3, b: Vec3) -> Vec3:
    return Vec3((a.x + b.x) / 2.0, (a.y + b.y) / 2.0, (a.z + b.z) / 2.0)


def _require_unit(v: Vec3, name: str) -> None:
    if abs(v.norm() - 1.0) > _UNIT_TOL:
        raise NotUnit(f"{name} has norm {v.norm():.9f}, expected 1")


@dataclass(frozen=True, slots=True)
class BaselineConfig:
    """Unit reference vectors captured at a neutral head pose."""

    yaw_baseline: Vec3
    pitch_baseline: Vec3

    def __post_init__(self) -> None:
        for name, v in (("yaw_baseline", self.yaw_baseline),
                        ("pitch_baseline", self.pitch_baseline)):
            if abs(v.norm() - 1.0) > _BASELINE_NORM_TOL:
                raise NotUnit(f"{name} has norm {v.norm():.12f}, expected 1")

    @classmethod
    def from_vectors(cls, yaw_vec: Vec3, pitch_vec: Vec3) -> "BaselineConfig":
        return cls(yaw_vec.normalized(), pitch_vec.normalized())


#: Axis-aligned defaults used when no calibration frame is supplied: eye
#: vector along +x, eye-midpoint-to-nose along +y (image down).
DEFAULT_BASELINES = BaselineConfig(Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0))


@dataclass(frozen=True, slots=True)
class RotationResult:
    """Axis-angle rotation: angle in [0, pi] radians, unit axis, rotvec = angle*axis."""

    angle: float
    axis: Vec3
    rotvec: Vec3

    @classmethod
    def from_angle_axis(cls, angle: float, axis: Vec3) -> "RotationResult":
        return cls(angle, axis, axis.scaled(angle))

    @classmethod
    def from_rotvec(cls, rotvec: Vec3) -> "RotationResult":
        angle = rotvec.norm()
        if angle < EPS_ANGLE:
            return cls(0.0, Vec3(0.0, 0.0, 1.0), Vec3(0.0, 0.0, 0.0))
        return cls(angle, rotvec.scaled(1.0 / angle), rotvec)


@dataclass(frozen=True, slots=True)
class HeadPose:
    """Command target for the robot head, degrees."""

    yaw_deg: float
    pitch_deg: float


def calibrate_baseline(frame: "LandmarkFrame") -> BaselineConfig:
    """Capture baseline vectors from a neutral-pose frame.

    Yaw baseline: left-eye minus right-eye, normalized. Pitch baseline:
    nose minus eye midpoint, normalized.
    """
    eye_vec = frame.left_eye - frame.right_eye
    if eye_vec.norm() < EPS_LEN:
        raise DegenerateLandmarks("left and right eye landmarks coincide")
    nose_vec = frame.nose - midpoint(frame.left_eye, frame.right_eye)
    if nose_vec.norm() < EPS_LEN:
        raise DegenerateLandmarks("nose coincides with the eye midpoint")
    return BaselineConfig(eye_vec.normalized(), nose_vec.normalized())


def rotation_from_vectors(from_vec: Vec3, to_vec: Vec3) -> RotationResult:
    """Minimal rotation carrying one unit vector onto another.

    angle = arccos of the (clamped) dot product, axis = normalized cross
    product. Near-identity inputs return the canonical zero rotation about
    (0, 0, 1); antiparallel inputs use a deterministic perpendicular axis.
    """
    _require_unit(from_vec, "from_vec")
    _require_unit(to_vec, "to_vec")
    angle, ax, ay, az = _kernels.rotation_between(
        from_vec.x, from_vec.y, from_vec.z,
        to_vec.x, to_vec.y, to_vec.z,
        EPS_LEN, EPS_ANGLE,
    )
    return RotationResult.from_angle_axis(angle, Vec3(ax, ay, az))


def rotvec_to_euler(rotation: RotationResult) -> tuple[float, float, float]:
    """Extract (yaw, pitch, roll) in degrees from a rotation result.

    Intrinsic order: yaw about the vertical axis, pitch about the horizontal
    axis, roll about the depth axis. Yaw is positive for a leftward turn,
    pitch positive looking down. In the gimbal band (|pitch| within 0.1 deg
    of 90) roll is zeroed and the free angle folds into yaw.
    """
    r = rotation.rotvec
    return _kernels.rotvec_to_ypr_deg(r.x, r.y, r.z, EPS_ANGLE, GIMBAL_BAND_DEG)


def estimate_yaw(frame: "LandmarkFrame", baseline: BaselineConfig = DEFAULT_BASELINES) -> float:
    """Head yaw in degrees from the eye-to-eye landmark vector.

    Clamped to the robot's yaw stop range [-119.5, +119.5].
    """
    eye_vec = frame.left_eye - frame.right_eye
    if eye_vec.norm() < EPS_LEN:
        raise DegenerateLandmarks("left and right eye landmarks coincide")
    rot = rotation_from_vectors(baseline.yaw_baseline, eye_vec.normalized())
    yaw, _, _ = rotvec_to_euler(rot)
    return max(-YAW_LIMIT_DEG, min(YAW_LIMIT_DEG, yaw))


def estimate_pitch_raw(frame: "LandmarkFrame", baseline: BaselineConfig = DEFAULT_BASELINES) -> float:
    """Head pitch in degrees from the eye-midpoint-to-nose vector.

    Not clamped here: pitch limits depend on yaw and are applied by the
    joint-limit model downstream.
    """
    nose_vec = frame.nose - midpoint(frame.left_eye, frame.right_eye)
    if nose_vec.norm() < EPS_LEN:
        raise DegenerateLandmarks("nose coincides with the eye midpoint")
    rot = rotation_from_vectors(baseline.pitch_baseline, nose_vec.normalized())
    _, pitch, _ = rotvec_to_euler(rot)
    return pitch
