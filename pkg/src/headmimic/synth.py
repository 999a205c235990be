"""Synthetic landmark trace generation.

Replay traces stand in for recorded human sessions: a template face is
posed per frame by rotating its landmarks about the eye midpoint, eye
closures are injected by collapsing the inner eye gap, and emotion labels
follow a fixed script. All three kinds are deterministic for a given seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

from .blink import EyeLandmarks
from .emotion import EmotionLabel
from .geometry import Vec3, midpoint
from .wire import LandmarkFrame, serialize_frame_record

DEFAULT_FPS = 25.0
DEFAULT_FRAMES = 250

YAW_AMPLITUDE_DEG = 60.0
PITCH_AMPLITUDE_DEG = 15.0
# whole cycle counts over the trace keep the trajectory symmetric (zero-mean
# tracking error) while the two joints stay decorrelated
YAW_CYCLES = 2.0
PITCH_CYCLES = 3.0

_OPEN_HALF_GAP = 0.010
_CLOSED_INNER_HALF_GAP = 0.002


@dataclass(frozen=True, slots=True)
class FaceTemplate:
    """Neutral face landmark layout in normalized image coordinates."""

    left_eye: Vec3 = Vec3(0.56, 0.45, 0.0)
    right_eye: Vec3 = Vec3(0.44, 0.45, 0.0)
    nose: Vec3 = Vec3(0.50, 0.53, 0.0)
    eye_half_width: float = 0.012

    def pivot(self) -> Vec3:
        return midpoint(self.left_eye, self.right_eye)


def _rotation_matrix(yaw_deg: float, pitch_deg: float) -> list[list[float]]:
    """Head rotation: yaw about the up axis (-y), then pitch about +x."""
    a = math.radians(-yaw_deg)   # up axis is -y, so invert for a +y rotation
    b = math.radians(pitch_deg)
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    # R_y(a) @ R_x(b)
    return [
        [ca, sa * sb, sa * cb],
        [0.0, cb, -sb],
        [-sa, ca * sb, ca * cb],
    ]


def _apply(mat: list[list[float]], v: Vec3, pivot: Vec3) -> Vec3:
    dx, dy, dz = v.x - pivot.x, v.y - pivot.y, v.z - pivot.z
    return Vec3(
        pivot.x + mat[0][0] * dx + mat[0][1] * dy + mat[0][2] * dz,
        pivot.y + mat[1][0] * dx + mat[1][1] * dy + mat[1][2] * dz,
        pivot.z + mat[2][0] * dx + mat[2][1] * dy + mat[2][2] * dz,
    )


def _eye_landmarks(center: Vec3, inner_sign: float, closed: bool) -> EyeLandmarks:
    """Four-point eye layout around an eye center.

    The inner section (toward the nose) collapses when the eye is closed,
    which drives the outer/inner ratio above the blink threshold.
    """
    inner_x = inner_sign * 0.012
    outer_x = -inner_sign * 0.012
    inner_gap = _CLOSED_INNER_HALF_GAP if closed else _OPEN_HALF_GAP
    return EyeLandmarks(
        it=center + Vec3(inner_x, -inner_gap, 0.0),
        ib=center + Vec3(inner_x, inner_gap, 0.0),
        ot=center + Vec3(outer_x, -_OPEN_HALF_GAP, 0.0),
        ob=center + Vec3(outer_x, _OPEN_HALF_GAP, 0.0),
    )


def make_frame(seq: int, t_ms: int, yaw_deg: float = 0.0, pitch_deg: float = 0.0,
               left_closed: bool = False, right_closed: bool = False,
               emotion: str | None = None,
               template: FaceTemplate | None = None) -> LandmarkFrame:
    """One posed landmark frame (also handy for tests)."""
    tpl = template or FaceTemplate()
    mat = _rotation_matrix(yaw_deg, pitch_deg)
    pivot = tpl.pivot()

    def place(v: Vec3) -> Vec3:
        return _apply(mat, v, pivot)

    left_pts = _eye_landmarks(tpl.left_eye, inner_sign=-1.0, closed=left_closed)
    right_pts = _eye_landmarks(tpl.right_eye, inner_sign=1.0, closed=right_closed)
    return LandmarkFrame(
        t_ms=t_ms, seq=seq,
        left_eye=place(tpl.left_eye),
        right_eye=place(tpl.right_eye),
        nose=place(tpl.nose),
        face_left=EyeLandmarks(*(place(p) for p in left_pts.points())),
        face_right=EyeLandmarks(*(place(p) for p in right_pts.points())),
        emotion=EmotionLabel.from_wire(emotion) if emotion else None,
    )


def sinusoid_trace(frames: int = DEFAULT_FRAMES, fps: float = DEFAULT_FPS) -> list[LandmarkFrame]:
    """Head sweep: yaw 60*sin and pitch 15*sin at different cycle counts."""
    out = []
    for i in range(frames):
        phase = i / frames
        yaw = YAW_AMPLITUDE_DEG * math.sin(2.0 * math.pi * YAW_CYCLES * phase)
        pitch = PITCH_AMPLITUDE_DEG * math.sin(2.0 * math.pi * PITCH_CYCLES * phase)
        out.append(make_frame(seq=i, t_ms=round(i * 1000.0 / fps),
                              yaw_deg=yaw, pitch_deg=pitch))
    return out


def blink_trace(events: int = 50, noise_blinks: int = 10, frames: int | None = None,
                fps: float = DEFAULT_FPS, seed: int = 0) -> list[LandmarkFrame]:
    """Neutral-pose trace with both-eye closures.

    Produces exactly `events` maximal closed runs of >= 2 frames (durations
    cycle 2, 3, 4) plus `noise_blinks` single-frame closures, all separated
    by open gaps. If `frames` exceeds the required length the tail is padded
    with open frames; a too-small value is an error.
    """
    rng = random.Random(seed)
    closed_flags: list[bool] = [False, False]
    noise_positions = set()
    if noise_blinks > 0 and events > 0:
        step = max(1, events // noise_blinks)
        noise_positions = {i for i in range(0, events) if i % step == 0}
        while len(noise_positions) > noise_blinks:
            noise_positions.remove(max(noise_positions))
    extra_noise = max(0, noise_blinks - len(noise_positions))

    for event in range(events):
        duration = 2 + event % 3
        closed_flags.extend([True] * duration)
        closed_flags.extend([False] * (2 + rng.randrange(3)))
        if event in noise_positions:
            closed_flags.append(True)
            closed_flags.extend([False] * 2)
    for _ in range(extra_noise):
        closed_flags.append(True)
        closed_flags.extend([False] * 2)
    closed_flags.extend([False, False])

    if frames is not None:
        if frames < len(closed_flags):
            raise ValueError(
                f"{events} events + {noise_blinks} noise blinks need at least "
                f"{len(closed_flags)} frames, got {frames}"
            )
        closed_flags.extend([False] * (frames - len(closed_flags)))

    return [make_frame(seq=i, t_ms=round(i * 1000.0 / fps),
                       left_closed=closed, right_closed=closed)
            for i, closed in enumerate(closed_flags)]


EMOTION_SCRIPT = ("neutral", "happy", "sad", "anger", "surprise", "fear", "disgust")


def emotion_trace(frames: int | None = None, fps: float = DEFAULT_FPS,
                  hold_frames: int = 14, gap_frames: int = 2) -> list[LandmarkFrame]:
    """Scripted label sequence cycling through all seven emotions.

    Each emotion is held for `hold_frames` labeled frames followed by
    `gap_frames` unlabeled ones (the vote must tolerate gaps).
    """
    labels: list[str | None] = []
    for name in EMOTION_SCRIPT:
        labels.extend([name] * hold_frames)
        labels.extend([None] * gap_frames)
    if frames is not None:
        while len(labels) < frames:
            labels.extend(labels[: frames - len(labels)])
        labels = labels[:frames]
    return [make_frame(seq=i, t_ms=round(i * 1000.0 / fps), emotion=name)
            for i, name in enumerate(labels)]


def synthesize_trace(kind: str, out_path: str | Path, frames: int | None = None,
                     fps: float = DEFAULT_FPS, events: int = 50,
                     noise_blinks: int = 10, seed: int = 0) -> int:
    """Write a replay file of the requested kind; returns the frame count."""
    if kind == "sinusoid":
        trace = sinusoid_trace(frames or DEFAULT_FRAMES, fps)
    elif kind == "blinks":
        trace = blink_trace(events, noise_blinks, frames, fps, seed)
    elif kind == "emotions":
        trace = emotion_trace(frames, fps)
    else:
        raise ValueError(f"unknown trace kind {kind!r}; "
                         "expected sinusoid, blinks, or emotions")
    path = Path(out_path)
    with open(path, "w", encoding="utf-8") as fh:
        for frame in trace:
            fh.write(serialize_frame_record(frame))
            fh.write("\n")
    return len(trace)
