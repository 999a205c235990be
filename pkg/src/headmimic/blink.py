"""Per-eye open/closed detection and blink debouncing.

An eye is judged closed when the ratio of its outer-section vertical
distance to its inner-section vertical distance exceeds a threshold. Raw
closures shorter than a minimum frame count are treated as detector noise;
a blink command fires only when a closure survives the debounce, and a
reopen command follows when that eye opens again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .geometry import EPS_LEN, Vec3

DEFAULT_RATIO_THRESHOLD = 1.8
DEFAULT_MIN_BLINK_FRAMES = 2


class NonMonotonicSeq(ValueError):
    """Frame sequence numbers went backwards or repeated."""


class EyeStatus(Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True, slots=True)
class EyeLandmarks:
    """Four vertical-gap points of one eye: inner top/bottom, outer top/bottom."""

    it: Vec3
    ib: Vec3
    ot: Vec3
    ob: Vec3

    def points(self) -> tuple[Vec3, Vec3, Vec3, Vec3]:
        return (self.it, self.ib, self.ot, self.ob)


@dataclass(frozen=True, slots=True)
class EyeMeasure:
    d_inner: float
    d_outer: float
    ratio: float


def eye_ratio(eye: EyeLandmarks) -> EyeMeasure:
    """Outer/inner vertical distance ratio for one eye.

    A collapsed inner section (distance below the length epsilon) yields an
    infinite ratio, which downstream thresholding reads as closed.
    """
    d_inner = (eye.it - eye.ib).norm()
    d_outer = (eye.ot - eye.ob).norm()
    if d_inner < EPS_LEN:
        return EyeMeasure(d_inner, d_outer, math.inf)
    return EyeMeasure(d_inner, d_outer, d_outer / d_inner)


def eye_status(measure: EyeMeasure, threshold: float) -> EyeStatus:
    """Closed iff the ratio strictly exceeds the threshold."""
    return EyeStatus.CLOSED if measure.ratio > threshold else EyeStatus.OPEN


@dataclass(frozen=True, slots=True)
class BlinkEvent:
    """A completed, debounce-qualified closure of one eye."""

    eye: str  # "left" | "right"
    start_seq: int
    duration_frames: int


@dataclass(slots=True)
class _EyeTrack:
    status: EyeStatus = EyeStatus.OPEN
    closed_run: int = 0
    run_start_seq: int = 0
    command_sent: bool = False


@dataclass(slots=True)
class BlinkState:
    """Debounce state for both eyes of one stream; single-owner, not shared.

    update() returns robot command tuples: ("blink", eye) the frame a
    closure reaches min_frames, ("open", eye) when that eye reopens.
    Completed qualifying closures accumulate in .events.
    """

    min_frames: int = DEFAULT_MIN_BLINK_FRAMES
    left: _EyeTrack = field(default_factory=_EyeTrack)
    right: _EyeTrack = field(default_factory=_EyeTrack)
    events: list[BlinkEvent] = field(default_factory=list)
    last_seq: int | None = None

    def update(self, left: EyeStatus, right: EyeStatus,
               seq: int) -> list[tuple[str, str]]:
        if self.last_seq is not None and seq <= self.last_seq:
            raise NonMonotonicSeq(
                f"frame seq must strictly increase: {seq} after {self.last_seq}"
            )
        self.last_seq = seq
        commands: list[tuple[str, str]] = []
        for name, track, status in (("left", self.left, left),
                                    ("right", self.right, right)):
            commands.extend(self._track(name, track, status, seq))
        return commands

    def _track(self, name: str, track: _EyeTrack, status: EyeStatus,
               seq: int) -> list[tuple[str, str]]:
        commands: list[tuple[str, str]] = []
        if status is EyeStatus.CLOSED:
            if track.closed_run == 0:
                track.run_start_seq = seq
            track.closed_run += 1
            track.status = EyeStatus.CLOSED
            if track.closed_run == self.min_frames:
                commands.append(("blink", name))
                track.command_sent = True
        else:
            if track.closed_run >= self.min_frames:
                self.events.append(BlinkEvent(name, track.run_start_seq,
                                              track.closed_run))
            if track.command_sent:
                commands.append(("open", name))
            track.closed_run = 0
            track.command_sent = False
            track.status = EyeStatus.OPEN
        return commands

    def flush(self) -> None:
        """Finalize a stream: record any qualifying closure still in progress."""
        for name, track in (("left", self.left), ("right", self.right)):
            if track.closed_run >= self.min_frames:
                self.events.append(BlinkEvent(name, track.run_start_seq,
                                              track.closed_run))
                track.closed_run = 0
                track.command_sent = False
                track.status = EyeStatus.OPEN
