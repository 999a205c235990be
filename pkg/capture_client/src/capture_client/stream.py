"""Frame delivery with outage tolerance.

The client is a real-time sensor: when the core is unreachable it must keep
capturing and simply lose the frames of the outage, never block or crash.
The sender therefore attempts one POST per frame with a short timeout;
after a failure it goes quiet for an exponentially growing backoff window
(0.25 s doubling to 2 s) during which frames are counted as dropped without
touching the socket, then probes again.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import requests

from .records import encode_record

BACKOFF_INITIAL_S = 0.25
BACKOFF_MAX_S = 2.0


@dataclass
class SendStats:
    sent: int = 0
    dropped: int = 0
    rejected: int = 0
    outages: int = 0


class FrameSender:
    """POSTs wire records to the core's /frame endpoint."""

    def __init__(self, endpoint: str, timeout_s: float = 1.0):
        base = endpoint if endpoint.startswith("http") else f"http://{endpoint}"
        self.url = base.rstrip("/") + "/frame"
        self.timeout_s = timeout_s
        self.stats = SendStats()
        self._backoff_s = BACKOFF_INITIAL_S
        self._retry_at: float | None = None

    def send(self, record: dict) -> bool:
        """Deliver one record; False when it was dropped (outage or rejection)."""
        now = time.monotonic()
        if self._retry_at is not None and now < self._retry_at:
            self.stats.dropped += 1
            return False
        try:
            response = requests.post(
                self.url,
                data=encode_record(record),
                headers={"Content-Type": "application/json"},
                timeout=self.timeout_s,
            )
        except requests.RequestException:
            self._enter_backoff(now)
            self.stats.dropped += 1
            return False

        if response.status_code == 204:
            self._backoff_s = BACKOFF_INITIAL_S
            self._retry_at = None
            self.stats.sent += 1
            return True
        if response.status_code == 503:
            # core up but loop not running: treat like an outage
            self._enter_backoff(now)
            self.stats.dropped += 1
            return False
        # 400 and friends: the frame is at fault, not the link
        self.stats.rejected += 1
        return False

    def _enter_backoff(self, now: float) -> None:
        if self._retry_at is None:
            self.stats.outages += 1
            self._backoff_s = BACKOFF_INITIAL_S
        else:
            self._backoff_s = min(self._backoff_s * 2.0, BACKOFF_MAX_S)
        self._retry_at = now + self._backoff_s


@dataclass
class CaptureConfig:
    source: str = "0"                # camera index or video-file path
    endpoint: str = "127.0.0.1:8089"
    fps: float = 25.0
    mirror: bool = False
    backend: str = "auto"
    mesh_indices: dict | None = None
    loop_video: bool = False
    max_frames: int | None = None

    def __post_init__(self) -> None:
        if self.fps <= 0:
            raise ValueError("target fps must be positive")


@dataclass
class CaptureSummary:
    captured: int = 0
    no_face: int = 0
    stats: SendStats = field(default_factory=SendStats)
    elapsed_s: float = 0.0

    @property
    def capture_fps(self) -> float:
        return self.captured / self.elapsed_s if self.elapsed_s > 0 else 0.0

    def one_liner(self) -> str:
        return (f"captured {self.captured} frames in {self.elapsed_s:.1f}s "
                f"({self.capture_fps:.1f} fps): sent {self.stats.sent}, "
                f"no-face {self.no_face}, dropped {self.stats.dropped} "
                f"in {self.stats.outages} outage(s), rejected {self.stats.rejected}")
