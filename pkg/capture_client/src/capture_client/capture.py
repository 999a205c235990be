"""The capture loop: frames in, wire records out.

Opens a camera index or video file, paces itself to the target fps, extracts
landmarks per frame, and streams records to the core. Sequence numbers follow
the capture index, so skipped frames (no face, outage) leave gaps but the
sequence stays strictly increasing - the core requires that.
"""

from __future__ import annotations

import time

import cv2

from .extract import make_extractor
from .records import build_record, validate_record
from .stream import CaptureConfig, CaptureSummary, FrameSender


class SourceError(RuntimeError):
    """The camera or video source could not be opened."""


def open_source(source: str) -> cv2.VideoCapture:
    if source.isdigit():
        cap = cv2.VideoCapture(int(source))
    else:
        cap = cv2.VideoCapture(source)
    if not cap.isOpened():
        raise SourceError(f"cannot open capture source {source!r}")
    return cap


def capture_and_stream(config: CaptureConfig,
                       stop_check=None) -> CaptureSummary:
    """Run until the source ends, max_frames is hit, or stop_check() is true."""
    cap = open_source(config.source)
    extractor = make_extractor(config.backend, config.mesh_indices)
    sender = FrameSender(config.endpoint)
    summary = CaptureSummary(stats=sender.stats)

    frame_interval = 1.0 / config.fps
    started = time.monotonic()
    next_due = started
    seq = 0
    prev_t_ms = -1
    try:
        while True:  # Ctrl-C lands in the KeyboardInterrupt arm below
            if stop_check is not None and stop_check():
                break
            if config.max_frames is not None and seq >= config.max_frames:
                break
            got, frame = cap.read()
            if not got:
                if config.loop_video:
                    cap.set(cv2.CAP_PROP_POS_FRAMES, 0)
                    continue
                break

            face = extractor.extract(frame)
            summary.captured += 1
            if face is None:
                summary.no_face += 1
            else:
                if config.mirror:
                    face = face.mirrored()
                t_ms = max(int((time.monotonic() - started) * 1000.0),
                           prev_t_ms + 1)
                prev_t_ms = t_ms
                record = build_record(face, seq=seq, t_ms=t_ms)
                validate_record(record)
                sender.send(record)
            seq += 1

            next_due += frame_interval
            delay = next_due - time.monotonic()
            if delay > 0:
                time.sleep(delay)
            else:
                next_due = time.monotonic()  # running behind: don't burst
    except KeyboardInterrupt:
        pass
    finally:
        cap.release()
        summary.elapsed_s = time.monotonic() - started
    return summary
