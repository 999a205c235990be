"""Landmark capture client for the head-imitation core.

Reads a webcam or video file, extracts eye/nose landmarks and eyelid points
(plus a best-effort emotion label), and streams wire-format frame records to
the core's ingest endpoint with outage-tolerant delivery.
"""

from .capture import SourceError, capture_and_stream, open_source
from .extract import MarkerExtractor, make_extractor
from .records import (ExtractedFace, EyePoints, build_record,
                      normalize_emotion, validate_record)
from .stream import CaptureConfig, CaptureSummary, FrameSender

__version__ = "0.1.0"

__all__ = [
    "CaptureConfig",
    "CaptureSummary",
    "ExtractedFace",
    "EyePoints",
    "FrameSender",
    "MarkerExtractor",
    "SourceError",
    "build_record",
    "capture_and_stream",
    "make_extractor",
    "normalize_emotion",
    "open_source",
    "validate_record",
    "__version__",
]
