"""CLI: `capture-client capture --source 0 --endpoint 127.0.0.1:8089 --fps 25`."""

from __future__ import annotations

import argparse
import sys

from .capture import SourceError, capture_and_stream
from .stream import CaptureConfig


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capture-client",
        description="Stream facial landmarks from a camera or video file "
                    "to a head-imitation core",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("capture", help="capture and stream frames")
    p.add_argument("--source", default="0",
                   help="camera index (e.g. 0) or video file path")
    p.add_argument("--endpoint", default="127.0.0.1:8089",
                   help="core ingest address (host:port or full URL)")
    p.add_argument("--fps", type=float, default=25.0, help="target frame rate")
    p.add_argument("--mirror", action="store_true",
                   help="reflect x coordinates and swap eyes")
    p.add_argument("--backend", default="auto",
                   choices=["auto", "mediapipe", "markers"],
                   help="landmark extraction backend")
    p.add_argument("--max-frames", type=int, default=None,
                   help="stop after this many captured frames")
    p.add_argument("--loop", action="store_true",
                   help="loop a video-file source instead of stopping at EOF")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    config = CaptureConfig(
        source=args.source,
        endpoint=args.endpoint,
        fps=args.fps,
        mirror=args.mirror,
        backend=args.backend,
        loop_video=args.loop,
        max_frames=args.max_frames,
    )
    try:
        summary = capture_and_stream(config)
    except SourceError as exc:
        print(f"capture-client: {exc}", file=sys.stderr)
        return 2
    print(summary.one_liner(), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
