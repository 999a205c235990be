#!/usr/bin/env python3
"""Regenerate the bundled marker-face test video.

A schematic face on a gray background: subject-left eye red, right eye
green, nose blue. The head drifts horizontally (a small yaw-like sweep) and
both eyes squash vertically for a few frames twice (blinks). Frames are
deterministic, so the committed video can always be rebuilt byte-comparably
modulo codec.

Usage: python make_test_video.py [out.avi] [frames]
"""

import math
import sys
from pathlib import Path

import cv2
import numpy as np

WIDTH, HEIGHT = 160, 120
FPS = 25.0


def draw_frame(index: int, frames: int) -> np.ndarray:
    img = np.full((HEIGHT, WIDTH, 3), 64, dtype=np.uint8)
    sweep = math.sin(2.0 * math.pi * index / frames)
    cx = int(WIDTH / 2 + 14 * sweep)
    cy = HEIGHT // 2

    blink = index % 40 in (20, 21, 22)  # 3-frame closure every 40 frames
    eye_h = 2 if blink else 7

    # subject's left eye sits at the larger x (unmirrored camera view)
    cv2.ellipse(img, (cx + 22, cy - 10), (7, eye_h), 0, 0, 360, (0, 0, 255), -1)
    cv2.ellipse(img, (cx - 22, cy - 10), (7, eye_h), 0, 0, 360, (0, 255, 0), -1)
    cv2.circle(img, (cx, cy + 12), 6, (255, 0, 0), -1)
    return img


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "face.avi"
    frames = int(sys.argv[2]) if len(sys.argv) > 2 else 120
    writer = cv2.VideoWriter(str(out), cv2.VideoWriter_fourcc(*"MJPG"),
                             FPS, (WIDTH, HEIGHT))
    if not writer.isOpened():
        print("could not open video writer", file=sys.stderr)
        return 1
    for i in range(frames):
        writer.write(draw_frame(i, frames))
    writer.release()
    print(f"wrote {frames} frames -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
