"""Landmark frame wire format.

One JSON object per frame, used identically as an HTTP POST body and as a
line of a replay file:

    {"t_ms": 0, "seq": 0,
     "pose": {"left_eye": [x,y,z], "right_eye": [x,y,z], "nose": [x,y,z]},
     "face": {"left":  {"it": [x,y,z], "ib": [...], "ot": [...], "ob": [...]},
              "right": {...}},
     "emotion": "happy"}        # optional

Coordinates are normalized image space (x right, y down, z depth
pass-through). "left"/"right" are the subject's left and right. Unknown
fields are ignored; the first missing or malformed required field is
reported by its dotted path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .blink import EyeLandmarks
from .emotion import EmotionLabel, UnknownEmotion
from .geometry import Vec3


class SchemaError(ValueError):
    """A frame record violated the wire schema; .field names the violation."""

    def __init__(self, field: str, message: str | None = None):
        self.field = field
        super().__init__(message or f"invalid or missing field: {field}")


@dataclass(frozen=True, slots=True)
class LandmarkFrame:
    """One timestamped landmark sample."""

    t_ms: int
    seq: int
    left_eye: Vec3
    right_eye: Vec3
    nose: Vec3
    face_left: EyeLandmarks
    face_right: EyeLandmarks
    emotion: EmotionLabel | None = None


def _get(obj: dict, path: str):
    node = obj
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            raise SchemaError(path)
        node = node[part]
    return node


def _vec(obj: dict, path: str) -> Vec3:
    raw = _get(obj, path)
    if (not isinstance(raw, (list, tuple)) or len(raw) != 3
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in raw)):
        raise SchemaError(path, f"{path} must be a [x, y, z] number triple")
    vec = Vec3(float(raw[0]), float(raw[1]), float(raw[2]))
    if not vec.is_finite():
        raise SchemaError(path, f"{path} contains non-finite coordinates")
    return vec


def _int(obj: dict, path: str) -> int:
    raw = _get(obj, path)
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise SchemaError(path, f"{path} must be an integer")
    return raw


def _eye(obj: dict, path: str) -> EyeLandmarks:
    return EyeLandmarks(
        it=_vec(obj, f"{path}.it"),
        ib=_vec(obj, f"{path}.ib"),
        ot=_vec(obj, f"{path}.ot"),
        ob=_vec(obj, f"{path}.ob"),
    )


def parse_frame_record(data: bytes | str | dict) -> LandmarkFrame:
    """Validate one wire record into a LandmarkFrame.

    Raises SchemaError naming the first violated field (dotted path).
    """
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError("<json>", f"record is not valid JSON: {exc}") from exc
    else:
        obj = data
    if not isinstance(obj, dict):
        raise SchemaError("<root>", "record must be a JSON object")

    t_ms = _int(obj, "t_ms")
    seq = _int(obj, "seq")
    left_eye = _vec(obj, "pose.left_eye")
    right_eye = _vec(obj, "pose.right_eye")
    nose = _vec(obj, "pose.nose")
    face_left = _eye(obj, "face.left")
    face_right = _eye(obj, "face.right")

    emotion = None
    if "emotion" in obj and obj["emotion"] is not None:
        raw = obj["emotion"]
        if not isinstance(raw, str):
            raise SchemaError("emotion", "emotion must be a string label")
        try:
            emotion = EmotionLabel.from_wire(raw)
        except UnknownEmotion as exc:
            raise SchemaError("emotion", str(exc)) from exc

    return LandmarkFrame(
        t_ms=t_ms, seq=seq,
        left_eye=left_eye, right_eye=right_eye, nose=nose,
        face_left=face_left, face_right=face_right,
        emotion=emotion,
    )


def serialize_frame_record(frame: LandmarkFrame) -> str:
    """Inverse of parse_frame_record; emits one compact JSON object."""
    obj: dict = {
        "t_ms": frame.t_ms,
        "seq": frame.seq,
        "pose": {
            "left_eye": frame.left_eye.as_list(),
            "right_eye": frame.right_eye.as_list(),
            "nose": frame.nose.as_list(),
        },
        "face": {
            "left": _eye_obj(frame.face_left),
            "right": _eye_obj(frame.face_right),
        },
    }
    if frame.emotion is not None:
        obj["emotion"] = frame.emotion.value
    return json.dumps(obj, separators=(",", ":"))


def _eye_obj(eye: EyeLandmarks) -> dict:
    return {"it": eye.it.as_list(), "ib": eye.ib.as_list(),
            "ot": eye.ot.as_list(), "ob": eye.ob.as_list()}
