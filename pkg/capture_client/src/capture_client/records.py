"""Wire-format record construction.

The core ingests one JSON object per frame (see its README "Wire format"
section). This module builds those records from extracted landmarks; it owns
no networking and never imports the core package, the schema is the contract.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

#: classifier label -> wire label; keys are lower-cased before lookup.
#: Covers the usual emotion-classifier vocabularies (e.g. "happiness",
#: "angry", "surprised") on top of the wire's own seven names.
EMOTION_SYNONYMS = {
    "anger": "anger", "angry": "anger",
    "fear": "fear", "fearful": "fear", "scared": "fear",
    "neutral": "neutral", "neutrality": "neutral", "calm": "neutral",
    "sad": "sad", "sadness": "sad", "unhappy": "sad",
    "disgust": "disgust", "disgusted": "disgust",
    "happy": "happy", "happiness": "happy", "joy": "happy",
    "surprise": "surprise", "surprised": "surprise",
}

WIRE_EMOTIONS = frozenset(EMOTION_SYNONYMS.values())


def normalize_emotion(label: str | None) -> str | None:
    """Map a classifier label onto the seven wire names; None if unknown."""
    if not label:
        return None
    return EMOTION_SYNONYMS.get(label.strip().lower())


@dataclass(frozen=True, slots=True)
class EyePoints:
    """Inner/outer top/bottom eyelid points, normalized image coordinates."""

    it: tuple[float, float, float]
    ib: tuple[float, float, float]
    ot: tuple[float, float, float]
    ob: tuple[float, float, float]


@dataclass(frozen=True, slots=True)
class ExtractedFace:
    """One frame's landmarks in the wire's normalized coordinates."""

    left_eye: tuple[float, float, float]
    right_eye: tuple[float, float, float]
    nose: tuple[float, float, float]
    face_left: EyePoints
    face_right: EyePoints
    emotion: str | None = None

    def mirrored(self) -> "ExtractedFace":
        """Reflect horizontally (x -> 1-x) and swap the subject's eyes."""
        return ExtractedFace(
            left_eye=_flip(self.right_eye),
            right_eye=_flip(self.left_eye),
            nose=_flip(self.nose),
            face_left=_flip_eye(self.face_right),
            face_right=_flip_eye(self.face_left),
            emotion=self.emotion,
        )


def _flip(p: tuple[float, float, float]) -> tuple[float, float, float]:
    return (1.0 - p[0], p[1], p[2])


def _flip_eye(eye: EyePoints) -> EyePoints:
    return EyePoints(it=_flip(eye.it), ib=_flip(eye.ib),
                     ot=_flip(eye.ot), ob=_flip(eye.ob))


def build_record(face: ExtractedFace, seq: int, t_ms: int) -> dict:
    """Assemble the wire object for one frame."""
    record = {
        "t_ms": t_ms,
        "seq": seq,
        "pose": {
            "left_eye": list(face.left_eye),
            "right_eye": list(face.right_eye),
            "nose": list(face.nose),
        },
        "face": {
            "left": _eye_obj(face.face_left),
            "right": _eye_obj(face.face_right),
        },
    }
    if face.emotion is not None:
        record["emotion"] = face.emotion
    return record


def encode_record(record: dict) -> bytes:
    return json.dumps(record, separators=(",", ":")).encode("utf-8")


def _eye_obj(eye: EyePoints) -> dict:
    return {"it": list(eye.it), "ib": list(eye.ib),
            "ot": list(eye.ot), "ob": list(eye.ob)}


def validate_record(record: dict) -> None:
    """Local sanity check mirroring the core's schema (belt and braces).

    Raises ValueError on the first violation; streaming code calls this so a
    backend bug is caught before anything leaves the process.
    """
    for key in ("t_ms", "seq"):
        if not isinstance(record.get(key), int):
            raise ValueError(f"{key} must be an integer")
    for path in ("left_eye", "right_eye", "nose"):
        _check_vec(record["pose"].get(path), f"pose.{path}")
    for side in ("left", "right"):
        for corner in ("it", "ib", "ot", "ob"):
            _check_vec(record["face"][side].get(corner), f"face.{side}.{corner}")
    emotion = record.get("emotion")
    if emotion is not None and emotion not in WIRE_EMOTIONS:
        raise ValueError(f"emotion {emotion!r} is not a wire label")


def _check_vec(value, path: str) -> None:
    if (not isinstance(value, list) or len(value) != 3
            or not all(isinstance(v, (int, float)) and math.isfinite(v)
                       for v in value)):
        raise ValueError(f"{path} must be a finite [x, y, z] triple")
