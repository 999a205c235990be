"""Landmark extraction backends.

Two ways to turn a BGR frame into wire landmarks:

* ``MediaPipeExtractor`` - the real perception path, using the face-mesh
  model. Import-guarded: it only exists when the mediapipe package is
  installed. Mesh indices for the eyelid points are configuration, not
  constants, because mesh topologies differ across model versions.
* ``MarkerExtractor`` - deterministic color-fiducial detection for synthetic
  footage (the bundled test video paints the eyes red/green and the nose
  blue). Eyelid points are derived from each eye blob's bounding box, so a
  vertically squashed marker reads as a closed eye.

``make_extractor("auto")`` prefers mediapipe and falls back to markers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .records import ExtractedFace, EyePoints, normalize_emotion

# default face-mesh indices (mediapipe canonical topology): eye centers,
# nose tip, and the eyelid points bracketing each eye's inner/outer sections
DEFAULT_MESH_INDICES = {
    "left_eye": 468,   # left iris center (refined landmarks)
    "right_eye": 473,  # right iris center
    "nose": 1,
    "left": {"it": 385, "ib": 380, "ot": 387, "ob": 373},
    "right": {"it": 160, "ib": 144, "ot": 158, "ob": 153},
}


class MarkerExtractor:
    """Finds pure-red/green/blue fiducials and maps them to landmarks.

    Subject's left eye = red, right eye = green, nose = blue (BGR video).
    The eye blob's bounding-box height is the inner eyelid gap and 0.8 of
    its width the outer gap: a round open marker gives a ratio of ~0.8,
    squashing it below ~0.45 of its width drives the ratio past the core's
    default 1.8 closed threshold.
    """

    #: (channel_index, ) dominant channel per marker in BGR order
    _CHANNELS = {"left_eye": 2, "right_eye": 1, "nose": 0}

    def __init__(self, dominant_min: int = 160, other_max: int = 110,
                 min_pixels: int = 12):
        self.dominant_min = dominant_min
        self.other_max = other_max
        self.min_pixels = min_pixels

    def extract(self, frame_bgr: np.ndarray) -> ExtractedFace | None:
        h, w = frame_bgr.shape[:2]
        blobs = {}
        for name, channel in self._CHANNELS.items():
            blob = self._find_blob(frame_bgr, channel)
            if blob is None:
                return None
            blobs[name] = blob

        (lx, ly, lw_, lh), (rx, ry, rw_, rh), (nx, ny, _, _) = (
            blobs["left_eye"], blobs["right_eye"], blobs["nose"])

        def norm(x, y):
            return (x / w, y / h, 0.0)

        face_left = self._eye_points(lx, ly, lw_, lh, nose_x=nx, w=w, h=h)
        face_right = self._eye_points(rx, ry, rw_, rh, nose_x=nx, w=w, h=h)
        return ExtractedFace(
            left_eye=norm(lx, ly),
            right_eye=norm(rx, ry),
            nose=norm(nx, ny),
            face_left=face_left,
            face_right=face_right,
        )

    def _find_blob(self, frame: np.ndarray, channel: int):
        """Centroid and bbox size of the dominant-channel blob, in pixels."""
        dominant = frame[:, :, channel].astype(np.int16)
        others = [frame[:, :, c].astype(np.int16) for c in range(3) if c != channel]
        mask = ((dominant >= self.dominant_min)
                & (others[0] <= self.other_max)
                & (others[1] <= self.other_max))
        ys, xs = np.nonzero(mask)
        if len(xs) < self.min_pixels:
            return None
        cx = float(xs.mean())
        cy = float(ys.mean())
        bw = float(xs.max() - xs.min() + 1)
        bh = float(ys.max() - ys.min() + 1)
        return cx, cy, bw, bh

    def _eye_points(self, ex, ey, bw, bh, nose_x, w, h) -> EyePoints:
        inner_sign = 1.0 if nose_x > ex else -1.0  # inner corner faces the nose
        inner_x = (ex + inner_sign * 0.4 * bw) / w
        outer_x = (ex - inner_sign * 0.4 * bw) / w
        inner_half = bh / 2.0 / h
        outer_half = 0.4 * bw / h
        ey_n = ey / h
        return EyePoints(
            it=(inner_x, ey_n - inner_half, 0.0),
            ib=(inner_x, ey_n + inner_half, 0.0),
            ot=(outer_x, ey_n - outer_half, 0.0),
            ob=(outer_x, ey_n + outer_half, 0.0),
        )


@dataclass
class MediaPipeExtractor:
    """Face-mesh backed extraction; requires the mediapipe package."""

    mesh_indices: dict = field(default_factory=lambda: dict(DEFAULT_MESH_INDICES))
    max_faces: int = 1

    def __post_init__(self):
        import mediapipe as mp  # deferred: optional dependency

        self._mp = mp
        self._mesh = mp.solutions.face_mesh.FaceMesh(
            max_num_faces=self.max_faces,
            refine_landmarks=True,
            min_detection_confidence=0.5,
        )
        self._classifier = _load_emotion_classifier()

    def extract(self, frame_bgr: np.ndarray) -> ExtractedFace | None:
        rgb = frame_bgr[:, :, ::-1]
        result = self._mesh.process(rgb)
        if not result.multi_face_landmarks:
            return None
        pts = result.multi_face_landmarks[0].landmark
        idx = self.mesh_indices

        def at(i):
            return (pts[i].x, pts[i].y, pts[i].z)

        def eye(side):
            m = idx[side]
            return EyePoints(it=at(m["it"]), ib=at(m["ib"]),
                             ot=at(m["ot"]), ob=at(m["ob"]))

        emotion = None
        if self._classifier is not None:
            emotion = normalize_emotion(self._classifier(frame_bgr))
        return ExtractedFace(
            left_eye=at(idx["left_eye"]),
            right_eye=at(idx["right_eye"]),
            nose=at(idx["nose"]),
            face_left=eye("left"),
            face_right=eye("right"),
            emotion=emotion,
        )


def _load_emotion_classifier():
    """Best-effort per-frame emotion labeler; None when deepface is absent."""
    try:
        from deepface import DeepFace
    except ImportError:
        return None

    def classify(frame_bgr):
        try:
            out = DeepFace.analyze(frame_bgr, actions=["emotion"],
                                   enforce_detection=False, silent=True)
            if isinstance(out, list):
                out = out[0]
            return out.get("dominant_emotion")
        except Exception:
            return None

    return classify


def make_extractor(backend: str = "auto", mesh_indices: dict | None = None):
    """Instantiate an extraction backend by name."""
    if backend == "markers":
        return MarkerExtractor()
    if backend == "mediapipe":
        return MediaPipeExtractor(mesh_indices or dict(DEFAULT_MESH_INDICES))
    if backend == "auto":
        try:
            return MediaPipeExtractor(mesh_indices or dict(DEFAULT_MESH_INDICES))
        except ImportError:
            return MarkerExtractor()
    raise ValueError(f"unknown extractor backend {backend!r}")
