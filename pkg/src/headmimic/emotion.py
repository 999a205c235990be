"""Majority-vote smoothing of per-frame emotion labels and response lookup.

Per-frame classifier labels are noisy, so the pipeline votes over the most
recent full window (10 frames by default) and only reacts when the winning
label changes. Each emotion maps to a rotating list of spoken responses.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

DEFAULT_WINDOW_SIZE = 10


class UnknownEmotion(ValueError):
    """A wire label outside the seven supported emotion names."""


class EmotionLabel(Enum):
    ANGER = "anger"
    FEAR = "fear"
    NEUTRAL = "neutral"
    SAD = "sad"
    DISGUST = "disgust"
    HAPPY = "happy"
    SURPRISE = "surprise"

    @classmethod
    def from_wire(cls, value: str) -> "EmotionLabel":
        try:
            return cls(value)
        except ValueError:
            raise UnknownEmotion(
                f"unknown emotion label {value!r}; expected one of "
                f"{sorted(m.value for m in cls)}"
            ) from None


@dataclass(slots=True)
class EmotionWindow:
    """Sliding vote window; emits a label only when the majority changes.

    Absent labels are skipped. Once the window holds window_size labels, each
    new label triggers a vote: the unique modal label is emitted iff it
    differs from the last emission; ties keep the previous emission.
    """

    window_size: int = DEFAULT_WINDOW_SIZE
    last_emitted: EmotionLabel = EmotionLabel.NEUTRAL
    _labels: deque = field(default_factory=deque)
    _counts: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.window_size < 1:
            raise ValueError("window size must be >= 1")

    def update(self, label: EmotionLabel | None) -> EmotionLabel | None:
        """Feed one frame's label (or None); return the newly emitted label, if any."""
        if label is None:
            return None
        self._labels.append(label)
        self._counts[label] = self._counts.get(label, 0) + 1
        if len(self._labels) > self.window_size:
            old = self._labels.popleft()
            self._counts[old] -= 1
        if len(self._labels) < self.window_size:
            return None
        winner = self._vote()
        if winner is not None and winner != self.last_emitted:
            self.last_emitted = winner
            return winner
        return None

    def _vote(self) -> EmotionLabel | None:
        """Unique modal label of the full window, or None on a tie."""
        best = None
        best_count = 0
        tied = False
        for label in EmotionLabel:
            count = self._counts.get(label, 0)
            if count > best_count:
                best = label
                best_count = count
                tied = False
            elif count == best_count and count > 0:
                tied = True
        return None if tied else best


@dataclass(slots=True)
class ResponseMap:
    """Per-emotion utterance lists with rotating selection."""

    utterances: dict[EmotionLabel, list[str]]
    _cursors: dict[EmotionLabel, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label in EmotionLabel:
            if not self.utterances.get(label):
                raise ValueError(f"no utterances configured for {label.value!r}")

    @classmethod
    def from_json_file(cls, path: str | Path) -> "ResponseMap":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("response map file must hold a JSON object")
        table: dict[EmotionLabel, list[str]] = {}
        for key, value in raw.items():
            label = EmotionLabel.from_wire(key)
            if not isinstance(value, list) or not all(isinstance(u, str) for u in value):
                raise ValueError(f"utterances for {key!r} must be an array of strings")
            table[label] = list(value)
        return cls(table)


def select_response(response_map: ResponseMap, emotion: EmotionLabel) -> str:
    """Next utterance for an emotion, rotating through its configured list."""
    if not isinstance(emotion, EmotionLabel):
        emotion = EmotionLabel.from_wire(emotion)
    options = response_map.utterances[emotion]
    cursor = response_map._cursors.get(emotion, 0)
    response_map._cursors[emotion] = (cursor + 1) % len(options)
    return options[cursor]
