import random

import pytest

from headmimic.emotion import (EmotionLabel, EmotionWindow, ResponseMap,
                               UnknownEmotion, select_response)
from headmimic.config import packaged_data_path

from oracles import mode_with_ties

LABELS = list(EmotionLabel)
HAPPY, SAD, NEUTRAL = EmotionLabel.HAPPY, EmotionLabel.SAD, EmotionLabel.NEUTRAL


def feed(window, labels):
    emissions = []
    for label in labels:
        out = window.update(label)
        if out is not None:
            emissions.append(out)
    return emissions


def test_majority_emits_mode():
    window = EmotionWindow()
    emissions = feed(window, [HAPPY] * 6 + [SAD] * 4)
    assert emissions == [HAPPY]
    assert window.last_emitted is HAPPY


def test_tie_keeps_previous_emission():
    window = EmotionWindow()
    emissions = feed(window, [HAPPY] * 5 + [SAD] * 5)
    assert emissions == []
    assert window.last_emitted is NEUTRAL
    winner, tied = mode_with_ties([HAPPY] * 5 + [SAD] * 5)
    assert tied  # the oracle agrees this window is a tie


def test_no_emission_before_window_full():
    window = EmotionWindow()
    assert feed(window, [HAPPY] * 9) == []
    assert window.update(HAPPY) is HAPPY


def test_absent_labels_are_skipped():
    window = EmotionWindow()
    labels = [HAPPY, None, HAPPY, None, HAPPY, HAPPY, HAPPY,
              HAPPY, HAPPY, HAPPY, HAPPY, HAPPY]
    assert feed(window, labels) == [HAPPY]


def test_no_repeat_emission_for_stable_mode():
    window = EmotionWindow()
    emissions = feed(window, [HAPPY] * 30)
    assert emissions == [HAPPY]


def test_streaming_matches_brute_force_oracle():
    rng = random.Random(42)
    window = EmotionWindow()
    recent: list[EmotionLabel] = []
    last = NEUTRAL
    for step in range(5000):
        label = rng.choice(LABELS)
        recent.append(label)
        if len(recent) > window.window_size:
            recent.pop(0)
        emitted = window.update(label)
        if len(recent) == window.window_size:
            winner, tied = mode_with_ties(recent)
            expect = None if tied or winner == last else winner
            assert emitted == expect, f"step {step}"
            if expect is not None:
                last = expect
        else:
            assert emitted is None


def test_window_size_validation():
    with pytest.raises(ValueError):
        EmotionWindow(window_size=0)


# --- responses -----------------------------------------------------------------

def small_map():
    table = {label: [f"{label.value}-only"] for label in EmotionLabel}
    table[HAPPY] = ["u1", "u2"]
    return ResponseMap(table)


def test_singleton_response_repeats():
    rmap = small_map()
    assert select_response(rmap, SAD) == "sad-only"
    assert select_response(rmap, SAD) == "sad-only"


def test_rotation_and_cycle_period():
    rmap = small_map()
    got = [select_response(rmap, HAPPY) for _ in range(6)]
    assert got == ["u1", "u2", "u1", "u2", "u1", "u2"]


def test_unknown_wire_label_rejected():
    with pytest.raises(UnknownEmotion):
        EmotionLabel.from_wire("bored")
    with pytest.raises(UnknownEmotion):
        select_response(small_map(), "bored")


def test_response_map_requires_every_emotion():
    table = {label: ["x"] for label in EmotionLabel}
    del table[EmotionLabel.FEAR]
    with pytest.raises(ValueError, match="fear"):
        ResponseMap(table)
    table[EmotionLabel.FEAR] = []
    with pytest.raises(ValueError, match="fear"):
        ResponseMap(table)


def test_shipped_responses_file_is_valid():
    rmap = ResponseMap.from_json_file(packaged_data_path("responses.json"))
    for label in EmotionLabel:
        assert select_response(rmap, label)
