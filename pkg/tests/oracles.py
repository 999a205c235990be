"""Independent reference implementations the tests check the package against.

Everything here is deliberately written from scratch (numpy matrix algebra,
brute-force counting) and never calls into the code under test.
"""

import math
from collections import Counter

import numpy as np

UP_AXIS = (0.0, -1.0, 0.0)      # image y grows downward, so "up" is -y
HORIZONTAL_AXIS = (1.0, 0.0, 0.0)
DEPTH_AXIS = (0.0, 0.0, 1.0)


def rotation_matrix(axis, angle_deg):
    """Rodrigues rotation matrix about a unit axis."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    th = math.radians(angle_deg)
    k = np.array([
        [0.0, -a[2], a[1]],
        [a[2], 0.0, -a[0]],
        [-a[1], a[0], 0.0],
    ])
    return np.eye(3) + math.sin(th) * k + (1.0 - math.cos(th)) * (k @ k)


def rotate_points(points, axis, angle_deg, pivot):
    """Rotate an iterable of 3-tuples about a pivot point."""
    rot = rotation_matrix(axis, angle_deg)
    pv = np.asarray(pivot, dtype=float)
    return [tuple(pv + rot @ (np.asarray(p, dtype=float) - pv)) for p in points]


def compose_yaw_pitch(yaw_deg, pitch_deg):
    """Head rotation matrix: yaw about the up axis, then pitch about +x."""
    return rotation_matrix(UP_AXIS, yaw_deg) @ rotation_matrix(HORIZONTAL_AXIS, pitch_deg)


def matrix_to_rotvec(rot):
    """Rotation matrix -> rotation vector (standard trace/skew extraction)."""
    rot = np.asarray(rot, dtype=float)
    cos_th = (np.trace(rot) - 1.0) / 2.0
    cos_th = min(1.0, max(-1.0, cos_th))
    th = math.acos(cos_th)
    if th < 1e-12:
        return np.zeros(3)
    if abs(math.pi - th) < 1e-6:
        # axis from the symmetric part; pick the largest diagonal entry
        b = (rot + np.eye(3)) / 2.0
        axis = np.sqrt(np.clip(np.diag(b), 0.0, None))
        k = int(np.argmax(axis))
        axis = b[:, k] / axis[k]
        return th * axis / np.linalg.norm(axis)
    axis = np.array([
        rot[2, 1] - rot[1, 2],
        rot[0, 2] - rot[2, 0],
        rot[1, 0] - rot[0, 1],
    ]) / (2.0 * math.sin(th))
    return th * axis


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def mode_with_ties(labels):
    """(winner, tied): the modal label and whether the top count is shared."""
    counts = Counter(labels)
    ranked = counts.most_common()
    if not ranked:
        return None, False
    top = ranked[0][1]
    tied = sum(1 for _, c in ranked if c == top) > 1
    return ranked[0][0], tied


def count_runs_at_least(flags, min_len):
    """Number of maximal True runs of length >= min_len."""
    total = 0
    run = 0
    for f in flags:
        if f:
            run += 1
        else:
            if run >= min_len:
                total += 1
            run = 0
    if run >= min_len:
        total += 1
    return total


def r_squared_by_hand(human, robot):
    human = list(human)
    robot = list(robot)
    mean = sum(human) / len(human)
    ss_tot = sum((h - mean) ** 2 for h in human)
    ss_res = sum((r - h) ** 2 for h, r in zip(human, robot))
    return 1.0 - ss_res / ss_tot
