"""Pure-Python twin of the compiled kernel module.

Implements the numeric hot paths (minimal-rotation construction, rotation
vector to Euler extraction, RBF prediction, and one SMO pair-sweep of the
epsilon-SVR dual) with exactly the same signatures and branch structure as
``_core.pyx`` so either backend can be selected at import time.
"""

import math

BACKEND = "pure"

_HALF_PI = math.pi / 2.0


def rotation_between(fx, fy, fz, tx, ty, tz, eps_len, eps_angle):
    """Minimal rotation carrying unit vector f onto unit vector t.

    Returns (angle_rad, axis_x, axis_y, axis_z). Near-identity collapses to
    the canonical zero rotation about (0, 0, 1); antiparallel inputs fall
    back to a deterministic axis perpendicular to f.
    """
    d = fx * tx + fy * ty + fz * tz
    if d > 1.0:
        d = 1.0
    elif d < -1.0:
        d = -1.0
    angle = math.acos(d)
    if angle < eps_angle:
        return (0.0, 0.0, 0.0, 1.0)
    cx = fy * tz - fz * ty
    cy = fz * tx - fx * tz
    cz = fx * ty - fy * tx
    cn = math.sqrt(cx * cx + cy * cy + cz * cz)
    if cn < eps_len:
        if angle <= _HALF_PI:
            # numerically parallel but not caught by the angle test
            return (0.0, 0.0, 0.0, 1.0)
        # antiparallel: any unit axis perpendicular to f is valid; use
        # f x (0,0,1), falling back to (0,1,0) when f is along z itself
        px = fy
        py = -fx
        pn = math.sqrt(px * px + py * py)
        if pn < eps_len:
            return (angle, 0.0, 1.0, 0.0)
        return (angle, px / pn, py / pn, 0.0)
    return (angle, cx / cn, cy / cn, cz / cn)


def rotvec_to_ypr_deg(rx, ry, rz, eps_angle, gimbal_band_deg):
    """Rotation vector -> (yaw, pitch, roll) in degrees.

    Builds the rotation matrix by the axis-angle closed form and extracts
    intrinsic angles in the order vertical-axis, horizontal-axis, depth-axis.
    Yaw is reported about the *up* direction (-y in image coordinates), so a
    leftward head turn is positive. Inside the gimbal band (|pitch| within
    gimbal_band_deg of 90) roll is fixed at zero and the free angle is
    absorbed into yaw.
    """
    angle = math.sqrt(rx * rx + ry * ry + rz * rz)
    if angle < eps_angle:
        return (0.0, 0.0, 0.0)
    ax = rx / angle
    ay = ry / angle
    az = rz / angle
    s = math.sin(angle)
    c = math.cos(angle)
    t = 1.0 - c

    r00 = c + t * ax * ax
    r01 = t * ax * ay - s * az
    r02 = t * ax * az + s * ay
    r10 = t * ax * ay + s * az
    r11 = c + t * ay * ay
    r12 = t * ay * az - s * ax
    r22 = c + t * az * az

    sb = -r12
    if sb > 1.0:
        sb = 1.0
    elif sb < -1.0:
        sb = -1.0
    pitch = math.asin(sb)
    if 90.0 - abs(math.degrees(pitch)) > gimbal_band_deg:
        a = math.atan2(r02, r22)
        roll = math.atan2(r10, r11)
    else:
        roll = 0.0
        if sb > 0.0:
            a = math.atan2(r01, r00)
        else:
            a = math.atan2(-r01, r00)
    return (-math.degrees(a), math.degrees(pitch), math.degrees(roll))


def rbf_predict(x, xs, beta, gamma, bias):
    """Evaluate an RBF expansion sum_i beta_i * exp(-gamma*(x-xs_i)^2) + bias."""
    acc = 0.0
    for i in range(len(xs)):
        d = x - xs[i]
        acc += beta[i] * math.exp(-gamma * d * d)
    return acc + bias


def smo_sweep(kmat, y, beta, grad, c_box, eps_tube):
    """One deterministic pass of pairwise SMO over the epsilon-SVR dual.

    kmat is the full kernel Gram matrix (list of rows), beta the dual
    coefficients in [-c_box, c_box] summing to zero, grad[i] = y[i] -
    (K beta)[i] maintained incrementally. Visits every pair (i, j), i < j,
    in lexicographic order and applies the exact best step for that pair.
    Returns (max_abs_step, pair_updates) and mutates beta/grad in place.
    """
    n = len(y)
    max_step = 0.0
    updates = 0
    for i in range(n):
        ki = kmat[i]
        for j in range(i + 1, n):
            delta = _best_pair_step(
                beta[i], beta[j], grad[i], grad[j],
                ki[i], kmat[j][j], ki[j], c_box, eps_tube,
            )
            if delta == 0.0:
                continue
            beta[i] += delta
            beta[j] -= delta
            kj = kmat[j]
            for k in range(n):
                grad[k] -= delta * (kmat[k][i] - kj[k])
            updates += 1
            ad = abs(delta)
            if ad > max_step:
                max_step = ad
    return (max_step, updates)


def _best_pair_step(bi, bj, gi, gj, kii, kjj, kij, c_box, eps_tube):
    """Exact maximizer of the pair objective for the step (bi+d, bj-d).

    The gain is a concave piecewise quadratic in d:
        -0.5*eta*d^2 + (gi-gj)*d - eps*(|bi+d| - |bi|) - eps*(|bj-d| - |bj|)
    with breakpoints where bi+d or bj-d changes sign, boxed so both updated
    coefficients stay in [-c_box, c_box].
    """
    lo = -c_box - bi
    alt = bj - c_box
    if alt > lo:
        lo = alt
    hi = c_box - bi
    alt = bj + c_box
    if alt < hi:
        hi = alt
    if hi <= lo:
        return 0.0

    eta = kii + kjj - 2.0 * kij
    g = gi - gj

    candidates = [lo, hi]
    b1 = -bi
    if lo < b1 < hi:
        candidates.append(b1)
    b2 = bj
    if lo < b2 < hi:
        candidates.append(b2)
    if eta > 0.0:
        for si in (-1.0, 1.0):
            for sj in (-1.0, 1.0):
                d = (g - eps_tube * si + eps_tube * sj) / eta
                if lo <= d <= hi and si * (bi + d) >= 0.0 and sj * (bj - d) >= 0.0:
                    candidates.append(d)

    best_d = 0.0
    best_gain = 0.0
    for d in candidates:
        gain = (
            -0.5 * eta * d * d
            + g * d
            - eps_tube * (abs(bi + d) - abs(bi))
            - eps_tube * (abs(bj - d) - abs(bj))
        )
        if gain > best_gain + 1e-15:
            best_gain = gain
            best_d = d
    return best_d
