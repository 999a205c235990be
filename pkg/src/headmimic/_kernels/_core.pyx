# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: minimal-rotation construction, rotation-vector Euler
extraction, RBF prediction, and the SMO pair-sweep of the epsilon-SVR dual.

Mirrors ``_pure.py`` branch for branch; keep the two in sync.
"""

from libc.math cimport acos, asin, atan2, cos, exp, fabs, sin, sqrt

BACKEND = "compiled"

cdef double _HALF_PI = 1.5707963267948966
cdef double _RAD2DEG = 57.29577951308232


def rotation_between(double fx, double fy, double fz,
                     double tx, double ty, double tz,
                     double eps_len, double eps_angle):
    """Minimal rotation carrying unit vector f onto unit vector t."""
    cdef double d = fx * tx + fy * ty + fz * tz
    cdef double angle, cx, cy, cz, cn, px, py, pn
    if d > 1.0:
        d = 1.0
    elif d < -1.0:
        d = -1.0
    angle = acos(d)
    if angle < eps_angle:
        return (0.0, 0.0, 0.0, 1.0)
    cx = fy * tz - fz * ty
    cy = fz * tx - fx * tz
    cz = fx * ty - fy * tx
    cn = sqrt(cx * cx + cy * cy + cz * cz)
    if cn < eps_len:
        if angle <= _HALF_PI:
            return (0.0, 0.0, 0.0, 1.0)
        px = fy
        py = -fx
        pn = sqrt(px * px + py * py)
        if pn < eps_len:
            return (angle, 0.0, 1.0, 0.0)
        return (angle, px / pn, py / pn, 0.0)
    return (angle, cx / cn, cy / cn, cz / cn)


def rotvec_to_ypr_deg(double rx, double ry, double rz,
                      double eps_angle, double gimbal_band_deg):
    """Rotation vector -> (yaw, pitch, roll) degrees; see the pure twin."""
    cdef double angle = sqrt(rx * rx + ry * ry + rz * rz)
    cdef double ax, ay, az, s, c, t
    cdef double r00, r01, r02, r10, r11, r12, r22
    cdef double sb, pitch, a, roll
    if angle < eps_angle:
        return (0.0, 0.0, 0.0)
    ax = rx / angle
    ay = ry / angle
    az = rz / angle
    s = sin(angle)
    c = cos(angle)
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
    pitch = asin(sb)
    if 90.0 - fabs(pitch * _RAD2DEG) > gimbal_band_deg:
        a = atan2(r02, r22)
        roll = atan2(r10, r11)
    else:
        roll = 0.0
        if sb > 0.0:
            a = atan2(r01, r00)
        else:
            a = atan2(-r01, r00)
    return (-a * _RAD2DEG, pitch * _RAD2DEG, roll * _RAD2DEG)


def rbf_predict(double x, double[::1] xs, double[::1] beta,
                double gamma, double bias):
    """Evaluate an RBF expansion sum_i beta_i * exp(-gamma*(x-xs_i)^2) + bias."""
    cdef double acc = 0.0
    cdef double d
    cdef Py_ssize_t i, n = xs.shape[0]
    for i in range(n):
        d = x - xs[i]
        acc += beta[i] * exp(-gamma * d * d)
    return acc + bias


cdef double _best_pair_step(double bi, double bj, double gi, double gj,
                            double kii, double kjj, double kij,
                            double c_box, double eps_tube) nogil:
    cdef double lo = -c_box - bi
    cdef double alt = bj - c_box
    cdef double hi, eta, g, best_d, best_gain, d, gain, si, sj
    cdef int ii, jj, nc
    cdef double cand[8]
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

    nc = 0
    cand[nc] = lo; nc += 1
    cand[nc] = hi; nc += 1
    d = -bi
    if lo < d < hi:
        cand[nc] = d; nc += 1
    d = bj
    if lo < d < hi:
        cand[nc] = d; nc += 1
    if eta > 0.0:
        for ii in range(2):
            si = -1.0 if ii == 0 else 1.0
            for jj in range(2):
                sj = -1.0 if jj == 0 else 1.0
                d = (g - eps_tube * si + eps_tube * sj) / eta
                if lo <= d <= hi and si * (bi + d) >= 0.0 and sj * (bj - d) >= 0.0:
                    cand[nc] = d; nc += 1

    best_d = 0.0
    best_gain = 0.0
    for ii in range(nc):
        d = cand[ii]
        gain = (-0.5 * eta * d * d + g * d
                - eps_tube * (fabs(bi + d) - fabs(bi))
                - eps_tube * (fabs(bj - d) - fabs(bj)))
        if gain > best_gain + 1e-15:
            best_gain = gain
            best_d = d
    return best_d


def smo_sweep(double[:, ::1] kmat, double[::1] y, double[::1] beta,
              double[::1] grad, double c_box, double eps_tube):
    """One deterministic pairwise SMO pass; see the pure twin for contract."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double max_step = 0.0
    cdef double delta, ad
    cdef long updates = 0
    for i in range(n):
        for j in range(i + 1, n):
            delta = _best_pair_step(
                beta[i], beta[j], grad[i], grad[j],
                kmat[i, i], kmat[j, j], kmat[i, j], c_box, eps_tube,
            )
            if delta == 0.0:
                continue
            beta[i] += delta
            beta[j] -= delta
            for k in range(n):
                grad[k] -= delta * (kmat[k, i] - kmat[j, k])
            updates += 1
            ad = fabs(delta)
            if ad > max_step:
                max_step = ad
    return (max_step, updates)
