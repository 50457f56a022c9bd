"""Hot inner loops.

Every kernel exists twice: a scalar loop version compiled with numba and a
vectorized numpy version. The public names at the bottom of the module point
at one or the other depending on :data:`profquad._accel.USE_NUMBA`. Both
paths are importable directly so tests and benchmarks can compare them.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit


# --------------------------------------------------------------------------
# loop kernels (numba source)


def _loop_rule_sums(fv, wk, wg):
    # Neumaier-compensated sums over reduced weights; returns unscaled
    # (sum wk f, sum wg f, sum wk |f|, sum wk |f - fbar|)
    s = 0.0
    c = 0.0
    sg = 0.0
    cg = 0.0
    sa = 0.0
    ca = 0.0
    for i in range(fv.shape[0]):
        t = wk[i] * fv[i]
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u

        t = wg[i] * fv[i]
        u = sg + t
        if abs(sg) >= abs(t):
            cg += (sg - u) + t
        else:
            cg += (t - u) + sg
        sg = u

        t = wk[i] * abs(fv[i])
        u = sa + t
        if abs(sa) >= abs(t):
            ca += (sa - u) + t
        else:
            ca += (t - u) + sa
        sa = u
    s += c
    sg += cg
    sa += ca

    fbar = s * 0.5
    sd = 0.0
    cd = 0.0
    for i in range(fv.shape[0]):
        t = wk[i] * abs(fv[i] - fbar)
        u = sd + t
        if abs(sd) >= abs(t):
            cd += (sd - u) + t
        else:
            cd += (t - u) + sd
        sd = u
    return s, sg, sa, sd + cd


def _loop_extrema(v):
    n = v.shape[0]
    out = np.empty(max(n - 2, 0), dtype=np.int64)
    m = 0
    prev = 0
    for i in range(n - 1):
        d = v[i + 1] - v[i]
        if d > 0.0:
            cur = 1
        elif d < 0.0:
            cur = -1
        else:
            cur = prev
        if i > 0 and prev != 0 and cur != prev:
            out[m] = i
            m += 1
        prev = cur
    return out[:m]


def _loop_crossings(v, level):
    count = 0
    prev = 0
    for i in range(v.shape[0]):
        d = v[i] - level
        if d > 0.0:
            s = 1
        elif d < 0.0:
            s = -1
        else:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def _loop_divided_differences(x, v):
    n = x.shape[0]
    out = np.empty(n - 1)
    for i in range(n - 1):
        out[i] = (v[i + 1] - v[i]) / (x[i + 1] - x[i])
    return out


# --------------------------------------------------------------------------
# numpy kernels


def _np_rule_sums(fv, wk, wg):
    s = math.fsum(wk * fv)
    sg = math.fsum(wg * fv)
    sa = math.fsum(wk * np.abs(fv))
    sd = math.fsum(wk * np.abs(fv - s * 0.5))
    return s, sg, sa, sd


def _np_extrema(v):
    v = np.asarray(v, dtype=float)
    if v.shape[0] < 3:
        return np.empty(0, dtype=np.int64)
    step = np.sign(np.diff(v)).astype(np.int64)
    # forward-fill zero steps with the previous direction
    idx = np.where(step != 0, np.arange(step.shape[0]), 0)
    np.maximum.accumulate(idx, out=idx)
    filled = step[idx]
    turn = (filled[:-1] != 0) & (filled[1:] != filled[:-1])
    return (np.flatnonzero(turn) + 1).astype(np.int64)


def _np_crossings(v, level):
    s = np.sign(np.asarray(v, dtype=float) - level)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _np_divided_differences(x, v):
    return np.diff(v) / np.diff(x)


# --------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    rule_sums = njit(_loop_rule_sums)
    extrema = njit(_loop_extrema)
    crossings = njit(_loop_crossings)
    divided_differences = njit(_loop_divided_differences)
else:
    rule_sums = _np_rule_sums
    extrema = _np_extrema
    crossings = _np_crossings
    divided_differences = _np_divided_differences

BACKEND = "numba" if USE_NUMBA else "numpy"
