"""Hot kernels for the validators: candidate segment-pair classification.

``classify_segment_pairs`` finds every pair of segments that certainly meet
away from shared endpoints (status 1) or that the floating-point filter cannot
decide (status 2).  Callers resolve status-2 pairs with the exact predicates in
:mod:`barymorph.predicates`.

Two interchangeable implementations exist: a numba sweep (default) and a
vectorized numpy sweep selected with ``BARYMORPH_DISABLE_NUMBA=1``.
"""
import numpy as np

from ._jit import USE_NUMBA, njit
from .predicates import ORIENT_ERRBOUND

CERTAIN = 1
UNSURE = 2


# --------------------------------------------------------------------- numba


@njit(cache=True, inline="always")
def _orient_nb(ax, ay, bx, by, cx, cy):
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = ORIENT_ERRBOUND * (abs(detleft) + abs(detright))
    if det > bound:
        return 1, True
    if -det > bound:
        return -1, True
    if det == 0.0 and bound == 0.0:
        return 0, True
    return 0, False


@njit(cache=True, inline="always")
def _between(p, q, r):
    return min(p, q) <= r <= max(p, q)


@njit(cache=True)
def _pair_status_nb(s, t, seg, ends):
    x1 = seg[s, 0]
    y1 = seg[s, 1]
    x2 = seg[s, 2]
    y2 = seg[s, 3]
    x3 = seg[t, 0]
    y3 = seg[t, 1]
    x4 = seg[t, 2]
    y4 = seg[t, 3]
    nshared = 0
    si = -1
    ti = -1
    for i in range(2):
        for j in range(2):
            if ends[s, i] == ends[t, j]:
                nshared += 1
                si = i
                ti = j
    if nshared >= 2:
        return CERTAIN
    if nshared == 1:
        if si == 0:
            cx, cy, ax, ay = x1, y1, x2, y2
        else:
            cx, cy, ax, ay = x2, y2, x1, y1
        if ti == 0:
            bx, by = x4, y4
        else:
            bx, by = x3, y3
        o, ok = _orient_nb(cx, cy, ax, ay, bx, by)
        if not ok:
            return UNSURE
        if o != 0:
            return 0
        t1 = (ax - cx) * (bx - cx)
        t2 = (ay - cy) * (by - cy)
        d = t1 + t2
        if abs(d) <= ORIENT_ERRBOUND * (abs(t1) + abs(t2)):
            return UNSURE
        return CERTAIN if d > 0 else 0
    o1, k1 = _orient_nb(x1, y1, x2, y2, x3, y3)
    o2, k2 = _orient_nb(x1, y1, x2, y2, x4, y4)
    o3, k3 = _orient_nb(x3, y3, x4, y4, x1, y1)
    o4, k4 = _orient_nb(x3, y3, x4, y4, x2, y2)
    if not (k1 and k2 and k3 and k4):
        return UNSURE
    if o1 * o2 < 0 and o3 * o4 < 0:
        return CERTAIN
    if o1 == 0 and _between(x1, x2, x3) and _between(y1, y2, y3):
        return CERTAIN
    if o2 == 0 and _between(x1, x2, x4) and _between(y1, y2, y4):
        return CERTAIN
    if o3 == 0 and _between(x3, x4, x1) and _between(y3, y4, y1):
        return CERTAIN
    if o4 == 0 and _between(x3, x4, x2) and _between(y3, y4, y2):
        return CERTAIN
    return 0


@njit(cache=True)
def _classify_nb(seg, ends, active):
    m = seg.shape[0]
    xmin = np.empty(m)
    xmax = np.empty(m)
    ymin = np.empty(m)
    ymax = np.empty(m)
    for i in range(m):
        xmin[i] = min(seg[i, 0], seg[i, 2])
        xmax[i] = max(seg[i, 0], seg[i, 2])
        ymin[i] = min(seg[i, 1], seg[i, 3])
        ymax[i] = max(seg[i, 1], seg[i, 3])
    order = np.argsort(xmin, kind="mergesort")
    cap = 16
    out = np.empty((cap, 3), dtype=np.int64)
    k = 0
    for a in range(m):
        s = order[a]
        for b in range(a + 1, m):
            t = order[b]
            if xmin[t] > xmax[s]:
                break
            if not (active[s] or active[t]):
                continue
            if ymin[t] > ymax[s] or ymin[s] > ymax[t]:
                continue
            st = _pair_status_nb(s, t, seg, ends)
            if st != 0:
                if k == cap:
                    cap *= 2
                    grown = np.empty((cap, 3), dtype=np.int64)
                    grown[:k] = out[:k]
                    out = grown
                out[k, 0] = min(s, t)
                out[k, 1] = max(s, t)
                out[k, 2] = st
                k += 1
    return out[:k]


# --------------------------------------------------------------------- numpy


def _orient_np(ax, ay, bx, by, cx, cy):
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = ORIENT_ERRBOUND * (np.abs(detleft) + np.abs(detright))
    sign = np.where(det > bound, 1, np.where(-det > bound, -1, 0))
    sure = (np.abs(det) > bound) | ((det == 0.0) & (bound == 0.0))
    return sign, sure


def _candidate_pairs_np(seg, active):
    xmin = np.minimum(seg[:, 0], seg[:, 2])
    xmax = np.maximum(seg[:, 0], seg[:, 2])
    ymin = np.minimum(seg[:, 1], seg[:, 3])
    ymax = np.maximum(seg[:, 1], seg[:, 3])
    order = np.argsort(xmin, kind="mergesort")
    xs = xmin[order]
    hi = np.searchsorted(xs, xmax[order], side="right")
    counts = np.maximum(hi - np.arange(len(order)) - 1, 0)
    a = np.repeat(np.arange(len(order)), counts)
    if a.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    starts = np.cumsum(counts) - counts
    b = np.arange(a.size) - np.repeat(starts, counts) + a + 1
    s = order[a]
    t = order[b]
    keep = (active[s] | active[t]) & (ymin[t] <= ymax[s]) & (ymin[s] <= ymax[t])
    s, t = s[keep], t[keep]
    return np.minimum(s, t), np.maximum(s, t)


def _classify_np(seg, ends, active):
    s, t = _candidate_pairs_np(seg, active)
    status = np.zeros(s.size, dtype=np.int64)
    if s.size == 0:
        return np.empty((0, 3), dtype=np.int64)
    P1, P2 = seg[s, :2], seg[s, 2:]
    Q1, Q2 = seg[t, :2], seg[t, 2:]
    eq = ends[s][:, :, None] == ends[t][:, None, :]  # (k, 2, 2)
    nshared = eq.sum(axis=(1, 2))
    status[nshared >= 2] = CERTAIN

    one = np.flatnonzero(nshared == 1)
    if one.size:
        flat = eq[one].reshape(-1, 4).argmax(axis=1)
        si, ti = flat // 2, flat % 2
        S1 = np.where((si == 0)[:, None], P1[one], P2[one])
        S2 = np.where((si == 0)[:, None], P2[one], P1[one])
        T2 = np.where((ti == 0)[:, None], Q2[one], Q1[one])
        o, sure = _orient_np(S1[:, 0], S1[:, 1], S2[:, 0], S2[:, 1], T2[:, 0], T2[:, 1])
        t1 = (S2[:, 0] - S1[:, 0]) * (T2[:, 0] - S1[:, 0])
        t2 = (S2[:, 1] - S1[:, 1]) * (T2[:, 1] - S1[:, 1])
        d = t1 + t2
        dsure = np.abs(d) > ORIENT_ERRBOUND * (np.abs(t1) + np.abs(t2))
        st = np.where(~sure, UNSURE, np.where(o != 0, 0, np.where(~dsure, UNSURE, np.where(d > 0, CERTAIN, 0))))
        status[one] = st

    none = np.flatnonzero(nshared == 0)
    if none.size:
        p1, p2, q1, q2 = P1[none], P2[none], Q1[none], Q2[none]
        o1, k1 = _orient_np(p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1], q1[:, 0], q1[:, 1])
        o2, k2 = _orient_np(p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1], q2[:, 0], q2[:, 1])
        o3, k3 = _orient_np(q1[:, 0], q1[:, 1], q2[:, 0], q2[:, 1], p1[:, 0], p1[:, 1])
        o4, k4 = _orient_np(q1[:, 0], q1[:, 1], q2[:, 0], q2[:, 1], p2[:, 0], p2[:, 1])

        def within(a, b, r):
            lo = np.minimum(a, b)
            hi = np.maximum(a, b)
            return ((lo[:, 0] <= r[:, 0]) & (r[:, 0] <= hi[:, 0]) & (lo[:, 1] <= r[:, 1]) & (r[:, 1] <= hi[:, 1]))

        hit = (o1 * o2 < 0) & (o3 * o4 < 0)
        hit |= (o1 == 0) & within(p1, p2, q1)
        hit |= (o2 == 0) & within(p1, p2, q2)
        hit |= (o3 == 0) & within(q1, q2, p1)
        hit |= (o4 == 0) & within(q1, q2, p2)
        sure = k1 & k2 & k3 & k4
        status[none] = np.where(~sure, UNSURE, np.where(hit, CERTAIN, 0))

    keep = status != 0
    return np.stack([s[keep], t[keep], status[keep]], axis=1).astype(np.int64)


def classify_segment_pairs(seg, ends, active=None, *, use_numba=None):
    """Return an ``(k, 3)`` int array of ``(i, j, status)`` rows with ``i < j``.

    ``seg`` has shape ``(m, 4)`` holding ``x1, y1, x2, y2``; ``ends`` has shape
    ``(m, 2)`` holding endpoint vertex ids, used to recognise shared endpoints.
    Only pairs with at least one ``active`` segment are examined.
    """
    seg = np.ascontiguousarray(seg, dtype=np.float64)
    ends = np.ascontiguousarray(ends, dtype=np.int64)
    if active is None:
        active = np.ones(len(seg), dtype=np.bool_)
    active = np.ascontiguousarray(active, dtype=np.bool_)
    if use_numba is None:
        use_numba = USE_NUMBA
    if len(seg) < 2:
        return np.empty((0, 3), dtype=np.int64)
    if use_numba:
        return _classify_nb(seg, ends, active)
    return _classify_np(seg, ends, active)
