"""Orientation predicates that are exact on double-precision input.

The fast path is a floating-point evaluation with a static forward error
bound; anything the filter cannot certify is re-evaluated with
:class:`fractions.Fraction`, which represents every finite double exactly.
"""
from fractions import Fraction

import numpy as np

EPS = np.finfo(np.float64).eps / 2.0
# Shewchuk's ccwerrboundA; covers rounding of the coordinate differences too.
ORIENT_ERRBOUND = (3.0 + 16.0 * EPS) * EPS


def orient_exact(a, b, c):
    """Sign of ``cross(b - a, c - a)`` computed in rational arithmetic."""
    ax, ay = Fraction(float(a[0])), Fraction(float(a[1]))
    bx, by = Fraction(float(b[0])), Fraction(float(b[1]))
    cx, cy = Fraction(float(c[0])), Fraction(float(c[1]))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def dot_sign_exact(o, a, b):
    """Sign of ``dot(a - o, b - o)`` in rational arithmetic."""
    ox, oy = Fraction(float(o[0])), Fraction(float(o[1]))
    v = (Fraction(float(a[0])) - ox) * (Fraction(float(b[0])) - ox) + (
        Fraction(float(a[1])) - oy
    ) * (Fraction(float(b[1])) - oy)
    return (v > 0) - (v < 0)


def orient(a, b, c):
    """Exact sign of the orientation of the triangle ``a, b, c``.

    Returns +1 for a counterclockwise turn, -1 for clockwise, 0 if collinear.
    """
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    if abs(det) > ORIENT_ERRBOUND * (abs(detleft) + abs(detright)):
        return 1 if det > 0 else -1
    return orient_exact(a, b, c)


def orient_many(a, b, c):
    """Vectorized exact orientation signs for arrays of points of shape (m, 2)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    detleft = (a[:, 0] - c[:, 0]) * (b[:, 1] - c[:, 1])
    detright = (a[:, 1] - c[:, 1]) * (b[:, 0] - c[:, 0])
    det = detleft - detright
    sign = np.sign(det).astype(np.int64)
    unsure = np.abs(det) <= ORIENT_ERRBOUND * (np.abs(detleft) + np.abs(detright))
    for i in np.flatnonzero(unsure):
        sign[i] = orient_exact(a[i], b[i], c[i])
    return sign


def _on_closed_segment(p, q, r):
    # r collinear with pq assumed
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(
        p[1], q[1]
    )


def segment_pair_status(p1, p2, q1, q2, shared):
    """Classify two segments exactly.

    ``shared`` lists the endpoint pairs known to be the same vertex, as tuples
    ``(i, j)`` meaning endpoint ``i`` of the first segment (0 or 1) is endpoint
    ``j`` of the second.  Returns True when the segments meet anywhere other
    than at shared endpoints.
    """
    P = (p1, p2)
    Q = (q1, q2)
    if len(shared) >= 2:
        return True
    if len(shared) == 1:
        i, j = shared[0]
        c, a, b = P[i], P[1 - i], Q[1 - j]
        if orient(c, a, b) != 0:
            return False
        return dot_sign_exact(c, a, b) > 0
    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_closed_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_closed_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_closed_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_closed_segment(q1, q2, p2):
        return True
    return False
