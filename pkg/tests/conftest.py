"""Independent oracles shared by the test modules.

None of these call into the package's solvers or predicates: linear systems
are eliminated in exact rational arithmetic, left null vectors come from
enumerating spanning arborescences, and segment intersection is decided by
exact parametric line intersection.
"""
import itertools
from fractions import Fraction

import numpy as np
import pytest


# ------------------------------------------------------------ linear algebra


def exact_solve(A, b):
    """Gauss-Jordan elimination over the rationals; ``A`` square, ``b`` (n, k)."""
    n = len(A)
    M = [[Fraction(float(x)) for x in row] + [Fraction(float(x)) for x in rhs] for row, rhs in zip(A, b)]
    k = len(M[0]) - n
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return np.array([[float(M[r][n + j]) for j in range(k)] for r in range(n)])


def dense_planar_oracle(drawing, weights):
    """Interior positions of the Floater drawing by exact elimination."""
    m = drawing.map
    P = np.asarray(drawing.positions, dtype=float)
    interior = [v for v in range(m.vertex_count) if drawing.interior_mask[v]]
    idx = {v: i for i, v in enumerate(interior)}
    A = np.zeros((len(interior), len(interior)))
    b = np.zeros((len(interior), 2))
    for d in range(m.dart_count):
        u, v = int(m.tail[d]), int(m.head[d])
        if u not in idx or u == v:
            continue
        w = weights[d]
        A[idx[u], idx[u]] += w
        if v in idx:
            A[idx[u], idx[v]] -= w
        else:
            b[idx[u]] += w * P[v]
    out = P.copy()
    if interior:
        out[interior] = exact_solve(A, b)
    return out


def dense_torus_oracle(map, tau, weights, anchor=0, anchor_position=(0.0, 0.0)):
    """Positions solving ``L P = H`` with ``p_anchor`` pinned, by exact elimination."""
    n = map.vertex_count
    L = np.zeros((n, n))
    H = np.zeros((n, 2))
    for d in range(map.dart_count):
        u, v = int(map.tail[d]), int(map.head[d])
        w = weights[d]
        H[u] += w * np.asarray(tau[d], dtype=float)
        if u != v:
            L[u, u] += w
            L[u, v] -= w
    keep = [i for i in range(n) if i != anchor]
    P = np.zeros((n, 2))
    if keep:
        rhs = H[keep] - np.outer(L[keep, anchor], anchor_position)
        P[keep] = exact_solve(L[np.ix_(keep, keep)], rhs)
    P[anchor] = anchor_position
    return P


def arborescence_alpha(map, weights):
    """Left null vector of the Laplacian from the directed matrix-tree theorem.

    ``alpha[r]`` is the total weight of spanning trees in which every vertex
    other than ``r`` has exactly one outgoing dart and all paths end at ``r``.
    Exponential; intended for ``n <= 5``.
    """
    n = map.vertex_count
    out = {v: [d for d in range(map.dart_count) if map.tail[d] == v and map.head[d] != v] for v in range(n)}
    alpha = np.zeros(n)
    for r in range(n):
        others = [v for v in range(n) if v != r]
        total = Fraction(0)
        for choice in itertools.product(*(out[v] for v in others)):
            parent = {v: int(map.head[d]) for v, d in zip(others, choice)}
            ok = True
            for v in others:
                seen = set()
                x = v
                while x != r:
                    if x in seen:
                        ok = False
                        break
                    seen.add(x)
                    x = parent[x]
                if not ok:
                    break
            if ok:
                prod = Fraction(1)
                for d in choice:
                    prod *= Fraction(float(weights[d]))
                total += prod
        alpha[r] = float(total)
    return alpha / alpha.max()


# ------------------------------------------------------------------ geometry


def _F(p):
    return Fraction(float(p[0])), Fraction(float(p[1]))


def segments_meet(p1, p2, q1, q2, shared_points=()):
    """Do two closed segments share a point other than the listed shared endpoints?

    Exact rational parametric intersection.  ``shared_points`` holds the
    endpoints (as coordinate tuples) common to both segments by identity.
    """
    a, b, c, d = _F(p1), _F(p2), _F(q1), _F(q2)
    shared = [_F(s) for s in shared_points]
    if len(shared) >= 2:
        return True
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    den = rx * sy - ry * sx
    qpx, qpy = c[0] - a[0], c[1] - a[1]
    if den != 0:
        t = (qpx * sy - qpy * sx) / den
        u = (qpx * ry - qpy * rx) / den
        if not (0 <= t <= 1 and 0 <= u <= 1):
            return False
        pt = (a[0] + t * rx, a[1] + t * ry)
        return pt not in shared
    if qpx * ry - qpy * rx != 0:
        return False  # parallel, distinct lines
    rr = rx * rx + ry * ry
    if rr == 0:
        # first segment is a point
        if sx * sx + sy * sy == 0:
            return a == c and a not in shared
        return segments_meet(q1, q2, p1, p2, shared_points)
    t0 = (qpx * rx + qpy * ry) / rr
    t1 = t0 + (sx * rx + sy * ry) / rr
    lo, hi = max(min(t0, t1), 0), min(max(t0, t1), 1)
    if lo > hi:
        return False
    if lo < hi:
        return True
    pt = (a[0] + lo * rx, a[1] + lo * ry)
    return pt not in shared


def brute_force_crossings(seg, ends):
    """All crossing pairs ``(i, j)``, ``i < j``, by the exact oracle."""
    out = []
    m = len(seg)
    for i in range(m):
        for j in range(i + 1, m):
            shared = []
            for a in range(2):
                for b in range(2):
                    if ends[i][a] == ends[j][b]:
                        shared.append(tuple(seg[i][2 * a : 2 * a + 2]))
            if segments_meet(seg[i][:2], seg[i][2:], seg[j][:2], seg[j][2:], shared):
                out.append((i, j))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results):
            terminalreporter.write_line(results[key])
