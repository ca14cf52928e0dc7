"""Piecewise-linear planar morphs by single-edge weight interpolation.

Each transition changes the weights of exactly one edge's two darts, so every
vertex of the Floater drawing moves parallel to that edge and the linear
interpolation between consecutive frames is a unidirectional morph.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .combmap import CombinatorialMap, PlanarDrawing
from .errors import DomainError, StructuralError
from .generators import _three_connected, nested_squares_map, nested_squares_reference_positions
from .linsys import assemble_planar, floater_drawing
from .predicates import orient, segment_pair_status
from .validation import augmented_planar, convex_faces, parallel_deviation, reflex_corners
from .weights import mean_value_weights

log = logging.getLogger(__name__)

OUTER_TOL = 1e-12


@dataclass
class Transition:
    edge: int  # edge of the original map, -1 for auxiliary edges
    darts: tuple  # darts whose weights change, in the map the weights live on
    kind: str  # "swap", "aux-removal" or "aux-restore"
    stage: str = "convex"  # "before", "convex" or "after"
    aux_pair: tuple = None  # (u, v) of an auxiliary edge

    def to_dict(self):
        return {
            "edge": self.edge,
            "darts": [int(d) for d in self.darts],
            "kind": self.kind,
            "stage": self.stage,
            "aux_pair": None if self.aux_pair is None else [int(x) for x in self.aux_pair],
        }


@dataclass
class MorphSchedule:
    """Frames of a piecewise-linear morph sharing one map and outer face."""

    map: CombinatorialMap
    outer_face: int
    frames: list
    transitions: list = field(default_factory=list)
    frame_aux: list = None  # per frame: auxiliary vertex pairs with positive weight

    def __post_init__(self):
        if self.frame_aux is None:
            self.frame_aux = [[] for _ in self.frames]
        if len(self.frames) != len(self.transitions) + 1 or len(self.frame_aux) != len(self.frames):
            raise StructuralError("a schedule needs exactly one more frame than transitions")

    @property
    def step_count(self):
        return len(self.transitions)

    @property
    def vertex_count(self):
        return self.map.vertex_count

    def drawing(self, k):
        return PlanarDrawing(self.map, self.frames[k], self.outer_face, check=False)

    def positions_at(self, s):
        """Positions at global time ``s`` in ``[0, 1]`` (transitions equally spaced)."""
        if not self.transitions:
            return np.array(self.frames[0])
        x = min(max(s, 0.0), 1.0) * self.step_count
        k = min(int(x), self.step_count - 1)
        t = x - k
        return (1.0 - t) * self.frames[k] + t * self.frames[k + 1]

    def reversed(self):
        flip = {"aux-removal": "aux-restore", "aux-restore": "aux-removal", "swap": "swap"}
        trs = [Transition(t.edge, t.darts, flip[t.kind], t.stage, t.aux_pair) for t in reversed(self.transitions)]
        return MorphSchedule(self.map, self.outer_face, self.frames[::-1], trs, self.frame_aux[::-1])

    def then(self, other):
        """Concatenate, sharing the boundary frame."""
        if not np.allclose(self.frames[-1], other.frames[0], rtol=0, atol=1e-9 * _diam(self.frames[-1])):
            raise StructuralError("schedules do not meet at a common frame")
        return MorphSchedule(
            self.map,
            self.outer_face,
            self.frames + other.frames[1:],
            self.transitions + other.transitions,
            self.frame_aux + other.frame_aux[1:],
        )

    def to_dict(self):
        return {
            "step_count": self.step_count,
            "frames": [np.asarray(f).tolist() for f in self.frames],
            "transitions": [t.to_dict() for t in self.transitions],
            "frame_aux": [[list(map(int, p)) for p in a] for a in self.frame_aux],
        }


def _diam(P):
    P = np.asarray(P)
    return max(float(np.hypot(*(P.max(axis=0) - P.min(axis=0)))), np.finfo(float).tiny)


def _check_compatible(start, end):
    if not start.map.same_as(end.map):
        raise DomainError("drawings must share one combinatorial map")
    if start.outer_face != end.outer_face:
        raise DomainError("drawings must share the outer face")
    ov = start.outer_vertices
    if np.abs(start.positions[ov] - end.positions[ov]).max() > OUTER_TOL * start.diameter():
        raise DomainError("outer face positions differ")


def _edge_order(edges, edge_order, seed):
    if edge_order == "input":
        return list(edges)
    if edge_order == "random":
        return list(np.random.default_rng(seed).permutation(edges))
    raise ValueError(f"unknown edge order {edge_order!r}")


def morph_convex(start, end, edge_order="input", seed=0):
    """Morph between two convex drawings, one internal edge at a time.

    Produces at most ``3n - 9`` transitions; every frame is a Floater drawing
    and therefore convex.
    """
    _check_compatible(start, end)
    for d in (start, end):
        if not convex_faces(d).ok:
            raise DomainError("morph_convex needs drawings with strictly convex faces")
    m = start.map
    lam = mean_value_weights(start)
    mu = mean_value_weights(end)
    frames = [np.array(start.positions)]
    trs = []
    for e in _edge_order(start.internal_edges(), edge_order, seed):
        d, rd = m.edges[e]
        lam[d] = mu[d]
        lam[rd] = mu[rd]
        frames.append(assemble_planar(start, lam).solve())
        trs.append(Transition(int(e), (int(d), int(rd)), "swap", "convex"))
    return MorphSchedule(m, start.outer_face, frames, trs)


# ------------------------------------------------------- convexification


def _in_cone(P, i, q):
    k = len(P)
    a, p, b = P[(i - 1) % k], P[i], P[(i + 1) % k]
    if orient(a, p, b) > 0:
        return orient(p, b, q) > 0 and orient(p, q, a) > 0
    return not (orient(p, a, q) >= 0 and orient(p, q, b) >= 0)


def _splits_strictly(P, i, q):
    # both angles at corner i become < pi
    k = len(P)
    a, p, b = P[(i - 1) % k], P[i], P[(i + 1) % k]
    return orient(p, b, q) > 0 and orient(p, q, a) > 0


def _is_diagonal(P, i, j):
    k = len(P)
    if j in ((i - 1) % k, i, (i + 1) % k):
        return False
    if not (_in_cone(P, i, P[j]) and _in_cone(P, j, P[i])):
        return False
    for s in range(k):
        t = (s + 1) % k
        if s in (i, j) and t in (i, j):
            continue
        shared = []
        if s == i or t == i:
            shared.append((0, 0 if s == i else 1))
        if s == j or t == j:
            shared.append((1, 0 if s == j else 1))
        if segment_pair_status(P[i], P[j], P[s], P[t], shared):
            return False
    return True


def _reflex(P):
    k = len(P)
    return [i for i in range(k) if orient(P[(i - 1) % k], P[i], P[(i + 1) % k]) <= 0]


def _split(P, ids, i, j):
    if i > j:
        i, j = j, i
    k = len(P)
    A = list(range(i, j + 1))
    B = list(range(j, k)) + list(range(0, i + 1))
    return (P[A], [ids[x] for x in A]), (P[B], [ids[x] for x in B])


def _min_decomposition(P, ids, memo, budget):
    # any strictly convex decomposition uses a diagonal at the first reflex
    # corner, so trying each of them and recursing finds a minimum
    key = tuple(ids)
    if key in memo:
        return memo[key]
    refl = _reflex(P)
    if not refl:
        memo[key] = []
        return []
    i = refl[0]
    rset = set(refl)
    cands = [j for j in range(len(P)) if _is_diagonal(P, i, j)]
    cands.sort(key=lambda j: (not _splits_strictly(P, i, P[j]), j not in rset))
    best = None
    for j in cands:
        budget[0] -= 1
        if budget[0] < 0:
            break
        (PA, ia), (PB, ib) = _split(P, ids, i, j)
        a = _min_decomposition(PA, ia, memo, budget)
        if a is None or (best is not None and 1 + len(a) >= len(best)):
            continue
        b = _min_decomposition(PB, ib, memo, budget)
        if b is None:
            continue
        cand = [(ids[i], ids[j])] + a + b
        if best is None or len(cand) < len(best):
            best = cand
            if len(best) == 1:
                break
    if budget[0] >= 0:
        memo[key] = best
    return best


def _greedy_decomposition(P, ids):
    refl = _reflex(P)
    if not refl:
        return []
    best, best_rank = None, None
    for i in refl:
        for j in range(len(P)):
            if not _is_diagonal(P, i, j):
                continue
            rank = (_splits_strictly(P, i, P[j]), _splits_strictly(P, j, P[i]))
            if best_rank is None or rank > best_rank:
                best, best_rank = (i, j), rank
    if best is None:
        raise DomainError("face polygon has a reflex corner but no diagonal (not simple?)")
    (PA, ia), (PB, ib) = _split(P, ids, *best)
    return [(ids[best[0]], ids[best[1]])] + _greedy_decomposition(PA, ia) + _greedy_decomposition(PB, ib)


def decompose_polygon(P, ids, budget=20000):
    """Diagonals splitting a simple counterclockwise polygon into strictly convex pieces.

    Returns a minimum set of diagonals, found by a memoised search over the
    diagonals at the first reflex corner of each piece.  The search examines
    at most ``budget`` candidates; past that a greedy choice is used.
    """
    P = np.asarray(P, dtype=float)
    ids = list(ids)
    out = _min_decomposition(P, ids, {}, [budget])
    if out is None:
        log.warning("convex decomposition search exhausted its budget; using greedy diagonals")
        out = _greedy_decomposition(P, ids)
    refl = len(_reflex(P))
    if len(out) > refl:
        log.warning("convex decomposition uses %d diagonals for %d reflex corners", len(out), refl)
    return out


def convex_decomposition(drawing):
    """Vertex pairs of the auxiliary edges that make every bounded face convex."""
    faces = sorted({f for f, _, _ in reflex_corners(drawing)})
    pairs = []
    for f in faces:
        cyc = drawing.map.faces()[f]
        ids = drawing.map.tail[cyc].tolist()
        pairs += decompose_polygon(drawing.positions[ids], ids)
    return pairs


def convexify(drawing, stage="before"):
    """Morph a 3-connected drawing to a convex Floater drawing of its map.

    Returns ``(schedule, convex_drawing)``.  One transition per auxiliary edge
    sets that edge's dart weights to zero.
    """
    if not _three_connected(drawing.map):
        raise DomainError("convexify needs a 3-connected map")
    pairs = convex_decomposition(drawing)
    P0 = np.array(drawing.positions)
    if not pairs:
        return MorphSchedule(drawing.map, drawing.outer_face, [P0]), drawing
    aug = augmented_planar(drawing, pairs)
    lam = mean_value_weights(aug)
    D = drawing.map.dart_count
    frames, aux, trs = [P0], [list(pairs)], []
    for i, pr in enumerate(pairs):
        d, rd = D + 2 * i, D + 2 * i + 1
        lam[d] = 0.0
        lam[rd] = 0.0
        frames.append(assemble_planar(aug, lam).solve())
        aux.append(list(pairs[i + 1 :]))
        trs.append(Transition(-1, (d, rd), "aux-removal", stage, tuple(pr)))
    sched = MorphSchedule(drawing.map, drawing.outer_face, frames, trs, aux)
    return sched, drawing.with_positions(frames[-1])


def morph(start, end, edge_order="input", seed=0):
    """Morph between two 3-connected drawings with the same convex outer face.

    Concatenates convexify(start), morph_convex and the reversal of
    convexify(end).  At most ``4n - 12`` transitions.
    """
    _check_compatible(start, end)
    s_before, g_before = convexify(start, "before")
    s_after, g_after = convexify(end, "after")
    s_convex = morph_convex(g_before, g_after, edge_order, seed)
    sched = s_before.then(s_convex).then(s_after.reversed())
    bound = step_bound(start.map.vertex_count, convex=False)
    if sched.step_count > bound:
        log.warning("morph uses %d steps, more than the 4n-12 = %d bound", sched.step_count, bound)
    return sched


def step_bound(n, convex=True):
    return 3 * n - 9 if convex else 4 * n - 12


def transition_deviations(schedule):
    """Parallel-displacement deviation of every transition.

    For transition ``k`` changing edge ``e``, returns ``max_w |cross(p'_w - p_w,
    direction of e in frame k)| / diameter**2``.
    """
    m = schedule.map
    out = []
    for k, tr in enumerate(schedule.transitions):
        A, B = schedule.frames[k], schedule.frames[k + 1]
        if tr.aux_pair is not None:
            u, v = tr.aux_pair
        else:
            d = tr.darts[0]
            u, v = m.tail[d], m.head[d]
        out.append(parallel_deviation(A, B, A[v] - A[u], _diam(A)))
    return out


# --------------------------------------------------------- nested squares


def nested_squares(layers, ring_weight=1.0, spoke_weight=1.0):
    """Floater drawing of ``layers`` nested squares with symmetric weights.

    The outer square is fixed at ``(+-1, +-1)``.  Returns ``(drawing, weights)``.
    """
    if layers < 2:
        raise ValueError("nested squares need at least 2 layers")
    edges = np.array(nested_squares_map(layers))
    ref = nested_squares_reference_positions(layers)
    m = CombinatorialMap.from_edge_list(len(ref), edges, ref[edges[:, 1]] - ref[edges[:, 0]])
    ring = (edges[:, 0] // 4) == (edges[:, 1] // 4)
    w_edge = np.where(ring, ring_weight, spoke_weight)
    w = w_edge[m.edge_of]
    base = PlanarDrawing(m, ref)
    return floater_drawing(base, w), w


def layer_diameters(drawing, layers):
    P = drawing.positions
    out = []
    for k in range(layers):
        Q = P[4 * k : 4 * k + 4]
        out.append(float(np.max(np.hypot(*(Q[:, None, :] - Q[None, :, :]).transpose(2, 0, 1)))))
    return np.array(out)


def local_residuals(drawing, weights, layers):
    """Per-layer max barycentric residual relative to that layer's diameter."""
    m = drawing.map
    P = drawing.positions
    w = np.asarray(weights, dtype=float)
    vec = P[m.head] - P[m.tail]
    n = m.vertex_count
    s = np.stack([np.bincount(m.tail, weights=w * vec[:, c], minlength=n) for c in (0, 1)], axis=1)
    tot = np.bincount(m.tail, weights=w, minlength=n)
    r = np.hypot(s[:, 0], s[:, 1]) / tot
    r[drawing.outer_vertices] = 0.0
    diam = layer_diameters(drawing, layers)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.array([np.max(r[4 * k : 4 * k + 4]) / diam[k] for k in range(layers)])


def nested_squares_precision(max_layers, tol=1e-9):
    """Solve the family for 2..max_layers layers and find where double precision breaks.

    Returns ``(rows, first_failure)``; each row is ``(layers, innermost
    diameter, worst layer-relative residual, crossing-free, convex)`` and
    ``first_failure`` is the first layer count whose drawing has crossings,
    non-convex faces or a layer-relative residual above ``tol`` (``None`` if
    none does).
    """
    from .validation import crossing_free

    rows, first = [], None
    for L in range(2, max_layers + 1):
        d, w = nested_squares(L)
        res = float(np.nanmax(local_residuals(d, w, L)))
        cf = crossing_free(d).ok
        cv = convex_faces(d).ok
        rows.append((L, float(layer_diameters(d, L)[-1]), res, cf, cv))
        if first is None and not (cf and cv and res <= tol):
            first = L
    return rows, first
