"""Geometric oracles: crossings, strict convexity, parallelism, morph sampling.

Orientation tests are exact on double-precision input (floating filter with a
rational fallback), so the validators never report phantom crossings and never
miss real ones.
"""
from dataclasses import dataclass, field

import numpy as np

from .combmap import PlanarDrawing, TorusDrawing
from .kernels import CERTAIN, classify_segment_pairs
from .predicates import orient_many, segment_pair_status


@dataclass
class Violation:
    kind: str  # "crossing" | "nonconvex-face" | "degenerate-edge"
    where: object  # frame index, (transition, t) or None
    items: tuple  # offending darts, edges or vertices
    magnitude: float = 0.0

    def to_dict(self):
        return {"kind": self.kind, "where": self.where, "items": list(self.items), "magnitude": self.magnitude}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def extend(self, other, where=None):
        for v in other.violations:
            if where is not None:
                v.where = where
            self.violations.append(v)
        return self

    def count(self, kind=None):
        return sum(1 for v in self.violations if kind is None or v.kind == kind)

    def to_dict(self):
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}

    def __bool__(self):
        return self.ok


# --------------------------------------------------------------- crossings


def segment_crossings(seg, ends, active=None, use_numba=None):
    """Pairs ``(i, j)`` of segments that meet away from shared endpoints."""
    rows = classify_segment_pairs(seg, ends, active, use_numba=use_numba)
    out = []
    for i, j, status in rows:
        if status == CERTAIN:
            out.append((int(i), int(j)))
            continue
        shared = [(a, b) for a in range(2) for b in range(2) if ends[i, a] == ends[j, b]]
        if segment_pair_status(seg[i, :2], seg[i, 2:], seg[j, :2], seg[j, 2:], shared):
            out.append((int(i), int(j)))
    return sorted(out)


def _degenerate_segments(seg):
    return np.flatnonzero((seg[:, 0] == seg[:, 2]) & (seg[:, 1] == seg[:, 3]))


def planar_segments(map, positions, extra_pairs=None):
    """Edge segments of a planar map plus optional extra vertex pairs."""
    e = map.edges[:, 0]
    ends = np.stack([map.tail[e], map.head[e]], axis=1)
    if extra_pairs is not None and len(extra_pairs):
        ends = np.vstack([ends, np.asarray(extra_pairs, dtype=np.int64).reshape(-1, 2)])
    P = np.asarray(positions, dtype=float)
    seg = np.concatenate([P[ends[:, 0]], P[ends[:, 1]]], axis=1)
    return seg, ends


def crossing_free(drawing, extra_pairs=None, where=None, use_numba=None):
    """Report every pair of edges meeting away from a shared endpoint."""
    if isinstance(drawing, TorusDrawing):
        return torus_crossing_free(drawing, where=where, use_numba=use_numba)
    seg, ends = planar_segments(drawing.map, drawing.positions, extra_pairs)
    return _crossing_report(seg, ends, where, use_numba)


def crossing_free_positions(map, positions, extra_pairs=None, where=None, use_numba=None):
    seg, ends = planar_segments(map, positions, extra_pairs)
    return _crossing_report(seg, ends, where, use_numba)


def _crossing_report(seg, ends, where, use_numba, labels=None):
    rep = ValidationReport()
    for i in _degenerate_segments(seg):
        rep.violations.append(Violation("degenerate-edge", where, (int(i) if labels is None else labels[i],)))
    for i, j in segment_crossings(seg, ends, None, use_numba):
        a = i if labels is None else labels[i]
        b = j if labels is None else labels[j]
        rep.violations.append(Violation("crossing", where, (a, b)))
    return rep


def torus_crossing_free(drawing, where=None, use_numba=None):
    """Crossing check of a torus drawing in its universal cover.

    Positions are first normalized to the unit square.  Every edge image
    incident to a vertex in the central cell is tested against every edge image
    in a block of cells wide enough to contain all its possible partners (3 x 3
    when all edges are shorter than the period).
    """
    d = drawing.normalized()
    m = d.map
    vec = d.dart_vectors()
    reach = int(np.ceil(np.abs(vec).max())) if len(vec) else 0
    R = max(1, reach)
    cells = np.array([(i, j) for i in range(-R, R + 1) for j in range(-R, R + 1)], dtype=np.int64)
    lower = m.edges[:, 0]
    tails = m.tail[lower]
    heads = m.head[lower]
    tau = d.translations[lower]
    start = d.positions[tails][None, :, :] + cells[:, None, :]
    stop = d.positions[heads][None, :, :] + (cells[:, None, :] + tau[None, :, :])
    seg = np.concatenate([start, stop], axis=2).reshape(-1, 4)
    cell_of = np.repeat(cells, len(lower), axis=0)
    edge_id = np.tile(np.arange(len(lower)), len(cells))
    span = 4 * R + 8
    n = m.vertex_count

    def vid(v, c):
        return v + n * ((c[:, 0] + span) * (2 * span + 1) + (c[:, 1] + span))

    ends = np.stack([vid(np.tile(tails, len(cells)), cell_of), vid(np.tile(heads, len(cells)), cell_of + np.tile(tau, (len(cells), 1)))], axis=1)
    head_cell = cell_of + np.tile(tau, (len(cells), 1))
    active = np.all(cell_of == 0, axis=1) | np.all(head_cell == 0, axis=1)
    rep = ValidationReport()
    for i in _degenerate_segments(seg[active]):
        rep.violations.append(Violation("degenerate-edge", where, (int(edge_id[np.flatnonzero(active)[i]]),)))
    seen = set()
    for i, j in segment_crossings(seg, ends, active, use_numba):
        # identify translates of the same crossing
        a, b = int(edge_id[i]), int(edge_id[j])
        off = tuple(cell_of[j] - cell_of[i])
        key = (a, b, off) if a <= b else (b, a, tuple(-x for x in off))
        if key in seen:
            continue
        seen.add(key)
        rep.violations.append(Violation("crossing", where, (a, b)))
    return rep


# --------------------------------------------------------------- convexity


def _corner_orientations(corners):
    a = np.roll(corners, 1, axis=0)
    c = np.roll(corners, -1, axis=0)
    return orient_many(a, corners, c)


class FaceLayout:
    """Flattened face cycles of a map, reused across many position sets.

    Corner ``i`` is the tail of dart ``darts[i]``; on the torus it is lifted by
    the integer offset accumulated along its face.
    """

    def __init__(self, map, translations=None, skip=None):
        cycles = [c for f, c in enumerate(map.faces()) if f != skip]
        self.face_ids = np.array([f for f in range(map.face_count) if f != skip], dtype=np.int64)
        lengths = np.array([len(c) for c in cycles], dtype=np.int64)
        self.darts = np.concatenate(cycles) if cycles else np.zeros(0, dtype=np.int64)
        self.starts = np.r_[0, np.cumsum(lengths)[:-1]].astype(np.int64)
        self.face = np.repeat(np.arange(len(cycles)), lengths)
        local = np.arange(len(self.darts)) - self.starts[self.face]
        self.prev = self.starts[self.face] + (local - 1) % lengths[self.face]
        self.next = self.starts[self.face] + (local + 1) % lengths[self.face]
        self.vertex = map.tail[self.darts]
        self.offset = None
        if translations is not None:
            t = np.asarray(translations, dtype=np.int64)[self.darts]
            cs = np.cumsum(t, axis=0)
            before = np.zeros_like(cs)
            before[1:] = cs[:-1]
            # offsets restart at every face
            self.offset = (before - before[self.starts][self.face]).astype(float)

    def corners(self, positions):
        C = np.asarray(positions, dtype=float)[self.vertex]
        return C if self.offset is None else C + self.offset

    def check(self, positions):
        """Per-face flag (all corners strictly convex and winding once) and
        per-face count of bad corners."""
        C = self.corners(positions)
        o = orient_many(C[self.prev], C, C[self.next])
        bad = np.bincount(self.face, weights=(o <= 0), minlength=len(self.starts))
        e = C[self.next] - C
        ang = np.arctan2(e[:, 1], e[:, 0])
        turn = (ang - ang[self.prev] + np.pi) % (2 * np.pi) - np.pi
        wind = np.bincount(self.face, weights=turn, minlength=len(self.starts)) / (2 * np.pi)
        ok = (bad == 0) & (np.abs(wind - 1.0) < 1e-6)
        return ok, bad


def _layout_report(layout, positions, where):
    rep = ValidationReport()
    ok, bad = layout.check(positions)
    for i in np.flatnonzero(~ok):
        rep.violations.append(Violation("nonconvex-face", where, (int(layout.face_ids[i]),), float(bad[i])))
    return rep


def convex_faces(drawing, extra_pairs=None, where=None):
    """Strict convexity of every bounded face (planar) or every lifted face (torus)."""
    if isinstance(drawing, TorusDrawing):
        return _layout_report(FaceLayout(drawing.map, drawing.translations), drawing.positions, where)
    if extra_pairs is not None and len(extra_pairs):
        drawing = augmented_planar(drawing, extra_pairs)
    return _layout_report(FaceLayout(drawing.map, skip=drawing.outer_face), drawing.positions, where)


def augmented_planar(drawing, pairs):
    """``drawing`` with extra straight edges between the given vertex pairs."""
    m = drawing.map
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    P = drawing.positions
    vec = np.vstack([P[m.head] - P[m.tail], np.repeat(P[pairs[:, 1]] - P[pairs[:, 0]], 2, axis=0) * np.tile([[1.0], [-1.0]], (len(pairs), 1))])
    aug = m.with_added_edges(pairs, vec)
    outer = aug.face_of[m.faces()[drawing.outer_face][0]]
    return PlanarDrawing(aug, P, outer, check=False)


def reflex_corners(drawing):
    """``(face, position in cycle, vertex)`` for every non-strictly-convex corner
    of a bounded face."""
    out = []
    for f, cyc in enumerate(drawing.map.faces()):
        if f == drawing.outer_face:
            continue
        o = _corner_orientations(drawing.positions[drawing.map.tail[cyc]])
        for i in np.flatnonzero(o <= 0):
            out.append((f, int(i), int(drawing.map.tail[cyc[i]])))
    return out


# -------------------------------------------------------------- parallelism


def parallel_deviation(before, after, direction, scale):
    """``max_w |cross(after_w - before_w, direction)| / scale**2``."""
    disp = np.asarray(after, dtype=float) - np.asarray(before, dtype=float)
    cr = disp[:, 0] * direction[1] - disp[:, 1] * direction[0]
    return float(np.abs(cr).max() / scale**2) if len(cr) else 0.0


# ------------------------------------------------------------ morph frames


def morph_frames_valid(schedule, samples=11, convexity=True, use_numba=None):
    """Sample every transition of a planar schedule and validate each sample.

    Positions are linearly interpolated at ``samples`` uniform times per
    transition.  Crossings are checked on the original edges plus the
    auxiliary edges still active after the transition; convexity (when
    requested) is checked on every frame with its active auxiliary edges and
    on the samples of weight-swap transitions.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    rep = ValidationReport()
    m = schedule.map
    layouts = {}

    def layout(aux):
        key = tuple(map(tuple, aux))
        if key not in layouts:
            d = PlanarDrawing(m, schedule.frames[0], schedule.outer_face, check=False)
            if aux:
                d = augmented_planar(d, aux)
            layouts[key] = FaceLayout(d.map, skip=d.outer_face)
        return layouts[key]

    ts = np.linspace(0.0, 1.0, samples)
    for k, tr in enumerate(schedule.transitions):
        A, B = schedule.frames[k], schedule.frames[k + 1]
        aux = schedule.frame_aux[k + 1]
        seg0, ends = planar_segments(m, A, aux)
        seg1, _ = planar_segments(m, B, aux)
        for t in ts:
            seg = (1.0 - t) * seg0 + t * seg1
            rep.extend(_crossing_report(seg, ends, (k, float(t)), use_numba))
            if convexity and tr.kind == "swap" and 0.0 < t < 1.0:
                rep.extend(_layout_report(layout(aux), (1.0 - t) * A + t * B, (k, float(t))))
    if convexity:
        for k, P in enumerate(schedule.frames):
            rep.extend(_layout_report(layout(schedule.frame_aux[k]), P, k))
    if not schedule.transitions:
        for k, P in enumerate(schedule.frames):
            rep.extend(crossing_free_positions(m, P, schedule.frame_aux[k], k, use_numba))
    return rep
