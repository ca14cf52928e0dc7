"""Combinatorial maps on the plane and the flat torus.

A map is stored as three dart arrays: ``tail``, ``rev`` (fixed-point-free
involution) and ``next`` (the counterclockwise successor around the tail
vertex).  Faces are derived on demand and never stored by the caller.  The
face cycles returned by :meth:`CombinatorialMap.faces` are the orbits of
``rev o next``, listed in counterclockwise traversal order (each face lies to
the left of its darts).

Torus drawings use coordinate representations: a position per vertex plus an
integer translation vector per dart, with ``tau[rev[d]] == -tau[d]``.  Dart
``d: u -> v`` is drawn as the projection of the segment from ``p_u`` to
``p_v + tau_d``.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateInputError, DomainError, NotIsotopicError, StructuralError
from .predicates import orient_many


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


class CombinatorialMap:
    """Darts with reversal involution and counterclockwise rotation system."""

    def __init__(self, tail, rev, next, vertex_count=None):
        tail = _frozen(tail, np.int64)
        rev = _frozen(rev, np.int64)
        nxt = _frozen(next, np.int64)
        D = len(tail)
        if len(rev) != D or len(nxt) != D:
            raise StructuralError("tail, rev and next must have the same length")
        if D == 0 or D % 2:
            raise StructuralError(f"dart count must be positive and even, got {D}")
        if vertex_count is None:
            vertex_count = int(tail.max()) + 1
        if tail.min() < 0 or tail.max() >= vertex_count:
            raise StructuralError("tail refers to a vertex outside range(vertex_count)")
        for name, perm in (("rev", rev), ("next", nxt)):
            if perm.min() < 0 or perm.max() >= D or len(np.unique(perm)) != D:
                raise StructuralError(f"{name} is not a permutation of the darts")
        if np.any(rev[rev] != np.arange(D)) or np.any(rev == np.arange(D)):
            raise StructuralError("rev must be a fixed-point-free involution")
        if np.any(tail[nxt] != tail):
            raise StructuralError("next must rotate darts around their tail vertex")
        self.tail = tail
        self.rev = rev
        self.next = nxt
        self.vertex_count = int(vertex_count)
        # one next-orbit per vertex
        seen = np.zeros(D, dtype=bool)
        owner = np.full(self.vertex_count, -1)
        for d in range(D):
            if seen[d]:
                continue
            v = tail[d]
            if owner[v] >= 0:
                raise StructuralError(f"vertex {v} has more than one rotation cycle")
            owner[v] = d
            e = d
            while not seen[e]:
                seen[e] = True
                e = nxt[e]
        if np.any(owner < 0):
            raise StructuralError("every vertex needs at least one dart")

    # -- basic structure -------------------------------------------------

    @property
    def dart_count(self):
        return len(self.tail)

    @property
    def edge_count(self):
        return len(self.tail) // 2

    @cached_property
    def head(self):
        return _frozen(self.tail[self.rev], np.int64)

    @cached_property
    def prev(self):
        p = np.empty_like(self.next)
        p[self.next] = np.arange(self.dart_count)
        return _frozen(p, np.int64)

    @cached_property
    def edges(self):
        """``(E, 2)`` array of dart pairs ``(d, rev d)`` with ``d < rev d``."""
        d = np.flatnonzero(np.arange(self.dart_count) < self.rev)
        return _frozen(np.stack([d, self.rev[d]], axis=1), np.int64)

    @cached_property
    def edge_of(self):
        """Edge index of every dart."""
        e = np.empty(self.dart_count, dtype=np.int64)
        e[self.edges[:, 0]] = np.arange(self.edge_count)
        e[self.edges[:, 1]] = np.arange(self.edge_count)
        return _frozen(e, np.int64)

    @cached_property
    def star(self):
        """Darts leaving each vertex, in counterclockwise order."""
        out = [None] * self.vertex_count
        for d in range(self.dart_count):
            v = self.tail[d]
            if out[v] is not None:
                continue
            cyc = [d]
            e = self.next[d]
            while e != d:
                cyc.append(e)
                e = self.next[e]
            out[v] = np.array(cyc, dtype=np.int64)
        return out

    def degree(self):
        return np.bincount(self.tail, minlength=self.vertex_count)

    # -- faces -------------------------------------------------------------

    @cached_property
    def _faces(self):
        succ = self.prev[self.rev]  # counterclockwise successor along a face
        face_of = np.full(self.dart_count, -1, dtype=np.int64)
        cycles = []
        for d in range(self.dart_count):
            if face_of[d] >= 0:
                continue
            cyc = []
            e = d
            while face_of[e] < 0:
                face_of[e] = len(cycles)
                cyc.append(e)
                e = succ[e]
            if e != d:
                raise StructuralError("face traversal did not close")
            cycles.append(np.array(cyc, dtype=np.int64))
        return cycles, face_of

    def faces(self):
        """Face boundary cycles as arrays of darts."""
        return list(self._faces[0])

    @property
    def face_of(self):
        return self._faces[1]

    @property
    def face_count(self):
        return len(self._faces[0])

    def euler_characteristic(self):
        return self.vertex_count - self.edge_count + self.face_count

    # -- construction helpers -------------------------------------------

    def same_as(self, other):
        return (
            self.vertex_count == other.vertex_count
            and np.array_equal(self.tail, other.tail)
            and np.array_equal(self.rev, other.rev)
            and np.array_equal(self.next, other.next)
        )

    @classmethod
    def from_geometry(cls, tail, rev, vectors, vertex_count=None):
        """Build the rotation system by sorting darts by direction at each tail."""
        tail = np.asarray(tail, dtype=np.int64)
        vectors = np.asarray(vectors, dtype=float)
        if np.any(np.hypot(vectors[:, 0], vectors[:, 1]) == 0):
            raise DegenerateInputError("zero-length dart; rotation is undefined")
        ang = np.arctan2(vectors[:, 1], vectors[:, 0])
        order = np.lexsort((ang, tail))
        nxt = np.empty(len(tail), dtype=np.int64)
        t_sorted = tail[order]
        starts = np.flatnonzero(np.r_[True, t_sorted[1:] != t_sorted[:-1]])
        ends = np.r_[starts[1:], len(order)]
        for s, e in zip(starts, ends):
            grp = order[s:e]
            nxt[grp] = np.roll(grp, -1)
        return cls(tail, rev, nxt, vertex_count)

    @classmethod
    def from_edge_list(cls, vertex_count, edges, vectors):
        """Darts ``2e: u -> v`` and ``2e+1: v -> u`` for each edge ``(u, v)``.

        ``vectors[e]`` is the direction of ``u -> v`` (for torus maps the lifted
        displacement ``p_v + tau - p_u``).
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        vectors = np.asarray(vectors, dtype=float).reshape(-1, 2)
        E = len(edges)
        tail = np.empty(2 * E, dtype=np.int64)
        tail[0::2] = edges[:, 0]
        tail[1::2] = edges[:, 1]
        rev = np.arange(2 * E) ^ 1
        vec = np.empty((2 * E, 2))
        vec[0::2] = vectors
        vec[1::2] = -vectors
        return cls.from_geometry(tail, rev, vec, vertex_count)

    def restrict(self, keep):
        """Sub-map on the darts where ``keep`` is true; returns ``(map, old_ids)``.

        Rotation order is inherited by skipping removed darts.  ``keep`` must be
        closed under ``rev``.
        """
        keep = np.asarray(keep, dtype=bool)
        if np.any(keep != keep[self.rev]):
            raise StructuralError("restriction must keep both darts of an edge")
        old = np.flatnonzero(keep)
        new_id = np.full(self.dart_count, -1, dtype=np.int64)
        new_id[old] = np.arange(len(old))
        nxt = np.empty(len(old), dtype=np.int64)
        for i, d in enumerate(old):
            e = self.next[d]
            while not keep[e]:
                e = self.next[e]
            nxt[i] = new_id[e]
        return CombinatorialMap(self.tail[old], new_id[self.rev[old]], nxt, self.vertex_count), old

    def with_added_edges(self, pairs, vectors):
        """Append edges ``(u, v)`` (darts ``D+2k``, ``D+2k+1``); rotation from geometry.

        ``vectors`` gives, for every dart of the *augmented* map, its drawn
        direction.  Raises :class:`DomainError` if the existing rotation system
        disagrees with that geometry.
        """
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        D = self.dart_count
        K = len(pairs)
        tail = np.empty(D + 2 * K, dtype=np.int64)
        tail[:D] = self.tail
        tail[D::2] = pairs[:, 0]
        tail[D + 1 :: 2] = pairs[:, 1]
        rev = np.empty(D + 2 * K, dtype=np.int64)
        rev[:D] = self.rev
        rev[D:] = np.arange(D, D + 2 * K) ^ 1  # D is even
        aug = CombinatorialMap.from_geometry(tail, rev, vectors, self.vertex_count)
        sub, _ = aug.restrict(np.arange(D + 2 * K) < D)
        if not sub.same_as(self):
            raise DomainError("rotation system disagrees with the drawing's geometry")
        return aug


# ---------------------------------------------------------------- drawings


def _face_orientations(points):
    """Orientation signs at every corner of a closed polygon (rows = corners)."""
    a = np.roll(points, 1, axis=0)
    c = np.roll(points, -1, axis=0)
    return orient_many(a, points, c)


class PlanarDrawing:
    """Straight-line drawing of a planar map with a strictly convex outer face."""

    def __init__(self, map, positions, outer_face=None, *, check=True):
        P = np.array(positions, dtype=float)
        if P.shape != (map.vertex_count, 2):
            raise StructuralError(f"positions must have shape ({map.vertex_count}, 2)")
        if not np.all(np.isfinite(P)):
            raise DegenerateInputError("non-finite vertex position")
        P.setflags(write=False)
        self.map = map
        self.positions = P
        if outer_face is None:
            areas = [self._signed_area(f) for f in range(map.face_count)]
            outer_face = int(np.argmin(areas))
        self.outer_face = int(outer_face)
        if check:
            if map.euler_characteristic() != 2:
                raise DomainError("planar map must satisfy V - E + F = 2")
            cyc = self.face_points(self.outer_face)
            o = _face_orientations(cyc)
            if not np.all(o < 0):
                raise DomainError("outer face boundary is not a strictly convex polygon")

    def _signed_area(self, f):
        pts = self.face_points(f)
        x, y = pts[:, 0], pts[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def face_points(self, f):
        cyc = self.map.faces()[f]
        return self.positions[self.map.tail[cyc]]

    @cached_property
    def outer_vertices(self):
        return self.map.tail[self.map.faces()[self.outer_face]]

    @cached_property
    def interior_mask(self):
        m = np.ones(self.map.vertex_count, dtype=bool)
        m[self.outer_vertices] = False
        return m

    @cached_property
    def boundary_edge_mask(self):
        """True for edges on the outer face."""
        mask = np.zeros(self.map.edge_count, dtype=bool)
        mask[self.map.edge_of[self.map.faces()[self.outer_face]]] = True
        return mask

    def internal_edges(self):
        return np.flatnonzero(~self.boundary_edge_mask)

    def with_positions(self, positions):
        return PlanarDrawing(self.map, positions, self.outer_face, check=False)

    def diameter(self):
        P = self.positions
        return float(np.hypot(*(P.max(axis=0) - P.min(axis=0))))

    def segments(self):
        """``(E, 4)`` edge segments and ``(E, 2)`` endpoint vertex ids."""
        e = self.map.edges[:, 0]
        ends = np.stack([self.map.tail[e], self.map.head[e]], axis=1)
        seg = np.concatenate([self.positions[ends[:, 0]], self.positions[ends[:, 1]]], axis=1)
        return seg, ends


class TorusDrawing:
    """Coordinate representation ``(P, tau)`` of a geodesic torus drawing."""

    def __init__(self, map, positions, translations, *, check=True):
        P = np.array(positions, dtype=float)
        T = np.array(translations)
        if P.shape != (map.vertex_count, 2):
            raise StructuralError(f"positions must have shape ({map.vertex_count}, 2)")
        if T.shape != (map.dart_count, 2):
            raise StructuralError(f"translations must have shape ({map.dart_count}, 2)")
        if not np.all(np.isfinite(P)):
            raise DegenerateInputError("non-finite vertex position")
        if T.dtype.kind == "f":
            if np.any(T != np.round(T)):
                raise StructuralError("translation vectors must be integral")
        T = T.astype(np.int64)
        if np.any(T[map.rev] != -T):
            raise StructuralError("translations must satisfy tau[rev d] == -tau[d]")
        P.setflags(write=False)
        T.setflags(write=False)
        self.map = map
        self.positions = P
        self.translations = T
        if check:
            if map.euler_characteristic() != 0:
                raise DomainError("torus map must satisfy V - E + F = 0")
            v = self.dart_vectors()
            if np.any(np.hypot(v[:, 0], v[:, 1]) == 0):
                raise DegenerateInputError("dart with zero-length geodesic")

    def dart_vectors(self):
        """Lifted displacement ``p_head + tau - p_tail`` of every dart."""
        m = self.map
        return self.positions[m.head] + self.translations - self.positions[m.tail]

    def with_positions(self, positions):
        return TorusDrawing(self.map, positions, self.translations, check=False)

    def normalized(self):
        """Equivalent representation with all positions in ``[0, 1)^2``."""
        c = np.floor(self.positions).astype(np.int64)
        P = self.positions - c
        m = self.map
        T = self.translations + c[m.head] - c[m.tail]
        return TorusDrawing(m, P, T, check=False)

    def shifted_vertices(self, shifts):
        """Move vertex lifts by integer vectors, compensating the translations."""
        c = np.asarray(shifts, dtype=np.int64)
        m = self.map
        return TorusDrawing(m, self.positions + c, self.translations + c[m.tail] - c[m.head], check=False)

    def diameter(self):
        P = self.positions
        return max(float(np.hypot(*(P.max(axis=0) - P.min(axis=0)))), 1.0)

    def face_corners(self, f):
        """Lifted corner positions of face ``f`` (first corner at its own lift)."""
        cyc = self.map.faces()[f]
        v = self.dart_vectors()[cyc]
        start = self.positions[self.map.tail[cyc[0]]]
        return start + np.vstack([[0.0, 0.0], np.cumsum(v, axis=0)[:-1]])

    def face_offsets(self, f):
        """Integer lift offsets ``T_k`` of the corners of face ``f``."""
        cyc = self.map.faces()[f]
        t = self.translations[cyc]
        return np.vstack([[0, 0], np.cumsum(t, axis=0)[:-1]]).astype(np.int64)


# ------------------------------------------------------------ cover patches


@dataclass(frozen=True)
class CoverPatch:
    """Lift of a torus drawing to a ``k x k`` block of fundamental domains.

    ``dart_segments[s]`` is the image of dart ``dart[s]`` starting at the copy
    of its tail in cell ``copy[s]``; each geometric edge image therefore
    appears twice (once per dart, from different cells).
    """

    k: int
    points: np.ndarray  # (k*k*n, 2)
    point_cell: np.ndarray  # (k*k*n, 2) cell of each vertex copy
    dart_segments: np.ndarray  # (k*k*D, 4)
    dart: np.ndarray
    copy: np.ndarray  # (k*k*D, 2)

    def edge_segments(self):
        """One segment per edge per cell: the image of the edge's lower dart."""
        lower = self.dart < self._rev[self.dart]
        return self.dart_segments[lower]

    _rev: np.ndarray = None


def universal_cover_patch(drawing, k):
    """Lift ``drawing`` to the ``k x k`` block of cells ``(i, j)``, ``0 <= i, j < k``."""
    if k < 1:
        raise ValueError("patch size k must be at least 1")
    m = drawing.map
    n, D = m.vertex_count, m.dart_count
    cells = np.array([(i, j) for i in range(k) for j in range(k)], dtype=np.int64)
    points = (drawing.positions[None, :, :] + cells[:, None, :]).reshape(-1, 2)
    point_cell = np.repeat(cells, n, axis=0)
    start = drawing.positions[m.tail][None, :, :] + cells[:, None, :]
    # endpoints coincide exactly with vertex copies
    stop = drawing.positions[m.head][None, :, :] + (cells[:, None, :] + drawing.translations[None, :, :])
    segs = np.concatenate([start, stop], axis=2).reshape(-1, 4)
    dart = np.tile(np.arange(D), len(cells))
    copy = np.repeat(cells, D, axis=0)
    return CoverPatch(k, points, point_cell, segs, dart, copy, _rev=np.asarray(m.rev))


# ----------------------------------------------------------- isotopy check


def _spanning_tree_darts(m, root=0):
    """BFS tree: ``parent_dart[v]`` is the dart entering ``v`` (or -1), plus order."""
    parent = np.full(m.vertex_count, -2, dtype=np.int64)
    parent[root] = -1
    order = [root]
    for u in order:
        for d in m.star[u]:
            v = m.head[d]
            if parent[v] == -2:
                parent[v] = d
                order.append(v)
    if np.any(parent == -2):
        raise DomainError("map is disconnected")
    return parent, order


def normalize_isotopy(drawing0, drawing1):
    """Re-coordinatize ``drawing1`` so its translation vectors equal ``drawing0``'s.

    Only vertex lifts of ``drawing1`` move, by integer vectors.  ``drawing0`` is
    returned unchanged.  Raises :class:`NotIsotopicError` if no such
    re-coordinatization exists.
    """
    m = drawing0.map
    if not m.same_as(drawing1.map):
        raise StructuralError("drawings must share one combinatorial map")
    t0, t1 = drawing0.translations, drawing1.translations
    parent, order = _spanning_tree_darts(m)
    c = np.zeros((m.vertex_count, 2), dtype=np.int64)
    for v in order[1:]:
        d = parent[v]
        u = m.tail[d]
        # t1[d] + c[u] - c[v] == t0[d]
        c[v] = c[u] + t1[d] - t0[d]
    new_t = t1 + c[m.tail] - c[m.head]
    bad = np.flatnonzero(np.any(new_t != t0, axis=1))
    if bad.size:
        raise NotIsotopicError(
            f"translation vectors disagree on dart {int(bad[0])} after normalization", dart=int(bad[0])
        )
    # global integer shift keeps the root lifts close
    root = order[0]
    g = np.round(drawing0.positions[root] - (drawing1.positions[root] + c[root])).astype(np.int64)
    c = c + g
    return drawing0, drawing1.shifted_vertices(c)
