import numpy as np
import pytest
from conftest import brute_force_crossings
from hypothesis import given, settings
from hypothesis import strategies as st

from barymorph.combmap import CombinatorialMap, PlanarDrawing, TorusDrawing, normalize_isotopy, universal_cover_patch
from barymorph.errors import DomainError, NotIsotopicError, StructuralError
from barymorph.generators import (
    planar_from_edges,
    random_triangulation,
    shifted_grid_pair,
    torus_from_edges,
    torus_grid,
)


def brute_force_faces(m):
    """Orbits of rev o next found by repeatedly following darts from scratch."""
    remaining = set(range(m.dart_count))
    orbits = []
    while remaining:
        d0 = min(remaining)
        orbit = [d0]
        d = int(m.rev[m.next[d0]])
        while d != d0:
            orbit.append(d)
            d = int(m.rev[m.next[d]])
        remaining -= set(orbit)
        orbits.append(frozenset(orbit))
    return set(orbits)


def two_loop_torus():
    return torus_from_edges([[0.5, 0.5]], [[0, 0], [0, 0]], [[1, 0], [0, 1]])


def triangle():
    return planar_from_edges([[0, 0], [1, 0], [0, 1]], [[0, 1], [1, 2], [2, 0]])


def test_triangle_faces():
    m = triangle().map
    faces = m.faces()
    assert len(faces) == 2 and all(len(f) == 3 for f in faces)
    assert m.euler_characteristic() == 2


def test_two_loop_torus_single_face():
    m = two_loop_torus().map
    assert m.dart_count == 4
    faces = m.faces()
    assert len(faces) == 1 and len(faces[0]) == 4
    assert m.euler_characteristic() == 0


def test_grid_faces_match_brute_force():
    m = torus_grid(6).map
    assert (m.vertex_count, m.edge_count) == (36, 72)
    faces = m.faces()
    assert len(faces) == 36 and all(len(f) == 4 for f in faces)
    assert {frozenset(f.tolist()) for f in faces} == brute_force_faces(m)


def test_faces_partition_darts_and_are_ccw():
    d = random_triangulation(25, 3)
    m = d.map
    allf = np.concatenate(m.faces())
    assert sorted(allf.tolist()) == list(range(m.dart_count))
    for f, cyc in enumerate(m.faces()):
        P = d.face_points(f)
        area = 0.5 * np.sum(P[:, 0] * np.roll(P[:, 1], -1) - np.roll(P[:, 0], -1) * P[:, 1])
        assert (area < 0) == (f == d.outer_face)
    assert m.face_of[m.faces()[4]].tolist() == [4] * len(m.faces()[4])


@pytest.mark.parametrize(
    "tail,rev,nxt,msg",
    [
        ([0, 1, 1], [1, 0, 2], [0, 1, 2], "even"),
        ([0, 1], [1, 0], [0, 0], "permutation"),
        ([0, 1, 0, 1], [1, 0, 2, 3], [2, 3, 0, 1], "involution"),
        ([0, 1, 0, 1], [1, 0, 3, 2], [1, 0, 3, 2], "tail"),
    ],
)
def test_malformed_maps_raise(tail, rev, nxt, msg):
    with pytest.raises(StructuralError, match=msg):
        CombinatorialMap(tail, rev, nxt)


def test_heads_and_prev_are_consistent():
    m = torus_grid(3).map
    assert np.array_equal(m.tail[m.rev], m.head)
    assert np.array_equal(m.next[m.prev], np.arange(m.dart_count))
    assert np.all(m.degree() == 4)


def test_nonconvex_outer_face_rejected():
    P = [[0, 0], [2, 0], [1, 0.2], [1, 2], [1, 1]]
    edges = [[0, 1], [1, 2], [2, 3], [3, 0], [4, 0], [4, 1], [4, 2], [4, 3]]
    m = CombinatorialMap.from_edge_list(5, np.array(edges), np.array(P)[np.array(edges)[:, 1]] - np.array(P)[np.array(edges)[:, 0]])
    outer = next(f for f in range(m.face_count) if len(m.faces()[f]) == 4)
    with pytest.raises(DomainError):
        PlanarDrawing(m, P, outer)


def test_torus_translation_checks():
    g = torus_grid(2)
    T = np.array(g.translations)
    T[0] = [5, 5]
    with pytest.raises(StructuralError):
        TorusDrawing(g.map, g.positions, T)
    with pytest.raises(StructuralError):
        TorusDrawing(g.map, g.positions, g.translations + 0.5)


# -------------------------------------------------------------- cover patch


def test_cover_patch_two_loops():
    p = universal_cover_patch(two_loop_torus(), 2)
    assert len(p.points) == 4
    assert len(p.dart_segments) == 16
    assert len(p.edge_segments()) == 8


def test_cover_patch_small_grid():
    g = torus_grid(2)
    p = universal_cover_patch(g, 1)
    assert len(p.points) == 4
    assert len(p.edge_segments()) == 8
    m = g.map
    for seg, d in zip(p.dart_segments, p.dart):
        assert np.allclose(seg[:2], g.positions[m.tail[d]])
        assert np.allclose(seg[2:], g.positions[m.head[d]] + g.translations[d])


def test_cover_patch_shifted_grid_has_no_crossings():
    g, _ = shifted_grid_pair(6)
    g = g.normalized()
    p = universal_cover_patch(g, 3)
    m = g.map
    lower = p.dart < m.rev[p.dart]
    seg = p.dart_segments[lower]
    dart = p.dart[lower]
    cell = p.copy[lower]
    n = m.vertex_count
    key = lambda v, c: int(v) + n * (int(c[0]) * 16 + int(c[1]) + 8 * 17)  # noqa: E731
    ends = np.array([[key(m.tail[d], c), key(m.head[d], c + g.translations[d])] for d, c in zip(dart, cell)])
    assert brute_force_crossings(seg, ends) == []


# ---------------------------------------------------------- isotopy normalization


def test_normalize_isotopy_undoes_lift_changes(rng):
    g = torus_grid(4)
    c = rng.integers(-3, 4, size=(g.map.vertex_count, 2))
    h = g.shifted_vertices(c)
    assert not np.array_equal(h.translations, g.translations)
    g0, h1 = normalize_isotopy(g, h)
    assert g0 is g
    assert np.array_equal(h1.translations, g.translations)
    assert np.allclose(h1.positions, g.positions)
    assert np.allclose(h1.dart_vectors(), h.dart_vectors())


def test_normalize_isotopy_rejects_twisted_pair():
    g = torus_grid(3)
    T = np.array(g.translations)
    # shear every vertical edge of the top row by one period: a Dehn twist
    for d in range(g.map.dart_count):
        if T[d, 1] == 1:
            T[d, 0] += 1
            T[g.map.rev[d], 0] -= 1
    twisted = TorusDrawing(g.map, g.positions, T)
    with pytest.raises(NotIsotopicError) as exc:
        normalize_isotopy(g, twisted)
    assert exc.value.dart is not None


def test_normalized_keeps_dart_vectors(rng):
    g, _ = shifted_grid_pair(5, 0.37, 2, 3)
    h = g.shifted_vertices(rng.integers(-2, 3, size=(25, 2)))
    d = h.normalized()
    assert np.all((d.positions >= 0) & (d.positions < 1))
    assert np.allclose(d.dart_vectors(), g.dart_vectors())


# ------------------------------------------------------------ properties


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=4, max_value=40), st.integers(min_value=0, max_value=10**6))
def test_random_triangulation_invariants(n, seed):
    m = random_triangulation(n, seed).map
    d = np.arange(m.dart_count)
    assert np.all(m.rev[m.rev] == d) and np.all(m.rev != d)
    assert np.all(m.tail[m.next] == m.tail)
    assert m.euler_characteristic() == 2
    assert all(len(f) == 3 for f in m.faces())


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.integers(min_value=1, max_value=7))
def test_torus_grid_euler_characteristic(k, l):
    g = torus_grid(k, l)
    assert g.map.euler_characteristic() == 0
    assert np.array_equal(g.translations[g.map.rev], -g.translations)


def test_restrict_and_add_edges_round_trip():
    d = random_triangulation(12, 5)
    m = d.map
    keep = np.ones(m.dart_count, dtype=bool)
    e = d.internal_edges()[0]
    keep[m.edges[e]] = False
    sub, old = m.restrict(keep)
    assert sub.dart_count == m.dart_count - 2
    assert np.array_equal(m.tail[old], sub.tail)
    u, v = m.tail[m.edges[e, 0]], m.head[m.edges[e, 0]]
    P = d.positions
    vec = np.vstack([P[sub.head] - P[sub.tail], [P[v] - P[u]], [P[u] - P[v]]])
    aug = sub.with_added_edges([[u, v]], vec)
    assert aug.euler_characteristic() == 2
    assert aug.face_count == m.face_count
