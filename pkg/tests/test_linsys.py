import io as stdio

import numpy as np
import pytest
from conftest import arborescence_alpha, dense_planar_oracle, dense_torus_oracle
from hypothesis import given, settings
from hypothesis import strategies as st

from barymorph.combmap import TorusDrawing
from barymorph.errors import DegenerateInputError, UnrealizableError
from barymorph.generators import periodic_delaunay, random_triangulation, torus_grid
from barymorph.linsys import (
    REALIZABLE_TOL,
    SEPARATION_TOL,
    assemble_planar,
    assemble_torus,
    dump_coo,
    fixed_vertex_solve,
    floater_drawing,
    is_realizable,
    least_squares_residual,
    left_null_vector,
    realizability_residual,
    solve_floater,
    torus_residual,
)
from barymorph.weights import barycentric_residual


def small_torus_maps():
    maps = [torus_grid(k, l) for k, l in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 2)]]
    maps += [periodic_delaunay(n, 7 + n) for n in (3, 4, 5, 6)]
    return maps


SMALL_TORI = small_torus_maps()


@pytest.mark.parametrize("n,seed", [(4, 0), (5, 1), (6, 2), (6, 3)])
def test_planar_solve_matches_exact_elimination(n, seed, rng):
    d = random_triangulation(n, seed)
    w = rng.uniform(0.2, 5.0, d.map.dart_count)
    P = floater_drawing(d, w).positions
    assert np.abs(P - dense_planar_oracle(d, w)).max() <= 1e-9
    assert barycentric_residual(d.with_positions(P), w) <= 1e-9


def test_single_interior_vertex_lands_on_centroid():
    d = random_triangulation(4, 0)
    P = floater_drawing(d, np.ones(d.map.dart_count)).positions
    v = np.flatnonzero(d.interior_mask)[0]
    assert np.allclose(P[v], P[d.outer_vertices].mean(axis=0), atol=1e-15)


@pytest.mark.parametrize("g", SMALL_TORI, ids=lambda g: f"n{g.map.vertex_count}e{g.map.edge_count}")
def test_fixed_vertex_solve_matches_exact_elimination(g, rng):
    w = rng.uniform(0.2, 5.0, g.map.dart_count)
    P = fixed_vertex_solve(g.map, g.translations, w, 0, (0.25, 0.5))
    ref = dense_torus_oracle(g.map, g.translations, w, 0, (0.25, 0.5))
    assert np.abs(P - ref).max() <= 1e-9


@pytest.mark.parametrize("g", SMALL_TORI, ids=lambda g: f"n{g.map.vertex_count}e{g.map.edge_count}")
def test_symmetric_solve_matches_exact_elimination(g, rng):
    m = g.map
    w = rng.uniform(0.2, 5.0, m.edge_count)[m.edge_of]
    P = solve_floater(assemble_torus(m, g.translations, w), 0, g.positions[0])
    ref = dense_torus_oracle(m, g.translations, w, 0, tuple(g.positions[0]))
    assert np.abs(P - ref).max() <= 1e-9
    assert torus_residual(m, g.translations, w, P) <= 1e-9


@pytest.mark.parametrize("g", [x for x in SMALL_TORI if x.map.vertex_count <= 5], ids=lambda g: f"n{g.map.vertex_count}")
def test_left_null_vector_matches_arborescences(g, rng):
    w = rng.uniform(0.2, 5.0, g.map.dart_count)
    alpha = left_null_vector(assemble_torus(g.map, g.translations, w).L)
    assert np.all(alpha > 0)
    assert np.abs(alpha - arborescence_alpha(g.map, w)).max() <= 1e-9


def test_left_null_vector_of_symmetric_is_constant():
    g = torus_grid(4)
    w = np.random.default_rng(1).uniform(1, 2, g.map.edge_count)[g.map.edge_of]
    assert np.allclose(left_null_vector(assemble_torus(g.map, g.translations, w).L), 1.0, atol=1e-12)


@pytest.mark.parametrize("k", [2, 3, 6])
def test_one_heavy_dart_unrealizable(k):
    g = torus_grid(k)
    w = np.ones(g.map.dart_count)
    assert realizability_residual(g.map, g.translations, w) <= REALIZABLE_TOL
    w[0] = 2.0
    res = realizability_residual(g.map, g.translations, w)
    assert res > SEPARATION_TOL
    assert not is_realizable(g.map, g.translations, w)
    with pytest.raises(UnrealizableError) as exc:
        solve_floater(assemble_torus(g.map, g.translations, w))
    assert exc.value.residual == pytest.approx(least_squares_residual(assemble_torus(g.map, g.translations, w)))
    assert exc.value.exit_code == 3


def test_laplacian_row_sums_and_loops():
    g = torus_grid(1, 3)  # horizontal loops at every vertex
    w = np.arange(1, g.map.dart_count + 1, dtype=float)
    s = assemble_torus(g.map, g.translations, w)
    assert np.allclose(np.asarray(s.L.sum(axis=1)).ravel(), 0.0)
    loops = g.map.tail == g.map.head
    assert loops.any()
    # loops only enter H
    H = np.zeros((3, 2))
    np.add.at(H, g.map.tail, w[:, None] * g.translations)
    assert np.allclose(s.H, H)


def test_planar_zero_weights_skip_darts():
    d = random_triangulation(8, 4)
    w = np.ones(d.map.dart_count)
    s1 = assemble_planar(d, w)
    e = d.internal_edges()[0]
    w[d.map.edges[e]] = 0.0
    s2 = assemble_planar(d, w)
    assert s2.A.nnz <= s1.A.nnz


def test_singular_planar_system_raises():
    d = random_triangulation(6, 1)
    w = np.ones(d.map.dart_count)
    v = np.flatnonzero(d.interior_mask)[0]
    w[d.map.tail == v] = 0.0
    with pytest.raises(DegenerateInputError):
        floater_drawing(d, w)


def test_dump_coo_format():
    s = assemble_torus(torus_grid(2).map, torus_grid(2).translations, np.ones(16))
    buf = stdio.StringIO()
    dump_coo(s.L, buf)
    rows = [line.split() for line in buf.getvalue().splitlines()]
    assert len(rows) == s.L.nnz
    M = np.zeros((4, 4))
    for i, j, v in rows:
        M[int(i), int(j)] += float(v)
    assert np.allclose(M, s.L.toarray())


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5), st.integers(0, 10**6))
def test_symmetric_weights_always_realizable(k, l, seed):
    g = torus_grid(k, l)
    w = np.random.default_rng(seed).uniform(0.1, 10.0, g.map.edge_count)[g.map.edge_of]
    assert realizability_residual(g.map, g.translations, w) <= REALIZABLE_TOL
    P = solve_floater(assemble_torus(g.map, g.translations, w))
    assert torus_residual(g.map, g.translations, w, P) <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 40), st.integers(0, 10**6))
def test_solution_is_unique_up_to_translation(n, seed):
    g = periodic_delaunay(n, seed)
    w = np.random.default_rng(seed).uniform(0.5, 2.0, g.map.edge_count)[g.map.edge_of]
    s = assemble_torus(g.map, g.translations, w)
    a = solve_floater(s, 0)
    b = solve_floater(s, n - 1, (0.3, -0.2))
    diff = b - a
    assert np.abs(diff - diff[0]).max() <= 1e-9
    d = TorusDrawing(g.map, a, g.translations, check=False)
    assert barycentric_residual(d, w) <= 1e-9
