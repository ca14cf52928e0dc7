import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barymorph.combmap import TorusDrawing
from barymorph.errors import ConditionViolated, DomainError, NotIsotopicError, StructuralError
from barymorph.generators import (
    k7_torus,
    periodic_delaunay,
    random_shifted_grids,
    random_symmetric_redraw,
    shifted_grid_pair,
    torus_grid,
)
from barymorph.linsys import REALIZABLE_TOL, assemble_torus, left_null_vector, realizability_residual, solve_floater
from barymorph.torus import (
    CompositeTorusMorph,
    TorusMorph,
    column_sum_deviation,
    edge_tweak_displacement_check,
    edge_tweak_realizable,
    is_morphable,
    morphable_scaling,
    torus_morph_build,
    torus_morph_eval,
    translation_error,
    triangulate_faces,
)
from barymorph.validation import convex_faces, torus_crossing_free
from barymorph.weights import interpolate, mean_value_weights, per_vertex_normalize

K7_MOVED = {3: (0.47, 0.40)}


def drop_edge(g, e):
    m = g.map
    keep = np.ones(m.dart_count, dtype=bool)
    keep[m.edges[e]] = False
    sub, old = m.restrict(keep)
    return TorusDrawing(sub, g.positions, g.translations[old])


def nonconvex_torus():
    """Periodic Delaunay triangulation minus one edge, leaving a reflex quadrilateral."""
    for seed in range(50):
        g = periodic_delaunay(12, seed)
        for e in range(g.map.edge_count):
            h = drop_edge(g, e)
            if h.map.degree().min() >= 3 and not convex_faces(h).ok:
                return h
    raise AssertionError("no suitable drawing found")


def lhs_minus_rhs(drawing, mu):
    s = assemble_torus(drawing.map, drawing.translations, mu)
    return np.abs(s.L @ drawing.positions - s.H).max() / np.abs(mu).max()


# ------------------------------------------------------------ morphable scaling


def test_symmetric_weights_scale_to_themselves():
    g = torus_grid(4)
    lam = np.random.default_rng(0).uniform(0.5, 2.0, g.map.edge_count)[g.map.edge_of]
    P = solve_floater(assemble_torus(g.map, g.translations, lam))
    d = g.with_positions(P)
    mw = morphable_scaling(lam, d)
    assert np.allclose(mw.alpha, 1.0, atol=1e-12)
    assert np.allclose(mw.weights, lam, rtol=1e-12)


def test_k7_mean_value_weights_become_morphable():
    g = k7_torus(K7_MOVED)
    assert convex_faces(g).ok
    lam = mean_value_weights(g)
    assert not is_morphable(lam, g.map, g.translations)[0]
    mu = morphable_scaling(lam, g).weights
    assert column_sum_deviation(mu, g.map, g.translations) <= 1e-9
    assert lhs_minus_rhs(g, mu) <= 1e-9


def test_normalized_mean_value_weights_of_shifted_grid_not_morphable():
    g, _ = shifted_grid_pair(6)
    lam = per_vertex_normalize(mean_value_weights(g), g.map)
    ok, dev = is_morphable(lam, g.map, g.translations)
    assert not ok and dev > 1e-6
    assert is_morphable(morphable_scaling(lam, g).weights, g.map, g.translations)[0]


def test_symmetric_weights_are_morphable():
    g = periodic_delaunay(20, 3)
    w = np.random.default_rng(1).uniform(0.1, 10.0, g.map.edge_count)[g.map.edge_of]
    ok, dev = is_morphable(w, g.map, g.translations)
    assert ok and dev <= 1e-12


def test_scaling_rejects_bad_weights():
    g = torus_grid(3)
    with pytest.raises(DomainError):
        morphable_scaling(-np.ones(g.map.dart_count), g)
    w = np.ones(g.map.dart_count)
    w[0] = 3.0
    with pytest.raises(DomainError):
        morphable_scaling(w, g)


# ------------------------------------------------------------------- morphs


def test_identity_morph_is_constant():
    g = periodic_delaunay(15, 2)
    M = torus_morph_build(g, g)
    assert isinstance(M, TorusMorph)
    for t in np.linspace(0, 1, 6):
        d = torus_morph_eval(M, t)
        assert np.abs(d.positions - g.positions).max() <= 1e-9


def test_translated_copy_moves_rigidly():
    g = periodic_delaunay(15, 4)
    shift = np.array([0.3, 0.4])
    h = g.with_positions(g.positions + shift)
    M = torus_morph_build(g, h)
    for t in (0.0, 0.25, 0.5, 1.0):
        d = torus_morph_eval(M, t)
        assert np.abs(d.positions - (g.positions + t * shift)).max() <= 1e-9


def test_shifted_grids_frames_valid():
    g0, g1 = shifted_grid_pair(6)
    M = torus_morph_build(g0, g1)
    assert translation_error(g0, torus_morph_eval(M, 0.0)) <= 1e-9 * g0.diameter()
    assert translation_error(g1, torus_morph_eval(M, 1.0)) <= 1e-9 * g1.diameter()
    for t in np.linspace(0, 1, 21):
        d = torus_morph_eval(M, t)
        assert torus_crossing_free(d).ok
        assert convex_faces(d).ok


def test_eval_rejects_t_outside_unit_interval():
    g = torus_grid(2)
    with pytest.raises(ValueError):
        torus_morph_eval(torus_morph_build(g, g), 1.5)


def test_build_rejects_twisted_pair():
    g = torus_grid(3)
    T = np.array(g.translations)
    for d in range(g.map.dart_count):
        if T[d, 1] == 1:
            T[d, 0] += 1
            T[g.map.rev[d], 0] -= 1
    with pytest.raises(NotIsotopicError):
        torus_morph_build(g, TorusDrawing(g.map, g.positions, T))
    with pytest.raises(StructuralError):
        torus_morph_build(g, torus_grid(4))


def test_nonconvex_input_goes_through_all_ones_drawing():
    h = nonconvex_torus()
    end = random_symmetric_redraw(h, 5)
    assert convex_faces(end).ok
    diags = triangulate_faces(h)
    assert len(diags) == 1
    M = torus_morph_build(h, end)
    assert isinstance(M, CompositeTorusMorph)
    assert len(M.metadata["diagonals_start"]) == len(M.metadata["diagonals_end"]) == 1
    star_weights = M.halves[0].mu1
    assert is_morphable(star_weights, M.halves[0].map, M.halves[0].translations)[0]
    assert translation_error(h, torus_morph_eval(M, 0.0)) <= 1e-9 * h.diameter()
    assert translation_error(end, torus_morph_eval(M, 1.0)) <= 1e-9 * end.diameter()
    for t in np.linspace(0, 1, 21):
        assert torus_crossing_free(torus_morph_eval(M, t)).ok
    # the halves meet at the all-ones drawing
    a = torus_morph_eval(M.halves[0], 1.0)
    b = torus_morph_eval(M.halves[1], 0.0)
    assert np.abs(a.positions - b.positions).max() <= 1e-12


# -------------------------------------------------------------- edge tweaks


def test_identical_weights_have_zero_deviation():
    g = torus_grid(4)
    lam = np.ones(g.map.dart_count)
    assert edge_tweak_displacement_check(lam, lam, g.map, g.translations) == 0.0


def test_symmetric_tweak():
    g = periodic_delaunay(12, 6)
    m = g.map
    lam = np.random.default_rng(2).uniform(0.5, 2.0, m.edge_count)[m.edge_of]
    mu = edge_tweak_realizable(lam, np.ones(m.vertex_count), 4, 0.7, 0.7, m, g.translations)
    assert np.allclose(mu, mu[m.rev])
    assert edge_tweak_displacement_check(lam, mu, m, g.translations) <= 1e-9
    assert np.array_equal(edge_tweak_realizable(lam, np.ones(m.vertex_count), 4, 0.0, 0.0, m, g.translations), lam)


def test_asymmetric_tweak_from_left_null_vector():
    g = k7_torus(K7_MOVED)
    m = g.map
    lam = mean_value_weights(g)
    alpha = left_null_vector(assemble_torus(m, g.translations, lam).L)
    d = 5
    u, v = m.tail[d], m.head[d]
    delta = 0.3
    eps = delta * alpha[u] / alpha[v]
    mu = edge_tweak_realizable(lam, alpha, d, delta, eps, m, g.translations)
    assert not np.allclose(mu, mu[m.rev])
    assert realizability_residual(m, g.translations, mu) <= REALIZABLE_TOL
    assert edge_tweak_displacement_check(lam, mu, m, g.translations) <= 1e-9


def test_tweak_condition_violated():
    g = k7_torus(K7_MOVED)
    m = g.map
    lam = mean_value_weights(g)
    alpha = left_null_vector(assemble_torus(m, g.translations, lam).L)
    with pytest.raises(ConditionViolated):
        edge_tweak_realizable(lam, alpha, 5, 0.3, 0.3 * alpha[m.tail[5]] / alpha[m.head[5]] * 1.01, m, g.translations)


def test_displacement_check_rejects_two_edges():
    g = torus_grid(3)
    lam = np.ones(g.map.dart_count)
    mu = lam.copy()
    mu[[0, 2]] = 2.0
    with pytest.raises(StructuralError):
        edge_tweak_displacement_check(lam, mu, g.map, g.translations)


# --------------------------------------------------------------- properties


@settings(max_examples=10, deadline=None)
@given(st.integers(3, 6), st.integers(0, 10**6))
def test_interpolated_morphable_weights_stay_morphable(k, seed):
    r = np.random.default_rng(seed)
    g0, g1 = random_shifted_grids(k, r)
    mu0 = morphable_scaling(mean_value_weights(g0), g0).weights
    mu1 = morphable_scaling(mean_value_weights(g1), g1).weights
    for t in r.random(100):
        mu = interpolate(mu0, mu1, t)
        assert column_sum_deviation(mu, g0.map, g0.translations) <= 1e-9
        assert realizability_residual(g0.map, g0.translations, mu) <= REALIZABLE_TOL


@settings(max_examples=10, deadline=None)
@given(st.integers(4, 30), st.integers(0, 10**6))
def test_scaling_keeps_drawing_barycentric(n, seed):
    g = random_symmetric_redraw(periodic_delaunay(n, seed), seed)
    mw = morphable_scaling(mean_value_weights(g), g)
    assert np.all(mw.alpha > 0) and mw.alpha.max() == pytest.approx(1.0)
    assert lhs_minus_rhs(g, mw.weights) <= 1e-9
    assert is_morphable(mw.weights, g.map, g.translations)[0]
