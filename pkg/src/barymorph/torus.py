"""Morphs between isotopic geodesic torus drawings via morphable weights.

A weight vector is morphable when every column of ``L`` and ``H`` sums to
zero.  Such vectors are realizable and closed under convex combination, so
interpolating two morphable vectors and re-solving gives a continuous family
of convex drawings.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .combmap import TorusDrawing, normalize_isotopy
from .errors import ConditionViolated, DomainError, MorphError, StructuralError, UnrealizableError
from .linsys import assemble_torus, left_null_vector, realizability_residual, solve_floater
from .predicates import orient
from .validation import convex_faces
from .weights import barycentric_residual, interpolate, mean_value_weights

log = logging.getLogger(__name__)

MORPHABLE_TOL = 1e-9
TWEAK_TOL = 1e-12


@dataclass(frozen=True)
class MorphableWeights:
    weights: np.ndarray
    alpha: np.ndarray  # per-vertex scaling that produced the weights


def column_sum_deviation(weights, map, translations):
    """Largest column sum of ``L`` and ``H`` after scaling weights to max 1."""
    w = np.asarray(weights, dtype=float)
    top = np.abs(w).max()
    if top == 0:
        return 0.0
    s = assemble_torus(map, translations, w / top)
    col_l = np.abs(np.asarray(s.L.sum(axis=0)).ravel()).max()
    col_h = np.abs(s.H.sum(axis=0)).max()
    return float(max(col_l, col_h))


def is_morphable(weights, map, translations, tol=MORPHABLE_TOL):
    """``(morphable, deviation)`` from the column sums of ``L`` and ``H``."""
    dev = column_sum_deviation(weights, map, translations)
    return dev <= tol, dev


def morphable_scaling(lam, drawing, check=True):
    """Scale each vertex's outgoing weights by the left null vector of ``L``.

    The result is still barycentric for ``drawing`` and is morphable.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise DomainError("morphable scaling needs strictly positive weights")
    if check:
        res = barycentric_residual(drawing, lam)
        if res > 1e-9:
            raise DomainError(f"weights are not barycentric for the drawing (residual {res:.3e})")
    m = drawing.map
    alpha = left_null_vector(assemble_torus(m, drawing.translations, lam).L)
    return MorphableWeights(alpha[m.tail] * lam, alpha)


# -------------------------------------------------------------- morphs


@dataclass(frozen=True)
class TorusMorph:
    """Linear interpolation of two morphable weight vectors on one map.

    ``map``/``translations`` may carry auxiliary edges (weight 0 at one end);
    evaluated drawings are restricted to ``base_map``.
    """

    map: object
    translations: np.ndarray
    mu0: np.ndarray
    mu1: np.ndarray
    anchor: int
    anchor_path: np.ndarray  # (2, 2): anchor position at t = 0 and t = 1
    base_map: object = None
    base_translations: np.ndarray = None

    def __post_init__(self):
        if self.base_map is None:
            object.__setattr__(self, "base_map", self.map)
            object.__setattr__(self, "base_translations", self.translations)

    def weights(self, t):
        return interpolate(self.mu0, self.mu1, t)

    def to_dict(self):
        return {
            "kind": "linear",
            "anchor": int(self.anchor),
            "anchor_path": np.asarray(self.anchor_path).tolist(),
            "tau": np.asarray(self.translations).tolist(),
            "mu0": np.asarray(self.mu0).tolist(),
            "mu1": np.asarray(self.mu1).tolist(),
            "base_dart_count": int(self.base_map.dart_count),
        }


@dataclass(frozen=True)
class CompositeTorusMorph:
    """Two linear torus morphs run back to back, each for half the time."""

    halves: tuple
    metadata: dict = field(default_factory=dict)

    @property
    def base_map(self):
        return self.halves[0].base_map

    def to_dict(self):
        return {"kind": "composite", "halves": [h.to_dict() for h in self.halves], "metadata": self.metadata}


def torus_morph_eval(morph, t):
    """The drawing at time ``t`` in ``[0, 1]``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if isinstance(morph, CompositeTorusMorph):
        first, second = morph.halves
        return torus_morph_eval(first, 2 * t) if t <= 0.5 else torus_morph_eval(second, 2 * t - 1)
    mu = morph.weights(t)
    a0, a1 = np.asarray(morph.anchor_path, dtype=float)
    pos = (1.0 - t) * a0 + t * a1
    try:
        P = solve_floater(assemble_torus(morph.map, morph.translations, mu), morph.anchor, pos)
    except UnrealizableError as exc:
        # interpolated morphable weights are always realizable
        raise MorphError(f"internal error: interpolated morphable weights unrealizable at t={t}: {exc}") from exc
    return TorusDrawing(morph.base_map, P, morph.base_translations, check=False)


def _check_pair(start, end):
    if not start.map.same_as(end.map):
        raise StructuralError("drawings must share one combinatorial map")
    return normalize_isotopy(start, end)


def _is_convex(drawing):
    return convex_faces(drawing).ok


def torus_morph_build(start, end, anchor=0):
    """Morph between two isotopic torus drawings.

    Convex inputs are morphed directly by interpolating morphable mean-value
    weights; otherwise the construction passes through the all-ones Floater
    drawing (see :func:`torus_morph_build_nonconvex`).
    """
    g0, g1 = _check_pair(start, end)
    if not (_is_convex(g0) and _is_convex(g1)):
        return torus_morph_build_nonconvex(start, end, anchor)
    mu0 = morphable_scaling(mean_value_weights(g0), g0).weights
    mu1 = morphable_scaling(mean_value_weights(g1), g1).weights
    path = np.array([g0.positions[anchor], g1.positions[anchor]])
    return TorusMorph(g0.map, g0.translations, mu0, mu1, anchor, path)


def triangulate_faces(drawing):
    """Diagonals ``(u, v, tau)`` triangulating every face, by ear clipping in the cover.

    Each face is lifted to a simple polygon; ``tau`` is the integer offset
    accumulated along the face between the two corners.
    """
    out = []
    m = drawing.map
    for f, cyc in enumerate(m.faces()):
        if len(cyc) <= 3:
            continue
        C = drawing.face_corners(f)
        off = drawing.face_offsets(f)
        verts = m.tail[cyc]
        for i, j in _ear_clip(C):
            out.append((int(verts[i]), int(verts[j]), tuple(int(x) for x in off[j] - off[i])))
    return out


def _ear_clip(C):
    idx = list(range(len(C)))
    diags = []
    while len(idx) > 3:
        k = len(idx)
        for r in range(k):
            a, b, c = idx[(r - 1) % k], idx[r], idx[(r + 1) % k]
            if orient(C[a], C[b], C[c]) <= 0:
                continue
            blocked = False
            for q in idx:
                if q in (a, b, c):
                    continue
                if orient(C[a], C[b], C[q]) >= 0 and orient(C[b], C[c], C[q]) >= 0 and orient(C[c], C[a], C[q]) >= 0:
                    blocked = True
                    break
            if not blocked:
                diags.append((a, c))
                idx.pop(r)
                break
        else:
            raise DomainError("face polygon has no ear (not a simple polygon)")
    return diags


def augmented_torus(drawing, diagonals):
    """``drawing`` with extra edges ``(u, v, tau)`` appended as darts ``D+2k``, ``D+2k+1``."""
    m = drawing.map
    if not diagonals:
        return drawing
    pairs = np.array([(u, v) for u, v, _ in diagonals], dtype=np.int64)
    taus = np.array([t for _, _, t in diagonals], dtype=np.int64)
    P = drawing.positions
    dv = P[pairs[:, 1]] + taus - P[pairs[:, 0]]
    new_vec = np.empty((2 * len(pairs), 2))
    new_vec[0::2] = dv
    new_vec[1::2] = -dv
    new_tau = np.empty((2 * len(pairs), 2), dtype=np.int64)
    new_tau[0::2] = taus
    new_tau[1::2] = -taus
    aug = m.with_added_edges(pairs, np.vstack([drawing.dart_vectors(), new_vec]))
    return TorusDrawing(aug, P, np.vstack([drawing.translations, new_tau]), check=False)


def all_ones_drawing(drawing, anchor=0, anchor_position=None):
    """Floater drawing of ``drawing``'s map and translations for unit weights."""
    m = drawing.map
    pos = drawing.positions[anchor] if anchor_position is None else anchor_position
    P = solve_floater(assemble_torus(m, drawing.translations, np.ones(m.dart_count)), anchor, pos)
    return TorusDrawing(m, P, drawing.translations, check=False)


def _half(g, star, diagonals, anchor, toward_star):
    T = augmented_torus(g, diagonals)
    mu = morphable_scaling(mean_value_weights(T), T).weights
    D = g.map.dart_count
    mu_star = np.zeros(T.map.dart_count)
    mu_star[:D] = 1.0
    path = np.array([g.positions[anchor], star.positions[anchor]])
    if toward_star:
        return TorusMorph(T.map, T.translations, mu, mu_star, anchor, path, g.map, g.translations)
    return TorusMorph(T.map, T.translations, mu_star, mu, anchor, path[::-1], g.map, g.translations)


def torus_morph_build_nonconvex(start, end, anchor=0):
    """Composite morph ``start -> G* -> end`` through the all-ones Floater drawing ``G*``.

    Each input is triangulated; the diagonals are added to ``G*`` too (its
    faces are convex) with weight 0 there.  Each half interpolates between the
    morphable scaling of the triangulated input's mean-value weights and the
    all-ones weights with zeroed diagonals.  Diagonals are dropped from the
    emitted frames.
    """
    g0, g1 = _check_pair(start, end)
    mid = 0.5 * (g0.positions[anchor] + g1.positions[anchor])
    star = all_ones_drawing(g0, anchor, mid)
    d0 = triangulate_faces(g0)
    d1 = triangulate_faces(g1)
    first = _half(g0, star, d0, anchor, toward_star=True)
    second = _half(g1, star, d1, anchor, toward_star=False)
    meta = {"diagonals_start": [list(x[:2]) + list(x[2]) for x in d0], "diagonals_end": [list(x[:2]) + list(x[2]) for x in d1]}
    return CompositeTorusMorph((first, second), meta)


def translation_error(a, b):
    """Max vertex distance between two representations after the best global translation.

    ``b`` is first re-coordinatized onto ``a``'s translation vectors.
    """
    _, b = normalize_isotopy(a, b)
    d = a.positions - b.positions
    shift = 0.5 * (d.max(axis=0) + d.min(axis=0))
    return float(np.hypot(*(d - shift).T).max())


# --------------------------------------------------------- edge tweaks


def _changed_edge(lam, mu, map):
    diff = np.flatnonzero(np.asarray(lam) != np.asarray(mu))
    if diff.size == 0:
        return None
    darts = set(diff.tolist())
    d = int(diff[0])
    if not darts <= {d, int(map.rev[d])}:
        raise StructuralError("weight vectors differ on more than one edge")
    return d


def edge_tweak_displacement_check(lam, mu, map, translations, anchor=0):
    """Max ``|cross(p^mu_w - p^lam_w, lifted direction of d)| / diameter**2``.

    Both vectors must be realizable and differ only on one edge's darts.
    """
    d = _changed_edge(lam, mu, map)
    if d is None:
        return 0.0
    tau = np.asarray(translations)
    Pl = solve_floater(assemble_torus(map, tau, lam), anchor)
    Pm = solve_floater(assemble_torus(map, tau, mu), anchor)
    gl = TorusDrawing(map, Pl, tau, check=False)
    direction = gl.dart_vectors()[d]
    disp = Pm - Pl
    cr = disp[:, 0] * direction[1] - disp[:, 1] * direction[0]
    return float(np.abs(cr).max() / gl.diameter() ** 2)


def edge_tweak_realizable(lam, alpha, d, delta, eps, map, translations):
    """Change dart ``d`` by ``delta`` and its reversal by ``eps``.

    Requires ``delta * alpha[tail d] == eps * alpha[head d]`` (relative
    tolerance 1e-12); under that condition ``alpha`` stays a left null vector
    with ``alpha H = 0``, so the result is realizable.
    """
    lam = np.asarray(lam, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    u, v = int(map.tail[d]), int(map.head[d])
    lhs, rhs = delta * alpha[u], eps * alpha[v]
    scale = max(abs(lhs), abs(rhs), np.finfo(float).tiny)
    if abs(lhs - rhs) > TWEAK_TOL * scale:
        raise ConditionViolated(f"delta*alpha_tail = {lhs!r} differs from eps*alpha_head = {rhs!r}")
    mu = lam.copy()
    mu[d] += delta
    mu[map.rev[d]] += eps
    if np.any(mu <= 0):
        raise DomainError("tweaked weights are not strictly positive")
    res = realizability_residual(map, translations, mu)
    if res > 1e-9:
        raise UnrealizableError(f"tweaked weights unrealizable (residual {res:.3e})", residual=res)
    return mu
