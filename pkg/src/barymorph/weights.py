"""Barycentric dart weights: mean-value coordinates and weight arithmetic.

Weight vectors are plain float arrays indexed by dart id.
"""
import numpy as np

from .combmap import PlanarDrawing, TorusDrawing
from .errors import DegenerateInputError, DomainError, StructuralError

RESIDUAL_TOL = 1e-9


def dart_vectors(drawing):
    """Drawn displacement of every dart (lifted through ``tau`` on the torus)."""
    if isinstance(drawing, TorusDrawing):
        return drawing.dart_vectors()
    m = drawing.map
    return drawing.positions[m.head] - drawing.positions[m.tail]


def _tan_half(u, w):
    # tan of half the ccw angle from u to w; valid while cross(u, w) > 0
    cross = u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0]
    dot = u[:, 0] * w[:, 0] + u[:, 1] * w[:, 1]
    nu = np.hypot(u[:, 0], u[:, 1])
    nw = np.hypot(w[:, 0], w[:, 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        return (nu * nw - dot) / cross, cross


def _constrained_darts(drawing):
    if isinstance(drawing, PlanarDrawing):
        return drawing.interior_mask[drawing.map.tail]
    return np.ones(drawing.map.dart_count, dtype=bool)


def mean_value_weights(drawing, check=True):
    """Floater's mean-value weights for every dart of a convex drawing.

    ``lambda[u->v] = (tan(a/2) + tan(b/2)) / |p_v - p_u|`` where ``a`` and ``b``
    are the angles at ``u`` between the dart and its two rotation neighbours.
    For planar drawings only darts leaving interior vertices are constrained;
    darts leaving outer-face vertices get weight 1 (they do not enter the
    system).
    """
    m = drawing.map
    vec = dart_vectors(drawing)
    length = np.hypot(vec[:, 0], vec[:, 1])
    mask = _constrained_darts(drawing)
    if np.any(length[mask] == 0):
        raise DegenerateInputError("zero-length edge")
    t_next, c_next = _tan_half(vec, vec[m.next])
    t_prev, c_prev = _tan_half(vec[m.prev], vec)
    bad = mask & ((c_next <= 0) | (c_prev <= 0))
    if np.any(bad):
        v = int(m.tail[np.flatnonzero(bad)[0]])
        raise DomainError(f"vertex {v} is not strictly inside its neighbourhood (non-convex face)")
    lam = np.ones(m.dart_count)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam[mask] = (t_next[mask] + t_prev[mask]) / length[mask]
    if check:
        res = barycentric_residual(drawing, lam)
        if res > RESIDUAL_TOL:
            raise DegenerateInputError(f"mean-value weights violate the barycentric system (residual {res:.3e})")
    return lam


def barycentric_residual(drawing, weights):
    """Max per-vertex residual of the barycentric system, relative to the diameter.

    Each constrained vertex contributes ``|sum_d w_d (p_head + tau_d - p_u)| /
    sum_d w_d``.
    """
    m = drawing.map
    w = np.asarray(weights, dtype=float)
    vec = dart_vectors(drawing)
    mask = _constrained_darts(drawing)
    n = m.vertex_count
    sx = np.bincount(m.tail[mask], weights=(w * vec[:, 0])[mask], minlength=n)
    sy = np.bincount(m.tail[mask], weights=(w * vec[:, 1])[mask], minlength=n)
    tot = np.bincount(m.tail[mask], weights=w[mask], minlength=n)
    has = tot > 0
    if not np.any(has):
        return 0.0
    r = np.hypot(sx[has], sy[has]) / tot[has]
    return float(r.max() / drawing.diameter())


def interpolate(lam, mu, t):
    """Componentwise ``(1 - t) * lam + t * mu``."""
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if lam.shape != mu.shape:
        raise StructuralError("weight vectors are defined on different dart sets")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"interpolation parameter must lie in [0, 1], got {t}")
    return (1.0 - t) * lam + t * mu


def per_vertex_normalize(lam, map):
    """Scale the darts leaving each vertex so that their weights sum to 1."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (map.dart_count,):
        raise StructuralError("weight vector length does not match the dart count")
    tot = np.bincount(map.tail, weights=lam, minlength=map.vertex_count)
    if np.any(tot <= 0):
        v = int(np.flatnonzero(tot <= 0)[0])
        raise DegenerateInputError(f"vertex {v} has no outgoing dart with positive weight")
    return lam / tot[map.tail]


def check_weights(lam, map, strict=True, auxiliary=None):
    """Validate a weight vector; zeros are allowed only on ``auxiliary`` darts."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (map.dart_count,):
        raise StructuralError("weight vector length does not match the dart count")
    if not np.all(np.isfinite(lam)) or np.any(lam < 0):
        raise DomainError("weights must be finite and nonnegative")
    if strict:
        zero = lam == 0
        if auxiliary is not None:
            zero &= ~np.asarray(auxiliary, dtype=bool)
        if np.any(zero):
            raise DomainError("zero weight on a non-auxiliary dart")
    return lam


def is_symmetric(lam, map, rtol=0.0):
    lam = np.asarray(lam, dtype=float)
    return bool(np.all(np.abs(lam - lam[map.rev]) <= rtol * np.abs(lam).max()))
