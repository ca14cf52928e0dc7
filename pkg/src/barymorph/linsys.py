"""Assembly and solution of the barycentric linear systems.

Planar: for every interior vertex ``u``, ``sum_d w_d (p_head - p_u) = 0`` with
the outer face pinned.  Torus: ``L P = H`` with

    L[i, i] = sum of weights of non-loop darts leaving i
    L[i, j] = -sum of weights of darts i -> j        (i != j)
    H[i]    = sum over darts d leaving i of w_d * tau_d

which is rank ``n - 1`` for strictly positive weights.  All factorizations use
SuperLU (sparse LU with partial pivoting) through :mod:`scipy.sparse.linalg`.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .combmap import PlanarDrawing
from .errors import DegenerateInputError, UnrealizableError

log = logging.getLogger(__name__)

CONSISTENCY_TOL = 1e-8
REALIZABLE_TOL = 1e-9
SEPARATION_TOL = 1e-6


def _lu(A):
    try:
        return spla.splu(sp.csc_matrix(A))
    except RuntimeError as exc:  # exactly singular
        raise DegenerateInputError(f"singular reduced system: {exc}") from exc


# ------------------------------------------------------------------ planar


@dataclass(frozen=True)
class PlanarSystem:
    """Reduced system ``A x = rhs`` over the interior vertices."""

    A: sp.csc_matrix
    rhs: np.ndarray
    interior: np.ndarray
    positions: np.ndarray  # outer positions pinned, interior rows unused

    def solve(self):
        P = np.array(self.positions, dtype=float)
        if len(self.interior):
            P[self.interior] = _lu(self.A).solve(self.rhs)
        return P


def assemble_planar(drawing, weights):
    """Build Floater's system for the map and outer face of ``drawing``.

    Interior positions of ``drawing`` are ignored.  Zero weights are treated as
    absent darts.
    """
    m = drawing.map
    w = np.asarray(weights, dtype=float)
    interior = np.flatnonzero(drawing.interior_mask)
    row = np.full(m.vertex_count, -1, dtype=np.int64)
    row[interior] = np.arange(len(interior))
    t, h = m.tail, m.head
    use = drawing.interior_mask[t] & (t != h) & (w != 0)
    t, h, w = t[use], h[use], w[use]
    k = len(interior)
    diag = np.bincount(row[t], weights=w, minlength=k)
    inner = drawing.interior_mask[h]
    A = sp.coo_matrix(
        (np.r_[diag, -w[inner]], (np.r_[np.arange(k), row[t[inner]]], np.r_[np.arange(k), row[h[inner]]])),
        shape=(k, k),
    ).tocsc()
    P = drawing.positions
    outer = ~inner
    rhs = np.stack(
        [np.bincount(row[t[outer]], weights=w[outer] * P[h[outer], c], minlength=k) for c in (0, 1)],
        axis=1,
    )
    return PlanarSystem(A, rhs, interior, np.array(P))


def floater_drawing(drawing, weights):
    """The Floater drawing of ``drawing``'s map and outer face for ``weights``."""
    return PlanarDrawing(drawing.map, assemble_planar(drawing, weights).solve(), drawing.outer_face, check=False)


# ------------------------------------------------------------------- torus


@dataclass(frozen=True)
class LaplacianSystem:
    L: sp.csr_matrix
    H: np.ndarray

    @property
    def n(self):
        return self.L.shape[0]


def assemble_torus(map, translations, weights):
    """Asymmetric Laplacian ``L`` and right-hand side ``H`` of the torus system."""
    w = np.asarray(weights, dtype=float)
    tau = np.asarray(translations, dtype=float)
    n = map.vertex_count
    t, h = map.tail, map.head
    off = t != h
    O = sp.coo_matrix((-w[off], (t[off], h[off])), shape=(n, n)).tocsr()
    O.sum_duplicates()
    diag = -np.asarray(O.sum(axis=1)).ravel()
    L = (O + sp.diags(diag)).tocsr()
    H = np.stack([np.bincount(t, weights=w * tau[:, c], minlength=n) for c in (0, 1)], axis=1)
    return LaplacianSystem(L, H)


def _reduced_solve(L, H, anchor):
    n = L.shape[0]
    P = np.zeros((n, 2))
    if n == 1:
        return P
    idx = np.flatnonzero(np.arange(n) != anchor)
    Lc = L.tocsr()
    A = Lc[idx][:, idx]
    P[idx] = _lu(A).solve(np.ascontiguousarray(H[idx]))
    return P


def solve_floater(system, anchor=0, anchor_position=(0.0, 0.0)):
    """Solve ``L P = H`` with ``p_anchor`` pinned.

    Raises :class:`UnrealizableError` (carrying the least-squares residual)
    when the system is inconsistent.
    """
    L, H = system.L, system.H
    P = _reduced_solve(L, H, anchor)
    r = np.asarray(L.tocsr()[anchor] @ P).ravel() - H[anchor]
    scale = abs(L[anchor, anchor]) * max(float(np.ptp(P, axis=0).max()) if len(P) > 1 else 0.0, 1.0)
    scale += float(np.abs(H[anchor]).max())
    scale = max(scale, np.finfo(float).tiny)
    rel = float(np.hypot(*r)) / scale
    if rel > CONSISTENCY_TOL:
        res = least_squares_residual(system)
        raise UnrealizableError(
            f"weight vector is not realizable: anchor-row residual {rel:.3e}, least-squares residual {res:.3e}",
            residual=res,
        )
    return P + np.asarray(anchor_position, dtype=float)


def left_null_vector(L):
    """Positive ``alpha`` with ``alpha L = 0``, normalized so ``max(alpha) = 1``.

    Factorizes ``L^T`` with the last row and column removed and fixes
    ``alpha[-1] = 1``.
    """
    L = sp.csr_matrix(L)
    n = L.shape[0]
    if n == 1:
        return np.ones(1)
    A = L.T.tocsc()
    B = A[: n - 1, : n - 1]
    b = -np.asarray(A[: n - 1, n - 1].todense()).ravel()
    try:
        x = spla.splu(B.tocsc()).solve(b)
    except RuntimeError:
        x = np.full(n - 1, np.nan)
    alpha = np.r_[x, 1.0]
    if not np.all(np.isfinite(alpha)) or np.any(alpha <= 0):
        smin = _smallest_singular_value(L)
        raise DegenerateInputError(
            f"Laplacian does not have a positive left null vector (numerical rank failure; "
            f"smallest singular value ~ {smin:.3e})"
        )
    alpha = alpha / alpha.max()
    res = np.abs(alpha @ L).max() if L.nnz else 0.0
    if res > 1e-9 * max(abs(L).max(), 1e-300):
        smin = _smallest_singular_value(L)
        raise DegenerateInputError(
            f"left null vector residual {res:.3e} too large (smallest singular value ~ {smin:.3e})"
        )
    return alpha


def _smallest_singular_value(L):
    if L.shape[0] > 3000:
        return float("nan")
    return float(np.linalg.svd(L.toarray(), compute_uv=False)[-2:].min())


def least_squares_residual(system):
    """Norm of the minimum-norm residual of ``L P = H``.

    The left null space of ``L`` is spanned by ``alpha``, so the residual is the
    projection of ``H`` onto it: ``|alpha H| / |alpha|``.
    """
    alpha = left_null_vector(system.L)
    alpha = alpha / np.linalg.norm(alpha)
    return float(np.linalg.norm(alpha @ system.H))


def realizability_residual(map, translations, weights):
    """Least-squares residual of the torus system after scaling weights to max 1.

    Zero (to within ``REALIZABLE_TOL``) exactly when the weights are realizable.
    """
    w = np.asarray(weights, dtype=float)
    return least_squares_residual(assemble_torus(map, translations, w / w.max()))


def is_realizable(map, translations, weights, tol=REALIZABLE_TOL):
    return realizability_residual(map, translations, weights) <= tol


def fixed_vertex_solve(map, translations, weights, fixed=0, fixed_position=(0.0, 0.0)):
    """Steiner-Fischer style solve: drop ``fixed``'s row, pin its position.

    The remaining system has full rank, so this always returns positions, but
    for unrealizable weights the drawing need not be crossing-free.
    """
    sysm = assemble_torus(map, translations, weights)
    return _reduced_solve(sysm.L, sysm.H, fixed) + np.asarray(fixed_position, dtype=float)


def torus_residual(map, translations, weights, positions):
    """Per-vertex residual ``|L_i P - H_i| / sum of weights leaving i``, maximized."""
    w = np.asarray(weights, dtype=float)
    sysm = assemble_torus(map, translations, w)
    r = sysm.L @ positions - sysm.H
    d = np.maximum(np.bincount(map.tail, weights=w, minlength=map.vertex_count), np.finfo(float).tiny)
    return float((np.hypot(r[:, 0], r[:, 1]) / d).max())


def dump_coo(matrix, fh):
    """Write ``row col value`` lines for every stored entry (debug format)."""
    M = sp.coo_matrix(matrix)
    for i, j, v in zip(M.row, M.col, M.data):
        fh.write(f"{int(i)} {int(j)} {float(v)!r}\n")
