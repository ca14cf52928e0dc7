"""Drawing generators used by tests, demos and the acceptance suite."""
import numpy as np
from scipy.spatial import Delaunay

from .combmap import CombinatorialMap, PlanarDrawing, TorusDrawing
from .errors import DomainError


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


# ------------------------------------------------------------------- torus


def torus_from_edges(positions, edges, taus):
    """Torus drawing whose dart ``2e`` is ``edges[e]`` with translation ``taus[e]``."""
    P = np.asarray(positions, dtype=float)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    taus = np.asarray(taus, dtype=np.int64).reshape(-1, 2)
    vec = P[edges[:, 1]] + taus - P[edges[:, 0]]
    m = CombinatorialMap.from_edge_list(len(P), edges, vec)
    T = np.empty((2 * len(edges), 2), dtype=np.int64)
    T[0::2] = taus
    T[1::2] = -taus
    return TorusDrawing(m, P, T)


def torus_grid(k, l=None, row_shift=None, col_shift=None):
    """``k x l`` toroidal grid; vertex ``i + k*j`` sits at ``(i/k, j/l)``.

    ``row_shift[j]`` moves row ``j`` horizontally and ``col_shift[i]`` moves
    column ``i`` vertically (torus units).  Shifting only rows, or only
    columns, keeps every face a parallelogram.
    """
    l = k if l is None else l
    rs = np.zeros(l) if row_shift is None else np.asarray(row_shift, dtype=float)
    cs = np.zeros(k) if col_shift is None else np.asarray(col_shift, dtype=float)
    P = np.array([(i / k + rs[j], j / l + cs[i]) for j in range(l) for i in range(k)])
    edges, taus = [], []
    for j in range(l):
        for i in range(k):
            v = i + k * j
            edges.append((v, (i + 1) % k + k * j))
            taus.append((1 if i == k - 1 else 0, 0))
            edges.append((v, i + k * ((j + 1) % l)))
            taus.append((0, 1 if j == l - 1 else 0))
    return torus_from_edges(P, edges, taus)


def shifted_grid_pair(k, shift=0.5, row=0, col=0):
    """Two isotopic grids: one row shifted ``shift`` left, one column ``shift`` down."""
    rs = np.zeros(k)
    rs[row] = -shift
    cs = np.zeros(k)
    cs[col] = -shift
    return torus_grid(k, row_shift=rs), torus_grid(k, col_shift=cs)


def random_shifted_grids(k, rng=None):
    """Grid with random row shifts and grid with random column shifts."""
    rng = _rng(rng)
    return (
        torus_grid(k, row_shift=rng.uniform(-0.5, 0.5, k)),
        torus_grid(k, col_shift=rng.uniform(-0.5, 0.5, k)),
    )


def k7_torus(moved=None):
    """The 7-vertex triangulation of the torus (complete graph ``K_7``).

    Vertex ``i`` sits at ``i * (1/7, 3/7) mod 1``; vertex ``i`` is adjacent to
    ``i+1``, ``i+2``, ``i+3`` along lattice vectors ``b``, ``a``, ``a+b``.
    ``moved`` optionally maps vertex ids to replacement positions.
    """
    base = np.array([[i / 7.0, (3 * i / 7.0) % 1.0] for i in range(7)])
    b = np.array([1 / 7.0, 3 / 7.0])
    a = np.array([2 / 7.0, -1 / 7.0])
    edges, taus = [], []
    for i in range(7):
        for step, vec in ((1, b), (2, a), (3, a + b)):
            j = (i + step) % 7
            edges.append((i, j))
            taus.append(np.round(base[i] + vec - base[j]).astype(np.int64))
    P = base.copy()
    for v, p in (moved or {}).items():
        P[v] = p
    return torus_from_edges(P, edges, taus)


def periodic_delaunay(n, rng=None, tries=50):
    """Torus triangulation from the Delaunay triangulation of ``n`` random points.

    Retries with fresh points until the result is a valid triangulation
    (``2n`` triangular faces, every vertex of degree at least 3).
    """
    rng = _rng(rng)
    for _ in range(tries):
        pts = rng.random((n, 2))
        try:
            d = _periodic_delaunay_from_points(pts)
        except (DomainError, ValueError):
            continue
        if d is not None:
            return d
    raise DomainError(f"could not build a periodic Delaunay triangulation with n={n}")


def _periodic_delaunay_from_points(pts):
    n = len(pts)
    shifts = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)])
    big = (pts[None, :, :] + shifts[:, None, :]).reshape(-1, 2)
    vid = np.tile(np.arange(n), len(shifts))
    cell = np.repeat(shifts, n, axis=0)
    tri = Delaunay(big)
    keyed = {}
    central = np.all(cell == 0, axis=1)
    for s in tri.simplices:
        if not central[s].any():
            continue
        # translation-invariant key: smallest over the three cyclic rotations
        keys = []
        for r in range(3):
            base = cell[s[r]]
            keys.append(tuple((int(vid[s[(r + c) % 3]]), *map(int, cell[s[(r + c) % 3]] - base)) for c in range(3)))
        keyed[min(keys)] = True
    edges = {}
    for key in keyed:
        for c in range(3):
            u, ux, uy = key[c]
            v, vx, vy = key[(c + 1) % 3]
            tau = (vx - ux, vy - uy)
            e1 = (u, v, tau)
            e2 = (v, u, (-tau[0], -tau[1]))
            if e1 not in edges and e2 not in edges:
                edges[e1] = True
    E = list(edges)
    if len(E) != 3 * n or len(keyed) != 2 * n:
        return None
    d = torus_from_edges(pts, [(u, v) for u, v, _ in E], [t for _, _, t in E])
    faces = d.map.faces()
    if len(faces) != 2 * n or any(len(f) != 3 for f in faces) or d.map.degree().min() < 3:
        return None
    return d


def random_symmetric_redraw(drawing, rng=None, low=0.5, high=2.0):
    """Isotopic convex torus drawing from random symmetric edge weights."""
    from .linsys import assemble_torus, solve_floater

    rng = _rng(rng)
    m = drawing.map
    w_edge = rng.uniform(low, high, m.edge_count)
    w = w_edge[m.edge_of]
    P = solve_floater(assemble_torus(m, drawing.translations, w), 0, drawing.positions[0])
    return TorusDrawing(m, P, drawing.translations)


# ------------------------------------------------------------------ planar


OUTER_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])


def planar_from_edges(positions, edges, outer_face=None):
    P = np.asarray(positions, dtype=float)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    m = CombinatorialMap.from_edge_list(len(P), edges, P[edges[:, 1]] - P[edges[:, 0]])
    return PlanarDrawing(m, P, outer_face)


def random_triangulation(n, rng=None, margin=0.02):
    """Delaunay triangulation of ``n - 3`` random points inside a fixed triangle.

    The outer face is the triangle ``OUTER_TRIANGLE`` (vertices 0, 1, 2), so
    the map is a maximal planar graph with exactly ``3n - 9`` internal edges.
    """
    if n < 4:
        raise ValueError("need at least 4 vertices")
    rng = _rng(rng)
    while True:
        r = rng.dirichlet(np.ones(3), n - 3)
        r = margin + (1 - 3 * margin) * r
        pts = np.vstack([OUTER_TRIANGLE, r @ OUTER_TRIANGLE])
        tri = Delaunay(pts)
        edges = set()
        for s in tri.simplices:
            for a, b in ((s[0], s[1]), (s[1], s[2]), (s[2], s[0])):
                edges.add((min(a, b), max(a, b)))
        if len(edges) == 3 * n - 6:
            return planar_from_edges(pts, sorted(edges))


def random_floater_redraw(drawing, rng=None, spread=3.0):
    """Floater drawing of the same map and outer face for random positive weights."""
    from .linsys import floater_drawing

    rng = _rng(rng)
    w = np.exp(rng.uniform(-np.log(spread), np.log(spread), drawing.map.dart_count))
    return floater_drawing(drawing, w)


def random_triangulation_pair(n, rng=None):
    rng = _rng(rng)
    g = random_triangulation(n, rng)
    return g, random_floater_redraw(g, rng)


def _three_connected(m):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(m.vertex_count))
    G.add_edges_from(zip(m.tail.tolist(), m.head.tolist()))
    return m.vertex_count >= 4 and nx.node_connectivity(G) >= 3


def random_nonconvex_drawing(n, rng=None, removals=None, min_reflex=1, tries=200):
    """3-connected drawing with some non-convex faces.

    Starts from :func:`random_triangulation`, perturbs interior vertices toward
    random positions by Floater redrawing, then deletes internal edges while the
    map stays 3-connected.  Retries until at least ``min_reflex`` reflex
    corners exist.
    """
    from .validation import reflex_corners

    rng = _rng(rng)
    removals = max(1, n // 3) if removals is None else removals
    for _ in range(tries):
        d = random_floater_redraw(random_triangulation(n, rng), rng)
        edges = d.map.edges[:, 0]
        pairs = np.stack([d.map.tail[edges], d.map.head[edges]], axis=1)
        internal = set(d.internal_edges().tolist())
        keep = np.ones(len(pairs), dtype=bool)
        for e in rng.permutation(sorted(internal)):
            if (~keep).sum() >= removals:
                break
            keep[e] = False
            cand = planar_from_edges(d.positions, pairs[keep])
            if not _three_connected(cand.map):
                keep[e] = True
        g = planar_from_edges(d.positions, pairs[keep])
        if len(reflex_corners(g)) >= min_reflex:
            return g
    raise DomainError("could not generate a non-convex 3-connected drawing")


def nested_squares_map(layers):
    """Edges of the nested-squares family: each square is rotated 45 degrees
    against the next outer one and joined to it by a band of triangles."""
    edges = []
    for k in range(layers):
        for i in range(4):
            edges.append((4 * k + i, 4 * k + (i + 1) % 4))
            if k + 1 < layers:
                edges.append((4 * k + i, 4 * (k + 1) + i))
                edges.append((4 * k + i, 4 * (k + 1) + (i - 1) % 4))
    return edges


def nested_squares_reference_positions(layers, ratio=0.5):
    """Straight-line positions for the nested-squares map (used for its rotation system)."""
    P = []
    for k in range(layers):
        r = np.sqrt(2.0) * ratio**k
        for i in range(4):
            th = np.pi / 4 + k * np.pi / 4 + i * np.pi / 2
            P.append((r * np.cos(th), r * np.sin(th)))
    return np.array(P)


def random_nonconvex_pair(n, rng=None, removals=None, tries=200):
    """Two drawings of one 3-connected map, each with at least one reflex corner.

    Both come from Floater redraws of a shared random triangulation with the
    same internal edges deleted.
    """
    from .validation import reflex_corners

    rng = _rng(rng)
    removals = max(1, n // 3) if removals is None else removals
    for _ in range(tries):
        t = random_triangulation(n, rng)
        a = random_floater_redraw(t, rng)
        b = random_floater_redraw(t, rng)
        edges = t.map.edges[:, 0]
        pairs = np.stack([t.map.tail[edges], t.map.head[edges]], axis=1)
        keep = np.ones(len(pairs), dtype=bool)
        for e in rng.permutation(t.internal_edges()):
            if (~keep).sum() >= removals:
                break
            keep[e] = False
            if not _three_connected(planar_from_edges(a.positions, pairs[keep]).map):
                keep[e] = True
        ga = planar_from_edges(a.positions, pairs[keep])
        gb = PlanarDrawing(ga.map, b.positions, ga.outer_face)
        if reflex_corners(ga) and reflex_corners(gb):
            return ga, gb
    raise DomainError("could not generate a non-convex drawing pair")
