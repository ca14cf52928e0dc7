"""Reproductions of known failure modes and the nested-squares precision family.

Each demo returns a plain dict with a ``passed`` flag (the documented failure or
decay was observed) so the CLI and the tests share one code path.
"""
import numpy as np

from .combmap import TorusDrawing
from .errors import UnrealizableError
from .generators import k7_torus, shifted_grid_pair, torus_grid
from .linsys import assemble_torus, fixed_vertex_solve, realizability_residual, solve_floater
from .planar import layer_diameters, nested_squares, nested_squares_precision
from .validation import torus_crossing_free
from .weights import mean_value_weights, per_vertex_normalize

SEPARATION = 1e-6
K7_MOVED = (0.34, 0.78)


def one_heavy_dart(map, dart=0):
    """All-ones weights with dart ``dart`` set to 2."""
    w = np.ones(map.dart_count)
    w[dart] = 2.0
    return w


def bad_weights(sides=(2, 3, 6)):
    """One dart of weight 2 makes the torus system inconsistent on any grid."""
    rows = []
    for k in sides:
        g = torus_grid(k)
        w = one_heavy_dart(g.map)
        res = realizability_residual(g.map, g.translations, w)
        try:
            solve_floater(assemble_torus(g.map, g.translations, w))
            raised = False
        except UnrealizableError:
            raised = True
        rows.append({"n": k * k, "residual": res, "unrealizable": raised and res > SEPARATION})
    return {"name": "bad-weights", "rows": rows, "passed": all(r["unrealizable"] for r in rows)}


def k7_average(moved=K7_MOVED):
    """Average of normalized mean-value weights of two K7 drawings is unrealizable."""
    a = k7_torus()
    b = k7_torus({2: moved})
    la = per_vertex_normalize(mean_value_weights(a), a.map)
    lb = per_vertex_normalize(mean_value_weights(b), b.map)
    ra = realizability_residual(a.map, a.translations, la)
    rb = realizability_residual(b.map, b.translations, lb)
    rav = realizability_residual(a.map, a.translations, 0.5 * (la + lb))
    return {
        "name": "k7-average",
        "residual_start": ra,
        "residual_end": rb,
        "residual_average": rav,
        "passed": rav > SEPARATION,
    }


def steiner_fischer(k=12, row=0, col=0, fixed=0):
    """Fixed-vertex solve of ``(2 lam_left + lam_down) / 3`` on shifted grids."""
    left, down = shifted_grid_pair(k, 0.5, row, col)
    ll = per_vertex_normalize(mean_value_weights(left), left.map)
    ld = per_vertex_normalize(mean_value_weights(down), down.map)
    lam = (2.0 * ll + ld) / 3.0
    P = fixed_vertex_solve(left.map, left.translations, lam, fixed, left.positions[fixed])
    drawing = TorusDrawing(left.map, P, left.translations, check=False)
    report = torus_crossing_free(drawing)
    return {
        "name": "steiner-fischer",
        "n": k * k,
        "fixed_vertex": fixed,
        "residual": realizability_residual(left.map, left.translations, lam),
        "crossings": report.count("crossing"),
        "drawing": drawing,
        "passed": report.count("crossing") >= 1,
    }


def nested_squares_demo(layers=10, max_layers=60):
    """Layer diameters and consecutive ratios, plus the precision monitor."""
    d, _ = nested_squares(layers)
    diam = layer_diameters(d, layers)
    ratios = diam[1:] / diam[:-1]
    monitor, first = nested_squares_precision(max_layers)
    return {
        "name": "nested-squares",
        "layers": layers,
        "diameters": diam.tolist(),
        "ratios": ratios.tolist(),
        "max_ratio": float(ratios.max()),
        "monitor": monitor,
        "first_failure": first,
        "drawing": d,
        "passed": bool(ratios.max() < 0.5),
    }


DEMOS = {
    "bad-weights": bad_weights,
    "k7-average": k7_average,
    "steiner-fischer": steiner_fischer,
    "nested-squares": nested_squares_demo,
}
