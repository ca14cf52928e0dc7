"""JSON and SVG serialization of drawings, weights, schedules and torus morphs.

Floats are written with Python's shortest round-trip repr, so save followed by
load reproduces every value bit for bit.
"""
import json
from pathlib import Path

import numpy as np

from .combmap import CombinatorialMap, PlanarDrawing, TorusDrawing, universal_cover_patch
from .errors import StructuralError
from .planar import MorphSchedule, Transition
from .torus import CompositeTorusMorph, TorusMorph


def _read_json(src):
    if isinstance(src, (str, Path)):
        try:
            with open(src) as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructuralError(f"{src}: invalid JSON ({exc})") from exc
    return src


def _write_json(obj, dst):
    text = json.dumps(obj)
    if dst is None:
        return text
    Path(dst).write_text(text + "\n")
    return text


# ----------------------------------------------------------------- drawings


def map_to_dict(m, translations=None):
    darts = []
    for d in range(m.dart_count):
        item = {"tail": int(m.tail[d]), "rev": int(m.rev[d]), "next": int(m.next[d])}
        if translations is not None:
            item["tau"] = [int(x) for x in translations[d]]
        darts.append(item)
    return {"vertices": int(m.vertex_count), "darts": darts}


def drawing_to_dict(drawing):
    if isinstance(drawing, TorusDrawing):
        out = {"kind": "torus", **map_to_dict(drawing.map, drawing.translations)}
    else:
        out = {"kind": "planar", **map_to_dict(drawing.map), "outer_face": int(drawing.outer_face)}
    out["positions"] = np.asarray(drawing.positions).tolist()
    return out


def _map_from_dict(obj):
    if "darts" not in obj:
        return None, None
    try:
        n = int(obj["vertices"])
        darts = obj["darts"]
        tail = [int(d["tail"]) for d in darts]
        rev = [int(d["rev"]) for d in darts]
        nxt = [int(d["next"]) for d in darts]
        tau = [d["tau"] for d in darts] if darts and "tau" in darts[0] else None
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed map: {exc}") from exc
    return CombinatorialMap(tail, rev, nxt, n), tau


def drawing_from_dict(obj, check=True):
    """Load a drawing.

    Either ``darts`` (with ``tail``, ``rev``, ``next`` and, on the torus,
    ``tau``) or ``edges`` (vertex pairs, plus ``taus`` on the torus; the
    rotation is then taken from the positions) must be present.
    """
    obj = _read_json(obj)
    if "positions" not in obj:
        raise StructuralError("drawing has no positions")
    P = np.asarray(obj["positions"], dtype=float)
    kind = obj.get("kind", "torus" if ("taus" in obj or _has_tau(obj)) else "planar")
    m, tau = _map_from_dict(obj)
    if m is None:
        if "edges" not in obj:
            raise StructuralError("drawing needs 'darts' or 'edges'")
        edges = np.asarray(obj["edges"], dtype=np.int64).reshape(-1, 2)
        if kind == "torus":
            from .generators import torus_from_edges

            return torus_from_edges(P, edges, obj["taus"])
        m = CombinatorialMap.from_edge_list(len(P), edges, P[edges[:, 1]] - P[edges[:, 0]])
        return PlanarDrawing(m, P, obj.get("outer_face"), check=check)
    if kind == "torus":
        if tau is None:
            raise StructuralError("torus drawing darts need 'tau'")
        return TorusDrawing(m, P, np.asarray(tau, dtype=np.int64), check=check)
    return PlanarDrawing(m, P, obj.get("outer_face"), check=check)


def _has_tau(obj):
    darts = obj.get("darts") or []
    return bool(darts) and "tau" in darts[0]


def load_drawing(path, check=True):
    return drawing_from_dict(_read_json(path), check)


def save_drawing(drawing, path=None):
    return _write_json(drawing_to_dict(drawing), path)


def load_weights(path, dart_count=None):
    obj = _read_json(path)
    if isinstance(obj, dict):
        obj = obj.get("weights")
    try:
        w = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"malformed weights: {exc}") from exc
    if w.ndim != 1 or (dart_count is not None and len(w) != dart_count):
        raise StructuralError(f"weights must be a flat array of length {dart_count}")
    return w


def save_weights(w, path=None):
    return _write_json(np.asarray(w, dtype=float).tolist(), path)


# --------------------------------------------------------------- schedules


def schedule_to_dict(schedule):
    out = {"map": map_to_dict(schedule.map), "outer_face": int(schedule.outer_face)}
    out.update(schedule.to_dict())
    return out


def schedule_from_dict(obj):
    obj = _read_json(obj)
    m, _ = _map_from_dict(obj["map"])
    frames = [np.asarray(f, dtype=float) for f in obj["frames"]]
    trs = [
        Transition(t["edge"], tuple(t["darts"]), t["kind"], t["stage"], None if t["aux_pair"] is None else tuple(t["aux_pair"]))
        for t in obj["transitions"]
    ]
    aux = [[tuple(p) for p in a] for a in obj["frame_aux"]]
    return MorphSchedule(m, int(obj["outer_face"]), frames, trs, aux)


def torus_morph_to_dict(morph):
    out = {"map": map_to_dict(morph.base_map, _base_tau(morph))}
    out.update(morph.to_dict())
    if isinstance(morph, TorusMorph):
        out["aux_map"] = map_to_dict(morph.map, morph.translations)
    else:
        out["aux_maps"] = [map_to_dict(h.map, h.translations) for h in morph.halves]
    return out


def _base_tau(morph):
    return morph.halves[0].base_translations if isinstance(morph, CompositeTorusMorph) else morph.base_translations


def torus_morph_from_dict(obj):
    obj = _read_json(obj)
    base, base_tau = _map_from_dict(obj["map"])
    base_tau = np.asarray(base_tau, dtype=np.int64)

    def linear(h, aux):
        m, tau = _map_from_dict(aux)
        return TorusMorph(
            m, np.asarray(tau, dtype=np.int64), np.asarray(h["mu0"]), np.asarray(h["mu1"]),
            int(h["anchor"]), np.asarray(h["anchor_path"]), base, base_tau,
        )

    if obj["kind"] == "linear":
        return linear(obj, obj["aux_map"])
    halves = tuple(linear(h, a) for h, a in zip(obj["halves"], obj["aux_maps"]))
    return CompositeTorusMorph(halves, obj.get("metadata", {}))


# --------------------------------------------------------------------- SVG


def _svg(lines, box, size=480, margin=12):
    x0, y0, x1, y1 = box
    w = max(x1 - x0, 1e-12)
    h = max(y1 - y0, 1e-12)
    s = (size - 2 * margin) / max(w, h)

    def tx(x, y):
        return margin + (x - x0) * s, size - margin - (y - y0) * s

    body = []
    for (xa, ya, xb, yb), style in lines:
        (a, b), (c, d) = tx(xa, ya), tx(xb, yb)
        body.append(f'<polyline points="{a:.3f},{b:.3f} {c:.3f},{d:.3f}" {style}/>')
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
        '<rect width="100%" height="100%" fill="white"/>\n' + "\n".join(body) + "\n</svg>\n"
    )


EDGE = 'fill="none" stroke="black" stroke-width="1"'
HIGHLIGHT = 'fill="none" stroke="red" stroke-width="2.5"'
DOMAIN = 'fill="none" stroke="#4a7fd0" stroke-width="1" stroke-dasharray="4 3"'


def planar_svg(drawing, highlight=None):
    """One polyline per edge; edge ``highlight`` is drawn red."""
    m = drawing.map
    P = drawing.positions
    lines = []
    for e, (d, _) in enumerate(m.edges):
        seg = (*P[m.tail[d]], *P[m.head[d]])
        lines.append((seg, HIGHLIGHT if e == highlight else EDGE))
    lines.sort(key=lambda item: item[1] == HIGHLIGHT)
    lo, hi = P.min(axis=0), P.max(axis=0)
    return _svg(lines, (lo[0], lo[1], hi[0], hi[1]))


def torus_svg(drawing, k=2, highlight=None):
    """``k x k`` universal-cover patch with the fundamental domains outlined."""
    d = drawing.normalized()
    patch = universal_cover_patch(d, k)
    m = d.map
    lower = patch.dart < m.rev[patch.dart]
    lines = []
    for seg, dart in zip(patch.dart_segments[lower], patch.dart[lower]):
        lines.append((tuple(seg), HIGHLIGHT if highlight is not None and m.edge_of[dart] == highlight else EDGE))
    for i in range(k + 1):
        lines.append(((i, 0, i, k), DOMAIN))
        lines.append(((0, i, k, i), DOMAIN))
    pts = patch.dart_segments.reshape(-1, 2)
    lo = np.minimum(pts.min(axis=0), 0)
    hi = np.maximum(pts.max(axis=0), k)
    return _svg(lines, (lo[0], lo[1], hi[0], hi[1]))


def drawing_svg(drawing, k=2, highlight=None):
    if isinstance(drawing, TorusDrawing):
        return torus_svg(drawing, k, highlight)
    return planar_svg(drawing, highlight)
