"""Command-line frontend: ``barymorph embed | morph-planar | morph-torus | validate | demo``.

Exit codes: 0 success, 2 malformed input, 3 unrealizable weights, 4 drawings
not isotopic, 5 validation failure, 6 input outside an operation's domain.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .combmap import PlanarDrawing, TorusDrawing
from .demos import DEMOS
from .errors import MorphError, StructuralError, ValidationFailure
from .linsys import assemble_torus, floater_drawing, least_squares_residual, solve_floater
from .planar import morph, step_bound
from .torus import torus_morph_build, torus_morph_eval
from .validation import ValidationReport, convex_faces, crossing_free, morph_frames_valid

log = logging.getLogger("barymorph")

EXIT_OK = 0
EXIT_MALFORMED = 2


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    frames: int = 10
    samples: int = 11
    patch: int = 2
    edge_order: str = "input"
    seed: int = 0
    output: Path = None
    format: str = "json"
    validate: bool = True

    def __post_init__(self):
        if self.frames < 2:
            raise StructuralError("--frames must be at least 2")
        if self.samples < 2:
            raise StructuralError("--samples must be at least 2")
        if self.patch < 1:
            raise StructuralError("--patch must be at least 1")


def _config(args):
    return RunConfig(
        command=args.command,
        inputs=[getattr(args, a) for a in ("graph", "start", "end", "drawing") if getattr(args, a, None)],
        frames=getattr(args, "frames", None) or 10,
        samples=getattr(args, "samples", 11),
        patch=getattr(args, "patch", 2),
        edge_order=getattr(args, "edge_order", "input"),
        seed=getattr(args, "seed", 0),
        output=Path(args.output) if getattr(args, "output", None) else None,
        format=getattr(args, "format", "json"),
        validate=not getattr(args, "no_validate", False),
    )


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def _write_drawing(drawing, path, fmt, k, highlight=None):
    path = Path(path)
    if fmt == "svg":
        path.write_text(io.drawing_svg(drawing, k, highlight))
    else:
        io.save_drawing(drawing, path)


def _drawing_report(drawing):
    rep = ValidationReport()
    rep.extend(crossing_free(drawing))
    rep.extend(convex_faces(drawing))
    return rep


def _require_ok(rep, what):
    if not rep.ok:
        raise ValidationFailure(f"{what}: {len(rep.violations)} violation(s)", rep)


# ----------------------------------------------------------------- commands


def cmd_embed(args, cfg):
    d = io.load_drawing(args.graph)
    w = io.load_weights(args.weights, d.map.dart_count) if args.weights else np.ones(d.map.dart_count)
    if isinstance(d, TorusDrawing):
        a = args.anchor
        P = solve_floater(assemble_torus(d.map, d.translations, w), a, d.positions[a])
        out = TorusDrawing(d.map, P, d.translations, check=False)
    else:
        out = floater_drawing(d, w)
    if cfg.validate:
        _require_ok(_drawing_report(out), "embedded drawing")
    if cfg.output:
        _write_drawing(out, cfg.output, cfg.format, cfg.patch)
    else:
        sys.stdout.write(io.save_drawing(out) + "\n")
    return EXIT_OK


def cmd_morph_planar(args, cfg):
    start = io.load_drawing(args.start)
    end = io.load_drawing(args.end)
    if not isinstance(start, PlanarDrawing) or not isinstance(end, PlanarDrawing):
        raise StructuralError("morph-planar needs two planar drawings")
    sched = morph(start, end, cfg.edge_order, cfg.seed)
    n = start.map.vertex_count
    bound = step_bound(n, convex=False)
    summary = {"steps": sched.step_count, "bound": bound, "vertices": n}
    if sched.step_count > bound:
        raise ValidationFailure(f"{sched.step_count} transitions exceed the 4n-12 = {bound} bound")
    if cfg.validate:
        rep = morph_frames_valid(sched, cfg.samples)
        summary["valid"] = rep.ok
        _require_ok(rep, "morph schedule")
    if cfg.output:
        cfg.output.mkdir(parents=True, exist_ok=True)
        (cfg.output / "schedule.json").write_text(json.dumps(io.schedule_to_dict(sched)) + "\n")
        for k, P in enumerate(sched.frames):
            nxt = sched.transitions[k] if k < sched.step_count else None
            hl = nxt.edge if nxt is not None and nxt.edge >= 0 else None
            ext = "svg" if cfg.format == "svg" else "json"
            _write_drawing(sched.drawing(k), cfg.output / f"frame_{k:04d}.{ext}", cfg.format, cfg.patch, hl)
    _emit(summary)
    return EXIT_OK


def cmd_morph_torus(args, cfg):
    start = io.load_drawing(args.start)
    end = io.load_drawing(args.end)
    if not isinstance(start, TorusDrawing) or not isinstance(end, TorusDrawing):
        raise StructuralError("morph-torus needs two torus drawings")
    M = torus_morph_build(start, end, args.anchor)
    ts = args.t if args.t else np.linspace(0.0, 1.0, cfg.frames).tolist()
    results = []
    for i, t in enumerate(ts):
        d = torus_morph_eval(M, float(t))
        item = {"t": float(t)}
        if cfg.validate:
            rep = ValidationReport().extend(crossing_free(d))
            rep.extend(convex_faces(d))
            item["valid"] = rep.ok
            _require_ok(rep, f"frame at t={t}")
        if cfg.output:
            cfg.output.mkdir(parents=True, exist_ok=True)
            ext = "svg" if cfg.format == "svg" else "json"
            _write_drawing(d, cfg.output / f"frame_{i:04d}.{ext}", cfg.format, cfg.patch)
        results.append(item)
    if cfg.output:
        (cfg.output / "morph.json").write_text(json.dumps(io.torus_morph_to_dict(M)) + "\n")
    _emit({"frames": results})
    return EXIT_OK


def cmd_validate(args, cfg):
    obj = json.loads(Path(args.drawing).read_text())
    if "frames" in obj and "transitions" in obj:
        rep = morph_frames_valid(io.schedule_from_dict(obj), cfg.samples)
    else:
        d = io.drawing_from_dict(obj)
        rep = _drawing_report(d)
        if isinstance(d, TorusDrawing) and args.weights:
            w = io.load_weights(args.weights, d.map.dart_count)
            res = least_squares_residual(assemble_torus(d.map, d.translations, w))
            _emit({"residual": res})
    _emit(rep.to_dict())
    if not rep.ok:
        return ValidationFailure.exit_code
    return EXIT_OK


def cmd_demo(args, cfg):
    fn = DEMOS[args.name]
    res = fn(args.layers) if args.name == "nested-squares" else fn()
    drawing = res.pop("drawing", None)
    if args.name == "nested-squares":
        res["monitor"] = [dict(zip(("layers", "inner_diameter", "residual", "crossing_free", "convex"), r)) for r in res["monitor"]]
    if cfg.output and drawing is not None:
        cfg.output.mkdir(parents=True, exist_ok=True)
        _write_drawing(drawing, cfg.output / f"{args.name}.{cfg.format}", cfg.format, cfg.patch)
    _emit(res)
    return EXIT_OK if res["passed"] else ValidationFailure.exit_code


# ------------------------------------------------------------------ parser


def build_parser():
    p = argparse.ArgumentParser(prog="barymorph", description="Barycentric morphs of planar and torus drawings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, frames=False):
        sp.add_argument("-o", "--output", help="output file or directory")
        sp.add_argument("--format", choices=("svg", "json"), default="json")
        sp.add_argument("--patch", type=int, default=2, help="universal-cover patch size for torus SVGs")
        sp.add_argument("--samples", type=int, default=11, help="interpolation samples per transition")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--no-validate", action="store_true")
        if frames:
            sp.add_argument("--frames", type=int, default=None)

    e = sub.add_parser("embed", help="solve for the Floater drawing of a map")
    e.add_argument("graph")
    e.add_argument("--weights")
    e.add_argument("--anchor", type=int, default=0)
    common(e)

    mp = sub.add_parser("morph-planar", help="morph between two planar drawings")
    mp.add_argument("start")
    mp.add_argument("end")
    mp.add_argument("--edge-order", choices=("input", "random"), default="input")
    common(mp)

    mt = sub.add_parser("morph-torus", help="morph between two isotopic torus drawings")
    mt.add_argument("start")
    mt.add_argument("end")
    mt.add_argument("--t", type=float, nargs="+", help="explicit times in [0, 1]")
    mt.add_argument("--anchor", type=int, default=0)
    common(mt, frames=True)

    v = sub.add_parser("validate", help="check a drawing or a schedule")
    v.add_argument("drawing")
    v.add_argument("--weights", help="also report the torus least-squares residual")
    common(v)

    dm = sub.add_parser("demo", help="reproduce a documented failure or decay")
    dm.add_argument("name", choices=sorted(DEMOS))
    dm.add_argument("--layers", type=int, default=10)
    common(dm)
    return p


COMMANDS = {
    "embed": cmd_embed,
    "morph-planar": cmd_morph_planar,
    "morph-torus": cmd_morph_torus,
    "validate": cmd_validate,
    "demo": cmd_demo,
}


def main(argv=None):
    logging.basicConfig(
        level=os.environ.get("BARYMORPH_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except MorphError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        if getattr(exc, "residual", None) is not None:
            diag["residual"] = exc.residual
        if getattr(exc, "report", None) is not None:
            diag["report"] = exc.report.to_dict()
        sys.stderr.write(json.dumps(diag) + "\n")
        return exc.exit_code
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(json.dumps({"error": "InputMalformed", "message": str(exc), "exit_code": EXIT_MALFORMED}) + "\n")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
