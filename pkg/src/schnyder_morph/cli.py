"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 certification failure,
3 I/O or format error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import io
from .drawing import WeightError, draw, uniform_weights
from .flips import InvalidFlip, flip_sequence, flippable_triangles
from .morph import MorphPlan, WeightSumMismatch, plan_morph, render_frames
from .recognize import recognize
from .schnyder import compute_wood, validate_wood
from .svg import emit_svg, trajectories
from .triangulation import TriangulationError, random_triangulation
from .verify import certify_step

PRNG = "pcg64-v1"

EXIT_OK, EXIT_VALIDATION, EXIT_CERTIFICATION, EXIT_IO = 0, 1, 2, 3


class ValidationFailure(Exception):
    pass


class CertificationFailure(Exception):
    pass


@dataclass
class Manifest:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    seed: int | None = None
    samples: int = 1


def _emit(doc, out) -> None:
    text = io.dumps(doc)
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as e:
            raise io.FormatError(f"cannot write {out}: {e}") from e
    else:
        sys.stdout.write(text)


def _load_T(path):
    return io.triangulation_from_json(io.read_json(path))


def _load_wood(T, path):
    labels = io.wood_labels_from_json(io.read_json(path))
    err = validate_wood(T, labels)
    if err is not None:
        raise ValidationFailure(f"{path}: {err}")
    return io.wood_from_json(io.read_json(path))


def _load_weights(T, path, s=1):
    if path is None:
        return uniform_weights(T, s)
    w = io.weights_from_json(io.read_json(path))
    if len(w.weights) != len(T.faces):
        raise ValidationFailure(f"{path}: {len(w.weights)} weights for {len(T.faces)} faces")
    return w


# -- subcommands --------------------------------------------------------------

def cmd_gen(a, m: Manifest):
    rng = np.random.default_rng(a.seed)
    T = random_triangulation(a.n, rng, flips=a.flips)
    doc = io.triangulation_to_json(T)
    doc["generator"] = {"seed": a.seed, "prng": PRNG, "flips": a.flips}
    _emit(doc, a.out)


def cmd_wood(a, m: Manifest):
    T = _load_T(a.input)
    if a.check:
        err = validate_wood(T, io.wood_labels_from_json(io.read_json(a.check)))
        _emit({"valid": err is None, "violation": None if err is None else
               {"axiom": err.axiom, "where": list(err.where), "message": err.message}}, a.out)
        if err is not None:
            raise ValidationFailure(str(err))
        return
    _emit(io.wood_to_json(compute_wood(T)), a.out)


def cmd_draw(a, m: Manifest):
    T = _load_T(a.input)
    S = _load_wood(T, a.wood) if a.wood else compute_wood(T)
    D = draw(T, S, _load_weights(T, a.weights, a.uniform))
    _emit(io.drawing_to_json(D), a.out)
    if a.svg:
        from .svg import svg_drawing
        with open(a.svg, "w") as fh:
            fh.write(svg_drawing(T, D.coords, D.W, wood=S))


def cmd_flips(a, m: Manifest):
    T = _load_T(a.input)
    S = _load_wood(T, a.wood)
    fl, fo = flippable_triangles(T, S)
    _emit({"flippable": [io.event_to_json(e) for e in fl], "floppable": [io.event_to_json(e) for e in fo]}, a.out)


def cmd_flipseq(a, m: Manifest):
    T = _load_T(a.input)
    seq = flip_sequence(T, _load_wood(T, a.wood_a), _load_wood(T, a.wood_b))
    _emit({"length": len(seq), "events": [io.event_to_json(e) for e in seq]}, a.out)


def cmd_morph(a, m: Manifest):
    T = _load_T(a.input)
    S, S2 = _load_wood(T, a.wood_a), _load_wood(T, a.wood_b)
    w, w2 = _load_weights(T, a.weights_a), _load_weights(T, a.weights_b)
    plan = plan_morph(T, S, w, S2, w2)
    _emit(io.plan_to_json(plan), a.out)
    if a.svg:
        emit_svg(T, render_frames(plan, a.samples), a.svg, plan.W, trajectories(plan) if a.trajectories else None)
    bad = [c for c in plan.certificates if not c.planar]
    if bad:
        raise CertificationFailure(_collapse_message(bad[0]))


def _collapse_message(cert) -> str:
    t = cert.t_star
    return (f"step {cert.step}: face {cert.face} collapses at t* = {t}"
            + (f" (~{float(t):.6f})" if not isinstance(t, Fraction) else ""))


def check_plan(plan: MorphPlan) -> list[str]:
    """Chaining, grid and certificate checks; returns failure messages."""
    problems = []
    n = plan.T.n
    for k, (s, t) in enumerate(zip(plan.steps, plan.steps[1:])):
        if s.end != t.start:
            problems.append(f"steps {k} and {k + 1} do not chain")
    for k, s in enumerate(plan.steps):
        for D in (s.start, s.end):
            for v, c in D.coords.items():
                if any(not isinstance(x, int) for x in c) or not (0 <= c[0] <= 6 * n - 15 and 0 <= c[1] <= 6 * n - 15):
                    problems.append(f"step {k}: vertex {v} at {c} is off the grid")
                    break
        cert = certify_step(plan.T, s, k)
        s.certificate = cert
        if not cert.planar:
            problems.append(_collapse_message(cert))
    return problems


def cmd_verify(a, m: Manifest):
    plan = io.plan_from_json(io.read_json(a.plan))
    problems = check_plan(plan)
    _emit({"steps": len(plan.steps), "certified": not problems, "problems": problems[:20]}, a.out)
    if problems:
        print(problems[0], file=sys.stderr)
        raise CertificationFailure(problems[0])


def cmd_recognize(a, m: Manifest):
    T = _load_T(a.input)
    W, coords = io.coords_from_json(io.read_json(a.coords))
    res = recognize(T, coords, W)
    doc = {"verdict": res.verdict, "message": res.message}
    if res.W is not None:
        doc["W"] = io.rational_to_str(res.W)
    if res.wood is not None:
        doc["wood"] = io.wood_to_json(res.wood)
    if res.weights is not None:
        doc["weights"] = [io.rational_to_str(x) for x in res.weights]
    if res.edge is not None:
        doc["edge"] = list(res.edge)
    if res.face is not None:
        doc["face"] = list(res.face)
        doc["value"] = io.rational_to_str(res.value)
    _emit(doc, a.out)
    if not res.ok:
        raise ValidationFailure(res.message or res.verdict)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schnyder-morph",
                                description="Weighted Schnyder drawings and planar morphs between them.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="output file (default: stdout)")
        return sp

    sp = add("gen", cmd_gen, "Generate a random triangulation.")
    sp.add_argument("--n", type=int, required=True, help="number of vertices (>= 4)")
    sp.add_argument("--seed", type=int, default=0, help="64-bit seed")
    sp.add_argument("--flips", type=int, default=None, help="random edge flips after stacking (default 2n)")

    sp = add("wood", cmd_wood, "Compute a Schnyder wood, or validate one with --check.")
    sp.add_argument("--input", required=True, help="triangulation JSON")
    sp.add_argument("--check", help="wood JSON to validate instead of computing one")

    sp = add("draw", cmd_draw, "Draw a triangulation from a wood and face weights.")
    sp.add_argument("--input", required=True, help="triangulation JSON")
    sp.add_argument("--wood", help="wood JSON (default: computed)")
    sp.add_argument("--weights", help="weights JSON (default: uniform)")
    sp.add_argument("--uniform", type=int, default=1, help="uniform face weight when --weights is absent")
    sp.add_argument("--svg", help="also write an SVG picture")

    sp = add("flips", cmd_flips, "List flippable and floppable triangles.")
    sp.add_argument("--input", required=True, help="triangulation JSON")
    sp.add_argument("--wood", required=True, help="wood JSON")

    sp = add("flipseq", cmd_flipseq, "Flip sequence turning wood A into wood B.")
    sp.add_argument("--input", required=True, help="triangulation JSON")
    sp.add_argument("--wood-a", required=True, help="source wood JSON")
    sp.add_argument("--wood-b", required=True, help="target wood JSON")

    sp = add("morph", cmd_morph, "Plan and certify a planar morph between two weighted drawings.")
    sp.add_argument("--input", required=True, help="triangulation JSON")
    sp.add_argument("--wood-a", required=True, help="source wood JSON")
    sp.add_argument("--weights-a", help="source weights JSON (default: uniform)")
    sp.add_argument("--wood-b", required=True, help="target wood JSON")
    sp.add_argument("--weights-b", help="target weights JSON (default: uniform)")
    sp.add_argument("--svg", help="directory for SVG frames")
    sp.add_argument("--samples", type=int, default=1, help="frames per step minus one")
    sp.add_argument("--trajectories", action="store_true", help="overlay vertex trajectories on frames")

    sp = add("verify", cmd_verify, "Re-certify every step of a plan.")
    sp.add_argument("--plan", required=True, help="plan JSON written by morph")

    sp = add("recognize", cmd_recognize, "Test whether a drawing is a weighted Schnyder drawing.")
    sp.add_argument("--input", required=True, help="triangulation JSON")
    sp.add_argument("--coords", required=True, help='coordinates JSON {"W": .., "coords": {...}}')
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    m = Manifest(args.command, seed=getattr(args, "seed", None), samples=getattr(args, "samples", 1))
    try:
        args.fn(args, m)
    except io.FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except CertificationFailure as e:
        print(f"certification failed: {e}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except (ValidationFailure, TriangulationError, WeightError, WeightSumMismatch, InvalidFlip) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
