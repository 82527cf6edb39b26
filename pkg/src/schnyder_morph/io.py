"""JSON formats.  Rationals are written as ``"p/q"`` strings (``"p"`` when integral)."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .drawing import Drawing, WeightDistribution
from .flips import FlipEvent
from .schnyder import SchnyderWood
from .triangulation import Triangulation, build


class FormatError(ValueError):
    pass


def rational_to_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from(x) -> Fraction:
    if isinstance(x, bool):
        raise FormatError(f"not a number: {x!r}")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"bad rational {x!r}") from e
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    raise FormatError(f"not an exact number: {x!r}")


def _exact(x):
    x = rational_from(x)
    return x.numerator if x.denominator == 1 else x


def _json_number(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else rational_to_str(x)


# -- triangulation ------------------------------------------------------------

def triangulation_to_json(T: Triangulation) -> dict:
    return {"n": T.n, "exterior": list(T.exterior), "faces": [list(f) for f in T.faces]}


def triangulation_from_json(doc: dict) -> Triangulation:
    try:
        return build(int(doc["n"]), [int(v) for v in doc["exterior"]], [[int(v) for v in f] for f in doc["faces"]])
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed triangulation: {e}") from e


# -- wood ---------------------------------------------------------------------

def wood_to_json(S: SchnyderWood) -> dict:
    return {"edges": [{"tail": t, "head": h, "colour": c} for t, h, c in S.edge_list()]}


def wood_labels_from_json(doc: dict) -> list[tuple[int, int, int]]:
    try:
        return [(int(e["tail"]), int(e["head"]), int(e["colour"])) for e in doc["edges"]]
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed wood: {e}") from e


def wood_from_json(doc: dict) -> SchnyderWood:
    try:
        return SchnyderWood.from_labels(wood_labels_from_json(doc))
    except ValueError as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(str(e)) from e


# -- weights and drawings -----------------------------------------------------

def weights_to_json(w: WeightDistribution) -> dict:
    return {"W": w.W, "weights": list(w.weights)}


def weights_from_json(doc: dict) -> WeightDistribution:
    try:
        return WeightDistribution(int(doc["W"]), tuple(int(x) for x in doc["weights"]))
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed weights: {e}") from e


def drawing_to_json(D: Drawing) -> dict:
    return {"W": _json_number(D.W),
            "coords": {str(v): [_json_number(x) for x in D.coords[v]] for v in sorted(D.coords)}}


def coords_from_json(doc: dict) -> tuple[object, dict[int, tuple]]:
    try:
        coords = {int(v): tuple(_exact(x) for x in c) for v, c in doc["coords"].items()}
        W = _exact(doc["W"]) if "W" in doc else None
    except (KeyError, TypeError, AttributeError) as e:
        raise FormatError(f"malformed coordinates: {e}") from e
    return W, coords


def drawing_from_json(doc: dict) -> Drawing:
    W, coords = coords_from_json(doc)
    if W is None:
        raise FormatError("drawing lacks W")
    return Drawing(W, coords)


# -- events and plans ---------------------------------------------------------

def event_to_json(ev: FlipEvent) -> dict:
    return {"triangle": list(ev.triangle), "direction": ev.direction, "kind": ev.kind}


def event_from_json(doc: dict) -> FlipEvent:
    try:
        ev = FlipEvent(tuple(int(v) for v in doc["triangle"]), doc["direction"], doc["kind"])
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed flip event: {e}") from e
    if ev.direction not in ("flip", "flop") or ev.kind not in ("facial", "separating") or len(ev.triangle) != 3:
        raise FormatError(f"malformed flip event: {doc}")
    return ev


def plan_to_json(plan) -> dict:
    steps = []
    for s in plan.steps:
        d = {"label": s.label, "from": drawing_to_json(s.start), "to": drawing_to_json(s.end),
             "certified": bool(s.certificate is not None and s.certificate.planar)}
        if s.event is not None:
            d["event"] = event_to_json(s.event)
        steps.append(d)
    return {"W": plan.W, "scale": plan.scale, "target_scale": plan.target_scale,
            "triangulation": triangulation_to_json(plan.T), "steps": steps}


def plan_from_json(doc: dict):
    from .morph import MorphPlan, MorphStep
    try:
        T = triangulation_from_json(doc["triangulation"])
        steps = [MorphStep(drawing_from_json(s["from"]), drawing_from_json(s["to"]), s["label"],
                           event_from_json(s["event"]) if "event" in s else None)
                 for s in doc["steps"]]
        return MorphPlan(T, int(doc["W"]), steps, int(doc.get("scale", 1)), int(doc.get("target_scale", 1)),
                         [s.event for s in steps if s.event is not None and s.label != "rebalance"])
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed plan: {e}") from e


def frames_to_json(frames) -> dict:
    return {"frames": [{"step": f.step, "t": rational_to_str(f.t), "label": f.label,
                        "coords": {str(v): [rational_to_str(x) for x in f.coords[v]] for v in sorted(f.coords)}}
                       for f in frames]}


# -- files --------------------------------------------------------------------

def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"cannot read {path}: {e}") from e


_FLAT_LIST = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]")


def dumps(doc) -> str:
    """Indented JSON with flat lists kept on one line."""
    text = json.dumps(doc, indent=1)
    return _FLAT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]"
                          if m.group(1).strip() else "[]", text) + "\n"


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))
