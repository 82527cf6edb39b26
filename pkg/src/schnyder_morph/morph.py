"""Planar morphs between weighted Schnyder drawings.

A plan works at total weight ``W = 6n - 15`` (three units per face):

* a weight change to uniform weights under the source wood,
* one linear morph per facial flip,
* three per separating flip: rebalance the weights so that the three
  Delta regions carry equal weight, flip, and restore uniform weights,
* a weight change to the target weights under the target wood.

Weight changes under a fixed wood are always planar.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .drawing import Drawing, WeightDistribution, draw, uniform_weights
from .flips import (FLIP, FlipEvent, InvalidFlip, apply_event, ccw_wood, delta_regions,
                    flip_sequence, predict_coords_facial, predict_coords_separating)
from .schnyder import SchnyderWood
from .triangulation import FACIAL, SEPARATING, NotSeparating, Triangulation
from .verify import CollapseCertificate, certify_step

WEIGHT_CHANGE = "weight-change"
FACIAL_FLIP = "facial-flip"
SEPARATING_FLIP = "separating-flip"
REBALANCE = "rebalance"


class WeightSumMismatch(ValueError):
    pass


class NotUniform3(ValueError):
    pass


@dataclass
class MorphStep:
    start: Drawing
    end: Drawing
    label: str
    event: FlipEvent | None = None
    certificate: CollapseCertificate | None = field(default=None, repr=False)

    def at(self, t) -> dict[int, tuple]:
        """Exact position at time t (a Fraction or int in [0, 1])."""
        t = Fraction(t)
        return {v: tuple((1 - t) * a + t * b for a, b in zip(self.start.coords[v], self.end.coords[v]))
                for v in self.start.coords}


@dataclass
class MorphPlan:
    T: Triangulation
    W: int
    steps: list[MorphStep]
    scale: int = 1  # factor applied to the source weights to reach W
    target_scale: int = 1
    flips: list[FlipEvent] = field(default_factory=list)

    @property
    def certificates(self) -> list[CollapseCertificate | None]:
        return [s.certificate for s in self.steps]

    def drawings(self) -> list[Drawing]:
        if not self.steps:
            return []
        return [self.steps[0].start] + [s.end for s in self.steps]


def _certified(T: Triangulation, step: MorphStep, certify: bool) -> MorphStep:
    if certify:
        step.certificate = certify_step(T, step)
    return step


def morph_weights(T: Triangulation, S: SchnyderWood, w: WeightDistribution, w2: WeightDistribution,
                  certify: bool = True, label: str = WEIGHT_CHANGE) -> MorphStep:
    if w.W != w2.W:
        raise WeightSumMismatch(f"total weights differ: {w.W} vs {w2.W}")
    return _certified(T, MorphStep(draw(T, S, w), draw(T, S, w2), label), certify)


def morph_facial_flip(T: Triangulation, S: SchnyderWood, w: WeightDistribution, event: FlipEvent,
                      certify: bool = True, start: Drawing | None = None) -> MorphStep:
    if event.kind != FACIAL:
        raise InvalidFlip("morph_facial_flip needs a facial event")
    D = start if start is not None else draw(T, S, w)
    D2 = predict_coords_facial(T, S, w, event, D)
    return _certified(T, MorphStep(D, D2, FACIAL_FLIP, event), certify)


def _is_uniform3(T: Triangulation, w: WeightDistribution) -> bool:
    return len(w.weights) == len(T.faces) and all(x == 3 for x in w.weights)


def _balance(regions: Sequence[Sequence[int]], weights: list[int]) -> list[int]:
    """Move single units between regions until their weights are equal.

    Takes from the heaviest face (lowest id on ties) of the first region above
    the mean and gives to the lightest face of the first region below it.
    """
    weights = list(weights)
    total = sum(weights[f] for r in regions for f in r)
    if total % len(regions):
        raise ValueError("region weights do not have an integral mean")
    target = total // len(regions)
    sums = [sum(weights[f] for f in r) for r in regions]
    while any(s != target for s in sums):
        src = next(i for i, s in enumerate(sums) if s > target)
        dst = next(i for i, s in enumerate(sums) if s < target)
        f = min(regions[src], key=lambda f: (-weights[f], f))
        g = min(regions[dst], key=lambda f: (weights[f], f))
        if weights[f] <= 1:
            raise AssertionError("cannot remove weight without emptying a face")
        weights[f] -= 1
        weights[g] += 1
        sums[src] -= 1
        sums[dst] += 1
    return weights


def rebalance_weights(T: Triangulation, S: SchnyderWood, w: WeightDistribution, C) -> WeightDistribution:
    """Uniform-3 weights redistributed so that Delta_1, Delta_2, Delta_3 weigh the same.

    ``C`` is a separating FlipEvent (flip or flop) or a ccw-cyclic triple.
    """
    if not _is_uniform3(T, w):
        raise NotUniform3("rebalancing starts from weight 3 on every face")
    event = C if isinstance(C, FlipEvent) else _event_for(T, S, C)
    if event.kind != SEPARATING:
        raise NotSeparating(f"{event.triangle} is not a separating triangle")
    regions = [sorted(r) for r in delta_regions(T, S, event)]
    return WeightDistribution(w.W, tuple(_balance(regions, list(w.weights))))


def _event_for(T: Triangulation, S: SchnyderWood, C) -> FlipEvent:
    from .flips import flippable_triangles
    key = tuple(sorted(C))
    fl, fo = flippable_triangles(T, S)
    for ev in fl + fo:
        if ev.key() == key:
            return ev
    if not T.is_separating(C):
        raise NotSeparating(f"{tuple(C)} is not a separating triangle")
    raise InvalidFlip(f"{tuple(C)} is not cyclically oriented")


def morph_separating_flip(T: Triangulation, S: SchnyderWood, w: WeightDistribution, event: FlipEvent,
                          certify: bool = True) -> list[MorphStep]:
    if event.kind != SEPARATING:
        raise InvalidFlip("morph_separating_flip needs a separating event")
    if not _is_uniform3(T, w):
        raise NotUniform3("the separating protocol starts from weight 3 on every face")
    S2 = apply_event(T, S, event)
    wbar = rebalance_weights(T, ccw_wood(T, S, event), w, FlipEvent(event.triangle, FLIP, SEPARATING))
    first = morph_weights(T, S, w, wbar, certify, REBALANCE)
    mid_end = predict_coords_separating(T, S, wbar, event, first.end)
    middle = _certified(T, MorphStep(first.end, mid_end, SEPARATING_FLIP, event), certify)
    last = morph_weights(T, S2, wbar, w, certify, REBALANCE)
    if last.start != mid_end:
        raise AssertionError("closed-form separating update disagrees with the redraw")
    return [first, middle, last]


def normalise_weights(T: Triangulation, w: WeightDistribution) -> tuple[WeightDistribution, int]:
    """Scale weights onto ``W = 6n - 15``; returns (weights, factor)."""
    m = len(T.faces)
    if w.W == 3 * m:
        return w, 1
    if w.W == m:
        return w.scaled(3), 3
    raise WeightSumMismatch(f"weights must total {m} or {3 * m}, got {w.W}")


def plan_morph(T: Triangulation, S: SchnyderWood, w: WeightDistribution, S2: SchnyderWood,
               w2: WeightDistribution, certify: bool = True, events: Sequence[FlipEvent] | None = None) -> MorphPlan:
    wa, scale = normalise_weights(T, w)
    wb, scale_b = normalise_weights(T, w2)
    u3 = uniform_weights(T, 3)
    events = list(events) if events is not None else flip_sequence(T, S, S2)
    steps = [morph_weights(T, S, wa, u3, certify)]
    cur, D = S, steps[0].end
    for ev in events:
        if ev.kind == FACIAL:
            step = morph_facial_flip(T, cur, u3, ev, certify, start=D)
            steps.append(step)
        else:
            steps.extend(morph_separating_flip(T, cur, u3, ev, certify))
        cur = apply_event(T, cur, ev)
        D = steps[-1].end
    if cur != S2:
        raise AssertionError("flip sequence does not reach the target wood")
    steps.append(morph_weights(T, S2, u3, wb, certify))
    for a, b in zip(steps, steps[1:]):
        if a.end != b.start:
            raise AssertionError("consecutive steps do not chain")
    return MorphPlan(T, u3.W, steps, scale, scale_b, events)


@dataclass(frozen=True)
class Frame:
    step: int
    t: Fraction
    coords: dict
    label: str
    event: FlipEvent | None


def render_frames(plan: MorphPlan, samples: int = 1) -> list[Frame]:
    """``samples + 1`` frames per step at ``t = k / samples``; exact rationals."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    frames = []
    for k, step in enumerate(plan.steps):
        for j in range(samples + 1):
            t = Fraction(j, samples)
            if j == 0:
                coords = dict(step.start.coords)
            elif j == samples:
                coords = dict(step.end.coords)
            else:
                coords = step.at(t)
            frames.append(Frame(k, t, coords, step.label, step.event))
    return frames
