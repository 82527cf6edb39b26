from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schnyder_morph.drawing import WeightDistribution, draw, uniform_weights
from schnyder_morph.flips import apply_event, delta_regions, flippable_triangles, random_wood
from schnyder_morph.morph import (REBALANCE, SEPARATING_FLIP, WEIGHT_CHANGE, NotUniform3, WeightSumMismatch, _balance,
                                  morph_facial_flip, morph_separating_flip, morph_weights, plan_morph,
                                  rebalance_weights, render_frames)
from schnyder_morph.schnyder import compute_wood, descendants
from schnyder_morph.triangulation import FACIAL, SEPARATING, NotSeparating
from schnyder_morph.verify import enumerate_woods

from conftest import make_t5, random_instance, random_weights


def test_zero_motion(T5):
    S, w = compute_wood(T5), uniform_weights(T5, 3)
    step = morph_weights(T5, S, w, w)
    assert step.start == step.end and step.certificate.planar


@given(st.integers(0, 2**32))
def test_t5_redistribution_planar(seed):
    rng = np.random.default_rng(seed)
    T = make_t5()
    w2 = random_weights(T, rng, W=15)
    step = morph_weights(T, compute_wood(T), uniform_weights(T, 3), w2)
    assert step.certificate.planar


def test_weight_sum_mismatch(T5):
    S = compute_wood(T5)
    with pytest.raises(WeightSumMismatch):
        morph_weights(T5, S, uniform_weights(T5, 1), uniform_weights(T5, 3))


@given(st.integers(5, 60), st.integers(0, 2**32))
def test_weight_change_planar(n, seed):
    T, S, rng = random_instance(seed, n)
    w = random_weights(T, rng, W=3 * len(T.faces))
    assert morph_weights(T, S, uniform_weights(T, 3), w).certificate.planar


def test_octahedron_facial_flip(octahedron):
    w = uniform_weights(octahedron, 3)
    seen = 0
    for S in enumerate_woods(octahedron):
        fl, fo = flippable_triangles(octahedron, S)
        for ev in fl + fo:
            if ev.kind != FACIAL:
                continue
            step = morph_facial_flip(octahedron, S, w, ev)
            assert step.certificate.planar
            assert step.end == draw(octahedron, apply_event(octahedron, S, ev), w)
            x = ev.triangle[0]
            Sc = S if ev in fl else apply_event(octahedron, S, ev)
            for v in descendants(Sc, x, 1):
                assert step.start[v][0] == step.end[v][0]
            seen += 1
    assert seen > 0


def test_balance_example():
    # Delta_1 has four faces, Delta_2 and Delta_3 one each: sums 12, 3, 3
    regions = [[0, 1, 2, 3], [4], [5]]
    w = _balance(regions, [3] * 6)
    assert [sum(w[f] for f in r) for r in regions] == [6, 6, 6]
    assert min(w) >= 1 and sum(w) == 18
    # a lone face has to take all of its region's share
    assert w[4] == w[5] == 6


def test_balance_already_equal():
    assert _balance([[0], [1], [2]], [3, 3, 3]) == [3, 3, 3]


def _separating_case(T):
    for S in enumerate_woods(T):
        fl, fo = flippable_triangles(T, S)
        for ev in fl + fo:
            if ev.kind == SEPARATING:
                return S, ev
    raise AssertionError("no separating flip")


def test_rebalance_postconditions(nested):
    S, ev = _separating_case(nested)
    w = uniform_weights(nested, 3)
    wbar = rebalance_weights(nested, S, w, ev)
    assert wbar.W == w.W and min(wbar.weights) >= 1
    d = delta_regions(nested, S, ev)
    sums = [sum(wbar.weights[f] for f in r) for r in d]
    assert len(set(sums)) == 1
    touched = set().union(*d)
    assert all(wbar.weights[k] == 3 for k in range(len(nested.faces)) if k not in touched)


def test_rebalance_errors(nested, octahedron):
    S, ev = _separating_case(nested)
    with pytest.raises(NotUniform3):
        rebalance_weights(nested, S, uniform_weights(nested, 1), ev)
    S = next(S for S in enumerate_woods(octahedron) if flippable_triangles(octahedron, S)[0])
    ev = flippable_triangles(octahedron, S)[0][0]
    with pytest.raises(NotSeparating):
        rebalance_weights(octahedron, S, uniform_weights(octahedron, 3), ev)


def test_separating_protocol(nested):
    S, ev = _separating_case(nested)
    w = uniform_weights(nested, 3)
    steps = morph_separating_flip(nested, S, w, ev)
    assert [s.label for s in steps] == [REBALANCE, SEPARATING_FLIP, REBALANCE]
    assert all(s.certificate.planar for s in steps)
    assert steps[0].start == draw(nested, S, w)
    assert steps[-1].end == draw(nested, apply_event(nested, S, ev), w)
    with pytest.raises(NotUniform3):
        morph_separating_flip(nested, S, uniform_weights(nested, 1), ev)


def test_k4_plan(K4):
    S = compute_wood(K4)
    plan = plan_morph(K4, S, uniform_weights(K4, 1), S, WeightDistribution.of([1, 1, 7]))
    assert [s.label for s in plan.steps] == [WEIGHT_CHANGE, WEIGHT_CHANGE]
    assert plan.W == 9 and plan.scale == 3 and plan.target_scale == 1


def test_octahedron_plans(octahedron):
    woods = enumerate_woods(octahedron)
    w = uniform_weights(octahedron, 1)
    for A in woods:
        for B in woods:
            plan = plan_morph(octahedron, A, w, B, w)
            assert plan.steps[-1].end == draw(octahedron, B, uniform_weights(octahedron, 3))
            assert all(c.planar for c in plan.certificates)


@given(st.integers(5, 40), st.integers(0, 2**32))
def test_random_plans(n, seed):
    T, S, rng = random_instance(seed, n)
    S2 = random_wood(T, rng)
    w, w2 = random_weights(T, rng, W=len(T.faces)), random_weights(T, rng, W=3 * len(T.faces))
    plan = plan_morph(T, S, w, S2, w2)
    assert plan.steps[0].start == draw(T, S, w.scaled(3))
    assert plan.steps[-1].end == draw(T, S2, w2)
    assert all(c.planar for c in plan.certificates)
    for a, b in zip(plan.steps, plan.steps[1:]):
        assert a.end == b.start


def test_render_frames(octahedron):
    woods = enumerate_woods(octahedron)
    plan = plan_morph(octahedron, woods[0], uniform_weights(octahedron, 3), woods[-1], uniform_weights(octahedron, 3))
    frames = render_frames(plan, 1)
    assert len(frames) == 2 * len(plan.steps)
    assert all(f.coords in (plan.steps[f.step].start.coords, plan.steps[f.step].end.coords) for f in frames)
    frames = render_frames(plan, 4)
    assert len(frames) == 5 * len(plan.steps)
    mid = frames[2]
    s = plan.steps[0]
    assert mid.t == Fraction(1, 2)
    assert mid.coords == {v: tuple((a + b) / 2 for a, b in zip(s.start[v], s.end[v])) for v in s.start.coords}
    with pytest.raises(ValueError):
        render_frames(plan, 0)


@given(st.integers(5, 60), st.integers(0, 2**32))
def test_facial_motion_keeps_one_coordinate(n, seed):
    T, S, rng = random_instance(seed, n)
    w = uniform_weights(T, 3)
    fl, fo = flippable_triangles(T, S)
    for ev in fl + fo:
        if ev.kind != FACIAL:
            continue
        step = morph_facial_flip(T, S, w, ev)
        for v in T.vertices:
            a, b = step.start[v], step.end[v]
            if a != b:
                # motion parallel to an exterior edge
                assert sum(x == y for x, y in zip(a, b)) == 1
