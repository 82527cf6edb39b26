import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from schnyder_morph.flips import random_wood
from schnyder_morph.triangulation import (Triangulation, all_triangulations, is_four_connected, k4,
                                          random_triangulation, stack)

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# a drawing on six vertices whose unique weights put -1 on the face (4, 3, 5)
NEGATIVE = dict(
    faces=((0, 5, 3), (1, 3, 4), (2, 4, 5), (4, 2, 1), (4, 3, 5), (5, 0, 2), (3, 1, 0)),
    wood={3: (0, 1, 5), 4: (3, 1, 2), 5: (0, 4, 2)},
    weights=[4, 6, 3, 7, -1, 8, 7],
    coords={3: (15, 12, 7), 4: (7, 14, 13), 5: (10, 8, 16), 0: (34, 0, 0), 1: (0, 34, 0), 2: (0, 0, 34)},
)


def make_t5() -> Triangulation:
    # K4 plus u=4 stacked into the face (v, a2, a3)
    faces = list(k4().faces)
    stack(faces, 1, 4)
    return Triangulation((0, 1, 2), tuple(faces))


def make_doubly_stacked() -> Triangulation:
    # u=4 stacked into (v, a2, a3), then w=5 stacked into (a2, a3, u)
    faces = list(k4().faces)
    stack(faces, 1, 4)
    fi = next(i for i, f in enumerate(faces) if set(f) == {1, 2, 4})
    stack(faces, fi, 5)
    return Triangulation((0, 1, 2), tuple(faces))


def make_octahedron() -> Triangulation:
    return next(T for T in all_triangulations(6) if is_four_connected(T))


def make_nested() -> Triangulation:
    # octahedron with 6 stacked into the central face and 7 into (3, 4, 6)
    faces = list(make_octahedron().faces)
    stack(faces, next(i for i, f in enumerate(faces) if set(f) == {3, 4, 5}), 6)
    stack(faces, next(i for i, f in enumerate(faces) if set(f) == {3, 4, 6}), 7)
    return Triangulation((0, 1, 2), tuple(faces))


def random_instance(seed: int, n: int):
    rng = np.random.default_rng(seed)
    T = random_triangulation(n, rng)
    return T, random_wood(T, rng), rng


def random_weights(T, rng, W=None):
    from schnyder_morph.drawing import WeightDistribution
    m = len(T.faces)
    w = [int(x) for x in rng.integers(1, 6, size=m)]
    if W is not None:
        # spread the remainder so the total is exactly W
        w = [1] * m
        for k in rng.integers(0, m, size=W - m):
            w[int(k)] += 1
    return WeightDistribution.of(w)


def load(name: str) -> dict:
    return json.loads((DATA / name).read_text())


@pytest.fixture
def K4():
    return k4()


@pytest.fixture
def T5():
    return make_t5()


@pytest.fixture
def octahedron():
    return make_octahedron()


@pytest.fixture
def doubly_stacked():
    return make_doubly_stacked()


@pytest.fixture
def nested():
    return make_nested()
