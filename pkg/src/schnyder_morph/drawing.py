"""Weighted Schnyder drawings.

Vertex ``v`` gets barycentric coordinates ``v_i = w(R_i(v))``, the total
weight of the faces in its i-th region.  ``coordinates`` computes all of
them in linear time from the Schnyder corner labels:  every interior face
has exactly one corner labelled i, and a face lies in ``R_i(v)`` iff the
tree path ``T_i`` from that corner meets ``P_{i+1}(v)`` or ``P_{i-1}(v)``.

The grid projection is ``(x, y) = (v1, v2)``.  It maps ``a1, a2, a3`` to
``(W, 0), (0, W), (0, 0)``, which reverses the orientation of the map, so a
counterclockwise face ``(p, q, r)`` has positive area in the order
``(p, r, q)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .schnyder import SchnyderWood, nxt, prv
from .triangulation import Triangulation


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightDistribution:
    W: int
    weights: tuple[int, ...]  # indexed like T.faces

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(x) for x in self.weights))
        if any(x < 1 for x in self.weights):
            raise WeightError("face weights must be positive integers")
        if sum(self.weights) != self.W:
            raise WeightError(f"weights sum to {sum(self.weights)}, expected W={self.W}")

    @classmethod
    def of(cls, weights: Sequence[int]) -> "WeightDistribution":
        return cls(int(sum(weights)), tuple(weights))

    def scaled(self, k: int) -> "WeightDistribution":
        return WeightDistribution(self.W * k, tuple(k * x for x in self.weights))


def uniform_weights(T: Triangulation, s: int = 1) -> WeightDistribution:
    if s < 1:
        raise WeightError("s must be a positive integer")
    m = len(T.faces)
    return WeightDistribution(s * m, (s,) * m)


@dataclass(frozen=True, eq=False)
class Drawing:
    W: int
    coords: Mapping[int, tuple]

    def __eq__(self, other):
        if not isinstance(other, Drawing):
            return NotImplemented
        return self.W == other.W and dict(self.coords) == dict(other.coords)

    def __hash__(self):
        return hash((self.W, tuple(sorted(self.coords.items()))))

    def __getitem__(self, v):
        return self.coords[v]

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.coords))

    def xy(self) -> np.ndarray:
        """(x, y) = (v1, v2) per vertex in sorted id order, as int64."""
        return np.array([self.coords[v][:2] for v in self.vertices], dtype=np.int64)


# -- corner labels and coordinates --------------------------------------------

def corner_labels(T: Triangulation, S: SchnyderWood) -> list[tuple[int, int, int]]:
    """For every interior face, the vertices carrying labels 1, 2 and 3."""
    ext = {a: i for i, a in enumerate(T.exterior, start=1)}
    out = S.out
    result = []
    for f in T.faces:
        owner = [None, None, None]
        for k in range(3):
            p, q, r = f[k], f[(k + 1) % 3], f[(k + 2) % 3]
            if p in ext:
                lab = ext[p]
            else:
                hs = out[p]
                if q in hs:
                    lab = nxt(hs.index(q) + 1)
                elif r in hs:
                    lab = prv(hs.index(r) + 1)
                else:
                    # both edges incoming with the sector's colour
                    lab = S.colour(q, p)
            owner[lab - 1] = p
        if None in owner:
            raise ValueError(f"face {f} does not carry three distinct corner labels")
        result.append(tuple(owner))
    return result


def coordinates(T: Triangulation, S: SchnyderWood, weights: Sequence, labels=None) -> dict[int, tuple]:
    """Barycentric coordinates for arbitrary numeric weights (ints, Fractions, ...)."""
    labels = labels if labels is not None else corner_labels(T, S)
    W = sum(weights)
    zero = W - W
    coords: dict[int, list] = {v: [zero, zero, zero] for v in S.out}
    for i in (1, 2, 3):
        g: dict[int, object] = {}
        for f, owner in enumerate(labels):
            u = owner[i - 1]
            g[u] = g.get(u, zero) + weights[f]
        # subtree sums of g over T_i
        root = T.exterior[i - 1]
        order = S.tree_order(root, i)
        sub = {v: g.get(v, zero) for v in order}
        for v in reversed(order[1:]):
            par = S.out[v][i - 1]
            if par != root:
                sub[par] += sub[v]
        # prefix sums of subtree values along T_{i+1} and T_{i-1}
        for j in (nxt(i), prv(i)):
            acc: dict[int, object] = {T.exterior[j - 1]: zero}
            for v in S.tree_order(T.exterior[j - 1], j)[1:]:
                acc[v] = sub[v] + acc[S.out[v][j - 1]]
                coords[v][i - 1] += acc[v]
        for v in S.out:
            coords[v][i - 1] -= sub[v]
    result = {v: tuple(c) for v, c in coords.items()}
    for i, a in enumerate(T.exterior):
        result[a] = tuple(W if k == i else zero for k in range(3))
    return result


def draw(T: Triangulation, S: SchnyderWood, w: WeightDistribution) -> Drawing:
    if len(w.weights) != len(T.faces):
        raise WeightError(f"{len(w.weights)} weights for {len(T.faces)} faces")
    coords = coordinates(T, S, w.weights)
    if len(set(coords.values())) != T.n:
        raise AssertionError("two vertices received identical coordinates")
    return Drawing(w.W, coords)


def project(D: Drawing) -> dict[int, tuple]:
    return {v: (c[0], c[1]) for v, c in D.coords.items()}


# -- orientation --------------------------------------------------------------

def face_areas(T: Triangulation, D: Drawing | Mapping[int, Sequence]) -> np.ndarray:
    """Twice the signed area of every interior face (positive = correctly oriented)."""
    coords = D.coords if isinstance(D, Drawing) else D
    P = np.array([coords[v][:2] for v in T.vertices], dtype=object
                 if _needs_objects(coords) else np.int64)
    F = T.face_array
    p, q, r = P[F[:, 0]], P[F[:, 1]], P[F[:, 2]]
    # reversed order: (p, r, q)
    return (r[:, 0] - p[:, 0]) * (q[:, 1] - p[:, 1]) - (r[:, 1] - p[:, 1]) * (q[:, 0] - p[:, 0])


def _needs_objects(coords) -> bool:
    for c in coords.values():
        for x in c[:2]:
            if not isinstance(x, (int, np.integer)) or abs(x) > 2 ** 30:
                return True
    return False


def is_planar(T: Triangulation, D: Drawing | Mapping[int, Sequence]) -> bool:
    coords = D.coords if isinstance(D, Drawing) else D
    if any(v not in coords for v in T.vertices):
        return False
    return bool(np.all(face_areas(T, coords) > 0))
