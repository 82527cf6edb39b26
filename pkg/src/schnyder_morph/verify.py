"""Exact oracles: morph certification, wood enumeration, region-based drawing.

A linear morph moves every vertex at constant speed, so the doubled signed
area of a face is a quadratic ``A t^2 + B t + C`` in t.  The morph is planar
iff every such quadratic is strictly positive on ``[0, 1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .drawing import Drawing
from .schnyder import SchnyderWood, paths_and_regions, validate_wood
from .triangulation import Triangulation

PLANAR = "planar"
COLLAPSED = "collapsed"

# int64 is exact while |B|^2 stays below 2^63; coordinates up to this bound are safe
_INT64_COORD_LIMIT = 10_000


class TooLarge(ValueError):
    pass


# -- exact roots --------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticRoot:
    """The number ``(a + b * sqrt(d)) / c`` with integers a, b, c, d and c > 0, d >= 0."""
    a: int
    b: int
    d: int
    c: int

    @classmethod
    def make(cls, a: int, b: int, d: int, c: int):
        """Return a Fraction when the surd vanishes, else a normalised QuadraticRoot."""
        if c == 0:
            raise ZeroDivisionError("denominator is zero")
        if c < 0:
            a, b, c = -a, -b, -c
        if d < 0:
            raise ValueError("negative radicand")
        s = math.isqrt(d)
        if b == 0 or s * s == d:
            return Fraction(a + b * s, c)
        return cls(a, b, d, c)

    def __float__(self):
        return (self.a + self.b * math.sqrt(self.d)) / self.c

    def sign_minus(self, q: Fraction) -> int:
        """Sign of ``self - q``, exactly."""
        q = Fraction(q)
        # (a + b sqrt d)/c - q  ~  (a*den - num*c) + b*den*sqrt(d)
        u = self.a * q.denominator - q.numerator * self.c
        v = self.b * q.denominator
        return _sign_surd(u, v, self.d)

    def __lt__(self, q):
        return self.sign_minus(q) < 0

    def __gt__(self, q):
        return self.sign_minus(q) > 0

    def __le__(self, q):
        return self.sign_minus(q) <= 0

    def __ge__(self, q):
        return self.sign_minus(q) >= 0

    def __str__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))/{self.c}"


def _sign_surd(u: int, v: int, d: int) -> int:
    """Sign of ``u + v * sqrt(d)``."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0) if d else 0
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    lhs, rhs = u * u, v * v * d
    if lhs == rhs:
        return 0
    return su if lhs > rhs else sv


def _as_surd(t) -> tuple[int, int, int, int]:
    if isinstance(t, QuadraticRoot):
        return t.a, t.b, t.d, t.c
    t = Fraction(t)
    return t.numerator, 0, 0, t.denominator


def compare_root(t, q) -> int:
    """Sign of ``t - q`` for Fractions, ints or QuadraticRoots, exactly."""
    a1, b1, d1, c1 = _as_surd(t)
    a2, b2, d2, c2 = _as_surd(q)
    # sign of u + p sqrt(d1) - r sqrt(d2)
    u, p, r = a1 * c2 - a2 * c1, b1 * c2, b2 * c1
    if r == 0 or d2 == 0:
        return _sign_surd(u, p, d1)
    sx = _sign_surd(u, p, d1)
    sr = (r > 0) - (r < 0)
    if sx == 0:
        return -sr
    if sx != sr:
        return sx
    # same sign: compare squares
    return sx * _sign_surd(u * u + p * p * d1 - r * r * d2, 2 * u * p, d1)


# -- area polynomials ---------------------------------------------------------

def area_polynomial(p0, p1, q0, q1, r0, r1) -> tuple[int, int, int]:
    """Coefficients with ``2 * area(p, q, r)(t) = A t^2 + B t + C``.

    Points move as ``(1 - t) * start + t * end``; area is counterclockwise-positive.
    """
    ax, ay = q0[0] - p0[0], q0[1] - p0[1]
    bx, by = r0[0] - p0[0], r0[1] - p0[1]
    dax, day = (q1[0] - p1[0]) - ax, (q1[1] - p1[1]) - ay
    dbx, dby = (r1[0] - p1[0]) - bx, (r1[1] - p1[1]) - by
    C = ax * by - ay * bx
    B = ax * dby - ay * dbx + dax * by - day * bx
    A = dax * dby - day * dbx
    return A, B, C


def eval_poly(coeffs, t):
    A, B, C = coeffs
    return (A * t + B) * t + C


def first_nonpositive(A: int, B: int, C: int):
    """Smallest t in [0, 1] with ``A t^2 + B t + C <= 0``, or None.

    Returned as a Fraction when rational, else as a QuadraticRoot.
    """
    if C <= 0:
        return Fraction(0)
    if A == 0:
        if B < 0 and B + C <= 0:
            return Fraction(-C, B)
        return None
    disc = B * B - 4 * A * C
    if disc < 0:
        return None
    # roots (-B -+ sqrt(disc)) / 2A; with C > 0 the first crossing is the smaller root in (0, 1]
    sgn = 1 if A > 0 else -1
    roots = [QuadraticRoot.make(-B, -sgn, disc, 2 * A), QuadraticRoot.make(-B, sgn, disc, 2 * A)]
    for r in roots:
        if compare_root(r, 0) > 0 and compare_root(r, 1) <= 0:
            return r
    return None


def _planar_mask(A, B, C):
    """Vectorised exact positivity test on [0, 1] (works on int64 and object arrays)."""
    ok = (C > 0) & (A + B + C > 0)
    inner = (A > 0) & (B < 0) & (-B < 2 * A) & (B * B - 4 * A * C >= 0)
    return ok & ~inner


@dataclass
class CollapseCertificate:
    step: int
    verdict: str
    face: tuple | None = None
    face_index: int | None = None
    t_star: object = None
    per_face: np.ndarray | None = field(default=None, repr=False)

    @property
    def planar(self) -> bool:
        return self.verdict == PLANAR


def _positions(T: Triangulation, D: Drawing | dict, dtype):
    coords = D.coords if isinstance(D, Drawing) else D
    return np.array([coords[v][:2] for v in T.vertices], dtype=dtype)


def step_polynomials(T: Triangulation, start, end) -> np.ndarray:
    """``(m, 3)`` array of ``(A, B, C)`` per interior face, in face order.

    Faces are evaluated in reversed vertex order because the (v1, v2)
    projection mirrors the map.
    """
    s = start.coords if isinstance(start, Drawing) else start
    e = end.coords if isinstance(end, Drawing) else end
    big = max((abs(x) for c in list(s.values()) + list(e.values()) for x in c[:2]), default=0)
    exact_ints = all(isinstance(x, (int, np.integer)) for c in list(s.values()) + list(e.values()) for x in c[:2])
    dtype = np.int64 if exact_ints and big <= _INT64_COORD_LIMIT else object
    P0, P1 = _positions(T, s, dtype), _positions(T, e, dtype)
    F = T.face_array
    p, q, r = F[:, 0], F[:, 2], F[:, 1]
    a0, b0 = P0[q] - P0[p], P0[r] - P0[p]
    da, db = (P1[q] - P1[p]) - a0, (P1[r] - P1[p]) - b0
    C = a0[:, 0] * b0[:, 1] - a0[:, 1] * b0[:, 0]
    B = a0[:, 0] * db[:, 1] - a0[:, 1] * db[:, 0] + da[:, 0] * b0[:, 1] - da[:, 1] * b0[:, 0]
    A = da[:, 0] * db[:, 1] - da[:, 1] * db[:, 0]
    return np.stack([A, B, C], axis=1)


def certify_step(T: Triangulation, step, step_id: int = 0) -> CollapseCertificate:
    """Exact planarity certificate for the linear morph ``step.start -> step.end``.

    ``step`` may be any object with ``start`` and ``end`` drawings, or a pair.
    """
    start, end = (step.start, step.end) if hasattr(step, "start") else step
    poly = step_polynomials(T, start, end)
    A, B, C = poly[:, 0], poly[:, 1], poly[:, 2]
    mask = _planar_mask(A, B, C)
    if bool(np.all(mask)):
        return CollapseCertificate(step_id, PLANAR, per_face=poly)
    # report the face collapsing first, ties to the lowest index
    best = None
    for k in np.flatnonzero(~mask):
        t = first_nonpositive(int(A[k]), int(B[k]), int(C[k]))
        if t is None:
            raise AssertionError("mask and root finder disagree")
        if best is None or compare_root(t, best[1]) < 0:
            best = (int(k), t)
    k, t = best
    return CollapseCertificate(step_id, COLLAPSED, T.faces[k], k, t, poly)


def certify_plan(plan) -> list[CollapseCertificate]:
    return [certify_step(plan.T, s, k) for k, s in enumerate(plan.steps)]


# -- region oracle ------------------------------------------------------------

def draw_by_regions(T: Triangulation, S: SchnyderWood, weights: Sequence) -> dict[int, tuple]:
    """Coordinates by summing face weights over flood-filled regions."""
    weights = getattr(weights, "weights", weights)
    W = sum(weights)
    coords = {}
    for v in T.interior_vertices:
        r = paths_and_regions(T, S, v)
        coords[v] = tuple(sum(weights[f] for f in r.regions[i]) for i in range(3))
    for i, a in enumerate(T.exterior):
        coords[a] = tuple(W if k == i else 0 for k in range(3))
    return coords


# -- wood enumeration ---------------------------------------------------------

def _local_configs(T: Triangulation, v: int) -> list[dict[int, tuple[int, int]]]:
    """All (D1)-consistent states around v: neighbour -> (+1 out / -1 in, colour)."""
    ext = {a: i for i, a in enumerate(T.exterior, start=1)}
    ring = T.rot[v]
    d = len(ring)
    configs = []
    for i1 in range(d):
        for j2 in range(1, d - 1):
            for j3 in range(j2 + 1, d):
                i2, i3 = (i1 + j2) % d, (i1 + j3) % d
                state = {}
                # sectors clockwise: out1, in3.., out2, in1.., out3, in2..
                for k in range(d):
                    pos = (k - i1) % d
                    u = ring[(i1 + pos) % d]
                    if pos == 0:
                        state[u] = (1, 1)
                    elif pos == j2:
                        state[u] = (1, 2)
                    elif pos == j3:
                        state[u] = (1, 3)
                    elif pos < j2:
                        state[u] = (-1, 3)
                    elif pos < j3:
                        state[u] = (-1, 1)
                    else:
                        state[u] = (-1, 2)
                if all(state[u] == (1, i) for u, i in ext.items() if u in state):
                    configs.append(state)
    return configs


def enumerate_woods(T: Triangulation, max_n: int = 9) -> list[SchnyderWood]:
    """All Schnyder woods of T by backtracking over local vertex states."""
    if T.n > max_n:
        raise TooLarge(f"enumeration is limited to n <= {max_n}, got n={T.n}")
    verts = list(T.interior_vertices)
    # order vertices so each has many already-placed neighbours
    order = [verts[0]] if verts else []
    rest = set(verts[1:])
    while rest:
        placed = set(order)
        nxt_v = max(sorted(rest), key=lambda u: len(T.nbrs[u] & placed))
        order.append(nxt_v)
        rest.discard(nxt_v)
    configs = {v: _local_configs(T, v) for v in order}
    chosen: dict[int, dict] = {}
    found = []

    def consistent(v, state) -> bool:
        for u, (s, c) in state.items():
            other = chosen.get(u)
            if other is not None and other[v] != (-s, c):
                return False
        return True

    def rec(k: int) -> None:
        if k == len(order):
            found.append(SchnyderWood({v: tuple(u for col in (1, 2, 3) for u, st in chosen[v].items() if st == (1, col))
                                       for v in order}))
            return
        v = order[k]
        for state in configs[v]:
            if consistent(v, state):
                chosen[v] = state
                rec(k + 1)
                del chosen[v]

    rec(0)
    for S in found:
        err = validate_wood(T, S)
        if err is not None:
            raise AssertionError(f"enumerator produced an invalid wood: {err}")
    return sorted(found, key=SchnyderWood.key)


def is_wood_r1(T: Triangulation, coords) -> bool:
    """Geometric (R1): for every edge uv and w not on it, some k has u_k, v_k < w_k."""
    for u, v in T.edges:
        cu, cv = coords[u], coords[v]
        for w in T.vertices:
            if w in (u, v):
                continue
            cw = coords[w]
            if not any(cu[k] < cw[k] and cv[k] < cw[k] for k in range(3)):
                return False
    return True


__all__ = [
    "COLLAPSED", "PLANAR", "CollapseCertificate", "QuadraticRoot", "TooLarge",
    "area_polynomial", "certify_plan", "certify_step", "compare_root", "draw_by_regions",
    "enumerate_woods", "eval_poly", "first_nonpositive", "is_wood_r1", "step_polynomials",
]
