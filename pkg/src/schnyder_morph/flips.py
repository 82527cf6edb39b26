"""Flips and flops of cyclically oriented triangles.

A flip event names a triangle as ``(x, y, z)`` in counterclockwise order
with, in the counterclockwise state, ``x->y`` of colour 1, ``y->z`` of
colour 3 and ``z->x`` of colour 2.  A flip turns that state into the
clockwise one; a flop, given the same triple, turns it back.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .drawing import Drawing, coordinates, corner_labels
from .schnyder import SchnyderWood, descendants, flood_faces, path, path_edges
from .triangulation import FACIAL, SEPARATING, Triangulation, canonical_face, restrict

FLIP = "flip"
FLOP = "flop"


class InvalidFlip(ValueError):
    pass


@dataclass(frozen=True)
class FlipEvent:
    triangle: tuple[int, int, int]
    direction: str = FLIP
    kind: str = FACIAL

    def key(self) -> tuple:
        return tuple(sorted(self.triangle))

    def inverse(self) -> "FlipEvent":
        return FlipEvent(self.triangle, FLOP if self.direction == FLIP else FLIP, self.kind)


@dataclass(frozen=True)
class RegionWeights:
    delta1: object
    delta2: object
    delta3: object
    wC: object


# -- detection ----------------------------------------------------------------

def _arc(out, u, v) -> bool:
    hs = out.get(u)
    return hs is not None and v in hs


def _status(out, tri) -> int:
    """+1 if the ccw triple is cyclic ccw, -1 if cyclic cw, else 0."""
    a, b, c = tri
    if _arc(out, a, b) and _arc(out, b, c) and _arc(out, c, a):
        return 1
    if _arc(out, b, a) and _arc(out, c, b) and _arc(out, a, c):
        return -1
    return 0


def _event(T: Triangulation, out, tri, status: int, kind: str) -> FlipEvent:
    """Align a cyclic ccw triple so that it reads (x, y, z) as in the module docstring."""
    a, b, c = tri
    rots = ((a, b, c), (b, c, a), (c, a, b))
    for x, y, z in rots:
        if status > 0 and out[x][0] == y:
            if out[y][2] != z or out[z][1] != x:
                raise AssertionError(f"ccw triangle {tri} breaks the 1,3,2 colour pattern")
            return FlipEvent((x, y, z), FLIP, kind)
        if status < 0 and out[x][0] == z:
            if out[z][1] != y or out[y][2] != x:
                raise AssertionError(f"cw triangle {tri} breaks the 1,2,3 colour pattern")
            return FlipEvent((x, y, z), FLOP, kind)
    raise AssertionError(f"cyclic triangle {tri} has no colour-1 edge")


def triangles(T: Triangulation) -> list[tuple[tuple[int, int, int], str]]:
    """All interior faces and separating triangles as ccw triples."""
    out = [(f, FACIAL) for f in T.faces]
    out.extend((ccw, SEPARATING) for ccw, _ in sorted(T._separating.values()))
    return out


def flippable_triangles(T: Triangulation, S: SchnyderWood) -> tuple[list[FlipEvent], list[FlipEvent]]:
    flippable, floppable = [], []
    for tri, kind in triangles(T):
        st = _status(S.out, tri)
        if st > 0:
            flippable.append(_event(T, S.out, tri, st, kind))
        elif st < 0:
            floppable.append(_event(T, S.out, tri, st, kind))
    flippable.sort(key=FlipEvent.key)
    floppable.sort(key=FlipEvent.key)
    return flippable, floppable


# -- applying -----------------------------------------------------------------

def _check(T: Triangulation, out, event: FlipEvent) -> None:
    x, y, z = event.triangle
    # flip wants x->y c1, y->z c3, z->x c2; flop wants x->z c1, z->y c2, y->x c3
    ok = x in out and y in out and z in out
    if ok and event.direction == FLIP:
        ok = out[x][0] == y and out[y][2] == z and out[z][1] == x
    elif ok:
        ok = out[x][0] == z and out[z][1] == y and out[y][2] == x
    if not ok:
        raise InvalidFlip(f"{event.triangle} is not a valid {event.direction} target")
    kind = SEPARATING if T.is_separating(event.triangle) else FACIAL
    if kind != event.kind:
        raise InvalidFlip(f"{event.triangle} is {kind}, event says {event.kind}")


def _apply_in_place(T: Triangulation, out: dict, event: FlipEvent) -> None:
    x, y, z = event.triangle
    hx, hy, hz = list(out[x]), list(out[y]), list(out[z])
    if event.direction == FLIP:
        hx[0], hy[2], hz[1] = z, x, y
    else:
        hx[0], hy[2], hz[1] = y, z, x
    out[x], out[y], out[z] = tuple(hx), tuple(hy), tuple(hz)
    if event.kind == SEPARATING:
        for v in T.inside(event.triangle):
            h1, h2, h3 = out[v]
            out[v] = (h3, h1, h2) if event.direction == FLIP else (h2, h3, h1)


def apply_event(T: Triangulation, S: SchnyderWood, event: FlipEvent) -> SchnyderWood:
    out = dict(S.out)
    _check(T, out, event)
    _apply_in_place(T, out, event)
    return SchnyderWood(out)


def apply_flip(T: Triangulation, S: SchnyderWood, event: FlipEvent) -> SchnyderWood:
    if event.direction != FLIP:
        raise InvalidFlip("apply_flip needs a flip event")
    return apply_event(T, S, event)


def apply_flop(T: Triangulation, S: SchnyderWood, event: FlipEvent) -> SchnyderWood:
    if event.direction == FLOP:
        return apply_event(T, S, event)
    return apply_event(T, S, event.inverse())


# -- regions and weights ------------------------------------------------------

def ccw_wood(T: Triangulation, S: SchnyderWood, event: FlipEvent) -> SchnyderWood:
    """The wood in which the event's triangle is oriented counterclockwise."""
    return S if event.direction == FLIP else apply_event(T, S, event)


def delta_regions(T: Triangulation, S: SchnyderWood, event: FlipEvent) -> tuple[frozenset, frozenset, frozenset]:
    """Face sets of Delta_1(yz), Delta_2(xy), Delta_3(xz) in the ccw wood."""
    Sc = ccw_wood(T, S, event)
    x, y, z = event.triangle
    result = []
    for (p, q), i in (((y, z), 1), ((x, y), 2), ((z, x), 3)):
        walls = path_edges(path(T, Sc, p, i)) | path_edges(path(T, Sc, q, i))
        walls.add(frozenset((p, q)))
        result.append(frozenset(flood_faces(T, T.left_face[(q, p)], walls)))
    return tuple(result)


def inner_faces(T: Triangulation, event: FlipEvent) -> list[int]:
    if event.kind == FACIAL:
        return [T.face_index[canonical_face(event.triangle)]]
    inside = T.inside(event.triangle)
    return [k for k, f in enumerate(T.faces) if any(v in inside for v in f)]


def region_weights(T: Triangulation, S: SchnyderWood, w: Sequence, event: FlipEvent) -> RegionWeights:
    weights = getattr(w, "weights", w)
    d = delta_regions(T, S, event)
    wc = sum(weights[k] for k in inner_faces(T, event))
    return RegionWeights(*(sum(weights[k] for k in r) for r in d), wc)


# -- closed-form coordinate updates ------------------------------------------

def _shift(v, i: int, amount, sign: int):
    """Keep coordinate i, move ``amount`` from coordinate i+1 to i+2 (sign=+1) or back."""
    c = list(v)
    c[i % 3] -= sign * amount
    c[(i + 1) % 3] += sign * amount
    return tuple(c)


def _descendant_shifts(Sc: SchnyderWood, event: FlipEvent, rw: RegionWeights, coords: dict, sign: int) -> set:
    x, y, z = event.triangle
    moved = set()
    for root, i, d in ((x, 1, rw.delta1), (z, 2, rw.delta2), (y, 3, rw.delta3)):
        for v in descendants(Sc, root, i):
            coords[v] = _shift(coords[v], i, d + rw.wC, sign)
            moved.add(v)
    return moved


def predict_coords_facial(T: Triangulation, S: SchnyderWood, w, event: FlipEvent, D: Drawing) -> Drawing:
    if event.kind != FACIAL:
        raise InvalidFlip("predict_coords_facial needs a facial event")
    _check(T, S.out, event)
    Sc = ccw_wood(T, S, event)
    rw = region_weights(T, Sc, w, FlipEvent(event.triangle, FLIP, event.kind))
    coords = dict(D.coords)
    _descendant_shifts(Sc, event, rw, coords, 1 if event.direction == FLIP else -1)
    return Drawing(D.W, coords)


def inner_drawing(T: Triangulation, S: SchnyderWood, w, event: FlipEvent) -> dict[int, tuple]:
    """Coordinates of the vertices inside C within T|_C under the ccw wood.

    The roles of the exterior of T|_C are ``(y, x, z)``: the heads of the
    colour 1, 2 and 3 edges of the counterclockwise triangle.
    """
    weights = getattr(w, "weights", w)
    Sc = ccw_wood(T, S, event)
    x, y, z = event.triangle
    TC = restrict(T, (y, x, z))
    inside = T.inside(event.triangle)
    SC = SchnyderWood({v: Sc.out[v] for v in inside})
    wC = [weights[T.face_index[canonical_face(f)]] for f in TC.faces]
    beta = coordinates(TC, SC, wC, corner_labels(TC, SC))
    return {v: beta[v] for v in inside}


def predict_coords_separating(T: Triangulation, S: SchnyderWood, w, event: FlipEvent, D: Drawing) -> Drawing:
    if event.kind != SEPARATING:
        raise InvalidFlip("predict_coords_separating needs a separating event")
    _check(T, S.out, event)
    Sc = ccw_wood(T, S, event)
    rw = region_weights(T, Sc, w, FlipEvent(event.triangle, FLIP, event.kind))
    beta = inner_drawing(T, Sc, w, FlipEvent(event.triangle, FLIP, event.kind))
    x, y, z = event.triangle
    coords = dict(D.coords)
    sign = 1 if event.direction == FLIP else -1
    _descendant_shifts(Sc, event, rw, coords, sign)
    if event.direction == FLIP:
        base = (coords[x][0] + rw.delta2, coords[z][1] + rw.delta3, coords[y][2] + rw.delta1)
        for v, (b1, b2, b3) in beta.items():
            coords[v] = (base[0] + b3, base[1] + b1, base[2] + b2)
    else:
        # in the ccw state the inner drawing is offset by (z1, y2, x3)
        base = (coords[z][0], coords[y][1], coords[x][2])
        for v, (b1, b2, b3) in beta.items():
            coords[v] = (base[0] + b1, base[1] + b2, base[2] + b3)
    return Drawing(D.W, coords)


def predict_coords(T: Triangulation, S: SchnyderWood, w, event: FlipEvent, D: Drawing) -> Drawing:
    if event.kind == FACIAL:
        return predict_coords_facial(T, S, w, event, D)
    return predict_coords_separating(T, S, w, event, D)


# -- flip sequences -----------------------------------------------------------

class FlipWalker:
    """Mutable wood with incremental tracking of cyclic triangles.

    Recolouring never changes orientations, so a flip can only change the
    status of triangles through one of the three reversed edges.
    """

    def __init__(self, T: Triangulation, S: SchnyderWood):
        self.T = T
        self.out = dict(S.out)
        self.tris = triangles(T)
        self.by_edge: dict[frozenset, list[int]] = {}
        for k, (tri, _) in enumerate(self.tris):
            for e in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                self.by_edge.setdefault(frozenset(e), []).append(k)
        self.ccw: set[int] = set()
        self.cw: set[int] = set()
        for k, (tri, _) in enumerate(self.tris):
            self._update(k)

    def _update(self, k: int) -> None:
        st = _status(self.out, self.tris[k][0])
        (self.ccw.add if st > 0 else self.ccw.discard)(k)
        (self.cw.add if st < 0 else self.cw.discard)(k)

    def event(self, k: int) -> FlipEvent:
        tri, kind = self.tris[k]
        return _event(self.T, self.out, tri, 1 if k in self.ccw else -1, kind)

    def flippable(self) -> list[int]:
        return sorted(self.ccw, key=lambda k: sorted(self.tris[k][0]))

    def floppable(self) -> list[int]:
        return sorted(self.cw, key=lambda k: sorted(self.tris[k][0]))

    def apply(self, event: FlipEvent) -> None:
        _apply_in_place(self.T, self.out, event)
        x, y, z = event.triangle
        for e in ((x, y), (y, z), (z, x)):
            for k in self.by_edge[frozenset(e)]:
                self._update(k)

    def wood(self) -> SchnyderWood:
        return SchnyderWood(dict(self.out))


def maximal_flip_sequence(T: Triangulation, S: SchnyderWood, rng=None, limit: int | None = None) -> list[FlipEvent]:
    """Flip until no ccw triangle is left.

    The lexicographically smallest triangle goes first unless ``rng`` (a
    ``random.Random`` or numpy Generator) is given, in which case the choice is random.
    """
    walker = FlipWalker(T, S)
    events = []
    limit = limit if limit is not None else 10 * T.n ** 3 + 10
    while walker.ccw:
        if rng is None:
            k = min(walker.ccw, key=lambda k: sorted(walker.tris[k][0]))
        else:
            cand = walker.flippable()
            k = cand[int(rng.integers(len(cand))) if hasattr(rng, "integers") else rng.randrange(len(cand))]
        ev = walker.event(k)
        walker.apply(ev)
        events.append(ev)
        if len(events) > limit:
            raise RuntimeError("flip sequence did not terminate")
    return events


def minimal_wood(T: Triangulation, S: SchnyderWood) -> SchnyderWood:
    walker = FlipWalker(T, S)
    for ev in maximal_flip_sequence(T, S):
        walker.apply(ev)
    return walker.wood()


def flip_sequence(T: Triangulation, S: SchnyderWood, S2: SchnyderWood) -> list[FlipEvent]:
    """Events turning S into S2, routed through the flip-minimal wood."""
    down = maximal_flip_sequence(T, S)
    up = maximal_flip_sequence(T, S2)
    return down + [ev.inverse() for ev in reversed(up)]


def replay(T: Triangulation, S: SchnyderWood, events: Sequence[FlipEvent]) -> SchnyderWood:
    out = dict(S.out)
    for ev in events:
        _check(T, out, ev)
        _apply_in_place(T, out, ev)
    return SchnyderWood(out)


def random_wood(T: Triangulation, rng, steps: int | None = None, start: SchnyderWood | None = None) -> SchnyderWood:
    """Random walk of flips and flops from ``start`` (default: compute_wood)."""
    from .schnyder import compute_wood
    walker = FlipWalker(T, start or compute_wood(T))
    steps = steps if steps is not None else 2 * T.n
    for _ in range(steps):
        cand = sorted(walker.ccw | walker.cw, key=lambda k: sorted(walker.tris[k][0]))
        if not cand:
            break
        walker.apply(walker.event(cand[int(rng.integers(len(cand)))]))
    return walker.wood()
