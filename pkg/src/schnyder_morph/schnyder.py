"""Schnyder woods: validation, construction, paths, regions and descendants.

A wood is stored as the three outgoing neighbours of every interior vertex,
``out[v] = (head of colour 1, head of colour 2, head of colour 3)``.  Every
interior edge is outgoing from exactly one interior vertex, so this is the
whole labelling.  Colours are 1-based everywhere in the public API.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .triangulation import NotSeparating, Triangulation, restrict


class NotCyclic(ValueError):
    pass


def nxt(i: int) -> int:
    """Colour i+1 (mod 3, 1-based)."""
    return i % 3 + 1


def prv(i: int) -> int:
    """Colour i-1 (mod 3, 1-based)."""
    return (i + 1) % 3 + 1


@dataclass(frozen=True, eq=False)
class SchnyderWood:
    out: Mapping[int, tuple[int, int, int]]

    def __eq__(self, other):
        if not isinstance(other, SchnyderWood):
            return NotImplemented
        return self.out == other.out

    def __hash__(self):
        return hash(self.key())

    def key(self) -> tuple:
        return tuple(sorted(self.out.items()))

    @classmethod
    def from_labels(cls, labels: Iterable[tuple[int, int, int]]) -> "SchnyderWood":
        """Build from ``(tail, head, colour)`` triples.

        Raises ValueError unless every tail has exactly one edge per colour.
        """
        heads: dict[int, list] = {}
        for tail, head, colour in labels:
            if colour not in (1, 2, 3):
                raise ValueError(f"edge {tail}->{head} has colour {colour}")
            slot = heads.setdefault(tail, [None, None, None])
            if slot[colour - 1] is not None:
                raise ValueError(f"vertex {tail} has two outgoing edges of colour {colour}")
            slot[colour - 1] = head
        out = {}
        for v, slot in heads.items():
            if None in slot:
                raise ValueError(f"vertex {v} lacks an outgoing edge of colour {slot.index(None) + 1}")
            out[v] = tuple(slot)
        return cls(out)

    @property
    def labels(self) -> dict[tuple[int, int], tuple[int, int, int]]:
        """Undirected edge ``(min, max)`` -> ``(tail, head, colour)``."""
        return {(min(v, h), max(v, h)): (v, h, i + 1)
                for v, hs in self.out.items() for i, h in enumerate(hs)}

    def edge_list(self) -> list[tuple[int, int, int]]:
        return sorted((v, h, i + 1) for v, hs in self.out.items() for i, h in enumerate(hs))

    def colour(self, u: int, v: int) -> int:
        """Colour of the directed edge u->v, or 0 if u->v is not in the wood."""
        hs = self.out.get(u)
        if hs is None:
            return 0
        for i in range(3):
            if hs[i] == v:
                return i + 1
        return 0

    def parent(self, v: int, i: int) -> int:
        return self.out[v][i - 1]

    @cached_property
    def children(self) -> tuple[dict[int, list[int]], ...]:
        ch: tuple[dict[int, list[int]], ...] = ({}, {}, {})
        for v in sorted(self.out):
            for i in range(3):
                ch[i].setdefault(self.out[v][i], []).append(v)
        return ch

    def tree_order(self, root: int, i: int) -> list[int]:
        """Vertices of tree ``T_i`` in BFS order from its root (parents first)."""
        ch = self.children[i - 1]
        order = [root]
        k = 0
        while k < len(order):
            order.extend(ch.get(order[k], ()))
            k += 1
        return order


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str  # "coverage", "D1", "D2" or "tree"
    where: tuple
    message: str

    def __str__(self):
        return f"{self.axiom} at {self.where}: {self.message}"


def validate_wood(T: Triangulation, wood: SchnyderWood | Iterable[tuple[int, int, int]]) -> Violation | None:
    """First violated axiom, or None if ``wood`` is a Schnyder wood of T."""
    labels = wood.edge_list() if isinstance(wood, SchnyderWood) else list(wood)
    interior = set(T.interior_edges)
    seen: dict[tuple[int, int], tuple[int, int, int]] = {}
    for tail, head, colour in labels:
        e = (min(tail, head), max(tail, head))
        if colour not in (1, 2, 3):
            return Violation("coverage", e, f"colour {colour} not in 1..3")
        if e not in interior:
            return Violation("coverage", e, "not an interior edge of T")
        if e in seen:
            return Violation("coverage", e, "labelled twice")
        seen[e] = (tail, head, colour)
    missing = interior - seen.keys()
    if missing:
        return Violation("coverage", min(missing), "interior edge without label")

    at: dict[int, dict[int, tuple[str, int]]] = {v: {} for v in T.vertices}
    for tail, head, colour in seen.values():
        at[tail][head] = ("out", colour)
        at[head][tail] = ("in", colour)

    for i, a in enumerate(T.exterior, start=1):
        for u, (kind, colour) in sorted(at[a].items()):
            if kind != "in" or colour != i:
                return Violation("D2", (a, u), f"edge at a{i} must be incoming of colour {i}")

    for v in T.interior_vertices:
        outs = {c: u for u, (k, c) in at[v].items() if k == "out"}
        n_out = sum(1 for k, _ in at[v].values() if k == "out")
        if n_out != 3 or set(outs) != {1, 2, 3}:
            return Violation("D1", (v,), f"needs one outgoing edge per colour, has {n_out}")
        expected = []
        for c in (1, 2, 3):
            expected.append(("out", c))
            expected.append(("in", prv(c)))
        # walk clockwise from out-1; incoming colour (c-1) must sit between out-c and out-(c+1)
        stage = 0
        for u in T.cw_order_from(v, outs[1])[1:]:
            kind, c = at[v][u]
            if kind == "out":
                stage += 2
                if stage >= 6 or expected[stage] != (kind, c):
                    return Violation("D1", (v,), "outgoing colours not 1,2,3 in clockwise order")
            elif (kind, c) != expected[stage + 1]:
                return Violation("D1", (v, u), f"incoming colour {c} in the wrong sector")

    wood_ = SchnyderWood.from_labels(seen.values())
    for i, root in enumerate(T.exterior, start=1):
        reached = set(wood_.tree_order(root, i))
        for v in T.interior_vertices:
            if v not in reached:
                return Violation("tree", (v,), f"colour {i} path from {v} does not reach a{i}")
    return None


def is_wood(T: Triangulation, wood) -> bool:
    return validate_wood(T, wood) is None


# -- construction -------------------------------------------------------------

def compute_wood(T: Triangulation) -> SchnyderWood:
    """Schnyder wood from a canonical vertex elimination rooted at ``a1``.

    Vertices leave the contour (path from ``a3`` to ``a2``) one at a time;
    the eligible vertex with the lowest id goes first.  The removed vertex
    points to its right contour neighbour in colour 2 and its left in
    colour 3; the vertices it uncovers point to it in colour 1.
    """
    a1, a2, a3 = T.exterior
    nbrs = T.nbrs
    out1: dict[int, int] = {}
    out2: dict[int, int] = {}
    out3: dict[int, int] = {}

    fan = T.cw_order_from(a1, a2)  # a2, ..., a3
    contour = fan[::-1]
    left = {contour[k]: contour[k - 1] for k in range(1, len(contour))}
    right = {contour[k]: contour[k + 1] for k in range(len(contour) - 1)}
    for w in contour[1:-1]:
        out1[w] = a1

    removed = {a1}
    on_contour = set(contour)

    def count(u):
        return sum(1 for x in nbrs[u] if x in on_contour and x not in removed)

    cnt = {u: count(u) for u in contour}
    heap = [u for u in contour[1:-1] if cnt[u] == 2]
    heapq.heapify(heap)
    remaining = T.n - 3
    while remaining:
        v = heapq.heappop(heap)
        if v in removed or v not in on_contour or cnt.get(v) != 2:
            continue
        l, r = left[v], right[v]
        out2[v], out3[v] = r, l
        ring = T.cw_order_from(v, r)
        inner = ring[1:ring.index(l)]  # below v, right to left
        for w in inner:
            out1[w] = v
        chain = [l] + inner[::-1] + [r]
        for p, q in zip(chain, chain[1:]):
            right[p] = q
            left[q] = p
        removed.add(v)
        on_contour.discard(v)
        on_contour.update(inner)
        remaining -= 1
        touched = set(x for x in nbrs[v] if x not in removed)
        for w in inner:
            touched.update(x for x in nbrs[w] if x not in removed)
        for u in touched:
            if u in on_contour:
                cnt[u] = count(u)
                if cnt[u] == 2 and u not in (a2, a3):
                    heapq.heappush(heap, u)
    return SchnyderWood({v: (out1[v], out2[v], out3[v]) for v in T.interior_vertices})


# -- paths, regions, descendants ----------------------------------------------

def path(T: Triangulation, S: SchnyderWood, v: int, i: int) -> list[int]:
    """P_i(v): the colour-i path from v to a_i."""
    root = T.exterior[i - 1]
    p = [v]
    while p[-1] != root:
        p.append(S.out[p[-1]][i - 1])
        if len(p) > T.n:
            raise RuntimeError(f"colour {i} path from {v} does not terminate")
    return p


def flood_faces(T: Triangulation, start: int, walls: set[frozenset]) -> set[int]:
    """Interior faces reachable from ``start`` without crossing a wall edge."""
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        a, b, c = T.faces[f]
        for u, v in ((a, b), (b, c), (c, a)):
            if frozenset((u, v)) in walls:
                continue
            g = T.left_face[(v, u)]
            if g < 0:
                raise RuntimeError("flood fill escaped to the exterior face")
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return seen


def path_edges(p: Sequence[int]) -> set[frozenset]:
    return {frozenset(e) for e in zip(p, p[1:])}


def region(T: Triangulation, S: SchnyderWood, v: int, i: int, paths=None) -> frozenset:
    """R_i(v) as a set of face indices."""
    paths = paths or {j: path(T, S, v, j) for j in (nxt(i), prv(i))}
    walls = path_edges(paths[nxt(i)]) | path_edges(paths[prv(i)])
    walls.add(frozenset((T.exterior[nxt(i) - 1], T.exterior[prv(i) - 1])))
    # the face at v clockwise after out_{i+1} lies in the i-th sector
    w = S.out[v][nxt(i) - 1]
    q = T.cw_order_from(v, w)[1]
    return frozenset(flood_faces(T, T.left_face[(v, q)], walls))


@dataclass(frozen=True)
class RegionDecomposition:
    vertex: int
    paths: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    regions: tuple[frozenset, frozenset, frozenset]


def paths_and_regions(T: Triangulation, S: SchnyderWood, v: int) -> RegionDecomposition:
    if v not in S.out:
        raise ValueError(f"{v} is not an interior vertex")
    paths = {i: path(T, S, v, i) for i in (1, 2, 3)}
    regions = tuple(region(T, S, v, i, paths) for i in (1, 2, 3))
    return RegionDecomposition(v, tuple(tuple(paths[i]) for i in (1, 2, 3)), regions)


def descendants(S: SchnyderWood, v: int, i: int) -> set[int]:
    """D_i(v): vertices whose colour-i path passes through v (v included)."""
    return set(S.tree_order(v, i))


def restrict_wood(T: Triangulation, S: SchnyderWood, C: Sequence[int]) -> tuple[Triangulation, SchnyderWood]:
    """The sub-wood on T|_C for a cyclically oriented separating triangle C.

    The exterior of the returned triangulation is ``(b1, b2, b3)`` with
    ``b_i`` the head of the colour-i edge of C, which makes the restriction a
    Schnyder wood with ``b_i`` in the role of ``a_i``.
    """
    if not T.is_separating(C):
        raise NotSeparating(f"{tuple(C)} is not a separating triangle")
    x, y, z = C
    if S.colour(x, y) and S.colour(y, z) and S.colour(z, x):
        cyc = ((x, y), (y, z), (z, x))
    elif S.colour(y, x) and S.colour(z, y) and S.colour(x, z):
        cyc = ((y, x), (z, y), (x, z))
    else:
        raise NotCyclic(f"{tuple(C)} is not cyclically oriented")
    roles = {S.colour(t, h): h for t, h in cyc}
    if set(roles) != {1, 2, 3}:
        raise NotCyclic(f"{tuple(C)} does not carry all three colours")
    TC = restrict(T, (roles[1], roles[2], roles[3]))
    inside = T.inside(C)
    return TC, SchnyderWood({v: S.out[v] for v in sorted(inside)})


def is_acyclic_mixed(T: Triangulation, S: SchnyderWood, i: int) -> bool:
    """Property (P): T_{i-1}^- u T_i u T_{i+1}^- has no directed cycle."""
    succ: dict[int, set[int]] = {v: set() for v in T.vertices}
    for v, hs in S.out.items():
        succ[v].add(hs[i - 1])
        succ[hs[prv(i) - 1]].add(v)
        succ[hs[nxt(i) - 1]].add(v)
    indeg = {v: 0 for v in T.vertices}
    for v in succ:
        for u in succ[v]:
            indeg[u] += 1
    queue = deque(v for v in T.vertices if indeg[v] == 0)
    done = 0
    while queue:
        v = queue.popleft()
        done += 1
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                queue.append(u)
    return done == T.n
