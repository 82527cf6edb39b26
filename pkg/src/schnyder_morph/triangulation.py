"""Combinatorial planar triangulations with a distinguished exterior face.

Faces are vertex triples.  Interior faces are listed counterclockwise and
the exterior triple ``(a1, a2, a3)`` clockwise, so that as face cycles
every directed edge (dart) appears exactly once over all ``2n - 4`` faces.
The rotation system is rebuilt from the face list.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

Face = tuple[int, int, int]

FACIAL = "facial"
SEPARATING = "separating"


class TriangulationError(ValueError):
    """Base class for malformed triangulation input."""


class NonTriangularFace(TriangulationError):
    pass


class EulerViolation(TriangulationError):
    pass


class DisconnectedInput(TriangulationError):
    pass


class OrientationInconsistent(TriangulationError):
    pass


class NotSeparating(TriangulationError):
    pass


def canonical_face(face: Sequence[int]) -> Face:
    """Rotate a triple so its smallest vertex comes first (orientation kept)."""
    a, b, c = face
    if a < b and a < c:
        return (a, b, c)
    if b < c:
        return (b, c, a)
    return (c, a, b)


@dataclass(frozen=True)
class TriangleRef:
    vertices: Face
    kind: str  # FACIAL or SEPARATING


@dataclass(frozen=True, eq=False)
class Triangulation:
    exterior: Face
    faces: tuple[Face, ...]

    def __post_init__(self):
        object.__setattr__(self, "exterior", tuple(int(v) for v in self.exterior))
        faces = []
        for f in self.faces:
            f = tuple(int(v) for v in f)
            if len(f) != 3 or len(set(f)) != 3:
                raise NonTriangularFace(f"face {f} is not a triangle on 3 distinct vertices")
            faces.append(f)
        object.__setattr__(self, "faces", tuple(faces))
        if len(self.exterior) != 3 or len(set(self.exterior)) != 3:
            raise NonTriangularFace(f"exterior {self.exterior} is not a triangle")
        self._validate()

    # -- construction -----------------------------------------------------

    def _validate(self) -> None:
        verts = set(self.exterior)
        for f in self.faces:
            verts.update(f)
        n = len(verts)
        if n < 4:
            raise EulerViolation(f"need at least 4 vertices, got {n}")
        if len(self.faces) != 2 * n - 5:
            raise EulerViolation(
                f"{len(self.faces)} interior faces for n={n}, expected {2 * n - 5}")

        third: dict[tuple[int, int], int] = {}
        left_face: dict[tuple[int, int], int] = {}
        for fi, f in enumerate(self.faces + (self.exterior,)):
            for k in range(3):
                u, v, w = f[k], f[(k + 1) % 3], f[(k + 2) % 3]
                if (u, v) in third:
                    raise OrientationInconsistent(
                        f"directed edge {u}->{v} used by two faces")
                third[(u, v)] = w
                left_face[(u, v)] = fi if fi < len(self.faces) else -1
        for (u, v) in third:
            if (v, u) not in third:
                raise OrientationInconsistent(f"edge {u}-{v} bounds only one face")
        edges = sorted({(min(u, v), max(u, v)) for (u, v) in third})
        if len(edges) != 3 * n - 6:
            raise EulerViolation(f"{len(edges)} edges for n={n}, expected {3 * n - 6}")

        nbrs: dict[int, set[int]] = {v: set() for v in verts}
        for u, v in edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        start = self.exterior[0]
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        if len(seen) != n:
            raise DisconnectedInput(f"{n - len(seen)} vertices unreachable from {start}")

        # cw rotation: for a face (u, v, w), w follows v counterclockwise at u
        cw_next: dict[tuple[int, int], int] = {}
        for (u, v), w in third.items():
            cw_next[(u, w)] = v
        rot: dict[int, tuple[int, ...]] = {}
        for u in verts:
            first = min(nbrs[u])
            order = [first]
            nxt = cw_next[(u, first)]
            while nxt != first:
                order.append(nxt)
                if len(order) > len(nbrs[u]):
                    break
                nxt = cw_next[(u, nxt)]
            if len(order) != len(nbrs[u]):
                raise OrientationInconsistent(f"rotation at vertex {u} is not a single cycle")
            rot[u] = tuple(order)

        set_ = object.__setattr__
        set_(self, "vertices", tuple(sorted(verts)))
        set_(self, "edges", tuple(edges))
        set_(self, "nbrs", {v: frozenset(s) for v, s in nbrs.items()})
        set_(self, "third", third)
        set_(self, "left_face", left_face)
        set_(self, "rot", rot)
        set_(self, "face_index", {canonical_face(f): i for i, f in enumerate(self.faces)})

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def interior_vertices(self) -> tuple[int, ...]:
        ext = set(self.exterior)
        return tuple(v for v in self.vertices if v not in ext)

    @cached_property
    def interior_edges(self) -> tuple[tuple[int, int], ...]:
        a1, a2, a3 = self.exterior
        outer = {tuple(sorted(e)) for e in ((a1, a2), (a2, a3), (a1, a3))}
        return tuple(e for e in self.edges if e not in outer)

    @cached_property
    def index(self) -> dict[int, int]:
        """Vertex id -> position in ``vertices``."""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def face_array(self) -> np.ndarray:
        """Interior faces as positions into ``vertices`` (shape ``(2n-5, 3)``)."""
        idx = self.index
        return np.array([[idx[v] for v in f] for f in self.faces], dtype=np.int64)

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.nbrs[u]

    def is_face(self, tri: Iterable[int]) -> bool:
        """True if the vertex triple bounds a face (interior or exterior)."""
        a, b, c = tri
        for f in ((a, b, c), (a, c, b)):
            if self.third.get((f[0], f[1])) == f[2]:
                return True
        return False

    def ccw_next(self, u: int, v: int) -> int:
        return self.third[(u, v)]

    def cw_order_from(self, u: int, start: int) -> list[int]:
        """Neighbours of ``u`` in clockwise order beginning at ``start``."""
        r = self.rot[u]
        k = r.index(start)
        return list(r[k:] + r[:k])

    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.exterior == other.exterior and self.faces == other.faces

    def __hash__(self):
        return hash((self.exterior, self.faces))

    def __repr__(self):
        return f"Triangulation(n={self.n}, exterior={self.exterior})"

    # -- separating triangles ---------------------------------------------

    @cached_property
    def _separating(self) -> dict[frozenset, tuple[Face, frozenset]]:
        out = {}
        for u, v in self.edges:
            for w in self.nbrs[u] & self.nbrs[v]:
                if w <= v:
                    continue
                if self.is_face((u, v, w)):
                    continue
                inside = self._inside_of((u, v, w))
                out[frozenset((u, v, w))] = (self._ccw_triangle((u, v, w), inside), inside)
        return out

    def _inside_of(self, tri: Face) -> frozenset:
        cset = set(tri)
        start = next(a for a in self.exterior if a not in cset)
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in self.nbrs[u]:
                if v not in seen and v not in cset:
                    seen.add(v)
                    queue.append(v)
        return frozenset(v for v in self.vertices if v not in seen and v not in cset)

    def _ccw_triangle(self, tri: Face, inside: frozenset) -> Face:
        x, y, z = tri
        # interior lies on the left of x->y iff the sector ccw from y at x is inside
        if self.ccw_next(x, y) in inside:
            return (x, y, z)
        return (x, z, y)

    def separating_triangles(self) -> list[TriangleRef]:
        return [TriangleRef(canonical_face(ccw), SEPARATING)
                for ccw, _ in sorted(self._separating.values())]

    def is_separating(self, tri: Iterable[int]) -> bool:
        return frozenset(tri) in self._separating

    def ccw_orientation(self, tri: Iterable[int]) -> Face:
        """The triple ordered counterclockwise (its inside on the left)."""
        tri = tuple(tri)
        key = frozenset(tri)
        if key in self._separating:
            return self._separating[key][0]
        a, b, c = tri
        if self.third.get((a, b)) == c and self.left_face[(a, b)] >= 0:
            return (a, b, c)
        if self.third.get((a, c)) == b and self.left_face[(a, c)] >= 0:
            return (a, c, b)
        raise NotSeparating(f"{tri} is neither an interior face nor a separating triangle")

    def inside(self, tri: Iterable[int]) -> frozenset:
        """Vertices strictly inside a separating triangle (empty for faces)."""
        key = frozenset(tri)
        if key in self._separating:
            return self._separating[key][1]
        if self.is_face(tuple(key)):
            return frozenset()
        raise NotSeparating(f"{tuple(tri)} is not a triangle of T")

    def triangle_ref(self, tri: Iterable[int]) -> TriangleRef:
        tri = tuple(tri)
        if not all(self.adjacent(tri[i], tri[(i + 1) % 3]) for i in range(3)):
            raise TriangulationError(f"{tri} is not a 3-cycle")
        kind = SEPARATING if self.is_separating(tri) else FACIAL
        return TriangleRef(tri, kind)


# -- constructors -------------------------------------------------------------

def build(n: int, exterior: Sequence[int], faces: Iterable[Sequence[int]]) -> Triangulation:
    """Validated triangulation on vertex ids ``0..n-1``."""
    faces = tuple(tuple(f) for f in faces)
    for f in faces:
        if len(f) != 3:
            raise NonTriangularFace(f"face {f} has {len(f)} vertices")
    if len(faces) != 2 * n - 5:
        raise EulerViolation(f"{len(faces)} interior faces for n={n}, expected {2 * n - 5}")
    used = set(exterior)
    for f in faces:
        used.update(f)
    if any(not (0 <= v < n) for v in used):
        raise TriangulationError(f"vertex ids must lie in 0..{n - 1}")
    if len(used) != n:
        raise DisconnectedInput(f"{n - len(used)} vertices appear in no face")
    return Triangulation(tuple(exterior), faces)


def restrict(T: Triangulation, C: Sequence[int]) -> Triangulation:
    """T|_C: the vertices inside C with C as exterior.

    The exterior keeps ``C[0]`` first and is ordered clockwise in the sub-map.
    """
    if not T.is_separating(C):
        raise NotSeparating(f"{tuple(C)} is not a separating triangle")
    x, y, z = T.ccw_orientation(C)
    inside = T.inside(C)
    faces = tuple(f for f in T.faces if any(v in inside for v in f))
    cw = (x, z, y)
    k = cw.index(C[0])
    return Triangulation(cw[k:] + cw[:k], faces)


def remove_interior(T: Triangulation, C: Sequence[int]) -> Triangulation:
    """T \\ C: delete the vertices inside C; C becomes an interior face."""
    if not T.is_separating(C):
        raise NotSeparating(f"{tuple(C)} is not a separating triangle")
    inside = T.inside(C)
    faces = [f for f in T.faces if not any(v in inside for v in f)]
    faces.append(T.ccw_orientation(C))
    return Triangulation(T.exterior, tuple(faces))


def separating_triangles(T: Triangulation) -> list[TriangleRef]:
    return T.separating_triangles()


def dual_distance_sum(T: Triangulation) -> int:
    """Sum over interior faces of the dual-graph distance to the exterior face."""
    m = len(T.faces)
    dist = [-1] * m
    queue = deque()
    for k in range(3):
        u, v = T.exterior[k], T.exterior[(k + 1) % 3]
        f = T.left_face[(v, u)]
        if dist[f] < 0:
            dist[f] = 1
            queue.append(f)
    while queue:
        f = queue.popleft()
        a, b, c = T.faces[f]
        for u, v in ((a, b), (b, c), (c, a)):
            g = T.left_face[(v, u)]
            if g >= 0 and dist[g] < 0:
                dist[g] = dist[f] + 1
                queue.append(g)
    return sum(dist)


def is_four_connected(T: Triangulation) -> bool:
    return not T._separating


# -- canonical form (rooted maps) ---------------------------------------------

def canonical_key(T: Triangulation) -> tuple:
    """Relabelling-invariant key of the map rooted at the exterior ``(a1, a2, a3)``."""
    a1, a2, a3 = T.exterior
    label = {a1: 0, a2: 1, a3: 2}
    queue = deque([(a1, a2), (a2, a3), (a3, a1)])
    while queue:
        u, ref = queue.popleft()
        for v in T.cw_order_from(u, ref):
            if v not in label:
                label[v] = len(label)
                queue.append((v, u))
    faces = sorted(canonical_face(tuple(label[v] for v in f)) for f in T.faces)
    return (T.n, tuple(faces))


def relabel_canonical(T: Triangulation) -> Triangulation:
    n, faces = canonical_key(T)
    return Triangulation((0, 1, 2), faces)


# -- random generation --------------------------------------------------------

def k4() -> Triangulation:
    return Triangulation((0, 1, 2), ((1, 0, 3), (2, 1, 3), (0, 2, 3)))


def stack(faces: list[Face], fi: int, v: int) -> None:
    a, b, c = faces[fi]
    faces[fi] = (a, b, v)
    faces.append((b, c, v))
    faces.append((c, a, v))


class _FaceMesh:
    """Mutable face list with dart lookup, used for random edge flips."""

    def __init__(self, exterior: Face, faces: list[Face]):
        self.exterior = exterior
        self.faces = faces
        self.dart: dict[tuple[int, int], int] = {}
        self.nbrs: dict[int, set[int]] = {}
        for fi, f in enumerate(faces):
            self._add(fi, f)
        for k in range(3):
            u, v = exterior[k], exterior[(k + 1) % 3]
            self.nbrs.setdefault(u, set()).add(v)
            self.nbrs.setdefault(v, set()).add(u)

    def _add(self, fi, f):
        for k in range(3):
            u, v = f[k], f[(k + 1) % 3]
            self.dart[(u, v)] = fi
            self.nbrs.setdefault(u, set()).add(v)
            self.nbrs.setdefault(v, set()).add(u)

    def try_flip(self, u: int, v: int) -> bool:
        if (u, v) not in self.dart or (v, u) not in self.dart:
            return False
        f1, f2 = self.dart[(u, v)], self.dart[(v, u)]
        p = next(w for w in self.faces[f1] if w not in (u, v))
        q = next(w for w in self.faces[f2] if w not in (u, v))
        if q in self.nbrs[p]:
            return False
        for f in (f1, f2):
            a, b, c = self.faces[f]
            for x, y in ((a, b), (b, c), (c, a)):
                del self.dart[(x, y)]
        self.nbrs[u].discard(v)
        self.nbrs[v].discard(u)
        self.faces[f1] = (p, u, q)
        self.faces[f2] = (q, v, p)
        self._add(f1, self.faces[f1])
        self._add(f2, self.faces[f2])
        return True


def random_triangulation(n: int, rng: np.random.Generator, flips: int | None = None) -> Triangulation:
    """Random triangulation on ``0..n-1`` with exterior ``(0, 1, 2)``.

    Stacks vertices into uniformly random faces, then attempts ``flips``
    random diagonal flips of interior edges (default ``2n``).
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    faces = list(k4().faces)
    for v in range(4, n):
        stack(faces, int(rng.integers(len(faces))), v)
    if flips is None:
        flips = 2 * n
    if flips:
        mesh = _FaceMesh((0, 1, 2), faces)
        for _ in range(flips):
            f = mesh.faces[int(rng.integers(len(mesh.faces)))]
            k = int(rng.integers(3))
            mesh.try_flip(f[k], f[(k + 1) % 3])
        faces = mesh.faces
    return Triangulation((0, 1, 2), tuple(faces))


def all_triangulations(n: int) -> list[Triangulation]:
    """Every map on ``n`` vertices rooted at its exterior, up to isomorphism.

    Closure of a stacked seed under interior diagonal flips.
    """
    rng = np.random.default_rng(0)
    seed = relabel_canonical(random_triangulation(n, rng, flips=0))
    found = {canonical_key(seed): seed}
    queue = deque([seed])
    while queue:
        T = queue.popleft()
        for u, v in T.interior_edges:
            mesh = _FaceMesh(T.exterior, list(T.faces))
            if not mesh.try_flip(u, v):
                continue
            S = Triangulation(T.exterior, tuple(mesh.faces))
            key = canonical_key(S)
            if key not in found:
                found[key] = relabel_canonical(S)
                queue.append(found[key])
    return [found[k] for k in sorted(found)]


def brute_force_three_cycles(T: Triangulation) -> set[frozenset]:
    return {frozenset(c) for c in combinations(T.vertices, 3)
            if all(T.adjacent(c[i], c[j]) for i, j in ((0, 1), (1, 2), (0, 2)))}
