"""Recognising weighted Schnyder drawings.

Given barycentric coordinates, every edge ``uv`` is oriented and coloured by
the sign pattern of ``v - u``: one positive entry i means ``u -> v`` in
colour i, one negative entry i means ``v -> u`` in colour i.  The colour-i
parent of u must also be the nearest point in the closed cone at u towards
``a_i`` (the half-Theta_6 condition).  The face weights then follow from a
linear system with a unique solution; the drawing is a weighted Schnyder
drawing iff all of them are positive.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

import numpy as np

from .drawing import coordinates, corner_labels
from .schnyder import SchnyderWood, nxt, paths_and_regions, prv, validate_wood
from .triangulation import Triangulation

WEIGHTED_SCHNYDER = "weighted-schnyder"
WOOD_MISMATCH = "wood-mismatch"
NON_POSITIVE_WEIGHT = "non-positive-weight"
DEGENERATE_CONE = "degenerate-cone"
INCONSISTENT = "inconsistent-system"


class RecognitionError(ValueError):
    pass


class DegenerateCone(RecognitionError):
    def __init__(self, edge, message=""):
        super().__init__(message or f"edge {edge} lies on a cone boundary")
        self.edge = edge


class WoodMismatch(RecognitionError):
    def __init__(self, edge, message=""):
        super().__init__(message or f"edge {edge} disagrees with the half-Theta_6 graph")
        self.edge = edge


class InconsistentSystem(RecognitionError):
    pass


@dataclass
class RecognitionResult:
    verdict: str
    wood: SchnyderWood | None = None
    weights: list[Fraction] | None = None
    edge: tuple | None = None
    face: tuple | None = None
    value: Fraction | None = None
    message: str = ""
    W: object = None

    @property
    def ok(self) -> bool:
        return self.verdict == WEIGHTED_SCHNYDER


# -- normalisation ------------------------------------------------------------

def _frac(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def normalise(T: Triangulation, coords: Mapping[int, Sequence], W=None) -> tuple[object, dict[int, tuple]]:
    """Exact barycentric coordinates with respect to the exterior triangle.

    Accepts 2D points or barycentric triples.  Barycentric input with the
    exterior at ``W e_i`` is returned unchanged; anything else is mapped
    affinely onto ``a_i -> W e_i`` with ``W = 2n - 5`` unless given.
    """
    if all(type(x) is int for c in coords.values() for x in c):
        pts = {v: tuple(c) for v, c in coords.items()}
    else:
        pts = {v: tuple(_int_if(_frac(x)) for x in c) for v, c in coords.items()}
    missing = [v for v in T.vertices if v not in pts]
    if missing:
        raise RecognitionError(f"no coordinates for vertices {missing[:5]}")
    dims = {len(c) for c in pts.values()}
    if dims == {3}:
        sums = {sum(c) for c in pts.values()}
        if len(sums) != 1:
            raise RecognitionError("barycentric triples do not share one sum")
        total = sums.pop()
        if all(pts[a] == tuple(total if k == i else 0 for k in range(3)) for i, a in enumerate(T.exterior)):
            if W is None or W == total:
                return _int_if(total), {v: pts[v] for v in T.vertices}
        xy = {v: (c[0], c[1]) for v, c in pts.items()}
    elif dims == {2}:
        xy = pts
    else:
        raise RecognitionError("coordinates must be all 2D or all barycentric")
    W = Fraction(W if W is not None else len(T.faces))
    (x1, y1), (x2, y2), (x3, y3) = (xy[a] for a in T.exterior)
    det = Fraction((x1 - x3) * (y2 - y3) - (x2 - x3) * (y1 - y3))  # Fraction keeps "/" exact for int input
    if det == 0:
        raise RecognitionError("exterior vertices are collinear")
    out = {}
    for v in T.vertices:
        x, y = xy[v]
        l1 = ((y2 - y3) * (x - x3) - (x2 - x3) * (y - y3)) / det
        l2 = ((x1 - x3) * (y - y3) - (y1 - y3) * (x - x3)) / det
        out[v] = tuple(_int_if(W * l) for l in (l1, l2, 1 - l1 - l2))
    return _int_if(W), out


def _int_if(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _integer_matrix(T: Triangulation, coords) -> np.ndarray:
    """Coordinates scaled to a common denominator, rows in T.vertices order."""
    if all(type(x) is int for v in T.vertices for x in coords[v]):
        rows = [coords[v] for v in T.vertices]
        big = max(abs(x) for r in rows for x in r)
        return np.array(rows, dtype=np.int64 if big < 2 ** 62 else object)
    den = 1
    for v in T.vertices:
        for x in coords[v]:
            den = lcm(den, Fraction(x).denominator)
    rows = [[int(Fraction(x) * den) for x in coords[v]] for v in T.vertices]
    big = max(abs(x) for r in rows for x in r)
    return np.array(rows, dtype=np.int64 if big < 2 ** 62 else object)


# -- classification -----------------------------------------------------------

def cone_colour(du: Sequence) -> int:
    """+i if the difference has one positive entry at i, -i for one negative entry at i, 0 if degenerate."""
    if any(x == 0 for x in du):
        return 0
    pos = [k for k in range(3) if du[k] > 0]
    if len(pos) == 1:
        return pos[0] + 1
    neg = [k for k in range(3) if du[k] < 0]
    return -(neg[0] + 1)


def classify_edges(T: Triangulation, coords: Mapping[int, Sequence]) -> SchnyderWood:
    """The wood read off a barycentric drawing, checked against the half-Theta_6 graph."""
    ext = set(T.exterior)
    heads: dict[int, list] = {v: [None, None, None] for v in T.interior_vertices}
    for u, v in T.interior_edges:
        d = tuple(coords[v][k] - coords[u][k] for k in range(3))
        c = cone_colour(d)
        if c == 0:
            raise DegenerateCone((u, v))
        tail, head, col = (u, v, c) if c > 0 else (v, u, -c)
        if tail in ext:
            raise WoodMismatch((tail, head), f"exterior vertex {tail} would have an outgoing edge")
        if heads[tail][col - 1] is not None:
            raise WoodMismatch((tail, head), f"vertex {tail} has two edges in cone {col}")
        heads[tail][col - 1] = head
    for v, hs in heads.items():
        if None in hs:
            raise WoodMismatch((v,), f"vertex {v} has an empty cone {hs.index(None) + 1}")
    S = SchnyderWood({v: tuple(hs) for v, hs in heads.items()})
    _half_theta6(T, coords, S)
    err = validate_wood(T, S)
    if err is not None:
        raise WoodMismatch(err.where, f"classified edges are not a Schnyder wood: {err}")
    return S


def _half_theta6(T: Triangulation, coords, S: SchnyderWood) -> None:
    P = _integer_matrix(T, coords)
    idx = T.index
    verts = T.vertices
    rows = np.array([idx[u] for u in T.interior_vertices], dtype=np.int64)
    big = P.max() + 1
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        # closed cone at u towards a_i: p_j <= u_j and p_k <= u_k
        inside = (P[None, :, j] <= P[rows, j][:, None]) & (P[None, :, k] <= P[rows, k][:, None])
        inside[np.arange(len(rows)), rows] = False
        vals = np.where(inside, P[None, :, i], big)
        best = vals.min(axis=1)
        ties = (vals == best[:, None]).sum(axis=1)
        win = vals.argmin(axis=1)
        for r in np.flatnonzero(ties > 1):
            u = verts[rows[r]]
            raise DegenerateCone((u, verts[win[r]]), f"tie for nearest point in cone {i + 1} of {u}")
        on_edge = (P[win, j] == P[rows, j]) | (P[win, k] == P[rows, k])
        for r in np.flatnonzero(on_edge):
            u = verts[rows[r]]
            raise DegenerateCone((u, verts[win[r]]), f"nearest point in cone {i + 1} of {u} is on its boundary")
        parents = np.array([idx[S.out[verts[r]][i]] for r in rows], dtype=np.int64)
        for r in np.flatnonzero(win != parents):
            u = verts[rows[r]]
            raise WoodMismatch((u, verts[win[r]]),
                               f"half-Theta_6 edge {u}-{verts[win[r]]} is not the colour-{i + 1} edge")


# -- weight systems -----------------------------------------------------------

def region_matrix(T: Triangulation, S: SchnyderWood) -> tuple[list[tuple[int, int]], list[list[int]]]:
    """Rows ``(v, i)`` with the 0/1 characteristic vectors of R_i(v) over faces."""
    keys, rows = [], []
    m = len(T.faces)
    for v in T.interior_vertices:
        r = paths_and_regions(T, S, v)
        for i in range(3):
            row = [0] * m
            for f in r.regions[i]:
                row[f] = 1
            keys.append((v, i + 1))
            rows.append(row)
    return keys, rows


def bareiss_solve(rows: Sequence[Sequence[int]], rhs: Sequence, columns: Sequence[int] | None = None) -> list[Fraction]:
    """Unique solution of an overdetermined integer system by fraction-free elimination.

    ``columns`` fixes the pivot column order.  Raises InconsistentSystem when
    the system has no solution and RecognitionError when it is rank deficient.
    """
    m = len(rows[0])
    columns = list(columns) if columns is not None else list(range(m))
    den = 1
    for b in rhs:
        den = lcm(den, Fraction(b).denominator)
    A = [[int(x) for x in r] + [int(Fraction(b) * den)] for r, b in zip(rows, rhs)]
    nrows = len(A)
    prev = 1
    pivots = []
    r = 0
    for c in columns:
        p = next((k for k in range(r, nrows) if A[k][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for k in range(r + 1, nrows):
            a = A[k][c]
            row_k, row_r = A[k], A[r]
            A[k] = [(piv * row_k[t] - a * row_r[t]) // prev for t in range(m + 1)]
        prev = piv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for k in range(r, nrows):
        if A[k][m] != 0:
            raise InconsistentSystem("coordinates are not realisable by any weights on this wood")
    if len(pivots) < m:
        raise RecognitionError(f"system has rank {len(pivots)} < {m}")
    x: dict[int, Fraction] = {}
    for k in range(r - 1, -1, -1):
        c = pivots[k]
        s = Fraction(A[k][m])
        for t in pivots[k + 1:]:
            s -= A[k][t] * x[t]
        x[c] = s / A[k][c]
    return [x[c] / den for c in range(m)]


def _corner_groups(T: Triangulation, S: SchnyderWood, coords) -> list[tuple[list[int], object]]:
    """Per colour i and vertex u: (faces whose i-corner is u, their total weight)."""
    W = coords[T.exterior[0]][0]
    labels = corner_labels(T, S)
    groups = []
    for i in (1, 2, 3):
        # subtree sums S_i(v) from v_i = S_i(v) + sum over strict ancestors in T_{i+1} and T_{i-1}
        sub: dict[int, object] = {}
        acc = {j: {T.exterior[j - 1]: 0} for j in (nxt(i), prv(i))}
        for v in _topological(T, S, (nxt(i), prv(i))):
            pj, pk = S.out[v][nxt(i) - 1], S.out[v][prv(i) - 1]
            s = coords[v][i - 1] - acc[nxt(i)][pj] - acc[prv(i)][pk]
            sub[v] = s
            acc[nxt(i)][v] = acc[nxt(i)][pj] + s
            acc[prv(i)][v] = acc[prv(i)][pk] + s
        g = dict(sub)
        for v in S.out:
            par = S.out[v][i - 1]
            if par in g:
                g[par] -= sub[v]
        root = T.exterior[i - 1]
        g[root] = W - sum(sub[v] for v in S.out if S.out[v][i - 1] == root)
        members: dict[int, list[int]] = {}
        for f, owner in enumerate(labels):
            members.setdefault(owner[i - 1], []).append(f)
        for u, val in g.items():
            faces = members.get(u, [])
            if not faces and val != 0:
                raise InconsistentSystem(f"vertex {u} owns no colour-{i} corner but needs weight {val}")
            if faces:
                groups.append((faces, val))
    return groups


def _topological(T: Triangulation, S: SchnyderWood, colours) -> list[int]:
    """Interior vertices with both parents (in the given colours) first."""
    indeg = {v: 0 for v in S.out}
    kids: dict[int, list[int]] = {}
    for v in S.out:
        for j in colours:
            p = S.out[v][j - 1]
            if p in indeg:
                indeg[v] += 1
                kids.setdefault(p, []).append(v)
    queue = deque(sorted(v for v, d in indeg.items() if d == 0))
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for c in kids.get(v, ()):
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    if len(order) != len(indeg):
        raise RecognitionError("colour trees contain a directed cycle")
    return order


def _sparse_solve(groups: list[tuple[list[int], object]], m: int) -> list:
    """Exact solve of group-sum equations (0/1 rows).

    Rows with a single unknown are peeled off first; this settles the
    corner systems met in practice using only subtraction, so integer input
    stays integral.  Anything left goes through sparse Fraction elimination.
    """
    x: dict[int, object] = {}
    unknown = [set(fs) for fs, _ in groups]
    rest = [b for _, b in groups]
    rows_of: dict[int, list[int]] = {}
    for k, fs in enumerate(unknown):
        for f in fs:
            rows_of.setdefault(f, []).append(k)
    queue = deque(k for k, fs in enumerate(unknown) if len(fs) == 1)
    while queue:
        k = queue.popleft()
        if len(unknown[k]) != 1:
            continue
        f = unknown[k].pop()
        x[f] = rest[k]
        rest[k] = 0
        for j in rows_of[f]:
            if f in unknown[j]:
                unknown[j].discard(f)
                rest[j] -= x[f]
                if len(unknown[j]) == 1:
                    queue.append(j)
    for k, fs in enumerate(unknown):
        if not fs and rest[k] != 0:
            raise InconsistentSystem("face weights cannot reproduce the coordinates")
    if len(x) < m:
        left = sorted(set(range(m)) - x.keys())
        pos = {f: c for c, f in enumerate(left)}
        sub = [(fs, b) for fs, b in zip(unknown, rest) if fs]
        rows = [[1 if f in fs else 0 for f in left] for fs, _ in sub]
        if not rows:
            raise RecognitionError(f"system has rank {len(x)} < {m}")
        sol = bareiss_solve(rows, [b for _, b in sub])
        for f in left:
            x[f] = _int_if(sol[pos[f]])
    return [x[f] for f in range(m)]


def solve_weights(T: Triangulation, S: SchnyderWood, coords: Mapping[int, Sequence],
                  method: str = "structured", order: str = "forward") -> list[Fraction]:
    """The unique face weights reproducing ``coords`` over the wood S.

    ``method="dense"`` solves the full region system by fraction-free
    elimination with pivot columns in ``order`` ("forward" or "reverse");
    ``"structured"`` recovers per-corner sums along the trees first.
    """
    W = coords[T.exterior[0]][0]
    m = len(T.faces)
    if method == "dense":
        keys, rows = region_matrix(T, S)
        rhs = [Fraction(coords[v][i - 1]) for v, i in keys]
        cols = list(range(m)) if order == "forward" else list(range(m - 1, -1, -1))
        w = [_int_if(x) for x in bareiss_solve(rows, rhs, cols)]
    elif method == "structured":
        w = _sparse_solve(_corner_groups(T, S, coords), m)
    else:
        raise ValueError(f"unknown method {method!r}")
    redraw = coordinates(T, S, w)
    for v in T.vertices:
        if tuple(redraw[v]) != tuple(coords[v]):
            raise InconsistentSystem(f"weights do not reproduce vertex {v}")
    if sum(w) != W:
        raise InconsistentSystem("weights do not sum to W")
    return w


def recognize(T: Triangulation, coords: Mapping[int, Sequence], W=None) -> RecognitionResult:
    try:
        W, bary = normalise(T, coords, W)
    except RecognitionError as e:
        return RecognitionResult(INCONSISTENT, message=str(e))
    try:
        S = classify_edges(T, bary)
    except DegenerateCone as e:
        return RecognitionResult(DEGENERATE_CONE, edge=e.edge, message=str(e), W=W)
    except WoodMismatch as e:
        return RecognitionResult(WOOD_MISMATCH, edge=e.edge, message=str(e), W=W)
    try:
        w = solve_weights(T, S, bary)
    except RecognitionError as e:
        return RecognitionResult(INCONSISTENT, wood=S, message=str(e), W=W)
    bad = [(k, x) for k, x in enumerate(w) if x <= 0]
    if bad:
        k, x = min(bad, key=lambda kx: (kx[1], kx[0]))
        return RecognitionResult(NON_POSITIVE_WEIGHT, wood=S, weights=w, face=T.faces[k], value=x,
                                 message=f"face {T.faces[k]} needs weight {x}", W=W)
    return RecognitionResult(WEIGHTED_SCHNYDER, wood=S, weights=w, W=W)
