"""Build the seven-vertex negative recognition example and store it as JSON.

Vertex x sits at a larger first coordinate than y although R_1(x) lies
inside R_1(y), so no positive weights can realise the drawing.

    python scripts/figure5_instance.py --out tests/data/figure5.json
"""
from __future__ import annotations

import argparse
import math

from schnyder_morph.io import triangulation_to_json, write_json
from schnyder_morph.recognize import recognize
from schnyder_morph.triangulation import build

# a1, a2, a3, x, v5, z, y
POINTS = ["-1.22 12.70", "9.15 -4.05", "-11.30 -4.37", "-0.61 0.71", "0.50 2.86", "-0.66 2.28", "6.51 -2.38"]
EDGES = [(4, 0), (5, 0), (3, 2), (5, 2), (3, 1), (6, 1), (4, 1),
         (5, 3), (4, 5), (3, 6), (5, 6), (6, 4), (0, 1), (1, 2), (2, 0)]


def faces_from_geometry(points, edges, exterior):
    """Counterclockwise bounded faces of a straight-line triangulation."""
    xy = [tuple(float(t) for t in p.split()) for p in points]
    nbrs = {v: [] for v in range(len(xy))}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for v in nbrs:
        nbrs[v].sort(key=lambda u: math.atan2(xy[u][1] - xy[v][1], xy[u][0] - xy[v][0]))
    faces, seen = [], set()
    for u in nbrs:
        for v in nbrs[u]:
            if (u, v) in seen:
                continue
            cyc = [u, v]
            seen.add((u, v))
            while True:
                a, b = cyc[-2], cyc[-1]
                ring = nbrs[b]
                # next edge: clockwise from b->a keeps the face on the left
                c = ring[(ring.index(a) - 1) % len(ring)]
                if c == cyc[0]:
                    seen.add((b, c))
                    break
                seen.add((b, c))
                cyc.append(c)
            if len(cyc) == 3 and set(cyc) != set(exterior):
                faces.append(tuple(cyc))
    return faces


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    faces = faces_from_geometry(POINTS, EDGES, (0, 1, 2))
    T = build(7, (0, 1, 2), faces)
    coords = {v: tuple(p.split()) for v, p in enumerate(POINTS)}
    res = recognize(T, coords)
    print(res.verdict, res.message)
    if res.weights:
        print("weights", [str(w) for w in res.weights])
    if args.out:
        write_json(args.out, {"triangulation": triangulation_to_json(T),
                              "points": {str(v): list(p.split()) for v, p in enumerate(POINTS)}})
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
