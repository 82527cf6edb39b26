"""Search for separating flips whose one-step linear morph is not planar.

The morph pipeline never does this; it rebalances weights first.  A hit is
an instance where the naive morph from draw(T, S, w) to draw(T, S', w) with
uniform weights collapses a face, while the three-step protocol certifies.

    python scripts/search_naive_separating.py --trials 2000 --max-n 20 --out tests/data/naive_separating.json
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from schnyder_morph.drawing import draw, uniform_weights
from schnyder_morph.flips import apply_event, flippable_triangles, random_wood
from schnyder_morph.io import event_to_json, triangulation_to_json, wood_to_json, write_json
from schnyder_morph.morph import morph_separating_flip
from schnyder_morph.triangulation import random_triangulation
from schnyder_morph.verify import certify_step


def search(trials: int, min_n: int, max_n: int, seed: int, s: int = 3):
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(trials):
        n = int(rng.integers(min_n, max_n + 1))
        T = random_triangulation(n, rng, flips=int(rng.integers(0, n)))
        w = uniform_weights(T, s)
        for _ in range(3):
            S = random_wood(T, rng, steps=int(rng.integers(0, 6 * n)))
            D = draw(T, S, w)
            flippable, floppable = flippable_triangles(T, S)
            for ev in flippable + floppable:
                if ev.kind != "separating":
                    continue
                cert = certify_step(T, (D, draw(T, apply_event(T, S, ev), w)))
                if cert.planar:
                    continue
                if best is None or n < best[0]:
                    best = (n, T, S, ev, cert)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--min-n", type=int, default=8)
    ap.add_argument("--max-n", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    t0 = time.time()
    best = search(args.trials, args.min_n, args.max_n, args.seed)
    if best is None:
        print(f"no naive failure found in {time.time() - t0:.1f}s")
        return 1
    n, T, S, ev, cert = best
    if ev.direction == "flop":
        # the same morph run backwards is a flip from the flopped wood
        S, ev = apply_event(T, S, ev), ev.inverse()
        w = uniform_weights(T, 3)
        cert = certify_step(T, (draw(T, S, w), draw(T, apply_event(T, S, ev), w)))
    steps = morph_separating_flip(T, S, uniform_weights(T, 3), ev)
    print(f"n={n} event={ev} collapsed face {cert.face} at t*={cert.t_star} ({float(cert.t_star):.6f})")
    print("three-step protocol:", [st.certificate.verdict for st in steps])
    if args.out:
        doc = {"triangulation": triangulation_to_json(T), "wood": wood_to_json(S),
               "event": event_to_json(ev),
               "seed": args.seed}
        write_json(args.out, doc)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
