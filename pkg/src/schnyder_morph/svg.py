"""SVG frames.  Points are drawn at ``(v1, v2)`` inside ``viewBox = [0, W]^2``."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .triangulation import Triangulation

COLOURS = {1: "#d62728", 2: "#2ca02c", 3: "#1f77b4"}


def _fmt(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.6f}"


def svg_drawing(T: Triangulation, coords: Mapping[int, Sequence], W, highlight: Sequence[int] | None = None,
                trajectories: Mapping[int, Sequence[Sequence]] | None = None, wood=None, title: str = "") -> str:
    W = _fmt(W)
    sw = f"{max(float(W) / 400, 0.02):.4f}"
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {W}" width="600" height="600">']
    if title:
        out.append(f"<title>{title}</title>")
    pt = {v: (_fmt(c[0]), _fmt(c[1])) for v, c in coords.items()}
    if highlight is not None:
        pts = " ".join(f"{pt[v][0]},{pt[v][1]}" for v in highlight)
        out.append(f'<polygon points="{pts}" fill="#ffd54f" fill-opacity="0.6" stroke="none"/>')
    for f in list(T.faces) + [T.exterior]:
        pts = " ".join(f"{pt[v][0]},{pt[v][1]}" for v in f)
        out.append(f'<polygon points="{pts}" fill="none" stroke="#444" stroke-width="{sw}"/>')
    if wood is not None:
        for tail, head, colour in wood.edge_list():
            (x1, y1), (x2, y2) = pt[tail], pt[head]
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{COLOURS[colour]}" '
                       f'stroke-width="{sw}"/>')
    if trajectories:
        for v, path in sorted(trajectories.items()):
            pts = " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in path)
            out.append(f'<polyline points="{pts}" fill="none" stroke="#9467bd" stroke-width="{sw}" '
                       f'stroke-dasharray="{sw}"/>')
    r = f"{max(float(W) / 150, 0.05):.4f}"
    for v in sorted(pt):
        out.append(f'<circle cx="{pt[v][0]}" cy="{pt[v][1]}" r="{r}" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def trajectories(plan) -> dict[int, list[tuple]]:
    """Per vertex, its position at every step boundary (steps + 1 points)."""
    drawings = plan.drawings()
    return {v: [d.coords[v][:2] for d in drawings] for v in plan.T.vertices}


def emit_svg(T: Triangulation, frames, outdir, W=None, overlay=None) -> list[Path]:
    """Write one SVG per frame (a Drawing or a render_frames Frame).

    ``overlay`` maps vertices to polylines drawn on every frame.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if not isinstance(frames, (list, tuple)):
        frames = [frames]
    paths = []
    for k, fr in enumerate(frames):
        coords = fr.coords
        ev = getattr(fr, "event", None)
        width = W if W is not None else getattr(fr, "W", None)
        if width is None:
            width = max(c[0] for c in coords.values())
        title = f"step {fr.step} t={fr.t}" if hasattr(fr, "step") else ""
        text = svg_drawing(T, coords, width, ev.triangle if ev is not None else None, overlay, title=title)
        p = outdir / f"frame_{k:05d}.svg"
        p.write_text(text)
        paths.append(p)
    return paths
