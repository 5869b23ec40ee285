#!/usr/bin/env python3
"""Regenerates the benchmark worlds in worlds/."""

import argparse
import json
from pathlib import Path


def diagonal_passage(size=128, margin=16, half_width=5.0, bend=(64.0, 70.0), open_offset=10.0, border=1):
    """Obstacle cluster over the upper-left of the map, cut by a bent corridor running along
    the diagonal. Everything more than open_offset below the diagonal stays free, leaving an
    open region towards the lower-right corner. A solid frame surrounds the map."""
    lo, hi = margin, size - margin
    knots = [(lo, lo), bend, (hi, hi)]

    def center(x):
        for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return None

    rows = []
    for r in range(size):
        y = size - 1 - r + 0.5
        row = []
        for c in range(size):
            x = c + 0.5
            blocked = lo <= x <= hi and lo <= y <= hi and y - x >= -open_offset
            framed = min(c, r, size - 1 - c, size - 1 - r) < border
            if blocked:
                cy = center(x)
                if cy is not None and abs(y - cy) <= half_width:
                    blocked = False
            row.append(0 if blocked or framed else 255)
        rows.append(row)
    lines = ["P2", "# diagonal narrow passage", f"{size} {size}", "255"]
    lines += [" ".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def wall_gap(size=100, wall=(30, 70), gap_center=55, gap_width=8, border=1):
    """Thick wall across a framed map with one offset tunnel."""
    rows = []
    g0 = gap_center - gap_width / 2
    g1 = gap_center + gap_width / 2
    for r in range(size):
        y = size - 1 - r + 0.5
        row = ""
        for c in range(size):
            x = c + 0.5
            in_wall = wall[0] <= x <= wall[1]
            framed = min(c, r, size - 1 - c, size - 1 - r) < border
            row += "#" if framed or (in_wall and not (g0 <= y <= g1)) else "."
        rows.append(row)
    return "\n".join(rows) + "\n"


def wall_hole(dim, extent=100.0, wall=(31.25, 68.75), hole_axis1=(50.0, 75.0), hole_half_width=18.75):
    """Slab across axis 0 minus a box-shaped hole, as 2(d-1) boxes. The hole spans
    hole_axis1 on axis 1 and extent/2 +- hole_half_width on the remaining axes."""
    hole = [(extent / 2 - hole_half_width, extent / 2 + hole_half_width)] * dim
    hole[1] = hole_axis1
    boxes = []
    for axis in range(1, dim):
        for side in (0, 1):
            lower = [0.0] * dim
            upper = [extent] * dim
            lower[0], upper[0] = wall
            if side == 0:
                upper[axis] = hole[axis][0]
            else:
                lower[axis] = hole[axis][1]
            boxes.append({"type": "box", "lower": lower, "upper": upper})
    return {
        "dimension": dim,
        "bounds": {"lower": [0.0] * dim, "upper": [extent] * dim},
        "obstacles": boxes,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path(__file__).resolve().parent.parent / "worlds", type=Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "diagonal_passage.pgm").write_text(diagonal_passage())
    (args.out / "wall_gap.txt").write_text(wall_gap())
    for dim in (4, 6):
        doc = wall_hole(dim)
        (args.out / f"wall_hole_{dim}d.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
