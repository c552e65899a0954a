"""Exact text renderings: canonical JSON, CSV and SVG.

No floats are ever written.  Rationals appear as "p/q" strings; SVG pixel
coordinates are rounded half-to-even from exact values at render time.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .cone import SliceArrangement, clip_line, format_vector, coordinate_names
from .homlattice import format_class

KIND_STROKE = {"interior": "red", "extremal": "black", "reduction": "blue"}


def rat(x) -> str:
    return str(Fraction(x))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def path_to_json(path) -> dict:
    return {
        "start": format_vector(path.start),
        "steps": [{"class": format_class(s.z), "t": rat(s.t)} for s in path.steps],
        "end": format_vector(path.normalized_end),
    }


def wall_line_json(line) -> dict:
    return {
        "class": format_class(line.wall_class),
        "equation": {"coeffs": [rat(c) for c in line.coeffs], "const": rat(line.const)},
        "kind": line.kind,
    }


def slice_to_json(arr: SliceArrangement) -> dict:
    return {
        "g": arr.desc.g,
        "n": arr.desc.n,
        "free": list(arr.free),
        "fixed": {k: rat(v) for k, v in arr.fixed.items()},
        "window": {k: [rat(lo), rat(hi)] for k, (lo, hi) in arr.window.items()},
        "walls": [wall_line_json(line) for line in arr.lines],
    }


def slice_to_csv(arr: SliceArrangement) -> str:
    """class,kind,coeff_mu,coeff_c1..cn,const for the full (unsliced) equation."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = coordinate_names(arr.desc.n)
    w.writerow(["class", "kind"] + [f"coeff_{nm}" for nm in names] + ["const"])
    for line in arr.lines:
        w.writerow([format_class(line.wall_class), line.kind] + [rat(x) for x in line.full])
    return buf.getvalue()


def _px(value: Fraction) -> int:
    return round(value)  # Fraction.__round__ rounds half to even


def slice_to_svg(arr: SliceArrangement, scale: int = 100, margin: int = 20) -> str:
    """One <path> per wall line, in the window's coordinates (x right, y up)."""
    (xname, yname) = arr.free
    (xlo, xhi), (ylo, yhi) = arr.window[xname], arr.window[yname]
    width = _px((xhi - xlo) * scale) + 2 * margin
    height = _px((yhi - ylo) * scale) + 2 * margin

    def to_px(x, y):
        return _px((x - xlo) * scale) + margin, _px((yhi - y) * scale) + margin

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>walls in the ({xname}, {yname}) slice</title>',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="gray"/>',
    ]
    for line in arr.lines:
        seg = clip_line(line.coeffs, line.const, ((xlo, xhi), (ylo, yhi)))
        (x0, y0), (x1, y1) = (to_px(*p) for p in seg)
        out.append(f'<path class="{line.kind}" stroke="{KIND_STROKE[line.kind]}" fill="none" '
                   f'd="M {x0} {y0} L {x1} {y1}"><title>{format_class(line.wall_class)}</title></path>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def table(rows, header=None) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if header:
        rows.insert(0, list(header))
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows if i < len(r)) for i in range(max(map(len, rows)))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)
