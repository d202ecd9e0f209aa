"""JSON result documents and static SVG rendering."""

import json
from importlib import resources

from .zonoset import polygon_area, to_polygon


def result_schema():
    return json.loads(resources.files("pedreach").joinpath("data/result.schema.json").read_text())


def zonotope_record(k, Z):
    poly = to_polygon(Z)
    return {
        "k": k,
        "center": Z.center.tolist(),
        "generators": Z.generators.T.tolist(),
        "polygon": poly.vertices.tolist(),
        "area": polygon_area(poly),
    }


def mode_record(outcome):
    rec = {
        "id": outcome.label.id,
        "name": outcome.label.name,
        "kept_chunks": outcome.kept_chunks,
        "status": outcome.status,
        "steps": [zonotope_record(k, R) for k, R in enumerate(outcome.sets[1:], start=1)],
        "inputs": [
            {"k": k, "mu": U.center.tolist(), "sigma": [float(U.generators[i, i]) for i in range(U.dim)]}
            for k, U in enumerate(outcome.inputs)
        ],
    }
    if outcome.message:
        rec["message"] = outcome.message
    return rec


def dumps(doc):
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


_PALETTE = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"]


def render_svg(outcome, start_set, size=600, margin=40):
    """Static SVG of the start set and every step polygon of one mode."""
    polys = [to_polygon(start_set).vertices] + [to_polygon(R).vertices for R in outcome.sets[1:]]
    xs = [p[0] for poly in polys for p in poly]
    ys = [p[1] for poly in polys for p in poly]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (size - 2 * margin) / span

    def pt(p):
        return f"{margin + (p[0] - x0) * scale:.3f},{size - margin - (p[1] - y0) * scale:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" y2="{size - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{size - margin}" stroke="black"/>',
        f'<text x="{margin}" y="{size - margin / 3:.1f}" font-size="12">x: {x0:.2f} .. {x0 + span:.2f} m</text>',
        f'<text x="4" y="{margin / 2:.1f}" font-size="12">y: {y0:.2f} .. {y0 + span:.2f} m'
        f" ({outcome.label.name})</text>",
    ]
    for k, poly in reversed(list(enumerate(polys))):
        color = "#999999" if k == 0 else _PALETTE[(k - 1) % len(_PALETTE)]
        points = " ".join(pt(p) for p in poly)
        out.append(
            f'<polygon points="{points}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1">'
            f"<title>k={k}</title></polygon>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
