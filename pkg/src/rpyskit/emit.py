"""Deterministic renderers: CSV, JSON, Newick, SVG.

Every emitter is a pure function from values to text: fixed float formatting,
no timestamps, trailing newline, LF line endings. Identical inputs give
byte-identical output, which keeps artifacts diffable and testable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .clustering import Dendrogram, leaf_order
from .errors import BadRowOrderError, InputError
from .multirpys import KnowledgeClaim, RpysMatrix
from .spectroscopy import Spectrum, YearRange

# Blue -> yellow -> red over rank percentile; perceptually ordered, low to hot.
DEFAULT_RAMP = [
    (0.0, (33, 102, 172)),
    (0.5, (254, 224, 144)),
    (1.0, (178, 24, 43)),
]


@dataclass(slots=True)
class HeatmapStyle:
    """Cell geometry and color ramp for matrix heatmaps."""

    cell_w: int = 8
    cell_h: int = 14
    ramp: list[tuple[float, tuple[int, int, int]]] = field(default_factory=lambda: [s for s in DEFAULT_RAMP])
    show_labels: bool = True

    def __post_init__(self) -> None:
        if len(self.ramp) < 2 or self.ramp[0][0] != 0.0 or self.ramp[-1][0] != 1.0:
            raise InputError("color ramp needs at least two stops, anchored at 0 and 1")


def ramp_color(ramp: list[tuple[float, tuple[int, int, int]]], t: float) -> str:
    """Interpolate the ramp at t in [0,1]; returns a #rrggbb hex color."""
    t = min(1.0, max(0.0, t))
    for (p0, c0), (p1, c1) in zip(ramp, ramp[1:]):
        if t <= p1:
            f = 0.0 if p1 == p0 else (t - p0) / (p1 - p0)
            r, g, b = (round(a + (b_ - a) * f) for a, b_ in zip(c0, c1))
            return f"#{r:02x}{g:02x}{b:02x}"
    r, g, b = ramp[-1][1]
    return f"#{r:02x}{g:02x}{b:02x}"


def emit_heatmap(matrix: RpysMatrix, style: HeatmapStyle | None = None, row_order: list[str] | None = None) -> str:
    """Render a rank matrix as an SVG heatmap, one rect per cell.

    ``row_order``, when given, must be a permutation of the segment labels;
    this is how cluster-reordered heatmaps are produced.
    """
    style = style or HeatmapStyle()
    labels = matrix.segment_labels
    if row_order is None:
        order = list(range(len(labels)))
    else:
        if sorted(row_order) != sorted(labels):
            raise BadRowOrderError("row_order is not a permutation of the segment labels")
        index = {lab: i for i, lab in enumerate(labels)}
        order = [index[lab] for lab in row_order]

    n_rows = len(matrix.ranks)
    n_years = len(matrix.range)
    label_w = 170 if style.show_labels else 0
    axis_h = 18 if style.show_labels else 0
    pad = 4
    width = label_w + n_years * style.cell_w + pad
    height = pad + n_rows * style.cell_h + axis_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="10">'
    ]
    for disp, src in enumerate(order):
        y = pad + disp * style.cell_h
        row = matrix.ranks[src]
        for j in range(n_years):
            x = label_w + j * style.cell_w
            color = ramp_color(style.ramp, row[j] / n_years)
            parts.append(
                f'<rect x="{x}" y="{y}" width="{style.cell_w}" height="{style.cell_h}" fill="{color}"/>'
            )
        if style.show_labels:
            parts.append(
                f'<text x="{label_w - 6}" y="{y + style.cell_h // 2}" text-anchor="end" '
                f'dominant-baseline="middle">{escape(labels[src])}</text>'
            )
    if style.show_labels:
        y = pad + n_rows * style.cell_h + 12
        for j, year in enumerate(matrix.range.years()):
            if year % 10 == 0:
                x = label_w + j * style.cell_w + style.cell_w // 2
                parts.append(f'<text x="{x}" y="{y}" text-anchor="middle">{year}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_dendrogram_svg(dendrogram: Dendrogram, plot_w: int = 320, row_h: int = 18) -> str:
    """Right-angle dendrogram, leaves left, merge x proportional to height."""
    ordered = leaf_order(dendrogram)
    n = len(dendrogram.leaves)
    label_w = 170
    pad = 6
    max_h = max((m.height for m in dendrogram.merges), default=0.0)
    scale = plot_w / max_h if max_h > 0 else 0.0

    leaf_pos = {lab: i for i, lab in enumerate(ordered)}
    # node id -> (x, y); leaves are at height 0.
    coords: dict[int, tuple[float, float]] = {}
    for i, lab in enumerate(dendrogram.leaves):
        coords[i] = (float(label_w), pad + leaf_pos[lab] * row_h + row_h / 2)
    for t, merge in enumerate(dendrogram.merges):
        xl, yl = coords[merge.left]
        xr, yr = coords[merge.right]
        xm = label_w + merge.height * scale
        coords[n + t] = (xm, (yl + yr) / 2)

    width = label_w + plot_w + pad
    height = 2 * pad + n * row_h
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="10">'
    ]
    for lab in dendrogram.leaves:
        y = pad + leaf_pos[lab] * row_h + row_h / 2
        parts.append(
            f'<text x="{label_w - 6}" y="{y:.2f}" text-anchor="end" '
            f'dominant-baseline="middle">{escape(lab)}</text>'
        )
    for t, merge in enumerate(dendrogram.merges):
        xl, yl = coords[merge.left]
        xr, yr = coords[merge.right]
        xm, _ = coords[n + t]
        parts.append(
            f'<path d="M {xl:.2f} {yl:.2f} L {xm:.2f} {yl:.2f} '
            f'L {xm:.2f} {yr:.2f} L {xr:.2f} {yr:.2f}" '
            f'fill="none" stroke="black" stroke-width="1"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_spectrum_csv(spectrum: Spectrum) -> str:
    """Spectrum CSV: year,count,deviation,rank; deviations at 6 decimals."""
    lines = ["year,count,deviation,rank"]
    for year, c, d, r in zip(spectrum.range.years(), spectrum.counts, spectrum.deviations, spectrum.ranks):
        lines.append(f"{year},{c},{d:.6f},{r}")
    return "\n".join(lines) + "\n"


def emit_matrix_csv(matrix: RpysMatrix) -> str:
    """Matrix CSV: header ``segment,<years...>``, one row of integer ranks per segment."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["segment"] + [str(y) for y in matrix.range.years()])
    for label, row in zip(matrix.segment_labels, matrix.ranks):
        writer.writerow([label] + [str(v) for v in row])
    return buf.getvalue()


def read_matrix_csv(text: str) -> RpysMatrix:
    """Re-parse a matrix CSV; the inverse of :func:`emit_matrix_csv`."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("matrix CSV is empty") from None
    if not header or header[0] != "segment" or len(header) < 2:
        raise InputError("matrix CSV must start with a 'segment,<years...>' header")
    try:
        years = [int(h) for h in header[1:]]
    except ValueError as exc:
        raise InputError(f"matrix CSV has a non-integer year column: {exc}") from None
    if years != list(range(years[0], years[0] + len(years))):
        raise InputError("matrix CSV year columns must be consecutive and ascending")
    rng = YearRange(first=years[0], last=years[-1])

    labels = []
    rows = []
    n = len(years)
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != n + 1:
            raise InputError(f"matrix CSV line {lineno}: expected {n + 1} fields, got {len(row)}")
        labels.append(row[0])
        try:
            ranks = [int(v) for v in row[1:]]
        except ValueError:
            raise InputError(f"matrix CSV line {lineno}: non-integer rank") from None
        if sorted(ranks) != list(range(1, n + 1)):
            raise InputError(f"matrix CSV line {lineno}: row is not a permutation of 1..{n}")
        rows.append(ranks)
    if not rows:
        raise InputError("matrix CSV contains no segment rows")
    return RpysMatrix(segment_labels=labels, range=rng, ranks=rows)


_NEWICK_SAFE = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.|-")


def _newick_label(label: str) -> str:
    if label and set(label) <= _NEWICK_SAFE:
        return label
    return "'" + label.replace("'", "''") + "'"


def emit_newick(dendrogram: Dendrogram) -> str:
    """Newick tree with branch length = parent height - child height.

    A leaf's height is taken as the height of its first merge, so leaves carry
    branch length 0; the root carries none.
    """
    n = len(dendrogram.leaves)

    def render(node: int, parent_height: float) -> str:
        if node < n:
            return f"{_newick_label(dendrogram.leaves[node])}:{0.0:.6g}"
        merge = dendrogram.merges[node - n]
        left = render(merge.left, merge.height)
        right = render(merge.right, merge.height)
        return f"({left},{right}):{parent_height - merge.height:.6g}"

    if not dendrogram.merges:
        return _newick_label(dendrogram.leaves[0]) + ";\n"
    root = dendrogram.merges[-1]
    left = render(root.left, root.height)
    right = render(root.right, root.height)
    return f"({left},{right});\n"


def emit_dendrogram_json(dendrogram: Dendrogram) -> str:
    """Nested dendrogram JSON: {label} leaves, {left,right,height,size} internals."""
    n = len(dendrogram.leaves)

    def node(i: int):
        if i < n:
            return {"label": dendrogram.leaves[i]}
        merge = dendrogram.merges[i - n]
        return {
            "left": node(merge.left),
            "right": node(merge.right),
            "height": merge.height,
            "size": merge.size,
        }

    root = n + len(dendrogram.merges) - 1 if dendrogram.merges else 0
    return json.dumps(node(root), indent=2) + "\n"


def emit_claims_json(claims: list[KnowledgeClaim], segment_labels: list[str]) -> str:
    """Claims JSON: array of {ref_year, kind, high_bins (labels), span_years}."""
    payload = [
        {
            "ref_year": c.ref_year,
            "kind": c.kind,
            "high_bins": [segment_labels[i] for i in c.high_bins],
            "span_years": c.span_years,
        }
        for c in claims
    ]
    return json.dumps(payload, indent=2) + "\n"
