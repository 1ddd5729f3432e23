"""Per-work attribution of reference-year peaks.

Answers "who is this band?": for a citing segment and a reference year, rank
the cited works by their share of that year's references, and assemble the
cross-segment band tables used to confirm that a persistent band is driven by
the same work throughout.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass

from .corpus import Segment
from .errors import InputError

GROUPINGS = ("author-year", "author-year-source")

# Refs with a year but no parseable author pool here so shares still sum to 1.
UNPARSED_AUTHOR = "UNPARSED"


@dataclass(frozen=True)
class WorkKey:
    """A cited work identified by its normalized parsed fields."""

    first_author: str
    year: int
    source: str = ""


@dataclass(slots=True)
class AttributionRow:
    """One work's count and share of a (segment, reference year) cell."""

    key: WorkKey
    count: int
    share: float


def attribute_year(segment: Segment, ref_year: int, grouping: str = "author-year") -> list[AttributionRow]:
    """Rank cited works by share of the segment's references to ``ref_year``.

    Shares divide by the number of refs with that year in the segment, so they
    sum to 1. Rows sort by count descending, then key ascending. An empty
    result just means the segment never cites that year.
    """
    if grouping not in GROUPINGS:
        raise InputError(f"unknown grouping {grouping!r}; expected one of {GROUPINGS}")
    with_source = grouping == "author-year-source"

    counts: Counter[WorkKey] = Counter()
    total = 0
    for rec in segment.records:
        for ref in rec.cited_refs:
            if ref.year != ref_year:
                continue
            total += 1
            counts[
                WorkKey(
                    first_author=ref.first_author or UNPARSED_AUTHOR,
                    year=ref_year,
                    source=(ref.source or "") if with_source else "",
                )
            ] += 1
    if not total:
        return []
    rows = [AttributionRow(key=key, count=c, share=c / total) for key, c in counts.items()]
    rows.sort(key=lambda r: (-r.count, r.key.first_author, r.key.year, r.key.source))
    return rows


@dataclass(slots=True)
class BandTable:
    """Top attributions for each (band year, segment) cell."""

    band_years: list[int]
    segment_labels: list[str]
    cells: list[list[list[AttributionRow]]]  # [year][segment] -> top_k rows


def band_table(
    segments: list[Segment],
    band_years: list[int],
    grouping: str = "author-year",
    top_k: int = 5,
) -> BandTable:
    """Attribution table over band years x segments; cells may be empty."""
    if top_k < 1:
        raise InputError("top_k must be >= 1")
    cells = [
        [attribute_year(seg, year, grouping)[:top_k] for seg in segments]
        for year in band_years
    ]
    return BandTable(
        band_years=list(band_years),
        segment_labels=[s.label for s in segments],
        cells=cells,
    )


def percent_round_half_up(count: int, total: int) -> int:
    """Integer percentage with exact half-up rounding (17/20 -> 85)."""
    if total <= 0:
        raise InputError("total must be positive")
    return (200 * count + total) // (2 * total)


def render_row(row: AttributionRow) -> str:
    """Render one attribution as ``Name: NN%``, e.g. ``Lotka: 85%``.

    The display name is the first token of the normalized author string,
    title-cased. Percentages round half-up to integers for display; the
    AttributionRow keeps full precision.
    """
    surname = row.key.first_author.split()[0].capitalize() if row.key.first_author else "?"
    # share = count/total, so the denominator is recoverable exactly.
    total = round(row.count / row.share)
    return f"{surname}: {percent_round_half_up(row.count, total)}%"


def render_band_table_csv(table: BandTable) -> str:
    """Band table CSV: rows = band years, columns = segments, cells = joined entries."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["year"] + table.segment_labels)
    for year, row_cells in zip(table.band_years, table.cells):
        writer.writerow([year] + ["; ".join(render_row(r) for r in cell) for cell in row_cells])
    return buf.getvalue()
