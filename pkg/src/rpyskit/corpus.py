"""Corpus assembly and segmentation.

A Corpus is an immutable, filtered set of Records with venue names already
rewritten through the alias map, so every downstream module sees canonical
venues only. Segmentation produces labeled sub-corpora either by citing-year
bins or by venue.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace

from .errors import EmptyCorpusError, MissingColumnError, OverlappingBinsError
from .ingest import CitedRef, Record, normalize

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class Corpus:
    """Filtered record set plus the venue alias map used to build it."""

    records: list[Record]
    alias_map: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class YearBin:
    """Inclusive citing-year interval with a display label."""

    start: int
    end: int
    label: str

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise OverlappingBinsError(f"bin {self.label!r}: start {self.start} > end {self.end}")

    def contains(self, year: int) -> bool:
        return self.start <= year <= self.end


@dataclass(slots=True)
class Segment:
    """A labeled sub-corpus; always non-empty (empty segments are dropped)."""

    label: str
    records: list[Record]


def parse_bins_spec(spec: str) -> list[YearBin]:
    """Parse a bin list like ``1978-1985,1986-1990`` into YearBins."""
    bins = []
    for part in spec.split(","):
        part = part.strip()
        lo, sep, hi = part.partition("-")
        if not sep or not lo.strip().isdigit() or not hi.strip().isdigit():
            raise OverlappingBinsError(f"bad bin spec {part!r}; expected START-END")
        bins.append(YearBin(start=int(lo), end=int(hi), label=part))
    return bins


def validate_bins(bins: list[YearBin]) -> None:
    if not bins:
        raise OverlappingBinsError("bin set is empty")
    for prev, cur in zip(bins, bins[1:]):
        if cur.start <= prev.end:
            raise OverlappingBinsError(
                f"bins {prev.label!r} and {cur.label!r} overlap or are out of order"
            )


def build_corpus(
    records: list[Record],
    doc_type_filter: str | None = None,
    alias_map: dict[str, str] | None = None,
) -> Corpus:
    """Filter records by document type and canonicalize venue names.

    The doc-type comparison is case-insensitive. Records with an empty
    doc_type are excluded whenever a filter is active (their count is logged,
    since exports sometimes lack DT).
    """
    alias_map = dict(alias_map or {})
    wanted = doc_type_filter.strip().lower() if doc_type_filter else None

    kept: list[Record] = []
    n_missing_dt = 0
    for rec in records:
        if wanted is not None:
            if not rec.doc_type:
                n_missing_dt += 1
                continue
            if rec.doc_type.strip().lower() != wanted:
                continue
        canon = alias_map.get(rec.venue, rec.venue)
        kept.append(rec if canon == rec.venue else replace(rec, venue=canon))

    if n_missing_dt:
        logger.info("doc-type filter: %d record(s) with no DT excluded", n_missing_dt)
    if not kept:
        raise EmptyCorpusError("no records survived corpus filters")
    return Corpus(records=kept, alias_map=alias_map)


def segment_by_bins(corpus: Corpus, bins: list[YearBin]) -> list[Segment]:
    """Partition records into citing-year bins; out-of-range records are dropped.

    Segment order follows bin order; bins left empty are dropped with a
    warning so every Segment satisfies the non-empty invariant.
    """
    validate_bins(bins)
    buckets: dict[str, list[Record]] = {b.label: [] for b in bins}
    n_outside = 0
    for rec in corpus.records:
        for b in bins:
            if b.contains(rec.pub_year):
                buckets[b.label].append(rec)
                break
        else:
            n_outside += 1
    if n_outside:
        logger.info("segmentation: %d record(s) outside all bins excluded", n_outside)

    segments = []
    for b in bins:
        if buckets[b.label]:
            segments.append(Segment(label=b.label, records=buckets[b.label]))
        else:
            logger.warning("bin %r matched no records; segment dropped", b.label)
    return segments


def segment_by_venue(corpus: Corpus) -> list[Segment]:
    """One segment per canonical venue, sorted lexicographically by label."""
    buckets: dict[str, list[Record]] = {}
    for rec in corpus.records:
        buckets.setdefault(rec.venue, []).append(rec)
    return [Segment(label=v, records=buckets[v]) for v in sorted(buckets)]


def read_alias_csv(text: str) -> dict[str, str]:
    """Read a two-column ``from,to`` alias map; keys are normalized like venues."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"from", "to"} <= set(reader.fieldnames):
        raise MissingColumnError("alias map needs header columns: from,to")
    return {
        normalize(row["from"]): (row["to"] or "").strip()
        for row in reader
        if (row.get("from") or "").strip()
    }


def records_to_json(records: list[Record]) -> str:
    """Serialize records to the corpus cache format (top-level "records" array)."""
    payload = {
        "records": [
            {
                "id": r.id,
                "pub_year": r.pub_year,
                "venue": r.venue,
                "doc_type": r.doc_type,
                "cited_refs": [
                    {
                        "raw": c.raw,
                        "year": c.year,
                        "first_author": c.first_author,
                        "source": c.source,
                        "volume": c.volume,
                        "page": c.page,
                    }
                    for c in r.cited_refs
                ],
            }
            for r in records
        ]
    }
    return json.dumps(payload, indent=2) + "\n"


def records_from_json(text: str) -> list[Record]:
    """Load records from a corpus cache file written by :func:`records_to_json`."""
    payload = json.loads(text)
    if not isinstance(payload, dict) or "records" not in payload:
        raise MissingColumnError('corpus cache needs a top-level "records" array')
    records = []
    for obj in payload["records"]:
        records.append(
            Record(
                id=obj["id"],
                pub_year=int(obj["pub_year"]),
                venue=obj.get("venue", ""),
                doc_type=obj.get("doc_type", ""),
                cited_refs=[
                    CitedRef(
                        raw=c["raw"],
                        year=c.get("year"),
                        first_author=c.get("first_author"),
                        source=c.get("source"),
                        volume=c.get("volume"),
                        page=c.get("page"),
                    )
                    for c in obj.get("cited_refs", [])
                ],
            )
        )
    return records
