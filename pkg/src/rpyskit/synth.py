"""Synthetic WoS-format corpora for tests and demos.

Generates tagged export files whose reference lists have a controllable
recency bias (citation ages decay geometrically, mimicking how articles cite
mostly recent literature) plus planted works: "classics" cited in every bin
at given weights, and single-bin "bursts" that should come out transient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import YearBin, parse_bins_spec
from .errors import InputError

_N_BG_AUTHORS = 40
_N_BG_SOURCES = 12


@dataclass(slots=True)
class PlantedClassic:
    """A work cited across bins; weights map bin label -> citation count."""

    first_author: str
    year: int
    source: str
    weights: dict[str, int]


@dataclass(slots=True)
class PlantedBurst:
    """A work cited heavily in exactly one bin."""

    first_author: str
    year: int
    source: str
    bin_label: str
    weight: int = 30


@dataclass(slots=True)
class SynthSpec:
    """Recipe for one synthetic corpus; fully determined by its seed."""

    bins: list[YearBin]
    records_per_bin: int | dict[str, int] = 40
    refs_per_record: int = 25
    recency_decay: float = 0.15
    venue: str = "SYNTH JOURNAL"
    doc_type: str = "Article"
    classics: list[PlantedClassic] = field(default_factory=list)
    bursts: list[PlantedBurst] = field(default_factory=list)
    seed: int = 0
    earliest_ref_year: int = 1900

    def bin_size(self, label: str) -> int:
        if isinstance(self.records_per_bin, dict):
            return int(self.records_per_bin.get(label, 0))
        return int(self.records_per_bin)


def _ref_string(author: str, year: int, source: str, volume: int | None = None, page: int | None = None) -> str:
    parts = [author, str(year), source]
    if volume is not None:
        parts.append(f"V{volume}")
    if page is not None:
        parts.append(f"P{page}")
    return ", ".join(parts)


def generate_wos(spec: SynthSpec) -> str:
    """Produce a parseable WoS tagged file; byte-identical for a given spec."""
    if not 0.0 < spec.recency_decay <= 1.0:
        raise InputError("recency_decay must be in (0, 1]")
    rng = np.random.default_rng(spec.seed)
    venue_slug = spec.venue.replace(" ", "_")

    chunks = ["FN Synthetic corpus generator\nVR 1.0\n"]
    for bin_idx, b in enumerate(spec.bins):
        n_recs = spec.bin_size(b.label)
        if n_recs <= 0:
            continue
        n_refs = spec.refs_per_record
        pub_years = rng.integers(b.start, b.end + 1, size=n_recs)
        ages = rng.geometric(spec.recency_decay, size=(n_recs, n_refs)) - 1
        authors = rng.integers(0, _N_BG_AUTHORS, size=(n_recs, n_refs))
        sources = rng.integers(0, _N_BG_SOURCES, size=(n_recs, n_refs))
        volumes = rng.integers(1, 100, size=(n_recs, n_refs))
        pages = rng.integers(1, 1000, size=(n_recs, n_refs))

        refs: list[list[str]] = []
        for i in range(n_recs):
            py = int(pub_years[i])
            rec_refs = []
            for j in range(n_refs):
                ry = max(spec.earliest_ref_year, py - int(ages[i, j]))
                rec_refs.append(
                    _ref_string(
                        f"AUTHOR{authors[i, j]:02d} X",
                        ry,
                        f"J SYNTH {sources[i, j]}",
                        int(volumes[i, j]),
                        int(pages[i, j]),
                    )
                )
            refs.append(rec_refs)

        for classic in spec.classics:
            weight = int(classic.weights.get(b.label, 0))
            line = _ref_string(classic.first_author, classic.year, classic.source)
            for t in range(weight):
                refs[t % n_recs].append(line)
        for burst in spec.bursts:
            if burst.bin_label != b.label:
                continue
            line = _ref_string(burst.first_author, burst.year, burst.source)
            for t in range(burst.weight):
                refs[t % n_recs].append(line)

        for i in range(n_recs):
            lines = [
                "PT J",
                f"AU SYNTH, A{i % 7}",
                f"TI SYNTHETIC RECORD {bin_idx}-{i}",
                f"SO {spec.venue}",
                f"DT {spec.doc_type}",
                f"PY {int(pub_years[i])}",
            ]
            if refs[i]:
                lines.append("CR " + refs[i][0])
                lines.extend("   " + r for r in refs[i][1:])
            lines.append(f"NR {len(refs[i])}")
            lines.append(f"UT SYN:{venue_slug}:{bin_idx:02d}:{i:05d}")
            lines.append("ER")
            chunks.append("\n".join(lines) + "\n\n")

    chunks.append("EF\n")
    return "".join(chunks)


def spec_from_json(payload: dict) -> SynthSpec:
    """Build a SynthSpec from its JSON form (see docs/formats.md)."""
    raw_bins = payload.get("bins")
    if not raw_bins:
        raise InputError("synth spec needs a non-empty 'bins' list")
    bins = []
    for rb in raw_bins:
        if isinstance(rb, str):
            bins.extend(parse_bins_spec(rb))
        else:
            bins.append(YearBin(start=int(rb["start"]), end=int(rb["end"]), label=rb.get("label") or f"{rb['start']}-{rb['end']}"))

    def work_fields(obj: dict) -> tuple[str, int, str]:
        return obj["first_author"], int(obj["year"]), obj.get("source", "SYNTH CLASSICS")

    classics = []
    for obj in payload.get("classics", []):
        author, year, source = work_fields(obj)
        weights = obj.get("weights", 0)
        if isinstance(weights, int):
            weights = {b.label: weights for b in bins}
        classics.append(PlantedClassic(author, year, source, {k: int(v) for k, v in weights.items()}))

    bursts = []
    for obj in payload.get("bursts", []):
        author, year, source = work_fields(obj)
        bursts.append(PlantedBurst(author, year, source, bin_label=obj["bin"], weight=int(obj.get("weight", 30))))

    return SynthSpec(
        bins=bins,
        records_per_bin=payload.get("records_per_bin", 40),
        refs_per_record=int(payload.get("refs_per_record", 25)),
        recency_decay=float(payload.get("recency_decay", 0.15)),
        venue=payload.get("venue", "SYNTH JOURNAL"),
        doc_type=payload.get("doc_type", "Article"),
        classics=classics,
        bursts=bursts,
        seed=int(payload.get("seed", 0)),
        earliest_ref_year=int(payload.get("earliest_ref_year", 1900)),
    )
