"""Command-line interface.

Commands wire together the full pipeline: parse -> corpus -> spectra ->
multi-RPYS -> clustering -> attribution -> rendering, plus a synthetic-corpus
generator for demos and tests. Data goes to files (or stdout with ``--out -``);
diagnostics go to stderr.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .attribution import band_table, render_band_table_csv
from .clustering import cut, leaf_order, ward_cluster
from .corpus import (
    Corpus,
    Segment,
    YearBin,
    build_corpus,
    parse_bins_spec,
    read_alias_csv,
    records_from_json,
    records_to_json,
    segment_by_bins,
    segment_by_venue,
)
from .emit import (
    HeatmapStyle,
    emit_claims_json,
    emit_dendrogram_json,
    emit_dendrogram_svg,
    emit_heatmap,
    emit_matrix_csv,
    emit_newick,
    emit_spectrum_csv,
    read_matrix_csv,
)
from .errors import InputError, InvariantViolation, RpysError
from .ingest import Record, parse_csv, parse_wos
from .multirpys import RpysMatrix, StickyConfig, classify_claims, multi_rpys, random_matrix
from .spectroscopy import YearRange, rpys
from .synth import SynthSpec, generate_wos, spec_from_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    """Bad flag combination caught after argparse."""


@dataclass(slots=True)
class RunConfig:
    """Resolved analysis options for a segmented run."""

    years: YearRange
    mode: str
    bins: list[YearBin] | None
    by_venue: bool
    doc_type: str | None
    sticky: StickyConfig
    jobs: int

    def __post_init__(self) -> None:
        if (self.bins is not None) == self.by_venue:
            raise UsageError("choose exactly one segmentation: --bins or --segment-by venue")


def _read_text(path: str) -> str:
    # Lossy decoding: WoS exports are occasionally Latin-1 contaminated.
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_bytes().decode("utf-8", errors="replace")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        if path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _detect_format(path: str, fmt: str) -> str:
    if fmt != "auto":
        return fmt
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix == ".json":
        return "json"
    return "wos"


def load_records(paths: list[str], fmt: str = "auto") -> list[Record]:
    """Parse every input file and merge the records in file order."""
    records: list[Record] = []
    for path in paths:
        text = _read_text(path)
        kind = _detect_format(path, fmt)
        if kind == "wos":
            records.extend(parse_wos(text))
        elif kind == "csv":
            records.extend(parse_csv(text))
        elif kind == "json":
            records.extend(records_from_json(text))
        else:
            raise UsageError(f"unknown input format {kind!r}")
    return records


def _load_corpus(args) -> Corpus:
    records = load_records(args.inputs, args.format)
    alias = read_alias_csv(_read_text(args.alias)) if args.alias else None
    return build_corpus(records, doc_type_filter=args.doc_type, alias_map=alias)


def _segments_and_intervals(corpus: Corpus, config: RunConfig):
    if config.bins is not None:
        segments = segment_by_bins(corpus, config.bins)
        by_label = {b.label: b for b in config.bins}
        return segments, [by_label[s.label] for s in segments]
    return segment_by_venue(corpus), None


# Config-file support: flags left at their argparse default (None) are filled
# from the --config JSON, then from these fallbacks.
_FALLBACKS = {
    "format": "auto",
    "deviation": "absolute",
    "first": 1900,
    "last": 2015,
    "grouping": "author-year",
    "top_k": 5,
    "jobs": 1,
    "seed": 0,
    "segments": 40,
    "high_pct": 90.0,
    "min_bins": 3,
    "min_span": 10,
    "recency_window": 7,
}

_CONFIG_KEYS = {"in": "inputs", "from": "first", "to": "last"}


def _resolve(args) -> None:
    if getattr(args, "config", None):
        try:
            payload = json.loads(_read_text(args.config))
        except json.JSONDecodeError as exc:
            raise InputError(f"bad config {args.config}: {exc}") from exc
        if not isinstance(payload, dict):
            raise InputError(f"bad config {args.config}: expected a JSON object")
        for key, value in payload.items():
            dest = _CONFIG_KEYS.get(key, key.replace("-", "_"))
            if getattr(args, dest, "\0missing") != "\0missing" and getattr(args, dest) is None:
                setattr(args, dest, value)
    for dest, value in _FALLBACKS.items():
        if getattr(args, dest, "\0missing") is None:
            setattr(args, dest, value)


def _sticky_config(args) -> StickyConfig:
    return StickyConfig(
        high_threshold_pct=float(args.high_pct),
        min_bins=int(args.min_bins),
        min_span=int(args.min_span),
        recency_window=int(args.recency_window),
    )


def cmd_parse(args) -> None:
    _resolve(args)
    records = load_records(args.inputs, args.format)
    _write_text(args.out, records_to_json(records))
    logger.info("parsed %d record(s)", len(records))


def cmd_spectrum(args) -> None:
    _resolve(args)
    years = YearRange(int(args.first), int(args.last))
    corpus = _load_corpus(args)
    whole = Segment(label="all", records=corpus.records)
    spectrum = rpys(whole, years, args.deviation)
    _write_text(args.out, emit_spectrum_csv(spectrum))
    if args.heatmap:
        matrix = RpysMatrix(segment_labels=["all"], range=years, ranks=[spectrum.ranks])
        _write_text(args.heatmap, emit_heatmap(matrix))


def cmd_multi(args) -> None:
    _resolve(args)
    years = YearRange(int(args.first), int(args.last))
    sticky = _sticky_config(args)

    if args.random:
        if args.claims:
            raise UsageError("--claims needs a time-binned analysis, not --random")
        matrix = random_matrix(int(args.segments), years, int(args.seed))
    else:
        if not args.inputs:
            raise UsageError("provide --in files or --random")
        bins = parse_bins_spec(args.bins) if args.bins else None
        config = RunConfig(
            years=years,
            mode=args.deviation,
            bins=bins,
            by_venue=args.segment_by == "venue",
            doc_type=args.doc_type,
            sticky=sticky,
            jobs=int(args.jobs),
        )
        corpus = _load_corpus(args)
        segments, intervals = _segments_and_intervals(corpus, config)
        matrix = multi_rpys(segments, years, config.mode, intervals, jobs=config.jobs)
        if args.claims:
            if intervals is None:
                raise UsageError("--claims needs --bins segmentation")
            claims = classify_claims(matrix, sticky)
            _write_text(args.claims, emit_claims_json(claims, matrix.segment_labels))

    _write_text(args.out, emit_matrix_csv(matrix))
    if args.heatmap:
        _write_text(args.heatmap, emit_heatmap(matrix))


def cmd_random_matrix(args) -> None:
    _resolve(args)
    years = YearRange(int(args.first), int(args.last))
    matrix = random_matrix(int(args.segments), years, int(args.seed))
    _write_text(args.out, emit_matrix_csv(matrix))


def cmd_cluster(args) -> None:
    _resolve(args)
    matrix = read_matrix_csv(_read_text(args.matrix))
    dendrogram = ward_cluster(matrix)
    if args.out_json:
        _write_text(args.out_json, emit_dendrogram_json(dendrogram))
    if args.out_newick:
        _write_text(args.out_newick, emit_newick(dendrogram))
    if args.out_svg:
        _write_text(args.out_svg, emit_dendrogram_svg(dendrogram))
    if args.cut is not None:
        labels = cut(dendrogram, int(args.cut))
        lines = ["segment,cluster"]
        lines += [f"{_csv_field(leaf)},{lab}" for leaf, lab in zip(dendrogram.leaves, labels)]
        _write_text(args.out_labels or "-", "\n".join(lines) + "\n")
    if args.heatmap:
        _write_text(args.heatmap, emit_heatmap(matrix, row_order=leaf_order(dendrogram)))


def _csv_field(value: str) -> str:
    if any(c in value for c in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def cmd_attribute(args) -> None:
    _resolve(args)
    years = YearRange(int(args.first), int(args.last))
    try:
        band_years = [int(y.strip()) for y in args.years.split(",") if y.strip()]
    except ValueError:
        raise UsageError(f"--years must be a comma-separated year list, got {args.years!r}") from None
    if not band_years:
        raise UsageError("--years is empty")
    outside = [y for y in band_years if not years.first <= y <= years.last]
    if outside:
        raise UsageError(f"band year(s) outside {years.first}-{years.last}: {outside}")

    bins = parse_bins_spec(args.bins) if args.bins else None
    config = RunConfig(
        years=years,
        mode=args.deviation,
        bins=bins,
        by_venue=args.segment_by == "venue",
        doc_type=args.doc_type,
        sticky=_sticky_config(args),
        jobs=int(args.jobs),
    )
    corpus = _load_corpus(args)
    segments, _ = _segments_and_intervals(corpus, config)
    table = band_table(segments, band_years, grouping=args.grouping, top_k=int(args.top_k))
    _write_text(args.out, render_band_table_csv(table))


def cmd_synth(args) -> None:
    if args.spec:
        try:
            payload = json.loads(_read_text(args.spec))
        except json.JSONDecodeError as exc:
            raise InputError(f"bad synth spec {args.spec}: {exc}") from exc
        spec = spec_from_json(payload)
        if args.seed is not None:
            spec.seed = int(args.seed)
    else:
        if not args.bins:
            raise UsageError("synth needs --spec or --bins")
        spec = SynthSpec(
            bins=parse_bins_spec(args.bins),
            records_per_bin=int(args.records_per_bin),
            refs_per_record=int(args.refs_per_record),
            recency_decay=float(args.decay),
            venue=args.venue,
            seed=int(args.seed if args.seed is not None else 0),
        )
    _write_text(args.out, generate_wos(spec))


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="inputs", action="append", metavar="FILE",
                   help="input file; repeatable, merged in order")
    p.add_argument("--format", choices=["auto", "wos", "csv", "json"], default=None,
                   help="input format (default: by file extension)")
    p.add_argument("--doc-type", default=None, help="keep only records of this document type")
    p.add_argument("--alias", default=None, metavar="CSV", help="venue alias map (from,to)")
    p.add_argument("--config", default=None, metavar="JSON",
                   help="config file; explicit flags override its values")


def _add_range_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--from", dest="first", type=int, default=None, help="first reference year (default 1900)")
    p.add_argument("--to", dest="last", type=int, default=None, help="last reference year (default 2015)")


def _add_sticky_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--high-pct", type=float, default=None, help="rank percentile counted as highly referenced (default 90)")
    p.add_argument("--min-bins", type=int, default=None, help="bins required for a sticky claim (default 3)")
    p.add_argument("--min-span", type=int, default=None, help="citing-year span required for a sticky claim (default 10)")
    p.add_argument("--recency-window", type=int, default=None, help="years before bin start treated as self-referential (default 7)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpyskit",
        description="Reference publication year spectroscopy, multi-RPYS and intellectual-history clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse export files into a corpus cache JSON")
    _add_input_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("spectrum", help="single spectrum over the whole corpus")
    _add_input_flags(p)
    _add_range_flags(p)
    p.add_argument("--deviation", choices=["absolute", "signed"], default=None)
    p.add_argument("--out", required=True, help="spectrum CSV path, or -")
    p.add_argument("--heatmap", default=None, help="optional one-row heatmap SVG")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("multi", help="multi-RPYS rank matrix over segments")
    _add_input_flags(p)
    _add_range_flags(p)
    p.add_argument("--deviation", choices=["absolute", "signed"], default=None)
    p.add_argument("--bins", default=None, help="time bins, e.g. 1978-1985,1986-1990")
    p.add_argument("--segment-by", choices=["venue"], default=None)
    p.add_argument("--random", action="store_true", help="emit a random baseline matrix instead")
    p.add_argument("--segments", type=int, default=None, help="row count for --random (default 40)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--jobs", type=int, default=None, help="parallel spectra (default 1)")
    _add_sticky_flags(p)
    p.add_argument("--out", required=True, help="matrix CSV path, or -")
    p.add_argument("--heatmap", default=None, help="heatmap SVG path")
    p.add_argument("--claims", default=None, help="claims JSON path (needs --bins)")
    p.set_defaults(func=cmd_multi)

    p = sub.add_parser("random-matrix", help="seeded random baseline matrix")
    _add_range_flags(p)
    p.add_argument("--segments", type=int, default=None, help="row count (default 40)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_random_matrix, config=None)

    p = sub.add_parser("cluster", help="Ward-cluster a rank matrix")
    p.add_argument("--matrix", required=True, help="matrix CSV from `multi`")
    p.add_argument("--out-json", default=None, help="dendrogram JSON path")
    p.add_argument("--out-newick", default=None, help="Newick tree path")
    p.add_argument("--out-svg", default=None, help="dendrogram SVG path")
    p.add_argument("--cut", type=int, default=None, help="flat cluster count")
    p.add_argument("--out-labels", default=None, help="cut labels CSV path (default stdout)")
    p.add_argument("--heatmap", default=None, help="leaf-reordered heatmap SVG path")
    p.set_defaults(func=cmd_cluster, config=None)

    p = sub.add_parser("attribute", help="band table: top cited works per (year, segment)")
    _add_input_flags(p)
    _add_range_flags(p)
    p.add_argument("--deviation", choices=["absolute", "signed"], default=None)
    p.add_argument("--bins", default=None, help="time bins, e.g. 1978-1985,1986-1990")
    p.add_argument("--segment-by", choices=["venue"], default=None)
    p.add_argument("--years", required=True, help="band years, e.g. 1926,1934,1963")
    p.add_argument("--grouping", choices=["author-year", "author-year-source"], default=None)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    _add_sticky_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_attribute)

    p = sub.add_parser("synth", help="generate a synthetic WoS-format corpus")
    p.add_argument("--spec", default=None, help="SynthSpec JSON file")
    p.add_argument("--bins", default=None, help="time bins when no --spec is given")
    p.add_argument("--records-per-bin", type=int, default=40)
    p.add_argument("--refs-per-record", type=int, default=25)
    p.add_argument("--decay", type=float, default=0.15, help="geometric decay of citation age")
    p.add_argument("--venue", default="SYNTH JOURNAL")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems and 0 for --help.
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        args.func(args)
        return EXIT_OK
    except UsageError as exc:
        print(f"rpyskit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"rpyskit: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (RpysError, OSError) as exc:
        print(f"rpyskit: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
