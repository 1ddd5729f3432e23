"""Parsers for bibliographic export files.

Two input shapes are supported: the Web of Science plain-text tagged format
(two-letter field codes, continuation lines indented by exactly three spaces,
records closed by ``ER``) and a flat CSV fallback with one row per
(citing record, cited reference) pair. Both produce :class:`Record` lists;
individual reference strings are parsed best-effort into :class:`CitedRef`.

Malformed blocks are logged and skipped; parsing never stops early except on
structural problems (tab-indented continuations, empty files).
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
from dataclasses import dataclass, field

from .errors import EmptyFileError, InputError, MissingColumnError

logger = logging.getLogger(__name__)

# Publication-year sanity bounds. Cited-reference years are looser than
# citing-record years because references reach further back.
REF_YEAR_MIN, REF_YEAR_MAX = 1000, 2100
PUB_YEAR_MIN, PUB_YEAR_MAX = 1500, 2100

_PUNCT = str.maketrans("", "", ".,;:'\"")


def normalize(text: str) -> str:
    """Uppercase, drop ``.,;:'"`` and collapse runs of whitespace.

    This is the minimum cleanup needed to group cited works by author/source
    string; it is idempotent, so normalizing twice is a no-op.
    """
    return " ".join(text.upper().translate(_PUNCT).split())


@dataclass(slots=True)
class RawField:
    """One tagged field from a WoS export: the tag plus its value lines."""

    tag: str
    lines: list[str]


@dataclass(slots=True)
class CitedRef:
    """One cited reference: the verbatim string plus best-effort parsed fields."""

    raw: str
    year: int | None = None
    first_author: str | None = None
    source: str | None = None
    volume: str | None = None
    page: str | None = None


@dataclass(slots=True)
class Record:
    """One citing publication and its reference list."""

    id: str
    pub_year: int
    venue: str
    doc_type: str
    cited_refs: list[CitedRef] = field(default_factory=list)


def parse_cited_ref(raw: str) -> CitedRef:
    """Parse a single cited-reference string.

    Fields are comma-separated in WoS exports
    (``LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317``). The year is the
    first 4-digit token within bounds among the first three fields; limiting
    the search window keeps volume/page tokens and trailing DOIs from being
    misread as years. When no year is found the reference is kept raw-only:
    such refs contribute to nothing downstream that needs a year.
    """
    tokens = raw.split(", ")
    year = None
    year_idx = -1
    for i in range(min(3, len(tokens))):
        t = tokens[i].strip()
        if len(t) == 4 and t.isdigit():
            y = int(t)
            if REF_YEAR_MIN <= y <= REF_YEAR_MAX:
                year = y
                year_idx = i
                break
    if year is None:
        return CitedRef(raw=raw)

    first_author = normalize(tokens[0]) if year_idx > 0 else ""
    source = None
    volume = None
    page = None
    for j in range(year_idx + 1, len(tokens)):
        t = tokens[j].strip()
        if len(t) >= 2 and t[0] == "V" and t[1:].isdigit():
            if volume is None:
                volume = t[1:]
            continue
        if len(t) >= 2 and t[0] == "P" and t[1:].isalnum():
            if page is None:
                page = t[1:]
            continue
        if j == year_idx + 1 and t:
            source = normalize(t)
    return CitedRef(
        raw=raw,
        year=year,
        first_author=first_author or None,
        source=source or None,
        volume=volume,
        page=page,
    )


def _is_tag_line(line: str) -> bool:
    if len(line) < 2:
        return False
    c0, c1 = line[0], line[1]
    if not ("A" <= c0 <= "Z" or "0" <= c0 <= "9"):
        return False
    if not ("A" <= c1 <= "Z" or "0" <= c1 <= "9"):
        return False
    return len(line) == 2 or line[2] == " "


def _synth_id(fields: list[RawField]) -> str:
    blob = "\n".join(f.tag + " " + "\n".join(f.lines) for f in fields)
    return "rec-" + hashlib.sha1(blob.encode("utf-8")).hexdigest()[:12]


def _finish_block(fields: list[RawField], start_line: int) -> Record | None:
    by_tag: dict[str, RawField] = {}
    for f in fields:
        by_tag.setdefault(f.tag, f)

    py = by_tag.get("PY")
    pub_year = None
    if py is not None:
        t = py.lines[0].strip()
        if t.isdigit():
            y = int(t)
            if PUB_YEAR_MIN <= y <= PUB_YEAR_MAX:
                pub_year = y
    if pub_year is None:
        logger.warning(
            "malformed record starting at line %d: missing or unparseable PY; block skipped",
            start_line,
        )
        return None

    ut = by_tag.get("UT")
    rec_id = ut.lines[0].strip() if ut is not None and ut.lines[0].strip() else _synth_id(fields)
    so = by_tag.get("SO")
    venue = normalize(so.lines[0]) if so is not None else ""
    dt = by_tag.get("DT")
    doc_type = dt.lines[0].strip() if dt is not None else ""

    cited: list[CitedRef] = []
    cr = by_tag.get("CR")
    if cr is not None:
        for line in cr.lines:
            s = line.strip()
            if s:
                cited.append(parse_cited_ref(s))
    return Record(id=rec_id, pub_year=pub_year, venue=venue, doc_type=doc_type, cited_refs=cited)


def parse_wos(text: str) -> list[Record]:
    """Parse a WoS tagged export into Records, in file order.

    One Record per ``ER``-terminated block with a parseable PY; blocks missing
    PY or never reaching ER are logged and skipped. The optional FN/VR header
    and everything after ``EF`` are ignored. Tab-indented continuations raise:
    silently accepting them would silently lose references.
    """
    records: list[Record] = []
    fields: list[RawField] = []
    start_line = 0
    saw_block = False

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        leading = line[: len(line) - len(line.lstrip())]
        if "\t" in leading:
            raise InputError(f"line {lineno}: tab-indented continuation line")
        if line.startswith("   ") and (len(line) == 3 or line[3] != " "):
            if fields:
                fields[-1].lines.append(line[3:])
            else:
                logger.warning("line %d: continuation line outside any field; ignored", lineno)
            continue
        if not _is_tag_line(line):
            logger.warning("line %d: unrecognized line %r; ignored", lineno, stripped[:40])
            continue

        tag = line[:2]
        if tag == "EF":
            break
        if tag == "ER":
            if fields:
                rec = _finish_block(fields, start_line)
                if rec is not None:
                    records.append(rec)
                fields = []
            continue
        if tag in ("FN", "VR") and not fields:
            continue  # file header
        if not fields:
            start_line = lineno
            saw_block = True
        fields.append(RawField(tag=tag, lines=[line[3:]]))

    if fields:
        logger.warning(
            "malformed record starting at line %d: no ER before EOF; block skipped", start_line
        )
    if not saw_block:
        raise EmptyFileError("no record blocks found in input")
    return records


CSV_COLUMNS = ("citing_id", "citing_year", "venue", "doc_type", "cited_ref")


def parse_csv(text: str) -> list[Record]:
    """Parse the flat CSV fallback format.

    Header ``citing_id,citing_year,venue,doc_type,cited_ref``; one row per
    (record, cited ref) pair, rows sharing a citing_id grouped into one Record
    in first-appearance order. Rows with unparseable years are skipped with a
    warning.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise MissingColumnError("CSV input has no header row")
    missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise MissingColumnError("CSV input is missing column(s): " + ", ".join(missing))

    by_id: dict[str, Record] = {}
    for rownum, row in enumerate(reader, start=2):
        year_text = (row.get("citing_year") or "").strip()
        year = int(year_text) if year_text.isdigit() else None
        if year is None or not PUB_YEAR_MIN <= year <= PUB_YEAR_MAX:
            logger.warning("row %d: bad citing_year %r; row skipped", rownum, year_text)
            continue
        cid = (row.get("citing_id") or "").strip()
        rec = by_id.get(cid)
        if rec is None:
            rec = Record(
                id=cid,
                pub_year=year,
                venue=normalize(row.get("venue") or ""),
                doc_type=(row.get("doc_type") or "").strip(),
            )
            by_id[cid] = rec
        ref_text = (row.get("cited_ref") or "").strip()
        if ref_text:
            rec.cited_refs.append(parse_cited_ref(ref_text))
    return list(by_id.values())
