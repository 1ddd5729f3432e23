"""Single-segment reference-year spectra.

The pipeline is: count cited references per reference publication year, take
each year's deviation from the median of its five-year neighborhood (which
flattens the tendency of articles to cite recent literature), then replace the
deviations with ordinal ranks so spectra from segments of very different sizes
become comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import median

from .corpus import Segment
from .errors import InputError

DEVIATION_MODES = ("absolute", "signed")


@dataclass(frozen=True)
class YearRange:
    """Inclusive range of reference publication years under analysis."""

    first: int
    last: int

    def __post_init__(self) -> None:
        if self.first > self.last:
            raise InputError(f"year range first {self.first} > last {self.last}")

    def __len__(self) -> int:
        return self.last - self.first + 1

    def years(self) -> range:
        return range(self.first, self.last + 1)


@dataclass(slots=True)
class Spectrum:
    """Per-year counts, median deviations and ranks for one segment."""

    range: YearRange
    counts: list[int]
    deviations: list[float]
    ranks: list[int]


def year_histogram(segment: Segment, years: YearRange) -> list[int]:
    """Count cited references per reference publication year.

    Every in-range, year-bearing reference counts once, including repeat
    citations of the same work; refs without a parsed year are ignored.
    """
    first, last = years.first, years.last
    counts = [0] * len(years)
    for rec in segment.records:
        for ref in rec.cited_refs:
            y = ref.year
            if y is not None and first <= y <= last:
                counts[y - first] += 1
    return counts


def median_deviation(counts: list[int | float], mode: str = "absolute") -> list[float]:
    """Deviation of each count from the median of its five-year window.

    The window is the centered slice {i-2 .. i+2}, truncated at the ends of
    the range rather than zero-padded (zero padding would fabricate deviation
    peaks at the boundary). Even-sized truncated windows use the mean of the
    two central values.
    """
    if not counts:
        raise InputError("median_deviation needs a non-empty series")
    if mode not in DEVIATION_MODES:
        raise InputError(f"unknown deviation mode {mode!r}; expected one of {DEVIATION_MODES}")
    n = len(counts)
    out = []
    for i in range(n):
        window = counts[max(0, i - 2) : min(n, i + 3)]
        m = median(window)
        d = float(counts[i] - m)
        out.append(abs(d) if mode == "absolute" else d)
    return out


def rank_transform(values: list[float]) -> list[int]:
    """Replace values with ordinal ranks 1..n, the largest value taking n.

    Ties are broken deterministically by year: among equal values the earlier
    year receives the larger rank, so degenerate flat inputs still produce a
    documented permutation.
    """
    n = len(values)
    if n == 0:
        raise InputError("rank_transform needs a non-empty vector")
    order = sorted(range(n), key=lambda i: (values[i], -i))
    ranks = [0] * n
    for pos, idx in enumerate(order, start=1):
        ranks[idx] = pos
    return ranks


def rpys(segment: Segment, years: YearRange, mode: str = "absolute") -> Spectrum:
    """Full spectrum for one segment: histogram, deviations, ranks."""
    counts = year_histogram(segment, years)
    deviations = median_deviation(counts, mode)
    return Spectrum(range=years, counts=counts, deviations=deviations, ranks=rank_transform(deviations))
