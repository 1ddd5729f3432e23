"""Reference publication year spectroscopy toolkit.

Parses bibliographic exports, computes rank-transformed reference-year
spectra per segment (time bin or venue), separates long-term "sticky"
citation peaks from short-term bursts, attributes peaks to cited works, and
clusters document sets by shared intellectual history with Ward linkage.
"""

from .attribution import AttributionRow, BandTable, WorkKey, attribute_year, band_table
from .clustering import Dendrogram, DistanceMatrix, Merge, cut, leaf_order, row_distances, ward_cluster
from .corpus import (
    Corpus,
    Segment,
    YearBin,
    build_corpus,
    parse_bins_spec,
    segment_by_bins,
    segment_by_venue,
)
from .ingest import CitedRef, Record, normalize, parse_cited_ref, parse_csv, parse_wos
from .multirpys import (
    KnowledgeClaim,
    RpysMatrix,
    StickyConfig,
    band_year_count,
    classify_claims,
    multi_rpys,
    random_matrix,
)
from .spectroscopy import Spectrum, YearRange, median_deviation, rank_transform, rpys, year_histogram
from .synth import PlantedBurst, PlantedClassic, SynthSpec, generate_wos

__version__ = "0.1.0"
