"""Robust persistent homology by average-pairwise-distance trimming."""
from .bottleneck import BottleneckResult, bottleneck, stability_gap
from .diagram import PersistenceDiagram
from .estimators import (
    AveragePairwiseTrimmer,
    RipsPersistence,
    TrimmedRipsPersistence,
    TrimmingSelector,
)
from .exceptions import DataError, InputError, NetworkError, ParseError, ResourceError
from .metricspace import distance_matrix, enclosing_radius, hausdorff
from .persistence import (
    betti_at_scale,
    brute_force_betti,
    dominant_feature,
    persistent_homology,
    rips_persistence,
)
from .rips import Filtration, Simplex, rips_filtration
from .selection import SelectionConfig, SelectionOutcome, select_asymmetric, select_one_sided
from .trimming import (
    TrimResult,
    TrimSpec,
    avg_pairwise_distances,
    reference_population_trim,
    trim_asymmetric,
    trim_one_sided,
)

__version__ = "0.1.0"
