"""Similarity searching over real-valued molecular descriptor vectors.

Pipeline: load a descriptor CSV, z-score standardize it, derive
inverse-variance attribute weights, score every record against a reference
with a continuous (optionally weighted) Tanimoto coefficient or a Euclidean
distance, rank the results, and label each hit with an ordinal similarity
class.
"""

__version__ = "0.1.0"

from .dataset import (
    DescriptorMatrix,
    DrugClass,
    IngestOptions,
    MoleculeRecord,
    append_records,
    get_reference,
    load_dataset,
    save_dataset,
)
from .errors import (
    DimensionError,
    InvalidScoreError,
    MoleculeNotFoundError,
    ParseError,
    TaniSearchError,
    UndefinedScoreError,
    ValidationError,
    ZeroVarianceError,
)
from .evaluate import ClassSummary, SummaryPair, class_distribution, class_summary
from .kernels import (
    Method,
    SimilarityScore,
    backend_name,
    euclidean,
    score_matrix,
    tanimoto_continuous,
    weighted_euclidean,
    weighted_tanimoto,
)
from .search import (
    BoundaryPolicy,
    ComparisonResult,
    ComparisonRow,
    RankingResult,
    SearchConfig,
    SimilarityClass,
    SimilarityHit,
    classify_score,
    compare_weighted_unweighted,
    rank_database,
)
from .stats import (
    ColumnStats,
    ConstantColumnPolicy,
    StandardizedMatrix,
    WeightSource,
    WeightVector,
    column_stats,
    compute_weights,
    standardize,
)

__all__ = [
    "__version__",
    "DescriptorMatrix",
    "DrugClass",
    "IngestOptions",
    "MoleculeRecord",
    "append_records",
    "get_reference",
    "load_dataset",
    "save_dataset",
    "TaniSearchError",
    "ParseError",
    "ValidationError",
    "MoleculeNotFoundError",
    "DimensionError",
    "UndefinedScoreError",
    "ZeroVarianceError",
    "InvalidScoreError",
    "ClassSummary",
    "SummaryPair",
    "class_summary",
    "class_distribution",
    "Method",
    "SimilarityScore",
    "backend_name",
    "tanimoto_continuous",
    "weighted_tanimoto",
    "euclidean",
    "weighted_euclidean",
    "score_matrix",
    "BoundaryPolicy",
    "SearchConfig",
    "SimilarityClass",
    "SimilarityHit",
    "RankingResult",
    "ComparisonRow",
    "ComparisonResult",
    "classify_score",
    "rank_database",
    "compare_weighted_unweighted",
    "ColumnStats",
    "ConstantColumnPolicy",
    "StandardizedMatrix",
    "WeightSource",
    "WeightVector",
    "column_stats",
    "compute_weights",
    "standardize",
]
