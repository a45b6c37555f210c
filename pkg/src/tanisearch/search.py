"""End-to-end similarity search: standardize, weight, score, rank, classify.

rank_database runs the full pipeline for one reference molecule and returns
hits sorted most-similar-first (decreasing score for the Tanimoto family,
increasing distance for the Euclidean family) with ties broken by ascending
molecule id. compare_weighted_unweighted runs the weighted and unweighted
kernels on one shared standardization pass and pairs the scores per molecule.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum, IntEnum

from .dataset import DescriptorMatrix, DrugClass, get_reference
from .errors import InvalidScoreError, ValidationError
from .kernels import Method, score_matrix
from .stats import (
    ConstantColumnPolicy,
    StandardizedMatrix,
    WeightSource,
    WeightVector,
    column_stats,
    compute_weights,
    standardize,
)

ABSOLUTE_TOLERANCE = 1e-12


class SimilarityClass(IntEnum):
    """Ordinal similarity taxonomy; comparison follows similarity strength."""

    NONE = 0
    VERY_LOW = 1
    LOW = 2
    MEDIUM = 3
    HIGH = 4
    VERY_HIGH = 5
    ABSOLUTE = 6


class BoundaryPolicy(Enum):
    LOWER_INCLUSIVE = "lower"
    UPPER_INCLUSIVE = "upper"


@dataclass(frozen=True)
class SimilarityHit:
    molecule_id: str
    drug_class: DrugClass
    score: float
    similarity_class: SimilarityClass | None


@dataclass(frozen=True)
class SearchConfig:
    method: Method = Method.WEIGHTED_TANIMOTO
    weight_source: WeightSource = WeightSource.RAW_VARIANCE
    standardize: bool = True
    constant_column_policy: ConstantColumnPolicy = ConstantColumnPolicy.DROP
    top_k: int | None = None
    boundary_policy: BoundaryPolicy = BoundaryPolicy.LOWER_INCLUSIVE

    def __post_init__(self):
        if self.top_k is not None and self.top_k < 1:
            raise ValidationError("top_k must be a positive integer")


@dataclass(frozen=True)
class RankingResult:
    hits: tuple[SimilarityHit, ...]
    undefined_ids: tuple[str, ...]
    dropped_attributes: tuple[str, ...]
    reference_id: str
    config: SearchConfig


@dataclass(frozen=True)
class ComparisonRow:
    molecule_id: str
    drug_class: DrugClass
    score_unweighted: float
    score_weighted: float
    class_weighted: SimilarityClass | None


@dataclass(frozen=True)
class ComparisonResult:
    rows: tuple[ComparisonRow, ...]
    undefined_ids: tuple[str, ...]
    dropped_attributes: tuple[str, ...]
    reference_id: str
    config: SearchConfig


def classify_score(
    score: float, policy: BoundaryPolicy = BoundaryPolicy.LOWER_INCLUSIVE
) -> SimilarityClass:
    """Map a similarity score onto the ordinal class taxonomy.

    Bins are 0.9-1 VERY_HIGH, 0.7-0.9 HIGH, 0.4-0.7 MEDIUM, 0.2-0.4 LOW,
    0-0.2 VERY_LOW, with exactly 1 (within 1e-12) ABSOLUTE and anything at or
    below 0 NONE; negative scores have no bins of their own. The policy says
    which class owns a shared interior boundary: LOWER_INCLUSIVE gives 0.9 to
    VERY_HIGH, UPPER_INCLUSIVE gives it to HIGH, and so on.
    """
    if math.isnan(score):
        raise InvalidScoreError("cannot classify NaN score")
    if abs(score - 1.0) <= ABSOLUTE_TOLERANCE:
        return SimilarityClass.ABSOLUTE
    lower = policy is BoundaryPolicy.LOWER_INCLUSIVE
    for bound, cls in (
        (0.9, SimilarityClass.VERY_HIGH),
        (0.7, SimilarityClass.HIGH),
        (0.4, SimilarityClass.MEDIUM),
        (0.2, SimilarityClass.LOW),
    ):
        if (score >= bound) if lower else (score > bound):
            return cls
    if score > 0.0:
        return SimilarityClass.VERY_LOW
    return SimilarityClass.NONE


def _prepare(matrix: DescriptorMatrix, config: SearchConfig):
    """Standardize per config; returns (working data, dropped attribute names)."""
    if config.standardize:
        std = standardize(matrix, column_stats(matrix), config.constant_column_policy)
        return std, std.dropped_attributes
    return matrix, ()


def _weights_for(
    config: SearchConfig, data: DescriptorMatrix | StandardizedMatrix
) -> WeightVector | None:
    if not config.method.weighted:
        return None
    return compute_weights(data, config.weight_source)


def _order_hits(scored, distance: bool):
    if distance:
        scored.sort(key=lambda h: (h[1], h[0]))
    else:
        scored.sort(key=lambda h: (-h[1], h[0]))
    return scored


def rank_database(
    matrix: DescriptorMatrix,
    reference_id: str,
    config: SearchConfig | None = None,
    *,
    threads: int = 1,
) -> RankingResult:
    """Score every record against the reference and rank most-similar-first.

    The reference is itself a database row and stays in the ranking (its
    Tanimoto self-score is 1, class ABSOLUTE). Records whose score is
    undefined are left out of the ranking and reported in undefined_ids.
    """
    config = config or SearchConfig()
    get_reference(matrix, reference_id)  # fail fast on unknown id
    data, dropped = _prepare(matrix, config)
    weights = _weights_for(config, data)
    ref_row = data.values[data.row_index(reference_id)]
    scores = score_matrix(
        data.values, ref_row, config.method, weights, threads=threads
    )

    scored: list[tuple[str, float, DrugClass]] = []
    undefined: list[str] = []
    for mol_id, cls, score in zip(data.ids, data.drug_classes, scores.tolist()):
        if math.isnan(score):
            undefined.append(mol_id)
        else:
            scored.append((mol_id, score, cls))

    distance = config.method.is_distance
    ordered = _order_hits(scored, distance)
    if config.top_k is not None:
        ordered = ordered[: config.top_k]

    hits = tuple(
        SimilarityHit(
            mol_id,
            cls,
            score,
            None if distance else classify_score(score, config.boundary_policy),
        )
        for mol_id, score, cls in ordered
    )
    return RankingResult(hits, tuple(undefined), tuple(dropped), reference_id, config)


def compare_weighted_unweighted(
    matrix: DescriptorMatrix,
    reference_id: str,
    config: SearchConfig | None = None,
    *,
    threads: int = 1,
) -> ComparisonResult:
    """Pair unweighted and weighted scores per molecule on shared standardized data.

    Both kernels of the configured family run on one standardization pass;
    rows are aligned by id and ordered by the weighted score (decreasing for
    similarities, increasing for distances), ties by ascending id. Rows
    undefined in either column are excluded and reported.
    """
    config = config or SearchConfig()
    get_reference(matrix, reference_id)
    if config.method in (Method.TANIMOTO, Method.WEIGHTED_TANIMOTO):
        plain, weighted_method = Method.TANIMOTO, Method.WEIGHTED_TANIMOTO
    else:
        plain, weighted_method = Method.EUCLIDEAN, Method.WEIGHTED_EUCLIDEAN

    data, dropped = _prepare(matrix, config)
    weights = compute_weights(data, config.weight_source)
    ref_row = data.values[data.row_index(reference_id)]
    unweighted = score_matrix(data.values, ref_row, plain, threads=threads)
    weighted = score_matrix(
        data.values, ref_row, weighted_method, weights, threads=threads
    )

    distance = weighted_method.is_distance
    aligned: list[tuple[str, float, float, DrugClass]] = []
    undefined: list[str] = []
    for mol_id, cls, su, sw in zip(
        data.ids, data.drug_classes, unweighted.tolist(), weighted.tolist()
    ):
        if math.isnan(su) or math.isnan(sw):
            undefined.append(mol_id)
        else:
            aligned.append((mol_id, su, sw, cls))

    aligned.sort(key=lambda t: ((t[2], t[0]) if distance else (-t[2], t[0])))
    if config.top_k is not None:
        aligned = aligned[: config.top_k]

    rows = tuple(
        ComparisonRow(
            mol_id,
            cls,
            su,
            sw,
            None if distance else classify_score(sw, config.boundary_policy),
        )
        for mol_id, su, sw, cls in aligned
    )
    return ComparisonResult(rows, tuple(undefined), tuple(dropped), reference_id, config)


def _class_label(cls: SimilarityClass | None) -> str:
    return "NA" if cls is None else cls.name


def config_echo(config: SearchConfig, reference_id: str) -> dict:
    """JSON-ready echo of every pipeline setting that shaped a result."""
    return {
        "reference_id": reference_id,
        "method": config.method.value,
        "weight_source": config.weight_source.value,
        "standardize": config.standardize,
        "constant_columns": config.constant_column_policy.value,
        "boundary": config.boundary_policy.value,
        "top_k": config.top_k,
    }


def ranking_to_csv(result: RankingResult) -> str:
    """Ranked hits as CSV: rank, id, drug_class, score (4 decimals), class."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rank", "id", "drug_class", "score", "similarity_class"])
    for rank, hit in enumerate(result.hits, start=1):
        writer.writerow(
            [
                rank,
                hit.molecule_id,
                hit.drug_class.value,
                f"{hit.score:.4f}",
                _class_label(hit.similarity_class),
            ]
        )
    return buf.getvalue()


def ranking_to_payload(result: RankingResult) -> dict:
    """Ranked hits as a JSON-ready dict with full-precision scores."""
    return {
        "config": config_echo(result.config, result.reference_id),
        "hits": [
            {
                "rank": rank,
                "id": hit.molecule_id,
                "drug_class": hit.drug_class.value,
                "score": hit.score,
                "similarity_class": None
                if hit.similarity_class is None
                else hit.similarity_class.name,
            }
            for rank, hit in enumerate(result.hits, start=1)
        ],
        "undefined_ids": list(result.undefined_ids),
        "dropped_attributes": list(result.dropped_attributes),
    }


def comparison_to_csv(result: ComparisonResult) -> str:
    """Paired scores as CSV: id, drug_class, both scores (4 decimals), class."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["id", "drug_class", "score_unweighted", "score_weighted", "class_weighted"]
    )
    for row in result.rows:
        writer.writerow(
            [
                row.molecule_id,
                row.drug_class.value,
                f"{row.score_unweighted:.4f}",
                f"{row.score_weighted:.4f}",
                _class_label(row.class_weighted),
            ]
        )
    return buf.getvalue()


def comparison_to_payload(result: ComparisonResult) -> dict:
    return {
        "config": config_echo(result.config, result.reference_id),
        "rows": [
            {
                "id": row.molecule_id,
                "drug_class": row.drug_class.value,
                "score_unweighted": row.score_unweighted,
                "score_weighted": row.score_weighted,
                "class_weighted": None
                if row.class_weighted is None
                else row.class_weighted.name,
            }
            for row in result.rows
        ],
        "undefined_ids": list(result.undefined_ids),
        "dropped_attributes": list(result.dropped_attributes),
    }
