"""Intra-class vs inter-class score summaries over a ranked result set.

Intra aggregates the hits sharing the reference's drug class (the reference's
own self-hit excluded, since its forced score of 1 says nothing about class
cohesion); inter aggregates every other hit. A positive intra-minus-inter
mean gap indicates the measure separates the classes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dataset import DrugClass
from .errors import ValidationError
from .search import SimilarityClass, SimilarityHit


@dataclass(frozen=True)
class ClassSummary:
    """Score statistics for one group of hits.

    drug_class is None when the group spans several classes (the inter side
    of a dataset with more than two labels).
    """

    drug_class: DrugClass | None
    count: int
    mean_score: float
    median_score: float
    min_score: float
    max_score: float


@dataclass(frozen=True)
class SummaryPair:
    intra: ClassSummary | None
    inter: ClassSummary | None

    @property
    def mean_gap(self) -> float | None:
        """intra.mean - inter.mean; None when either side is absent."""
        if self.intra is None or self.inter is None:
            return None
        return self.intra.mean_score - self.inter.mean_score


def _summarize(hits: Sequence[SimilarityHit], group_class: DrugClass | None) -> ClassSummary:
    scores = sorted(h.score for h in hits)
    count = len(scores)
    # Median is the lower-middle element for even counts.
    median = scores[(count - 1) // 2]
    return ClassSummary(
        drug_class=group_class,
        count=count,
        mean_score=sum(scores) / count,
        median_score=median,
        min_score=scores[0],
        max_score=scores[-1],
    )


def class_summary(
    hits: Iterable[SimilarityHit],
    reference_class: DrugClass,
    reference_id: str | None = None,
) -> SummaryPair:
    """Split hits into intra (reference's class) and inter (the rest) summaries.

    The hit whose id equals reference_id is excluded before aggregation. A
    side with no hits is reported as absent (None), not as zeros.
    """
    hits = [h for h in hits if reference_id is None or h.molecule_id != reference_id]
    if not hits:
        raise ValidationError("no hits to summarize")
    intra_hits = [h for h in hits if h.drug_class is reference_class]
    inter_hits = [h for h in hits if h.drug_class is not reference_class]

    intra = _summarize(intra_hits, reference_class) if intra_hits else None
    inter = None
    if inter_hits:
        inter_classes = {h.drug_class for h in inter_hits}
        label = inter_classes.pop() if len(inter_classes) == 1 else None
        inter = _summarize(inter_hits, label)
    return SummaryPair(intra=intra, inter=inter)


def class_distribution(
    hits: Iterable[SimilarityHit],
) -> dict[tuple[DrugClass, SimilarityClass | None], int]:
    """Contingency counts of (drug class, similarity class) over the hits.

    Only nonzero cells appear; the counts sum to the number of hits.
    """
    counts: Counter = Counter()
    for hit in hits:
        counts[(hit.drug_class, hit.similarity_class)] += 1
    return dict(counts)
