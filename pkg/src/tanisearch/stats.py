"""Per-attribute statistics, z-score standardization, and attribute weights.

The mean is the arithmetic column mean and the standard deviation is the
population form (denominator m, not m - 1). Weights are reciprocals of
column variances, so a low-variance attribute is emphasized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .dataset import DescriptorMatrix, DrugClass
from .errors import ValidationError, ZeroVarianceError


class ConstantColumnPolicy(Enum):
    DROP = "drop"
    ZERO = "zero"
    ERROR = "error"


class WeightSource(Enum):
    RAW_VARIANCE = "raw"
    STANDARDIZED_VARIANCE = "standardized"
    UNIT = "unit"


@dataclass(frozen=True)
class ColumnStats:
    """Population mean, standard deviation, and variance of one attribute."""

    mean: float
    std: float
    variance: float


@dataclass(frozen=True)
class WeightVector:
    """Per-attribute weights plus how they were derived."""

    weights: np.ndarray
    source: WeightSource

    def __post_init__(self):
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if weights.ndim != 1 or weights.size == 0:
            raise ValidationError("weights must be a non-empty 1-D vector")
        if not np.isfinite(weights).all() or not (weights > 0).all():
            raise ValidationError("weights must be finite and strictly positive")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.weights.size


@dataclass(eq=False)
class StandardizedMatrix:
    """A dataset transformed to z-scores, column by column.

    Retains ids, classes, and row order; `stats` holds the original-scale
    ColumnStats of each retained attribute, and `dropped_attributes` names
    any constant columns removed by the DROP policy.
    """

    ids: list[str]
    drug_classes: list[DrugClass]
    attribute_names: list[str]
    values: np.ndarray
    stats: tuple[ColumnStats, ...]
    dropped_attributes: tuple[str, ...] = ()
    has_class_column: bool = True
    _row_of: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        self.values = values
        self._row_of = {mol_id: i for i, mol_id in enumerate(self.ids)}

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def row_index(self, molecule_id: str) -> int:
        return self._row_of[molecule_id]


def column_stats(matrix: DescriptorMatrix, rows: Sequence[int] | None = None) -> list[ColumnStats]:
    """Population mean/std/variance per attribute.

    `rows` optionally restricts the computation to a subset of row indices;
    the default uses every record, reference included.
    """
    values = matrix.values if rows is None else matrix.values[np.asarray(list(rows), dtype=int)]
    if values.shape[0] < 1:
        raise ValidationError("row subset is empty")
    mu = values.mean(axis=0)
    var = np.square(values - mu).mean(axis=0)
    std = np.sqrt(var)
    return [ColumnStats(float(m), float(s), float(v)) for m, s, v in zip(mu, std, var)]


def standardize(
    matrix: DescriptorMatrix,
    stats: Sequence[ColumnStats],
    policy: ConstantColumnPolicy = ConstantColumnPolicy.DROP,
) -> StandardizedMatrix:
    """Transform every column to z-scores (x - mean) / std.

    Constant columns (std exactly 0) are handled per policy: DROP removes the
    attribute and records its name, ZERO emits all-zero scores for it, ERROR
    raises ZeroVarianceError naming it.
    """
    if len(stats) != matrix.n:
        raise ValidationError(
            f"expected {matrix.n} column stats, got {len(stats)}"
        )
    stds = np.array([s.std for s in stats])
    means = np.array([s.mean for s in stats])
    constant = stds == 0.0

    if constant.any() and policy is ConstantColumnPolicy.ERROR:
        name = matrix.attribute_names[int(np.flatnonzero(constant)[0])]
        raise ZeroVarianceError(f"attribute '{name}' has zero variance")

    safe_stds = np.where(constant, 1.0, stds)
    z = (matrix.values - means) / safe_stds

    if policy is ConstantColumnPolicy.DROP and constant.any():
        if constant.all():
            raise ZeroVarianceError(
                "every attribute has zero variance; nothing left after dropping"
            )
        kept = ~constant
        dropped = tuple(
            name for name, c in zip(matrix.attribute_names, constant) if c
        )
        z = z[:, kept]
        names = [name for name, k in zip(matrix.attribute_names, kept) if k]
        kept_stats = tuple(s for s, k in zip(stats, kept) if k)
    else:
        if policy is ConstantColumnPolicy.ZERO:
            z[:, constant] = 0.0
        dropped = ()
        names = list(matrix.attribute_names)
        kept_stats = tuple(stats)

    return StandardizedMatrix(
        list(matrix.ids),
        list(matrix.drug_classes),
        names,
        z,
        kept_stats,
        dropped_attributes=dropped,
        has_class_column=matrix.has_class_column,
    )


def compute_weights(
    data: DescriptorMatrix | StandardizedMatrix,
    source: WeightSource = WeightSource.RAW_VARIANCE,
) -> WeightVector:
    """Derive per-attribute weights W_j = 1 / variance_j.

    RAW_VARIANCE uses the raw-data column variances (for a StandardizedMatrix,
    the original-scale variances it carries). STANDARDIZED_VARIANCE recomputes
    variances from the z-scored values, which are 1 by construction, so every
    weight comes out 1; it exists to make that degenerate reading runnable.
    UNIT skips variances entirely.
    """
    if source is WeightSource.UNIT:
        return WeightVector(np.ones(data.values.shape[1]), source)

    if source is WeightSource.RAW_VARIANCE:
        if isinstance(data, StandardizedMatrix):
            variances = np.array([s.variance for s in data.stats])
        else:
            variances = np.array([s.variance for s in column_stats(data)])
    elif source is WeightSource.STANDARDIZED_VARIANCE:
        if not isinstance(data, StandardizedMatrix):
            raise ValidationError(
                "standardized-variance weights require a standardized matrix"
            )
        mu = data.values.mean(axis=0)
        variances = np.square(data.values - mu).mean(axis=0)
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown weight source {source!r}")

    if (variances == 0.0).any():
        name = data.attribute_names[int(np.flatnonzero(variances == 0.0)[0])]
        raise ZeroVarianceError(
            f"attribute '{name}' has zero variance; cannot take its reciprocal"
        )
    return WeightVector(1.0 / variances, source)
