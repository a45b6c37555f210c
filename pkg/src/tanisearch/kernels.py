"""Similarity and distance kernels.

Scalar entry points (tanimoto_continuous, weighted_tanimoto, euclidean,
weighted_euclidean) operate on a pair of vectors and return a SimilarityScore.
Batch scoring of a whole matrix against one reference goes through
score_matrix, which dispatches to the compiled extension when it was built
and to the numpy fallback otherwise (override with TANISEARCH_BACKEND=python
or =cython).

The continuous Tanimoto implemented here is

    T(r, d) = sum(r*d) / (sum(r^2) + sum(d^2) - sum(r*d))

with range [-1/3, 1] and T(x, x) = 1 for any nonzero x. The weighted form
multiplies both vectors elementwise by the weights first, then applies T.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, UndefinedScoreError, ValidationError
from .stats import WeightVector


class Method(Enum):
    TANIMOTO = "tanimoto"
    WEIGHTED_TANIMOTO = "weighted-tanimoto"
    EUCLIDEAN = "euclidean"
    WEIGHTED_EUCLIDEAN = "weighted-euclidean"

    @property
    def weighted(self) -> bool:
        return self in (Method.WEIGHTED_TANIMOTO, Method.WEIGHTED_EUCLIDEAN)

    @property
    def is_distance(self) -> bool:
        return self in (Method.EUCLIDEAN, Method.WEIGHTED_EUCLIDEAN)


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    method: Method

    def __float__(self) -> float:
        return self.value


def _load_backend():
    choice = os.environ.get("TANISEARCH_BACKEND", "").strip().lower()
    if choice not in ("", "auto", "cython", "python"):
        warnings.warn(
            f"unknown TANISEARCH_BACKEND={choice!r}; selecting automatically"
        )
        choice = ""
    if choice == "python":
        from . import _kernels_py

        return _kernels_py, "python"
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        return _ckernels, "cython"
    except ImportError:
        if choice == "cython":
            raise ImportError(
                "TANISEARCH_BACKEND=cython but the compiled extension is not "
                "built; run `python setup.py build_ext --inplace` or install "
                "the package"
            ) from None
        from . import _kernels_py

        return _kernels_py, "python"


_impl, _BACKEND_NAME = _load_backend()


def backend_name() -> str:
    """Which batch backend is active: "cython" or "python"."""
    return _BACKEND_NAME


def _as_vector(x, name: str) -> np.ndarray:
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be a 1-D vector")
    if v.size == 0:
        raise DimensionError(f"{name} must not be empty")
    return v


def _pair(r, d) -> tuple[np.ndarray, np.ndarray]:
    rv = _as_vector(r, "r")
    dv = _as_vector(d, "d")
    if rv.size != dv.size:
        raise DimensionError(
            f"vector lengths differ: {rv.size} vs {dv.size}"
        )
    return rv, dv


def _weights_array(w, n: int) -> np.ndarray:
    wv = w.weights if isinstance(w, WeightVector) else _as_vector(w, "w")
    if wv.size != n:
        raise DimensionError(f"weight length {wv.size} does not match vectors of length {n}")
    if not np.isfinite(wv).all() or not (wv > 0).all():
        raise ValidationError("weights must be finite and strictly positive")
    return wv


def _tanimoto_value(rv: np.ndarray, dv: np.ndarray, additive_denominator: bool) -> float:
    # 1-D fixed-order reductions keep k(a, b) == k(b, a) bitwise exact.
    if not rv.any() and not dv.any():
        raise UndefinedScoreError(
            "similarity undefined: both vectors are all-zero (denominator 0)"
        )
    rd = float(np.multiply(rv, dv).sum())
    rr = float(np.multiply(rv, rv).sum())
    dd = float(np.multiply(dv, dv).sum())
    if additive_denominator:
        return rd / (rr + dd + rd)
    return rd / (rr + dd - rd)


def tanimoto_continuous(r, d, *, additive_denominator: bool = False) -> SimilarityScore:
    """Continuous Tanimoto similarity of two equal-length real vectors.

    With additive_denominator=True the cross term is added rather than
    subtracted in the denominator; that variant caps self-similarity at 1/3
    and is kept only for reference. It is never used by the search pipelines.
    """
    rv, dv = _pair(r, d)
    return SimilarityScore(_tanimoto_value(rv, dv, additive_denominator), Method.TANIMOTO)


def weighted_tanimoto(r, d, w) -> SimilarityScore:
    """Tanimoto after multiplying both vectors elementwise by the weights."""
    rv, dv = _pair(r, d)
    wv = _weights_array(w, rv.size)
    return SimilarityScore(
        _tanimoto_value(rv * wv, dv * wv, False), Method.WEIGHTED_TANIMOTO
    )


def euclidean(x, y) -> SimilarityScore:
    """Straight-line distance between two equal-length vectors."""
    xv, yv = _pair(x, y)
    diff = xv - yv
    value = float(np.sqrt(np.multiply(diff, diff).sum()))
    return SimilarityScore(value, Method.EUCLIDEAN)


def weighted_euclidean(x, y, w) -> SimilarityScore:
    """Distance sqrt(sum_j w_j * (x_j - y_j)^2); equals euclidean at unit weights."""
    xv, yv = _pair(x, y)
    wv = _weights_array(w, xv.size)
    diff = xv - yv
    value = float(np.sqrt(np.multiply(np.multiply(diff, diff), wv).sum()))
    return SimilarityScore(value, Method.WEIGHTED_EUCLIDEAN)


def _run_chunks(func, block: np.ndarray, threads: int) -> np.ndarray:
    if threads <= 1 or block.shape[0] < 2 * threads:
        return func(block)
    chunks = np.array_split(block, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(func, chunks))
    return np.concatenate(parts)


def score_matrix(
    values: np.ndarray,
    reference: np.ndarray,
    method: Method,
    weights: WeightVector | np.ndarray | None = None,
    *,
    threads: int = 1,
) -> np.ndarray:
    """Score every row of `values` against `reference` with the given kernel.

    Returns an array of one score per row; for the Tanimoto family, NaN marks
    rows whose score is undefined. Results are bit-identical for any thread
    count because every row is reduced independently.
    """
    block = np.ascontiguousarray(values, dtype=np.float64)
    if block.ndim != 2:
        raise DimensionError("values must be a 2-D matrix")
    ref = _as_vector(reference, "reference")
    if ref.size != block.shape[1]:
        raise DimensionError(
            f"reference length {ref.size} does not match matrix width {block.shape[1]}"
        )

    if method.weighted:
        if weights is None:
            raise ValidationError(f"method {method.value} requires weights")
        w = _weights_array(weights, ref.size)
    elif weights is not None:
        raise ValidationError(f"method {method.value} does not take weights")

    if method is Method.TANIMOTO:
        return _run_chunks(lambda b: _impl.tanimoto_block(b, ref), block, threads)
    if method is Method.WEIGHTED_TANIMOTO:
        scaled_ref = ref * w
        scaled = block * w
        return _run_chunks(
            lambda b: _impl.tanimoto_block(b, scaled_ref), scaled, threads
        )
    if method is Method.EUCLIDEAN:
        return _run_chunks(lambda b: _impl.euclidean_block(b, ref), block, threads)
    if method is Method.WEIGHTED_EUCLIDEAN:
        return _run_chunks(
            lambda b: _impl.weighted_euclidean_block(b, ref, w), block, threads
        )
    raise ValueError(f"unknown method {method!r}")  # pragma: no cover
