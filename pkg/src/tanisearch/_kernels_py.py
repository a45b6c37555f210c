"""Pure-Python (numpy) batch scoring kernels.

Fallback implementation of the hot loops; the compiled _ckernels module has
the same interface. Each row's reduction runs over that row alone, so
splitting a matrix into row chunks cannot change any score: that property is
what makes threaded scoring bit-identical to serial scoring.
"""

from __future__ import annotations

import numpy as np


def tanimoto_block(block: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Continuous Tanimoto of every row of `block` against `ref`.

    Returns one score per row; NaN marks the undefined case (row and
    reference both all-zero, denominator 0).
    """
    rr = np.multiply(ref, ref).sum()
    dd = np.multiply(block, block).sum(axis=1)
    rd = np.multiply(block, ref).sum(axis=1)
    denom = rr + dd - rd
    out = np.empty(block.shape[0])
    np.divide(rd, denom, out=out, where=denom != 0.0)
    out[denom == 0.0] = np.nan
    return out


def euclidean_block(block: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Euclidean distance of every row of `block` to `ref`."""
    diff = block - ref
    return np.sqrt(np.multiply(diff, diff).sum(axis=1))


def weighted_euclidean_block(block: np.ndarray, ref: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Weighted Euclidean distance sqrt(sum_j w_j * (x_j - y_j)^2) per row."""
    diff = block - ref
    return np.sqrt(np.multiply(np.multiply(diff, diff), w).sum(axis=1))
