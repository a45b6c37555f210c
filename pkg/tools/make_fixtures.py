#!/usr/bin/env python3
"""Regenerate the committed test fixtures and the golden ranking file.

The golden CSV is produced from the naive oracle implementation in
tests/oracle.py (scores, ordering, classification, and formatting), never
from the engine, so the byte-identity test in the suite is a genuine
cross-check. Rerun after changing the fixtures:

    python3 tools/make_fixtures.py
"""

from __future__ import annotations

import csv
import pathlib
import random
import sys

HERE = pathlib.Path(__file__).resolve().parent
TESTS = HERE.parent / "tests"
DATA = TESTS / "data"

sys.path.insert(0, str(TESTS))

import oracle  # noqa: E402

CLASS_BOUNDS = (1.0, 0.9, 0.7, 0.4, 0.2, 0.0)


def write_dataset(path, ids, classes, names, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "class", *names])
        for mol_id, cls, row in zip(ids, classes, rows):
            writer.writerow([mol_id, cls, *[repr(v) for v in row]])


def make_rank_fixture():
    rng = random.Random(20260808)
    m, n = 50, 10
    ids = [f"pk{1000 + i}" for i in range(m)]
    classes = ["ATS" if rng.random() < 0.5 else "NATS" for _ in range(m)]
    rows = [[rng.uniform(-5.0, 5.0) for _ in range(n)] for _ in range(m)]
    names = [f"moment{j:02d}" for j in range(n)]
    ref_id = ids[0]

    ranked = oracle.rank_pipeline(ids, rows, ref_id, weighted=True, weight_source="raw")

    # Scores must sit safely away from class-bin edges and from 4-decimal
    # rounding boundaries, or the byte-identity check would hinge on the last
    # ulp of two different summation orders.
    for mol_id, score in ranked:
        if mol_id != ref_id:
            assert min(abs(score - b) for b in CLASS_BOUNDS) > 1e-6, (mol_id, score)
        frac = abs(score) * 10000.0
        assert abs(frac - round(frac)) > 1e-6 or mol_id == ref_id, (mol_id, score)

    write_dataset(DATA / "rank_fixture_50x10.csv", ids, classes, names, rows)

    class_of = dict(zip(ids, classes))
    with open(DATA / "golden_rank_50x10.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "id", "drug_class", "score", "similarity_class"])
        for rank, (mol_id, score) in enumerate(ranked, start=1):
            writer.writerow(
                [rank, mol_id, class_of[mol_id], f"{score:.4f}", oracle.classify(score)]
            )
    return ref_id


def make_divergence_fixture():
    """20 x 5 dataset with one huge-variance noise attribute.

    Inverse-variance weighting all but removes the noise column, so the
    weighted and unweighted rankings must disagree somewhere.
    """
    rng = random.Random(99)
    m = 20
    ids = [f"d{100 + i}" for i in range(m)]
    classes = ["ATS" if i < 10 else "NATS" for i in range(m)]
    names = ["s0", "s1", "s2", "s3", "noise"]
    rows = []
    for i in range(m):
        signal = [rng.gauss(0.0, 1.0) for _ in range(4)]
        rows.append(signal + [rng.gauss(0.0, 40.0)])

    ref_id = ids[0]
    triples = oracle.compare_pipeline(ids, rows, ref_id)
    by_unweighted = sorted(triples, key=lambda t: (-t[1], t[0]))
    order_changes = [
        i for i, (a, b) in enumerate(zip(triples, by_unweighted)) if a[0] != b[0]
    ]
    assert order_changes, "fixture failed to produce a rank-order change"

    write_dataset(DATA / "compare_divergence_20x5.csv", ids, classes, names, rows)


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    ref_id = make_rank_fixture()
    make_divergence_fixture()
    print(f"fixtures written to {DATA} (rank fixture reference id: {ref_id})")


if __name__ == "__main__":
    main()
