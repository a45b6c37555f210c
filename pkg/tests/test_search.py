import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanisearch import (
    BoundaryPolicy,
    ConstantColumnPolicy,
    DrugClass,
    InvalidScoreError,
    Method,
    MoleculeNotFoundError,
    SearchConfig,
    SimilarityClass,
    ValidationError,
    ZeroVarianceError,
    WeightSource,
    classify_score,
    compare_weighted_unweighted,
    load_dataset,
    rank_database,
)
from tanisearch.search import ranking_to_csv, ranking_to_payload

from conftest import make_matrix

import oracle

LOWER = BoundaryPolicy.LOWER_INCLUSIVE
UPPER = BoundaryPolicy.UPPER_INCLUSIVE


class TestClassifyScore:
    @pytest.mark.parametrize(
        "score,expected",
        [
            (1.0, SimilarityClass.ABSOLUTE),
            (0.9576, SimilarityClass.VERY_HIGH),
            (0.8954, SimilarityClass.HIGH),
            (0.5, SimilarityClass.MEDIUM),
            (0.3, SimilarityClass.LOW),
            (0.1, SimilarityClass.VERY_LOW),
            (0.0, SimilarityClass.NONE),
            (-0.1399, SimilarityClass.NONE),
            (-1 / 3, SimilarityClass.NONE),
        ],
    )
    def test_lower_inclusive_bins(self, score, expected):
        assert classify_score(score, LOWER) is expected

    @pytest.mark.parametrize(
        "boundary,lower_class,upper_class",
        [
            (0.9, SimilarityClass.VERY_HIGH, SimilarityClass.HIGH),
            (0.7, SimilarityClass.HIGH, SimilarityClass.MEDIUM),
            (0.4, SimilarityClass.MEDIUM, SimilarityClass.LOW),
            (0.2, SimilarityClass.LOW, SimilarityClass.VERY_LOW),
        ],
    )
    def test_shared_boundaries_follow_policy(self, boundary, lower_class, upper_class):
        assert classify_score(boundary, LOWER) is lower_class
        assert classify_score(boundary, UPPER) is upper_class

    def test_zero_is_none_under_both_policies(self):
        assert classify_score(0.0, LOWER) is SimilarityClass.NONE
        assert classify_score(0.0, UPPER) is SimilarityClass.NONE

    def test_absolute_tolerance(self):
        assert classify_score(1.0 - 1e-13) is SimilarityClass.ABSOLUTE
        assert classify_score(1.0 + 1e-13) is SimilarityClass.ABSOLUTE
        assert classify_score(1.0 - 1e-9) is SimilarityClass.VERY_HIGH

    def test_nan_rejected(self):
        with pytest.raises(InvalidScoreError):
            classify_score(float("nan"))

    def test_class_total_order(self):
        order = [
            SimilarityClass.NONE,
            SimilarityClass.VERY_LOW,
            SimilarityClass.LOW,
            SimilarityClass.MEDIUM,
            SimilarityClass.HIGH,
            SimilarityClass.VERY_HIGH,
            SimilarityClass.ABSOLUTE,
        ]
        assert sorted(SimilarityClass) == order

    @settings(deadline=None)
    @given(
        st.floats(-1 / 3, 1.0),
        st.floats(-1 / 3, 1.0),
        st.sampled_from([LOWER, UPPER]),
    )
    def test_monotone(self, s1, s2, policy):
        if s1 < s2:
            s1, s2 = s2, s1
        assert classify_score(s1, policy) >= classify_score(s2, policy)


def random_matrix(rng, m=20, n=6, classes=None):
    values = rng.uniform(-5, 5, size=(m, n))
    classes = classes or [DrugClass.ATS if i % 3 else DrugClass.NATS for i in range(m)]
    return make_matrix(values, classes=classes)


class TestRankDatabase:
    def test_reference_row_ranks_first(self, rng):
        matrix = random_matrix(rng, m=3)
        result = rank_database(matrix, matrix.ids[2])
        top = result.hits[0]
        assert top.molecule_id == matrix.ids[2]
        assert abs(top.score - 1.0) <= 1e-12
        assert top.similarity_class is SimilarityClass.ABSOLUTE

    def test_ties_break_by_ascending_id(self, rng):
        row = rng.normal(size=4)
        values = np.vstack([row * 2.0, row, row, rng.normal(size=4)])
        matrix = make_matrix(values, ids=["zref", "bbb", "aaa", "other"])
        result = rank_database(matrix, "zref", SearchConfig(standardize=False))
        scores = {h.molecule_id: h.score for h in result.hits}
        assert scores["aaa"] == scores["bbb"]
        order = [h.molecule_id for h in result.hits]
        assert order.index("aaa") < order.index("bbb")

    def test_output_is_a_total_order(self, rng):
        matrix = random_matrix(rng, m=40)
        result = rank_database(matrix, matrix.ids[0])
        hits = result.hits
        assert len(hits) == 40
        assert len({h.molecule_id for h in hits}) == 40
        for a, b in zip(hits, hits[1:]):
            assert a.score > b.score or (a.score == b.score and a.molecule_id < b.molecule_id)

    def test_classes_match_classifier(self, rng):
        matrix = random_matrix(rng)
        result = rank_database(matrix, matrix.ids[1])
        for hit in result.hits:
            assert hit.similarity_class is classify_score(hit.score)

    def test_top_k(self, rng):
        matrix = random_matrix(rng, m=25)
        full = rank_database(matrix, matrix.ids[0])
        top5 = rank_database(matrix, matrix.ids[0], SearchConfig(top_k=5))
        assert top5.hits == full.hits[:5]

    def test_top_k_must_be_positive(self):
        with pytest.raises(ValidationError):
            SearchConfig(top_k=0)

    def test_unknown_reference_id(self, rng):
        with pytest.raises(MoleculeNotFoundError, match="nope"):
            rank_database(random_matrix(rng), "nope")

    def test_unit_weights_equal_unweighted_exactly(self, rng):
        matrix = random_matrix(rng, m=30)
        weighted = rank_database(
            matrix,
            matrix.ids[4],
            SearchConfig(method=Method.WEIGHTED_TANIMOTO, weight_source=WeightSource.UNIT),
        )
        plain = rank_database(matrix, matrix.ids[4], SearchConfig(method=Method.TANIMOTO))
        assert [(h.molecule_id, h.score) for h in weighted.hits] == [
            (h.molecule_id, h.score) for h in plain.hits
        ]

    def test_standardized_variance_degeneracy(self, rng):
        # Weights recomputed from z-scored data are all ~1, so the weighted
        # ranking collapses onto the unweighted one.
        matrix = random_matrix(rng, m=30)
        weighted = rank_database(
            matrix,
            matrix.ids[7],
            SearchConfig(weight_source=WeightSource.STANDARDIZED_VARIANCE),
        )
        plain = rank_database(matrix, matrix.ids[7], SearchConfig(method=Method.TANIMOTO))
        assert [h.molecule_id for h in weighted.hits] == [h.molecule_id for h in plain.hits]
        for a, b in zip(weighted.hits, plain.hits):
            assert a.score == pytest.approx(b.score, abs=1e-12)

    def test_euclidean_ranks_ascending_without_classes(self, rng):
        matrix = random_matrix(rng)
        result = rank_database(matrix, matrix.ids[0], SearchConfig(method=Method.EUCLIDEAN))
        assert result.hits[0].molecule_id == matrix.ids[0]
        assert result.hits[0].score == 0.0
        assert all(h.similarity_class is None for h in result.hits)
        dists = [h.score for h in result.hits]
        assert dists == sorted(dists)

    def test_matches_oracle_weighted_pipeline(self, rng):
        matrix = random_matrix(rng, m=50, n=10)
        result = rank_database(matrix, matrix.ids[11])
        rows = [[float(v) for v in row] for row in matrix.values]
        expected = oracle.rank_pipeline(matrix.ids, rows, matrix.ids[11])
        assert [h.molecule_id for h in result.hits] == [mol for mol, _ in expected]
        for hit, (_, score) in zip(result.hits, expected):
            assert hit.score == pytest.approx(score, abs=1e-12)

    def test_no_standardize_uses_raw_variance_weights(self, rng):
        matrix = random_matrix(rng, m=15, n=4)
        result = rank_database(matrix, matrix.ids[3], SearchConfig(standardize=False))
        rows = [[float(v) for v in row] for row in matrix.values]
        expected = oracle.rank_pipeline(matrix.ids, rows, matrix.ids[3], standardize=False)
        assert [h.molecule_id for h in result.hits] == [mol for mol, _ in expected]
        for hit, (_, score) in zip(result.hits, expected):
            assert hit.score == pytest.approx(score, abs=1e-12)

    def test_thread_count_is_invisible(self, rng):
        matrix = random_matrix(rng, m=64)
        serial = rank_database(matrix, matrix.ids[0])
        for threads in (2, 8):
            assert rank_database(matrix, matrix.ids[0], threads=threads).hits == serial.hits

    def test_constant_column_dropped_and_reported(self, rng):
        values = rng.uniform(-2, 2, size=(6, 3))
        values[:, 1] = 7.0
        matrix = make_matrix(values, names=["a", "const", "b"])
        result = rank_database(matrix, matrix.ids[0])
        assert result.dropped_attributes == ("const",)

    def test_constant_column_error_policy_propagates(self, rng):
        values = rng.uniform(-2, 2, size=(6, 2))
        values[:, 0] = 1.0
        matrix = make_matrix(values, names=["c", "x"])
        config = SearchConfig(constant_column_policy=ConstantColumnPolicy.ERROR)
        with pytest.raises(ZeroVarianceError, match="c"):
            rank_database(matrix, matrix.ids[0], config)

    def test_standardized_weights_need_standardization(self, rng):
        matrix = random_matrix(rng)
        config = SearchConfig(
            standardize=False, weight_source=WeightSource.STANDARDIZED_VARIANCE
        )
        with pytest.raises(ValidationError):
            rank_database(matrix, matrix.ids[0], config)

    def test_undefined_reference_excluded_to_sidecar(self):
        # Middle row sits exactly at every column mean, so its z-vector is
        # all-zero; as the reference it cannot be scored against itself.
        values = np.array([[0.0, 2.0], [2.0, 4.0], [4.0, 6.0]])
        matrix = make_matrix(values, ids=["lo", "mid", "hi"])
        result = rank_database(matrix, "mid", SearchConfig(method=Method.TANIMOTO))
        assert result.undefined_ids == ("mid",)
        assert {h.molecule_id for h in result.hits} == {"lo", "hi"}
        assert all(h.score == 0.0 for h in result.hits)
        assert all(h.similarity_class is SimilarityClass.NONE for h in result.hits)


class TestCompare:
    def test_unit_weights_make_columns_equal(self, rng):
        matrix = random_matrix(rng)
        result = compare_weighted_unweighted(
            matrix, matrix.ids[0], SearchConfig(weight_source=WeightSource.UNIT)
        )
        for row in result.rows:
            assert row.score_weighted == pytest.approx(row.score_unweighted, abs=1e-12)

    def test_rows_ordered_by_weighted_score(self, rng):
        matrix = random_matrix(rng)
        result = compare_weighted_unweighted(matrix, matrix.ids[5])
        weighted = [r.score_weighted for r in result.rows]
        assert weighted == sorted(weighted, reverse=True)
        assert result.rows[0].molecule_id == matrix.ids[5]
        assert result.rows[0].class_weighted is SimilarityClass.ABSOLUTE

    def test_divergence_fixture_changes_rank_order(self, divergence_fixture_path):
        matrix = load_dataset(divergence_fixture_path)
        result = compare_weighted_unweighted(matrix, "d100")
        by_weighted = [r.molecule_id for r in result.rows]
        by_unweighted = [
            r.molecule_id
            for r in sorted(result.rows, key=lambda r: (-r.score_unweighted, r.molecule_id))
        ]
        assert by_weighted != by_unweighted

    def test_matches_oracle(self, divergence_fixture_path):
        matrix = load_dataset(divergence_fixture_path)
        result = compare_weighted_unweighted(matrix, "d100")
        rows = [[float(v) for v in row] for row in matrix.values]
        expected = oracle.compare_pipeline(matrix.ids, rows, "d100")
        assert [r.molecule_id for r in result.rows] == [t[0] for t in expected]
        for row, (_, su, sw) in zip(result.rows, expected):
            assert row.score_unweighted == pytest.approx(su, abs=1e-12)
            assert row.score_weighted == pytest.approx(sw, abs=1e-12)

    def test_euclidean_family_orders_ascending(self, rng):
        matrix = random_matrix(rng)
        result = compare_weighted_unweighted(
            matrix, matrix.ids[2], SearchConfig(method=Method.EUCLIDEAN)
        )
        weighted = [r.score_weighted for r in result.rows]
        assert weighted == sorted(weighted)
        assert all(r.class_weighted is None for r in result.rows)


class TestSerialization:
    def test_csv_shape_and_precision(self, rng):
        matrix = random_matrix(rng, m=4)
        result = rank_database(matrix, matrix.ids[0])
        lines = ranking_to_csv(result).splitlines()
        assert lines[0] == "rank,id,drug_class,score,similarity_class"
        first = lines[1].split(",")
        assert first[0] == "1" and first[3] == "1.0000" and first[4] == "ABSOLUTE"
        assert len(lines) == 5

    def test_payload_echoes_config_and_keeps_precision(self, rng):
        matrix = random_matrix(rng, m=5)
        result = rank_database(matrix, matrix.ids[1])
        payload = ranking_to_payload(result)
        assert payload["config"]["method"] == "weighted-tanimoto"
        assert payload["config"]["reference_id"] == matrix.ids[1]
        assert payload["hits"][0]["score"] == result.hits[0].score
        assert payload["hits"][0]["rank"] == 1
