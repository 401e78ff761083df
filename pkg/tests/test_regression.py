import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dataset_from_pairs
from helpers import make_embedding, ridge_oracle, synthetic_words
from psynorms.errors import DataError, NumericalError
from psynorms.features import EmbeddingModel, FeatureResources, FeatureVector, ViewKind
from psynorms.norms import SEVEN_POINT, PropertyKind
from psynorms.regression import (
    DesignMatrix,
    MultiViewModel,
    fit_standardizer,
    load_model,
    predict_multiview,
    predict_ridge,
    save_model,
    train_multiview,
    train_ridge,
)


def matrix(entries, targets):
    return DesignMatrix(entries=np.asarray(entries, dtype=float),
                        targets=np.asarray(targets, dtype=float))


class TestStandardizer:
    def test_constant_column_gets_unit_std(self):
        s = fit_standardizer(matrix([[1.0], [1.0], [1.0]], [0, 0, 0]))
        assert s.means.tolist() == [1.0]
        assert s.stds.tolist() == [1.0]

    def test_population_std_zero_two(self):
        s = fit_standardizer(matrix([[0.0], [2.0]], [0, 0]))
        assert s.means.tolist() == [1.0]
        assert s.stds.tolist() == [1.0]

    def test_population_std_symmetric(self):
        s = fit_standardizer(matrix([[-3.0], [3.0]], [0, 0]))
        assert s.means.tolist() == [0.0]
        assert s.stds.tolist() == [3.0]


class TestTrainRidge:
    def test_constant_targets_give_zero_weights(self, rng):
        X = matrix(rng.normal(size=(10, 4)), np.full(10, 4.2))
        model = train_ridge(X, 1.0, ViewKind.LEXICAL)
        assert np.all(np.abs(model.weights) < 1e-10)
        assert model.intercept == pytest.approx(4.2)

    def test_exact_line_interpolated(self):
        x = np.arange(1.0, 6.0)
        X = matrix(x[:, None], 2 * x + 3)
        model = train_ridge(X, 0.0, ViewKind.LEXICAL)
        for xi, yi in zip(x, 2 * x + 3):
            fv = FeatureVector(view=ViewKind.LEXICAL, values=np.array([xi]))
            assert predict_ridge(model, fv) == pytest.approx(yi, abs=1e-10)
        query = FeatureVector(view=ViewKind.LEXICAL, values=np.array([10.0]))
        assert predict_ridge(model, query) == pytest.approx(23.0, abs=1e-8)

    def test_matches_normal_equations_oracle(self, rng):
        X = rng.normal(size=(50, 10))
        y = rng.normal(size=50)
        model = train_ridge(matrix(X, y), 0.5, ViewKind.LEXICAL)
        expected_w, expected_b = ridge_oracle(X, y, 0.5)
        assert np.allclose(model.weights, expected_w, rtol=1e-8, atol=1e-10)
        assert model.intercept == pytest.approx(expected_b)

    def test_singular_unregularized_system_rejected(self):
        # duplicated column makes the Gram matrix rank deficient
        column = np.array([1.0, 2.0, 3.0, 4.0])
        X = matrix(np.column_stack([column, column]), column)
        with pytest.raises(NumericalError, match="rank-deficient"):
            train_ridge(X, 0.0, ViewKind.LEXICAL)

    def test_non_finite_rejected(self):
        with pytest.raises(NumericalError):
            matrix([[1.0], [np.nan]], [0.0, 1.0])

    def test_negative_lambda_rejected(self, rng):
        X = matrix(rng.normal(size=(5, 2)), rng.normal(size=5))
        with pytest.raises(DataError):
            train_ridge(X, -1.0, ViewKind.LEXICAL)

    def test_single_row_rejected(self):
        with pytest.raises(DataError):
            matrix([[1.0]], [1.0])

    def test_shrinkage_is_monotone(self, rng):
        X = rng.normal(size=(40, 8))
        y = rng.normal(size=40)
        norms = [
            float(np.linalg.norm(train_ridge(matrix(X, y), lam, ViewKind.LEXICAL).weights))
            for lam in (0.01, 0.1, 1.0, 10.0, 100.0)
        ]
        for smaller, larger in zip(norms[1:], norms):
            assert smaller <= larger + 1e-12

    def test_huge_lambda_collapses_to_mean(self, rng):
        X = rng.normal(size=(30, 5))
        y = rng.normal(size=30) + 4.0
        model = train_ridge(matrix(X, y), 1e12, ViewKind.LEXICAL)
        assert np.all(np.abs(model.weights) < 1e-6)
        for row in X:
            fv = FeatureVector(view=ViewKind.LEXICAL, values=row)
            assert predict_ridge(model, fv) == pytest.approx(y.mean(), abs=1e-5)

    def test_column_scaling_absorbed(self, rng):
        X = rng.normal(size=(30, 5))
        y = rng.normal(size=30)
        scaled = X.copy()
        scaled[:, 2] *= 1000.0
        base = train_ridge(matrix(X, y), 1.0, ViewKind.LEXICAL)
        other = train_ridge(matrix(scaled, y), 1.0, ViewKind.LEXICAL)
        for row, row_scaled in zip(X, scaled):
            a = predict_ridge(base, FeatureVector(view=ViewKind.LEXICAL, values=row))
            b = predict_ridge(other, FeatureVector(view=ViewKind.LEXICAL, values=row_scaled))
            assert a == pytest.approx(b, abs=1e-6)

    def test_row_permutation_changes_nothing(self, rng):
        X = rng.normal(size=(25, 4))
        y = rng.normal(size=25)
        perm = rng.permutation(25)
        base = train_ridge(matrix(X, y), 0.5, ViewKind.LEXICAL)
        shuffled = train_ridge(matrix(X[perm], y[perm]), 0.5, ViewKind.LEXICAL)
        for row in X:
            fv = FeatureVector(view=ViewKind.LEXICAL, values=row)
            assert predict_ridge(base, fv) == pytest.approx(
                predict_ridge(shuffled, fv), abs=1e-8
            )

    @settings(max_examples=30, deadline=None)
    @given(
        n=st.integers(min_value=5, max_value=40),
        d=st.integers(min_value=1, max_value=8),
        lam=st.sampled_from([0.01, 0.5, 10.0]),
        seed=st.integers(min_value=0, max_value=10_000),
    )
    def test_oracle_equivalence_random(self, n, d, lam, seed):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(n, d))
        y = rng.normal(size=n)
        model = train_ridge(matrix(X, y), lam, ViewKind.LEXICAL)
        expected_w, _ = ridge_oracle(X, y, lam)
        scale = max(1.0, float(np.max(np.abs(expected_w))))
        assert np.allclose(model.weights, expected_w, atol=1e-8 * scale)


class TestPredictRidge:
    def test_zero_weights_return_intercept(self, rng):
        X = matrix(rng.normal(size=(5, 3)), np.full(5, 4.2))
        model = train_ridge(X, 1.0, ViewKind.LEXICAL)
        fv = FeatureVector(view=ViewKind.LEXICAL, values=rng.normal(size=3))
        assert predict_ridge(model, fv) == pytest.approx(4.2, abs=1e-10)

    def test_view_mismatch_rejected(self, rng):
        X = matrix(rng.normal(size=(5, 3)), rng.normal(size=5))
        model = train_ridge(X, 1.0, ViewKind.EMBEDDING_A)
        fv = FeatureVector(view=ViewKind.EMBEDDING_B, values=np.zeros(3))
        with pytest.raises(DataError, match="view mismatch"):
            predict_ridge(model, fv)

    def test_dimension_mismatch_rejected(self, rng):
        X = matrix(rng.normal(size=(5, 3)), rng.normal(size=5))
        model = train_ridge(X, 1.0, ViewKind.LEXICAL)
        fv = FeatureVector(view=ViewKind.LEXICAL, values=np.zeros(4))
        with pytest.raises(DataError, match="dimension mismatch"):
            predict_ridge(model, fv)


def toy_training_setup(rng, n=30, dim=4, vocab_fraction=1.0):
    words = synthetic_words(n)
    covered = words[: int(n * vocab_fraction)]
    model_a = make_embedding(covered, dim, rng, ViewKind.EMBEDDING_A)
    model_b = make_embedding(covered, dim, rng, ViewKind.EMBEDDING_B)
    resources = FeatureResources(
        embeddings={ViewKind.EMBEDDING_A: model_a, ViewKind.EMBEDDING_B: model_b}
    )
    ratings = rng.uniform(1, 7, size=n)
    dataset = dataset_from_pairs(list(zip(words, ratings)))
    return dataset, resources


class TestMultiView:
    def test_single_view(self, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.CONCRETENESS, dataset, (ViewKind.LEXICAL,), resources
        )
        assert len(model.submodels) == 1
        assert model.submodels[0].view is ViewKind.LEXICAL

    def test_three_views(self, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.SUBJECTIVE_FREQUENCY,
            dataset,
            (ViewKind.LEXICAL, ViewKind.EMBEDDING_A, ViewKind.EMBEDDING_B),
            resources,
        )
        assert [m.view for m in model.submodels] == [
            ViewKind.LEXICAL,
            ViewKind.EMBEDDING_A,
            ViewKind.EMBEDDING_B,
        ]

    def test_oov_rows_excluded(self, rng):
        dataset, resources = toy_training_setup(rng, n=30, vocab_fraction=0.5)
        model = train_multiview(
            PropertyKind.CONCRETENESS,
            dataset,
            (ViewKind.LEXICAL, ViewKind.EMBEDDING_A),
            resources,
        )
        by_view = {m.view: m for m in model.submodels}
        assert by_view[ViewKind.LEXICAL].rows == 30
        assert by_view[ViewKind.EMBEDDING_A].rows == 15

    def test_all_words_oov_rejected(self, rng):
        dataset, _ = toy_training_setup(rng)
        empty = EmbeddingModel(dimension=3, vectors={}, kind=ViewKind.EMBEDDING_A)
        resources = FeatureResources(embeddings={ViewKind.EMBEDDING_A: empty})
        with pytest.raises(DataError, match="fewer than 2 usable"):
            train_multiview(
                PropertyKind.CONCRETENESS, dataset, (ViewKind.EMBEDDING_A,), resources
            )

    def test_fusion_is_arithmetic_mean(self, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.CONCRETENESS,
            dataset,
            (ViewKind.LEXICAL, ViewKind.EMBEDDING_A, ViewKind.EMBEDDING_B),
            resources,
        )
        for word in dataset.words()[:10]:
            parts = [
                predict_ridge(
                    sub,
                    FeatureVector(view=sub.view, values=resources.vector(word, sub.view)),
                )
                for sub in model.submodels
            ]
            fused = predict_multiview(model, word, resources)
            assert abs(fused - sum(parts) / len(parts)) <= 1e-12

    def test_lexical_fallback_for_oov_word(self, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.CONCRETENESS,
            dataset,
            (ViewKind.LEXICAL, ViewKind.EMBEDDING_A),
            resources,
        )
        lexical_only = predict_ridge(
            model.submodels[0],
            FeatureVector(
                view=ViewKind.LEXICAL, values=resources.vector("inédita", ViewKind.LEXICAL)
            ),
        )
        assert predict_multiview(model, "inédita", resources) == pytest.approx(lexical_only)

    def test_all_views_absent_rejected(self, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.CONCRETENESS, dataset, (ViewKind.EMBEDDING_A,), resources
        )
        with pytest.raises(DataError, match="out of vocabulary"):
            predict_multiview(model, "inédita", resources)

    def test_clamping_only_on_request(self, rng):
        dataset, resources = toy_training_setup(rng)
        base = train_multiview(
            PropertyKind.CONCRETENESS, dataset, (ViewKind.LEXICAL,), resources
        )
        # force predictions outside the scale with a doctored intercept
        doctored = MultiViewModel(
            property=base.property,
            scale=base.scale,
            submodels=tuple(
                type(sub)(
                    weights=sub.weights * 0,
                    intercept=9.5,
                    lam=sub.lam,
                    standardizer=sub.standardizer,
                    view=sub.view,
                    rows=sub.rows,
                )
                for sub in base.submodels
            ),
        )
        word = dataset.words()[0]
        assert predict_multiview(doctored, word, resources) == pytest.approx(9.5)
        assert predict_multiview(doctored, word, resources, clamp=True) == 7.0

    def test_mean_then_clamp(self):
        # mean of 2, 4, 9 is 5: inside the scale, clamp inactive
        assert min(7.0, max(1.0, (2.0 + 4.0 + 9.0) / 3)) == 5.0
        # mean of 8, 9 is 8.5: clamped to the scale top
        assert min(7.0, max(1.0, (8.0 + 9.0) / 2)) == 7.0

    def test_duplicate_views_rejected(self, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.CONCRETENESS, dataset, (ViewKind.LEXICAL,), resources
        )
        with pytest.raises(DataError):
            MultiViewModel(
                property=model.property,
                scale=model.scale,
                submodels=model.submodels + model.submodels,
            )


class TestPersistence:
    def test_round_trip_preserves_predictions(self, tmp_path, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.IMAGEABILITY,
            dataset,
            (ViewKind.LEXICAL, ViewKind.EMBEDDING_A),
            resources,
            lam=0.7,
        )
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.property is PropertyKind.IMAGEABILITY
        assert loaded.scale == SEVEN_POINT
        for word in dataset.words():
            assert predict_multiview(loaded, word, resources) == pytest.approx(
                predict_multiview(model, word, resources), abs=1e-15
            )

    def test_archive_is_documented_json(self, tmp_path, rng):
        dataset, resources = toy_training_setup(rng)
        model = train_multiview(
            PropertyKind.CONCRETENESS, dataset, (ViewKind.LEXICAL,), resources
        )
        path = tmp_path / "model.json"
        save_model(model, path)
        document = json.loads(path.read_text())
        assert document["format"] == "psynorms-model-v1"
        assert document["property"] == "concreteness"
        assert document["scale"] == {"min": 1.0, "max": 7.0}
        (view,) = document["views"]
        assert view["view"] == "lexical"
        assert len(view["weights"]) == len(view["means"]) == len(view["stds"]) == 13

    def test_wrong_format_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"format": "other"}', encoding="utf-8")
        with pytest.raises(DataError, match="archive"):
            load_model(path)
