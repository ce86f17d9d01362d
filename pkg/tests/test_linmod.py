import random

import numpy as np
import pytest

from proptc.corpus import TechniqueLabel
from proptc.errors import DegenerateLabelsError, FormatError, ShapeError
from proptc.features import SparseMatrix
from proptc.linmod import (
    LinearModel,
    TrainConfig,
    decision_scores,
    load_model,
    predict,
    ridge_solve,
    save_model,
    train,
)


def _one_hot_pair():
    x = SparseMatrix.from_rows([[(0, 1.0)], [(1, 1.0)]], 2)
    return x, ["A", "B"]


def _separable_four_points():
    # Two clusters on separate axes; trivially separable.
    x = SparseMatrix.from_rows(
        [[(0, 1.0)], [(0, 2.0)], [(1, 1.0)], [(1, 2.0)]], 2
    )
    return x, ["A", "A", "B", "B"]


def test_orthogonal_one_hot_docs_classified():
    x, y = _one_hot_pair()
    model = train(x, y, TrainConfig())
    assert predict(model, x) == y


@pytest.mark.parametrize("algorithm", ["ridge", "sgd_hinge"])
def test_separable_training_accuracy(algorithm):
    x, y = _separable_four_points()
    config = TrainConfig(algorithm=algorithm, sgd_epochs=50, seed=11)
    model = train(x, y, config)
    assert predict(model, x) == y


def test_shape_error_on_row_mismatch():
    x = SparseMatrix.from_rows([[(0, 1.0)], [(1, 1.0)], [(0, 2.0)]], 2)
    with pytest.raises(ShapeError):
        train(x, ["A", "B"], TrainConfig())


def test_degenerate_labels():
    x, _ = _one_hot_pair()
    with pytest.raises(DegenerateLabelsError):
        train(x, ["A", "A"], TrainConfig())


def test_label_order_must_cover_labels():
    x, y = _one_hot_pair()
    with pytest.raises(ShapeError):
        train(x, y, TrainConfig(), label_order=("A",))


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(algorithm="perceptron")
    with pytest.raises(ValueError):
        TrainConfig(ridge_alpha=0.0)
    with pytest.raises(ValueError):
        TrainConfig(sgd_epochs=0)


def test_zero_vector_scores_equal_biases():
    x, y = _separable_four_points()
    model = train(x, y, TrainConfig())
    zero = SparseMatrix.from_rows([[]], 2)
    assert np.allclose(decision_scores(model, zero)[0], model.biases)


def test_scaling_row_scales_non_bias_part():
    model = LinearModel(
        weights=np.array([[1.0, -2.0], [0.5, 0.5]]), biases=np.zeros(2), labels=("A", "B")
    )
    x1 = SparseMatrix.from_rows([[(0, 1.0), (1, 3.0)]], 2)
    x2 = SparseMatrix.from_rows([[(0, 2.0), (1, 6.0)]], 2)
    s1 = decision_scores(model, x1)
    s2 = decision_scores(model, x2)
    assert np.allclose(s2, 2.0 * s1)
    assert np.argmax(s1) == np.argmax(s2)


def test_decision_scores_shape_error():
    x, y = _one_hot_pair()
    model = train(x, y, TrainConfig())
    with pytest.raises(ShapeError):
        decision_scores(model, SparseMatrix.from_rows([[(2, 1.0)]], 3))


def test_all_zero_model_predicts_first_label():
    model = LinearModel(weights=np.zeros((3, 2)), biases=np.zeros(3), labels=("A", "B", "C"))
    x = SparseMatrix.from_rows([[(0, 1.0)], [(1, 1.0)]], 2)
    assert predict(model, x) == ["A", "A"]


def test_single_row_predicts_single_label():
    x, y = _separable_four_points()
    model = train(x, y, TrainConfig())
    assert len(predict(model, SparseMatrix.from_rows([[(0, 1.0)]], 2))) == 1


@pytest.mark.parametrize("algorithm", ["ridge", "sgd_hinge"])
def test_determinism_across_runs(algorithm):
    rng = random.Random(4)
    rows = [
        [(c, rng.uniform(-1, 1) or 0.5) for c in sorted(rng.sample(range(6), 3))]
        for _ in range(24)
    ]
    x = SparseMatrix.from_rows(rows, 6)
    y = [rng.choice("ABC") for _ in range(24)]
    config = TrainConfig(algorithm=algorithm, seed=123)
    m1 = train(x, y, config)
    m2 = train(x, y, config)
    assert np.array_equal(m1.weights, m2.weights)
    assert np.array_equal(m1.biases, m2.biases)
    assert predict(m1, x) == predict(m2, x)


def _random_instance(rng, n, d):
    rows = []
    for _ in range(n):
        cols = sorted(rng.sample(range(d), rng.randint(1, d)))
        rows.append([(c, rng.uniform(-2, 2) or 1.0) for c in cols])
    x = SparseMatrix.from_rows(rows, d)
    t = np.array([rng.choice((-1.0, 1.0)) for _ in range(n)])
    return x, t


def test_ridge_residual_small():
    rng = random.Random(2024)
    for alpha in (0.5, 1.0, 10.0):
        x, t = _random_instance(rng, 12, 7)
        w = ridge_solve(x, t, alpha)
        dense = x.to_dense()
        residual = dense.T @ (dense @ w) + alpha * w - dense.T @ t
        assert np.max(np.abs(residual)) <= 1e-6


def test_ridge_weight_norm_shrinks_with_alpha():
    rng = random.Random(31)
    x, t = _random_instance(rng, 20, 8)
    norms = [np.linalg.norm(ridge_solve(x, t, alpha)) for alpha in (1.0, 10.0, 100.0)]
    assert norms[0] > norms[1] > norms[2]


def test_sgd_reaches_zero_hinge_loss_on_separable_data():
    x, y = _separable_four_points()
    config = TrainConfig(algorithm="sgd_hinge", sgd_epochs=200, sgd_eta0=1.0, seed=5)
    model = train(x, y, config)
    targets = {"A": np.array([1.0, 1.0, -1.0, -1.0]), "B": np.array([-1.0, -1.0, 1.0, 1.0])}
    dense = x.to_dense()
    for c, label in enumerate(model.labels):
        margins = targets[label] * (dense @ model.weights[c] + model.biases[c])
        assert np.all(1.0 - margins <= 1e-9), (label, margins)


def test_model_tsv_round_trip_exact(tmp_path):
    x = SparseMatrix.from_rows(
        [[(0, 0.3)], [(1, 1.7)], [(2, 0.9)], [(0, 1.1), (2, 0.2)]], 3
    )
    y = [TechniqueLabel.DOUBT, TechniqueLabel.SLOGANS, TechniqueLabel.DOUBT, TechniqueLabel.SLOGANS]
    model = train(x, y, TrainConfig())
    path = tmp_path / "model.tsv"
    save_model(model, path)
    loaded = load_model(path, label_parser=TechniqueLabel.parse)
    assert loaded.labels == model.labels
    assert np.array_equal(loaded.weights, model.weights)
    assert np.array_equal(loaded.biases, model.biases)


def test_load_model_rejects_garbage(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("nonsense\n", encoding="utf-8")
    with pytest.raises(FormatError):
        load_model(p)
