"""Baseline linear classifiers: closed-form-style ridge and hinge-loss SGD.

Both train one-vs-rest over a fixed label order.  Ridge solves the normal
equations (X'X + alpha*I) w = X't per label with conjugate gradient; the
linear-SVM variant is hinge-loss SGD with an inverse-time learning-rate
schedule.  Intercepts ride along as an appended constant feature excluded
from the L2 penalty.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateLabelsError, FormatError, ShapeError
from .features import SparseMatrix

_ALGORITHMS = ("ridge", "sgd_hinge")


@dataclass(frozen=True)
class TrainConfig:
    algorithm: str = "ridge"
    ridge_alpha: float = 1.0
    sgd_epochs: int = 5
    sgd_eta0: float = 0.5
    sgd_reg: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(f"algorithm must be one of {_ALGORITHMS}")
        if self.ridge_alpha <= 0 or self.sgd_eta0 <= 0 or self.sgd_reg <= 0:
            raise ValueError("ridge_alpha, sgd_eta0 and sgd_reg must be positive")
        if self.sgd_epochs < 1:
            raise ValueError("sgd_epochs must be >= 1")


@dataclass(frozen=True)
class LinearModel:
    """One weight row and bias per label, in a fixed label order."""

    weights: np.ndarray  # shape (n_labels, n_features)
    biases: np.ndarray  # shape (n_labels,)
    labels: tuple

    def __post_init__(self):
        if self.weights.shape[0] != len(self.labels) or len(self.biases) != len(self.labels):
            raise ShapeError("label count must match weight/bias rows")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.biases))):
            raise ShapeError("model parameters must be finite")


def conjugate_gradient(matvec, b: np.ndarray, tol: float = 1e-8, max_iter: int | None = None) -> np.ndarray:
    """Solve A x = b for SPD A given only the matvec, to ||r||_2 <= tol."""
    n = len(b)
    if max_iter is None:
        max_iter = 10 * n + 100
    x = np.zeros(n)
    # Restart on the true residual to shed accumulated recurrence drift.
    for _restart in range(4):
        r = b - matvec(x)
        if np.linalg.norm(r) <= tol:
            break
        p = r.copy()
        rs = float(r @ r)
        for _ in range(max_iter):
            if np.sqrt(rs) <= tol:
                break
            Ap = matvec(p)
            alpha = rs / float(p @ Ap)
            x += alpha * p
            r -= alpha * Ap
            rs_new = float(r @ r)
            p = r + (rs_new / rs) * p
            rs = rs_new
    return x


def ridge_solve(X: SparseMatrix, targets: np.ndarray, alpha: float,
                penalize_mask: np.ndarray | None = None, tol: float = 1e-8) -> np.ndarray:
    """Solve (X'X + alpha*diag(mask)) w = X't by conjugate gradient.

    ``penalize_mask`` selects which coordinates carry the L2 penalty
    (default: all of them).
    """
    if len(targets) != X.n_rows:
        raise ShapeError("targets length must equal row count")
    if penalize_mask is None:
        penalize_mask = np.ones(X.n_cols)

    def matvec(v):
        return X.rmatvec(X.matvec(v)) + alpha * (penalize_mask * v)

    return conjugate_gradient(matvec, X.rmatvec(targets), tol=tol)


def _one_vs_rest_targets(y, labels) -> np.ndarray:
    index = {label: i for i, label in enumerate(labels)}
    t = np.full((len(labels), len(y)), -1.0)
    for row, label in enumerate(y):
        t[index[label], row] = 1.0
    return t


def _sgd_hinge_binary(X: SparseMatrix, t: np.ndarray, config: TrainConfig, rng) -> tuple[np.ndarray, float]:
    """Binary hinge SGD; returns (feature weights, bias)."""
    w = np.zeros(X.n_cols)
    b = 0.0
    step = 0
    for _ in range(config.sgd_epochs):
        for i in rng.permutation(X.n_rows):
            eta = config.sgd_eta0 / (1.0 + config.sgd_reg * step)
            step += 1
            idx, val = X.row(i)
            margin = t[i] * (float(val @ w[idx]) + b)
            w *= 1.0 - eta * config.sgd_reg
            if margin < 1.0:
                w[idx] += eta * t[i] * val
                b += eta * t[i]
    return w, b


def train(X: SparseMatrix, y, config: TrainConfig, label_order=None) -> LinearModel:
    """Fit one-vs-rest linear classifiers.

    ``label_order`` fixes the label-to-row mapping; by default labels are
    sorted by their string form.  Same inputs and seed give bit-identical
    models.
    """
    y = list(y)
    if X.n_rows != len(y):
        raise ShapeError(f"X has {X.n_rows} rows but y has {len(y)} entries")
    if X.n_rows < 2:
        raise ShapeError("need at least 2 training rows")
    distinct = set(y)
    if len(distinct) < 2:
        raise DegenerateLabelsError("training data must contain >= 2 distinct labels")
    if label_order is None:
        labels = tuple(sorted(distinct, key=str))
    else:
        labels = tuple(label_order)
        unknown = distinct - set(labels)
        if unknown:
            raise ShapeError(f"labels missing from label_order: {sorted(map(str, unknown))}")

    Xb = X.with_bias_column()
    targets = _one_vs_rest_targets(y, labels)
    weights = np.zeros((len(labels), X.n_cols))
    biases = np.zeros(len(labels))

    if config.algorithm == "ridge":
        mask = np.ones(Xb.n_cols)
        mask[-1] = 0.0  # intercept is not shrunk
        for c in range(len(labels)):
            w_full = ridge_solve(Xb, targets[c], config.ridge_alpha, penalize_mask=mask)
            weights[c] = w_full[:-1]
            biases[c] = w_full[-1]
    else:
        for c in range(len(labels)):
            rng = np.random.default_rng([config.seed, c])
            weights[c], biases[c] = _sgd_hinge_binary(X, targets[c], config, rng)

    return LinearModel(weights=weights, biases=biases, labels=labels)


def decision_scores(model: LinearModel, X: SparseMatrix) -> np.ndarray:
    """Per-row, per-label scores: X W' + b."""
    if X.n_cols != model.weights.shape[1]:
        raise ShapeError(
            f"X has {X.n_cols} columns but model expects {model.weights.shape[1]}"
        )
    scores = np.empty((X.n_rows, len(model.labels)))
    for c in range(len(model.labels)):
        scores[:, c] = X.matvec(model.weights[c])
    return scores + model.biases


def predict(model: LinearModel, X: SparseMatrix) -> list:
    """Argmax label per row; ties go to the lowest label-order index."""
    scores = decision_scores(model, X)
    return [model.labels[i] for i in np.argmax(scores, axis=1)]


def save_model(model: LinearModel, path) -> None:
    """Writable TSV dump: magic/version, label order, then per-label rows."""
    lines = [
        "#proptc-model\t1",
        "labels\t" + "\t".join(str(l) for l in model.labels),
        f"n_features\t{model.weights.shape[1]}",
    ]
    for c, label in enumerate(model.labels):
        row = [str(label), format(model.biases[c], ".17g")]
        row.extend(format(v, ".17g") for v in model.weights[c])
        lines.append("\t".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path, label_parser=None) -> LinearModel:
    """Inverse of save_model; ``label_parser`` maps label strings back."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "#proptc-model\t1":
        raise FormatError(f"{path}: not a v1 model dump")
    labels_row = lines[1].split("\t")
    if labels_row[0] != "labels":
        raise FormatError(f"{path}: missing label order header")
    label_strs = labels_row[1:]
    n_features = int(lines[2].split("\t")[1])
    labels = tuple(label_parser(s) if label_parser else s for s in label_strs)
    weights = np.zeros((len(labels), n_features))
    biases = np.zeros(len(labels))
    if len(lines) != 3 + len(labels):
        raise FormatError(f"{path}: expected {len(labels)} weight rows")
    for c, line in enumerate(lines[3:]):
        cols = line.split("\t")
        if len(cols) != 2 + n_features or cols[0] != label_strs[c]:
            raise FormatError(f"{path}: bad weight row for label {label_strs[c]!r}")
        biases[c] = float(cols[1])
        weights[c] = [float(v) for v in cols[2:]]
    return LinearModel(weights=weights, biases=biases, labels=labels)
