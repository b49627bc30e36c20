"""Binary classifiers and evaluation machinery for the adversarial metrics.

Real rows are labelled 1 and synthetic rows 0; a classifier that can tell
them apart signals leakage. Two deterministic learners are built in: a
one-hidden-layer neural network trained by mini-batch gradient descent,
and gradient-boosted depth-limited regression trees with logistic loss
and exact greedy splits. Evaluation is rank-based AUC over stratified
k-fold plans, and recall on a stratified holdout split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator
from sklearn.model_selection import StratifiedKFold, train_test_split
from sklearn.utils.validation import check_array, check_X_y

from .errors import ConfigError


@dataclass(frozen=True)
class LabeledSet:
    """Feature matrix with 0/1 labels; label 1 marks real rows."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", np.asarray(self.features, dtype=np.float64))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int64))
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features and labels disagree on row count")


def build_labeled_set(y_enc, z_enc) -> LabeledSet:
    """Stack real rows (label 1) over synthetic rows (label 0)."""
    ym = y_enc.matrix if hasattr(y_enc, "matrix") else np.asarray(y_enc, dtype=np.float64)
    zm = z_enc.matrix if hasattr(z_enc, "matrix") else np.asarray(z_enc, dtype=np.float64)
    if ym.shape[1] != zm.shape[1]:
        raise ValueError(f"width mismatch: {ym.shape[1]} vs {zm.shape[1]}")
    if ym.shape[0] == 0 or zm.shape[0] == 0:
        raise ConfigError("both classes are required: real and synthetic must be nonempty")
    features = np.vstack([ym, zm])
    labels = np.concatenate([np.ones(ym.shape[0], dtype=np.int64), np.zeros(zm.shape[0], dtype=np.int64)])
    return LabeledSet(features, labels)


def _require_both_classes(y: np.ndarray) -> None:
    if len(np.unique(y)) < 2:
        raise ConfigError("training data contains a single class")


class MLPBinaryClassifier(BaseEstimator):
    """One hidden ReLU layer, logistic output, binary cross-entropy.

    Trained with plain mini-batch gradient descent; weights start from a
    seeded uniform(-0.1, 0.1), biases from zero, and the per-epoch
    shuffle is drawn from the same generator, so training is a pure
    function of (data, random_state).
    """

    def __init__(
        self,
        hidden_units: int = 64,
        learning_rate: float = 0.01,
        epochs: int = 200,
        batch_size: int = 32,
        random_state: int = 0,
    ):
        self.hidden_units = hidden_units
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.random_state = random_state

    def fit(self, x, y) -> "MLPBinaryClassifier":
        x, y = check_X_y(x, y, dtype=np.float64)
        _require_both_classes(y)
        n, width = x.shape
        h = self.hidden_units
        rng = np.random.default_rng(self.random_state)
        w1 = rng.uniform(-0.1, 0.1, size=(width, h))
        b1 = np.zeros(h)
        w2 = rng.uniform(-0.1, 0.1, size=(h, 1))
        b2 = np.zeros(1)
        target = y.reshape(-1, 1).astype(np.float64)
        lr = self.learning_rate
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                idx = order[start : start + self.batch_size]
                xb = x[idx]
                tb = target[idx]
                z1 = xb @ w1 + b1
                a1 = np.maximum(z1, 0.0)
                probs = expit(a1 @ w2 + b2)
                delta2 = (probs - tb) / len(idx)
                grad_w2 = a1.T @ delta2
                grad_b2 = delta2.sum(axis=0)
                delta1 = (delta2 @ w2.T) * (z1 > 0.0)
                grad_w1 = xb.T @ delta1
                grad_b1 = delta1.sum(axis=0)
                w2 -= lr * grad_w2
                b2 -= lr * grad_b2
                w1 -= lr * grad_w1
                b1 -= lr * grad_b1
        self.coefs_ = (w1, b1, w2, b2)
        self.n_features_in_ = width
        return self

    def predict_proba(self, x) -> np.ndarray:
        """Probability of the positive (real) class per row."""
        x = check_array(np.atleast_2d(np.asarray(x, dtype=np.float64)))
        w1, b1, w2, b2 = self.coefs_
        hidden = np.maximum(x @ w1 + b1, 0.0)
        return expit(hidden @ w2 + b2).ravel()

    def predict(self, x) -> np.ndarray:
        return (self.predict_proba(x) >= 0.5).astype(np.int64)

    def predict_probability(self, v) -> float:
        return float(self.predict_proba(np.atleast_2d(v))[0])


@dataclass
class _TreeNode:
    value: float = 0.0
    feature: int = -1
    threshold: float = 0.0
    left: "_TreeNode | None" = None
    right: "_TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


class GBTBinaryClassifier(BaseEstimator):
    """Gradient-boosted regression trees with logistic loss.

    Newton leaf values (-sum g / sum h), exact greedy best-gain splits
    evaluated on every distinct threshold, ties resolved to the lower
    feature index and then the lower threshold. No sampling anywhere, so
    training is deterministic regardless of seed.
    """

    _MIN_GAIN = 1e-12

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int = 3,
        learning_rate: float = 0.1,
        random_state: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.random_state = random_state

    def fit(self, x, y) -> "GBTBinaryClassifier":
        x, y = check_X_y(x, y, dtype=np.float64)
        _require_both_classes(y)
        yf = y.astype(np.float64)
        prior = float(yf.mean())
        self.base_score_ = float(np.log(prior / (1.0 - prior)))
        raw = np.full(x.shape[0], self.base_score_)
        self.trees_: list[_TreeNode] = []
        for _ in range(self.n_trees):
            p = expit(raw)
            grad = p - yf
            hess = p * (1.0 - p)
            root = self._build(x, grad, hess, depth=0)
            raw += self.learning_rate * self._node_predict(root, x)
            self.trees_.append(root)
        self.n_features_in_ = x.shape[1]
        return self

    def _leaf(self, grad: np.ndarray, hess: np.ndarray) -> _TreeNode:
        h = float(hess.sum())
        value = -float(grad.sum()) / h if h > 0.0 else 0.0
        return _TreeNode(value=value)

    def _build(self, x: np.ndarray, grad: np.ndarray, hess: np.ndarray, depth: int) -> _TreeNode:
        if depth >= self.max_depth or len(grad) < 2:
            return self._leaf(grad, hess)
        g_total = float(grad.sum())
        h_total = float(hess.sum())
        parent = g_total * g_total / h_total if h_total > 0.0 else 0.0
        best_gain = self._MIN_GAIN
        best_feature = -1
        best_threshold = 0.0
        for j in range(x.shape[1]):
            col = x[:, j]
            order = np.argsort(col, kind="stable")
            cs = col[order]
            gs = np.cumsum(grad[order])
            hs = np.cumsum(hess[order])
            cuts = np.nonzero(cs[1:] > cs[:-1])[0]  # split after position i
            if len(cuts) == 0:
                continue
            gl = gs[cuts]
            hl = hs[cuts]
            gr = g_total - gl
            hr = h_total - hl
            with np.errstate(divide="ignore", invalid="ignore"):
                term_l = np.where(hl > 0.0, gl * gl / hl, 0.0)
                term_r = np.where(hr > 0.0, gr * gr / hr, 0.0)
            gains = term_l + term_r - parent
            best_local = int(np.argmax(gains))  # first max: lowest threshold
            if gains[best_local] > best_gain:
                best_gain = float(gains[best_local])
                best_feature = j
                best_threshold = float(cs[cuts[best_local]])
        if best_feature < 0:
            return self._leaf(grad, hess)
        mask = x[:, best_feature] <= best_threshold
        return _TreeNode(
            feature=best_feature,
            threshold=best_threshold,
            left=self._build(x[mask], grad[mask], hess[mask], depth + 1),
            right=self._build(x[~mask], grad[~mask], hess[~mask], depth + 1),
        )

    def _node_predict(self, node: _TreeNode, x: np.ndarray) -> np.ndarray:
        if node.is_leaf:
            return np.full(x.shape[0], node.value)
        out = np.empty(x.shape[0])
        mask = x[:, node.feature] <= node.threshold
        out[mask] = self._node_predict(node.left, x[mask])
        out[~mask] = self._node_predict(node.right, x[~mask])
        return out

    def predict_proba(self, x) -> np.ndarray:
        """Probability of the positive (real) class per row."""
        x = check_array(np.atleast_2d(np.asarray(x, dtype=np.float64)))
        raw = np.full(x.shape[0], self.base_score_)
        for tree in self.trees_:
            raw += self.learning_rate * self._node_predict(tree, x)
        return expit(raw)

    def predict(self, x) -> np.ndarray:
        return (self.predict_proba(x) >= 0.5).astype(np.int64)

    def predict_probability(self, v) -> float:
        return float(self.predict_proba(np.atleast_2d(v))[0])


def train_mlp(train: LabeledSet, seed: int) -> MLPBinaryClassifier:
    """Fit the built-in neural network on a labeled set."""
    return MLPBinaryClassifier(random_state=seed).fit(train.features, train.labels)


def train_gbt(train: LabeledSet, seed: int) -> GBTBinaryClassifier:
    """Fit the built-in boosted-tree classifier on a labeled set."""
    return GBTBinaryClassifier(random_state=seed).fit(train.features, train.labels)


def auc(labels, scores) -> float:
    """Rank-based (Mann-Whitney) AUC; tied scores contribute one half."""
    labels = np.asarray(labels)
    scores = np.asarray(scores, dtype=np.float64)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ConfigError("AUC needs both classes present")
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    average_ranks = ends - (counts - 1) / 2.0
    ranks = average_ranks[inverse]
    rank_sum = float(ranks[pos].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified k-fold assignment; test folds partition the index set."""

    k: int
    seed: int
    folds: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


def make_fold_plan(labels, k: int, seed: int) -> FoldPlan:
    labels = np.asarray(labels)
    _require_both_classes(labels)
    counts = np.bincount(labels.astype(np.int64))
    smallest = int(counts[counts > 0].min())
    if k > smallest:
        raise ConfigError(f"kfold_k={k} exceeds the smallest class size {smallest}")
    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    folds = tuple(
        (tuple(int(i) for i in tr), tuple(int(i) for i in te))
        for tr, te in splitter.split(np.zeros((len(labels), 1)), labels)
    )
    return FoldPlan(k=k, seed=seed, folds=folds)


def _derive_uint32(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


def kfold_auc(ls: LabeledSet, k: int, learner, seed: int) -> float:
    """Mean test-fold AUC of ``learner`` over a stratified seeded plan.

    ``learner`` is a callable ``(LabeledSet, seed) -> fitted model`` with a
    ``predict_proba`` returning positive-class probabilities.
    """
    if k < 2:
        raise ConfigError(f"k must be at least 2, got {k}")
    states = _derive_uint32(seed, k + 1)
    plan = make_fold_plan(ls.labels, k, states[0])
    scores = []
    for fold_i, (train_idx, test_idx) in enumerate(plan.folds):
        tr = np.array(train_idx)
        te = np.array(test_idx)
        model = learner(LabeledSet(ls.features[tr], ls.labels[tr]), states[fold_i + 1])
        probs = np.asarray(model.predict_proba(ls.features[te])).ravel()
        scores.append(auc(ls.labels[te], probs))
    return float(np.mean(scores))


def holdout_recall(ls: LabeledSet, test_fraction: float, learner, seed: int) -> float:
    """Recall of the positive (real) class on a stratified holdout split.

    Predictions use threshold 0.5 on the predicted probability, with ties
    going to the positive class.
    """
    if not (0.0 < test_fraction < 1.0):
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    _require_both_classes(ls.labels)
    states = _derive_uint32(seed, 2)
    try:
        x_tr, x_te, y_tr, y_te = train_test_split(
            ls.features,
            ls.labels,
            test_size=test_fraction,
            stratify=ls.labels,
            random_state=states[0],
        )
    except ValueError as exc:
        raise ConfigError(f"holdout split failed: {exc}") from exc
    model = learner(LabeledSet(x_tr, y_tr), states[1])
    probs = np.asarray(model.predict_proba(x_te)).ravel()
    predicted_real = probs >= 0.5
    actual_real = y_te == 1
    tp = int(np.sum(predicted_real & actual_real))
    fn = int(np.sum(~predicted_real & actual_real))
    if tp + fn == 0:
        raise ConfigError("holdout test split contains no real records")
    return tp / (tp + fn)
