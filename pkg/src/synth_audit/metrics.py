"""The seventeen privacy metrics over a (real, synthetic) dataset pair.

Every metric is a pure function ``(Y, Z, config) -> MetricResult`` built
from the same three-step pipeline: capture a match structure between the
two datasets, adjudicate each match, aggregate into a score. Scores carry
both the raw value and a normalized value in [0, 1] plus a direction tag
saying how to read the scale (for most metrics 1 means no privacy).

Distance-based metrics operate on the geometry module's encoding with raw
numeric values; the attribute-level metrics (zcap, gcap, hitting_rate)
match on raw attribute values directly; the classifier metrics train on
the min-max scaled encoding. Three metrics (nndr, dcr, hidden_rate)
measure in the fitted linear projection of the joint cloud.
"""

from __future__ import annotations

import os
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit

from .classify import build_labeled_set, holdout_recall, kfold_auc, train_gbt, train_mlp
from .config import MetricConfig, validate_generation_map
from .dataset import AttrKind, Dataset, project, value_stats
from .errors import (
    ConfigError,
    DegenerateEntropyError,
    EmptyDatasetError,
    InsufficientRealRecordsError,
    MissingGenerationMapError,
    SchemaMismatchError,
    SynthAuditError,
)
from .geometry import DatasetEncoder, fit_projection, pairwise_distances
from .result import Direction, MetricResult

CANONICAL_ORDER: tuple[str, ...] = (
    "zcap",
    "gcap",
    "air",
    "crp",
    "cvp",
    "dvp",
    "dmlp",
    "auth",
    "identifiability",
    "nsnd",
    "nndr",
    "dcr",
    "mdcr",
    "nnaa",
    "mir",
    "hidden_rate",
    "hitting_rate",
)

METRIC_INDEX: dict[str, int] = {mid: i for i, mid in enumerate(CANONICAL_ORDER)}

_ANOMALOUS = frozenset({"dmlp", "nsnd", "mdcr"})


def _direction(metric_id: str) -> Direction:
    if metric_id in _ANOMALOUS:
        return Direction.AS_WRITTEN_ANOMALOUS
    return Direction.ONE_MEANS_NO_PRIVACY


# ---------------------------------------------------------------------------
# match structures (capture -> adjudicate -> aggregate)


class MatchKind(str, Enum):
    PAIR_GUESS = "pair_guess"
    PAIR_CORRECT = "pair_correct"
    TRIPLE_REAL_SYNTH = "triple_real_synth"


@dataclass(frozen=True)
class MatchSet:
    """Record-index pairs linking real to synthetic rows, with the
    distance that produced each link cached alongside."""

    kind: MatchKind
    entries: tuple[tuple[int, int], ...]
    distances: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.distances) != len(self.entries):
            raise ValueError("one cached distance per entry is required")

    def __len__(self) -> int:
        return len(self.entries)

    def real_counts(self, n_real: int) -> np.ndarray:
        idx = np.fromiter((i for i, _ in self.entries), dtype=np.int64, count=len(self.entries))
        return np.bincount(idx, minlength=n_real)


def _key_columns(d: Dataset, key_idx: list[int]) -> np.ndarray:
    return np.array([[r[j] for j in key_idx] for r in d.rows], dtype=object)


def _key_hamming(y: Dataset, z: Dataset, cfg: MetricConfig) -> np.ndarray:
    """Pairwise count of unequal key attributes (real rows by synthetic)."""
    key_idx = [y.schema.index_of(k) for k in cfg.key_attributes]
    yk = _key_columns(y, key_idx)
    zk = _key_columns(z, key_idx)
    ham = np.zeros((len(y), len(z)), dtype=np.int64)
    for c in range(len(key_idx)):
        ham += yk[:, c][:, None] != zk[:, c][None, :]
    return ham


def _sensitive_equal(y: Dataset, z: Dataset, cfg: MetricConfig) -> np.ndarray:
    si = y.schema.index_of(cfg.sensitive_attribute)
    ys = np.array([r[si] for r in y.rows], dtype=object)
    zs = np.array([r[si] for r in z.rows], dtype=object)
    return ys[:, None] == zs[None, :]


def _pair_sets(ham: np.ndarray, correct: np.ndarray, guess_mask: np.ndarray) -> tuple[MatchSet, MatchSet]:
    gi, gj = np.nonzero(guess_mask)
    guesses = MatchSet(
        kind=MatchKind.PAIR_GUESS,
        entries=tuple(zip(gi.tolist(), gj.tolist())),
        distances=tuple(float(h) for h in ham[gi, gj]),
    )
    keep = correct[gi, gj]
    hits = MatchSet(
        kind=MatchKind.PAIR_CORRECT,
        entries=tuple(zip(gi[keep].tolist(), gj[keep].tolist())),
        distances=tuple(float(h) for h in ham[gi[keep], gj[keep]]),
    )
    return guesses, hits


def exact_key_matches(y: Dataset, z: Dataset, cfg: MetricConfig) -> tuple[MatchSet, MatchSet]:
    """Guesses = synthetic rows agreeing on every key attribute; correct
    subset additionally agrees on the sensitive attribute."""
    ham = _key_hamming(y, z, cfg)
    return _pair_sets(ham, _sensitive_equal(y, z, cfg), ham == 0)


def nearest_key_matches(y: Dataset, z: Dataset, cfg: MetricConfig) -> tuple[MatchSet, MatchSet]:
    """Guesses = the full set of key-Hamming minimizers per real record."""
    ham = _key_hamming(y, z, cfg)
    return _pair_sets(ham, _sensitive_equal(y, z, cfg), ham == ham.min(axis=1, keepdims=True))


def nearest_encoded_matches(y: Dataset, z: Dataset, cfg: MetricConfig) -> MatchSet:
    """Each real record with its Euclidean nearest synthetic record over
    the encoded key attributes (lowest index on ties)."""
    keys = tuple(cfg.key_attributes)
    ye, ze = _encode_pair(project(y, keys), project(z, keys))
    d = pairwise_distances(ye, ze)
    nn = np.argmin(d, axis=1)
    rows = np.arange(len(y))
    return MatchSet(
        kind=MatchKind.TRIPLE_REAL_SYNTH,
        entries=tuple(zip(rows.tolist(), nn.tolist())),
        distances=tuple(float(v) for v in d[rows, nn]),
    )


# ---------------------------------------------------------------------------
# shared helpers


def _check_pair(y: Dataset, z: Dataset) -> None:
    if y.schema != z.schema:
        raise SchemaMismatchError("real and synthetic datasets must share one schema")
    if len(y) == 0 or len(z) == 0:
        raise EmptyDatasetError("both datasets must contain at least one record")


def _encode_pair(y: Dataset, z: Dataset, scale: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Encode both datasets with one shared encoder fitted on the real data
    (categories drawn from the union so widths agree)."""
    enc = DatasetEncoder(scale_numeric=scale).fit(y, z if z is not y else None)
    return enc.transform(y).matrix, enc.transform(z).matrix


def _result(
    metric_id: str,
    raw: float,
    normalized: float,
    cfg: MetricConfig,
    started: float,
    flags: Iterable[str] = (),
) -> MetricResult:
    return MetricResult(
        metric_id=metric_id,
        raw_score=float(raw),
        normalized_score=float(normalized),
        direction=_direction(metric_id),
        config=cfg.to_dict(),
        elapsed_seconds=time.perf_counter() - started,
        flags=tuple(flags),
    )


def _metric_rng(cfg: MetricConfig, metric_id: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, METRIC_INDEX[metric_id]])


def _metric_seed(cfg: MetricConfig, metric_id: str) -> int:
    return int(np.random.SeedSequence([cfg.seed, METRIC_INDEX[metric_id]]).generate_state(1)[0])


def _nearest_cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-row distance to the nearest row of the other matrix."""
    return pairwise_distances(a, b).min(axis=1)


def _nearest_within(m: np.ndarray) -> np.ndarray:
    """Per-row leave-one-out nearest-neighbour distance inside one matrix."""
    d = pairwise_distances(m, m)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def _projected_pair(y: Dataset, z: Dataset, cfg: MetricConfig) -> tuple[np.ndarray, np.ndarray, list[str]]:
    ye, ze = _encode_pair(y, z)
    model = fit_projection(ye, ze, k=cfg.projection_k)
    flags = [] if model.identity_ else [f"projected_to_{model.k_}"]
    return model.transform(ye), model.transform(ze), flags


# ---------------------------------------------------------------------------
# attribute-disclosure metrics


def zcap(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Sensitive-value hit rate over exact key matches.

    Per real record: the synthetic rows agreeing on all key attributes are
    the guesses; the record scores (correct guesses)/max(1, guesses).
    """
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    cfg.require_roles("zcap", y.schema)
    started = time.perf_counter()
    guesses, hits = exact_key_matches(y, z, cfg)
    g = guesses.real_counts(len(y))
    c = hits.real_counts(len(y))
    score = float(np.mean(c / np.maximum(1, g)))
    return _result("zcap", score, score, cfg, started)


def gcap(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Sensitive-value hit rate over key-Hamming-nearest matches.

    The guess set per real record is every synthetic row attaining the
    minimal key Hamming distance; the record scores correct/|set|.
    """
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    cfg.require_roles("gcap", y.schema)
    started = time.perf_counter()
    guesses, hits = nearest_key_matches(y, z, cfg)
    g = guesses.real_counts(len(y))
    c = hits.real_counts(len(y))
    score = float(np.mean(c / g))
    return _result("gcap", score, score, cfg, started)


def _sensitive_match_matrix(y: Dataset, z: Dataset, cfg: MetricConfig) -> np.ndarray:
    si = y.schema.index_of(cfg.sensitive_attribute)
    if y.schema.attributes[si].kind is AttrKind.NUMERICAL:
        yv = np.array([r[si] for r in y.rows], dtype=np.float64)
        zv = np.array([r[si] for r in z.rows], dtype=np.float64)
        return np.abs(yv[:, None] - zv[None, :]) <= cfg.air_relative_band * np.abs(zv[None, :])
    return _sensitive_equal(y, z, cfg)


def air(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Entropy-weighted F1 of nearest-neighbour sensitive-value inference.

    Each real record is weighted by -P(row) ln P(row); the adversary reads
    the sensitive value off the record's encoded-key nearest synthetic
    neighbour. Numeric sensitive values match within a relative band. By
    default the F1 term is per record (1 when the neighbour matches, else
    0); ``air_global_f1`` pools TP/FP/FN over all records instead.
    """
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    cfg.require_roles("air", y.schema)
    stats = value_stats(y)
    if stats.entropy == 0.0:
        raise DegenerateEntropyError("all real records are identical; record weights are undefined")
    started = time.perf_counter()
    triples = nearest_encoded_matches(y, z, cfg)
    nn = np.fromiter((j for _, j in triples.entries), dtype=np.int64, count=len(triples))
    match = _sensitive_match_matrix(y, z, cfg)
    tp = match[np.arange(len(y)), nn]
    p = np.array(stats.record_probabilities, dtype=np.float64)
    terms = -p * np.log(p)
    if cfg.air_global_f1:
        fn_total = int(match.sum(axis=1)[~tp].sum())
        tp_total = int(tp.sum())
        fp_total = len(y) - tp_total
        denom = 2 * tp_total + fp_total + fn_total
        f1 = 2.0 * tp_total / denom if denom > 0 else 0.0
        raw = float(np.sum(terms) * f1 / stats.entropy)
    else:
        raw = float(np.sum(terms * tp.astype(np.float64)) / stats.entropy)
    flags = ["clamped"] if raw > 1.0 else []
    return _result("air", raw, min(1.0, raw), cfg, started, flags)


def crp(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Fraction of synthetic rows replicating some real row exactly,
    with an epsilon-stabilized denominator |Y| + 1e-8."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    real = set(y.rows)
    copies = sum(1 for row in z.rows if row in real)
    raw = copies / (len(y) + cfg.epsilon)
    flags = ["clamped"] if raw > 1.0 else []
    return _result("crp", raw, min(1.0, raw), cfg, started, flags)


# ---------------------------------------------------------------------------
# nearest-neighbour distance metrics (raw encoded space)


def _normalized_nn(y: Dataset, z: Dataset) -> tuple[np.ndarray | None, int]:
    """Per-real-record NN distance normalized by the cross-pair extrema;
    None when the extrema coincide (degenerate range)."""
    ye, ze = _encode_pair(y, z)
    d = pairwise_distances(ye, ze)
    d_min = float(d.min())
    d_max = float(d.max())
    if d_max == d_min:
        return None, len(y)
    return (d.min(axis=1) - d_min) / (d_max - d_min), len(y)


def cvp(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Share of real records with a synthetic row within the closeness
    threshold of the normalized nearest-neighbour distance."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    norm, _ = _normalized_nn(y, z)
    if norm is None:
        return _result("cvp", 1.0, 1.0, cfg, started, ["degenerate_distance_range"])
    score = float(np.mean(norm <= cfg.cvp_threshold))
    return _result("cvp", score, score, cfg, started)


def dvp(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """One minus the share of real records whose nearest synthetic row is
    remote (normalized distance at or beyond the distance threshold)."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    norm, _ = _normalized_nn(y, z)
    if norm is None:
        return _result("dvp", 0.0, 1.0, cfg, started, ["degenerate_distance_range"])
    far = float(np.mean(norm >= cfg.dvp_threshold))
    return _result("dvp", far, 1.0 - far, cfg, started)


def nsnd(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Mean normalized distance from each real record to its nearest
    synthetic row; 0 on identical data, so the scale reads inverted."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    norm, _ = _normalized_nn(y, z)
    if norm is None:
        return _result("nsnd", 0.0, 0.0, cfg, started, ["degenerate_distance_range"])
    score = float(np.mean(norm))
    return _result("nsnd", score, score, cfg, started)


def auth(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """One minus the fraction of real records strictly nearer to another
    real record than to any synthetic row."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    if len(y) < 2:
        raise InsufficientRealRecordsError("a real neighbour needs at least two real records")
    started = time.perf_counter()
    ye, ze = _encode_pair(y, z)
    closer_real = float(np.mean(_nearest_within(ye) < _nearest_cross(ye, ze)))
    return _result("auth", closer_real, 1.0 - closer_real, cfg, started)


def identifiability(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Share of real records whose nearest record in entropy-weighted
    space is synthetic rather than real.

    Each encoded column value is divided by (w + eps) with w = 1/(H + eps)
    and H the value's -P ln P under the real data's column frequencies,
    so rare values dominate the geometry. ``id_per_attribute_weights``
    switches to one weight per column from the column's full entropy.
    """
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    if len(y) < 2:
        raise InsufficientRealRecordsError("a real neighbour needs at least two real records")
    started = time.perf_counter()
    ye, ze = _encode_pair(y, z)
    n = ye.shape[0]
    eps = cfg.epsilon
    wy = np.empty_like(ye)
    wz = np.empty_like(ze)
    for c in range(ye.shape[1]):
        yc = ye[:, c]
        zc = ze[:, c]
        uniq, inverse, counts = np.unique(yc, return_inverse=True, return_counts=True)
        prob = counts / n
        h_uniq = -prob * np.log(prob)
        if cfg.id_per_attribute_weights:
            w = 1.0 / (float(np.sum(h_uniq)) + eps)
            wy[:, c] = yc / (w + eps)
            wz[:, c] = zc / (w + eps)
        else:
            h_y = h_uniq[inverse]
            wy[:, c] = yc / (1.0 / (h_y + eps) + eps)
            pos = np.clip(np.searchsorted(uniq, zc), 0, len(uniq) - 1)
            h_z = np.where(uniq[pos] == zc, h_uniq[pos], 0.0)
            wz[:, c] = zc / (1.0 / (h_z + eps) + eps)
    score = float(np.mean(_nearest_cross(wy, wz) < _nearest_within(wy)))
    return _result("identifiability", score, score, cfg, started)


# ---------------------------------------------------------------------------
# projected-space metrics


def nndr(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Mean ratio of nearest to second-nearest real-record distance per
    synthetic row, in the projected space; exact copies contribute 1."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    if len(y) < 2:
        raise InsufficientRealRecordsError("a second real neighbour needs at least two real records")
    started = time.perf_counter()
    yp, zp, flags = _projected_pair(y, z, cfg)
    d = pairwise_distances(zp, yp)
    rows = np.arange(d.shape[0])
    first = np.argmin(d, axis=1)
    d1 = d[rows, first]
    rest = d.copy()
    rest[rows, first] = np.inf
    d2 = rest.min(axis=1)
    ratios = np.ones(d.shape[0])
    positive = d1 > 0.0
    ratios[positive] = d1[positive] / d2[positive]
    score = float(np.mean(ratios))
    return _result("nndr", score, score, cfg, started, flags)


def dcr(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Mean distance from each real record to its closest synthetic row in
    the projected space, folded through 1 - sigmoid(ln(mean))."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    yp, zp, flags = _projected_pair(y, z, cfg)
    mean_nn = float(np.mean(_nearest_cross(yp, zp)))
    score = 1.0 - float(expit(np.log(max(mean_nn, cfg.epsilon))))
    return _result("dcr", mean_nn, score, cfg, started, flags)


def hidden_rate(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Fraction of real records whose nearest synthetic row (Minkowski-p,
    projected space) is exactly the row generated from them.

    The generation link comes from ``cfg.generation_map`` or, for equal
    sizes, index alignment.
    """
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    if cfg.generation_map is not None:
        g = cfg.generation_map
        validate_generation_map(g, len(y), len(z))
    elif len(y) == len(z):
        g = tuple(range(len(y)))
    else:
        raise MissingGenerationMapError(
            "dataset sizes differ and no generation map is configured; "
            "index alignment is impossible"
        )
    started = time.perf_counter()
    yp, zp, flags = _projected_pair(y, z, cfg)
    d = pairwise_distances(yp, zp, p=cfg.minkowski_p)
    hits = int(np.sum(np.argmin(d, axis=1) == np.asarray(g, dtype=np.int64)))
    score = hits / len(z)
    return _result("hidden_rate", score, score, cfg, started, flags)


# ---------------------------------------------------------------------------
# sigmoid-folded and set-resemblance metrics


def mdcr(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Sigmoid of the ratio between the median real-to-synthetic and the
    median real-to-real nearest-neighbour distances."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    if len(y) < 2:
        raise InsufficientRealRecordsError("the real-to-real median needs at least two real records")
    started = time.perf_counter()
    ye, ze = _encode_pair(y, z)
    ratio = float(np.median(_nearest_cross(ye, ze))) / (float(np.median(_nearest_within(ye))) + cfg.epsilon)
    return _result("mdcr", ratio, float(expit(ratio)), cfg, started)


def nnaa(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Complement of the nearest-neighbour adversarial accuracy.

    Accuracy averages two leave-one-out terms: how often a real record is
    strictly closer to its own kind than to the other set, and the same
    from the synthetic side. Differing sizes are reconciled by a seeded
    subsample of the larger set.
    """
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    flags: list[str] = []
    if len(y) != len(z):
        n = min(len(y), len(z))
        rng = _metric_rng(cfg, "nnaa")
        if len(y) > n:
            keep = np.sort(rng.choice(len(y), size=n, replace=False))
            y = Dataset(y.schema, tuple(y.rows[i] for i in keep), y.role)
        else:
            keep = np.sort(rng.choice(len(z), size=n, replace=False))
            z = Dataset(z.schema, tuple(z.rows[i] for i in keep), z.role)
        flags.append("subsampled")
    if len(y) < 2:
        raise InsufficientRealRecordsError("leave-one-out neighbours need at least two records per set")
    started = time.perf_counter()
    ye, ze = _encode_pair(y, z)
    real_term = float(np.mean(_nearest_cross(ye, ze) > _nearest_within(ye)))
    synth_term = float(np.mean(_nearest_cross(ze, ye) > _nearest_within(ze)))
    accuracy = (real_term + synth_term) / 2.0
    return _result("nnaa", accuracy, 1.0 - accuracy, cfg, started, flags)


def hitting_rate(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Fraction of real records matched by at least one synthetic row:
    equality on categorical/binary attributes, numeric attributes within
    (real range)/divisor."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    match = np.ones((len(y), len(z)), dtype=bool)
    for j, attr in enumerate(y.schema.attributes):
        if attr.kind is AttrKind.NUMERICAL:
            yc = np.array([r[j] for r in y.rows], dtype=np.float64)
            zc = np.array([r[j] for r in z.rows], dtype=np.float64)
            band = (float(yc.max()) - float(yc.min())) / cfg.hitr_divisor
            match &= np.abs(yc[:, None] - zc[None, :]) <= band
        else:
            yc = np.array([r[j] for r in y.rows], dtype=object)
            zc = np.array([r[j] for r in z.rows], dtype=object)
            match &= yc[:, None] == zc[None, :]
    score = float(np.mean(match.any(axis=1)))
    return _result("hitting_rate", score, score, cfg, started)


# ---------------------------------------------------------------------------
# classifier metrics


def dmlp(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Mean stratified k-fold AUC of a neural adversary separating real
    from synthetic rows; 0.5 is chance level and the value is not
    rescaled, so the scale reads inverted."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    ye, ze = _encode_pair(y, z, scale=True)
    labeled = build_labeled_set(ye, ze)
    score = kfold_auc(labeled, cfg.kfold_k, train_mlp, _metric_seed(cfg, "dmlp"))
    return _result("dmlp", score, score, cfg, started)


def mir(y: Dataset, z: Dataset, cfg: MetricConfig | None = None) -> MetricResult:
    """Recall of a boosted-tree adversary labelling held-out real records
    on a stratified split."""
    cfg = cfg or MetricConfig()
    _check_pair(y, z)
    started = time.perf_counter()
    ye, ze = _encode_pair(y, z, scale=True)
    labeled = build_labeled_set(ye, ze)
    flags = []
    if np.all(labeled.features == labeled.features[0]):
        flags.append("degenerate_features")
    score = holdout_recall(labeled, cfg.mir_test_fraction, train_gbt, _metric_seed(cfg, "mir"))
    return _result("mir", score, score, cfg, started, flags)


# ---------------------------------------------------------------------------
# registry and batch evaluation


@dataclass(frozen=True)
class MetricInfo:
    metric_id: str
    description: str
    direction: Direction
    requires: str = ""


METRIC_FUNCS: dict[str, Callable[..., MetricResult]] = {
    "zcap": zcap,
    "gcap": gcap,
    "air": air,
    "crp": crp,
    "cvp": cvp,
    "dvp": dvp,
    "dmlp": dmlp,
    "auth": auth,
    "identifiability": identifiability,
    "nsnd": nsnd,
    "nndr": nndr,
    "dcr": dcr,
    "mdcr": mdcr,
    "nnaa": nnaa,
    "mir": mir,
    "hidden_rate": hidden_rate,
    "hitting_rate": hitting_rate,
}

_ROLE_REQ = "key_attributes, sensitive_attribute"

METRICS: tuple[MetricInfo, ...] = (
    MetricInfo("zcap", "Sensitive-value hit rate over exact key matches", _direction("zcap"), _ROLE_REQ),
    MetricInfo("gcap", "Sensitive-value hit rate over key-Hamming-nearest matches", _direction("gcap"), _ROLE_REQ),
    MetricInfo("air", "Entropy-weighted F1 of nearest-neighbour sensitive-value inference", _direction("air"), _ROLE_REQ),
    MetricInfo("crp", "Fraction of synthetic rows replicating a real row exactly", _direction("crp")),
    MetricInfo("cvp", "Share of real records with a synthetic row within the closeness threshold", _direction("cvp")),
    MetricInfo("dvp", "Complement of the share of real records whose nearest synthetic row is remote", _direction("dvp")),
    MetricInfo("dmlp", "Mean k-fold AUC of a neural adversary separating real from synthetic", _direction("dmlp")),
    MetricInfo("auth", "Complement of the share of real records nearer to real than to synthetic", _direction("auth")),
    MetricInfo("identifiability", "Share of real records whose entropy-weighted nearest record is synthetic", _direction("identifiability")),
    MetricInfo("nsnd", "Mean normalized distance from real records to nearest synthetic rows", _direction("nsnd")),
    MetricInfo("nndr", "Mean first-to-second nearest real-record distance ratio per synthetic row", _direction("nndr")),
    MetricInfo("dcr", "Sigmoid-folded mean distance from real records to closest synthetic rows", _direction("dcr")),
    MetricInfo("mdcr", "Sigmoid of the median synthetic-distance over median real-distance ratio", _direction("mdcr")),
    MetricInfo("nnaa", "Complement of two-sided leave-one-out nearest-neighbour accuracy", _direction("nnaa")),
    MetricInfo("mir", "Recall of a boosted-tree adversary labelling held-out real records", _direction("mir")),
    MetricInfo("hidden_rate", "Fraction of real records whose nearest synthetic row is their generation source", _direction("hidden_rate"), "generation_map, or equal dataset sizes"),
    MetricInfo("hitting_rate", "Fraction of real records matched by a synthetic row within per-attribute bands", _direction("hitting_rate")),
)


def _max_workers() -> int:
    raw = os.environ.get("SYNTH_AUDIT_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def evaluate_all(
    y: Dataset,
    z: Dataset,
    cfg: MetricConfig | None = None,
    selection: Iterable[str] | None = None,
) -> list[MetricResult]:
    """Evaluate the selected metrics (default: all 17) in canonical order.

    A failing metric becomes an error entry in the result list; the batch
    itself never aborts. Unknown selection ids are a configuration error.
    """
    cfg = cfg or MetricConfig()
    if selection is None:
        chosen = CANONICAL_ORDER
    else:
        wanted = set(selection)
        unknown = wanted - set(CANONICAL_ORDER)
        if unknown:
            raise ConfigError(f"unknown metric ids: {sorted(unknown)}")
        chosen = tuple(mid for mid in CANONICAL_ORDER if mid in wanted)

    def run_one(mid: str) -> MetricResult:
        started = time.perf_counter()
        try:
            return METRIC_FUNCS[mid](y, z, cfg)
        except SynthAuditError as exc:
            error = f"{type(exc).__name__}: {exc}"
        except Exception as exc:  # pragma: no cover - defensive catch-all
            error = f"{type(exc).__name__}: {exc}"
        return MetricResult(
            metric_id=mid,
            raw_score=None,
            normalized_score=None,
            direction=_direction(mid),
            config=cfg.to_dict(),
            elapsed_seconds=time.perf_counter() - started,
            error=error,
        )

    workers = _max_workers()
    if workers == 1 or len(chosen) <= 1:
        return [run_one(mid) for mid in chosen]
    with ThreadPoolExecutor(max_workers=min(workers, len(chosen))) as pool:
        return list(pool.map(run_one, chosen))
