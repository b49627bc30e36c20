"""Vector-space geometry over mixed-type records.

Encodes datasets into numeric matrices (one-hot categoricals, pass-through
binaries, optionally min-max scaled numerics), provides exact distance
kernels and brute-force nearest-neighbour queries, global distance
extrema, and a principal-component projection shared by both datasets.

All neighbour scans are exact: ties are broken to the lowest row index,
and a minimizer-set query returns every index attaining the minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .dataset import AttrKind, Dataset, Schema
from .errors import ConfigError, InvalidValueError, SchemaMismatchError


@dataclass(frozen=True)
class EncodedMatrix:
    """Numeric rendering of a dataset plus the layout that produced it.

    ``spans[name]`` gives the half-open column range of one attribute.
    ``scaling`` holds the per-numeric-attribute (min, max) fitted on the
    real data when scaling is on; synthetic values are scaled with the
    same parameters and may leave [0, 1].
    """

    matrix: np.ndarray
    spans: dict[str, tuple[int, int]]
    scaling: dict[str, tuple[float, float]] | None
    categories: dict[str, tuple[str, ...]]

    @property
    def width(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return int(self.matrix.shape[0])


class DatasetEncoder(BaseEstimator, TransformerMixin):
    """Fit an encoding layout on a dataset pair, then render either one.

    Categories are columned in first-observed order scanning the fit
    dataset before the secondary one, so a pair shares one layout. With
    ``scale_numeric`` on, numerics are min-max scaled using the fit
    dataset's bounds (a constant attribute maps to an all-zero column);
    with it off, numerics pass through raw.
    """

    def __init__(self, scale_numeric: bool = True):
        self.scale_numeric = scale_numeric

    def fit(self, d: Dataset, other: Dataset | None = None) -> "DatasetEncoder":
        if other is not None and (
            d.schema.names != other.schema.names or d.schema.kinds != other.schema.kinds
        ):
            raise SchemaMismatchError("datasets do not share a schema")
        self.schema_: Schema = d.schema
        self.categories_: dict[str, tuple[str, ...]] = {}
        self.scaling_: dict[str, tuple[float, float]] = {}
        spans: dict[str, tuple[int, int]] = {}
        col = 0
        for j, attr in enumerate(d.schema.attributes):
            if attr.kind is AttrKind.CATEGORICAL:
                seen: list[str] = []
                for source in (d, other) if other is not None else (d,):
                    for row in source.rows:
                        if row[j] not in seen:
                            seen.append(row[j])
                self.categories_[attr.name] = tuple(seen)
                spans[attr.name] = (col, col + len(seen))
                col += len(seen)
            else:
                if attr.kind is AttrKind.NUMERICAL:
                    vals = [row[j] for row in d.rows]
                    self.scaling_[attr.name] = (float(min(vals)), float(max(vals)))
                spans[attr.name] = (col, col + 1)
                col += 1
        self.spans_ = spans
        self.width_ = col
        return self

    def transform(self, d: Dataset) -> EncodedMatrix:
        if d.schema.names != self.schema_.names or d.schema.kinds != self.schema_.kinds:
            raise SchemaMismatchError("dataset does not match the fitted schema")
        n = len(d)
        out = np.zeros((n, self.width_), dtype=np.float64)
        for j, attr in enumerate(self.schema_.attributes):
            start, stop = self.spans_[attr.name]
            if attr.kind is AttrKind.CATEGORICAL:
                order = self.categories_[attr.name]
                lookup = {c: k for k, c in enumerate(order)}
                for i, row in enumerate(d.rows):
                    k = lookup.get(row[j])
                    if k is None:
                        raise InvalidValueError(
                            f"category {row[j]!r} of {attr.name!r} was not seen at fit time"
                        )
                    out[i, start + k] = 1.0
            else:
                col = np.array([float(row[j]) for row in d.rows])
                if attr.kind is AttrKind.NUMERICAL and self.scale_numeric:
                    lo, hi = self.scaling_[attr.name]
                    denom = hi - lo if hi > lo else 1.0
                    col = (col - lo) / denom
                out[:, start] = col
        return EncodedMatrix(
            matrix=out,
            spans=dict(self.spans_),
            scaling=dict(self.scaling_) if self.scale_numeric else None,
            categories=dict(self.categories_),
        )


def encode(d: Dataset, fit_on: Dataset, scale_numeric: bool = True) -> EncodedMatrix:
    """Encode ``d`` with scaling bounds from ``fit_on`` and categories
    from the union of both datasets."""
    other = None if d is fit_on else d
    return DatasetEncoder(scale_numeric=scale_numeric).fit(fit_on, other).transform(d)


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, EncodedMatrix):
        return x.matrix
    return np.asarray(x, dtype=np.float64)


def _check_widths(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[-1] != v.shape[-1]:
        raise ValueError(f"width mismatch: {u.shape[-1]} vs {v.shape[-1]}")


def dist_euclid(u, v) -> float:
    u = np.atleast_2d(np.asarray(u, dtype=np.float64))
    v = np.atleast_2d(np.asarray(v, dtype=np.float64))
    _check_widths(u, v)
    return float(cdist(u, v, "euclidean")[0, 0])


def dist_minkowski(u, v, p: float) -> float:
    if p <= 0:
        raise ValueError(f"Minkowski order must be positive, got {p}")
    u = np.atleast_2d(np.asarray(u, dtype=np.float64))
    v = np.atleast_2d(np.asarray(v, dtype=np.float64))
    _check_widths(u, v)
    return float(cdist(u, v, **_minkowski_kwargs(p))[0, 0])


def dist_hamming(u: tuple, v: tuple) -> int:
    """Count of attributes with unequal raw values."""
    if len(u) != len(v):
        raise ValueError(f"width mismatch: {len(u)} vs {len(v)}")
    return sum(1 for a, b in zip(u, v) if a != b)


def _minkowski_kwargs(p: float) -> dict:
    if p == 2.0:
        return {"metric": "euclidean"}
    if p == 1.0:
        return {"metric": "cityblock"}
    return {"metric": "minkowski", "p": p}


def pairwise_distances(a, b, p: float = 2.0) -> np.ndarray:
    """Exact all-pairs distance matrix (rows of ``a`` by rows of ``b``)."""
    am, bm = _as_matrix(a), _as_matrix(b)
    _check_widths(am, bm)
    return cdist(am, bm, **_minkowski_kwargs(p))


@dataclass(frozen=True)
class NeighborResult:
    """Indices into the pool and their distances, nearest first."""

    indices: tuple[int, ...]
    distances: tuple[float, ...]

    @property
    def index(self) -> int:
        return self.indices[0]

    @property
    def distance(self) -> float:
        return self.distances[0]


def _query_distances(query, pool, exclude: int | None, p: float) -> np.ndarray:
    pm = _as_matrix(pool)
    if pm.shape[0] == 0 or (pm.shape[0] == 1 and exclude == 0):
        raise ValueError("neighbour pool is empty after exclusion")
    q = np.atleast_2d(np.asarray(query, dtype=np.float64))
    _check_widths(q, pm)
    d = cdist(q, pm, **_minkowski_kwargs(p))[0]
    if exclude is not None:
        d[exclude] = np.inf
    return d


def nearest(query, pool, exclude: int | None = None, p: float = 2.0) -> NeighborResult:
    """Lowest-index minimizer of the distance from ``query`` to the pool."""
    d = _query_distances(query, pool, exclude, p)
    i = int(np.argmin(d))
    return NeighborResult(indices=(i,), distances=(float(d[i]),))


def nearest_two(query, pool, exclude: int | None = None, p: float = 2.0) -> NeighborResult:
    """Nearest index plus the nearest among the remaining pool."""
    d = _query_distances(query, pool, exclude, p)
    if np.isfinite(d).sum() < 2:
        raise ValueError("need at least two pool rows for a second neighbour")
    i = int(np.argmin(d))
    d2 = d.copy()
    d2[i] = np.inf
    j = int(np.argmin(d2))
    return NeighborResult(indices=(i, j), distances=(float(d[i]), float(d[j])))


def minimizer_set(query, pool, exclude: int | None = None, p: float = 2.0) -> NeighborResult:
    """Every index attaining the exact minimum distance, ascending."""
    d = _query_distances(query, pool, exclude, p)
    m = d.min()
    idx = np.nonzero(d == m)[0]
    return NeighborResult(
        indices=tuple(int(i) for i in idx),
        distances=tuple(float(d[i]) for i in idx),
    )


def distance_extrema(y_enc, z_enc) -> tuple[float, float]:
    """Exact (min, max) Euclidean distance over all cross pairs."""
    d = pairwise_distances(y_enc, z_enc)
    if d.size == 0:
        raise ValueError("distance extrema need nonempty datasets")
    return float(d.min()), float(d.max())


class PCAProjection(BaseEstimator, TransformerMixin):
    """Linear map to ``k`` dimensions fitted on the joint dataset cloud.

    With ``k`` unset, the smallest dimension capturing at least
    ``variance_target`` of the variance is chosen. Requesting the full
    width (or more, which is rejected) yields an exact identity map so
    distances are preserved bit-for-bit.
    """

    def __init__(self, k: int | None = None, variance_target: float = 0.95):
        self.k = k
        self.variance_target = variance_target

    def fit(self, x) -> "PCAProjection":
        x = check_array(_as_matrix(x), dtype=np.float64)
        n, width = x.shape
        if n < 2:
            raise ValueError("projection requires at least two rows")
        if self.k is not None and self.k > width:
            raise ConfigError(f"projection_k={self.k} exceeds encoded width {width}")
        self.width_ = width
        if self.k is not None and self.k >= width:
            self.identity_ = True
            self.k_ = width
            self.mean_ = np.zeros(width)
            self.components_ = np.eye(width)
            self.captured_variance_ratio_ = 1.0
            return self
        mean = x.mean(axis=0)
        centered = x - mean
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        total = float((s**2).sum())
        if total <= 0.0:
            # all rows identical: any direction is as good as none
            self.identity_ = True
            self.k_ = width
            self.mean_ = np.zeros(width)
            self.components_ = np.eye(width)
            self.captured_variance_ratio_ = 1.0
            return self
        ratios = (s**2) / total
        if self.k is None:
            k = int(np.searchsorted(np.cumsum(ratios), self.variance_target) + 1)
            k = min(k, len(s))
        else:
            k = min(self.k, len(s))
        if k >= width:
            self.identity_ = True
            self.k_ = width
            self.mean_ = np.zeros(width)
            self.components_ = np.eye(width)
            self.captured_variance_ratio_ = 1.0
            return self
        comps = vt[:k].copy()
        for row in comps:  # deterministic sign: largest-magnitude entry positive
            j = int(np.argmax(np.abs(row)))
            if row[j] < 0:
                row *= -1.0
        self.identity_ = False
        self.k_ = k
        self.mean_ = mean
        self.components_ = comps
        self.captured_variance_ratio_ = float(ratios[:k].sum())
        return self

    def transform(self, x) -> np.ndarray:
        x = _as_matrix(x)
        if x.shape[-1] != self.width_:
            raise ValueError(f"width mismatch: {x.shape[-1]} vs fitted {self.width_}")
        if self.identity_:
            return np.array(x, dtype=np.float64, copy=True)
        return (x - self.mean_) @ self.components_.T


def fit_projection(y_enc, z_enc, k: int | None = None) -> PCAProjection:
    """Fit the shared projection on the concatenation of both encodings."""
    stacked = np.vstack([_as_matrix(y_enc), _as_matrix(z_enc)])
    return PCAProjection(k=k).fit(stacked)


def project_point(model: PCAProjection, v) -> np.ndarray:
    return model.transform(np.atleast_2d(np.asarray(v, dtype=np.float64)))[0]
