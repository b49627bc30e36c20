"""Encoding, distance kernels, neighbour queries, and the shared projection."""

from __future__ import annotations

import numpy as np
import pytest

from synth_audit import (
    ConfigError,
    DatasetEncoder,
    InvalidValueError,
    PCAProjection,
    SchemaMismatchError,
    dist_euclid,
    dist_hamming,
    dist_minkowski,
    distance_extrema,
    encode,
    fit_projection,
    minimizer_set,
    nearest,
    nearest_two,
    pairwise_distances,
    project_point,
)
from synth_audit.dataset import Attribute, AttrKind, Dataset, Role, Schema

from conftest import numeric_dataset


class TestEncode:
    def test_mixed_row_layout(self, f_tiny):
        y, _ = f_tiny
        enc = encode(y, fit_on=y)
        # age scaled to [0,1] on Y's range 30..50, sex one-hot (M first), smoker raw
        np.testing.assert_array_equal(enc.matrix[0], [0.0, 1.0, 0.0, 1.0])
        np.testing.assert_array_equal(enc.matrix[1], [0.5, 0.0, 1.0, 0.0])
        assert enc.width == 4 and len(enc) == 4
        assert enc.spans == {"age": (0, 1), "sex": (1, 3), "smoker": (3, 4)}
        assert enc.scaling == {"age": (30.0, 50.0)}
        assert enc.categories == {"sex": ("M", "F")}

    def test_synthetic_scaled_on_real_bounds_unclipped(self, f_tiny):
        y, z = f_tiny
        enc = encode(z, fit_on=y)
        assert enc.matrix[2, 0] == 1.5  # age 60 against real bounds 30..50

    def test_constant_numeric_maps_to_zero(self):
        d = numeric_dataset([[7.0], [7.0], [7.0]])
        enc = encode(d, fit_on=d)
        np.testing.assert_array_equal(enc.matrix, np.zeros((3, 1)))

    def test_raw_numeric_passthrough(self, f_num):
        y, z = f_num
        enc = encode(z, fit_on=y, scale_numeric=False)
        np.testing.assert_array_equal(enc.matrix[:, 0], [0.0, 1.1, 2.5, 10.0])
        assert enc.scaling is None

    def test_categories_span_both_datasets(self):
        schema = Schema((Attribute("c", AttrKind.CATEGORICAL),))
        y = Dataset(schema, (("a",), ("b",)), Role.REAL)
        z = Dataset(schema, (("b",), ("c",)), Role.SYNTHETIC)
        encoder = DatasetEncoder().fit(y, z)
        assert encoder.categories_ == {"c": ("a", "b", "c")}
        np.testing.assert_array_equal(encoder.transform(z).matrix, [[0, 1, 0], [0, 0, 1]])

    def test_unseen_category_rejected(self):
        schema = Schema((Attribute("c", AttrKind.CATEGORICAL),))
        y = Dataset(schema, (("a",),), Role.REAL)
        z = Dataset(schema, (("b",),), Role.SYNTHETIC)
        with pytest.raises(InvalidValueError):
            DatasetEncoder().fit(y).transform(z)

    def test_schema_mismatch_rejected(self):
        a = numeric_dataset([[1.0]], names=["x"])
        b = numeric_dataset([[1.0]], names=["y"])
        with pytest.raises(SchemaMismatchError):
            DatasetEncoder().fit(a, b)
        with pytest.raises(SchemaMismatchError):
            DatasetEncoder().fit(a).transform(b)


class TestDistances:
    def test_euclid(self):
        assert dist_euclid([0.0, 0.0], [3.0, 4.0]) == 5.0

    def test_hamming(self):
        assert dist_hamming(("M", 1), ("F", 1)) == 1
        assert dist_hamming(("M", 1), ("M", 1)) == 0
        with pytest.raises(ValueError):
            dist_hamming(("M",), ("M", 1))

    def test_minkowski(self):
        assert dist_minkowski([0.0, 0.0], [3.0, 4.0], p=1.0) == 7.0
        assert dist_minkowski([0.0, 0.0], [3.0, 4.0], p=2.0) == 5.0
        # single coordinate with an exact square root, so the p = 0.5
        # root/power round trip stays float-exact
        assert dist_minkowski([0.0], [4.0], p=0.5) == 4.0

    def test_nonpositive_order_rejected(self):
        for p in (0.0, -1.0):
            with pytest.raises(ValueError):
                dist_minkowski([0.0], [1.0], p=p)

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValueError):
            dist_euclid([0.0], [1.0, 2.0])

    def test_pairwise_matches_kernel(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=(6, 3)), rng.normal(size=(4, 3))
        for p in (1.0, 2.0, 3.0):
            d = pairwise_distances(a, b, p=p)
            assert d.shape == (6, 4)
            for i in range(6):
                for j in range(4):
                    assert d[i, j] == pytest.approx(dist_minkowski(a[i], b[j], p), abs=1e-12)

    def test_metric_axioms(self):
        rng = np.random.default_rng(17)
        pts = rng.normal(size=(1000, 3, 4))
        for p in (1.0, 2.0, 3.0):
            for u, v, w in pts:
                duv = dist_minkowski(u, v, p)
                assert duv >= 0.0
                assert abs(duv - dist_minkowski(v, u, p)) <= 1e-9
                assert duv <= dist_minkowski(u, w, p) + dist_minkowski(w, v, p) + 1e-9
        assert dist_euclid([1.0, 2.0], [1.0, 2.0]) == 0.0


class TestNeighbours:
    def test_nearest_example(self, f_num):
        y, z = f_num
        ye = encode(y, fit_on=y, scale_numeric=False)
        ze = encode(z, fit_on=y, scale_numeric=False)
        res = nearest(ye.matrix[3], ze)
        assert res.index == 2 and res.distance == 0.5

    def test_nearest_two_tie_lowest_index_first(self, f_num):
        y, z = f_num
        ye = encode(y, fit_on=y, scale_numeric=False)
        ze = encode(z, fit_on=y, scale_numeric=False)
        res = nearest_two(ze.matrix[2], ye)
        assert res.indices == (2, 3)
        assert res.distances == (0.5, 0.5)

    def test_minimizer_set_returns_all_ties(self, f_num):
        y, z = f_num
        ye = encode(y, fit_on=y, scale_numeric=False)
        ze = encode(z, fit_on=y, scale_numeric=False)
        res = minimizer_set(ze.matrix[2], ye)
        assert res.indices == (2, 3)

    def test_exclude_skips_self(self):
        pool = np.array([[0.0], [1.0], [5.0]])
        res = nearest(pool[0], pool, exclude=0)
        assert res.index == 1 and res.distance == 1.0

    def test_empty_pool_rejected(self):
        with pytest.raises(ValueError):
            nearest([0.0], np.empty((0, 1)))
        with pytest.raises(ValueError):
            nearest([0.0], np.array([[1.0]]), exclude=0)
        with pytest.raises(ValueError):
            nearest_two([0.0], np.array([[1.0]]))

    def test_nearest_matches_exhaustive_scan(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            pool = rng.normal(size=(int(rng.integers(1, 20)), int(rng.integers(1, 5))))
            q = rng.normal(size=pool.shape[1])
            res = nearest(q, pool)
            brute = [dist_euclid(q, row) for row in pool]
            best = min(range(len(brute)), key=lambda i: brute[i])
            assert res.index == best
            assert res.distance == pytest.approx(brute[best], abs=1e-12)

    def test_extrema_example(self, f_num):
        y, z = f_num
        ye = encode(y, fit_on=y, scale_numeric=False)
        ze = encode(z, fit_on=y, scale_numeric=False)
        assert distance_extrema(ye, ze) == (0.0, 10.0)

    def test_extrema_singletons(self):
        assert distance_extrema(np.array([[1.0]]), np.array([[4.0]])) == (3.0, 3.0)

    def test_extrema_matches_enumeration(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            a = rng.normal(size=(int(rng.integers(1, 50)), 3))
            b = rng.normal(size=(int(rng.integers(1, 50)), 3))
            lo, hi = distance_extrema(a, b)
            brute = [dist_euclid(u, v) for u in a for v in b]
            assert lo == pytest.approx(min(brute), abs=1e-12)
            assert hi == pytest.approx(max(brute), abs=1e-12)


class TestProjection:
    def test_width_one_is_identity(self, f_num):
        y, z = f_num
        ye = encode(y, fit_on=y, scale_numeric=False)
        ze = encode(z, fit_on=y, scale_numeric=False)
        model = fit_projection(ye, ze)
        assert model.identity_ and model.k_ == 1
        assert model.captured_variance_ratio_ == 1.0
        np.testing.assert_array_equal(model.transform(ze), ze.matrix)

    def test_full_width_request_is_exact_identity(self):
        rng = np.random.default_rng(31)
        x = rng.normal(size=(20, 5))
        model = PCAProjection(k=5).fit(x)
        out = model.transform(x)
        np.testing.assert_array_equal(out, x)
        assert out is not x  # a copy, callers may not mutate the input
        np.testing.assert_array_equal(
            pairwise_distances(out, out), pairwise_distances(x, x)
        )

    def test_rank_one_cloud_captured_by_one_component(self):
        rng = np.random.default_rng(37)
        direction = rng.normal(size=3)
        x = np.outer(rng.normal(size=30), direction) + 5.0
        model = PCAProjection(k=1).fit(x)
        assert not model.identity_
        assert model.captured_variance_ratio_ == pytest.approx(1.0, abs=1e-8)

    def test_low_rank_embedding_preserves_distances(self):
        rng = np.random.default_rng(41)
        basis = rng.normal(size=(3, 6))
        x = rng.normal(size=(40, 3)) @ basis
        model = PCAProjection(k=3).fit(x)
        proj = model.transform(x)
        np.testing.assert_allclose(
            pairwise_distances(proj, proj), pairwise_distances(x, x), atol=1e-8
        )

    def test_projection_never_expands_distances(self):
        rng = np.random.default_rng(43)
        x = rng.normal(size=(25, 5))
        proj = PCAProjection(k=2).fit(x).transform(x)
        full = pairwise_distances(x, x)
        reduced = pairwise_distances(proj, proj)
        assert np.all(reduced <= full + 1e-9)

    def test_reconstruction_loses_uncaptured_variance_only(self):
        rng = np.random.default_rng(47)
        x = rng.normal(size=(30, 5))
        for k in (1, 2, 4):
            model = PCAProjection(k=k).fit(x)
            back = model.transform(x) @ model.components_ + model.mean_
            residual = float(((x - back) ** 2).sum())
            total = float(((x - x.mean(axis=0)) ** 2).sum())
            assert residual / total == pytest.approx(
                1.0 - model.captured_variance_ratio_, abs=1e-8
            )

    def test_variance_target_picks_smallest_k(self):
        rng = np.random.default_rng(53)
        # strongly anisotropic cloud: first axis dominates
        x = rng.normal(size=(200, 4)) * np.array([100.0, 1.0, 1.0, 1.0])
        model = PCAProjection().fit(x)
        assert model.k_ == 1
        assert model.captured_variance_ratio_ >= 0.95

    def test_identical_rows_fall_back_to_identity(self):
        x = np.tile([[1.0, 2.0, 3.0]], (5, 1))
        model = PCAProjection().fit(x)
        assert model.identity_
        np.testing.assert_array_equal(model.transform(x), x)

    def test_k_above_width_rejected(self):
        with pytest.raises(ConfigError):
            PCAProjection(k=3).fit(np.zeros((4, 2)))

    def test_single_row_rejected(self):
        with pytest.raises(ValueError):
            PCAProjection().fit(np.zeros((1, 3)))

    def test_transform_width_checked(self):
        model = PCAProjection(k=1).fit(np.random.default_rng(0).normal(size=(5, 3)))
        with pytest.raises(ValueError):
            model.transform(np.zeros((2, 4)))

    def test_deterministic_fit(self):
        rng = np.random.default_rng(59)
        x = rng.normal(size=(30, 4))
        a = PCAProjection(k=2).fit(x)
        b = PCAProjection(k=2).fit(x)
        np.testing.assert_array_equal(a.components_, b.components_)
        np.testing.assert_array_equal(a.transform(x), b.transform(x))

    def test_fit_on_stacked_pair(self):
        rng = np.random.default_rng(61)
        a, b = rng.normal(size=(10, 3)), rng.normal(size=(8, 3))
        model = fit_projection(a, b, k=2)
        assert model.transform(a).shape == (10, 2)
        assert project_point(model, a[0]).shape == (2,)
