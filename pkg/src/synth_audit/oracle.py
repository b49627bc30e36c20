"""Brute-force reference implementations of the non-classifier metrics.

Everything here is written as plain Python loops directly over the metric
definitions, on purpose: no code is shared with the optimized
implementations in :mod:`synth_audit.metrics` beyond the dataset/config
containers. The :func:`run_oracle` runner generates small random
real/synthetic pairs and checks that both routes agree within a strict
tolerance.

Instance values are drawn from a dyadic grid (multiples of 1/8) so that
squared distances are exact in binary floating point; ties are then exact
too, which makes the tie-breaking rules directly comparable between the
two routes instead of being washed out by rounding noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import MetricConfig, validate_generation_map
from .dataset import AttrKind, Attribute, Dataset, Role, Schema
from .errors import (
    ConfigError,
    DegenerateEntropyError,
    InsufficientRealRecordsError,
    MissingGenerationMapError,
)

# ---------------------------------------------------------------------------
# small numeric helpers (sequential accumulation, scalar math)


def _euclid(u: list[float], v: list[float]) -> float:
    acc = 0.0
    for a, b in zip(u, v):
        d = a - b
        acc += d * d
    return math.sqrt(acc)


def _minkowski(u: list[float], v: list[float], p: float) -> float:
    if p == 2.0:
        return _euclid(u, v)
    if p == 1.0:
        acc = 0.0
        for a, b in zip(u, v):
            acc += abs(a - b)
        return acc
    acc = 0.0
    for a, b in zip(u, v):
        acc += abs(a - b) ** p
    return acc ** (1.0 / p)


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _median(values: list[float]) -> float:
    s = sorted(values)
    n = len(s)
    mid = n // 2
    if n % 2 == 1:
        return s[mid]
    return (s[mid - 1] + s[mid]) / 2.0


def _argmin(values: list[float]) -> int:
    best = 0
    for j in range(1, len(values)):
        if values[j] < values[best]:
            best = j
    return best


def _encode_rows(y: Dataset, z: Dataset) -> tuple[list[list[float]], list[list[float]]]:
    """Numeric vectors: raw numerics, 0/1 binaries, one-hot categoricals.

    Categories are columned in first-observed order, scanning the real
    rows before the synthetic rows.
    """
    schema = y.schema
    cat_orders: list[list[str] | None] = []
    for j, attr in enumerate(schema.attributes):
        if attr.kind is AttrKind.CATEGORICAL:
            seen: list[str] = []
            for row in list(y.rows) + list(z.rows):
                if row[j] not in seen:
                    seen.append(row[j])
            cat_orders.append(seen)
        else:
            cat_orders.append(None)

    def enc(rows) -> list[list[float]]:
        out = []
        for row in rows:
            vec: list[float] = []
            for j, attr in enumerate(schema.attributes):
                if attr.kind is AttrKind.CATEGORICAL:
                    for cat in cat_orders[j]:
                        vec.append(1.0 if row[j] == cat else 0.0)
                else:
                    vec.append(float(row[j]))
            out.append(vec)
        return out

    return enc(y.rows), enc(z.rows)


def _sensitive_match(yv, zv, kind: AttrKind, band: float) -> bool:
    if kind is AttrKind.NUMERICAL:
        return abs(yv - zv) <= band * abs(zv)
    return yv == zv


# ---------------------------------------------------------------------------
# metric transcriptions


def oracle_zcap(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    cfg.require_roles("zcap", y.schema)
    ki = [y.schema.index_of(k) for k in cfg.key_attributes]
    si = y.schema.index_of(cfg.sensitive_attribute)
    total = 0.0
    for yr in y.rows:
        guesses = [zr for zr in z.rows if all(zr[j] == yr[j] for j in ki)]
        correct = sum(1 for zr in guesses if zr[si] == yr[si])
        total += correct / max(1, len(guesses))
    return total / len(y.rows)


def oracle_gcap(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    cfg.require_roles("gcap", y.schema)
    ki = [y.schema.index_of(k) for k in cfg.key_attributes]
    si = y.schema.index_of(cfg.sensitive_attribute)
    total = 0.0
    for yr in y.rows:
        hams = [sum(1 for j in ki if zr[j] != yr[j]) for zr in z.rows]
        dmin = min(hams)
        nearest = [zr for zr, h in zip(z.rows, hams) if h == dmin]
        correct = sum(1 for zr in nearest if zr[si] == yr[si])
        total += correct / len(nearest)
    return total / len(y.rows)


def oracle_air(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    cfg.require_roles("air", y.schema)
    schema = y.schema
    si = schema.index_of(cfg.sensitive_attribute)
    s_kind = schema.attributes[si].kind
    key_idx = [schema.index_of(k) for k in cfg.key_attributes]
    key_schema = Schema(tuple(schema.attributes[j] for j in key_idx))
    ykeys = Dataset(key_schema, tuple(tuple(r[j] for j in key_idx) for r in y.rows), y.role)
    zkeys = Dataset(key_schema, tuple(tuple(r[j] for j in key_idx) for r in z.rows), z.role)
    ye, ze = _encode_rows(ykeys, zkeys)

    n = len(y.rows)
    counts: dict[tuple, int] = {}
    for row in y.rows:
        counts[row] = counts.get(row, 0) + 1
    entropy = 0.0
    for c in counts.values():
        p = c / n
        entropy += -p * math.log(p)
    if entropy == 0.0:
        raise DegenerateEntropyError("all real records identical; weights undefined")

    tps, fns, terms = [], [], []
    for i, yr in enumerate(y.rows):
        dists = [_euclid(ye[i], zv) for zv in ze]
        j = _argmin(dists)
        tp = 1 if _sensitive_match(yr[si], z.rows[j][si], s_kind, cfg.air_relative_band) else 0
        fn = 0
        if tp == 0:
            fn = sum(
                1 for zr in z.rows
                if _sensitive_match(yr[si], zr[si], s_kind, cfg.air_relative_band)
            )
        p = counts[yr] / n
        tps.append(tp)
        fns.append(fn)
        terms.append(-p * math.log(p))

    if cfg.air_global_f1:
        tp_g = sum(tps)
        fp_g = n - tp_g
        fn_g = sum(fns)
        f1_g = (2 * tp_g / (2 * tp_g + fp_g + fn_g)) if (2 * tp_g + fp_g + fn_g) > 0 else 0.0
        score = sum(terms) * f1_g / entropy
    else:
        acc = 0.0
        for term, tp in zip(terms, tps):
            acc += term * (1.0 if tp else 0.0)
        score = acc / entropy
    return min(1.0, score)


def oracle_crp(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    real = set(y.rows)
    count = sum(1 for zr in z.rows if zr in real)
    return min(1.0, count / (len(y.rows) + cfg.epsilon))


def _nn_tables(y: Dataset, z: Dataset) -> tuple[list[float], float, float]:
    """Per-real-record nearest synthetic distance plus global pair extrema."""
    ye, ze = _encode_rows(y, z)
    nn = []
    dmin = math.inf
    dmax = -math.inf
    for yv in ye:
        best = math.inf
        for zv in ze:
            d = _euclid(yv, zv)
            best = min(best, d)
            dmin = min(dmin, d)
            dmax = max(dmax, d)
        nn.append(best)
    return nn, dmin, dmax


def oracle_cvp(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    nn, dmin, dmax = _nn_tables(y, z)
    if dmax == dmin:
        return 1.0
    hits = sum(1 for d in nn if (d - dmin) / (dmax - dmin) <= cfg.cvp_threshold)
    return hits / len(nn)


def oracle_dvp(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    nn, dmin, dmax = _nn_tables(y, z)
    if dmax == dmin:
        return 1.0
    far = sum(1 for d in nn if (d - dmin) / (dmax - dmin) >= cfg.dvp_threshold)
    return 1.0 - far / len(nn)


def oracle_nsnd(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    nn, dmin, dmax = _nn_tables(y, z)
    if dmax == dmin:
        return 0.0
    acc = 0.0
    for d in nn:
        acc += (d - dmin) / (dmax - dmin)
    return acc / len(nn)


def oracle_auth(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    if len(y.rows) < 2:
        raise InsufficientRealRecordsError("need two real records for a real neighbour")
    ye, ze = _encode_rows(y, z)
    closer = 0
    for i, yv in enumerate(ye):
        d_real = min(_euclid(yv, ye[j]) for j in range(len(ye)) if j != i)
        d_syn = min(_euclid(yv, zv) for zv in ze)
        if d_real < d_syn:
            closer += 1
    return 1.0 - closer / len(ye)


def oracle_identifiability(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    if len(y.rows) < 2:
        raise InsufficientRealRecordsError("need two real records for a real neighbour")
    ye, ze = _encode_rows(y, z)
    width = len(ye[0])
    eps = cfg.epsilon
    freqs: list[dict[float, float]] = []
    for c in range(width):
        counts: dict[float, int] = {}
        for row in ye:
            counts[row[c]] = counts.get(row[c], 0) + 1
        freqs.append({v: k / len(ye) for v, k in counts.items()})

    def reweigh(rows: list[list[float]]) -> list[list[float]]:
        out = []
        for row in rows:
            vec = []
            for c, v in enumerate(row):
                p = freqs[c].get(v, 0.0)
                h = -p * math.log(p) if p > 0.0 else 0.0
                w = 1.0 / (h + eps)
                vec.append(v / (w + eps))
            out.append(vec)
        return out

    wy, wz = reweigh(ye), reweigh(ze)
    closer = 0
    for i, yv in enumerate(wy):
        d_syn = min(_euclid(yv, zv) for zv in wz)
        d_real = min(_euclid(yv, wy[j]) for j in range(len(wy)) if j != i)
        if d_syn < d_real:
            closer += 1
    return closer / len(wy)


def oracle_nndr(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    if len(y.rows) < 2:
        raise InsufficientRealRecordsError("second real neighbour needs two real records")
    ye, ze = _encode_rows(y, z)
    acc = 0.0
    for zv in ze:
        dists = [_euclid(zv, yv) for yv in ye]
        j1 = _argmin(dists)
        d1 = dists[j1]
        if d1 == 0.0:
            acc += 1.0
        else:
            d2 = min(d for j, d in enumerate(dists) if j != j1)
            acc += d1 / d2
    return acc / len(ze)


def oracle_dcr(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    ye, ze = _encode_rows(y, z)
    acc = 0.0
    for yv in ye:
        acc += min(_euclid(yv, zv) for zv in ze)
    mean_nn = acc / len(ye)
    return 1.0 - _sigmoid(math.log(max(mean_nn, cfg.epsilon)))


def oracle_mdcr(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    if len(y.rows) < 2:
        raise InsufficientRealRecordsError("real-to-real median needs two real records")
    ye, ze = _encode_rows(y, z)
    to_syn = [min(_euclid(yv, zv) for zv in ze) for yv in ye]
    to_real = [
        min(_euclid(yv, ye[j]) for j in range(len(ye)) if j != i)
        for i, yv in enumerate(ye)
    ]
    ratio = _median(to_syn) / (_median(to_real) + cfg.epsilon)
    return _sigmoid(ratio)


def oracle_nnaa(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    if len(y.rows) != len(z.rows):
        raise ValueError("the brute-force route requires equally sized datasets")
    if len(y.rows) < 2:
        raise InsufficientRealRecordsError("leave-one-out neighbours need two records")
    ye, ze = _encode_rows(y, z)
    n = len(ye)
    hits_y = 0
    for i, yv in enumerate(ye):
        d_other = min(_euclid(yv, zv) for zv in ze)
        d_own = min(_euclid(yv, ye[j]) for j in range(n) if j != i)
        if d_other > d_own:
            hits_y += 1
    hits_z = 0
    for i, zv in enumerate(ze):
        d_other = min(_euclid(zv, yv) for yv in ye)
        d_own = min(_euclid(zv, ze[j]) for j in range(n) if j != i)
        if d_other > d_own:
            hits_z += 1
    nnaa = (hits_y / n + hits_z / n) / 2.0
    return 1.0 - nnaa


def oracle_hidden_rate(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    if cfg.generation_map is not None:
        g = cfg.generation_map
        validate_generation_map(g, len(y.rows), len(z.rows))
    else:
        if len(y.rows) != len(z.rows):
            raise MissingGenerationMapError(
                "no generation map and dataset sizes differ; index alignment impossible"
            )
        g = tuple(range(len(y.rows)))
    ye, ze = _encode_rows(y, z)
    hits = 0
    for i, yv in enumerate(ye):
        dists = [_minkowski(yv, zv, cfg.minkowski_p) for zv in ze]
        if _argmin(dists) == g[i]:
            hits += 1
    return hits / len(ze)


def oracle_hitting_rate(y: Dataset, z: Dataset, cfg: MetricConfig) -> float:
    schema = y.schema
    bands: list[float | None] = []
    for j, attr in enumerate(schema.attributes):
        if attr.kind is AttrKind.NUMERICAL:
            col = [r[j] for r in y.rows]
            bands.append((max(col) - min(col)) / cfg.hitr_divisor)
        else:
            bands.append(None)
    hits = 0
    for yr in y.rows:
        for zr in z.rows:
            ok = True
            for j, attr in enumerate(schema.attributes):
                if attr.kind is AttrKind.NUMERICAL:
                    if abs(yr[j] - zr[j]) > bands[j]:
                        ok = False
                        break
                elif yr[j] != zr[j]:
                    ok = False
                    break
            if ok:
                hits += 1
                break
    return hits / len(y.rows)


ORACLE_FUNCS = {
    "zcap": oracle_zcap,
    "gcap": oracle_gcap,
    "air": oracle_air,
    "crp": oracle_crp,
    "cvp": oracle_cvp,
    "dvp": oracle_dvp,
    "auth": oracle_auth,
    "identifiability": oracle_identifiability,
    "nsnd": oracle_nsnd,
    "nndr": oracle_nndr,
    "dcr": oracle_dcr,
    "mdcr": oracle_mdcr,
    "nnaa": oracle_nnaa,
    "hidden_rate": oracle_hidden_rate,
    "hitting_rate": oracle_hitting_rate,
}


# ---------------------------------------------------------------------------
# random instance generation and the comparison runner


_KIND_POOL = (AttrKind.NUMERICAL, AttrKind.CATEGORICAL, AttrKind.BINARY)


def random_instance(
    rng: np.random.Generator, max_n: int
) -> tuple[Dataset, Dataset, MetricConfig]:
    """A small random (real, synthetic) pair with dyadic-grid values.

    Both datasets get the same row count so every metric (including the
    ones needing a generation map or equal sizes) applies with default
    configuration. The last attribute plays the sensitive role, the rest
    are keys.
    """
    m = int(rng.integers(2, 5))
    attrs = []
    for j in range(m):
        kind = _KIND_POOL[int(rng.integers(0, 3))]
        attrs.append(Attribute(f"a{j}", kind))
    schema = Schema(tuple(attrs))
    n = int(rng.integers(2, max_n + 1))

    def draw_rows() -> tuple:
        rows = []
        for _ in range(n):
            row = []
            for attr in attrs:
                if attr.kind is AttrKind.NUMERICAL:
                    row.append(float(rng.integers(0, 33)) / 8.0)
                elif attr.kind is AttrKind.CATEGORICAL:
                    row.append(f"c{int(rng.integers(0, 4))}")
                else:
                    row.append(int(rng.integers(0, 2)))
            rows.append(tuple(row))
        return tuple(rows)

    y_rows = draw_rows()
    while len(set(y_rows)) < 2:
        y_rows = draw_rows()
    y = Dataset(schema, y_rows, Role.REAL)
    z = Dataset(schema, draw_rows(), Role.SYNTHETIC)
    width = len(_encode_rows(y, z)[0][0])
    cfg = MetricConfig(
        key_attributes=tuple(a.name for a in attrs[:-1]),
        sensitive_attribute=attrs[-1].name,
        projection_k=width,
    )
    return y, z, cfg


@dataclass
class OracleSummary:
    trials: int
    max_n: int
    seed: int
    tolerance: float
    max_deviation: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(d <= self.tolerance for d in self.max_deviation.values())


def run_oracle(trials: int, max_n: int, seed: int, tolerance: float = 1e-9) -> OracleSummary:
    """Compare the optimized metrics against the brute-force route.

    Raises ``ConfigError`` for nonsensical parameters. The projection
    dimension is pinned to the full encoded width so both routes measure
    in the same (identity-mapped) space.
    """
    if trials < 1:
        raise ConfigError(f"trials must be at least 1, got {trials}")
    if max_n < 2:
        raise ConfigError(f"max_n must be at least 2, got {max_n}")
    from . import metrics as _metrics

    rng = np.random.default_rng(seed)
    max_dev = {mid: 0.0 for mid in ORACLE_FUNCS}
    for _ in range(trials):
        y, z, cfg = random_instance(rng, max_n)
        for mid, fn in ORACLE_FUNCS.items():
            expected = fn(y, z, cfg)
            result = _metrics.METRIC_FUNCS[mid](y, z, cfg)
            got = result.normalized_score
            dev = abs(got - expected)
            if dev > max_dev[mid]:
                max_dev[mid] = dev
    return OracleSummary(
        trials=trials, max_n=max_n, seed=seed, tolerance=tolerance, max_deviation=max_dev
    )
