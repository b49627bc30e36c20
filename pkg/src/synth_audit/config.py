"""Metric configuration: adversary knowledge, thresholds, seeds, and maps."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .dataset import Dataset, Schema


@dataclass(frozen=True)
class MetricConfig:
    """Shared configuration for all metric evaluations.

    ``key_attributes`` is what an adversary is assumed to know;
    ``sensitive_attribute`` is what they try to infer. The remaining
    fields are thresholds and knobs with stable defaults so that a run
    is fully reproducible from (inputs, config, seed).
    """

    key_attributes: tuple[str, ...] = ()
    sensitive_attribute: str | None = None
    cvp_threshold: float = 0.2
    dvp_threshold: float = 0.8
    air_relative_band: float = 0.1
    hitr_divisor: float = 30.0
    minkowski_p: float = 2.0
    projection_k: int | None = None
    kfold_k: int = 5
    mir_test_fraction: float = 0.2
    seed: int = 42
    epsilon: float = 1e-8
    generation_map: tuple[int, ...] | None = None
    air_global_f1: bool = False
    id_per_attribute_weights: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "key_attributes", tuple(self.key_attributes))
        if self.generation_map is not None:
            object.__setattr__(self, "generation_map", tuple(int(i) for i in self.generation_map))
        if self.sensitive_attribute is not None and self.sensitive_attribute in self.key_attributes:
            raise ConfigError(
                f"sensitive attribute {self.sensitive_attribute!r} must not be a key attribute"
            )
        for name in ("cvp_threshold", "dvp_threshold", "air_relative_band", "mir_test_fraction"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ConfigError(f"{name} must lie in (0, 1), got {v}")
        if self.hitr_divisor <= 0:
            raise ConfigError(f"hitr_divisor must be positive, got {self.hitr_divisor}")
        if self.minkowski_p <= 0:
            raise ConfigError(f"minkowski_p must be positive, got {self.minkowski_p}")
        if self.projection_k is not None and self.projection_k < 1:
            raise ConfigError(f"projection_k must be at least 1, got {self.projection_k}")
        if self.kfold_k < 2:
            raise ConfigError(f"kfold_k must be at least 2, got {self.kfold_k}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

    def with_overrides(self, **kwargs) -> "MetricConfig":
        return replace(self, **kwargs)

    def require_roles(self, metric_id: str, schema: Schema) -> None:
        """Check that key/sensitive attribute roles are set and valid."""
        if not self.key_attributes or self.sensitive_attribute is None:
            raise ConfigError(
                f"{metric_id} requires key_attributes and sensitive_attribute"
            )
        for name in (*self.key_attributes, self.sensitive_attribute):
            schema.index_of(name)  # raises UnknownAttributeError

    def to_dict(self) -> dict:
        out: dict = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricConfig":
        kwargs = {f.name: doc[f.name] for f in fields(cls) if f.name in doc}
        if kwargs.get("key_attributes") is not None:
            kwargs["key_attributes"] = tuple(kwargs["key_attributes"])
        if kwargs.get("generation_map") is not None:
            kwargs["generation_map"] = tuple(kwargs["generation_map"])
        return cls(**kwargs)


def load_generation_map(source: bytes | str | Path) -> tuple[int, ...]:
    """Parse a generation-map CSV (``real_index,synthetic_index``, 0-based).

    Returns a tuple ``g`` with ``g[real_index] == synthetic_index``. The
    map must be a bijection on 0..n-1.
    """
    if isinstance(source, Path):
        source = source.read_bytes()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    reader = csv.reader(io.StringIO(source))
    try:
        header = next(reader)
    except StopIteration:
        raise ConfigError("generation map file is empty") from None
    if [h.strip() for h in header] != ["real_index", "synthetic_index"]:
        raise ConfigError(
            f"generation map header must be real_index,synthetic_index, got {header!r}"
        )
    pairs: dict[int, int] = {}
    for cells in reader:
        if not cells:
            continue
        if len(cells) != 2:
            raise ConfigError(f"generation map row must have 2 cells, got {cells!r}")
        try:
            r, s = int(cells[0]), int(cells[1])
        except ValueError as exc:
            raise ConfigError(f"generation map indices must be integers: {cells!r}") from exc
        if r in pairs:
            raise ConfigError(f"generation map repeats real index {r}")
        pairs[r] = s
    n = len(pairs)
    if n == 0:
        raise ConfigError("generation map has no entries")
    if sorted(pairs.keys()) != list(range(n)) or sorted(pairs.values()) != list(range(n)):
        raise ConfigError("generation map must be a bijection on 0..n-1")
    return tuple(pairs[i] for i in range(n))


def validate_generation_map(g: tuple[int, ...], n_real: int, n_synth: int) -> None:
    if len(g) != n_real:
        raise ConfigError(
            f"generation map covers {len(g)} real records, dataset has {n_real}"
        )
    if n_real != n_synth:
        raise ConfigError(
            f"generation map requires equally sized datasets, got {n_real} vs {n_synth}"
        )
    if sorted(g) != list(range(n_synth)):
        raise ConfigError("generation map must be a bijection onto the synthetic indices")
