"""Typed tabular datasets: loading, validation, projection, and value statistics.

A dataset is an ordered list of complete records over a typed schema
(numerical, categorical, or binary attributes). Datasets are immutable
after load; the row index is the record identity used everywhere else in
the library (neighbour queries, generation maps, match sets).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    EmptyDatasetError,
    InvalidValueError,
    MissingValueError,
    NonFiniteValueError,
    SchemaMismatchError,
    UnknownAttributeError,
)

Value = float | int | str
Row = tuple[Value, ...]


class AttrKind(str, Enum):
    """Attribute type: real-valued, finite unordered labels, or 0/1 flags."""

    NUMERICAL = "numerical"
    CATEGORICAL = "categorical"
    BINARY = "binary"


class Role(str, Enum):
    """Whether a dataset is the sensitive source or the synthetic output."""

    REAL = "real"
    SYNTHETIC = "synthetic"


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: AttrKind


@dataclass(frozen=True)
class Schema:
    """Ordered attribute list shared (identically) by a real/synthetic pair."""

    attributes: tuple[Attribute, ...]

    def __post_init__(self) -> None:
        names = [a.name for a in self.attributes]
        if not names:
            raise SchemaMismatchError("schema declares no attributes")
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise SchemaMismatchError(f"duplicate attribute names: {sorted(dupes)}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    @property
    def kinds(self) -> tuple[AttrKind, ...]:
        return tuple(a.kind for a in self.attributes)

    def index_of(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise UnknownAttributeError(f"unknown attribute: {name!r}")

    def subset(self, names: list[str] | tuple[str, ...]) -> "Schema":
        return Schema(tuple(self.attributes[self.index_of(n)] for n in names))

    @classmethod
    def from_json(cls, source: bytes | str) -> "Schema":
        if isinstance(source, bytes):
            source = source.decode("utf-8")
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise SchemaMismatchError(f"schema is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or not isinstance(doc.get("attributes"), list):
            raise SchemaMismatchError('schema must be {"attributes": [...]}')
        attrs = []
        for entry in doc["attributes"]:
            if not isinstance(entry, dict) or "name" not in entry or "type" not in entry:
                raise SchemaMismatchError(f"bad attribute entry: {entry!r}")
            try:
                kind = AttrKind(entry["type"])
            except ValueError as exc:
                raise SchemaMismatchError(
                    f"unknown attribute type {entry['type']!r} for {entry['name']!r}"
                ) from exc
            attrs.append(Attribute(str(entry["name"]), kind))
        return cls(tuple(attrs))

    def to_json(self) -> str:
        doc = {"attributes": [{"name": a.name, "type": a.kind.value} for a in self.attributes]}
        return json.dumps(doc)


@dataclass(frozen=True)
class Dataset:
    """Immutable typed table. ``rows[i]`` is record *i*; order is identity."""

    schema: Schema
    rows: tuple[Row, ...]
    role: Role

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> tuple[Value, ...]:
        j = self.schema.index_of(name)
        return tuple(r[j] for r in self.rows)

    def row_projection(self, i: int, names: list[str] | tuple[str, ...]) -> Row:
        """Projection of record ``i`` over an attribute subset (d_i[A'])."""
        idx = [self.schema.index_of(n) for n in names]
        return tuple(self.rows[i][j] for j in idx)


def _parse_cell(raw: str, attr: Attribute, row_no: int) -> Value:
    if raw == "":
        raise MissingValueError(
            f"row {row_no}: empty value for attribute {attr.name!r}"
        )
    if attr.kind is AttrKind.CATEGORICAL:
        return raw
    try:
        v = float(raw)
    except ValueError as exc:
        raise InvalidValueError(
            f"row {row_no}: {attr.name!r} expects a number, got {raw!r}"
        ) from exc
    if not math.isfinite(v):
        raise NonFiniteValueError(
            f"row {row_no}: non-finite value {raw!r} for attribute {attr.name!r}"
        )
    if attr.kind is AttrKind.BINARY:
        if v not in (0.0, 1.0):
            raise InvalidValueError(
                f"row {row_no}: binary attribute {attr.name!r} must be 0 or 1, got {raw!r}"
            )
        return int(v)
    return v


def load_dataset(
    csv_source: bytes | str,
    schema_source: bytes | str | Schema,
    role: Role | str,
) -> Dataset:
    """Parse a CSV byte stream against a schema into an immutable Dataset.

    The header must match the schema's attribute names exactly, in order.
    Numerical cells must be finite, binary cells must be 0 or 1, and no
    cell may be empty.
    """
    schema = schema_source if isinstance(schema_source, Schema) else Schema.from_json(schema_source)
    role = Role(role)
    if isinstance(csv_source, bytes):
        csv_source = csv_source.decode("utf-8")
    reader = csv.reader(io.StringIO(csv_source))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDatasetError("CSV has no header row") from None
    if tuple(header) != schema.names:
        raise SchemaMismatchError(
            f"CSV header {header!r} does not match schema attributes {list(schema.names)!r}"
        )
    rows: list[Row] = []
    for row_no, cells in enumerate(reader, start=1):
        if not cells:
            continue
        if len(cells) != len(schema.attributes):
            raise SchemaMismatchError(
                f"row {row_no}: expected {len(schema.attributes)} cells, got {len(cells)}"
            )
        rows.append(
            tuple(_parse_cell(c, a, row_no) for c, a in zip(cells, schema.attributes))
        )
    if not rows:
        raise EmptyDatasetError("CSV contains no records")
    return Dataset(schema=schema, rows=tuple(rows), role=role)


def load_dataset_files(csv_path: str | Path, schema_path: str | Path, role: Role | str) -> Dataset:
    return load_dataset(
        Path(csv_path).read_bytes(), Path(schema_path).read_bytes(), role
    )


def _format_value(v: Value, kind: AttrKind) -> str:
    if kind is AttrKind.CATEGORICAL:
        return str(v)
    if kind is AttrKind.BINARY:
        return str(int(v))
    f = float(v)
    if f.is_integer():
        return str(int(f))
    return repr(f)


def serialize_dataset(d: Dataset) -> bytes:
    """Render a dataset back to CSV bytes.

    Loading the result reproduces the dataset exactly; for the shipped
    fixture files the bytes round-trip as well.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(d.schema.names)
    kinds = d.schema.kinds
    for row in d.rows:
        writer.writerow([_format_value(v, k) for v, k in zip(row, kinds)])
    return buf.getvalue().encode("utf-8")


def project(d: Dataset, attrs: list[str] | tuple[str, ...]) -> Dataset:
    """Restrict a dataset to an attribute subset, preserving record order."""
    sub = d.schema.subset(attrs)
    idx = [d.schema.index_of(n) for n in attrs]
    rows = tuple(tuple(r[j] for j in idx) for r in d.rows)
    return Dataset(schema=sub, rows=rows, role=d.role)


@dataclass(frozen=True)
class ValueStats:
    """Empirical frequencies and entropies of a dataset.

    ``record_probabilities[i]`` is the fraction of rows identical to row
    *i*. ``entropy`` is the record-level entropy over distinct rows in
    natural log. Per-attribute tables drive the value-level entropy
    H(a, v) = -P(v) ln P(v) used by entropy-weighted metrics.
    """

    record_probabilities: tuple[float, ...]
    entropy: float
    attribute_frequencies: tuple[dict[Value, float], ...] = field(repr=False)
    _names: tuple[str, ...] = field(repr=False)

    def _attr_index(self, name: str) -> int:
        try:
            return self._names.index(name)
        except ValueError:
            raise UnknownAttributeError(f"unknown attribute: {name!r}") from None

    def value_frequency(self, name: str, v: Value) -> float:
        return self.attribute_frequencies[self._attr_index(name)].get(v, 0.0)

    def value_entropy(self, name: str, v: Value) -> float:
        """H(a, v) = -P(v) ln P(v); zero for values never observed."""
        p = self.value_frequency(name, v)
        if p == 0.0:
            return 0.0
        return float(-p * math.log(p))

    def attribute_entropy(self, name: str) -> float:
        """Entropy of one attribute's observed value distribution."""
        freqs = self.attribute_frequencies[self._attr_index(name)]
        terms = np.array([-p * np.log(p) for p in freqs.values()], dtype=float)
        return float(np.sum(terms)) if terms.size else 0.0


def value_stats(y: Dataset) -> ValueStats:
    """Compute record and per-attribute-value statistics for a dataset."""
    if len(y) == 0:
        raise EmptyDatasetError("cannot compute statistics of an empty dataset")
    n = len(y)
    counts: dict[Row, int] = {}
    for row in y.rows:
        counts[row] = counts.get(row, 0) + 1
    rec_p = tuple(counts[row] / n for row in y.rows)
    # Distinct-row entropy, iterated in first-occurrence order so that the
    # all-distinct case sums exactly the same term sequence as a row loop.
    distinct_p = np.array([c / n for c in counts.values()], dtype=float)
    entropy = float(np.sum(-distinct_p * np.log(distinct_p)))
    attr_freq: list[dict[Value, float]] = []
    for j in range(len(y.schema.attributes)):
        col_counts: dict[Value, int] = {}
        for row in y.rows:
            col_counts[row[j]] = col_counts.get(row[j], 0) + 1
        attr_freq.append({v: c / n for v, c in col_counts.items()})
    return ValueStats(
        record_probabilities=rec_p,
        entropy=entropy,
        attribute_frequencies=tuple(attr_freq),
        _names=y.schema.names,
    )
