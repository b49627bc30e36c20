"""Shared fixtures: canonical dataset pairs and small dataset builders."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from synth_audit import MetricConfig, load_dataset_files
from synth_audit.dataset import Attribute, AttrKind, Dataset, Role, Schema

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def f_tiny() -> tuple[Dataset, Dataset]:
    """Mixed-type 4-record pair: age (numerical), sex (categorical), smoker (binary)."""
    y = load_dataset_files(FIXTURE_DIR / "f_tiny_real.csv", FIXTURE_DIR / "f_tiny.schema.json", "real")
    z = load_dataset_files(FIXTURE_DIR / "f_tiny_synth.csv", FIXTURE_DIR / "f_tiny.schema.json", "synthetic")
    return y, z


@pytest.fixture(scope="session")
def f_tiny_cfg() -> MetricConfig:
    """Adversary knows sex and smoker, tries to infer age."""
    return MetricConfig(key_attributes=("sex", "smoker"), sensitive_attribute="age")


@pytest.fixture(scope="session")
def f_num() -> tuple[Dataset, Dataset]:
    """Single numerical attribute: Y = [0, 1, 2, 3], Z = [0, 1.1, 2.5, 10]."""
    y = load_dataset_files(FIXTURE_DIR / "f_num_real.csv", FIXTURE_DIR / "f_num.schema.json", "real")
    z = load_dataset_files(FIXTURE_DIR / "f_num_synth.csv", FIXTURE_DIR / "f_num.schema.json", "synthetic")
    return y, z


def numeric_dataset(matrix, role: str = "real", names: list[str] | None = None) -> Dataset:
    """Build an all-numerical dataset from a 2-D array."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if names is None:
        names = [f"x{j}" for j in range(m.shape[1])]
    schema = Schema(tuple(Attribute(n, AttrKind.NUMERICAL) for n in names))
    rows = tuple(tuple(float(v) for v in row) for row in m)
    return Dataset(schema=schema, rows=rows, role=Role(role))


def copy_as_synthetic(d: Dataset) -> Dataset:
    """The same rows re-labeled as the synthetic side of a pair."""
    return Dataset(schema=d.schema, rows=d.rows, role=Role.SYNTHETIC)
