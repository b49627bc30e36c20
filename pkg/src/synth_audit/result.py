"""Metric result container and direction annotation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Direction(str, Enum):
    """How to read a score.

    ``ONE_MEANS_NO_PRIVACY``: 0 is complete privacy, 1 is none.
    ``AS_WRITTEN_ANOMALOUS``: the score is reported on its native scale,
    which does not follow that convention (e.g. a chance-level classifier
    sits at 0.5, or identical data scores 0).
    """

    ONE_MEANS_NO_PRIVACY = "one_means_no_privacy"
    AS_WRITTEN_ANOMALOUS = "as_written_anomalous"


@dataclass(frozen=True)
class MetricResult:
    """Outcome of one metric evaluation.

    ``raw_score`` is the metric's own value before any final squashing or
    flipping (e.g. the pre-sigmoid distance ratio); ``normalized_score``
    is the reported value and always lies in [0, 1]. Both are ``None``
    when ``error`` is set. ``flags`` records conventions that fired
    (clamping, degenerate inputs, subsampling).
    """

    metric_id: str
    raw_score: float | None
    normalized_score: float | None
    direction: Direction
    config: dict = field(repr=False, default_factory=dict)
    elapsed_seconds: float = 0.0
    error: str | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.error is None and self.normalized_score is not None:
            if not (0.0 <= self.normalized_score <= 1.0):
                raise ValueError(
                    f"{self.metric_id}: normalized_score {self.normalized_score} outside [0, 1]"
                )
