"""Run configuration, report assembly, and rendering.

A report ties together the tool version, content digests of every input
file, an echo of the full run configuration, and the per-metric results.
Two runs over identical inputs with the same seed produce identical
reports except for the timing fields.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import metadata, resources
from pathlib import Path

import jsonschema

from .config import MetricConfig
from .errors import ConfigError
from .result import MetricResult

try:
    TOOL_VERSION = metadata.version("synth-audit")
except metadata.PackageNotFoundError:  # pragma: no cover - source-tree use
    TOOL_VERSION = "0+unknown"


class OutputFormat(str, Enum):
    JSON = "json"
    MARKDOWN = "markdown"


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one evaluation run."""

    real_path: str
    synth_path: str
    schema_path: str
    generation_map_path: str | None = None
    metric_config: MetricConfig = field(default_factory=MetricConfig)
    selection: tuple[str, ...] | None = None
    output_format: OutputFormat = OutputFormat.JSON

    def to_dict(self) -> dict:
        return {
            "real_path": self.real_path,
            "synth_path": self.synth_path,
            "schema_path": self.schema_path,
            "generation_map_path": self.generation_map_path,
            "metric_config": self.metric_config.to_dict(),
            "selection": list(self.selection) if self.selection is not None else None,
            "output_format": self.output_format.value,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        try:
            selection = doc.get("selection")
            return cls(
                real_path=doc["real_path"],
                synth_path=doc["synth_path"],
                schema_path=doc["schema_path"],
                generation_map_path=doc.get("generation_map_path"),
                metric_config=MetricConfig.from_dict(doc.get("metric_config", {})),
                selection=tuple(selection) if selection is not None else None,
                output_format=OutputFormat(doc.get("output_format", "json")),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid run configuration: {exc}") from exc


def sha256_of_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _result_entry(r: MetricResult) -> dict:
    entry: dict = {
        "id": r.metric_id,
        "raw_score": r.raw_score,
        "normalized_score": r.normalized_score,
        "direction": r.direction.value,
        "elapsed_seconds": r.elapsed_seconds,
        "flags": list(r.flags),
    }
    if r.error is not None:
        entry["error"] = r.error
    return entry


def build_report(run_cfg: RunConfig, results: list[MetricResult]) -> dict:
    inputs = {
        "real_sha256": sha256_of_file(run_cfg.real_path),
        "synth_sha256": sha256_of_file(run_cfg.synth_path),
        "schema_sha256": sha256_of_file(run_cfg.schema_path),
    }
    if run_cfg.generation_map_path is not None:
        inputs["generation_map_sha256"] = sha256_of_file(run_cfg.generation_map_path)
    return {
        "version": TOOL_VERSION,
        "inputs": inputs,
        "config": run_cfg.to_dict(),
        "results": [_result_entry(r) for r in results],
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.6f}"


def render_markdown(report: dict) -> str:
    lines = [
        "# Privacy metric report",
        "",
        f"Tool version: {report['version']}",
        "",
        "| input | sha256 |",
        "| --- | --- |",
    ]
    for name, digest in report["inputs"].items():
        lines.append(f"| {name.removesuffix('_sha256')} | `{digest}` |")
    lines += [
        "",
        "| metric | raw | normalized | direction | flags | error |",
        "| --- | --- | --- | --- | --- | --- |",
    ]
    for entry in report["results"]:
        flags = ",".join(entry["flags"]) if entry["flags"] else "-"
        error = entry.get("error", "-")
        lines.append(
            f"| {entry['id']} | {_fmt(entry['raw_score'])} | {_fmt(entry['normalized_score'])} "
            f"| {entry['direction']} | {flags} | {error} |"
        )
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.MARKDOWN:
        return render_markdown(report)
    return render_json(report)


def _load_schema() -> dict:
    text = resources.files("synth_audit").joinpath("report.schema.json").read_text("utf-8")
    return json.loads(text)


def validate_report(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` when the report is malformed."""
    jsonschema.validate(instance=report, schema=_load_schema())
