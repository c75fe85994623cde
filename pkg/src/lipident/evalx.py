"""Accuracy, confusion matrices, fusion error attribution and reports.

Reports come out twice: a versioned JSON document for machines and a
Markdown rendition whose summary table mirrors the shape of the results
table (per-model language accuracy, identification accuracy, fused
accuracy). Percentages render with two decimals. Confusion matrices are
additionally emitted as CSV with a label header row and column.
"""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .fusion import FusionDecision, RankList

REPORT_SCHEMA_VERSION = 1

# jsonschema document for the JSON report (validated in the test suite)
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "accuracies", "confusion_matrices", "error_attributions", "fusion_summary"],
    "properties": {
        "schema_version": {"const": REPORT_SCHEMA_VERSION},
        "accuracies": {
            "type": "object",
            "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
        },
        "confusion_matrices": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["labels", "counts"],
                "properties": {
                    "labels": {"type": "array", "items": {"type": "string"}},
                    "counts": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    },
                },
            },
        },
        "error_attributions": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": [
                    "total_errors",
                    "lang_correct_id_absent",
                    "lang_wrong",
                    "lang_correct_outranked",
                ],
                "additionalProperties": {"type": "integer", "minimum": 0},
            },
        },
        "fusion_summary": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["model"],
                "properties": {
                    "model": {"type": "string"},
                    "vli_accuracy": {"type": ["number", "null"]},
                    "identification_accuracy": {"type": ["number", "null"]},
                    "fused_accuracy": {"type": ["number", "null"]},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are truth, columns are prediction."""

    labels: tuple[str, ...]
    counts: np.ndarray  # (L, L) int64

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        counts = np.asarray(self.counts, dtype=np.int64)
        n = len(self.labels)
        if counts.shape != (n, n):
            raise DataError(f"counts shape {counts.shape} does not match {n} labels")
        if (counts < 0).any():
            raise DataError("confusion counts must be non-negative")
        counts = counts.copy()
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class ErrorAttribution:
    """Three-way partition of fused-decision errors.

    lang_wrong: the language prediction itself was wrong. Otherwise the
    language was right and either the true identity never made the top-k
    (lang_correct_id_absent) or it did but a same-language impostor
    outranked it (lang_correct_outranked). The categories are exhaustive
    and mutually exclusive by the fusion rule.
    """

    total_errors: int
    lang_correct_id_absent: int
    lang_wrong: int
    lang_correct_outranked: int

    def __post_init__(self):
        parts = (self.lang_correct_id_absent, self.lang_wrong, self.lang_correct_outranked)
        if any(v < 0 for v in (self.total_errors, *parts)):
            raise DataError("attribution counters must be non-negative")
        if sum(parts) != self.total_errors:
            raise DataError(
                f"attribution categories sum to {sum(parts)}, expected {self.total_errors}"
            )


def accuracy(predictions, truth) -> float:
    """Fraction of exact matches between two aligned label lists."""
    predictions = list(predictions)
    truth = list(truth)
    if not truth:
        raise DataError("cannot score an empty evaluation")
    if len(predictions) != len(truth):
        raise DataError(f"{len(predictions)} predictions vs {len(truth)} truth labels")
    hits = sum(1 for p, t in zip(predictions, truth) if p == t)
    return hits / len(truth)


def confusion(predictions, truth, labels) -> ConfusionMatrix:
    """Count matrix: counts[i][j] = #probes with truth i predicted j."""
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise DataError(f"{len(predictions)} predictions vs {len(truth)} truth labels")
    labels = tuple(labels)
    index = {l: i for i, l in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for p, t in zip(predictions, truth):
        if t not in index:
            raise DataError(f"truth label {t!r} not in label set")
        if p not in index:
            raise DataError(f"predicted label {p!r} not in label set")
        counts[index[t], index[p]] += 1
    matrix = ConfusionMatrix(labels=labels, counts=counts)
    # every construction re-checks the bookkeeping invariants
    if matrix.total != len(truth):
        raise DataError("confusion total does not match the probe count")
    support = {}
    for t in truth:
        support[t] = support.get(t, 0) + 1
    for i, l in enumerate(labels):
        if int(matrix.row_sums()[i]) != support.get(l, 0):
            raise DataError(f"row sum for {l!r} does not match its support")
    return matrix


def attribute_errors(
    decisions: list[FusionDecision],
    rank_lists: dict[str, RankList],
    truth_ids: dict[str, str],
    truth_langs: dict[str, str],
    subject_language: dict[str, str],
    k: int,
) -> ErrorAttribution:
    """Classify every erroneous fused decision into exactly one bucket."""
    lang_wrong = 0
    id_absent = 0
    outranked = 0
    total = 0
    for d in decisions:
        pid = d.probe_id
        if pid not in truth_ids or pid not in truth_langs:
            raise DataError(f"probe {pid!r} missing from the truth maps")
        if pid not in rank_lists:
            raise DataError(f"probe {pid!r} missing from the rank lists")
        if d.predicted_identity == truth_ids[pid]:
            continue
        total += 1
        if d.predicted_language != truth_langs[pid]:
            lang_wrong += 1
            continue
        top_labels = [label for label, _ in rank_lists[pid].top(k)]
        if truth_ids[pid] not in top_labels:
            id_absent += 1
        else:
            outranked += 1
    return ErrorAttribution(
        total_errors=total,
        lang_correct_id_absent=id_absent,
        lang_wrong=lang_wrong,
        lang_correct_outranked=outranked,
    )


# ---------------------------------------------------------------------------
# Reports


@dataclass
class EvalReport:
    """Named result set handed to emit_report."""

    accuracies: dict = field(default_factory=dict)
    confusions: dict = field(default_factory=dict)
    attributions: dict = field(default_factory=dict)
    fusion_summary: list = field(default_factory=list)


def format_percent(value: float) -> str:
    return f"{value * 100:.2f}%"


def report_to_json(report: EvalReport) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "accuracies": {k: float(v) for k, v in report.accuracies.items()},
        "confusion_matrices": {
            name: {"labels": list(m.labels), "counts": m.counts.tolist()}
            for name, m in report.confusions.items()
        },
        "error_attributions": {
            name: {
                "total_errors": a.total_errors,
                "lang_correct_id_absent": a.lang_correct_id_absent,
                "lang_wrong": a.lang_wrong,
                "lang_correct_outranked": a.lang_correct_outranked,
            }
            for name, a in report.attributions.items()
        },
        "fusion_summary": [
            {
                "model": str(row.get("model", "")),
                "vli_accuracy": row.get("vli_accuracy"),
                "identification_accuracy": row.get("identification_accuracy"),
                "fused_accuracy": row.get("fused_accuracy"),
            }
            for row in report.fusion_summary
        ],
    }


def _markdown(report: EvalReport) -> str:
    lines = ["# Evaluation report", ""]
    if report.accuracies:
        lines += ["## Accuracies", "", "| Metric | Value |", "| --- | --- |"]
        for name in report.accuracies:
            lines.append(f"| {name} | {format_percent(report.accuracies[name])} |")
        lines.append("")
    if report.fusion_summary:
        lines += [
            "## Summary",
            "",
            "| Model | VLI Accuracy | Identification Accuracy | Fused Accuracy |",
            "| --- | --- | --- | --- |",
        ]
        for row in report.fusion_summary:
            cells = [str(row.get("model", ""))]
            for key in ("vli_accuracy", "identification_accuracy", "fused_accuracy"):
                v = row.get(key)
                cells.append("-" if v is None else format_percent(v))
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
    for name, attribution in report.attributions.items():
        lines += [
            f"## Error attribution: {name}",
            "",
            "| Category | Count | Share |",
            "| --- | --- | --- |",
        ]
        total = attribution.total_errors
        for label, count in (
            ("language correct, identity absent from top-k", attribution.lang_correct_id_absent),
            ("language wrong", attribution.lang_wrong),
            ("language correct, identity outranked", attribution.lang_correct_outranked),
        ):
            share = "-" if total == 0 else format_percent(count / total)
            lines.append(f"| {label} | {count} | {share} |")
        lines.append(f"| total errors | {total} | |")
        lines.append("")
    if report.confusions:
        lines += ["## Confusion matrices", ""]
        for name in report.confusions:
            lines.append(f"- `confusion_{name}.csv` ({report.confusions[name].total} probes)")
        lines.append("")
    return "\n".join(lines)


def write_confusion_csv(matrix: ConfusionMatrix, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["truth\\prediction", *matrix.labels])
        for label, row in zip(matrix.labels, matrix.counts):
            writer.writerow([label, *(int(v) for v in row)])


def emit_report(report: EvalReport, out_dir) -> dict:
    """Write report.json, report.md and per-matrix CSVs; returns the paths."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create report directory {out_dir}: {exc}") from exc
    paths = {}
    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n", "utf-8"
    )
    paths["json"] = json_path
    md_path = out_dir / "report.md"
    md_path.write_text(_markdown(report), "utf-8")
    paths["markdown"] = md_path
    for name, matrix in report.confusions.items():
        csv_path = out_dir / f"confusion_{name}.csv"
        write_confusion_csv(matrix, csv_path)
        paths[f"confusion_{name}"] = csv_path
    return paths
