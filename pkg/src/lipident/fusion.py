"""Language-gated score-level fusion and a simulator to exercise it.

The fusion rule: rank the gallery by identity score, look at the top k
(default 8) candidates, and pick the highest-ranked one whose enrolled
language equals the language predicted for the probe. If no candidate
matches, the rank-1 identity is kept and the decision is flagged as a
fallback, so k=1 degenerates to the plain rank-1 baseline.

Ties in scores break by gallery label order, making every decision
deterministic. Languages are opaque string labels here; the CLI maps
dataset languages to their lowercase names.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .preprocess import read_tensor, write_tensor

DEFAULT_TOP_K = 8
# per-rank jitter stays below the unit gap between ranks, so it can never reorder
_JITTER_SPAN = 0.9


@dataclass(frozen=True)
class ScoreMatrix:
    """Probe x class score matrix; higher means more likely."""

    probe_ids: tuple[str, ...]
    class_labels: tuple[str, ...]
    scores: np.ndarray  # (P, C) float64

    def __post_init__(self):
        object.__setattr__(self, "probe_ids", tuple(self.probe_ids))
        object.__setattr__(self, "class_labels", tuple(self.class_labels))
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.ndim != 2:
            raise DataError(f"scores must be 2-D, got shape {scores.shape}")
        if scores.shape != (len(self.probe_ids), len(self.class_labels)):
            raise DataError(
                f"scores shape {scores.shape} does not match "
                f"{len(self.probe_ids)} probes x {len(self.class_labels)} classes"
            )
        if len(set(self.class_labels)) != len(self.class_labels):
            raise DataError("class labels must be unique")
        if len(set(self.probe_ids)) != len(self.probe_ids):
            raise DataError("probe ids must be unique")
        if scores.size and not np.isfinite(scores).all():
            raise DataError("scores must be finite")
        scores = scores.copy()
        scores.flags.writeable = False
        object.__setattr__(self, "scores", scores)

    def row(self, probe_id: str) -> np.ndarray:
        try:
            i = self.probe_ids.index(probe_id)
        except ValueError:
            raise DataError(f"unknown probe {probe_id!r}") from None
        return self.scores[i]


@dataclass(frozen=True)
class RankList:
    """All classes for one probe, ordered by descending score."""

    probe_id: str
    ranked: tuple[tuple[str, float], ...]

    def top(self, k: int) -> tuple[tuple[str, float], ...]:
        return self.ranked[:k]


@dataclass(frozen=True)
class FusionDecision:
    probe_id: str
    predicted_identity: str
    predicted_language: str
    rank_of_choice: int
    fallback: bool

    def __post_init__(self):
        if self.rank_of_choice < 1:
            raise DataError(f"rank_of_choice must be >= 1, got {self.rank_of_choice}")
        if self.fallback and self.rank_of_choice != 1:
            raise DataError("fallback decisions must keep the rank-1 identity")


def _order_row(scores_row: np.ndarray, n_classes: int) -> np.ndarray:
    # descending score; ties break by ascending class position
    return np.lexsort((np.arange(n_classes), -scores_row))


def rank(scores: ScoreMatrix, probe_id: str) -> RankList:
    """Descending rank list for one probe, deterministic under ties."""
    row = scores.row(probe_id)
    order = _order_row(row, len(scores.class_labels))
    ranked = tuple((scores.class_labels[int(j)], float(row[int(j)])) for j in order)
    return RankList(probe_id=probe_id, ranked=ranked)


def fuse(
    identity_scores: ScoreMatrix,
    language_pred: dict,
    subject_language: dict,
    k: int = DEFAULT_TOP_K,
) -> list[FusionDecision]:
    """Gate each probe's top-k identities by its predicted language."""
    n_classes = len(identity_scores.class_labels)
    if not 1 <= k <= n_classes:
        raise DataError(f"k must be in [1, {n_classes}], got {k}")
    for label in identity_scores.class_labels:
        if label not in subject_language:
            raise DataError(f"identity {label!r} missing from the subject-language map")
    decisions = []
    labels = identity_scores.class_labels
    for i, probe_id in enumerate(identity_scores.probe_ids):
        if probe_id not in language_pred:
            raise DataError(f"probe {probe_id!r} missing from the language predictions")
        predicted = language_pred[probe_id]
        order = _order_row(identity_scores.scores[i], n_classes)
        choice = None
        for pos in range(k):
            label = labels[int(order[pos])]
            if subject_language[label] == predicted:
                choice = FusionDecision(
                    probe_id=probe_id,
                    predicted_identity=label,
                    predicted_language=str(predicted),
                    rank_of_choice=pos + 1,
                    fallback=False,
                )
                break
        if choice is None:
            choice = FusionDecision(
                probe_id=probe_id,
                predicted_identity=labels[int(order[0])],
                predicted_language=str(predicted),
                rank_of_choice=1,
                fallback=True,
            )
        decisions.append(choice)
    return decisions


# ---------------------------------------------------------------------------
# Simulator


@dataclass(frozen=True)
class SimulationConfig:
    """Knobs for the seeded fusion simulator.

    top1_acc is the probability the true identity lands at rank 1,
    topk_hit the probability it lands within the top k; the remaining
    mass spreads uniformly beyond k. lang_acc is the language predictor's
    accuracy. The gallery is balanced: languages assigned round-robin.
    """

    n_subjects: int
    n_languages: int
    n_probes: int
    top1_acc: float
    topk_hit: float
    k: int
    lang_acc: float
    seed: int

    def __post_init__(self):
        if self.n_subjects < 1 or self.n_languages < 1 or self.n_probes < 1:
            raise DataError("subject, language and probe counts must be positive")
        if self.n_subjects % self.n_languages != 0:
            raise DataError(
                f"n_subjects ({self.n_subjects}) must be divisible by "
                f"n_languages ({self.n_languages}) for a balanced gallery"
            )
        if not 0.0 <= self.top1_acc <= self.topk_hit <= 1.0:
            raise DataError("need 0 <= top1_acc <= topk_hit <= 1")
        if not 0.0 <= self.lang_acc <= 1.0:
            raise DataError("lang_acc must be in [0, 1]")
        if not 1 <= self.k <= self.n_subjects:
            raise DataError(f"k must be in [1, {self.n_subjects}]")
        if self.k == 1 and self.topk_hit != self.top1_acc:
            raise DataError("with k=1, topk_hit must equal top1_acc")
        if self.k == self.n_subjects and self.topk_hit != 1.0:
            raise DataError("with k == n_subjects, topk_hit must be 1")
        if self.n_languages < 2 and self.lang_acc < 1.0:
            raise DataError("language errors are impossible with a single language")


@dataclass(frozen=True)
class SimulationResult:
    scores: ScoreMatrix
    language_pred: dict
    true_identity: dict
    true_language: dict
    subject_language: dict


def language_labels(n_languages: int) -> list[str]:
    """Lowercase dataset language names when they suffice, else lang<i>."""
    from .dataset import Language

    if n_languages <= len(Language):
        return [Language(i).label for i in range(n_languages)]
    return [f"lang{i}" for i in range(n_languages)]


def simulate_scores(config: SimulationConfig) -> SimulationResult:
    """Draw a synthetic identification experiment with known rates.

    Scores are strictly decreasing in rank by construction (unit gaps,
    sub-unit jitter), so the true identity's drawn rank is placed exactly
    and measured top-1/top-k rates converge to the configured ones.
    """
    rng = np.random.default_rng(config.seed)
    n = config.n_subjects
    subjects = [f"s{i:04d}" for i in range(n)]
    langs = language_labels(config.n_languages)
    subject_language = {sid: langs[i % config.n_languages] for i, sid in enumerate(subjects)}

    probe_ids = [f"p{i:05d}" for i in range(config.n_probes)]
    scores = np.empty((config.n_probes, n))
    true_identity = {}
    true_language = {}
    language_pred = {}
    k = config.k
    for p in range(config.n_probes):
        true_idx = p % n
        u = rng.random()
        if u < config.top1_acc:
            true_rank = 1
        elif u < config.topk_hit:
            true_rank = int(rng.integers(2, k + 1))
        else:
            true_rank = int(rng.integers(k + 1, n + 1))
        others = np.delete(np.arange(n), true_idx)
        order = rng.permutation(others)
        jitter = rng.random(n) * _JITTER_SPAN
        # rank r (1-based) gets score (n - r) + jitter; order fills the
        # non-true ranks in ascending rank order
        ranks = np.arange(1, n + 1)
        rank_scores = (n - ranks) + jitter
        row = np.empty(n)
        row[true_idx] = rank_scores[true_rank - 1]
        other_ranks = np.delete(ranks, true_rank - 1)
        row[order] = rank_scores[other_ranks - 1]
        scores[p] = row
        pid = probe_ids[p]
        true_identity[pid] = subjects[true_idx]
        true_lang = subject_language[subjects[true_idx]]
        true_language[pid] = true_lang
        if rng.random() < config.lang_acc:
            language_pred[pid] = true_lang
        else:
            wrong = [l for l in langs if l != true_lang]
            language_pred[pid] = wrong[int(rng.integers(0, len(wrong)))]
    matrix = ScoreMatrix(probe_ids=tuple(probe_ids), class_labels=tuple(subjects), scores=scores)
    return SimulationResult(
        scores=matrix,
        language_pred=language_pred,
        true_identity=true_identity,
        true_language=true_language,
        subject_language=subject_language,
    )


# ---------------------------------------------------------------------------
# File formats


def write_scores_csv(scores: ScoreMatrix, path) -> None:
    """CSV with a probe_id column followed by one column per class."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["probe_id", *scores.class_labels])
        for pid, row in zip(scores.probe_ids, scores.scores):
            writer.writerow([pid, *(repr(float(v)) for v in row)])


def read_scores_csv(path) -> ScoreMatrix:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty score file") from None
        if not header or header[0] != "probe_id":
            raise DataError(f"{path}: first column must be probe_id")
        labels = tuple(header[1:])
        probe_ids = []
        rows = []
        for line in reader:
            if not line:
                continue
            if len(line) != len(labels) + 1:
                raise DataError(f"{path}: row {len(rows) + 1} has {len(line)} cells")
            probe_ids.append(line[0])
            rows.append([float(v) for v in line[1:]])
    scores = np.asarray(rows, dtype=np.float64).reshape(len(probe_ids), len(labels))
    return ScoreMatrix(probe_ids=tuple(probe_ids), class_labels=labels, scores=scores)


def write_scores_tensor(scores: ScoreMatrix, path) -> None:
    """LBTF tensor plus a `.json` sidecar carrying the labels."""
    path = Path(path)
    write_tensor(np.asarray(scores.scores, dtype=np.float64), path)
    sidecar = {"probe_ids": list(scores.probe_ids), "class_labels": list(scores.class_labels)}
    Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", "utf-8")


def read_scores_tensor(path) -> ScoreMatrix:
    path = Path(path)
    matrix = read_tensor(path)
    sidecar_path = Path(str(path) + ".json")
    try:
        sidecar = json.loads(sidecar_path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse score sidecar {sidecar_path}: {exc}") from exc
    return ScoreMatrix(
        probe_ids=tuple(sidecar["probe_ids"]),
        class_labels=tuple(sidecar["class_labels"]),
        scores=matrix,
    )


def read_scores(path) -> ScoreMatrix:
    """Dispatch on extension: .csv or the binary tensor format."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_scores_csv(path)
    return read_scores_tensor(path)


def write_language_predictions(pred: dict, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["probe_id", "language"])
        for pid in pred:
            writer.writerow([pid, str(pred[pid])])


def read_language_predictions(path) -> dict:
    path = Path(path)
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty language prediction file") from None
        if header[:2] != ["probe_id", "language"]:
            raise DataError(f"{path}: expected header probe_id,language")
        for line in reader:
            if not line:
                continue
            if len(line) != 2:
                raise DataError(f"{path}: malformed row {line!r}")
            out[line[0]] = line[1]
    return out


def write_decisions(decisions: list[FusionDecision], path) -> None:
    payload = [
        {
            "probe_id": d.probe_id,
            "predicted_identity": d.predicted_identity,
            "predicted_language": d.predicted_language,
            "rank_of_choice": d.rank_of_choice,
            "fallback": d.fallback,
        }
        for d in decisions
    ]
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")


def read_decisions(path) -> list[FusionDecision]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse decisions {path}: {exc}") from exc
    try:
        return [
            FusionDecision(
                probe_id=str(d["probe_id"]),
                predicted_identity=str(d["predicted_identity"]),
                predicted_language=str(d["predicted_language"]),
                rank_of_choice=int(d["rank_of_choice"]),
                fallback=bool(d["fallback"]),
            )
            for d in payload
        ]
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: bad decision payload: {exc}") from exc
