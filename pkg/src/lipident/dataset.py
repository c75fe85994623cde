"""Dataset manifests, evaluation-split protocols and k-fold generation.

Manifests are JSON files ``{"version": 1, "records": [...]}`` where each
record describes one 10-second lip clip: identity, language (lowercase
English name), gender, age band, clip index, frame rate and the relative
path of its landmark file. Validation runs at construction time; strict
mode additionally enforces the canonical shape of five clips per subject.

All seeded operations draw from numpy's ``default_rng`` (PCG64), so a
(manifest, seed) pair always reproduces the same split byte for byte.
Types are immutable after construction and safe to share across threads.
"""

import enum
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, ManifestError

MANIFEST_VERSION = 1
CLIPS_PER_SUBJECT = 5

PROTOCOL_SUBJECT_DEPENDENT = "subject_dependent"
PROTOCOL_SUBJECT_INDEPENDENT = "subject_independent"

# subject-independent protocol: per language, this many subjects are held
# out for testing and for validation
HELDOUT_SUBJECTS_PER_LANGUAGE = 4


class Language(enum.IntEnum):
    """The eight dataset languages with their fixed integer codes."""

    FRENCH = 0
    JAPANESE = 1
    ENGLISH = 2
    ITALIAN = 3
    DUTCH = 4
    RUSSIAN = 5
    SPANISH = 6
    GERMAN = 7

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, name: str) -> "Language":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ManifestError(f"unknown language {name!r}") from None


class Gender(enum.Enum):
    M = "M"
    F = "F"


class AgeBand(enum.Enum):
    U30 = "U30"
    O30 = "O30"


@dataclass(frozen=True)
class ClipRecord:
    """One labeled 10-second lip clip."""

    clip_id: str
    subject_id: str
    language: Language
    gender: Gender
    age_band: AgeBand
    clip_index: int
    fps: float
    landmark_path: str
    frames_path: str | None = None

    def __post_init__(self):
        if not self.clip_id:
            raise ManifestError("clip_id must be a non-empty string")
        if not self.subject_id:
            raise ManifestError(f"clip {self.clip_id!r}: subject_id must be non-empty")
        if not 1 <= self.clip_index <= CLIPS_PER_SUBJECT:
            raise ManifestError(
                f"clip {self.clip_id!r}: clip_index {self.clip_index} outside [1, {CLIPS_PER_SUBJECT}]"
            )
        if not 25.0 <= self.fps <= 60.0:
            raise ManifestError(f"clip {self.clip_id!r}: fps {self.fps} outside [25, 60]")
        for name, p in (("landmark_path", self.landmark_path), ("frames_path", self.frames_path)):
            if p is not None and os.path.isabs(p):
                raise ManifestError(f"clip {self.clip_id!r}: {name} {p!r} must be relative")


@dataclass(frozen=True)
class DatasetManifest:
    """A validated, ordered collection of clip records."""

    records: tuple[ClipRecord, ...]
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        labels: dict[str, tuple] = {}
        per_subject: dict[str, list[ClipRecord]] = {}
        for rec in self.records:
            if rec.clip_id in seen:
                raise ManifestError(f"duplicate clip_id {rec.clip_id!r}")
            seen.add(rec.clip_id)
            key = (rec.language, rec.gender, rec.age_band)
            prev = labels.setdefault(rec.subject_id, key)
            if prev != key:
                raise ManifestError(
                    f"inconsistent subject labels for {rec.subject_id!r}: "
                    f"{_label_str(prev)} vs {_label_str(key)}"
                )
            per_subject.setdefault(rec.subject_id, []).append(rec)
        if self.strict:
            for sid, recs in per_subject.items():
                if len(recs) != CLIPS_PER_SUBJECT:
                    raise ManifestError(
                        f"strict mode: subject {sid!r} has {len(recs)} clips, "
                        f"expected {CLIPS_PER_SUBJECT}"
                    )
                indexes = sorted(r.clip_index for r in recs)
                if indexes != list(range(1, CLIPS_PER_SUBJECT + 1)):
                    raise ManifestError(
                        f"strict mode: subject {sid!r} clip indexes {indexes} are not 1..5"
                    )

    @property
    def clip_ids(self) -> list[str]:
        return [r.clip_id for r in self.records]

    def subjects(self) -> list[str]:
        out = []
        seen = set()
        for r in self.records:
            if r.subject_id not in seen:
                seen.add(r.subject_id)
                out.append(r.subject_id)
        return out

    def subject_language(self) -> dict[str, Language]:
        return {r.subject_id: r.language for r in self.records}

    def by_subject(self) -> dict[str, list[ClipRecord]]:
        out: dict[str, list[ClipRecord]] = {}
        for r in self.records:
            out.setdefault(r.subject_id, []).append(r)
        return out

    def record(self, clip_id: str) -> ClipRecord:
        for r in self.records:
            if r.clip_id == clip_id:
                return r
        raise ManifestError(f"unknown clip_id {clip_id!r}")


def _label_str(key) -> str:
    lang, gender, age = key
    return f"({lang.label}, {gender.value}, {age.value})"


@dataclass(frozen=True)
class Split:
    """Train/validation/test clip-id lists plus the seed that made them."""

    train: tuple[str, ...]
    test: tuple[str, ...]
    validation: tuple[str, ...] = field(default_factory=tuple)
    seed: int = 0
    protocol: str = PROTOCOL_SUBJECT_DEPENDENT

    def __post_init__(self):
        parts = (set(self.train), set(self.validation), set(self.test))
        names = ("train", "validation", "test")
        for i in range(3):
            for j in range(i + 1, 3):
                overlap = parts[i] & parts[j]
                if overlap:
                    raise DataError(
                        f"split parts {names[i]} and {names[j]} overlap: {sorted(overlap)[:5]}"
                    )


# ---------------------------------------------------------------------------
# Manifest I/O


def load_manifest(path, strict: bool = False) -> DatasetManifest:
    """Load and validate a manifest JSON file."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot parse manifest {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("version") != MANIFEST_VERSION:
        raise ManifestError(f"{path}: expected a manifest object with version {MANIFEST_VERSION}")
    raw_records = payload.get("records")
    if not isinstance(raw_records, list):
        raise ManifestError(f"{path}: 'records' must be a list")
    records = []
    for i, raw in enumerate(raw_records):
        try:
            records.append(_record_from_json(raw))
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"{path}: record {i}: {exc}") from exc
    return DatasetManifest(records=tuple(records), strict=strict)


def _record_from_json(raw: dict) -> ClipRecord:
    return ClipRecord(
        clip_id=str(raw["clip_id"]),
        subject_id=str(raw["subject_id"]),
        language=Language.from_label(str(raw["language"])),
        gender=Gender(str(raw["gender"])),
        age_band=AgeBand(str(raw["age_band"])),
        clip_index=int(raw["clip_index"]),
        fps=float(raw["fps"]),
        landmark_path=str(raw["landmark_path"]),
        frames_path=None if raw.get("frames_path") is None else str(raw["frames_path"]),
    )


def save_manifest(manifest: DatasetManifest, path) -> None:
    records = []
    for r in manifest.records:
        rec = {
            "clip_id": r.clip_id,
            "subject_id": r.subject_id,
            "language": r.language.label,
            "gender": r.gender.value,
            "age_band": r.age_band.value,
            "clip_index": r.clip_index,
            "fps": r.fps,
            "landmark_path": r.landmark_path,
        }
        if r.frames_path is not None:
            rec["frames_path"] = r.frames_path
        records.append(rec)
    payload = {"version": MANIFEST_VERSION, "records": records}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")


# ---------------------------------------------------------------------------
# Split protocols


def partition_subject_dependent(manifest: DatasetManifest, seed: int) -> Split:
    """Per subject: four clips to train, one seeded pick to test."""
    if not manifest.strict:
        raise DataError("subject-dependent partition requires a strict manifest")
    rng = np.random.default_rng(seed)
    train: list[str] = []
    test: list[str] = []
    by_subject = manifest.by_subject()
    for sid in sorted(by_subject):
        clips = sorted(by_subject[sid], key=lambda r: (r.clip_index, r.clip_id))
        pick = int(rng.integers(0, len(clips)))
        for i, rec in enumerate(clips):
            (test if i == pick else train).append(rec.clip_id)
    return Split(
        train=tuple(sorted(train)),
        test=tuple(sorted(test)),
        validation=(),
        seed=int(seed),
        protocol=PROTOCOL_SUBJECT_DEPENDENT,
    )


def partition_subject_independent(manifest: DatasetManifest, seed: int) -> Split:
    """Per language: four whole subjects to test, four to validation.

    Subjects never straddle parts, so the protocol measures language (not
    identity) generalization. The draw is balanced per language; languages
    are processed in ascending code order, subjects shuffled by the seeded
    generator.
    """
    if not manifest.strict:
        raise DataError("subject-independent partition requires a strict manifest")
    by_language: dict[Language, list[str]] = {}
    for r in manifest.records:
        subjects = by_language.setdefault(r.language, [])
        if r.subject_id not in subjects:
            subjects.append(r.subject_id)
    need = 2 * HELDOUT_SUBJECTS_PER_LANGUAGE + 1
    for lang in sorted(by_language):
        if len(by_language[lang]) < need:
            raise DataError(
                f"language {lang.label!r} has {len(by_language[lang])} subjects, "
                f"needs at least {need} for the subject-independent protocol"
            )
    rng = np.random.default_rng(seed)
    by_subject = manifest.by_subject()
    train: list[str] = []
    val: list[str] = []
    test: list[str] = []
    for lang in sorted(by_language):
        subjects = sorted(by_language[lang])
        order = rng.permutation(len(subjects))
        for pos, idx in enumerate(order):
            sid = subjects[int(idx)]
            clip_ids = [r.clip_id for r in by_subject[sid]]
            if pos < HELDOUT_SUBJECTS_PER_LANGUAGE:
                test.extend(clip_ids)
            elif pos < 2 * HELDOUT_SUBJECTS_PER_LANGUAGE:
                val.extend(clip_ids)
            else:
                train.extend(clip_ids)
    return Split(
        train=tuple(sorted(train)),
        test=tuple(sorted(test)),
        validation=tuple(sorted(val)),
        seed=int(seed),
        protocol=PROTOCOL_SUBJECT_INDEPENDENT,
    )


def save_split(split: Split, path) -> None:
    payload = {
        "seed": split.seed,
        "protocol": split.protocol,
        "train": list(split.train),
        "validation": list(split.validation),
        "test": list(split.test),
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")


def load_split(path) -> Split:
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse split {path}: {exc}") from exc
    try:
        return Split(
            train=tuple(payload["train"]),
            test=tuple(payload["test"]),
            validation=tuple(payload.get("validation", [])),
            seed=int(payload["seed"]),
            protocol=str(payload["protocol"]),
        )
    except KeyError as exc:
        raise DataError(f"{path}: missing split field {exc}") from exc


def check_split_covers(split: Split, manifest: DatasetManifest) -> None:
    """Raise unless the split's parts exactly partition the manifest."""
    got = set(split.train) | set(split.validation) | set(split.test)
    want = set(manifest.clip_ids)
    if got != want:
        missing = sorted(want - got)[:5]
        extra = sorted(got - want)[:5]
        raise DataError(f"split does not cover manifest (missing {missing}, extra {extra})")


# ---------------------------------------------------------------------------
# k-fold generation


def kfold(labels, k: int, seed: int, stratified: bool = True) -> list[list[int]]:
    """Partition ``range(len(labels))`` into k folds.

    Stratified mode (default) keeps per-class counts across folds within
    one of each other and requires k <= the smallest class support. Fold
    sizes always differ by at most one.
    """
    labels = list(labels)
    n = len(labels)
    if not 2 <= k <= 10:
        raise DataError(f"k must be in [2, 10], got {k}")
    if k > n:
        raise DataError(f"k={k} exceeds the number of items ({n})")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    if not stratified:
        order = rng.permutation(n)
        base = n // k
        extra = n % k
        pos = 0
        for f in range(k):
            size = base + (1 if f < extra else 0)
            folds[f].extend(int(i) for i in order[pos : pos + size])
            pos += size
        return folds

    by_class: dict = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    support = min(len(v) for v in by_class.values())
    if k > support:
        raise DataError(
            f"stratified k-fold with k={k} needs every class to have at least {k} items; "
            f"smallest support is {support}"
        )
    totals = [0] * k
    for lab in sorted(by_class, key=str):
        idxs = by_class[lab]
        order = rng.permutation(len(idxs))
        shuffled = [idxs[int(i)] for i in order]
        m = len(shuffled)
        base = m // k
        extra = m % k
        # the folds currently smallest take the leftover items
        order_folds = sorted(range(k), key=lambda f: (totals[f], f))
        sizes = [base] * k
        for f in order_folds[:extra]:
            sizes[f] += 1
        pos = 0
        for f in range(k):
            folds[f].extend(shuffled[pos : pos + sizes[f]])
            totals[f] += sizes[f]
            pos += sizes[f]
    return folds
