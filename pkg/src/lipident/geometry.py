"""Landmark sequences, distance metrics and the pivot-distance features.

A landmark sequence holds, per frame, eight lip points with coordinates
normalized to [0, 1] relative to the 300x200 crop. The feature extractor
resamples a sequence to a fixed frame count, then concatenates the
distances from one pivot landmark to the other seven, frame-major, with
metrics in the fixed order euclidean, manhattan, cosine.

Landmark indices are treated as opaque here; which anatomical point is
index 0..7 is the landmark producer's documented convention. Everything
in this module is a pure function over immutable inputs.
"""

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import kernels
from .errors import DataError
from .preprocess import read_tensor, write_tensor

NUM_LANDMARKS = 8
METRIC_ORDER = ("euclidean", "manhattan", "cosine")
DEFAULT_FRAMES = 250  # 25 fps x 10 s, the guaranteed minimum clip length
DEFAULT_PIVOT = 0


class ZeroNormWarning(UserWarning):
    """Cosine distance hit a zero-length position vector and returned 1.0."""


@dataclass(frozen=True)
class LandmarkSequence:
    """Per-frame 8-point lip landmarks for one clip."""

    clip_id: str
    fps: float
    frames: np.ndarray  # (N, 8, 2) float64

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim != 3 or frames.shape[1:] != (NUM_LANDMARKS, 2):
            raise DataError(
                f"clip {self.clip_id!r}: frames must have shape (N, {NUM_LANDMARKS}, 2), "
                f"got {frames.shape}"
            )
        if frames.shape[0] < 2:
            raise DataError(f"clip {self.clip_id!r}: need at least 2 frames")
        if not np.isfinite(frames).all():
            raise DataError(f"clip {self.clip_id!r}: non-finite landmark coordinates")
        frames = frames.copy()
        frames.flags.writeable = False
        object.__setattr__(self, "frames", frames)

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]


@dataclass(frozen=True)
class FeatureVector:
    """Flat pivot-distance time series for one clip."""

    clip_id: str
    values: np.ndarray
    pivot: int
    metrics: tuple[str, ...]
    num_frames: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        expected = self.num_frames * (NUM_LANDMARKS - 1) * len(self.metrics)
        if values.shape != (expected,):
            raise DataError(
                f"clip {self.clip_id!r}: feature length {values.shape} != ({expected},)"
            )
        if not np.isfinite(values).all() or (values < 0).any():
            raise DataError(f"clip {self.clip_id!r}: features must be finite and >= 0")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def _check_point(p):
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DataError(f"non-finite point ({p[0]}, {p[1]})")
    return x, y


def euclidean(p, q) -> float:
    """L2 distance between two 2-D points."""
    px, py = _check_point(p)
    qx, qy = _check_point(q)
    return math.hypot(qx - px, qy - py)


def manhattan(p, q) -> float:
    """L1 distance between two 2-D points."""
    px, py = _check_point(p)
    qx, qy = _check_point(q)
    return abs(qx - px) + abs(qy - py)


def cosine_distance(p, q) -> float:
    """1 - cos(angle) between the points taken as position vectors.

    Lies in [0, 2]. A zero-length vector has no direction; the fallback
    returns 1.0 and emits a ZeroNormWarning instead of aborting, so a
    corner-anchored coordinate cannot kill a batch.
    """
    px, py = _check_point(p)
    qx, qy = _check_point(q)
    denom = math.hypot(px, py) * math.hypot(qx, qy)
    if denom == 0.0:
        warnings.warn(
            "cosine distance of a zero-length position vector, returning 1.0",
            ZeroNormWarning,
            stacklevel=2,
        )
        return 1.0
    return 1.0 - (px * qx + py * qy) / denom


def metric_order(metrics) -> tuple[str, ...]:
    """Canonicalize a metric subset into the fixed layout order."""
    chosen = set(metrics)
    unknown = chosen - set(METRIC_ORDER)
    if unknown:
        raise DataError(f"unknown metrics {sorted(unknown)}; choose from {METRIC_ORDER}")
    if not chosen:
        raise DataError("at least one metric is required")
    return tuple(m for m in METRIC_ORDER if m in chosen)


def resample_temporal(seq: LandmarkSequence, num_frames: int) -> LandmarkSequence:
    """Linearly resample a sequence to exactly `num_frames` frames.

    Output frame t interpolates the input at position t*(N-1)/(T-1); with
    T == N this is an exact identity on the frame data. The fps field is
    rescaled so the clip duration is preserved.
    """
    if num_frames < 2:
        raise DataError(f"resample target must be >= 2 frames, got {num_frames}")
    n = seq.num_frames
    fps = seq.fps * num_frames / n
    if num_frames == n:
        return LandmarkSequence(clip_id=seq.clip_id, fps=fps, frames=seq.frames)
    pos = np.arange(num_frames, dtype=np.float64) * (n - 1) / (num_frames - 1)
    i0 = np.minimum(pos.astype(np.int64), n - 2)
    frac = (pos - i0)[:, None, None]
    a = seq.frames[i0]
    b = seq.frames[i0 + 1]
    # a + frac*(b-a) is exact at frac == 0 and for constant signals
    out = a + frac * (b - a)
    return LandmarkSequence(clip_id=seq.clip_id, fps=fps, frames=out)


def extract_features(
    seq: LandmarkSequence,
    pivot: int = DEFAULT_PIVOT,
    metrics=METRIC_ORDER,
    num_frames: int = DEFAULT_FRAMES,
) -> FeatureVector:
    """Resample, then concatenate pivot-to-landmark distances frame-major.

    Layout: for each frame, for each non-pivot landmark in ascending
    index order, one value per chosen metric in the canonical order.
    """
    if not 0 <= pivot < NUM_LANDMARKS:
        raise DataError(f"pivot must be in [0, {NUM_LANDMARKS - 1}], got {pivot}")
    chosen = metric_order(metrics)
    resampled = resample_temporal(seq, num_frames)
    values, zero_norms = kernels.pivot_distances(
        resampled.frames,
        pivot,
        "euclidean" in chosen,
        "manhattan" in chosen,
        "cosine" in chosen,
    )
    if zero_norms:
        warnings.warn(
            f"clip {seq.clip_id!r}: cosine fallback used for {zero_norms} zero-length vectors",
            ZeroNormWarning,
            stacklevel=2,
        )
    return FeatureVector(
        clip_id=seq.clip_id,
        values=values,
        pivot=pivot,
        metrics=chosen,
        num_frames=num_frames,
    )


# ---------------------------------------------------------------------------
# Landmark JSON and feature-matrix files


def load_landmarks(path) -> LandmarkSequence:
    """Read one clip's landmark JSON: {"clip_id", "fps", "frames"}."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse landmark file {path}: {exc}") from exc
    try:
        return LandmarkSequence(
            clip_id=str(payload["clip_id"]),
            fps=float(payload["fps"]),
            frames=np.asarray(payload["frames"], dtype=np.float64),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: bad landmark payload: {exc}") from exc


def save_landmarks(seq: LandmarkSequence, path) -> None:
    payload = {
        "clip_id": seq.clip_id,
        "fps": seq.fps,
        "frames": [[[float(x), float(y)] for x, y in frame] for frame in seq.frames],
    }
    Path(path).write_text(json.dumps(payload) + "\n", "utf-8")


def save_feature_matrix(path, matrix, clip_ids, pivot, metrics, num_frames) -> None:
    """Write features as an LBTF tensor plus a `.json` sidecar.

    The sidecar records clip ids in row order and the extraction
    hyperparameters, so a matrix is self-describing.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != len(clip_ids):
        raise DataError(
            f"feature matrix shape {matrix.shape} does not match {len(clip_ids)} clip ids"
        )
    path = Path(path)
    write_tensor(matrix, path)
    sidecar = {
        "clip_ids": list(clip_ids),
        "pivot": int(pivot),
        "metrics": list(metrics),
        "num_frames": int(num_frames),
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", "utf-8")


def load_feature_matrix(path):
    """Read back (matrix, sidecar dict) written by save_feature_matrix."""
    path = Path(path)
    matrix = read_tensor(path)
    sidecar_path = Path(str(path) + ".json")
    try:
        sidecar = json.loads(sidecar_path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse feature sidecar {sidecar_path}: {exc}") from exc
    if matrix.ndim != 2 or len(sidecar.get("clip_ids", [])) != matrix.shape[0]:
        raise DataError(f"{path}: sidecar clip ids do not match matrix rows")
    return matrix, sidecar
