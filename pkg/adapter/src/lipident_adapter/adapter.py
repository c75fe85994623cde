"""Video decoding, per-frame detection and landmark JSON emission."""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detectors import build_detector
from .errors import AdapterError, DetectionError, VideoError

BBOX_MARGIN = 0.05
FALLBACK_FPS = 25.0


@dataclass(frozen=True)
class AdapterConfig:
    """One extraction run: input video, output JSON, detector choice.

    landmark_index_map picks the 8 detector points, in the documented
    order (left corner, right corner, outer top/bottom midpoints, inner
    top/bottom midpoints, left/right outer quarter points); None uses the
    detector's default map.
    """

    video_path: str
    output_path: str
    detector: str = "contour"
    landmark_index_map: tuple[int, ...] | None = None
    clip_id: str | None = None
    bbox_margin: float = BBOX_MARGIN

    def __post_init__(self):
        if self.landmark_index_map is not None:
            idx = tuple(int(i) for i in self.landmark_index_map)
            if len(idx) != 8 or len(set(idx)) != 8:
                raise AdapterError(
                    f"landmark_index_map needs exactly 8 distinct indices, got {self.landmark_index_map}"
                )
            object.__setattr__(self, "landmark_index_map", idx)
        if not 0.0 <= self.bbox_margin < 0.5:
            raise AdapterError(f"bbox_margin must be in [0, 0.5), got {self.bbox_margin}")


def decode_frames(video_path):
    """All frames of a video (BGR) plus its frame rate."""
    import cv2

    path = Path(video_path)
    if not path.exists():
        raise VideoError(f"video not found: {path}")
    cap = cv2.VideoCapture(str(path))
    if not cap.isOpened():
        raise VideoError(f"cannot open video: {path}")
    fps = float(cap.get(cv2.CAP_PROP_FPS))
    if not fps > 0:
        fps = FALLBACK_FPS
    frames = []
    while True:
        ok, frame = cap.read()
        if not ok:
            break
        frames.append(frame)
    cap.release()
    if not frames:
        raise VideoError(f"no frames decoded from {path}")
    return frames, fps


def extract_landmarks(config: AdapterConfig) -> dict:
    """Run the detector over every frame and write the landmark JSON.

    Returns the emitted payload. Detection failures after the first frame
    hold the previous frame's points (indices recorded under "held");
    failure on frame one is fatal because there is nothing to hold.
    """
    detector = build_detector(config.detector)
    index_map = config.landmark_index_map or tuple(detector.default_index_map)
    if len(index_map) != 8 or len(set(index_map)) != 8:
        raise AdapterError("detector default index map is not 8 distinct points")
    frames, fps = decode_frames(config.video_path)

    raw = np.empty((len(frames), 8, 2), dtype=np.float64)
    held = []
    for i, frame in enumerate(frames):
        points = detector.detect(frame)
        if points is None:
            if i == 0:
                raise DetectionError(f"no face detected in frame 1 of {config.video_path}")
            raw[i] = raw[i - 1]
            held.append(i)
            continue
        if max(index_map) >= points.shape[0]:
            raise AdapterError(
                f"index map {index_map} exceeds the detector's {points.shape[0]} points"
            )
        raw[i] = points[list(index_map)]

    normalized = _normalize_to_clip_bbox(raw, config.bbox_margin)
    clip_id = config.clip_id or Path(config.video_path).stem
    payload = {
        "clip_id": clip_id,
        "fps": fps,
        "frames": [[[float(x), float(y)] for x, y in frame] for frame in normalized],
        "held": held,
    }
    out = Path(config.output_path)
    if out.parent:
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload) + "\n", "utf-8")
    return payload


def _normalize_to_clip_bbox(raw, margin):
    """Map raw pixel points into the clip-wide padded lip bounding box."""
    lo = raw.reshape(-1, 2).min(axis=0)
    hi = raw.reshape(-1, 2).max(axis=0)
    size = hi - lo
    size = np.where(size <= 0, 1.0, size)
    lo = lo - margin * size
    size = size * (1.0 + 2.0 * margin)
    out = (raw - lo) / size
    return np.clip(out, 0.0, 1.0)
