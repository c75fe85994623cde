"""Adapter acceptance: schema-valid output, 8 points per frame in the
unit square, frame count equal to the decoded frame count, and the file
consumable by the downstream landmark pipeline."""

import json

import numpy as np

from conftest import decoded_frame_count, make_talking_video
from lipident_adapter import AdapterConfig, extract_landmarks


def validate_landmark_schema(payload):
    assert isinstance(payload, dict)
    assert isinstance(payload["clip_id"], str) and payload["clip_id"]
    assert isinstance(payload["fps"], (int, float)) and payload["fps"] > 0
    frames = payload["frames"]
    assert isinstance(frames, list) and len(frames) >= 2
    for frame in frames:
        assert len(frame) == 8
        for point in frame:
            assert len(point) == 2
            x, y = point
            assert isinstance(x, (int, float)) and isinstance(y, (int, float))
            assert 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0


def test_criterion_11_adapter_contract(tmp_path):
    video = tmp_path / "sample.avi"
    written = make_talking_video(video, n_frames=30)
    out = tmp_path / "sample.json"
    payload = extract_landmarks(AdapterConfig(video_path=str(video), output_path=str(out)))

    # schema validity, both the returned payload and the file on disk
    validate_landmark_schema(payload)
    on_disk = json.loads(out.read_text())
    validate_landmark_schema(on_disk)
    assert on_disk == payload

    # exactly 8 points per frame in [0, 1]^2 (already schema-checked; make
    # the array-level claim explicit)
    arr = np.asarray(payload["frames"], dtype=np.float64)
    assert arr.shape == (len(payload["frames"]), 8, 2)
    assert (arr >= 0.0).all() and (arr <= 1.0).all()

    # frame count equals the decoded frame count
    decoded = decoded_frame_count(video)
    assert decoded == written
    assert len(payload["frames"]) == decoded

    # the emitted file is consumable through the downstream interface
    from lipident import geometry

    seq = geometry.load_landmarks(out)
    assert seq.num_frames == decoded
    fv = geometry.extract_features(seq, pivot=0, metrics=("euclidean",), num_frames=16)
    assert fv.values.shape == (16 * 7 * 1,)
    print(f"[acceptance] criterion 11 (adapter contract): PASS ({decoded} frames)")
