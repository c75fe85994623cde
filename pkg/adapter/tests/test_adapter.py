import json

import numpy as np
import pytest

from conftest import (
    make_blank_first_video,
    make_hole_video,
    make_static_video,
    make_talking_video,
    make_two_mouths_video,
)
from lipident_adapter import (
    AdapterConfig,
    AdapterError,
    AmbiguousFaceError,
    DetectionError,
    VideoError,
    extract_landmarks,
)
from lipident_adapter.cli import main as cli_main


def test_config_index_map_validation(tmp_path):
    with pytest.raises(AdapterError, match="8 distinct"):
        AdapterConfig(video_path="v", output_path="o", landmark_index_map=(0, 1, 2))
    with pytest.raises(AdapterError, match="8 distinct"):
        AdapterConfig(video_path="v", output_path="o", landmark_index_map=(0,) * 8)
    AdapterConfig(video_path="v", output_path="o", landmark_index_map=(7, 6, 5, 4, 3, 2, 1, 0))


def test_unreadable_video(tmp_path):
    config = AdapterConfig(video_path=str(tmp_path / "missing.avi"), output_path=str(tmp_path / "o.json"))
    with pytest.raises(VideoError):
        extract_landmarks(config)


def test_no_face_in_first_frame_is_fatal(tmp_path):
    video = tmp_path / "blank_first.avi"
    make_blank_first_video(video)
    config = AdapterConfig(video_path=str(video), output_path=str(tmp_path / "o.json"))
    with pytest.raises(DetectionError, match="frame 1"):
        extract_landmarks(config)


def test_multiple_mouths_ambiguous(tmp_path):
    video = tmp_path / "two.avi"
    make_two_mouths_video(video)
    config = AdapterConfig(video_path=str(video), output_path=str(tmp_path / "o.json"))
    with pytest.raises(AmbiguousFaceError):
        extract_landmarks(config)


def test_held_frames_inherit_previous_points(tmp_path):
    video = tmp_path / "hole.avi"
    n = make_hole_video(video, blank_at=4)
    out = tmp_path / "o.json"
    payload = extract_landmarks(AdapterConfig(video_path=str(video), output_path=str(out)))
    assert payload["held"] == [4]
    assert len(payload["frames"]) == n
    assert payload["frames"][4] == payload["frames"][3]


def test_static_video_near_constant_trajectories(tmp_path):
    video = tmp_path / "static.avi"
    make_static_video(video)
    payload = extract_landmarks(
        AdapterConfig(video_path=str(video), output_path=str(tmp_path / "o.json"))
    )
    frames = np.asarray(payload["frames"])
    displacement = np.abs(np.diff(frames, axis=0)).max()
    assert displacement < 0.05


def test_talking_video_has_motion(tmp_path):
    video = tmp_path / "talk.avi"
    make_talking_video(video)
    payload = extract_landmarks(
        AdapterConfig(video_path=str(video), output_path=str(tmp_path / "o.json"))
    )
    frames = np.asarray(payload["frames"])
    # outer bottom midpoint (index 3) follows the mouth opening
    spread = frames[:, 3, 1].max() - frames[:, 3, 1].min()
    assert spread > 0.1


def test_deterministic_output_bytes(tmp_path):
    video = tmp_path / "talk.avi"
    make_talking_video(video)
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    extract_landmarks(AdapterConfig(video_path=str(video), output_path=str(out_a)))
    extract_landmarks(AdapterConfig(video_path=str(video), output_path=str(out_b)))
    assert out_a.read_bytes() == out_b.read_bytes()


def test_clip_id_defaults_to_stem(tmp_path):
    video = tmp_path / "clip_0042.avi"
    make_static_video(video, n_frames=4)
    payload = extract_landmarks(
        AdapterConfig(video_path=str(video), output_path=str(tmp_path / "o.json"))
    )
    assert payload["clip_id"] == "clip_0042"
    payload = extract_landmarks(
        AdapterConfig(video_path=str(video), output_path=str(tmp_path / "o.json"), clip_id="xyz")
    )
    assert payload["clip_id"] == "xyz"


def test_index_map_reorders_points(tmp_path):
    video = tmp_path / "talk.avi"
    make_talking_video(video, n_frames=6)
    base = extract_landmarks(
        AdapterConfig(video_path=str(video), output_path=str(tmp_path / "a.json"))
    )
    swapped = extract_landmarks(
        AdapterConfig(
            video_path=str(video),
            output_path=str(tmp_path / "b.json"),
            landmark_index_map=(1, 0, 2, 3, 4, 5, 6, 7),
        )
    )
    a = np.asarray(base["frames"])
    b = np.asarray(swapped["frames"])
    # swapping detector indices swaps the corner columns (bbox is unchanged:
    # it is computed over the same point set)
    assert np.allclose(a[:, 0], b[:, 1])
    assert np.allclose(a[:, 1], b[:, 0])


def test_mediapipe_backend_unavailable_message(tmp_path):
    pytest.importorskip_reason = None
    try:
        import mediapipe  # noqa: F401

        pytest.skip("mediapipe installed; the guard path is not reachable")
    except ImportError:
        pass
    video = tmp_path / "talk.avi"
    make_talking_video(video, n_frames=4)
    config = AdapterConfig(
        video_path=str(video), output_path=str(tmp_path / "o.json"), detector="mediapipe"
    )
    with pytest.raises(AdapterError, match="mediapipe"):
        extract_landmarks(config)


def test_unknown_detector(tmp_path):
    config = AdapterConfig(video_path="v", output_path="o", detector="hough")
    with pytest.raises(AdapterError, match="unknown detector"):
        extract_landmarks(config)


def test_cli_success_and_exit_codes(tmp_path, capsys):
    video = tmp_path / "talk.avi"
    make_talking_video(video)
    out = tmp_path / "o.json"
    assert cli_main(["--video", str(video), "--output", str(out)]) == 0
    assert "landmarks written" in capsys.readouterr().out
    assert json.loads(out.read_text())["clip_id"] == "talk"
    # extraction failure -> 2
    assert cli_main(["--video", str(tmp_path / "nope.avi"), "--output", str(out)]) == 2
    # usage error -> 1
    with pytest.raises(SystemExit) as exc:
        cli_main(["--video", str(video)])
    assert exc.value.code == 1


def test_cli_index_map_file(tmp_path):
    video = tmp_path / "talk.avi"
    make_talking_video(video, n_frames=5)
    map_path = tmp_path / "map.json"
    map_path.write_text(json.dumps([7, 6, 5, 4, 3, 2, 1, 0]))
    out = tmp_path / "o.json"
    assert cli_main(["--video", str(video), "--output", str(out), "--index-map", str(map_path)]) == 0
    bad_map = tmp_path / "bad.json"
    bad_map.write_text(json.dumps([1, 2, 3]))
    assert cli_main(["--video", str(video), "--output", str(out), "--index-map", str(bad_map)]) == 2
