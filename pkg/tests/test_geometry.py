import json
import math

import numpy as np
import pytest

from lipident import geometry
from lipident.errors import DataError
from lipident.geometry import ZeroNormWarning


def random_seq(rng, clip_id="clip", n_frames=None, constant=False):
    n = n_frames or int(rng.integers(2, 40))
    if constant:
        frame = rng.random((8, 2))
        frames = np.repeat(frame[None], n, axis=0)
    else:
        frames = rng.random((n, 8, 2))
    return geometry.LandmarkSequence(clip_id=clip_id, fps=30.0, frames=frames)


def test_euclidean_examples():
    assert geometry.euclidean((0, 0), (3, 4)) == 5.0
    assert geometry.euclidean((0.2, 0.7), (0.2, 0.7)) == 0.0
    assert geometry.euclidean((1, 1), (4, 5)) == 5.0


def test_manhattan_examples():
    assert geometry.manhattan((0, 0), (3, 4)) == 7.0
    assert geometry.manhattan((0.31, -2.5), (0.31, -2.5)) == 0.0
    assert geometry.manhattan((-1, 0), (1, 0)) == 2.0


def test_cosine_examples():
    assert geometry.cosine_distance((1, 0), (0, 1)) == 1.0
    assert geometry.cosine_distance((1, 0), (2, 0)) == 0.0
    with pytest.warns(ZeroNormWarning):
        assert geometry.cosine_distance((0, 0), (1, 1)) == 1.0


def test_metric_nonfinite_rejected():
    for fn in (geometry.euclidean, geometry.manhattan, geometry.cosine_distance):
        with pytest.raises(DataError):
            fn((math.nan, 0), (1, 1))
        with pytest.raises(DataError):
            fn((0, 0), (math.inf, 1))


def test_metric_axioms_random():
    rng = np.random.default_rng(42)
    for _ in range(2000):
        p = tuple(rng.uniform(-5, 5, 2))
        q = tuple(rng.uniform(-5, 5, 2))
        r = tuple(rng.uniform(-5, 5, 2))
        for fn in (geometry.euclidean, geometry.manhattan):
            assert fn(p, q) >= 0
            assert fn(p, q) == fn(q, p)
            assert fn(p, p) == 0
            assert fn(p, q) <= fn(p, r) + fn(r, q) + 1e-12
        if p != q:
            assert geometry.euclidean(p, q) > 0
            assert geometry.manhattan(p, q) > 0
        c = geometry.cosine_distance(p, q)
        assert 0.0 - 1e-15 <= c <= 2.0 + 1e-15
        assert c == geometry.cosine_distance(q, p)


def test_translation_invariance_directions():
    rng = np.random.default_rng(7)
    for _ in range(300):
        p = rng.uniform(0.1, 1, 2)
        q = rng.uniform(0.1, 1, 2)
        t = rng.uniform(-2, 2, 2)
        assert geometry.euclidean(p + t, q + t) == pytest.approx(geometry.euclidean(p, q), abs=1e-12)
        assert geometry.manhattan(p + t, q + t) == pytest.approx(geometry.manhattan(p, q), abs=1e-12)
    # cosine on position vectors is NOT translation invariant
    p = np.array([1.0, 0.0])
    q = np.array([0.0, 1.0])
    t = np.array([3.0, 0.0])
    assert geometry.cosine_distance(p, q) != pytest.approx(geometry.cosine_distance(p + t, q + t), abs=1e-6)


def test_landmark_sequence_validation():
    with pytest.raises(DataError, match="shape"):
        geometry.LandmarkSequence(clip_id="c", fps=30, frames=np.zeros((5, 7, 2)))
    with pytest.raises(DataError, match="at least 2"):
        geometry.LandmarkSequence(clip_id="c", fps=30, frames=np.zeros((1, 8, 2)))
    with pytest.raises(DataError, match="non-finite"):
        frames = np.zeros((3, 8, 2))
        frames[1, 2, 0] = np.nan
        geometry.LandmarkSequence(clip_id="c", fps=30, frames=frames)


def test_resample_identity():
    rng = np.random.default_rng(1)
    seq = random_seq(rng, n_frames=17)
    out = geometry.resample_temporal(seq, 17)
    assert np.array_equal(out.frames, seq.frames)
    assert out.fps == seq.fps


def test_resample_midpoint():
    frames = np.zeros((2, 8, 2))
    frames[1, :, :] = 1.0
    seq = geometry.LandmarkSequence(clip_id="c", fps=30, frames=frames)
    out = geometry.resample_temporal(seq, 3)
    assert out.num_frames == 3
    assert np.array_equal(out.frames[0], frames[0])
    assert np.all(out.frames[1] == 0.5)
    assert np.array_equal(out.frames[2], frames[1])


def test_resample_constant_signal():
    rng = np.random.default_rng(3)
    seq = random_seq(rng, n_frames=600, constant=True)
    out = geometry.resample_temporal(seq, 250)
    for t in range(250):
        assert np.array_equal(out.frames[t], seq.frames[0])


def test_resample_fps_rescale():
    rng = np.random.default_rng(4)
    seq = random_seq(rng, n_frames=60)  # 2 s at 30 fps
    out = geometry.resample_temporal(seq, 250)
    assert out.fps == pytest.approx(250 / (60 / 30.0))


def test_resample_rejects_tiny_target():
    rng = np.random.default_rng(5)
    with pytest.raises(DataError):
        geometry.resample_temporal(random_seq(rng), 1)


def test_extract_features_lengths():
    rng = np.random.default_rng(6)
    seq = random_seq(rng, n_frames=30)
    fv = geometry.extract_features(seq, pivot=0, metrics=("euclidean",), num_frames=250)
    assert fv.values.shape == (1750,)
    fv = geometry.extract_features(seq, pivot=3, metrics=geometry.METRIC_ORDER, num_frames=250)
    assert fv.values.shape == (5250,)


def test_extract_features_property_lengths():
    rng = np.random.default_rng(8)
    subsets = [
        ("euclidean",), ("manhattan",), ("cosine",),
        ("euclidean", "manhattan"), ("euclidean", "cosine"),
        ("manhattan", "cosine"), geometry.METRIC_ORDER,
    ]
    for _ in range(120):
        seq = random_seq(rng)
        pivot = int(rng.integers(0, 8))
        metrics = subsets[int(rng.integers(len(subsets)))]
        T = int(rng.integers(2, 60))
        fv = geometry.extract_features(seq, pivot=pivot, metrics=metrics, num_frames=T)
        assert fv.values.shape == (T * 7 * len(metrics),)
        assert np.isfinite(fv.values).all()
        assert (fv.values >= 0).all()


def test_extract_features_layout_against_scalar_ops():
    rng = np.random.default_rng(9)
    seq = random_seq(rng, n_frames=5)
    pivot = 2
    fv = geometry.extract_features(seq, pivot=pivot, metrics=geometry.METRIC_ORDER, num_frames=5)
    others = [l for l in range(8) if l != pivot]
    pos = 0
    for t in range(5):
        for l in others:
            p = seq.frames[t, pivot]
            q = seq.frames[t, l]
            expected = [
                geometry.euclidean(p, q),
                geometry.manhattan(p, q),
                geometry.cosine_distance(p, q),
            ]
            for e in expected:
                assert fv.values[pos] == pytest.approx(e, abs=1e-12)
                pos += 1
    assert pos == fv.values.shape[0]


def test_extract_features_metric_order_canonical():
    rng = np.random.default_rng(10)
    seq = random_seq(rng, n_frames=4)
    a = geometry.extract_features(seq, metrics=("cosine", "euclidean"), num_frames=4)
    b = geometry.extract_features(seq, metrics=("euclidean", "cosine"), num_frames=4)
    assert a.metrics == b.metrics == ("euclidean", "cosine")
    assert np.array_equal(a.values, b.values)


def test_extract_features_all_identical_landmarks():
    frames = np.tile(np.array([0.25, 0.5]), (10, 8, 1))
    seq = geometry.LandmarkSequence(clip_id="c", fps=30, frames=frames)
    fv = geometry.extract_features(seq, pivot=0, metrics=("euclidean", "manhattan"), num_frames=10)
    assert fv.values.shape == (10 * 7 * 2,)
    assert np.all(fv.values == 0.0)


def test_extract_features_zero_norm_warns():
    frames = np.zeros((3, 8, 2))
    frames[:, 1:, :] = 0.5
    seq = geometry.LandmarkSequence(clip_id="c", fps=30, frames=frames)
    with pytest.warns(ZeroNormWarning):
        fv = geometry.extract_features(seq, pivot=0, metrics=("cosine",), num_frames=3)
    assert np.all(fv.values == 1.0)


def test_extract_features_bad_pivot():
    rng = np.random.default_rng(11)
    with pytest.raises(DataError, match="pivot"):
        geometry.extract_features(random_seq(rng), pivot=8)


def test_landmark_json_roundtrip(tmp_path):
    rng = np.random.default_rng(12)
    seq = random_seq(rng, clip_id="clip_x", n_frames=7)
    path = tmp_path / "clip_x.json"
    geometry.save_landmarks(seq, path)
    loaded = geometry.load_landmarks(path)
    assert loaded.clip_id == "clip_x"
    assert loaded.fps == seq.fps
    assert np.allclose(loaded.frames, seq.frames)
    payload = json.loads(path.read_text())
    assert set(payload) == {"clip_id", "fps", "frames"}
    assert len(payload["frames"][0]) == 8


def test_feature_matrix_roundtrip(tmp_path):
    rng = np.random.default_rng(13)
    matrix = rng.random((4, 21))
    path = tmp_path / "features.lbtf"
    geometry.save_feature_matrix(path, matrix, [f"c{i}" for i in range(4)], 0, ("euclidean",), 3)
    loaded, sidecar = geometry.load_feature_matrix(path)
    assert np.array_equal(loaded, matrix)
    assert sidecar["clip_ids"] == ["c0", "c1", "c2", "c3"]
    assert sidecar["pivot"] == 0
    assert sidecar["metrics"] == ["euclidean"]
    assert sidecar["num_frames"] == 3
