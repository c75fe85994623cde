from pathlib import Path

import numpy as np
import pytest

from lipident import dataset
from lipident._backend import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure compute only."""
    K = np.array([[1.0, 0.1], [0.1, 1.0]])
    y = np.array([-1.0, 1.0])
    kernels.smo_solve(K, y, 1.0, 1e-3, 10, 0)
    img = np.zeros((8, 8), np.uint8)
    img[2:6, 2:6] = 200
    kernels.sobel_mag(img)
    kernels.laplacian_abs(img)
    f = img.astype(np.float64)
    kernels.conv2d_replicate(f, np.full((5, 5), 0.04))
    gx, gy = kernels.sobel_gradients(f)
    sup = kernels.nms(np.sqrt(gx * gx + gy * gy), gx, gy)
    kernels.hysteresis(sup, 1.0, 2.0)
    frames = np.zeros((2, 8, 2))
    kernels.pivot_distances(frames, 0, True, True, True)


LIP_BASE = np.array(
    [
        [0.05, 0.50],  # left corner (pivot default)
        [0.95, 0.50],  # right corner
        [0.50, 0.15],  # outer top mid
        [0.50, 0.85],  # outer bottom mid
        [0.50, 0.35],  # inner top mid
        [0.50, 0.65],  # inner bottom mid
        [0.27, 0.30],  # left outer quarter
        [0.73, 0.30],  # right outer quarter
    ]
)


def synth_dataset(root, n_languages=3, subjects_per_language=6, n_frames=60, seed=0):
    """Write a manifest plus landmark JSONs with subject-coded motion.

    Each subject moves the mouth with its own frequency/amplitude pair so
    identities are separable from the distance features; the language
    modulates the horizontal spread. Returns the manifest path.
    """
    from lipident import geometry

    manifest = build_manifest(n_languages, subjects_per_language)
    root = Path(root)
    (root / "landmarks").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    subjects = manifest.subjects()
    for rec in manifest.records:
        s = subjects.index(rec.subject_id)
        freq = 1 + (s % 6)
        amp = 0.02 + 0.012 * (s // 6)
        lang_amp = 0.01 * (int(rec.language) + 1)
        t = np.arange(n_frames) / n_frames
        frames = np.tile(LIP_BASE, (n_frames, 1, 1))
        opening = amp * np.sin(2 * np.pi * freq * t)[:, None]
        frames[:, [2, 4], 1] -= opening  # upper lip rises
        frames[:, [3, 5], 1] += opening  # lower lip drops
        spread = lang_amp * np.sin(2 * np.pi * 2 * freq * t)[:, None]
        frames[:, [0, 6], 0] -= spread
        frames[:, [1, 7], 0] += spread
        frames += rng.normal(0, 0.002, frames.shape)
        frames = np.clip(frames, 0.0, 1.0)
        seq = geometry.LandmarkSequence(clip_id=rec.clip_id, fps=rec.fps, frames=frames)
        geometry.save_landmarks(seq, root / rec.landmark_path)
    manifest_path = root / "manifest.json"
    dataset.save_manifest(manifest, manifest_path)
    return manifest_path


def build_manifest(n_languages=8, subjects_per_language=32, clips_per_subject=5, strict=True):
    """Synthetic manifest in the canonical five-clips-per-subject shape."""
    records = []
    languages = [dataset.Language(i) for i in range(n_languages)]
    genders = [dataset.Gender.M, dataset.Gender.F]
    bands = [dataset.AgeBand.U30, dataset.AgeBand.O30]
    s = 0
    for lang in languages:
        for _ in range(subjects_per_language):
            sid = f"subj{s:04d}"
            for c in range(1, clips_per_subject + 1):
                records.append(
                    dataset.ClipRecord(
                        clip_id=f"{sid}_c{c}",
                        subject_id=sid,
                        language=lang,
                        gender=genders[s % 2],
                        age_band=bands[(s // 2) % 2],
                        clip_index=c,
                        fps=25.0 + (s % 36),
                        landmark_path=f"landmarks/{sid}_c{c}.json",
                    )
                )
            s += 1
    return dataset.DatasetManifest(records=tuple(records), strict=strict)
