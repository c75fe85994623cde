"""Detector backends.

A detector maps one BGR frame to an (N, 2) float array of candidate
points in pixel coordinates (None when nothing is found) and raises
AmbiguousFaceError when more than one plausible subject appears. The
adapter then picks the configured 8 indices out of the candidate set.

`contour` is a dependency-free classical backend for lip-crop footage
(the mouth segmented by intensity, the 8 points read off the contour);
`mediapipe` wraps the face-mesh model and needs the optional mediapipe
package.
"""

import numpy as np

from .errors import AdapterError, AmbiguousFaceError

# canonical 8-point order produced by the contour backend
CONTOUR_INDEX_MAP = (0, 1, 2, 3, 4, 5, 6, 7)
# face-mesh indices for the same anatomical points
MEDIAPIPE_INDEX_MAP = (61, 291, 0, 17, 13, 14, 37, 267)

_MIN_AREA_FRAC = 0.002
_MAX_AREA_FRAC = 0.60
_AMBIGUITY_RATIO = 0.5


class ContourLipDetector:
    """Intensity-based mouth segmentation for lip-crop videos.

    The mouth is the largest dark connected component of the Otsu-inverted
    grayscale frame. Corners are the component's horizontal extremes,
    outer midpoints its vertical extremes at the center column, quarter
    points sit on the upper contour at the quarter columns, and the inner
    midpoints track the dark inter-lip run at the center column (falling
    back to a fixed fraction of the opening when no gap is visible).
    """

    default_index_map = CONTOUR_INDEX_MAP

    def __init__(self):
        import cv2

        self._cv2 = cv2

    def detect(self, frame_bgr):
        cv2 = self._cv2
        gray = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2GRAY)
        _, mask = cv2.threshold(gray, 0, 255, cv2.THRESH_BINARY_INV + cv2.THRESH_OTSU)
        n, labels, stats, _ = cv2.connectedComponentsWithStats((mask > 0).astype(np.uint8), 8)
        area = gray.shape[0] * gray.shape[1]
        candidates = [
            i
            for i in range(1, n)
            if _MIN_AREA_FRAC * area <= stats[i, cv2.CC_STAT_AREA] <= _MAX_AREA_FRAC * area
        ]
        if not candidates:
            return None
        candidates.sort(key=lambda i: -int(stats[i, cv2.CC_STAT_AREA]))
        if len(candidates) > 1:
            largest = stats[candidates[0], cv2.CC_STAT_AREA]
            runner = stats[candidates[1], cv2.CC_STAT_AREA]
            if runner >= _AMBIGUITY_RATIO * largest:
                raise AmbiguousFaceError(
                    f"{len(candidates)} similarly sized mouth candidates; subject is ambiguous"
                )
        comp = labels == candidates[0]
        return self._eight_points(gray, comp)

    def _eight_points(self, gray, comp):
        ys, xs = np.nonzero(comp)
        x_min, x_max = int(xs.min()), int(xs.max())
        cx = (x_min + x_max) // 2

        def column_span(x):
            col = np.nonzero(comp[:, x])[0]
            if col.size == 0:
                # fall back to the nearest occupied column
                occupied = np.unique(xs)
                x = int(occupied[np.argmin(np.abs(occupied - x))])
                col = np.nonzero(comp[:, x])[0]
            return x, int(col.min()), int(col.max())

        left_y = float(ys[xs == x_min].mean())
        right_y = float(ys[xs == x_max].mean())
        cxx, top_y, bottom_y = column_span(cx)
        inner_top, inner_bottom = self._inner_gap(gray, cxx, top_y, bottom_y)
        qlx, ql_top, _ = column_span(x_min + (x_max - x_min) // 4)
        qrx, qr_top, _ = column_span(x_min + (3 * (x_max - x_min)) // 4)
        return np.array(
            [
                [x_min, left_y],
                [x_max, right_y],
                [cxx, top_y],
                [cxx, bottom_y],
                [cxx, inner_top],
                [cxx, inner_bottom],
                [qlx, ql_top],
                [qrx, qr_top],
            ],
            dtype=np.float64,
        )

    @staticmethod
    def _inner_gap(gray, x, top_y, bottom_y):
        span = gray[top_y : bottom_y + 1, x].astype(np.float64)
        if span.size >= 4 and span.max() > span.min():
            thr = span.min() + 0.25 * (span.max() - span.min())
            dark = span <= thr
            best_len = best_start = 0
            run_start = None
            for i, d in enumerate(np.append(dark, False)):
                if d and run_start is None:
                    run_start = i
                elif not d and run_start is not None:
                    if i - run_start > best_len:
                        best_len = i - run_start
                        best_start = run_start
                    run_start = None
            if best_len >= 2:
                return float(top_y + best_start), float(top_y + best_start + best_len - 1)
        # no visible gap: a fixed fraction of the opening around the middle
        cy = (top_y + bottom_y) / 2.0
        return cy - 0.45 * (cy - top_y), cy + 0.45 * (bottom_y - cy)


class MediaPipeLipDetector:
    """Face-mesh backend (one face per frame, static-image mode)."""

    default_index_map = MEDIAPIPE_INDEX_MAP

    def __init__(self):
        try:
            import mediapipe as mp
        except ImportError:
            raise AdapterError(
                "the mediapipe detector needs the optional 'mediapipe' package "
                "(pip install 'lipident-adapter[mediapipe]'); "
                "use --detector contour for the built-in backend"
            ) from None
        self._mesh = mp.solutions.face_mesh.FaceMesh(
            static_image_mode=True, max_num_faces=2, refine_landmarks=False
        )

    def detect(self, frame_bgr):
        rgb = np.ascontiguousarray(frame_bgr[:, :, ::-1])
        result = self._mesh.process(rgb)
        faces = result.multi_face_landmarks or []
        if not faces:
            return None
        if len(faces) > 1:
            raise AmbiguousFaceError(f"{len(faces)} faces in frame; subject is ambiguous")
        h, w = frame_bgr.shape[:2]
        return np.array([[lm.x * w, lm.y * h] for lm in faces[0].landmark], dtype=np.float64)


DETECTORS = {
    "contour": ContourLipDetector,
    "mediapipe": MediaPipeLipDetector,
}


def build_detector(name: str):
    try:
        cls = DETECTORS[name]
    except KeyError:
        raise AdapterError(f"unknown detector {name!r}; choose from {sorted(DETECTORS)}") from None
    return cls()
