"""Turns a source video into the canonical 8-point lip landmark JSON.

The eight points, in the fixed documented order (index 0 is the default
pivot downstream):

    0 left mouth corner          4 inner top midpoint
    1 right mouth corner         5 inner bottom midpoint
    2 outer top midpoint         6 left outer quarter point
    3 outer bottom midpoint      7 right outer quarter point

Coordinates are normalized to the clip's lip-crop bounding box. Frames
where detection fails inherit the previous frame's points and are listed
under the output's "held" key; a failure on the very first frame is fatal.
"""

__version__ = "0.1.0"

from .adapter import AdapterConfig, extract_landmarks
from .errors import AdapterError, AmbiguousFaceError, DetectionError, VideoError

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "AmbiguousFaceError",
    "DetectionError",
    "VideoError",
    "extract_landmarks",
    "__version__",
]
