class AdapterError(Exception):
    """Base class for adapter failures."""


class VideoError(AdapterError):
    """The input video cannot be opened or decoded."""


class DetectionError(AdapterError):
    """No usable face/mouth where one is required (fatal on frame 1)."""


class AmbiguousFaceError(AdapterError):
    """More than one candidate face/mouth: the subject is ambiguous."""
