"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: DataError (and subclasses)
exit with 2, NumericalError with 3, argument problems with 1.
"""


class LipidentError(Exception):
    """Base class for all toolkit errors."""


class DataError(LipidentError):
    """Invalid input data: bad manifests, malformed files, broken invariants."""


class ManifestError(DataError):
    """Manifest fails schema or consistency validation."""


class TensorFormatError(DataError):
    """Tensor or image file is malformed."""


class NumericalError(LipidentError):
    """A numerical procedure failed (e.g. an optimizer did not converge)."""
