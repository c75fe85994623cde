"""Lip-movement identification toolkit.

Subpackages cover the non-neural parts of a lip-based identification
pipeline: dataset manifests and evaluation splits, landmark distance
features, an SMO-trained SVM with grid search, language-gated score
fusion (plus a simulator for it), evaluation reports, and the frame
preprocessing transforms with a portable tensor file format.
"""

__version__ = "0.1.0"

from .errors import DataError, LipidentError, NumericalError

__all__ = ["DataError", "LipidentError", "NumericalError", "__version__"]
