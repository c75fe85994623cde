"""Hot-kernel backend selection.

The numeric inner loops (SMO sweeps, pivot-distance batches, the edge
filters) exist in two variants: numba-compiled (`kernels_nb`) and pure
numpy (`kernels_np`). Both run the same arithmetic in the same order, so
their outputs agree bit for bit; the numba variant is just faster.

The variant is picked once at import time from the LIPIDENT_BACKEND
environment variable: "numba" (default) or "numpy". If numba cannot be
imported the numpy fallback is used with a warning. `benchmarks/
bench_backends.py` times the two side by side.
"""

import os
import warnings

BACKEND: str
_requested = os.environ.get("LIPIDENT_BACKEND", "numba").strip().lower()

if _requested not in ("numba", "numpy"):
    raise ValueError(
        f"LIPIDENT_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numba":
    try:
        from . import kernels_nb as kernels

        BACKEND = "numba"
    except ImportError as exc:  # pragma: no cover - depends on environment
        warnings.warn(
            f"numba backend unavailable ({exc}); falling back to numpy kernels",
            RuntimeWarning,
            stacklevel=2,
        )
        from . import kernels_np as kernels

        BACKEND = "numpy"
else:
    from . import kernels_np as kernels

    BACKEND = "numpy"

__all__ = ["BACKEND", "kernels"]
