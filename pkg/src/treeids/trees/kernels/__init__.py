"""Split-scan kernels with a compiled core and a pure-Python fallback.

The compiled extension is picked at import time when present; set
``TREEIDS_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the backend-equivalence tests). Both backends are bit-identical in
their outputs, so the choice only affects speed.
"""

import os

if os.environ.get("TREEIDS_PURE_PYTHON") == "1":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

best_threshold_gini = _impl.best_threshold_gini
best_threshold_gain_ratio = _impl.best_threshold_gain_ratio
best_threshold_gain = _impl.best_threshold_gain
contingency = _impl.contingency

__all__ = [
    "BACKEND",
    "best_threshold_gini",
    "best_threshold_gain_ratio",
    "best_threshold_gain",
    "contingency",
]
