"""Numeric kernel selection.

The compiled extension (`._core`, built from `_core.pyx`) is preferred; the
pure-Python twin (`._pure`) is the fallback so the package works without a
compiler. Set HEADMIMIC_PURE=1 to force the fallback, e.g. for benchmarking.
"""

import os

from . import _pure

if os.environ.get("HEADMIMIC_PURE"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
rotation_between = _impl.rotation_between
rotvec_to_ypr_deg = _impl.rotvec_to_ypr_deg
rbf_predict = _impl.rbf_predict
smo_sweep = _impl.smo_sweep


def available_backends():
    """Name -> module for every kernel backend importable in this install."""
    impls = {"pure": _pure}
    try:
        from . import _core
        impls["compiled"] = _core
    except ImportError:
        pass
    return impls
