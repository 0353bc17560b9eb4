"""Backend selection for the grid-scan kernel.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over. Setting ``MINEKRIGE_PURE_PYTHON=1`` forces the
fallback.
"""

import os

from . import _kernel_py

_BACKENDS = {"python": _kernel_py.scan_row}

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None
else:
    _BACKENDS["cython"] = _kernel.scan_row

if _kernel is not None and os.environ.get("MINEKRIGE_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"


def available_backends():
    return sorted(_BACKENDS)


def get_scan_row(backend=None):
    name = BACKEND if backend is None else backend
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available (have {available_backends()})") from None
