"""Kernel selection: the compiled extension when importable, else numpy.

Set ``SERVICERULE_BACKEND=python`` to force the numpy kernels.
"""

from __future__ import annotations

import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None


def available() -> list[str]:
    return [m.NAME for m in (_compiled, _fallback) if m is not None]


def get(name: str | None = None):
    """Return the kernel module called ``name`` (``"cython"`` or ``"python"``)."""
    if name is None:
        return kernels
    if name == _fallback.NAME:
        return _fallback
    if name == "cython" and _compiled is not None:
        return _compiled
    raise ValueError(f"kernel backend {name!r} is not available (have {available()})")


if os.environ.get("SERVICERULE_BACKEND", "").lower() == "python" or _compiled is None:
    kernels = _fallback
else:
    kernels = _compiled

BACKEND = kernels.NAME
