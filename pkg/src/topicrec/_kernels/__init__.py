"""Kernel selection: compiled extension when available, Python otherwise.

Both backends are bit-identical (same RNG streams, same float ops), so
the choice affects speed only.  Set TOPICREC_KERNEL=python or =cython to
force one explicitly.
"""

from __future__ import annotations

import os

from . import _gibbs_py

try:
    from . import _gibbs as _gibbs_ext
except ImportError:
    _gibbs_ext = None


def available_backends() -> dict:
    """Name -> run_sweeps callable for every importable backend."""
    backends = {"python": _gibbs_py.run_sweeps}
    if _gibbs_ext is not None:
        backends["cython"] = _gibbs_ext.run_sweeps
    return backends


_forced = os.environ.get("TOPICREC_KERNEL")
if _forced is not None and _forced not in ("python", "cython"):
    raise ImportError(f"TOPICREC_KERNEL must be 'python' or 'cython', got {_forced!r}")
if _forced == "cython" and _gibbs_ext is None:
    raise ImportError("TOPICREC_KERNEL=cython but the compiled kernel did not build")

if _forced == "python" or _gibbs_ext is None:
    ACTIVE_BACKEND = "python"
else:
    ACTIVE_BACKEND = "cython"

run_sweeps = available_backends()[ACTIVE_BACKEND]
