"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``COGSEQ_PURE=1`` to force the pure kernel (useful for timing comparisons
and for debugging); both kernels produce identical outputs by contract.
"""

from __future__ import annotations

import os

from . import _search

if os.environ.get("COGSEQ_PURE", "").strip() not in ("", "0"):
    _kernel_module = _search
else:
    try:
        from . import _kernel as _kernel_module  # type: ignore[no-redef]
    except ImportError:
        _kernel_module = _search

#: Name of the active kernel: "compiled" or "pure".
KERNEL_NAME: str = _kernel_module.KERNEL_NAME

#: Active search kernel (see cogseq._search.search for the contract).
search = _kernel_module.search

#: Pure kernel, always available; used for n > 64 and for parity checks.
pure_search = _search.search
